use std::collections::BTreeMap;

use serde_json::{json, Value};
use tanglie_core::expr::{is_lifted_expr, parse_base_expr, parse_lifted_expr};
use tanglie_core::geometry::{classify_field, equivariance_defect};
use tanglie_core::problem::{rows, BracketEntry, LiftInfo, ProblemFile, SCHEMA};
use tanglie_core::symplectic::{
    is_symplectic, lift_symplectic, pattern_tag, verify_closedness_identities,
};
use tanglie_core::tangent::{
    bi_invariance_of_lift, lift_automorphism, lifted_connection_closed_form,
    lifted_connection_structure_constants, lifted_curvature, lifted_sectional,
    operator_curvature_report, unnormalized_lift, CurvatureBlock, INDEX_CONVENTION,
};
use tanglie_core::{CurvatureTensor, LieAlgebra, MetricLieAlgebra, TangentLieAlgebra};

use crate::report::{Item, Report};
use crate::{resolve_input, Cli, Command, Input, InputError, Method, MetricPair, Output};

const BASE_CONVENTION: &str = "indices follow the input basis order";

pub fn execute(cli: &Cli, echo: String) -> Result<Output, InputError> {
    let file = match &cli.command {
        Command::Check { file, .. }
        | Command::Connection { file, .. }
        | Command::Curvature { file, .. }
        | Command::Sectional { file, .. }
        | Command::Lift { file, .. }
        | Command::Field { file, .. }
        | Command::Equiv { file, .. }
        | Command::Symplectic { file, .. } => file,
    };
    let input = resolve_input(file)?;
    let mut r = Report::new(echo, input.source.clone(), input.digest.clone(), cli.tol);
    match &cli.command {
        Command::Check { pair, .. } => check(&input, pair, &mut r)?,
        Command::Connection {
            metric,
            method,
            pair,
            ..
        } => connection(&input, metric, *method, pair, &mut r)?,
        Command::Curvature {
            metric,
            compare,
            pair,
            ..
        } => curvature(&input, metric, *compare, pair, &mut r)?,
        Command::Sectional { plane, pair, .. } => sectional(&input, plane, pair, &mut r)?,
        Command::Lift { output, pair, .. } => return lift(&input, output.as_deref(), pair, r),
        Command::Field { vector, pair, .. } => field(&input, vector, pair, &mut r)?,
        Command::Equiv {
            tau, tau2, pair, ..
        } => equiv(&input, tau, tau2.as_deref(), pair, &mut r)?,
        Command::Symplectic { w1, w2, pair, .. } => symplectic(&input, w1, w2, pair, &mut r)?,
    }
    Ok(Output::Report(r))
}

fn tangent(input: &Input, pair: &MetricPair) -> Result<TangentLieAlgebra, InputError> {
    let p = &input.problem;
    Ok(TangentLieAlgebra::build(
        &p.algebra,
        p.metric(&pair.g1)?,
        p.metric(&pair.g2)?,
    )?)
}

fn base_geometry(input: &Input, name: &str) -> Result<MetricLieAlgebra, InputError> {
    let p = &input.problem;
    Ok(MetricLieAlgebra::new(
        p.algebra.clone(),
        p.metric(name)?.clone(),
    )?)
}

fn put_frame(t: &TangentLieAlgebra, r: &mut Report) {
    r.put("lambdas", Item::Vector(t.lambdas().to_vec()));
    r.put("frame", Item::matrix(t.phi().b1.matrix()));
    r.put("frame_labels", Item::Labels(t.base().labels().to_vec()));
}

fn curvature_checks(prefix: &str, curv: &CurvatureTensor, m: &MetricLieAlgebra, r: &mut Report) {
    r.check_residual(&format!("{prefix}antisymmetry"), curv.antisymmetry_defect());
    r.check_residual(&format!("{prefix}bianchi"), curv.bianchi_defect());
    r.check_residual(
        &format!("{prefix}pair_symmetry"),
        curv.pair_symmetry_defect(m.metric()),
    );
}

fn check(input: &Input, pair: &MetricPair, r: &mut Report) -> Result<(), InputError> {
    let p = &input.problem;
    let a = &p.algebra;
    r.put("name", Item::Text(p.name().to_string()));
    r.put("dim", Item::Count(a.dim()));
    r.put("basis", Item::Labels(a.labels().to_vec()));
    r.check_residual("jacobi", a.jacobi_defect());

    let mut table = Vec::new();
    for (name, g) in &p.metrics {
        let m = MetricLieAlgebra::new(a.clone(), g.clone())?;
        r.check_flag(&format!("spd[{name}]"), true);
        let bi = m.bi_invariance_defect();
        let canon = m.canonical_metricity_defect();
        let dbl = m.double_bracket_defect();
        r.residual(&format!("bi_invariance[{name}]"), bi);
        r.residual(&format!("canonical_metricity[{name}]"), canon);
        r.residual(&format!("double_bracket[{name}]"), dbl);
        table.push(vec![
            json!(name),
            json!(bi <= r.tolerance),
            json!(bi),
            json!(canon),
            json!(dbl),
        ]);
    }
    r.put(
        "metrics",
        Item::Table {
            headers: [
                "metric",
                "bi_invariant",
                "bi_invariance",
                "canonical_metricity",
                "double_bracket",
            ]
            .map(String::from)
            .to_vec(),
            rows: table,
        },
    );

    if p.metrics.contains_key(&pair.g1) && p.metrics.contains_key(&pair.g2) {
        let t = tangent(input, pair)?;
        put_frame(&t, r);
        let lifted = t.lifted_geometry();
        r.check_residual("lift.jacobi", t.lifted().jacobi_defect());
        let oracle = lifted.levi_civita();
        let c1 = t.frame_geometry1().levi_civita();
        let c2 = t.frame_geometry2().levi_civita();
        r.check_residual(
            "lift.connection.closed_vs_koszul",
            oracle.max_abs_diff(&lifted_connection_closed_form(&t, &c1, &c2)),
        );
        r.check_residual(
            "lift.connection.structconst_vs_koszul",
            oracle.max_abs_diff(&lifted_connection_structure_constants(&t)),
        );
        let lc = lifted_curvature(&t);
        curvature_checks("lift.curvature.", &lc.tensor, &lifted, r);
        let b = bi_invariance_of_lift(&t, r.tolerance);
        r.put("lift_bi_invariant", Item::Flag(b.lift_satisfies_oneill));
        r.put("g1_bi_invariant", Item::Flag(b.g1_biinv));
        r.put(
            "g2_annihilates_double_brackets",
            Item::Flag(b.g2_double_bracket),
        );
        r.residual("lift.bi_invariance", b.lift_defect);
        r.check_flag("lift.bi_invariance_implication", b.implication_holds);
    }
    Ok(())
}

fn connection(
    input: &Input,
    metric: &str,
    method: Method,
    pair: &MetricPair,
    r: &mut Report,
) -> Result<(), InputError> {
    if metric == "lift" {
        let t = tangent(input, pair)?;
        put_frame(&t, r);
        let lifted = t.lifted_geometry();
        let oracle = lifted.levi_civita();
        let c1 = t.frame_geometry1().levi_civita();
        let c2 = t.frame_geometry2().levi_civita();
        let closed = lifted_connection_closed_form(&t, &c1, &c2);
        let sc = lifted_connection_structure_constants(&t);
        let chosen = match method {
            Method::Koszul => &oracle,
            Method::Closed => &closed,
            Method::Structconst => &sc,
        };
        r.put("method", Item::Text(format!("{method:?}").to_lowercase()));
        r.put(
            "christoffel",
            Item::tensor3(chosen.tensor(), t.lifted().labels(), INDEX_CONVENTION),
        );
        r.check_residual("torsion", chosen.torsion_defect(t.lifted()));
        r.check_residual("metricity", chosen.metricity_defect(t.lifted_metric()));
        r.check_residual("closed_vs_koszul", oracle.max_abs_diff(&closed));
        r.check_residual("structconst_vs_koszul", oracle.max_abs_diff(&sc));
    } else {
        if method != Method::Koszul {
            return Err(InputError(format!(
                "--method {} applies to --metric lift only",
                format!("{method:?}").to_lowercase()
            )));
        }
        let m = base_geometry(input, metric)?;
        let c = m.levi_civita();
        r.put("method", Item::Text("koszul".into()));
        r.put(
            "christoffel",
            Item::tensor3(c.tensor(), m.algebra().labels(), BASE_CONVENTION),
        );
        r.check_residual("torsion", c.torsion_defect(m.algebra()));
        r.check_residual("metricity", c.metricity_defect(m.metric()));
    }
    Ok(())
}

fn curvature(
    input: &Input,
    metric: &str,
    compare: bool,
    pair: &MetricPair,
    r: &mut Report,
) -> Result<(), InputError> {
    if metric == "lift" {
        let t = tangent(input, pair)?;
        put_frame(&t, r);
        let lc = lifted_curvature(&t);
        r.put(
            "curvature",
            Item::tensor4(lc.tensor.tensor(), t.lifted().labels(), INDEX_CONVENTION),
        );
        curvature_checks("", &lc.tensor, &t.lifted_geometry(), r);
        if compare {
            let rows = lc
                .blocks
                .iter()
                .map(|d| {
                    vec![
                        json!(d.block.tag()),
                        json!(d.as_printed),
                        json!(d.corrected),
                    ]
                })
                .collect();
            r.put(
                "block_deviation",
                Item::Table {
                    headers: ["block", "as_printed", "corrected"]
                        .map(String::from)
                        .to_vec(),
                    rows,
                },
            );
            for d in &lc.blocks {
                let tag = d.block.tag();
                match d.block {
                    CurvatureBlock::VerticalVerticalComplete
                    | CurvatureBlock::VerticalCompleteVertical => {
                        r.residual(&format!("block[{tag}].as_printed"), d.as_printed);
                        r.check_residual(&format!("block[{tag}].corrected"), d.corrected);
                    }
                    _ => r.check_residual(&format!("block[{tag}]"), d.as_printed),
                }
            }
            let op = operator_curvature_report(&t, &lc.tensor);
            let rows = op
                .items
                .iter()
                .map(|(it, d)| vec![json!(it.tag()), d.map(|x| json!(x)).unwrap_or(Value::Null)])
                .collect();
            r.put(
                "operator_deviation",
                Item::Table {
                    headers: ["identity", "deviation"].map(String::from).to_vec(),
                    rows,
                },
            );
            for (it, d) in &op.items {
                if let Some(d) = d {
                    r.check_residual(&format!("operator[{}]", it.tag()), *d);
                }
            }
        }
    } else {
        if compare {
            return Err(InputError("--compare applies to --metric lift only".into()));
        }
        let m = base_geometry(input, metric)?;
        let curv = m.curvature(&m.levi_civita());
        r.put(
            "curvature",
            Item::tensor4(curv.tensor(), m.algebra().labels(), BASE_CONVENTION),
        );
        curvature_checks("", &curv, &m, r);
    }
    Ok(())
}

fn split_plane(plane: &str) -> Result<(&str, &str), InputError> {
    let parts: Vec<&str> = plane.split(',').collect();
    if parts.len() != 2 {
        return Err(InputError(format!(
            "--plane needs two comma-separated expressions, got {}",
            parts.len()
        )));
    }
    Ok((parts[0].trim(), parts[1].trim()))
}

fn sectional(
    input: &Input,
    plane: &str,
    pair: &MetricPair,
    r: &mut Report,
) -> Result<(), InputError> {
    let (a, b) = split_plane(plane)?;
    r.put("plane", Item::Labels(vec![a.to_string(), b.to_string()]));
    match (is_lifted_expr(a), is_lifted_expr(b)) {
        (true, true) => {
            let t = tangent(input, pair)?;
            let u =
                parse_lifted_expr(&t, a).map_err(|e| InputError(format!("first vector: {e}")))?;
            let v =
                parse_lifted_expr(&t, b).map_err(|e| InputError(format!("second vector: {e}")))?;
            let lc = lifted_curvature(&t);
            let k = lifted_sectional(&t, &lc.tensor, &u, &v)?;
            r.put("sectional", Item::Scalar(k));
            r.check_residual(
                "curvature.pair_symmetry",
                lc.tensor.pair_symmetry_defect(t.lifted_metric()),
            );
        }
        (false, false) => {
            let labels = input.problem.algebra.labels();
            let x =
                parse_base_expr(labels, a).map_err(|e| InputError(format!("first vector: {e}")))?;
            let y = parse_base_expr(labels, b)
                .map_err(|e| InputError(format!("second vector: {e}")))?;
            for name in [&pair.g1, &pair.g2] {
                let m = base_geometry(input, name)?;
                let curv = m.curvature(&m.levi_civita());
                r.put(
                    &format!("sectional[{name}]"),
                    Item::Scalar(m.sectional(&curv, &x, &y)?),
                );
            }
        }
        _ => {
            return Err(InputError(
                "--plane mixes lifted and base expressions".into(),
            ))
        }
    }
    Ok(())
}

/// The tangent algebra as a problem file on the lifted frame, with metric `g = I`.
pub fn lifted_problem(name: &str, t: &TangentLieAlgebra) -> ProblemFile {
    let lifted = t.lifted();
    let n2 = lifted.dim();
    let mut brackets = Vec::new();
    for i in 0..n2 {
        for j in i + 1..n2 {
            for k in 0..n2 {
                let v = lifted.c(i, j, k);
                if v != 0.0 {
                    brackets.push(BracketEntry { i, j, k, value: v });
                }
            }
        }
    }
    let mut metrics = BTreeMap::new();
    metrics.insert("g".to_string(), rows(t.lifted_metric().matrix()));
    ProblemFile {
        schema: SCHEMA.to_string(),
        name: format!("{name}_lift"),
        dim: n2,
        basis: lifted.labels().to_vec(),
        brackets,
        metrics,
        symplectic: BTreeMap::new(),
        automorphisms: BTreeMap::new(),
        lift: Some(LiftInfo {
            index_convention: INDEX_CONVENTION.to_string(),
            lambdas: t.lambdas().to_vec(),
            frame: rows(t.phi().b1.matrix()),
            base_name: name.to_string(),
        }),
    }
}

fn lift(
    input: &Input,
    output: Option<&str>,
    pair: &MetricPair,
    mut r: Report,
) -> Result<Output, InputError> {
    let t = tangent(input, pair)?;
    let doc = lifted_problem(input.problem.name(), &t);
    let text = doc.to_json();
    r.check_residual("lift.jacobi", t.lifted().jacobi_defect());
    // the emitted document must itself validate
    let reloaded = ProblemFile::from_json(&text)?.validate()?;
    let g = reloaded.metric("g")?.clone();
    let back = MetricLieAlgebra::new(reloaded.algebra, g)?;
    r.check_residual(
        "round_trip.connection",
        back.levi_civita()
            .max_abs_diff(&t.lifted_geometry().levi_civita()),
    );
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| InputError(format!("cannot write {path}: {e}")))?;
            r.put("written", Item::Text(path.to_string()));
            r.put("dim", Item::Count(doc.dim));
            put_frame(&t, &mut r);
            Ok(Output::Report(r))
        }
        None => Ok(Output::Document { text, report: r }),
    }
}

fn field(input: &Input, vector: &str, pair: &MetricPair, r: &mut Report) -> Result<(), InputError> {
    r.put("vector", Item::Text(vector.to_string()));
    if is_lifted_expr(vector) {
        let t = tangent(input, pair)?;
        let u = parse_lifted_expr(&t, vector)?;
        let m = t.lifted_geometry();
        let fit = m.conformal_fit(u.coeffs())?;
        let killing = fit.is_killing(r.tolerance);
        r.put("killing", Item::Flag(killing));
        r.put("conformal", Item::Flag(fit.is_conformal(r.tolerance)));
        r.put("conformal_factor", Item::Scalar(fit.rho));
        r.put("lie_derivative_norm", Item::Scalar(fit.lie_derivative_norm));
        r.put(
            "conformal_relative_residual",
            Item::Scalar(fit.relative_residual),
        );
        let lc = m.levi_civita();
        r.put(
            "geodesic",
            Item::Flag(m.is_geodesic_vector(&lc, u.coeffs(), r.tolerance)?),
        );
        r.put(
            "central",
            Item::Flag(t.lifted().is_central(u.coeffs(), r.tolerance)),
        );
        let (complete, vertical) = u.decompose(&t);
        if complete.amax() == 0.0 {
            let central = input.problem.algebra.is_central(&vertical, r.tolerance);
            r.put("base_central", Item::Flag(central));
            r.check_flag("vertical_killing_iff_central", killing == central);
        }
    } else {
        let a = &input.problem.algebra;
        let x = parse_base_expr(a.labels(), vector)?;
        let m1 = base_geometry(input, &pair.g1)?;
        let m2 = base_geometry(input, &pair.g2)?;
        let c = classify_field(&m1, &m2, &x, r.tolerance)?;
        let rows = [
            (&pair.g1, &m1, c.killing1, c.conformal1, c.conformal_factor1),
            (&pair.g2, &m2, c.killing2, c.conformal2, c.conformal_factor2),
        ]
        .into_iter()
        .map(|(name, m, k, conf, rho)| {
            let geo = m.is_geodesic_vector(&m.levi_civita(), &x, r.tolerance)?;
            Ok(vec![
                json!(name),
                json!(k),
                json!(conf),
                json!(rho),
                json!(geo),
            ])
        })
        .collect::<Result<Vec<_>, InputError>>()?;
        r.put(
            "classification",
            Item::Table {
                headers: [
                    "metric",
                    "killing",
                    "conformal",
                    "conformal_factor",
                    "geodesic",
                ]
                .map(String::from)
                .to_vec(),
                rows,
            },
        );
        r.put("central", Item::Flag(c.in_center));
    }
    Ok(())
}

fn equiv(
    input: &Input,
    tau_name: &str,
    tau2_name: Option<&str>,
    pair: &MetricPair,
    r: &mut Report,
) -> Result<(), InputError> {
    let p = &input.problem;
    let a: &LieAlgebra = &p.algebra;
    let tau = p.automorphism(tau_name)?;
    r.put("tau", Item::matrix(tau.matrix()));
    r.check_residual(
        &format!("automorphism[{tau_name}]"),
        a.automorphism_defect(tau),
    );
    for name in [&pair.g1, &pair.g2] {
        let g = p.metric(name)?;
        let m = MetricLieAlgebra::new(a.clone(), g.clone())?;
        let mp = MetricLieAlgebra::new(a.clone(), g.pullback(tau)?)?;
        let d = equivariance_defect(&m, &mp, tau)?;
        r.check_residual(&format!("{name}.connection"), d.connection);
        r.check_residual(&format!("{name}.curvature"), d.curvature);
        r.check_residual(&format!("{name}.sectional"), d.sectional);
    }
    if let Some(t2_name) = tau2_name {
        let tau2 = p.automorphism(t2_name)?;
        r.put("tau2", Item::matrix(tau2.matrix()));
        r.check_residual(
            &format!("automorphism[{t2_name}]"),
            a.automorphism_defect(tau2),
        );
        let g1 = p.metric(&pair.g1)?;
        let g2 = p.metric(&pair.g2)?;
        let big = lift_automorphism(tau, tau2)?;
        let lifted = unnormalized_lift(a, g1, g2)?;
        let pulled = unnormalized_lift(a, &g1.pullback(tau)?, &g2.pullback(tau2)?)?;
        let gap = (lifted.metric().pullback(&big)?.matrix() - pulled.metric().matrix()).amax();
        r.check_residual("lift.pullback_identity", gap);
        // blockdiag(tau2, tau) preserves the lifted bracket only when
        // tau2[X,Y] = [tau X, tau2 Y]; report that and gate the lifted equivariance on it
        let auto = lifted.algebra().automorphism_defect(&big);
        r.residual("lift.automorphism", auto);
        r.put("lift_automorphism", Item::Flag(auto <= r.tolerance));
        if auto <= r.tolerance {
            let d = equivariance_defect(&lifted, &pulled, &big)?;
            r.check_residual("lift.connection", d.connection);
            r.check_residual("lift.curvature", d.curvature);
            r.check_residual("lift.sectional", d.sectional);
        }
    }
    Ok(())
}

fn symplectic(
    input: &Input,
    w1_name: &str,
    w2_name: &str,
    pair: &MetricPair,
    r: &mut Report,
) -> Result<(), InputError> {
    let t = tangent(input, pair)?;
    let p = &input.problem;
    let w1 = p.form(w1_name)?;
    let w2 = p.form(w2_name)?;
    let w = lift_symplectic(&t, w1, w2)?;
    r.put("lifted_form", Item::matrix(w.matrix()));
    r.put("index_convention", Item::Text(INDEX_CONVENTION.to_string()));
    let res = verify_closedness_identities(&t, &w)?;
    r.put(
        "closedness",
        Item::Table {
            headers: ["pattern", "residual"].map(String::from).to_vec(),
            rows: res
                .iter()
                .map(|(pat, d)| vec![json!(pattern_tag(*pat)), json!(d)])
                .collect(),
        },
    );
    for (pat, d) in &res {
        r.check_residual(&format!("closed[{}]", pattern_tag(*pat)), *d);
    }
    let sigma = w.smallest_singular_value();
    r.put("smallest_singular_value", Item::Scalar(sigma));
    r.check_flag("nondegenerate", sigma > r.tolerance);
    r.check_flag("symplectic", is_symplectic(t.lifted(), &w, r.tolerance));
    Ok(())
}
