use std::path::PathBuf;

use tanglie_core::problem::{catalog_algebra, load_problem, CATALOG_NAMES};

fn data_dir() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data"]
        .iter()
        .collect()
}

#[test]
fn bundled_files_match_catalog() {
    for name in CATALOG_NAMES {
        let path = data_dir().join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, catalog_algebra(name).unwrap().to_json(), "{name}");
        let p = load_problem(&path).unwrap();
        assert_eq!(p.algebra.jacobi_defect(), 0.0);
    }
}
