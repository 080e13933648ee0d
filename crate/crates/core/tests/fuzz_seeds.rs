//! Replays the checked-in fuzz corpus through the same roundtrip checks the
//! fuzz targets make.

use std::fs;
use std::path::PathBuf;

use lgmirror::symbolic::{
    format_expr, parse_expr, parse_expr_tree, poly_from_json, poly_to_json, ratfunc_from_json,
    ratfunc_to_json, FormatStyle, VarRegistry,
};
use lgmirror::weyl::FieldMatrix;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn expression_seeds_roundtrip() {
    let reg = VarRegistry::new(["p0", "p1", "p2", "p3", "x", "y", "z", "q"]).unwrap();
    let mut parsed = 0;
    for data in seeds("parse_expr") {
        let text = std::str::from_utf8(&data).unwrap();
        let _ = parse_expr_tree(text);
        if let Ok(f) = parse_expr(text, &reg) {
            let printed = format_expr(&f, FormatStyle::Plain);
            assert!(parse_expr(&printed, &reg).unwrap().equals(&f), "{text:?}");
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn polynomial_seeds_roundtrip() {
    let reg = VarRegistry::new(["p1", "p2", "p3", "q"]).unwrap();
    for data in seeds("poly_json") {
        let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
        let p = poly_from_json(&v, &reg).unwrap();
        assert_eq!(poly_from_json(&poly_to_json(&p), &reg).unwrap(), p);
    }
}

#[test]
fn rational_function_seeds_roundtrip() {
    let reg = VarRegistry::new(["a1", "c", "b1", "q"]).unwrap();
    for data in seeds("ratfunc_json") {
        let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
        let f = ratfunc_from_json(&v, &reg).unwrap();
        assert!(ratfunc_from_json(&ratfunc_to_json(&f), &reg)
            .unwrap()
            .equals(&f));
    }
}

#[test]
fn matrix_seeds_roundtrip() {
    let reg = VarRegistry::new(["q", "t"]).unwrap();
    for data in seeds("matrix_json") {
        let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
        let m = FieldMatrix::from_json(&v, &reg).unwrap();
        assert!(FieldMatrix::from_json(&m.to_json(), &reg)
            .unwrap()
            .equals(&m));
    }
}
