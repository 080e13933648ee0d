#![no_main]

use lgmirror::symbolic::{poly_from_json, poly_to_json, VarRegistry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let reg = VarRegistry::new(["p1", "p2", "p3", "q"]).unwrap();
    if let Ok(p) = poly_from_json(&value, &reg) {
        let back = poly_from_json(&poly_to_json(&p), &reg).expect("encoded polynomial decodes");
        assert_eq!(back, p);
    }
});
