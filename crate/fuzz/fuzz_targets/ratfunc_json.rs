#![no_main]

use lgmirror::symbolic::{ratfunc_from_json, ratfunc_to_json, VarRegistry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let reg = VarRegistry::new(["a1", "c", "b1", "q"]).unwrap();
    if let Ok(f) = ratfunc_from_json(&value, &reg) {
        let back = ratfunc_from_json(&ratfunc_to_json(&f), &reg).expect("encoded value decodes");
        assert!(back.equals(&f));
    }
});
