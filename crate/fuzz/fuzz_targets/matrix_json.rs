#![no_main]

use lgmirror::symbolic::VarRegistry;
use lgmirror::weyl::FieldMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let reg = VarRegistry::new(["q", "t"]).unwrap();
    if let Ok(m) = FieldMatrix::from_json(&value, &reg) {
        let back = FieldMatrix::from_json(&m.to_json(), &reg).expect("encoded matrix decodes");
        assert!(back.equals(&m));
    }
});
