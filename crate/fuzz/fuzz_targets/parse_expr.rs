#![no_main]

use lgmirror::symbolic::{format_expr, parse_expr, parse_expr_tree, FormatStyle, VarRegistry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_expr_tree(text);
    let reg = VarRegistry::new(["p0", "p1", "p2", "p3", "x", "y", "z", "q"]).unwrap();
    if let Ok(f) = parse_expr(text, &reg) {
        // Anything that parses must survive a print/parse roundtrip.
        let printed = format_expr(&f, FormatStyle::Plain);
        let back = parse_expr(&printed, &reg).expect("printed form parses");
        assert!(back.equals(&f), "{text:?} printed as {printed:?}");
    }
});
