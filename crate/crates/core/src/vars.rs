//! Variable registries for each coordinate family.

use std::sync::Arc;

use crate::error::{check_rank, Result};
use crate::symbolic::{RatFunc, VarRegistry};

/// `p0, ..., p{2m-1}, q`.
pub fn pluecker(m: usize) -> Result<Arc<VarRegistry>> {
    check_rank(m)?;
    let mut names: Vec<String> = (0..2 * m).map(|i| format!("p{i}")).collect();
    names.push("q".into());
    Ok(VarRegistry::new(names)?)
}

/// `a1, ..., a{m-1}, c, b{m-1}, ..., b1, q`.
pub fn laurent(m: usize) -> Result<Arc<VarRegistry>> {
    check_rank(m)?;
    let mut names: Vec<String> = (1..m).map(|i| format!("a{i}")).collect();
    names.push("c".into());
    names.extend((1..m).rev().map(|i| format!("b{i}")));
    names.push("q".into());
    Ok(VarRegistry::new(names)?)
}

/// `x, y1, ..., y{m-1}, z1, ..., z{m-1}, q`; at `m = 2` the indices are dropped.
pub fn gs(m: usize) -> Result<Arc<VarRegistry>> {
    check_rank(m)?;
    let mut names = vec!["x".to_string()];
    names.extend((1..m).map(|i| gs_y(m, i)));
    names.extend((1..m).map(|i| gs_z(m, i)));
    names.push("q".into());
    Ok(VarRegistry::new(names)?)
}

pub(crate) fn gs_y(m: usize, i: usize) -> String {
    if m == 2 {
        "y".into()
    } else {
        format!("y{i}")
    }
}

pub(crate) fn gs_z(m: usize, i: usize) -> String {
    if m == 2 {
        "z".into()
    } else {
        format!("z{i}")
    }
}

/// `Y1, ..., Y{2m-1}, q`.
pub fn hori_vafa(m: usize) -> Result<Arc<VarRegistry>> {
    check_rank(m)?;
    let mut names: Vec<String> = (1..2 * m).map(|i| format!("Y{i}")).collect();
    names.push("q".into());
    Ok(VarRegistry::new(names)?)
}

/// `q` alone, for classes in quantum cohomology.
pub fn q_line() -> Arc<VarRegistry> {
    VarRegistry::new(["q"]).expect("static names")
}

/// `q, hbar`.
pub fn quantum() -> Arc<VarRegistry> {
    VarRegistry::new(["q", "hbar"]).expect("static names")
}

/// The unipotent parameters `(a, c, b)` as variables of [`laurent`].
pub struct UnipotentParams {
    pub a: Vec<RatFunc>,
    pub c: RatFunc,
    pub b: Vec<RatFunc>,
}

impl UnipotentParams {
    pub fn symbolic(m: usize) -> Result<Self> {
        let reg = laurent(m)?;
        let a = (1..m)
            .map(|i| RatFunc::var(&reg, &format!("a{i}")))
            .collect::<Result<_, _>>()?;
        let b = (1..m)
            .map(|i| RatFunc::var(&reg, &format!("b{i}")))
            .collect::<Result<_, _>>()?;
        let c = RatFunc::var(&reg, "c")?;
        Ok(Self { a, c, b })
    }
}
