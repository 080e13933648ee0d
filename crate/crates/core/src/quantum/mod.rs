//! Quantum cohomology of the odd quadric `Q_{2m-1}` in the Schubert basis
//! `σ_0, ..., σ_{2m-1}`, and the A-model connection.

use std::sync::Arc;

use crate::error::{check_index, check_rank, Error, Result};
use crate::report::VerdictReport;
use crate::symbolic::{RatFunc, VarRegistry, Q};
use crate::vars;
use crate::weyl::FieldMatrix;

/// A class `Σ c_i(q) σ_i` with coefficients rational in `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QhClass {
    m: usize,
    coeffs: Vec<RatFunc>,
}

impl QhClass {
    pub fn zero(m: usize) -> Self {
        let reg = vars::q_line();
        Self {
            m,
            coeffs: vec![RatFunc::zero(&reg); 2 * m],
        }
    }

    /// The Schubert class `σ_i`.
    pub fn sigma(m: usize, i: usize) -> Result<Self> {
        check_rank(m)?;
        check_index("Schubert class", i, 0, 2 * m - 1)?;
        let mut out = Self::zero(m);
        out.coeffs[i] = RatFunc::one(&vars::q_line());
        Ok(out)
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<RatFunc>) -> Result<Self> {
        check_rank(m)?;
        if coeffs.len() != 2 * m {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: 2 * m,
            });
        }
        let reg = vars::q_line();
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.rebase(&reg))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { m, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RatFunc::integer(&vars::q_line(), -1)))
    }

    pub fn scale(&self, s: &RatFunc) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// Plain text such as `3*σ1` written with `s` for the class symbol.
    pub fn to_plain(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    format!("s{i}")
                } else {
                    format!("({c})*s{i}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }

    fn column(&self) -> FieldMatrix {
        let reg = vars::q_line();
        let n = 2 * self.m;
        let mut out = FieldMatrix::zeros(&reg, n);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.set(i, 0, c.clone());
        }
        out
    }
}

/// Matrix of `σ_1 ⋆` in the Schubert basis; column `i` holds `σ_1 ⋆ σ_i`.
pub fn chevalley_matrix(m: usize) -> Result<FieldMatrix> {
    check_rank(m)?;
    let reg = vars::q_line();
    let n = 2 * m;
    let q = RatFunc::var(&reg, "q")?;
    let mut mat = FieldMatrix::zeros(&reg, n);
    for i in 0..n {
        if i == m - 1 {
            mat.set(m, i, RatFunc::integer(&reg, 2));
        } else if i == n - 2 {
            mat.set(n - 1, i, RatFunc::one(&reg));
            mat.set(0, i, q.clone());
        } else if i == n - 1 {
            mat.set(1, i, q.clone());
        } else {
            mat.set(i + 1, i, RatFunc::one(&reg));
        }
    }
    Ok(mat)
}

/// The ring for one `m`, caching the multiplication operators of `σ_i`.
#[derive(Debug, Clone)]
pub struct QhRing {
    m: usize,
    reg: Arc<VarRegistry>,
    chevalley: FieldMatrix,
    ops: Vec<FieldMatrix>,
}

impl QhRing {
    pub fn new(m: usize) -> Result<Self> {
        let chevalley = chevalley_matrix(m)?;
        let reg = chevalley.registry().clone();
        let n = 2 * m;
        let q = RatFunc::var(&reg, "q")?;
        let id = FieldMatrix::identity(&reg, n);
        let half = RatFunc::constant(&reg, Q::new(1.into(), 2.into()));
        let mut ops = vec![id.clone()];
        for i in 1..n {
            let next = chevalley.mul(&ops[i - 1])?;
            let op = if i == m {
                next.scale(&half)
            } else if i == n - 1 {
                next.sub(&id.scale(&q))?
            } else {
                next
            };
            ops.push(op);
        }
        Ok(Self {
            m,
            reg,
            chevalley,
            ops,
        })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn chevalley(&self) -> &FieldMatrix {
        &self.chevalley
    }

    /// Matrix of `σ_i ⋆`.
    pub fn sigma_operator(&self, i: usize) -> &FieldMatrix {
        &self.ops[i]
    }

    /// Matrix of `A ⋆`.
    pub fn operator(&self, a: &QhClass) -> Result<FieldMatrix> {
        let mut out = FieldMatrix::zeros(&self.reg, 2 * self.m);
        for (c, op) in a.coeffs.iter().zip(&self.ops) {
            if !c.is_zero() {
                out = out.add(&op.scale(c))?;
            }
        }
        Ok(out)
    }

    fn check_same(&self, a: &QhClass) -> Result<()> {
        if a.m != self.m {
            return Err(Error::DimensionMismatch {
                left: 2 * a.m,
                right: 2 * self.m,
            });
        }
        Ok(())
    }

    pub fn mul(&self, a: &QhClass, b: &QhClass) -> Result<QhClass> {
        self.check_same(a)?;
        self.check_same(b)?;
        let col = self.operator(a)?.mul(&b.column())?;
        Ok(QhClass {
            m: self.m,
            coeffs: (0..2 * self.m).map(|i| col.get(i, 0).clone()).collect(),
        })
    }

    pub fn inverse(&self, a: &QhClass) -> Result<QhClass> {
        self.check_same(a)?;
        let inv = self.operator(a)?.inverse()?.ok_or(Error::NotInvertible)?;
        Ok(QhClass {
            m: self.m,
            coeffs: (0..2 * self.m).map(|i| inv.get(i, 0).clone()).collect(),
        })
    }

    pub fn sigma(&self, i: usize) -> QhClass {
        QhClass::sigma(self.m, i).expect("index in range")
    }

    /// `q σ_0`.
    pub fn q_unit(&self) -> QhClass {
        let q = RatFunc::var(&self.reg, "q").expect("q");
        self.sigma(0).scale(&q)
    }
}

pub fn qh_mul(a: &QhClass, b: &QhClass) -> Result<QhClass> {
    QhRing::new(a.m)?.mul(a, b)
}

pub fn qh_inverse(a: &QhClass) -> Result<QhClass> {
    QhRing::new(a.m)?.inverse(a)
}

/// `Σ_{k=0}^{l} (-1)^k σ_{l-k} ⋆ σ_{2m-1+k-l}`.
pub fn q_relation(m: usize, l: usize) -> Result<QhClass> {
    check_rank(m)?;
    check_index("relation", l, 1, m - 1)?;
    let ring = QhRing::new(m)?;
    q_relation_in(&ring, l)
}

pub fn q_relation_in(ring: &QhRing, l: usize) -> Result<QhClass> {
    let m = ring.m;
    let mut acc = QhClass::zero(m);
    for k in 0..=l {
        let t = ring.mul(&ring.sigma(l - k), &ring.sigma(2 * m - 1 + k - l))?;
        acc = if k % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc)
}

/// Image of the Plücker superpotential under `p_i -> σ_i`, with every
/// divisor denominator sent to `q`.
pub fn w_image(m: usize) -> Result<QhClass> {
    let ring = QhRing::new(m)?;
    let inv_q = ring.inverse(&ring.q_unit())?;
    let mut acc = ring.sigma(1);
    for l in 1..m {
        let t = ring.mul(&ring.sigma(l + 1), &ring.sigma(2 * m - 1 - l))?;
        acc = acc.add(&ring.mul(&t, &inv_q)?);
    }
    let last = ring.mul(&ring.sigma(1), &ring.inverse(&ring.sigma(2 * m - 1))?)?;
    acc = acc.add(&ring.mul(&ring.q_unit(), &last)?);
    Ok(acc)
}

/// The data of the A-model connection.
#[derive(Debug, Clone)]
pub struct ConnectionData {
    pub m: usize,
    pub chevalley: FieldMatrix,
    /// Diagonal of the grading operator.
    pub grading: Vec<i64>,
    /// `c_1(TX) = c1_factor * σ_1`.
    pub c1_factor: i64,
    pub pairing_exponent: i64,
}

pub fn a_connection(m: usize) -> Result<ConnectionData> {
    Ok(ConnectionData {
        m,
        chevalley: chevalley_matrix(m)?,
        grading: (0..2 * m as i64).collect(),
        c1_factor: 2 * m as i64 - 1,
        pairing_exponent: 2 * m as i64 - 1,
    })
}

/// Expands `[q∂_q + M/ħ, ħ∂_ħ + gr - c M/ħ]` over `(q, ħ)` and checks that
/// every entry vanishes.
pub fn flatness_check(m: usize) -> Result<VerdictReport> {
    let data = a_connection(m)?;
    let reg = vars::quantum();
    let n = 2 * m;
    let mat = data.chevalley.rebase(&reg)?;
    let q = RatFunc::var(&reg, "q")?;
    let hbar = RatFunc::var(&reg, "hbar")?;
    let qi = reg.require("q")?;
    let hi = reg.require("hbar")?;
    let inv_h = hbar.inverse()?;
    let gr = FieldMatrix::diagonal(
        &data
            .grading
            .iter()
            .map(|&g| RatFunc::integer(&reg, g))
            .collect::<Vec<_>>(),
    );
    let a = mat.scale(&inv_h);
    let c1 = RatFunc::integer(&reg, data.c1_factor);
    let b = gr.sub(&mat.scale(&(&c1 * &inv_h)))?;
    let euler = |x: &FieldMatrix, var: usize, s: &RatFunc| -> Result<FieldMatrix> {
        FieldMatrix::from_fn(&reg, n, |r, c| Ok(s * &x.get(r, c).differentiate(var)))
    };
    let comm = euler(&b, qi, &q)?
        .sub(&euler(&a, hi, &hbar)?)?
        .add(&a.mul(&b)?.sub(&b.mul(&a)?)?)?;
    let zero = FieldMatrix::zeros(&reg, n);
    Ok(match comm.first_difference(&zero) {
        None => VerdictReport::pass("flatness", m),
        Some((r, c)) => VerdictReport::fail(
            "flatness",
            m,
            format!(
                "commutator entry ({}, {}) = {}",
                r + 1,
                c + 1,
                comm.get(r, c)
            ),
        ),
    })
}

/// The system `q dS/dq = A(q) S`.
#[derive(Debug, Clone)]
pub struct QdeSystem {
    pub m: usize,
    pub hbar: Q,
    pub matrix: FieldMatrix,
}

pub fn qde_system(m: usize, hbar: &Q) -> Result<QdeSystem> {
    use num_traits::Zero;
    if hbar.is_zero() {
        return Err(Error::ZeroHbar);
    }
    let mat = chevalley_matrix(m)?;
    let reg = mat.registry().clone();
    let s = RatFunc::constant(&reg, hbar.recip());
    Ok(QdeSystem {
        m,
        hbar: hbar.clone(),
        matrix: mat.scale(&s),
    })
}
