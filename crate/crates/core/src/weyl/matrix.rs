use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::symbolic::{parse_expr, Bindings, FormatStyle, RatFunc, SymbolicError, VarRegistry};

/// A dense square matrix of exact rational functions over one registry.
#[derive(Clone)]
pub struct FieldMatrix {
    reg: Arc<VarRegistry>,
    n: usize,
    data: Vec<RatFunc>,
}

impl FieldMatrix {
    pub fn zeros(reg: &Arc<VarRegistry>, n: usize) -> Self {
        Self {
            reg: reg.clone(),
            n,
            data: vec![RatFunc::zero(reg); n * n],
        }
    }

    pub fn identity(reg: &Arc<VarRegistry>, n: usize) -> Self {
        let mut out = Self::zeros(reg, n);
        for i in 0..n {
            out.data[i * n + i] = RatFunc::one(reg);
        }
        out
    }

    /// Builds from a closure over 0-based `(row, column)`.
    pub fn from_fn<F>(reg: &Arc<VarRegistry>, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<RatFunc>,
    {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let v = f(r, c)?;
                if !v.registry().same_as(reg) {
                    return Err(registry_mismatch(v.registry(), reg));
                }
                data.push(v);
            }
        }
        Ok(Self {
            reg: reg.clone(),
            n,
            data,
        })
    }

    pub fn from_integers(reg: &Arc<VarRegistry>, n: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), n * n, "need n*n entries");
        Self {
            reg: reg.clone(),
            n,
            data: entries.iter().map(|&v| RatFunc::integer(reg, v)).collect(),
        }
    }

    pub fn diagonal(entries: &[RatFunc]) -> Self {
        let reg = entries[0].registry().clone();
        let n = entries.len();
        let mut out = Self::zeros(&reg, n);
        for (i, v) in entries.iter().enumerate() {
            out.data[i * n + i] = v.clone();
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        assert!(v.registry().same_as(&self.reg), "registry mismatch");
        self.data[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if !self.reg.same_as(&other.reg) {
            return Err(registry_mismatch(&self.reg, &other.reg));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n;
        let mut out = Self::zeros(&self.reg, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o = &*o + b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o = &*o - b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &RatFunc) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = &*o * s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.get(r, c).clone();
            }
        }
        out
    }

    /// Determinant by fraction-field Gaussian elimination.
    pub fn det(&self) -> Result<RatFunc> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = RatFunc::one(&self.reg);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(RatFunc::zero(&self.reg));
            };
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
                det = det.neg();
            }
            let pivot = a[col * n + col].clone();
            det = &det * &pivot;
            let inv = pivot.inverse()?;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] * &inv;
                for c in col..n {
                    let v = &a[r * n + c] - &(&f * &a[col * n + c]);
                    a[r * n + c] = v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.reg, n);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(None);
            };
            if p != col {
                a.swap_rows(p, col);
                inv.swap_rows(p, col);
            }
            let pinv = a.get(col, col).inverse()?;
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.add_row_multiple(r, col, &f.neg());
                inv.add_row_multiple(r, col, &f.neg());
            }
        }
        Ok(Some(inv))
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.n {
            self.data.swap(i * self.n + c, j * self.n + c);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, s: &RatFunc) {
        for c in 0..self.n {
            let idx = i * self.n + c;
            self.data[idx] = &self.data[idx] * s;
        }
    }

    /// `row_i += f * row_j`.
    pub(crate) fn add_row_multiple(&mut self, i: usize, j: usize, f: &RatFunc) {
        for c in 0..self.n {
            let src = self.get(j, c);
            if src.is_zero() {
                continue;
            }
            let v = &self.data[i * self.n + c] + &(f * src);
            self.data[i * self.n + c] = v;
        }
    }

    /// Exact entrywise equality of rational functions.
    pub fn equals(&self, other: &Self) -> bool {
        self.first_difference(other).is_none() && self.n == other.n
    }

    /// First 0-based position where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        (0..self.n * self.n)
            .find(|&k| !self.data[k].equals(&other.data[k]))
            .map(|k| (k / self.n, k % self.n))
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&Self::identity(&self.reg, self.n))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| match c.cmp(&r) {
                std::cmp::Ordering::Less => self.get(r, c).is_zero(),
                std::cmp::Ordering::Equal => self.get(r, c).is_one(),
                std::cmp::Ordering::Greater => true,
            })
        })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.transpose().is_upper_unitriangular()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self.get(r, c).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Nonzero entries only on the antidiagonal.
    pub fn is_antidiagonal(&self) -> bool {
        let n = self.n;
        (0..n).all(|r| (0..n).all(|c| (r + c == n - 1) != self.get(r, c).is_zero()))
    }

    pub fn substitute(&self, bindings: &Bindings, target: &Arc<VarRegistry>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|v| v.substitute(bindings, target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            reg: target.clone(),
            n: self.n,
            data,
        })
    }

    pub fn rebase(&self, target: &Arc<VarRegistry>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|v| v.rebase(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            reg: target.clone(),
            n: self.n,
            data,
        })
    }

    /// Row-major array of plain-grammar strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.n)
                .map(|r| {
                    Value::Array(
                        (0..self.n)
                            .map(|c| {
                                Value::String(crate::symbolic::format_expr(
                                    self.get(r, c),
                                    FormatStyle::Plain,
                                ))
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, reg: &Arc<VarRegistry>) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Json("matrix must be an array of rows".into()))?;
        let n = rows.len();
        if n == 0 {
            return Err(Error::Json("matrix must not be empty".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Json("row must be an array".into()))?;
            if row.len() != n {
                return Err(Error::Json(format!(
                    "matrix is not square: row of length {} in a {n}-row matrix",
                    row.len()
                )));
            }
            for e in row {
                let s = e
                    .as_str()
                    .ok_or_else(|| Error::Json("entries must be strings".into()))?;
                data.push(parse_expr(s, reg)?);
            }
        }
        Ok(Self {
            reg: reg.clone(),
            n,
            data,
        })
    }
}

fn registry_mismatch(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> Error {
    SymbolicError::RegistryMismatch {
        left: format!("{a:?}"),
        right: format!("{b:?}"),
    }
    .into()
}

impl PartialEq for FieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
