//! Floating-point certification: critical points, spectra and their match.

mod compiled;
mod newton;
mod spectrum;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

pub use compiled::{CompiledModel, CompiledRatFunc};
pub use newton::{
    newton_multistart, thread_pool, CritPoint, CritReport, NewtonOptions, THREADS_ENV,
};
pub use spectrum::{
    charpoly_exact, compare_spectra, durand_kerner, spectrum, spectrum_exact, squarefree, Spectrum,
    MAX_SWEEPS,
};

use crate::error::{check_rank, Error, Result};
use crate::quantum::chevalley_matrix;
use crate::report::VerdictReport;
use crate::superpotential::{w_hori_vafa, w_laurent, w_pluecker};
use crate::symbolic::Q;
use crate::weyl::FieldMatrix;

/// Largest rank accepted by [`critical_certificate`].
pub const CERTIFY_MAX_M: usize = 4;

/// Tolerance for matching critical values against the spectrum.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Evaluates a matrix over `q` at a complex value of `q`.
pub fn evaluate_q_matrix(mat: &FieldMatrix, q: Complex64) -> Result<DMatrix<Complex64>> {
    let n = mat.size();
    let mut out = DMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = mat.get(r, c).evaluate(&[q])?;
        }
    }
    Ok(out)
}

/// Exact entries of a matrix over `q` at a rational `q`.
pub fn evaluate_q_matrix_exact(mat: &FieldMatrix, q: &Q) -> Result<Vec<Vec<Q>>> {
    let n = mat.size();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    mat.get(r, c)
                        .evaluate_exact(std::slice::from_ref(q))
                        .ok_or(Error::Symbolic(crate::symbolic::SymbolicError::Pole {
                            re: 0.0,
                            im: 0.0,
                        }))
                })
                .collect()
        })
        .collect()
}

/// Spectrum of `(2m-1) σ_1 ⋆` at `q`, exact in the characteristic polynomial
/// when `q` is real.
pub fn quantum_spectrum(m: usize, q: Complex64) -> Result<Spectrum> {
    let scale = Q::from_integer((2 * m as i64 - 1).into());
    let mat = chevalley_matrix(m)?;
    if q.im == 0.0 {
        if let Some(qx) = Q::from_float(q.re) {
            let mut a = evaluate_q_matrix_exact(&mat, &qx)?;
            for row in a.iter_mut() {
                for v in row.iter_mut() {
                    *v *= &scale;
                }
            }
            return spectrum_exact(&a);
        }
    }
    spectrum(&(evaluate_q_matrix(&mat, q)? * Complex64::new((2 * m - 1) as f64, 0.0)))
}

/// Critical points of the Plücker model against the quantum spectrum.
pub fn critical_certificate(
    m: usize,
    q: Complex64,
    seed: u64,
    opts: &NewtonOptions,
) -> Result<(VerdictReport, CritReport)> {
    check_rank(m)?;
    if m > CERTIFY_MAX_M {
        return Err(Error::ResourceLimit {
            what: "critical-point certificate",
            m,
            max: CERTIFY_MAX_M,
        });
    }
    let check = "critical_certificate";
    let report = newton_multistart(&w_pluecker(m)?, q, seed, opts)?;
    let laurent = newton_multistart(&w_laurent(m)?, q, seed, opts)
        .map(|r| r.points.len())
        .unwrap_or(0);
    let hv = newton_multistart(&w_hori_vafa(m)?, q, seed, opts)
        .map(|r| r.points.len())
        .unwrap_or(0);
    let base = |v: VerdictReport| {
        v.with("points", report.points.len())
            .with("expected", 2 * m)
            .with("laurent_points", laurent)
            .with("hori_vafa_points", hv)
            .with("q", json!([q.re, q.im]))
            .with("seed", seed)
            .with("tol", SPECTRUM_TOL)
    };
    if report.points.len() != 2 * m {
        return Ok((
            base(VerdictReport::fail(
                check,
                m,
                format!(
                    "found {} critical points, expected {}",
                    report.points.len(),
                    2 * m
                ),
            )),
            report,
        ));
    }
    if let Some(p) = report.points.iter().find(|p| !p.nondegenerate) {
        return Ok((
            base(VerdictReport::fail(
                check,
                m,
                format!(
                    "degenerate critical point with value ({}, {})",
                    p.value.re, p.value.im
                ),
            )),
            report,
        ));
    }
    let crit = Spectrum::new(report.values());
    let spec = quantum_spectrum(m, q)?;
    let cmp = compare_spectra(&crit, &spec, SPECTRUM_TOL)?;
    let verdict = if cmp.passed() {
        VerdictReport::pass(check, m)
    } else {
        VerdictReport::fail(check, m, cmp.witness.clone().unwrap_or_default())
    };
    Ok((
        base(verdict).with("max_distance", cmp.context["max_distance"].clone()),
        report,
    ))
}
