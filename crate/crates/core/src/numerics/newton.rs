use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::compiled::{CompiledModel, CompiledRatFunc};
use crate::error::{Error, Result};
use crate::richardson;
use crate::superpotential::{plucker_subst, w_laurent, ModelId, SuperpotentialExpr};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "LGMIRROR_THREADS";

/// Iterates beyond this norm are treated as escaping to infinity.
const ESCAPE_RADIUS: f64 = 1e6;
/// Step budget for one homotopy path.
const TRACK_MAX_STEPS: usize = 2000;

#[derive(Debug, Clone, Serialize)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub max_halvings: usize,
    pub dedup_tol: f64,
    pub patience: usize,
    pub max_starts: usize,
    /// Starts evaluated per parallel batch; fixed so results never depend on
    /// the thread count.
    pub batch: usize,
    /// Largest allowed ratio of Hessian singular values for nondegeneracy.
    pub hessian_ratio: f64,
    /// Worker threads; `None` reads [`THREADS_ENV`].
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-12,
            max_halvings: 20,
            dedup_tol: 1e-6,
            patience: 150,
            max_starts: 2000,
            batch: 32,
            hessian_ratio: 1e-8,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CritPoint {
    pub coords: Vec<Complex64>,
    pub value: Complex64,
    pub residual: f64,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CritReport {
    pub model: ModelId,
    pub m: usize,
    pub q: Complex64,
    pub seed: u64,
    pub variables: Vec<String>,
    pub points: Vec<CritPoint>,
    pub starts_used: usize,
    pub duplicates_merged: usize,
    pub discarded: usize,
}

pub(crate) fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

impl CritReport {
    pub fn values(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model.as_str(),
            "m": self.m,
            "q": c_json(self.q),
            "seed": self.seed,
            "variables": self.variables,
            "points": self.points.iter().map(|p| json!({
                "coords": p.coords.iter().map(|&z| c_json(z)).collect::<Vec<_>>(),
                "value": c_json(p.value),
                "residual": p.residual,
                "nondegenerate": p.nondegenerate,
            })).collect::<Vec<_>>(),
            "starts_used": self.starts_used,
            "duplicates_merged": self.duplicates_merged,
            "discarded": self.discarded,
        })
    }
}

enum Outcome {
    Found(CritPoint),
    Discarded,
    Failed,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Gradient norm with each component weighted by `1 + |x_i|`, so drifting
/// off to infinity does not look like progress.
fn weighted(x: &[Complex64], g: &[Complex64]) -> f64 {
    x.iter()
        .zip(g)
        .map(|(a, b)| (b * (1.0 + a.norm())).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn l2(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Coordinates in which Newton iterates run. A chart either is the target
/// model itself or maps into its solve variables.
struct Chart {
    model: CompiledModel,
    fixed: Vec<(usize, Complex64)>,
    to_target: Option<Vec<CompiledRatFunc>>,
}

impl Chart {
    fn direct(w: &SuperpotentialExpr, q: Complex64) -> Result<Self> {
        let reg = &w.registry;
        let mut fixed = vec![(reg.require("q")?, q)];
        if w.model == ModelId::Pluecker {
            fixed.push((reg.require("p0")?, Complex64::new(1.0, 0.0)));
        }
        Ok(Self {
            model: CompiledModel::new(w),
            fixed,
            to_target: None,
        })
    }

    /// The torus of factorization parameters, mapped to `p_1, ..., p_{2m-1}`.
    fn torus(m: usize, q: Complex64) -> Result<Self> {
        let w = w_laurent(m)?;
        let subst = plucker_subst(m)?;
        let map = (1..2 * m)
            .map(|k| CompiledRatFunc::new(&subst[&format!("p{k}")]))
            .collect();
        Ok(Self {
            fixed: vec![(w.registry.require("q")?, q)],
            model: CompiledModel::new(&w),
            to_target: Some(map),
        })
    }

    fn full(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.model.embed(x, &self.fixed)
    }

    fn newton_step(&self, x: &[Complex64], g: &[Complex64]) -> Option<Vec<Complex64>> {
        let k = self.model.dim();
        let h = self.model.hessian(&self.full(x))?;
        let hm = DMatrix::from_row_slice(k, k, &h);
        let v = hm.lu().solve(&DVector::from_column_slice(g))?;
        v.iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
            .then(|| v.iter().copied().collect())
    }

    /// Follows `grad W(x) = s(τ) grad W(x_0)` from `τ = 0` to `τ = 1`, where
    /// `s` runs from 1 to 0 along a complex arc that bends by `bend`.
    fn track(&self, start: Vec<Complex64>, bend: Complex64) -> Option<Vec<Complex64>> {
        let g0 = self.model.gradient(&self.full(&start))?;
        let s_at = |tau: f64| Complex64::new(1.0 - tau, 0.0) + bend * (tau * (1.0 - tau));
        let ds_at = |tau: f64| Complex64::new(-1.0, 0.0) + bend * (1.0 - 2.0 * tau);
        let mut x = start;
        let (mut tau, mut dt) = (0.0f64, 0.02f64);
        for _ in 0..TRACK_MAX_STEPS {
            if tau >= 1.0 {
                return Some(x);
            }
            let h = dt.min(1.0 - tau);
            let rate: Vec<Complex64> = g0.iter().map(|g| -g * ds_at(tau)).collect();
            let corrected = (|| {
                let v = self.newton_step(&x, &rate)?;
                let mut y: Vec<Complex64> = x.iter().zip(&v).map(|(a, d)| a - d * h).collect();
                let target = s_at(tau + h);
                for _ in 0..3 {
                    let g = self.model.gradient(&self.full(&y))?;
                    let res: Vec<Complex64> =
                        g.iter().zip(&g0).map(|(a, b)| a - b * target).collect();
                    let d = self.newton_step(&y, &res)?;
                    for (a, b) in y.iter_mut().zip(&d) {
                        *a -= b;
                    }
                    if l2(&d) <= 1e-9 * (1.0 + l2(&y)) {
                        return Some(y);
                    }
                }
                None
            })();
            match corrected {
                Some(y) if l2(&y) < ESCAPE_RADIUS => {
                    x = y;
                    tau += h;
                    dt = (dt * 1.5).min(0.1);
                }
                Some(_) => return None,
                None => {
                    dt *= 0.5;
                    if dt < 1e-10 {
                        return None;
                    }
                }
            }
        }
        None
    }

    /// Damped Newton from `x`; halving the step until the weighted gradient
    /// norm decreases. Returns the point and its gradient on convergence.
    fn damped_newton(
        &self,
        mut x: Vec<Complex64>,
        opts: &NewtonOptions,
    ) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let mut g = self.model.gradient(&self.full(&x))?;
        for _ in 0..opts.max_iter {
            if max_norm(&g) < opts.tol {
                return Some((x, g));
            }
            let step = self.newton_step(&x, &g)?;
            let merit = weighted(&x, &g);
            let mut t = 1.0;
            let mut fallback = None;
            let mut accepted = false;
            for _ in 0..=opts.max_halvings {
                let trial: Vec<Complex64> = x.iter().zip(&step).map(|(a, d)| a - d * t).collect();
                if let Some(gt) = self.model.gradient(&self.full(&trial)) {
                    if weighted(&trial, &gt) < merit {
                        x = trial;
                        g = gt;
                        accepted = true;
                        break;
                    }
                    fallback = Some((trial, gt));
                }
                t *= 0.5;
            }
            if !accepted {
                // No decrease along the Newton direction: take the shortest
                // finite step tried so the iteration can leave a bad region.
                let (trial, gt) = fallback?;
                x = trial;
                g = gt;
            }
            if l2(&x) > ESCAPE_RADIUS {
                return None;
            }
        }
        (max_norm(&g) < opts.tol).then_some((x, g))
    }
}

struct Solver<'a> {
    target: &'a Chart,
    charts: &'a [Chart],
    kind: ModelId,
    m: usize,
    opts: &'a NewtonOptions,
}

impl Solver<'_> {
    fn run(&self, chart: usize, start: Vec<Complex64>, bend: Complex64) -> Outcome {
        let chart = &self.charts[chart];
        let Some(x) = chart.track(start, bend) else {
            return Outcome::Failed;
        };
        let Some((x, g)) = chart.damped_newton(x, self.opts) else {
            return Outcome::Failed;
        };
        let (x, g) = match &chart.to_target {
            None => (x, g),
            Some(map) => {
                let full = chart.full(&x);
                let Some(y) = map
                    .iter()
                    .map(|f| f.eval(&full))
                    .collect::<Option<Vec<_>>>()
                else {
                    return Outcome::Discarded;
                };
                match self.target.damped_newton(y, self.opts) {
                    Some(found) => found,
                    None => return Outcome::Failed,
                }
            }
        };
        self.classify(x, g)
    }

    fn classify(&self, x: Vec<Complex64>, g: Vec<Complex64>) -> Outcome {
        let k = x.len();
        let model = &self.target.model;
        let full = self.target.full(&x);
        let in_domain = match self.kind {
            ModelId::Pluecker => richardson::in_domain(self.m, &x).unwrap_or(false),
            _ => true,
        } && model.boundary_distance(&full) > richardson::DOMAIN_GUARD;
        if !in_domain {
            return Outcome::Discarded;
        }
        let (Some(value), Some(h)) = (model.value(&full), model.hessian(&full)) else {
            return Outcome::Discarded;
        };
        let sv = DMatrix::from_row_slice(k, k, &h).singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        Outcome::Found(CritPoint {
            residual: l2(&g),
            coords: x,
            value,
            nondegenerate: smin > self.opts.hessian_ratio * smax,
        })
    }
}

/// Draws one start: log-uniform modulus in `[1/2, 2]` and uniform phase per
/// coordinate, plus the bend of the homotopy arc.
fn draw_start(rng: &mut ChaCha8Rng, k: usize) -> (Vec<Complex64>, Complex64) {
    let start = (0..k)
        .map(|_| {
            let r = (rng.random_range(-1.0..1.0) * std::f64::consts::LN_2).exp();
            let th = rng.random_range(0.0..2.0 * PI);
            Complex64::from_polar(r, th)
        })
        .collect();
    let bend = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    (start, bend)
}

/// Thread pool with `threads` workers, else sized from [`THREADS_ENV`], else
/// rayon's default.
pub fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let n = threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
    });
    let n = n.filter(|&n| n > 0);
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// All critical points of `w` at `q`, found by multistart Newton.
///
/// Each start is carried along a Newton homotopy to a critical point and
/// then polished by damped Newton. For the Plücker model every other start
/// runs in the torus of factorization parameters and is mapped into the
/// chart `p_0 = 1` before polishing.
pub fn newton_multistart(
    w: &SuperpotentialExpr,
    q: Complex64,
    seed: u64,
    opts: &NewtonOptions,
) -> Result<CritReport> {
    let target = Chart::direct(w, q)?;
    let mut charts = vec![Chart::direct(w, q)?];
    if w.model == ModelId::Pluecker {
        charts.push(Chart::torus(w.m, q)?);
    }
    let solver = Solver {
        target: &target,
        charts: &charts,
        kind: w.model,
        m: w.m,
        opts,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = thread_pool(opts.threads);
    let mut points: Vec<CritPoint> = Vec::new();
    let (mut used, mut since_new, mut merged, mut discarded) = (0usize, 0usize, 0usize, 0usize);
    'outer: while used < opts.max_starts {
        let n = opts.batch.min(opts.max_starts - used);
        let starts: Vec<(usize, Vec<Complex64>, Complex64)> = (used..used + n)
            .map(|i| {
                let c = i % charts.len();
                let (s, b) = draw_start(&mut rng, charts[c].model.dim());
                (c, s, b)
            })
            .collect();
        let outcomes: Vec<Outcome> = pool.install(|| {
            starts
                .into_par_iter()
                .map(|(c, s, b)| solver.run(c, s, b))
                .collect()
        });
        for out in outcomes {
            used += 1;
            since_new += 1;
            match out {
                Outcome::Found(p) => {
                    let scale = l2(&p.coords).max(1.0);
                    if points
                        .iter()
                        .any(|o| dist(&o.coords, &p.coords) <= opts.dedup_tol * scale)
                    {
                        merged += 1;
                    } else {
                        points.push(p);
                        since_new = 0;
                    }
                }
                Outcome::Discarded => discarded += 1,
                Outcome::Failed => {}
            }
            if since_new >= opts.patience {
                break 'outer;
            }
        }
    }
    if points.is_empty() {
        return Err(Error::NonConvergence { starts: used });
    }
    points.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
            .then_with(|| {
                a.coords
                    .iter()
                    .zip(&b.coords)
                    .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let reg = &w.registry;
    Ok(CritReport {
        model: w.model,
        m: w.m,
        q,
        seed,
        variables: w
            .solve_vars()
            .iter()
            .map(|&i| reg.name(i).to_string())
            .collect(),
        points,
        starts_used: used,
        duplicates_merged: merged,
        discarded,
    })
}
