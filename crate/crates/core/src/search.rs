//! Floating-point multi-start search for hypo coframes.
//!
//! The unknown is a 5×5 matrix M whose rows are the coframe f¹…f⁵. The
//! residual R(M) = ‖dω₁‖² + ‖d(ω₂∧α)‖² + ‖d(ω₃∧α)‖² vanishes exactly at hypo
//! coframes; the minimised objective adds μ·(log det MᵀM)² to keep M
//! invertible. Gradients are exact, by forward-mode dual numbers.
//! Results are advisory and never feed a verdict.

use std::ops::{Add, Mul, Neg, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::exterior::{basis_masks, wedge_sign, KForm, Mask};
use crate::liealg::LieAlgebra;
use crate::su2hypo::Coframe;

const N: usize = 5;
const VARS: usize = N * N;
const MASKS: usize = 1 << N;
pub const BARRIER_WEIGHT: f64 = 1e-3;

/// Row-major coframe matrix: entry 5a+i is the eⁱ-coefficient of f^{a+1}.
pub type Matrix = [f64; VARS];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search needs a five-dimensional algebra, got dimension {0}")]
    Dimension(usize),
}

/// Arithmetic needed to evaluate the objective.
pub trait Real:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn ln(&self) -> Self;
}

impl Real for f64 {
    fn constant(c: f64) -> Self {
        c
    }

    fn value(&self) -> f64 {
        *self
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }
}

/// A value with its gradient in the 25 matrix entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub g: [f64; VARS],
}

impl Dual {
    fn variable(v: f64, k: usize) -> Self {
        let mut g = [0.0; VARS];
        g[k] = 1.0;
        Dual { v, g }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(mut self, o: Dual) -> Dual {
        self.v += o.v;
        for (a, b) in self.g.iter_mut().zip(o.g) {
            *a += b;
        }
        self
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(mut self, o: Dual) -> Dual {
        self.v -= o.v;
        for (a, b) in self.g.iter_mut().zip(o.g) {
            *a -= b;
        }
        self
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        let mut g = [0.0; VARS];
        for (k, x) in g.iter_mut().enumerate() {
            *x = self.g[k] * o.v + self.v * o.g[k];
        }
        Dual { v: self.v * o.v, g }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(mut self) -> Dual {
        self.v = -self.v;
        for a in self.g.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Real for Dual {
    fn constant(c: f64) -> Self {
        Dual {
            v: c,
            g: [0.0; VARS],
        }
    }

    fn value(&self) -> f64 {
        self.v
    }

    fn ln(&self) -> Self {
        let mut g = self.g;
        for a in g.iter_mut() {
            *a /= self.v;
        }
        Dual { v: self.v.ln(), g }
    }
}

/// Double-double arithmetic: an unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
/// Used so finite differences are not swamped by cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Wide {
    hi: f64,
    lo: f64,
}

impl Wide {
    fn two_sum(a: f64, b: f64) -> Wide {
        let s = a + b;
        let bb = s - a;
        Wide {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn renormalize(hi: f64, lo: f64) -> Wide {
        let s = hi + lo;
        Wide {
            hi: s,
            lo: lo - (s - hi),
        }
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, o: Wide) -> Wide {
        let s = Wide::two_sum(self.hi, o.hi);
        let t = Wide::two_sum(self.lo, o.lo);
        let r = Wide::renormalize(s.hi, s.lo + t.hi);
        Wide::renormalize(r.hi, r.lo + t.lo)
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, o: Wide) -> Wide {
        self + -o
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, o: Wide) -> Wide {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Wide::renormalize(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Real for Wide {
    fn constant(c: f64) -> Self {
        Wide { hi: c, lo: 0.0 }
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }

    fn ln(&self) -> Self {
        // One Newton step on exp(y) = x from y₀ = ln(hi).
        let y = self.hi.ln();
        let correction = (*self - Wide::constant(y.exp())) * Wide::constant((-y).exp());
        Wide::two_sum(y, correction.value())
    }
}

/// A form on ℝ⁵ stored densely by mask.
type Dense<T> = Vec<T>;

fn zero_form<T: Real>() -> Dense<T> {
    vec![T::constant(0.0); MASKS]
}

fn wedge<T: Real>(a: &Dense<T>, p: usize, b: &Dense<T>, q: usize) -> Dense<T> {
    let mut out: Dense<T> = zero_form();
    for &ma in basis_masks(N, p) {
        for &mb in basis_masks(N, q) {
            if ma & mb != 0 {
                continue;
            }
            let prod = a[ma as usize].clone() * b[mb as usize].clone();
            let slot = &mut out[(ma | mb) as usize];
            *slot = if wedge_sign(ma, mb) {
                slot.clone() - prod
            } else {
                slot.clone() + prod
            };
        }
    }
    out
}

fn add_forms<T: Real>(a: &Dense<T>, b: &Dense<T>) -> Dense<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

fn norm2<T: Real>(a: &Dense<T>) -> T {
    a.iter()
        .fold(T::constant(0.0), |acc, x| acc + x.clone() * x.clone())
}

/// Structure constants of a five-dimensional algebra in floating point.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    /// d(e^m) as (mask, coefficient) pairs, for every mask m.
    d: Vec<Vec<(Mask, f64)>>,
}

impl SearchProblem {
    pub fn new(g: &LieAlgebra) -> Result<Self, SearchError> {
        if g.dim() != N {
            return Err(SearchError::Dimension(g.dim()));
        }
        let mut d = vec![Vec::new(); MASKS];
        for (m, slot) in d.iter_mut().enumerate() {
            let image = g.d(&KForm::from_mask(N, m as Mask, 1.into()));
            *slot = image.terms().map(|(t, c)| (t, c.to_f64())).collect();
        }
        Ok(SearchProblem { d })
    }

    fn apply_d<T: Real>(&self, f: &Dense<T>) -> Dense<T> {
        let mut out: Dense<T> = zero_form();
        for (m, c) in f.iter().enumerate() {
            for &(t, k) in &self.d[m] {
                out[t as usize] = out[t as usize].clone() + c.clone() * T::constant(k);
            }
        }
        out
    }

    fn rows<T: Real>(m: &[T]) -> Vec<Dense<T>> {
        (0..N)
            .map(|a| {
                let mut f = zero_form();
                for i in 0..N {
                    f[1 << i] = m[N * a + i].clone();
                }
                f
            })
            .collect()
    }

    /// Closure residual of (α, ω₁, ω₂, ω₃) with ω₂, ω₃ rotated by (c, s).
    fn closure<T: Real>(&self, f: &[Dense<T>], c: f64, s: f64) -> T {
        let w = |a: usize, b: usize| wedge(&f[a], 1, &f[b], 1);
        let w1 = add_forms(&w(0, 1), &w(2, 3));
        let w2 = add_forms(&w(0, 2), &w(3, 1));
        let w3 = add_forms(&w(0, 3), &w(1, 2));
        let rot = |x: &Dense<T>, y: &Dense<T>, a: f64, b: f64| -> Dense<T> {
            x.iter()
                .zip(y)
                .map(|(p, q)| p.clone() * T::constant(a) + q.clone() * T::constant(b))
                .collect()
        };
        let (w2, w3) = (rot(&w2, &w3, c, -s), rot(&w2, &w3, s, c));
        let alpha = &f[4];
        norm2(&self.apply_d(&w1))
            + norm2(&self.apply_d(&wedge(&w2, 2, alpha, 1)))
            + norm2(&self.apply_d(&wedge(&w3, 2, alpha, 1)))
    }

    fn det<T: Real>(f: &[Dense<T>]) -> T {
        let mut acc = f[0].clone();
        for (k, row) in f.iter().enumerate().skip(1) {
            acc = wedge(&acc, k, row, 1);
        }
        acc[MASKS - 1].clone()
    }

    fn objective_generic<T: Real>(&self, m: &[T]) -> T {
        let f = Self::rows(m);
        let det = Self::det(&f);
        let log = (det.clone() * det).ln();
        self.closure(&f, 1.0, 0.0) + T::constant(BARRIER_WEIGHT) * log.clone() * log
    }

    /// The closure residual R, without the barrier.
    pub fn residual(&self, m: &Matrix) -> f64 {
        self.closure(&Self::rows(m.as_slice()), 1.0, 0.0)
    }

    /// R after rotating (ω₂, ω₃) to (cω₂ − sω₃, sω₂ + cω₃).
    pub fn residual_rotated(&self, m: &Matrix, c: f64, s: f64) -> f64 {
        self.closure(&Self::rows(m.as_slice()), c, s)
    }

    /// R plus the determinant barrier.
    pub fn objective(&self, m: &Matrix) -> f64 {
        self.objective_generic(m.as_slice())
    }

    pub fn gradient(&self, m: &Matrix) -> (f64, Matrix) {
        let vars: Vec<Dual> = m
            .iter()
            .enumerate()
            .map(|(k, &v)| Dual::variable(v, k))
            .collect();
        let out = self.objective_generic(&vars);
        (out.v, out.g)
    }

    /// Gradient of R alone.
    pub fn residual_gradient(&self, m: &Matrix) -> Matrix {
        let vars: Vec<Dual> = m
            .iter()
            .enumerate()
            .map(|(k, &v)| Dual::variable(v, k))
            .collect();
        self.closure(&Self::rows(&vars), 1.0, 0.0).g
    }
}

/// Converts an exact coframe to floating point.
pub fn matrix_of(coframe: &Coframe) -> Matrix {
    let mut m = [0.0; VARS];
    for (a, f) in coframe.forms().iter().enumerate() {
        for (i, c) in f.to_dense().iter().enumerate() {
            m[N * a + i] = c.to_f64();
        }
    }
    m
}

/// Largest entrywise relative error between the analytic gradient of the
/// objective and central differences with step h. The differences are taken
/// in double-double arithmetic, so the comparison measures the gradient rather
/// than cancellation in the objective.
pub fn gradient_check(problem: &SearchProblem, m: &Matrix, h: f64) -> f64 {
    let (_, g) = problem.gradient(m);
    let scale = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut worst = 0.0f64;
    for k in 0..VARS {
        let shifted = |delta: f64| -> Vec<Wide> {
            let mut w: Vec<Wide> = m.iter().map(|&v| Wide::constant(v)).collect();
            w[k] = w[k] + Wide::constant(delta);
            w
        };
        let diff = problem.objective_generic(&shifted(h)) - problem.objective_generic(&shifted(-h));
        let fd = diff.value() / (2.0 * h);
        let denom = g[k]
            .abs()
            .max(fd.abs())
            .max(1e-6 * scale)
            .max(f64::MIN_POSITIVE);
        worst = worst.max((g[k] - fd).abs() / denom);
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub coframe: Matrix,
    pub residual: f64,
    pub restart: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 20,
            seed: 0,
            tol: 1e-10,
            max_iter: 20_000,
        }
    }
}

/// A random orthogonal matrix: Gram–Schmidt on Gaussian rows.
pub fn random_orthogonal(rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let mut rows: Vec<[f64; N]> = (0..N)
            .map(|_| std::array::from_fn(|_| StandardNormal.sample(rng)))
            .collect();
        let mut ok = true;
        for a in 0..N {
            for b in 0..a {
                let dot: f64 = (0..N).map(|i| rows[a][i] * rows[b][i]).sum();
                for i in 0..N {
                    rows[a][i] -= dot * rows[b][i];
                }
            }
            let norm = rows[a].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            rows[a].iter_mut().for_each(|x| *x /= norm);
        }
        if ok {
            return std::array::from_fn(|k| rows[k / N][k % N]);
        }
    }
}

/// Gradient descent with Barzilai–Borwein trial steps and Armijo
/// backtracking, from `start`; stops once R drops well below `tol`.
pub fn minimize(problem: &SearchProblem, start: Matrix, tol: f64, max_iter: usize) -> Matrix {
    const ARMIJO: f64 = 1e-4;
    let mut x = start;
    let (mut fx, mut gx) = problem.gradient(&x);
    let mut step = 1e-2;
    for _ in 0..max_iter {
        if problem.residual(&x) < tol * 1e-3 {
            break;
        }
        let gn2: f64 = gx.iter().map(|v| v * v).sum();
        if gn2 < 1e-40 {
            break;
        }
        let mut t = step;
        let accepted = loop {
            let xn: Matrix = std::array::from_fn(|k| x[k] - t * gx[k]);
            let fnew = problem.objective(&xn);
            if fnew.is_finite() && fnew <= fx - ARMIJO * t * gn2 {
                break Some(xn);
            }
            t *= 0.5;
            if t < 1e-20 {
                break None;
            }
        };
        let Some(xn) = accepted else { break };
        let (fnew, gnew) = problem.gradient(&xn);
        let sy: f64 = (0..VARS).map(|k| (xn[k] - x[k]) * (gnew[k] - gx[k])).sum();
        let ss: f64 = (0..VARS).map(|k| (xn[k] - x[k]).powi(2)).sum();
        step = if sy > 0.0 {
            (ss / sy).clamp(1e-10, 1e3)
        } else {
            t * 2.0
        };
        x = xn;
        fx = fnew;
        gx = gnew;
    }
    x
}

/// Seeded multi-start search; candidates with R < tol, best first.
pub fn search_hypo(g: &LieAlgebra, opts: SearchOptions) -> Result<Vec<Candidate>, SearchError> {
    let problem = SearchProblem::new(g)?;
    let mut found: Vec<Candidate> = (0..opts.restarts)
        .into_par_iter()
        .filter_map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ restart as u64,
            );
            let start = random_orthogonal(&mut rng);
            let m = minimize(&problem, start, opts.tol, opts.max_iter);
            let residual = problem.residual(&m);
            (residual < opts.tol).then_some(Candidate {
                coframe: m,
                residual,
                restart,
            })
        })
        .collect();
    found.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then(a.restart.cmp(&b.restart))
    });
    Ok(found)
}
