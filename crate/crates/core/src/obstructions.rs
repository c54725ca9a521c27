//! Obstructions to hypo structures on five-dimensional Lie algebras and the
//! verdict pipeline that combines them with known witnesses.
//!
//! Notation: Zᵏ are the closed k-forms, L_γ(η) = γ∧η, β_mod the modular form
//! X ↦ tr ad X. A hypo structure (α, ωᵢ) has ω₁, ω₂∧α, ω₃∧α closed; every
//! test below rules out a set of candidate almost-contact forms α, and a
//! NOT_HYPO verdict is returned only when the union covers every α.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{KForm, Subspace, Vector};
use crate::liealg::LieAlgebra;
use crate::linalg;
use crate::scalar::Scalar;
use crate::splitting::{
    coherent_from_2form, find_obstruction_2form, find_vanishing_2form, vanishing_criterion,
};
use crate::su2hypo::{self, Coframe};
use crate::upoly::UPoly;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("α and β are linearly dependent")]
    Dependent,
    #[error("expected 1-forms on the algebra")]
    Shape,
}

/// Extra inputs for the pipeline, typically read from the catalog.
#[derive(Clone, Debug, Default)]
pub struct Hints {
    pub coframes: Vec<Coframe>,
    pub phis: Vec<KForm>,
    pub gammas: Vec<KForm>,
    pub vectors: Vec<Vector<Scalar>>,
}

/// The subspace of 1-forms that may still be the almost-contact form.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaConstraint {
    space: Subspace,
}

impl AlphaConstraint {
    pub fn full(n: usize) -> Self {
        AlphaConstraint {
            space: Subspace::full(n, 1),
        }
    }

    pub fn new(space: Subspace) -> Self {
        assert_eq!(space.degree(), 1, "α-constraints live in degree 1");
        AlphaConstraint { space }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Intersects with another constraint; never grows.
    pub fn restrict(&self, other: &Subspace) -> Self {
        AlphaConstraint {
            space: self.space.intersect(other),
        }
    }
}

fn one_forms_ok(g: &LieAlgebra, forms: &[&KForm]) -> bool {
    forms.iter().all(|f| f.dim() == g.dim() && f.degree() == 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop3Outcome {
    pub phi: KForm,
    /// Whether φ also defines a coherent splitting; the vanishing conditions
    /// alone already obstruct.
    pub coherent: bool,
}

/// A decomposable φ with Z²∧φ = Z³∧φ = 0, preferring coherent ones.
pub fn prop3(g: &LieAlgebra, phis: &[KForm]) -> Option<Prop3Outcome> {
    if let Some(phi) = find_obstruction_2form(g, phis) {
        return Some(Prop3Outcome {
            phi,
            coherent: true,
        });
    }
    find_vanishing_2form(g, phis).map(|phi| Prop3Outcome {
        phi,
        coherent: false,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop4Outcome {
    /// dim L_β(V) with V = ker L_α ∩ Z³.
    pub image_dim: usize,
    /// L_α(L_β(Z²)) ⊆ L_β(V), computed when image_dim = 2.
    pub containment: Option<bool>,
    pub obstructed: bool,
}

/// Tests whether no hypo structure has almost-contact form α, using β.
pub fn prop4(
    g: &LieAlgebra,
    alpha: &KForm,
    beta: &KForm,
) -> Result<Prop4Outcome, ObstructionError> {
    if !one_forms_ok(g, &[alpha, beta]) {
        return Err(ObstructionError::Shape);
    }
    if alpha.wedge(beta).is_zero() {
        return Err(ObstructionError::Dependent);
    }
    let n = g.dim();
    let z3 = g.closed_forms(3);
    let zero4 = Subspace::zero(n, 4);
    let v = z3.preimage(|c| vec![alpha.wedge(c)], &[&zero4]);
    let lbv = v.wedge_form(beta);
    let image_dim = lbv.dim();
    let containment = (image_dim == 2).then(|| {
        g.closed_forms(2)
            .wedge_form(beta)
            .wedge_form(alpha)
            .is_subspace_of(&lbv)
    });
    Ok(Prop4Outcome {
        image_dim,
        obstructed: image_dim < 2 || containment == Some(true),
        containment,
    })
}

/// Prop. 4 applied with a fixed β to every α of a subspace at once.
///
/// With L = L_β(Z³): if dim L < 2, every α independent of β is obstructed.
/// If dim L = 2, an α with α∧L ≠ 0 has dim L_β(V) < 2, and an α with
/// α∧L = 0 is obstructed when α∧β∧Z² ⊆ L; both conditions are linear.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTest {
    pub beta: KForm,
    pub constraint: Subspace,
    pub image_dim: usize,
    /// {α in the constraint : α∧L = 0}, when dim L = 2.
    pub annihilator: Option<Subspace>,
    /// The α that escape the test (apart from multiples of β).
    pub remaining: Subspace,
    pub covered: bool,
}

pub fn beta_test(g: &LieAlgebra, beta: &KForm, constraint: &Subspace) -> BetaTest {
    let n = g.dim();
    let l = g.closed_forms(3).wedge_form(beta);
    let image_dim = l.dim();
    let (annihilator, remaining) = match image_dim {
        0 | 1 => (None, Subspace::zero(n, 1)),
        2 => {
            let zero5 = Subspace::zero(n, 5);
            let lb = l.basis();
            let ann = constraint.preimage(
                |a| lb.iter().map(|x| a.wedge(x)).collect(),
                &[&zero5, &zero5],
            );
            let z2b: Vec<KForm> = g.closed_forms(2).wedge_form(beta).basis();
            let targets: Vec<&Subspace> = z2b.iter().map(|_| &l).collect();
            let contained = ann.preimage(|a| z2b.iter().map(|x| x.wedge(a)).collect(), &targets);
            let remaining = if contained == ann {
                Subspace::zero(n, 1)
            } else {
                ann.clone()
            };
            (Some(ann), remaining)
        }
        _ => (None, constraint.clone()),
    };
    BetaTest {
        beta: beta.clone(),
        constraint: constraint.clone(),
        image_dim,
        annihilator,
        covered: remaining.is_zero(),
        remaining,
    }
}

/// Prop. 6: the modular-form version of [`beta_test`] on all of g*; `None`
/// for unimodular algebras.
pub fn prop6(g: &LieAlgebra) -> Option<BetaTest> {
    let beta = g.modular_form();
    if beta.is_zero() {
        return None;
    }
    Some(beta_test(g, &beta, &Subspace::full(g.dim(), 1)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma3Condition {
    pub x: Vector<Scalar>,
    pub gamma: KForm,
    /// dim (X⌟Z³)∧γ, below 2.
    pub dim: usize,
}

fn lemma3_dim(g: &LieAlgebra, x: &Vector<Scalar>, gamma: &KForm) -> usize {
    g.closed_forms(3)
        .contract(x)
        .expect("degree 3")
        .wedge_form(gamma)
        .dim()
}

fn pair_combinations(n: usize, coeffs: &[i64], vector: bool) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (vector && j < i) {
                continue;
            }
            for &c in coeffs {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                v[j] = Scalar::from_int(c);
                out.push(v);
            }
        }
    }
    out
}

/// Candidate vectors X: basis vectors and eᵢ ± eⱼ, then `extra`.
fn lemma3_vectors(n: usize, extra: &[Vector<Scalar>]) -> Vec<Vector<Scalar>> {
    let mut out: Vec<Vector<Scalar>> = (1..=n).map(|i| Vector::e(n, i)).collect();
    out.extend(
        pair_combinations(n, &[1, -1], true)
            .into_iter()
            .map(Vector::new),
    );
    out.extend(extra.iter().cloned());
    out
}

/// Candidate γ: basis covectors, eⁱ ± eʲ, eⁱ ± 2eʲ, then `extra`.
fn lemma3_gammas(n: usize, extra: &[KForm]) -> Vec<KForm> {
    let mut out: Vec<KForm> = (1..=n).map(|i| KForm::e(n, i)).collect();
    for v in pair_combinations(n, &[1, -1], true)
        .into_iter()
        .chain(pair_combinations(n, &[2, -2], false))
    {
        out.push(KForm::from_dense(n, 1, &v));
    }
    out.extend(extra.iter().filter(|f| f.degree() == 1).cloned());
    out
}

fn annihilator_of_vectors(n: usize, xs: &[Vector<Scalar>]) -> Subspace {
    if xs.is_empty() {
        return Subspace::full(n, 1);
    }
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| xs.iter().map(|x| x.coords()[i].clone()).collect())
        .collect();
    let forms: Vec<KForm> = linalg::left_kernel(&rows)
        .iter()
        .map(|c| KForm::from_dense(n, 1, c))
        .collect();
    Subspace::span(n, 1, &forms).expect("1-forms")
}

/// Lemma 3: α(X) = 0 whenever dim (X⌟Z³)∧γ < 2 for some γ.
pub fn lemma3_constraints(
    g: &LieAlgebra,
    vectors: &[Vector<Scalar>],
    gammas: &[KForm],
) -> (AlphaConstraint, Vec<Lemma3Condition>) {
    let n = g.dim();
    let gammas = lemma3_gammas(n, gammas);
    let mut conditions: Vec<Lemma3Condition> = Vec::new();
    let mut constraint = Subspace::full(n, 1);
    for x in lemma3_vectors(n, vectors) {
        // Skip X already forced: every α in the constraint vanishes on it.
        if constraint.basis().iter().all(|a| x.pair(a).is_zero()) {
            continue;
        }
        for gamma in &gammas {
            let dim = lemma3_dim(g, &x, gamma);
            if dim < 2 {
                conditions.push(Lemma3Condition {
                    x: x.clone(),
                    gamma: gamma.clone(),
                    dim,
                });
                let xs: Vec<Vector<Scalar>> = conditions.iter().map(|c| c.x.clone()).collect();
                constraint = annihilator_of_vectors(n, &xs);
                break;
            }
        }
    }
    (AlphaConstraint::new(constraint), conditions)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq4Outcome {
    pub constraint: Subspace,
    /// {α in the constraint : (Z²)²∧α = 0}.
    pub kernel: Subspace,
    pub covered: bool,
}

/// A hypo α satisfies 0 ≠ ω₁²∧α ∈ (Z²)²∧α; the α in `kernel` violate it.
pub fn eq4_check(g: &LieAlgebra, constraint: &AlphaConstraint) -> Eq4Outcome {
    let n = g.dim();
    let z2 = g.closed_forms(2);
    let w = z2.wedge_subspace(z2).basis();
    let zero5 = Subspace::zero(n, 5);
    let targets: Vec<&Subspace> = w.iter().map(|_| &zero5).collect();
    let kernel = constraint
        .space()
        .preimage(|a| w.iter().map(|x| x.wedge(a)).collect(), &targets);
    Eq4Outcome {
        constraint: constraint.space().clone(),
        covered: kernel == *constraint.space(),
        kernel,
    }
}

fn eq4_excludes(g: &LieAlgebra, alpha: &KForm) -> bool {
    let z2 = g.closed_forms(2);
    z2.wedge_subspace(z2).wedge_form(alpha).is_zero()
}

/// Why a single α (up to scale) admits no hypo structure.
#[derive(Clone, Debug, PartialEq)]
pub enum PointReason {
    /// (Z²)²∧α = 0.
    Eq4,
    /// α is a multiple of the nonzero modular form.
    Modular,
    Prop4 {
        beta: KForm,
        outcome: Prop4Outcome,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub alpha: KForm,
    pub reason: PointReason,
}

impl PointCheck {
    fn verify(&self, g: &LieAlgebra) -> bool {
        if self.alpha.is_zero() {
            return false;
        }
        match &self.reason {
            PointReason::Eq4 => eq4_excludes(g, &self.alpha),
            PointReason::Modular => {
                let b = g.modular_form();
                !b.is_zero() && b.wedge(&self.alpha).is_zero()
            }
            PointReason::Prop4 { beta, outcome } => {
                prop4(g, &self.alpha, beta).is_ok_and(|o| o == *outcome && o.obstructed)
            }
        }
    }
}

/// Ranks along the pencil α(t) = u + t·v for fixed β:
/// r₁ = rank(γ ↦ α∧γ), r₂ = rank(γ ↦ (α∧γ, β∧γ)) on Z³, and r₃ the rank
/// after adjoining ζ ↦ (0, α∧β∧ζ) on Z². Then dim L_β(V) = r₂ − r₁ and the
/// containment of Prop. 4 holds iff r₃ = r₂.
struct PencilMatrices {
    m0: [Vec<Vec<Q>>; 3],
    m1: [Vec<Vec<Q>>; 3],
}

fn dense_q(f: &KForm) -> Option<Vec<Q>> {
    f.to_dense().iter().map(Scalar::to_rational).collect()
}

impl PencilMatrices {
    fn new(g: &LieAlgebra, u: &KForm, v: &KForm, beta: &KForm) -> Option<Self> {
        let n = g.dim();
        let z3 = g.closed_forms(3).basis();
        let z2 = g.closed_forms(2).basis();
        let zero4 = KForm::zero(n, 4);
        let build = |alpha: &KForm, with_beta: bool| -> Option<[Vec<Vec<Q>>; 3]> {
            let mut m1 = Vec::new();
            let mut m2 = Vec::new();
            for c in &z3 {
                let a = dense_q(&alpha.wedge(c))?;
                let b = if with_beta {
                    dense_q(&beta.wedge(c))?
                } else {
                    dense_q(&zero4)?
                };
                m1.push(a.clone());
                m2.push([a, b].concat());
            }
            let mut m3 = m2.clone();
            for z in &z2 {
                m3.push([dense_q(&zero4)?, dense_q(&alpha.wedge(beta).wedge(z))?].concat());
            }
            Some([m1, m2, m3])
        };
        // β∧γ does not depend on t, so the t-part leaves its block out.
        Some(PencilMatrices {
            m0: build(u, true)?,
            m1: build(v, false)?,
        })
    }

    fn at(&self, k: usize, t: &Q) -> Vec<Vec<Q>> {
        self.m0[k]
            .iter()
            .zip(&self.m1[k])
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y * t).collect())
            .collect()
    }

    /// Generic rank and a nonzero maximal minor as a polynomial in t; the
    /// rank drops only at roots of the minor.
    fn generic(&self, k: usize) -> (usize, UPoly) {
        let rows = self.m0[k].len();
        let cols = self.m0[k].first().map_or(0, Vec::len);
        let samples = rows.min(cols) + 2;
        let mut best = (0usize, Q::zero());
        for s in 0..samples as i64 {
            let t = Q::from_integer(s.into());
            let r = linalg::rank(&self.at(k, &t));
            if r > best.0 {
                best = (r, t);
            }
        }
        let (r, t0) = best;
        if r == 0 {
            return (0, UPoly::one());
        }
        let m = self.at(k, &t0);
        let (_, col_piv) = linalg::rref(m.clone());
        let restricted: Vec<Vec<Q>> = m
            .iter()
            .map(|row| col_piv.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let (_, row_piv) = linalg::rref(linalg::transpose(&restricted));
        let minor_at = |t: &Q| -> Q {
            let full = self.at(k, t);
            let sub: Vec<Vec<Q>> = row_piv
                .iter()
                .map(|&i| col_piv.iter().map(|&c| full[i][c].clone()).collect())
                .collect();
            linalg::determinant(&sub)
        };
        let pts: Vec<(Q, Q)> = (0..=r as i64)
            .map(|s| {
                let t = Q::from_integer(s.into());
                let d = minor_at(&t);
                (t, d)
            })
            .collect();
        let minor = UPoly::interpolate(&pts);
        debug_assert!(!minor.is_zero());
        (r, minor)
    }
}

fn obstructed_by_ranks(r: [usize; 3]) -> bool {
    let image = r[1] - r[0];
    image < 2 || (image == 2 && r[2] == r[1])
}

/// Generic behaviour of a β along a pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilBeta {
    pub beta: KForm,
    pub ranks: [usize; 3],
    /// Product of the minors; outside its roots the ranks are generic.
    pub minor: UPoly,
    /// Parameter at which α(t) is a multiple of β, if any.
    pub collinear_at: Option<Q>,
}

fn pencil_beta(g: &LieAlgebra, u: &KForm, v: &KForm, beta: &KForm) -> Option<PencilBeta> {
    let mats = PencilMatrices::new(g, u, v, beta)?;
    let mut ranks = [0; 3];
    let mut minor = UPoly::one();
    for k in 0..3 {
        let (r, m) = mats.generic(k);
        ranks[k] = r;
        minor = minor.mul(&m);
    }
    Some(PencilBeta {
        beta: beta.clone(),
        ranks,
        minor,
        collinear_at: collinear_parameter(u, v, beta),
    })
}

/// t with u + t·v ∝ β, when β lies in span(u, v) and is not a multiple of v.
fn collinear_parameter(u: &KForm, v: &KForm, beta: &KForm) -> Option<Q> {
    if !u.wedge(v).wedge(beta).is_zero() || beta.wedge(v).is_zero() {
        return None;
    }
    // β = a u + b v with a ≠ 0, so t = b / a.
    let rows: Vec<Vec<Q>> = [u, v, beta]
        .iter()
        .map(|f| dense_q(f))
        .collect::<Option<_>>()?;
    let rel = linalg::left_kernel(&rows);
    let c = rel.first()?;
    // c_u u + c_v v + c_β β = 0 with c_β ≠ 0 and c_u ≠ 0.
    Some(&c[1] / &c[0])
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilCheck {
    pub u: KForm,
    pub v: KForm,
    pub main: PencilBeta,
    /// Rational exceptional parameters, with v itself as the point at infinity.
    pub points: Vec<(Option<Q>, PointCheck)>,
    /// Squarefree part of the main minor without the checked rational roots.
    pub residual: UPoly,
    /// Further β whose generic obstruction covers the residual's roots.
    pub covers: Vec<PencilBeta>,
}

impl PencilCheck {
    fn verify(&self, g: &LieAlgebra) -> bool {
        let Some(main) = pencil_beta(g, &self.u, &self.v, &self.main.beta) else {
            return false;
        };
        if main != self.main || !obstructed_by_ranks(main.ranks) {
            return false;
        }
        let alpha_at = |t: &Option<Q>| match t {
            None => self.v.clone(),
            Some(t) => self.u.add(&self.v.scale(&Scalar::from_rational(t.clone()))),
        };
        for (t, p) in &self.points {
            if p.alpha != alpha_at(t) || !p.verify(g) {
                return false;
            }
        }
        if !self.points.iter().any(|(t, _)| t.is_none()) {
            return false;
        }
        if let Some(tc) = &main.collinear_at {
            if !self.points.iter().any(|(t, _)| t.as_ref() == Some(tc)) {
                return false;
            }
        }
        let rational: Vec<Q> = self.points.iter().filter_map(|(t, _)| t.clone()).collect();
        let mut f = main.minor.squarefree();
        for r in &rational {
            let (q, rem) = f.div_rem(&UPoly::linear_root(r));
            if rem.is_zero() {
                f = q;
            }
        }
        if f.monic() != self.residual {
            return false;
        }
        let mut f = self.residual.clone();
        for c in &self.covers {
            match pencil_beta(g, &self.u, &self.v, &c.beta) {
                Some(pb) if pb == *c && obstructed_by_ranks(pb.ranks) => {
                    f = f.gcd(&cover_poly(&pb))
                }
                _ => return false,
            }
        }
        f.real_root_count() == 0
    }
}

fn cover_poly(pb: &PencilBeta) -> UPoly {
    match &pb.collinear_at {
        Some(t) => pb.minor.mul(&UPoly::linear_root(t)),
        None => pb.minor.clone(),
    }
}

/// One entry of an obstruction trace.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Prop3(Prop3Outcome),
    Prop6(BetaTest),
    Lemma3 {
        conditions: Vec<Lemma3Condition>,
        constraint: Subspace,
    },
    Eq4(Eq4Outcome),
    Beta(BetaTest),
    Point(PointCheck),
    Pencil(PencilCheck),
}

impl Step {
    /// Recomputes the recorded quantities on `g`.
    pub fn verify(&self, g: &LieAlgebra) -> bool {
        match self {
            Step::Prop3(o) => {
                vanishing_criterion(g, &o.phi).unwrap_or(false)
                    && (!o.coherent || coherent_from_2form(g, &o.phi).is_ok())
            }
            Step::Prop6(t) => {
                g.modular_form() == t.beta && beta_test(g, &t.beta, &t.constraint) == *t
            }
            Step::Beta(t) => beta_test(g, &t.beta, &t.constraint) == *t,
            Step::Lemma3 {
                conditions,
                constraint,
            } => {
                conditions
                    .iter()
                    .all(|c| c.dim < 2 && lemma3_dim(g, &c.x, &c.gamma) == c.dim)
                    && {
                        let xs: Vec<Vector<Scalar>> =
                            conditions.iter().map(|c| c.x.clone()).collect();
                        annihilator_of_vectors(g.dim(), &xs) == *constraint
                    }
            }
            Step::Eq4(o) => eq4_check(g, &AlphaConstraint::new(o.constraint.clone())) == *o,
            Step::Point(p) => p.verify(g),
            Step::Pencil(p) => p.verify(g),
        }
    }

    pub fn summary(&self) -> String {
        self.render(Style::Text)
    }

    pub fn render(&self, style: Style) -> String {
        let form = |f: &KForm| style.form(f);
        match self {
            Step::Prop3(o) => format!(
                "prop3 phi={}{}",
                form(&o.phi),
                if o.coherent { "" } else { " (vanishing only)" }
            ),
            Step::Prop6(t) => format!(
                "prop6 beta={} dim={}{}",
                form(&t.beta),
                t.image_dim,
                covered_tag(t)
            ),
            Step::Beta(t) => format!(
                "prop4-uniform beta={} dim={} on dim {}{}",
                form(&t.beta),
                t.image_dim,
                t.constraint.dim(),
                covered_tag(t)
            ),
            Step::Lemma3 { constraint, .. } => {
                format!("lemma3 alpha in {}", style.span(constraint))
            }
            Step::Eq4(o) => format!(
                "eq4 kernel dim {} of {}{}",
                o.kernel.dim(),
                o.constraint.dim(),
                if o.covered { " covers" } else { "" }
            ),
            Step::Point(p) => format!("point {}", point_summary(p, style)),
            Step::Pencil(p) => format!(
                "pencil {}+t*{} beta={} ranks={:?} points={} covers={}",
                form(&p.u),
                form(&p.v),
                form(&p.main.beta),
                p.main.ranks,
                p.points.len(),
                p.covers.len()
            ),
        }
    }
}

fn covered_tag(t: &BetaTest) -> &'static str {
    if t.covered {
        " covers"
    } else {
        ""
    }
}

fn point_summary(p: &PointCheck, style: Style) -> String {
    let reason = match &p.reason {
        PointReason::Eq4 => "eq4".to_string(),
        PointReason::Modular => "modular".to_string(),
        PointReason::Prop4 { beta, outcome } => {
            format!("prop4 beta={} dim={}", style.form(beta), outcome.image_dim)
        }
    };
    format!("alpha={} by {reason}", style.form(&p.alpha))
}

/// A form with machine-format coefficients, e.g. `1*e^{45}-1/2*e^{12}`.
pub fn machine_form(f: &KForm) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = f
        .terms()
        .map(|(m, c)| {
            let idx: String = crate::exterior::mask_indices(m)
                .iter()
                .map(|i| (i + 1).to_string())
                .collect();
            format!("({})*e^{{{idx}}}", c.to_machine_string())
        })
        .collect();
    parts.join("+")
}

/// How forms appear in summaries: readable, or with every Scalar
/// coordinate spelled out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Machine,
}

impl Style {
    pub fn form(self, f: &KForm) -> String {
        match self {
            Style::Text => f.to_string(),
            Style::Machine => machine_form(f),
        }
    }

    fn span(self, s: &Subspace) -> String {
        let parts: Vec<String> = s.basis().iter().map(|f| self.form(f)).collect();
        format!("Span{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObstructionTrace {
    pub steps: Vec<Step>,
    /// Present on inconclusive traces.
    pub undecided: Option<String>,
}

impl ObstructionTrace {
    pub fn summary(&self) -> String {
        self.render(Style::Text)
    }

    pub fn render(&self, style: Style) -> String {
        let mut parts: Vec<String> = self.steps.iter().map(|s| s.render(style)).collect();
        if let Some(r) = &self.undecided {
            parts.push(format!("undecided: {r}"));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index} does not reproduce: {summary}")]
    Mismatch { index: usize, summary: String },
    #[error("the trace is inconclusive")]
    Inconclusive,
    #[error("the trace is empty")]
    Empty,
}

/// Re-executes every step of a NOT_HYPO trace from its recorded inputs.
pub fn replay(g: &LieAlgebra, trace: &ObstructionTrace) -> Result<(), ReplayError> {
    if trace.undecided.is_some() {
        return Err(ReplayError::Inconclusive);
    }
    if trace.steps.is_empty() {
        return Err(ReplayError::Empty);
    }
    for (index, s) in trace.steps.iter().enumerate() {
        if !s.verify(g) {
            return Err(ReplayError::Mismatch {
                index,
                summary: s.summary(),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Hypo(Coframe),
    NotHypo(ObstructionTrace),
    Undecided(ObstructionTrace),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Hypo(_) => "HYPO",
            Verdict::NotHypo(_) => "NOT_HYPO",
            Verdict::Undecided(_) => "UNDECIDED",
        }
    }

    pub fn summary(&self) -> String {
        self.render(Style::Text)
    }

    pub fn render(&self, style: Style) -> String {
        match self {
            Verdict::Hypo(c) => {
                let parts: Vec<String> = c.forms().iter().map(|f| style.form(f)).collect();
                format!("coframe {}", parts.join(","))
            }
            Verdict::NotHypo(t) | Verdict::Undecided(t) => t.render(style),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.summary())
    }
}

/// β candidates: the modular form, basis covectors, eⁱ ± eʲ, then hints.
fn beta_candidates(g: &LieAlgebra, hints: &Hints) -> Vec<KForm> {
    let n = g.dim();
    let mut out = Vec::new();
    let m = g.modular_form();
    if !m.is_zero() {
        out.push(m);
    }
    out.extend((1..=n).map(|i| KForm::e(n, i)));
    out.extend(
        pair_combinations(n, &[1, -1], true)
            .iter()
            .map(|v| KForm::from_dense(n, 1, v)),
    );
    out.extend(hints.gammas.iter().filter(|f| f.degree() == 1).cloned());
    out
}

struct Engine<'a> {
    g: &'a LieAlgebra,
    betas: Vec<KForm>,
    trace: ObstructionTrace,
}

impl Engine<'_> {
    fn point(&self, alpha: &KForm) -> Option<PointCheck> {
        if eq4_excludes(self.g, alpha) {
            return Some(PointCheck {
                alpha: alpha.clone(),
                reason: PointReason::Eq4,
            });
        }
        let m = self.g.modular_form();
        if !m.is_zero() && m.wedge(alpha).is_zero() {
            return Some(PointCheck {
                alpha: alpha.clone(),
                reason: PointReason::Modular,
            });
        }
        self.betas
            .iter()
            .find_map(|beta| match prop4(self.g, alpha, beta) {
                Ok(outcome) if outcome.obstructed => Some(PointCheck {
                    alpha: alpha.clone(),
                    reason: PointReason::Prop4 {
                        beta: beta.clone(),
                        outcome,
                    },
                }),
                _ => None,
            })
    }

    fn pencil(&self, u: &KForm, v: &KForm) -> Result<PencilCheck, String> {
        let mut points = Vec::new();
        let vp = self
            .point(v)
            .ok_or_else(|| format!("alpha={} unobstructed", v))?;
        points.push((None, vp));
        let candidates: Vec<PencilBeta> = self
            .betas
            .iter()
            .filter_map(|b| pencil_beta(self.g, u, v, b))
            .filter(|pb| obstructed_by_ranks(pb.ranks))
            .collect();
        let main = candidates
            .first()
            .cloned()
            .ok_or_else(|| "no beta obstructs a generic alpha of the pencil".to_string())?;
        let mut ts: Vec<Q> = main.minor.rational_roots().unwrap_or_default();
        if let Some(t) = &main.collinear_at {
            if !ts.contains(t) {
                ts.push(t.clone());
            }
        }
        ts.sort();
        for t in &ts {
            let alpha = u.add(&v.scale(&Scalar::from_rational(t.clone())));
            let p = self
                .point(&alpha)
                .ok_or_else(|| format!("alpha={} unobstructed", alpha))?;
            points.push((Some(t.clone()), p));
        }
        let mut residual = main.minor.squarefree();
        for t in &ts {
            let (q, rem) = residual.div_rem(&UPoly::linear_root(t));
            if rem.is_zero() {
                residual = q;
            }
        }
        let residual = residual.monic();
        let mut f = residual.clone();
        let mut covers = Vec::new();
        for pb in candidates.iter().skip(1) {
            if f.real_root_count() == 0 {
                break;
            }
            let next = f.gcd(&cover_poly(pb));
            if next.real_root_count() < f.real_root_count() {
                f = next;
                covers.push(pb.clone());
            }
        }
        if f.real_root_count() > 0 {
            return Err(format!(
                "pencil parameters at the roots of {f} are not covered"
            ));
        }
        Ok(PencilCheck {
            u: u.clone(),
            v: v.clone(),
            main,
            points,
            residual,
            covers,
        })
    }

    /// Obstructs every α in `a`; false when something escapes.
    fn cover(&mut self, mut a: Subspace) -> Result<(), String> {
        loop {
            if a.is_zero() {
                return Ok(());
            }
            let eq4 = eq4_check(self.g, &AlphaConstraint::new(a.clone()));
            if eq4.covered {
                self.trace.steps.push(Step::Eq4(eq4));
                return Ok(());
            }
            let mut shrunk = None;
            for beta in self.betas.clone() {
                let t = beta_test(self.g, &beta, &a);
                if t.covered {
                    let beta_point = a.contains(&beta).then(|| self.point(&beta));
                    match beta_point {
                        Some(None) => continue,
                        Some(Some(p)) => {
                            self.trace.steps.push(Step::Beta(t));
                            self.trace.steps.push(Step::Point(p));
                        }
                        None => self.trace.steps.push(Step::Beta(t)),
                    }
                    return Ok(());
                }
                if t.remaining.dim() < a.dim() {
                    shrunk = Some(t);
                    break;
                }
            }
            if let Some(t) = shrunk {
                a = t.remaining.clone();
                self.trace.steps.push(Step::Beta(t));
                continue;
            }
            let basis = a.basis();
            return match basis.len() {
                1 => {
                    let p = self
                        .point(&basis[0])
                        .ok_or_else(|| format!("alpha={} unobstructed", basis[0]))?;
                    self.trace.steps.push(Step::Point(p));
                    Ok(())
                }
                2 => {
                    let p = self.pencil(&basis[0], &basis[1])?;
                    self.trace.steps.push(Step::Pencil(p));
                    Ok(())
                }
                d => Err(format!("alpha ranges over a {d}-dimensional space")),
            };
        }
    }
}

/// Runs the obstruction tests; `Ok` carries a complete NOT_HYPO trace.
pub fn obstruct(g: &LieAlgebra, hints: &Hints) -> Result<ObstructionTrace, ObstructionTrace> {
    let n = g.dim();
    let mut engine = Engine {
        g,
        betas: beta_candidates(g, hints),
        trace: ObstructionTrace::default(),
    };
    if n != 5 {
        engine.trace.undecided = Some(format!("dimension {n} is not 5"));
        return Err(engine.trace);
    }
    if let Some(o) = prop3(g, &hints.phis) {
        engine.trace.steps.push(Step::Prop3(o));
        return Ok(engine.trace);
    }
    let mut a = Subspace::full(n, 1);
    if let Some(t) = prop6(g) {
        let covered = t.covered;
        let shrinks = t.remaining.dim() < a.dim();
        if covered || shrinks {
            a = t.remaining.clone();
            engine.trace.steps.push(Step::Prop6(t));
        }
        if covered {
            return Ok(engine.trace);
        }
    }
    let (lemma3, conditions) = lemma3_constraints(g, &hints.vectors, &hints.gammas);
    if !conditions.is_empty() {
        a = a.intersect(lemma3.space());
        engine.trace.steps.push(Step::Lemma3 {
            conditions,
            constraint: lemma3.space().clone(),
        });
    }
    match engine.cover(a) {
        Ok(()) => Ok(engine.trace),
        Err(reason) => {
            engine.trace.undecided = Some(reason);
            Err(engine.trace)
        }
    }
}

/// Coframes given by permutations of the basis, tried as a last resort.
fn permutation_coframes(n: usize) -> Vec<Coframe> {
    fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut perms = Vec::new();
    permute(&mut (1..=n).collect(), 0, &mut perms);
    perms
        .into_iter()
        .filter_map(|p| Coframe::new(p.iter().map(|&i| KForm::e(n, i)).collect()).ok())
        .collect()
}

/// Witness coframes first, then obstructions, then basis permutations.
pub fn verdict(g: &LieAlgebra, hints: &Hints) -> Verdict {
    if g.dim() == 5 {
        if let Some(c) = hints
            .coframes
            .iter()
            .find(|c| su2hypo::coframe_is_hypo(g, c))
        {
            return Verdict::Hypo(c.clone());
        }
    }
    match obstruct(g, hints) {
        Ok(trace) => Verdict::NotHypo(trace),
        Err(trace) => {
            if g.dim() == 5 {
                if let Some(c) = permutation_coframes(5)
                    .into_iter()
                    .find(|c| su2hypo::coframe_is_hypo(g, c))
                {
                    return Verdict::Hypo(c);
                }
            }
            Verdict::Undecided(trace)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::notation::{parse_constants, parse_one_forms};

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::new(parse_constants::<Scalar>(s).unwrap()).unwrap()
    }

    fn f1(s: &str) -> KForm {
        parse_one_forms::<Scalar>(s, 5).unwrap().remove(0)
    }

    fn span1(s: &str) -> Subspace {
        Subspace::span(5, 1, &parse_one_forms::<Scalar>(s, 5).unwrap()).unwrap()
    }

    #[test]
    fn prop3_examples() {
        let a512 = alg("(e^{15}+e^{25},e^{25}+e^{35},e^{35}+e^{45},e^{45},0)");
        let o = prop3(&a512, &[]).unwrap();
        assert!(o.coherent);
        assert!(vanishing_criterion(&a512, &o.phi).unwrap());
        let d1 = alg("(e^{24}+e^{35},0,0,0,0)");
        assert!(prop3(&d1, &[]).is_none());
        let a45 = alg("(e^{14},-e^{24},-e^{34},0,0)");
        let o = prop3(&a45, &[]).unwrap();
        assert_eq!(o.phi, KForm::monomial(5, &[1, 4], Scalar::one()));
    }

    #[test]
    fn lemma3_examples() {
        let d3 = alg("(e^{25}+e^{34},e^{35},e^{45},0,0)");
        let (c, _) = lemma3_constraints(&d3, &[], &[]);
        assert!(c.space().is_subspace_of(&span1("e3,e4,e5")));
        let d4 = alg("(e^{15}-e^{23},-e^{25},2 e^{35},-2 e^{45},0)");
        let (c, _) = lemma3_constraints(&d4, &[], &[]);
        assert_eq!(*c.space(), span1("e5"));
        let (c, conds) = lemma3_constraints(&LieAlgebra::abelian(5), &[], &[]);
        assert_eq!(c.dim(), 5);
        assert!(conds.is_empty());
    }

    #[test]
    fn prop4_examples() {
        let d3 = alg("(e^{25}+e^{34},e^{35},e^{45},0,0)");
        let o = prop4(&d3, &f1("e3+2e4"), &f1("e5")).unwrap();
        assert!(o.obstructed);
        let d4 = alg("(e^{15}-e^{23},-e^{25},2 e^{35},-2 e^{45},0)");
        let o = prop4(&d4, &f1("e5"), &f1("e3")).unwrap();
        assert_eq!(o.image_dim, 2);
        assert_eq!(o.containment, Some(true));
        let ab = LieAlgebra::abelian(5);
        let o = prop4(&ab, &f1("e5"), &f1("e1")).unwrap();
        assert!(o.image_dim > 2 && !o.obstructed);
        assert_eq!(
            prop4(&ab, &f1("e5"), &f1("2e5")),
            Err(ObstructionError::Dependent)
        );
    }

    #[test]
    fn prop6_examples() {
        let a47 = alg("(e^{23}+2e^{14},e^{24}+e^{34},e^{34},0,0)");
        let t = prop6(&a47).unwrap();
        assert_eq!(t.image_dim, 1);
        assert!(t.covered);
        let a410 = alg("(e^{13}+e^{24},e^{23}-e^{14},0,0,0)");
        let t = prop6(&a410).unwrap();
        assert_eq!(t.image_dim, 2);
        assert!(t.covered);
        let d4 = alg("(-2e^{15}-e^{23},-e^{25},-e^{35},3e^{45},0)");
        assert!(!prop6(&d4).unwrap().covered);
        assert!(prop6(&LieAlgebra::abelian(5)).is_none());
    }

    #[test]
    fn eq4_examples() {
        let a513 = alg("(e^{15},e^{25},-1/2 e^{35}+e^{45},-e^{35}-1/2 e^{45},0)");
        assert!(eq4_check(&a513, &AlphaConstraint::full(5)).covered);
        let d10 = alg("(-2e^{15}-e^{23},-e^{25}+e^{35},-e^{25}-e^{35},-e^{45},0)");
        assert!(eq4_check(&d10, &AlphaConstraint::new(span1("e2,e3,e5"))).covered);
        assert!(!eq4_check(&LieAlgebra::abelian(5), &AlphaConstraint::full(5)).covered);
    }

    #[test]
    fn verdict_examples() {
        let d22 = alg("(e^{23}+2e^{14},e^{24}+e^{35},e^{34}-e^{25},0,0)");
        let cf = Coframe::new(
            parse_one_forms::<Scalar>("e4,e1,sqrt2/2 e3,sqrt2/2 e2,1/3(e5-3e1)", 5).unwrap(),
        )
        .unwrap();
        let hints = Hints {
            coframes: vec![cf],
            ..Hints::default()
        };
        assert!(matches!(verdict(&d22, &hints), Verdict::Hypo(_)));
        let d21 = alg("(e^{23}+e^{14},e^{24}-e^{25},e^{35},0,0)");
        match verdict(&d21, &Hints::default()) {
            Verdict::NotHypo(t) => replay(&d21, &t).unwrap(),
            v => panic!("{v}"),
        }
        assert!(matches!(
            verdict(&LieAlgebra::abelian(5), &Hints::default()),
            Verdict::Hypo(_)
        ));
    }

    #[test]
    fn d18_pencil() {
        let d18 = alg("(-e^{14},-e^{25},e^{34},0,0)");
        match obstruct(&d18, &Hints::default()) {
            Ok(t) => replay(&d18, &t).unwrap(),
            Err(t) => panic!("{}", t.summary()),
        }
    }
}
