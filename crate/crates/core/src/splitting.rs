//! Splittings 𝔤* = V₁ ⊕ V₂, the induced bigrading of Λ*𝔤*, and the groups
//! H^{p,q}(𝔤, V₁) coming from the V₁-degree filtration.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{basis_masks, is_decomposable_2form, lambda_dim, KForm, Subspace, Vector};
use crate::liealg::LieAlgebra;
use crate::linalg;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplittingError {
    #[error("V1 has dimension {0}, at least 2 is required")]
    V1TooSmall(usize),
    #[error("V1 and V2 do not form a direct sum decomposition")]
    NotComplementary,
    #[error("subspace is not a space of 1-forms on the algebra")]
    WrongShape,
    #[error("the splitting is not coherent")]
    NotCoherent,
    #[error("form has mixed bidegree")]
    MixedBidegree,
    #[error("2-form is not decomposable")]
    NotDecomposable,
    #[error("2-form is zero")]
    ZeroForm,
}

/// A decomposition of the dual into V₁ ⊕ V₂.
#[derive(Clone, Debug)]
pub struct Splitting {
    g: LieAlgebra,
    v1: Subspace,
    v2: Subspace,
    /// Basis of V₁ followed by a basis of V₂.
    frame: Vec<KForm>,
    /// e^i written in the frame, as 1-forms in frame coordinates.
    inverse: Vec<KForm>,
}

impl Splitting {
    pub fn new(g: &LieAlgebra, v1: Subspace, v2: Subspace) -> Result<Self, SplittingError> {
        let n = g.dim();
        for v in [&v1, &v2] {
            if v.degree() != 1 || v.ambient_dim() != n {
                return Err(SplittingError::WrongShape);
            }
        }
        if v1.dim() < 2 {
            return Err(SplittingError::V1TooSmall(v1.dim()));
        }
        if v1.dim() + v2.dim() != n || v1.sum(&v2).dim() != n {
            return Err(SplittingError::NotComplementary);
        }
        let mut frame = v1.basis();
        frame.extend(v2.basis());
        let rows: Vec<Vec<Scalar>> = frame.iter().map(KForm::to_dense).collect();
        let inv = linalg::inverse(&rows).ok_or(SplittingError::NotComplementary)?;
        // f = P e, so e^i = Σ_j (P⁻¹)_{ij} f^j.
        let inverse = inv.iter().map(|row| KForm::from_dense(n, 1, row)).collect();
        Ok(Splitting {
            g: g.clone(),
            v1,
            v2,
            frame,
            inverse,
        })
    }

    /// Completes V₁ with the lexicographically first basis covectors.
    pub fn with_canonical_complement(g: &LieAlgebra, v1: Subspace) -> Result<Self, SplittingError> {
        let v2 = canonical_complement(&v1);
        Self::new(g, v1, v2)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn v1(&self) -> &Subspace {
        &self.v1
    }

    pub fn v2(&self) -> &Subspace {
        &self.v2
    }

    pub fn rank(&self) -> usize {
        self.v1.dim()
    }

    fn to_frame(&self, eta: &KForm) -> KForm {
        eta.substitute(&self.inverse)
    }

    fn out_of_frame(&self, eta: &KForm) -> KForm {
        eta.substitute(&self.frame)
    }

    /// The Λ^{p,deg−p} component of η.
    pub fn component(&self, eta: &KForm, p: usize) -> KForm {
        let low: u8 = ((1u16 << self.rank()) - 1) as u8;
        let f = self.to_frame(eta);
        let mut part = KForm::zero(f.dim(), f.degree());
        for (m, c) in f.terms() {
            if (m & low).count_ones() as usize == p {
                part = part.add(&KForm::from_mask(f.dim(), m, c.clone()));
            }
        }
        self.out_of_frame(&part)
    }

    /// Nonzero bigraded components (p, q, form) of η.
    pub fn components(&self, eta: &KForm) -> Vec<(usize, usize, KForm)> {
        let k = eta.degree();
        (0..=k)
            .filter_map(|p| {
                let c = self.component(eta, p);
                (!c.is_zero()).then(|| (p, k - p, c))
            })
            .collect()
    }

    /// Bidegree of a nonzero form of pure type.
    pub fn bidegree(&self, eta: &KForm) -> Option<(usize, usize)> {
        match self.components(eta).as_slice() {
            [(p, q, _)] => Some((*p, *q)),
            _ => None,
        }
    }

    /// Basis monomials of Λ^{p,q} in the frame, mapped back to e-coordinates.
    pub fn bigraded_basis(&self, p: usize, q: usize) -> Vec<KForm> {
        let n = self.g.dim();
        let low: u8 = ((1u16 << self.rank()) - 1) as u8;
        basis_masks(n, p + q)
            .iter()
            .filter(|&&m| (m & low).count_ones() as usize == p)
            .map(|&m| self.out_of_frame(&KForm::from_mask(n, m, Scalar::one())))
            .collect()
    }

    pub fn coherence(&self) -> CoherenceReport {
        let r = self.rank();
        let mut violations = Vec::new();
        for (i, f) in self.frame.iter().enumerate() {
            let df = self.g.d(f);
            for (p, q, part) in self.components(&df) {
                let allowed = if i < r { p == 2 } else { p >= 1 };
                if !allowed {
                    violations.push(CoherenceViolation {
                        generator: f.clone(),
                        bidegree: (p, q),
                        component: part,
                    });
                }
            }
        }
        CoherenceReport { violations }
    }

    pub fn is_coherent(&self) -> bool {
        self.coherence().is_coherent()
    }

    /// (δ₁η, δ₂η) for η of pure bidegree on a coherent splitting.
    pub fn delta_split(&self, eta: &KForm) -> Result<(KForm, KForm), SplittingError> {
        if !self.is_coherent() {
            return Err(SplittingError::NotCoherent);
        }
        let n = self.g.dim();
        let zero = KForm::zero(n, eta.degree() + 1);
        if eta.is_zero() {
            return Ok((zero.clone(), zero));
        }
        let (p, _) = self.bidegree(eta).ok_or(SplittingError::MixedBidegree)?;
        let deta = self.g.d(eta);
        Ok((self.component(&deta, p + 1), self.component(&deta, p + 2)))
    }

    /// F_p Λᵏ = Λ^{r,k−r} + … + Λ^{p,k−p}, built from this splitting's bigrading.
    pub fn filtration(&self, k: usize, p: usize) -> Subspace {
        let forms: Vec<KForm> = (p..=k.min(self.rank()))
            .flat_map(|j| self.bigraded_basis(j, k - j))
            .collect();
        Subspace::span(self.g.dim(), k, &forms).expect("filtration")
    }
}

/// Lexicographically first basis covectors completing `v1` to the full dual.
pub fn canonical_complement(v1: &Subspace) -> Subspace {
    let n = v1.ambient_dim();
    let mut acc = v1.clone();
    let mut picked = Vec::new();
    for i in 1..=n {
        let ei = KForm::e(n, i);
        if !acc.contains(&ei) {
            acc = acc.sum(&Subspace::span(n, 1, std::slice::from_ref(&ei)).expect("span"));
            picked.push(ei);
        }
    }
    Subspace::span(n, 1, &picked).expect("complement")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceViolation {
    pub generator: KForm,
    pub bidegree: (usize, usize),
    pub component: KForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport {
    pub violations: Vec<CoherenceViolation>,
}

impl CoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which of the conditions for a 2-form to define a coherent splitting failed.
#[derive(Clone, Debug, PartialEq)]
pub enum Refusal {
    Zero,
    NotDecomposable,
    /// dα∧φ ≠ 0 for α = e^i.
    DifferentialWedge(usize),
    NotClosed,
    /// ℒ_{e_i}φ is not a multiple of φ.
    LieDerivative(usize),
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refusal::Zero => f.write_str("phi is zero"),
            Refusal::NotDecomposable => f.write_str("phi is not decomposable"),
            Refusal::DifferentialWedge(i) => write!(f, "de^{i} wedge phi is nonzero"),
            Refusal::NotClosed => f.write_str("phi is not closed"),
            Refusal::LieDerivative(i) => write!(f, "L_(e_{i}) phi is not a multiple of phi"),
        }
    }
}

/// The splitting defined by a decomposable 2-form, if it is coherent.
pub fn coherent_from_2form(g: &LieAlgebra, phi: &KForm) -> Result<Splitting, Refusal> {
    if phi.is_zero() {
        return Err(Refusal::Zero);
    }
    let Ok(Some((a, b))) = is_decomposable_2form(phi) else {
        return Err(Refusal::NotDecomposable);
    };
    let n = g.dim();
    for i in 1..=n {
        if !g.de(i).wedge(phi).is_zero() {
            return Err(Refusal::DifferentialWedge(i));
        }
    }
    if !g.d(phi).is_zero() {
        return Err(Refusal::NotClosed);
    }
    for i in 1..=n {
        let l = g.lie_derivative(&Vector::e(n, i), phi);
        if Subspace::span(n, 2, &[phi.clone(), l]).expect("span").dim() > 1 {
            return Err(Refusal::LieDerivative(i));
        }
    }
    let v1 = Subspace::span(n, 1, &[a, b]).expect("span");
    Ok(Splitting::with_canonical_complement(g, v1).expect("factors span a plane"))
}

/// F_p Λᵏ = Λ^p V₁ ∧ Λ^{k−p}, which depends on V₁ only.
pub fn filtration_subspace(v1: &Subspace, k: usize, p: usize) -> Subspace {
    let n = v1.ambient_dim();
    let mut lp = Subspace::full(n, 0);
    for _ in 0..p {
        lp = lp.wedge_subspace(v1);
    }
    if p > k {
        return Subspace::zero(n, k);
    }
    lp.wedge_subspace(&Subspace::full(n, k - p))
}

/// dim H^k_p, the image of the closed forms in F_p in cohomology.
fn filtered_cohomology_dim(g: &LieAlgebra, f_p: &Subspace, k: usize) -> usize {
    let z = g.closed_forms(k);
    let b = g.exact_forms(k);
    z.intersect(f_p).sum(b).dim() - b.dim()
}

fn check_v1(g: &LieAlgebra, v1: &Subspace) -> Result<(), SplittingError> {
    if v1.degree() != 1 || v1.ambient_dim() != g.dim() {
        return Err(SplittingError::WrongShape);
    }
    if v1.dim() < 2 {
        return Err(SplittingError::V1TooSmall(v1.dim()));
    }
    Ok(())
}

/// h^{p,q}(𝔤, V₁) = dim H^{p+q}_p − dim H^{p+q}_{p+1}.
pub fn hpq(g: &LieAlgebra, v1: &Subspace, p: usize, q: usize) -> Result<usize, SplittingError> {
    check_v1(g, v1)?;
    let k = p + q;
    if k > g.dim() {
        return Ok(0);
    }
    let hp = filtered_cohomology_dim(g, &filtration_subspace(v1, k, p), k);
    let hp1 = filtered_cohomology_dim(g, &filtration_subspace(v1, k, p + 1), k);
    Ok(hp - hp1)
}

/// The same number computed through the bigrading of an explicit splitting.
pub fn hpq_with_complement(s: &Splitting, p: usize, q: usize) -> usize {
    let k = p + q;
    if k > s.g.dim() {
        return 0;
    }
    let hp = filtered_cohomology_dim(&s.g, &s.filtration(k, p), k);
    let hp1 = filtered_cohomology_dim(&s.g, &s.filtration(k, p + 1), k);
    hp - hp1
}

/// dim Hᵏ, for telescoping checks.
pub fn betti(g: &LieAlgebra, k: usize) -> usize {
    g.closed_forms(k).dim() - g.exact_forms(k).dim()
}

/// Z²∧φ = 0 and Z³∧φ = 0 for a nonzero decomposable 2-form φ.
pub fn vanishing_criterion(g: &LieAlgebra, phi: &KForm) -> Result<bool, SplittingError> {
    if phi.is_zero() {
        return Err(SplittingError::ZeroForm);
    }
    if !phi.wedge(phi).is_zero() {
        return Err(SplittingError::NotDecomposable);
    }
    Ok(g.closed_forms(2).wedge_form(phi).is_zero() && g.closed_forms(3).wedge_form(phi).is_zero())
}

fn grid() -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    for den in 1..=3 {
        for num in -3..=3i64 {
            let c = Scalar::from_frac(num, den);
            if !c.is_zero() && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Candidate decomposable 2-forms in search order: basis monomials, then
/// `hints`, then e^{ij} + c·e^{kl} over a small rational grid.
pub fn candidate_2forms(n: usize, hints: &[KForm]) -> Vec<KForm> {
    let monomials: Vec<KForm> = basis_masks(n, 2)
        .iter()
        .map(|&m| KForm::from_mask(n, m, Scalar::one()))
        .collect();
    let mut out = monomials.clone();
    out.extend(
        hints
            .iter()
            .filter(|h| h.degree() == 2 && !h.is_zero())
            .cloned(),
    );
    let cs = grid();
    for (a, x) in basis_masks(n, 2).iter().enumerate() {
        for y in &basis_masks(n, 2)[a + 1..] {
            if x & y == 0 {
                continue;
            }
            for c in &cs {
                out.push(
                    KForm::from_mask(n, *x, Scalar::one()).add(&KForm::from_mask(n, *y, c.clone())),
                );
            }
        }
    }
    debug_assert!(out.len() >= lambda_dim(n, 2));
    out
}

/// First candidate φ satisfying both the vanishing criterion and the
/// conditions for a coherent splitting.
pub fn find_obstruction_2form(g: &LieAlgebra, hints: &[KForm]) -> Option<KForm> {
    candidate_2forms(g.dim(), hints).into_iter().find(|phi| {
        phi.wedge(phi).is_zero()
            && vanishing_criterion(g, phi).unwrap_or(false)
            && coherent_from_2form(g, phi).is_ok()
    })
}

/// First candidate φ satisfying the vanishing criterion, coherent or not.
pub fn find_vanishing_2form(g: &LieAlgebra, hints: &[KForm]) -> Option<KForm> {
    candidate_2forms(g.dim(), hints)
        .into_iter()
        .find(|phi| phi.wedge(phi).is_zero() && vanishing_criterion(g, phi).unwrap_or(false))
}

/// Checks d(Λ^{p,q}) ⊆ Λ^{p+2,q−1} ⊕ Λ^{p+1,q} on every bigraded basis monomial.
pub fn respects_bigrading(s: &Splitting) -> bool {
    let n = s.g.dim();
    for k in 0..n {
        for p in 0..=k.min(s.rank()) {
            for eta in s.bigraded_basis(p, k - p) {
                let deta = s.g.d(&eta);
                let allowed = s.component(&deta, p + 1).add(&s.component(&deta, p + 2));
                if allowed != deta {
                    return false;
                }
            }
        }
    }
    true
}
