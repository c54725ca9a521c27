//! SU(2)-structures on five-dimensional Lie algebras, the hypo condition,
//! and existence of contact forms.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{KForm, Subspace};
use crate::liealg::LieAlgebra;
use crate::linalg;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Su2Error {
    #[error("a coframe needs exactly five 1-forms on a 5-dimensional space")]
    Shape,
    #[error("the forms are linearly dependent")]
    Degenerate,
    #[error("the quadruplet is not an SU(2)-structure")]
    InvalidStructure,
}

/// A basis f¹,…,f⁵ of the dual.
#[derive(Clone, Debug, PartialEq)]
pub struct Coframe {
    forms: Vec<KForm>,
}

impl Coframe {
    pub fn new(forms: Vec<KForm>) -> Result<Self, Su2Error> {
        if forms.len() != 5
            || forms
                .iter()
                .any(|f| f.dim() != 5 || (f.degree() != 1 && !f.is_zero()))
        {
            return Err(Su2Error::Shape);
        }
        let vol = forms
            .iter()
            .fold(KForm::constant(5, Scalar::one()), |acc, f| acc.wedge(f));
        if vol.is_zero() {
            return Err(Su2Error::Degenerate);
        }
        Ok(Coframe { forms })
    }

    pub fn identity() -> Self {
        Coframe::new((1..=5).map(|i| KForm::e(5, i)).collect()).expect("standard basis")
    }

    pub fn forms(&self) -> &[KForm] {
        &self.forms
    }

    /// f^{ij} with 1-based labels.
    fn f2(&self, i: usize, j: usize) -> KForm {
        self.forms[i - 1].wedge(&self.forms[j - 1])
    }
}

/// (α, ω₁, ω₂, ω₃).
#[derive(Clone, Debug, PartialEq)]
pub struct Quadruplet {
    pub alpha: KForm,
    pub omega: [KForm; 3],
}

impl Quadruplet {
    /// Rotates (ω₂, ω₃) by the angle with cosine `c` and sine `s`.
    pub fn rotate(&self, c: &Scalar, s: &Scalar) -> Quadruplet {
        let [w1, w2, w3] = &self.omega;
        Quadruplet {
            alpha: self.alpha.clone(),
            omega: [
                w1.clone(),
                w2.scale(c).sub(&w3.scale(s)),
                w2.scale(s).add(&w3.scale(c)),
            ],
        }
    }
}

/// α = f⁵, ω₁ = f^{12}+f^{34}, ω₂ = f^{13}+f^{42}, ω₃ = f^{14}+f^{23}.
pub fn quadruplet_from_coframe(f: &Coframe) -> Quadruplet {
    Quadruplet {
        alpha: f.forms[4].clone(),
        omega: [
            f.f2(1, 2).add(&f.f2(3, 4)),
            f.f2(1, 3).add(&f.f2(4, 2)),
            f.f2(1, 4).add(&f.f2(2, 3)),
        ],
    }
}

/// ω_i(X, Y) on a list of vectors, as a matrix.
fn restrict(w: &KForm, basis: &[crate::exterior::Vector<Scalar>]) -> Vec<Vec<Scalar>> {
    basis
        .iter()
        .map(|x| {
            let ix = w.contract(x).expect("2-form");
            basis.iter().map(|y| y.pair(&ix)).collect()
        })
        .collect()
}

fn principal_minors_nonnegative(b: &[Vec<Scalar>]) -> bool {
    let n = b.len();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| b[i][j].clone()).collect())
            .collect();
        !linalg::determinant(&sub).is_negative()
    })
}

/// Algebraic conditions ωᵢ∧ωⱼ = δᵢⱼ v, v∧α ≠ 0, plus positivity of
/// (X, Y) ↦ ω₃(X, JY) on ker α, where i_Xω₁ = i_{JX}ω₂.
pub fn is_su2_structure(q: &Quadruplet) -> bool {
    let n = q.alpha.dim();
    if n != 5 || q.alpha.degree() != 1 || q.omega.iter().any(|w| w.degree() != 2 || w.dim() != n) {
        return false;
    }
    let v = q.omega[0].wedge(&q.omega[0]);
    if v.wedge(&q.alpha).is_zero() {
        return false;
    }
    for i in 0..3 {
        for j in i..3 {
            let p = q.omega[i].wedge(&q.omega[j]);
            let ok = if i == j { p == v } else { p.is_zero() };
            if !ok {
                return false;
            }
        }
    }
    let kernel = Subspace::span(n, 1, std::slice::from_ref(&q.alpha))
        .expect("span")
        .annihilating_vectors();
    let w: Vec<Vec<Vec<Scalar>>> = q.omega.iter().map(|w| restrict(w, &kernel)).collect();
    let Some(w2t_inv) = linalg::inverse(&linalg::transpose(&w[1])) else {
        return false;
    };
    let j = linalg::mat_mul(&w2t_inv, &linalg::transpose(&w[0]));
    let m = linalg::mat_mul(&w[2], &j);
    let half = Scalar::from_frac(1, 2);
    let b: Vec<Vec<Scalar>> = (0..m.len())
        .map(|r| {
            (0..m.len())
                .map(|c| (m[r][c].clone() + &m[c][r]) * &half)
                .collect()
        })
        .collect();
    principal_minors_nonnegative(&b)
}

/// dω₁, d(ω₂∧α), d(ω₃∧α).
pub fn hypo_residues(g: &LieAlgebra, q: &Quadruplet) -> [KForm; 3] {
    [
        g.d(&q.omega[0]),
        g.d(&q.omega[1].wedge(&q.alpha)),
        g.d(&q.omega[2].wedge(&q.alpha)),
    ]
}

pub fn is_hypo(g: &LieAlgebra, q: &Quadruplet) -> Result<bool, Su2Error> {
    if !is_su2_structure(q) {
        return Err(Su2Error::InvalidStructure);
    }
    Ok(hypo_residues(g, q).iter().all(KForm::is_zero))
}

/// Convenience: the coframe's quadruplet is hypo on `g`.
pub fn coframe_is_hypo(g: &LieAlgebra, f: &Coframe) -> bool {
    is_hypo(g, &quadruplet_from_coframe(f)).unwrap_or(false)
}

/// η∧(dη)².
pub fn contact_volume(g: &LieAlgebra, eta: &KForm) -> KForm {
    let deta = g.d(eta);
    eta.wedge(&deta).wedge(&deta)
}

/// First η on the grid {0,1,2,3}ⁿ (lexicographic) with η∧(dη)² ≠ 0.
///
/// η∧(dη)² has degree at most 3 in each coefficient, so it vanishes on the
/// whole grid only if it vanishes identically.
pub fn contact_exists(g: &LieAlgebra) -> Option<KForm> {
    let n = g.dim();
    let total = 4usize.pow(n as u32);
    (1..total).find_map(|code| {
        let mut coords = vec![Scalar::zero(); n];
        let mut rest = code;
        for slot in (0..n).rev() {
            coords[slot] = Scalar::from_int((rest % 4) as i64);
            rest /= 4;
        }
        let eta = KForm::from_dense(n, 1, &coords);
        (!contact_volume(g, &eta).is_zero()).then_some(eta)
    })
}
