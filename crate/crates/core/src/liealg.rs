//! Lie algebras given by the differentials de¹,…,deⁿ, and parametric families
//! of them. The Chevalley–Eilenberg differential is the antiderivation
//! extending the generators' differentials.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exterior::{basis_masks, mask_indices, Form, KForm, Subspace, Vector, MAX_DIM};
use crate::linalg;
use crate::poly::{Param, ParamPoint, Poly};
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("expected {expected} differentials, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("de^{index} is not a 2-form on the ambient space")]
    BadDifferential { index: usize },
    #[error("Jacobi identity fails: d(de^{index}) = {residue}")]
    Jacobi { index: usize, residue: String },
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    Dimension(usize),
    #[error("direct sum of dimension {0} exceeds {MAX_DIM}")]
    SumTooLarge(usize),
    #[error("parameter {0} has no value")]
    MissingParam(Param),
    #[error("point {point} violates the constraint {constraint}")]
    OutOfDomain { point: String, constraint: String },
    #[error("no admissible generic point after {0} draws")]
    SamplingExhausted(usize),
}

/// Applies the antiderivation determined by `de` (one 2-form per generator).
pub fn differential<C: Ring>(de: &[Form<C>], eta: &Form<C>) -> Form<C> {
    let n = eta.dim();
    let mut out = Form::zero(n, eta.degree() + 1);
    for (m, c) in eta.terms() {
        let idx = mask_indices(m);
        for (pos, &i) in idx.iter().enumerate() {
            if de[i].is_zero() {
                continue;
            }
            let mut prod = Form::constant(n, c.clone());
            for (q, &j) in idx.iter().enumerate() {
                if q == pos {
                    prod = prod.wedge(&de[i]);
                } else {
                    prod = prod.wedge(&Form::from_mask(n, 1 << j, C::one()));
                }
            }
            out = out.add(&if pos % 2 == 1 { prod.neg() } else { prod });
        }
    }
    out
}

/// First generator whose differential fails d² = 0, with the residue.
pub fn jacobi_failure<C: Ring>(de: &[Form<C>]) -> Option<(usize, Form<C>)> {
    de.iter()
        .enumerate()
        .map(|(i, f)| (i + 1, differential(de, f)))
        .find(|(_, r)| !r.is_zero())
}

struct Derived {
    /// images[k][j] = d of the j-th basis monomial of Λᵏ.
    images: Vec<Vec<KForm>>,
    closed: Vec<Subspace>,
    exact: Vec<Subspace>,
}

/// A concrete Lie algebra over the scalar field.
pub struct LieAlgebra {
    n: usize,
    de: Vec<KForm>,
    derived: OnceLock<Derived>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra {
            n: self.n,
            de: self.de.clone(),
            derived: OnceLock::new(),
        }
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.de == other.de
    }
}

impl Eq for LieAlgebra {}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.de.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_shape<C: Ring>(n: usize, de: &[Form<C>]) -> Result<(), LieError> {
    if n == 0 || n > MAX_DIM {
        return Err(LieError::Dimension(n));
    }
    if de.len() != n {
        return Err(LieError::WrongArity {
            expected: n,
            found: de.len(),
        });
    }
    for (i, f) in de.iter().enumerate() {
        if f.dim() != n || (f.degree() != 2 && !f.is_zero()) {
            return Err(LieError::BadDifferential { index: i + 1 });
        }
    }
    Ok(())
}

fn normalize_zero<C: Ring>(n: usize, de: Vec<Form<C>>) -> Vec<Form<C>> {
    de.into_iter()
        .map(|f| if f.is_zero() { Form::zero(n, 2) } else { f })
        .collect()
}

impl LieAlgebra {
    /// Builds the algebra with de^{i} = `de[i-1]`, rejecting Jacobi failures.
    pub fn new(de: Vec<KForm>) -> Result<Self, LieError> {
        let n = de.len();
        check_shape(n, &de)?;
        let de = normalize_zero(n, de);
        if let Some((index, r)) = jacobi_failure(&de) {
            return Err(LieError::Jacobi {
                index,
                residue: r.to_string(),
            });
        }
        Ok(LieAlgebra {
            n,
            de,
            derived: OnceLock::new(),
        })
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(vec![KForm::zero(n, 2); n]).expect("abelian algebra")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// de^{i} (1-based).
    pub fn de(&self, i: usize) -> &KForm {
        &self.de[i - 1]
    }

    pub fn differentials(&self) -> &[KForm] {
        &self.de
    }

    pub fn d(&self, eta: &KForm) -> KForm {
        let images = &self.derived().images[eta.degree()];
        let basis = basis_masks(self.n, eta.degree());
        let mut out = KForm::zero(self.n, eta.degree() + 1);
        for (j, &m) in basis.iter().enumerate() {
            let c = eta.coeff(m);
            if !c.is_zero() {
                out = out.add(&images[j].scale(&c));
            }
        }
        out
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let n = self.n;
            let images: Vec<Vec<KForm>> = (0..=n)
                .map(|k| {
                    basis_masks(n, k)
                        .iter()
                        .map(|&m| differential(&self.de, &KForm::from_mask(n, m, Scalar::one())))
                        .collect()
                })
                .collect();
            let closed = (0..=n)
                .map(|k| {
                    let rows: Vec<Vec<Scalar>> = images[k].iter().map(Form::to_dense).collect();
                    let kernel = if k == n {
                        rows_identity(rows.len())
                    } else {
                        linalg::left_kernel(&rows)
                    };
                    let forms: Vec<KForm> =
                        kernel.iter().map(|c| KForm::from_dense(n, k, c)).collect();
                    Subspace::span(n, k, &forms).expect("closed forms")
                })
                .collect();
            let exact = (0..=n)
                .map(|k| {
                    if k == 0 {
                        Subspace::zero(n, 0)
                    } else {
                        Subspace::span(n, k, &images[k - 1]).expect("exact forms")
                    }
                })
                .collect();
            Derived {
                images,
                closed,
                exact,
            }
        })
    }

    /// Z^k, the closed k-forms.
    pub fn closed_forms(&self, k: usize) -> &Subspace {
        &self.derived().closed[k]
    }

    /// B^k, the exact k-forms.
    pub fn exact_forms(&self, k: usize) -> &Subspace {
        &self.derived().exact[k]
    }

    /// The 1-form X ↦ tr ad X.
    pub fn modular_form(&self) -> KForm {
        let n = self.n;
        let mut beta = KForm::zero(n, 1);
        for i in 0..n {
            let mut tr = Scalar::zero();
            for j in 0..n {
                tr = tr + &self.bracket_coeff(i, j, j);
            }
            beta = beta.add(&KForm::from_mask(n, 1 << i, tr));
        }
        beta
    }

    /// e^k([e_i, e_j]) = −de^k(e_i, e_j), 0-based indices.
    fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let c = self.de[k].coeff((1 << i) | (1 << j));
        if i < j {
            -c
        } else {
            c
        }
    }

    /// [X, Y] in coordinates dual to e¹,…,eⁿ.
    pub fn bracket(&self, x: &Vector<Scalar>, y: &Vector<Scalar>) -> Vector<Scalar> {
        let n = self.n;
        let coords = (0..n)
            .map(|k| {
                let two = x_wedge_y(x, y);
                // de^k(X,Y) = Σ_{i<j} c_{ij} (x_i y_j − x_j y_i)
                -self.de[k]
                    .terms()
                    .fold(Scalar::zero(), |acc, (m, c)| acc + &(c.clone() * &two(m)))
            })
            .collect();
        Vector::new(coords)
    }

    pub fn lie_derivative(&self, x: &Vector<Scalar>, eta: &KForm) -> KForm {
        let inner = if eta.degree() == 0 {
            KForm::zero(self.n, 0)
        } else {
            self.d(&eta.contract(x).expect("contraction"))
        };
        let outer = self.d(eta).contract(x).expect("contraction");
        inner.add(&outer)
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> Result<LieAlgebra, LieError> {
        let n = self.n + other.n;
        if n > MAX_DIM {
            return Err(LieError::SumTooLarge(n));
        }
        let mut de: Vec<KForm> = self.de.iter().map(|f| f.embed(n, 0)).collect();
        de.extend(other.de.iter().map(|f| f.embed(n, self.n)));
        LieAlgebra::new(de)
    }

    pub fn is_unimodular(&self) -> bool {
        self.modular_form().is_zero()
    }

    /// Dimensions of the lower central series g ⊋ [g,g] ⊋ … until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.n;
        let basis: Vec<Vector<Scalar>> = (1..=n).map(|i| Vector::e(n, i)).collect();
        let mut current: Vec<Vec<Scalar>> = basis.iter().map(|v| v.coords().to_vec()).collect();
        let mut dims = vec![n];
        loop {
            let mut rows = Vec::new();
            for x in &basis {
                for y in &current {
                    rows.push(self.bracket(x, &Vector::new(y.clone())).coords().to_vec());
                }
            }
            let next = if rows.is_empty() {
                Vec::new()
            } else {
                linalg::rref(rows).0
            };
            if next.len() == current.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            current = next;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last() == Some(&0)
    }
}

fn rows_identity(m: usize) -> Vec<Vec<Scalar>> {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn x_wedge_y<'a>(x: &'a Vector<Scalar>, y: &'a Vector<Scalar>) -> impl Fn(u8) -> Scalar + 'a {
    move |m| {
        let idx = mask_indices(m);
        let (i, j) = (idx[0], idx[1]);
        x.coords()[i].clone() * &y.coords()[j] - &(x.coords()[j].clone() * &y.coords()[i])
    }
}

/// Relation imposed on a polynomial in the parameters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    NonZero,
    Positive,
    NonNegative,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Constraint {
    Poly(Poly, Relation),
    /// The parameter takes one of finitely many values.
    OneOf(Param, Vec<BigRational>),
}

impl Constraint {
    pub fn holds(&self, pt: &ParamPoint) -> Result<bool, LieError> {
        match self {
            Constraint::Poly(f, rel) => {
                let v = f.eval(pt).map_err(LieError::MissingParam)?;
                Ok(match rel {
                    Relation::NonZero => !v.is_zero(),
                    Relation::Positive => v.is_positive(),
                    Relation::NonNegative => !v.is_negative(),
                })
            }
            Constraint::OneOf(p, vals) => {
                let v = pt.get(*p).ok_or(LieError::MissingParam(*p))?;
                Ok(vals.contains(v))
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Poly(p, Relation::NonZero) => write!(f, "{p} != 0"),
            Constraint::Poly(p, Relation::Positive) => write!(f, "{p} > 0"),
            Constraint::Poly(p, Relation::NonNegative) => write!(f, "{p} >= 0"),
            Constraint::OneOf(p, vals) => {
                let vs: Vec<String> = vals.iter().map(ToString::to_string).collect();
                write!(f, "{p} in {{{}}}", vs.join(","))
            }
        }
    }
}

/// Structure constants with polynomial coefficients in named parameters.
#[derive(Clone, PartialEq, Debug)]
pub struct LieFamily {
    pub name: String,
    n: usize,
    de: Vec<Form<Poly>>,
    params: Vec<Param>,
    domain: Vec<Constraint>,
}

impl LieFamily {
    /// Validates the shape and checks d² = 0 identically in the parameters.
    pub fn new(
        name: impl Into<String>,
        de: Vec<Form<Poly>>,
        params: Vec<Param>,
        domain: Vec<Constraint>,
    ) -> Result<Self, LieError> {
        let n = de.len();
        check_shape(n, &de)?;
        let de = normalize_zero(n, de);
        if let Some((index, r)) = jacobi_failure(&de) {
            return Err(LieError::Jacobi {
                index,
                residue: r.to_string(),
            });
        }
        let mut params = params;
        params.sort();
        params.dedup();
        Ok(LieFamily {
            name: name.into(),
            n,
            de,
            params,
            domain,
        })
    }

    /// A family with no parameters, wrapping a concrete rational algebra.
    pub fn constant(name: impl Into<String>, g: &LieAlgebra) -> Self {
        let de = g
            .differentials()
            .iter()
            .map(|f| f.map_coeffs(|c| Poly::constant(c.to_rational().expect("rational constants"))))
            .collect();
        LieFamily::new(name, de, Vec::new(), Vec::new()).expect("valid algebra")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn domain(&self) -> &[Constraint] {
        &self.domain
    }

    pub fn differentials(&self) -> &[Form<Poly>] {
        &self.de
    }

    pub fn in_domain(&self, pt: &ParamPoint) -> Result<bool, LieError> {
        for c in &self.domain {
            if !c.holds(pt)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn evaluate(&self, pt: &ParamPoint) -> Result<LieAlgebra, LieError> {
        for p in &self.params {
            if pt.get(*p).is_none() {
                return Err(LieError::MissingParam(*p));
            }
        }
        for c in &self.domain {
            if !c.holds(pt)? {
                return Err(LieError::OutOfDomain {
                    point: pt.to_string(),
                    constraint: c.to_string(),
                });
            }
        }
        let mut de = Vec::with_capacity(self.n);
        for f in &self.de {
            let mut g = KForm::zero(self.n, 2);
            for (m, c) in f.terms() {
                let v = c.eval(pt).map_err(LieError::MissingParam)?;
                g = g.add(&KForm::from_mask(self.n, m, Scalar::from_rational(v)));
            }
            de.push(g);
        }
        LieAlgebra::new(de)
    }

    /// g ⊕ h with h's generators numbered after g's; parameters and domain
    /// constraints are merged.
    pub fn direct_sum(
        &self,
        name: impl Into<String>,
        other: &LieFamily,
    ) -> Result<LieFamily, LieError> {
        let n = self.n + other.n;
        if n > MAX_DIM {
            return Err(LieError::SumTooLarge(n));
        }
        let de = self
            .de
            .iter()
            .map(|f| f.embed(n, 0))
            .chain(other.de.iter().map(|f| f.embed(n, self.n)))
            .collect();
        let params = self.params.iter().chain(&other.params).copied().collect();
        let mut domain = self.domain.clone();
        for c in &other.domain {
            if !domain.contains(c) {
                domain.push(c.clone());
            }
        }
        LieFamily::new(name, de, params, domain)
    }

    /// A deterministic pseudo-random in-domain point avoiding the zero sets of
    /// `avoid`.
    pub fn sample_generic(&self, avoid: &[Poly], seed: u64) -> Result<ParamPoint, LieError> {
        const MAX_DRAWS: usize = 10_000;
        if self.params.is_empty() {
            return Ok(ParamPoint::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_DRAWS {
            let mut pt = ParamPoint::new();
            for &p in &self.params {
                let finite = self.domain.iter().find_map(|c| match c {
                    Constraint::OneOf(q, vals) if *q == p => Some(vals),
                    _ => None,
                });
                let v = match finite {
                    Some(vals) => vals[rng.random_range(0..vals.len())].clone(),
                    None => BigRational::new(
                        rng.random_range(-20i64..=20).into(),
                        rng.random_range(1i64..=10).into(),
                    ),
                };
                pt = pt.with(p, v);
            }
            if !self.in_domain(&pt)? {
                continue;
            }
            let mut ok = true;
            for f in avoid {
                if f.eval(&pt).map_err(LieError::MissingParam)?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(pt);
            }
        }
        Err(LieError::SamplingExhausted(MAX_DRAWS))
    }
}

/// Shorthand for rationals in tests and fixtures.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(labels: &[usize]) -> KForm {
        KForm::monomial(5, labels, Scalar::one())
    }

    fn d3() -> LieAlgebra {
        LieAlgebra::new(vec![
            e(&[2, 5]).add(&e(&[3, 4])),
            e(&[3, 5]),
            e(&[4, 5]),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
        ])
        .unwrap()
    }

    #[test]
    fn differential_examples() {
        let g = d3();
        assert_eq!(g.d(&e(&[1])), e(&[2, 5]).add(&e(&[3, 4])));
        assert_eq!(g.d(&e(&[1, 5])), e(&[3, 4, 5]));
        let ab = LieAlgebra::abelian(5);
        assert!(ab.d(&e(&[1, 2])).is_zero());
        assert_eq!(ab.closed_forms(2).dim(), 10);
        assert_eq!(ab.exact_forms(2).dim(), 0);
    }

    #[test]
    fn jacobi_rejected() {
        // d(de^1) = de^2∧e^3 = e^{243}
        let bad = LieAlgebra::new(vec![
            e(&[2, 3]),
            e(&[2, 4]),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
        ]);
        assert!(matches!(bad, Err(LieError::Jacobi { index: 1, .. })));
    }

    #[test]
    fn modular_form_sign() {
        // aff ⊕ A_{3,3}-style piece: de^1 = e^{13}, so tr ad e_3 = −1.
        let g = LieAlgebra::new(vec![
            e(&[1, 3]),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
        ])
        .unwrap();
        assert_eq!(g.modular_form(), e(&[3]));
        assert!(d3().is_unimodular());
    }

    #[test]
    fn bracket_matches_dual_convention() {
        // de^1 = e^{23} means [e_2, e_3] = −e_1.
        let g = LieAlgebra::new(vec![
            e(&[2, 3]),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
        ])
        .unwrap();
        let b = g.bracket(&Vector::e(5, 2), &Vector::e(5, 3));
        assert_eq!(b, Vector::e(5, 1).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn nilpotency() {
        assert!(d3().is_nilpotent());
        let g = LieAlgebra::new(vec![
            e(&[1, 3]),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
            KForm::zero(5, 2),
        ])
        .unwrap();
        assert!(!g.is_nilpotent());
    }

    #[test]
    fn lie_derivative_of_closed_form() {
        let g = d3();
        let phi = e(&[4, 5]);
        assert!(g.d(&phi).is_zero());
        let x = Vector::e(5, 2);
        assert_eq!(g.lie_derivative(&x, &phi), g.d(&phi.contract(&x).unwrap()));
    }

    #[test]
    fn sampling_respects_constraints() {
        let p = Poly::var(Param::P);
        let fam = LieFamily::new(
            "test",
            vec![
                Form::from_mask(5, 0b10100, p.clone()),
                Form::zero(5, 2),
                Form::zero(5, 2),
                Form::zero(5, 2),
                Form::zero(5, 2),
            ],
            vec![Param::P],
            vec![Constraint::Poly(p.clone(), Relation::Positive)],
        )
        .unwrap();
        let pt = fam
            .sample_generic(&[p.clone() - &Poly::from_int(1)], 0)
            .unwrap();
        let v = pt.get(Param::P).unwrap();
        assert!(v.is_positive() && *v != BigRational::one());
        assert_eq!(fam.sample_generic(&[], 0).unwrap(), pt);
        let bad = ParamPoint::new().with(Param::P, rat(-1, 1));
        assert!(matches!(
            fam.evaluate(&bad),
            Err(LieError::OutOfDomain { .. })
        ));
    }
}
