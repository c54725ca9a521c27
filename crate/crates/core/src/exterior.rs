//! Exterior algebra over a fixed space with basis e¹,…,eⁿ (n ≤ 8).
//!
//! Index subsets are stored as bitmasks (bit `i` stands for e^{i+1}); all
//! signs come from the parity of the sorting permutation. Dense coordinates
//! always follow the lexicographic order of the ascending index sequences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::ring::{mul, Ring};
use crate::scalar::Scalar;

pub type Mask = u8;

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("ambient dimension {0} exceeds the maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("cannot contract a 0-form")]
    ContractDegreeZero,
    #[error("forms of mixed degrees ({0} and {1})")]
    MixedDegrees(usize, usize),
    #[error("expected a {expected}-form, found a {found}-form")]
    WrongDegree { expected: usize, found: usize },
}

struct Tables {
    /// basis[n][k]: k-subsets of {0..n-1} in lex order.
    basis: Vec<Vec<Vec<Mask>>>,
    /// index[n][mask]: position of mask within its degree.
    index: Vec<[u16; 256]>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut basis = Vec::new();
        let mut index = Vec::new();
        for n in 0..=MAX_DIM {
            let mut by_deg: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n + 1];
            // Enumerate subsets as sorted index sequences, then sort lexicographically.
            for m in 0..(1u16 << n) {
                let seq: Vec<u8> = (0..n as u8).filter(|i| m & (1 << i) != 0).collect();
                by_deg[seq.len()].push(seq);
            }
            let mut idx = [0u16; 256];
            let mut masks = Vec::new();
            for seqs in by_deg.iter_mut() {
                seqs.sort();
                let ms: Vec<Mask> = seqs
                    .iter()
                    .map(|s| s.iter().fold(0u8, |acc, &i| acc | (1 << i)))
                    .collect();
                for (pos, &m) in ms.iter().enumerate() {
                    idx[m as usize] = pos as u16;
                }
                masks.push(ms);
            }
            basis.push(masks);
            index.push(idx);
        }
        Tables { basis, index }
    })
}

/// Lexicographically ordered basis masks of Λᵏ on n generators.
pub fn basis_masks(n: usize, k: usize) -> &'static [Mask] {
    let t = tables();
    if k > n {
        &[]
    } else {
        &t.basis[n][k]
    }
}

pub fn lambda_dim(n: usize, k: usize) -> usize {
    basis_masks(n, k).len()
}

fn mask_index(n: usize, m: Mask) -> usize {
    tables().index[n][m as usize] as usize
}

/// Sign of e^A ∧ e^B relative to e^{A∪B}, for disjoint A, B.
pub fn wedge_sign(a: Mask, b: Mask) -> bool {
    let mut inversions = 0u32;
    for j in 0..8 {
        if b & (1 << j) != 0 {
            inversions += (a >> (j + 1)).count_ones();
        }
    }
    inversions % 2 == 1
}

pub fn mask_indices(m: Mask) -> Vec<usize> {
    (0..8).filter(|i| m & (1 << i) != 0).collect()
}

/// A homogeneous form with coefficients in `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Form<C> {
    n: usize,
    deg: usize,
    terms: BTreeMap<Mask, C>,
}

pub type KForm = Form<Scalar>;

impl<C: Ring> Form<C> {
    pub fn zero(n: usize, deg: usize) -> Self {
        assert!(n <= MAX_DIM, "ambient dimension {n} exceeds {MAX_DIM}");
        Form {
            n,
            deg,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `c`.
    pub fn constant(n: usize, c: C) -> Self {
        Self::from_mask(n, 0, c)
    }

    /// `c·e^{i₁…i_k}` with 1-based labels as in the usual notation; repeated
    /// labels give zero, unsorted labels pick up the permutation sign.
    pub fn monomial(n: usize, labels: &[usize], c: C) -> Self {
        let mut form = Self::constant(n, C::one());
        for &l in labels {
            assert!(l >= 1 && l <= n, "index {l} out of range 1..={n}");
            form = form.wedge(&Self::from_mask(n, 1 << (l - 1), C::one()));
        }
        form.scale(&c)
    }

    pub fn from_mask(n: usize, mask: Mask, c: C) -> Self {
        let mut f = Self::zero(n, mask.count_ones() as usize);
        if !c.is_zero() {
            f.terms.insert(mask, c);
        }
        f
    }

    /// e^i as a 1-form (1-based).
    pub fn e(n: usize, i: usize) -> Self {
        Self::monomial(n, &[i], C::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: Mask) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, mask: Mask, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(C::zero);
        *entry = entry.clone() + &c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        if self.deg != other.deg && !self.is_zero() && !other.is_zero() {
            return Err(ExteriorError::MixedDegrees(self.deg, other.deg));
        }
        let mut out = if self.is_zero() {
            Self::zero(self.n, other.deg)
        } else {
            self.clone()
        };
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Sum of two forms; panics on mismatched dimension or degree.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("form addition")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n, self.deg);
        if c.is_zero() {
            return out;
        }
        for (m, x) in self.terms() {
            out.add_term(m, mul(x, c));
        }
        out
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n, self.deg + other.deg);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if a & b != 0 {
                    continue;
                }
                let c = mul(x, y);
                out.add_term(a | b, if wedge_sign(a, b) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Exterior product; panics on mismatched ambient dimension.
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge of forms")
    }

    /// Interior product X⌟self, leading-slot convention: e_i⌟e^{i…} = e^{…}.
    pub fn contract(&self, x: &Vector<C>) -> Result<Self, ExteriorError> {
        if self.n != x.dim() {
            return Err(ExteriorError::DimensionMismatch(self.n, x.dim()));
        }
        if self.deg == 0 {
            return Err(ExteriorError::ContractDegreeZero);
        }
        let mut out = Self::zero(self.n, self.deg - 1);
        for (m, c) in self.terms() {
            for i in mask_indices(m) {
                let xi = &x.coords[i];
                if xi.is_zero() {
                    continue;
                }
                let below = (m & ((1u8 << i) - 1)).count_ones();
                let v = mul(c, xi);
                out.add_term(m & !(1 << i), if below % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Pulls back along the algebra map e^i ↦ images[i] (1-forms on any space).
    pub fn substitute(&self, images: &[Form<C>]) -> Self {
        assert_eq!(images.len(), self.n, "one image per generator");
        let target = images.first().map_or(self.n, Form::dim);
        let mut out = Form::zero(target, self.deg);
        for (m, c) in self.terms() {
            let mut prod = Form::constant(target, c.clone());
            for i in mask_indices(m) {
                prod = prod.wedge(&images[i]);
            }
            out = out.add(&prod);
        }
        out
    }

    /// Dense coordinates in the lexicographic basis of Λ^deg.
    pub fn to_dense(&self) -> Vec<C> {
        let mut v = vec![C::zero(); lambda_dim(self.n, self.deg)];
        for (m, c) in self.terms() {
            v[mask_index(self.n, m)] = c.clone();
        }
        v
    }

    pub fn from_dense(n: usize, deg: usize, coords: &[C]) -> Self {
        let mut f = Self::zero(n, deg);
        for (&m, c) in basis_masks(n, deg).iter().zip(coords) {
            f.add_term(m, c.clone());
        }
        f
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n, self.deg);
        for (m, c) in self.terms() {
            out.add_term(m, f(c));
        }
        out
    }

    /// Same coefficients on a larger space, indices shifted by `offset`.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        let mut out = Self::zero(n, self.deg);
        for (m, c) in self.terms() {
            let shifted = ((m as u16) << offset) as u8;
            out.add_term(shifted, c.clone());
        }
        out
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut masks: Vec<Mask> = self.terms.keys().copied().collect();
        masks.sort_by_key(|&m| mask_index(self.n, m));
        let mut out = String::new();
        for (i, m) in masks.into_iter().enumerate() {
            let c = self.terms[&m].to_string();
            let mono = if m == 0 {
                String::new()
            } else {
                let digits: String = mask_indices(m)
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("e^{{{digits}}}")
            };
            let term = coefficient_term(&c, &mono);
            if i > 0 && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders `c·mono`, dropping unit coefficients and bracketing sums.
pub(crate) fn coefficient_term(c: &str, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    let compound = c.len() > 1 && c[1..].contains(['+', '-']);
    match c {
        "1" => mono.to_string(),
        "-1" => format!("-{mono}"),
        _ if compound => format!("({c}) {mono}"),
        _ => format!("{c} {mono}"),
    }
}

/// A vector in the Lie algebra, in coordinates dual to e¹,…,eⁿ.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector<C> {
    coords: Vec<C>,
}

impl<C: Ring> Vector<C> {
    pub fn new(coords: Vec<C>) -> Self {
        Vector { coords }
    }

    pub fn zero(n: usize) -> Self {
        Vector {
            coords: vec![C::zero(); n],
        }
    }

    /// Basis vector e_i (1-based).
    pub fn e(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i - 1] = C::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    /// ⟨X, η⟩ for a 1-form η.
    pub fn pair(&self, eta: &Form<C>) -> C {
        assert_eq!(eta.degree(), 1, "pairing needs a 1-form");
        eta.terms().fold(C::zero(), |acc, (m, c)| {
            acc + &mul(c, &self.coords[m.trailing_zeros() as usize])
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Vector {
            coords: self.coords.iter().map(|a| mul(a, c)).collect(),
        }
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for Vector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A linear subspace of Λᵏ, kept in reduced row echelon form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    deg: usize,
    rows: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(n: usize, deg: usize) -> Self {
        Subspace {
            n,
            deg,
            rows: Vec::new(),
        }
    }

    pub fn full(n: usize, deg: usize) -> Self {
        let forms: Vec<KForm> = basis_masks(n, deg)
            .iter()
            .map(|&m| KForm::from_mask(n, m, Scalar::from_int(1)))
            .collect();
        Self::from_forms_unchecked(n, deg, &forms)
    }

    /// Span of forms that all have degree `deg` on `n` generators.
    pub fn span(n: usize, deg: usize, forms: &[KForm]) -> Result<Self, ExteriorError> {
        for f in forms {
            if f.dim() != n {
                return Err(ExteriorError::DimensionMismatch(n, f.dim()));
            }
            if f.degree() != deg {
                return Err(ExteriorError::MixedDegrees(deg, f.degree()));
            }
        }
        Ok(Self::from_forms_unchecked(n, deg, forms))
    }

    /// Span of a nonempty list; the degree is read off the first element.
    pub fn span_of(forms: &[KForm]) -> Result<Self, ExteriorError> {
        let first = forms.first().expect("span_of needs at least one form");
        Self::span(first.dim(), first.degree(), forms)
    }

    fn from_forms_unchecked(n: usize, deg: usize, forms: &[KForm]) -> Self {
        let rows: Vec<Vec<Scalar>> = forms.iter().map(Form::to_dense).collect();
        Self::from_rows(n, deg, rows)
    }

    fn from_rows(n: usize, deg: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let rows = if rows.is_empty() || lambda_dim(n, deg) == 0 {
            Vec::new()
        } else {
            linalg::rref(rows).0
        };
        Subspace { n, deg, rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// The canonical reduced basis.
    pub fn basis(&self) -> Vec<KForm> {
        self.rows
            .iter()
            .map(|r| KForm::from_dense(self.n, self.deg, r))
            .collect()
    }

    pub fn contains(&self, f: &KForm) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.dim() != self.n || f.degree() != self.deg {
            return false;
        }
        let mut rows = self.rows.clone();
        rows.push(f.to_dense());
        linalg::rank(&rows) == self.dim()
    }

    /// Coordinates of `f` modulo the subspace; all zero exactly when `f` lies in it.
    pub fn residual(&self, f: &KForm) -> Vec<Scalar> {
        let mut v = f.to_dense();
        for row in &self.rows {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("reduced rows are nonzero");
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.clone() - &(c.clone() * r);
            }
        }
        v
    }

    /// The elements x of this subspace with `map(x)[i] ∈ targets[i]` for every
    /// i, for a linear `map`.
    pub fn preimage(&self, map: impl Fn(&KForm) -> Vec<KForm>, targets: &[&Subspace]) -> Subspace {
        let basis = self.basis();
        if basis.is_empty() {
            return self.clone();
        }
        let rows: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|b| {
                let images = map(b);
                assert_eq!(images.len(), targets.len(), "one target per image");
                images
                    .iter()
                    .zip(targets)
                    .flat_map(|(img, t)| t.residual(img))
                    .collect()
            })
            .collect();
        if rows[0].is_empty() {
            return self.clone();
        }
        let forms: Vec<KForm> = linalg::left_kernel(&rows)
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&basis)
                    .fold(KForm::zero(self.n, self.deg), |acc, (ci, b)| {
                        acc.add(&b.scale(ci))
                    })
            })
            .collect();
        Self::from_forms_unchecked(self.n, self.deg, &forms)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(
            (self.n, self.deg),
            (other.n, other.deg),
            "sum of incompatible subspaces"
        );
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::from_rows(self.n, self.deg, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(
            (self.n, self.deg),
            (other.n, other.deg),
            "intersection of incompatible subspaces"
        );
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.n, self.deg);
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let relations = linalg::left_kernel(&rows);
        let k = self.rows.len();
        let vecs: Vec<Vec<Scalar>> = relations
            .iter()
            .map(|c| {
                let mut v = vec![Scalar::zero(); lambda_dim(self.n, self.deg)];
                for (ci, row) in c[..k].iter().zip(&self.rows) {
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = x.clone() + &(ci.clone() * r);
                    }
                }
                v
            })
            .collect();
        Self::from_rows(self.n, self.deg, vecs)
    }

    /// L_t(S) = { s ∧ t : s ∈ S }.
    pub fn wedge_form(&self, t: &KForm) -> Subspace {
        let deg = self.deg + t.degree();
        let forms: Vec<KForm> = self.basis().iter().map(|b| b.wedge(t)).collect();
        Self::from_forms_unchecked(self.n, deg, &forms)
    }

    /// S ∧ T, spanned by all pairwise products of basis elements.
    pub fn wedge_subspace(&self, other: &Subspace) -> Subspace {
        let deg = self.deg + other.deg;
        let rhs = other.basis();
        let forms: Vec<KForm> = self
            .basis()
            .iter()
            .flat_map(|a| rhs.iter().map(move |b| a.wedge(b)))
            .collect();
        Self::from_forms_unchecked(self.n, deg, &forms)
    }

    /// { X⌟s : s ∈ S } for a vector X.
    pub fn contract(&self, x: &Vector<Scalar>) -> Result<Subspace, ExteriorError> {
        if self.deg == 0 {
            return Err(ExteriorError::ContractDegreeZero);
        }
        let forms = self
            .basis()
            .iter()
            .map(|b| b.contract(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_forms_unchecked(self.n, self.deg - 1, &forms))
    }

    /// Annihilator in the dual sense for degree-1 subspaces: the vectors X
    /// with ⟨X, η⟩ = 0 for every η in the span.
    pub fn annihilating_vectors(&self) -> Vec<Vector<Scalar>> {
        assert_eq!(self.deg, 1, "annihilator of a subspace of 1-forms");
        if self.rows.is_empty() {
            return (1..=self.n).map(|i| Vector::e(self.n, i)).collect();
        }
        linalg::left_kernel(&linalg::transpose(&self.rows))
            .into_iter()
            .map(Vector::new)
            .collect()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(ToString::to_string).collect();
        write!(f, "Span{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Decides φ∧φ = 0 for a 2-form and, when it holds, returns a factorization
/// φ = a∧b built from contractions with basis vectors.
pub fn is_decomposable_2form(phi: &KForm) -> Result<Option<(KForm, KForm)>, ExteriorError> {
    if phi.degree() != 2 {
        return Err(ExteriorError::WrongDegree {
            expected: 2,
            found: phi.degree(),
        });
    }
    if !phi.wedge(phi).is_zero() {
        return Ok(None);
    }
    let n = phi.dim();
    let Some((mask, c)) = phi
        .terms()
        .min_by_key(|(m, _)| mask_index(n, *m))
        .map(|(m, c)| (m, c.clone()))
    else {
        return Ok(Some((KForm::zero(n, 1), KForm::zero(n, 1))));
    };
    let idx = mask_indices(mask);
    let (i, j) = (idx[0] + 1, idx[1] + 1);
    let a = phi.contract(&Vector::e(n, j))?.neg();
    let b = phi
        .contract(&Vector::e(n, i))?
        .scale(&c.inverse().expect("nonzero"));
    Ok(Some((a, b)))
}
