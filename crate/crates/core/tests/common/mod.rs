//! Random Lie algebras, forms and coframes for the property suites.
#![allow(dead_code)]

use hypoforge::catalog::notation::{parse_constants, parse_one_forms};
use hypoforge::catalog::parse_algebra;
use hypoforge::exterior::{basis_masks, KForm};
use hypoforge::liealg::{rat, LieAlgebra};
use hypoforge::linalg;
use hypoforge::poly::{Param, ParamPoint};
use hypoforge::scalar::Scalar;
use hypoforge::su2hypo::Coframe;
use proptest::prelude::*;

/// Five-dimensional families valid for all values of p and q.
pub const BASES: &[&str] = &[
    "(0,0,0,0,0)",
    "(e^{24}+e^{35},0,0,0,0)",
    "(e^{25}+e^{34},e^{35},e^{45},0,0)",
    "(e^{35},e^{45},0,0,0)",
    "((-1-p) e^{15}-e^{23},-e^{25},-p e^{35},-q e^{45},0)",
    "(e^{15},p e^{25},q e^{35},(p+q) e^{45},0)",
    "(e^{23}+e^{14},e^{24}-e^{25},e^{35},0,0)",
    "(e^{23}+2e^{14},e^{24}+e^{35},e^{34}-e^{25},0,0)",
    "(-e^{14},-e^{25},-p e^{34}-q e^{35},0,0)",
    "(-p e^{14}-q e^{15},-e^{24}-e^{35},e^{25}-e^{34},0,0)",
    "(e^{13}+e^{24},e^{23}-e^{14},0,0,0)",
    "(e^{15},p e^{25},q e^{35}+e^{45},-e^{35}+q e^{45},0)",
    "(e^{15}+e^{25},e^{25}+e^{35},e^{35}+e^{45},e^{45},0)",
    "(e^{14},q e^{24},p e^{34},0,0)",
];

/// Known hypo algebras with an adapted coframe.
pub const WITNESSES: &[(&str, &str)] = &[
    ("(0,0,0,0,0)", "e1,e2,e3,e4,e5"),
    ("(e^{24}+e^{35},0,0,0,0)", "e2,e4,e3,e5,e1"),
    (
        "(e^{23}+2e^{14},e^{24}+e^{35},e^{34}-e^{25},0,0)",
        "e4,e1,sqrt2/2 e3,sqrt2/2 e2,1/3(e5-3e1)",
    ),
    (
        "(-1/2 e^{15}-e^{23},-e^{25},1/2 e^{35},3/2 e^{45},0)",
        "e1,e3,e2,e5,e4",
    ),
    ("(e^{25},0,e^{35},-e^{45},0)", "e1,e2,e3,e4,e5"),
];

/// A point p = a/b, q = c/b.
pub fn point(a: i64, b: i64, c: i64) -> ParamPoint {
    ParamPoint::new()
        .with(Param::P, rat(a, b))
        .with(Param::Q, rat(c, b))
}

/// e'^i = Σ_j A_ij e^j: the new structure equations and the map taking forms
/// written in e to forms written in e'.
#[derive(Clone, Debug)]
pub struct BasisChange {
    a: Vec<Vec<Scalar>>,
    images: Vec<KForm>,
}

impl BasisChange {
    /// I + N for a 5×5 integer matrix N; `None` when singular.
    pub fn new(noise: &[i64]) -> Option<Self> {
        let a: Vec<Vec<Scalar>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| Scalar::from_int(noise[5 * i + j] + (i == j) as i64))
                    .collect()
            })
            .collect();
        let b = linalg::inverse(&a)?;
        let images = (0..5).map(|j| KForm::from_dense(5, 1, &b[j])).collect();
        Some(BasisChange { a, images })
    }

    pub fn form(&self, f: &KForm) -> KForm {
        f.substitute(&self.images)
    }

    pub fn algebra(&self, g: &LieAlgebra) -> LieAlgebra {
        let de: Vec<KForm> = (0..5)
            .map(|i| {
                let mut acc = KForm::zero(5, 2);
                for j in 0..5 {
                    acc = acc.add(&g.de(j + 1).scale(&self.a[i][j]));
                }
                self.form(&acc)
            })
            .collect();
        LieAlgebra::new(de).expect("a change of basis preserves Jacobi")
    }

    pub fn coframe(&self, c: &Coframe) -> Coframe {
        Coframe::new(c.forms().iter().map(|f| self.form(f)).collect()).expect("invertible")
    }
}

pub fn base_algebra(idx: usize, a: i64, b: i64, c: i64) -> LieAlgebra {
    parse_algebra(BASES[idx % BASES.len()], &point(a, b, c)).expect("valid family")
}

pub fn noise() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -1i64..=1], 25)
}

/// A random algebra: a base family at random parameters in a random basis.
pub fn algebra() -> impl Strategy<Value = LieAlgebra> {
    (0..BASES.len(), -3i64..=3, 1i64..=3, -3i64..=3, noise()).prop_map(|(i, a, b, c, n)| {
        let g = base_algebra(i, a, b, c);
        match BasisChange::new(&n) {
            Some(bc) => bc.algebra(&g),
            None => g,
        }
    })
}

pub fn form(k: usize) -> impl Strategy<Value = KForm> {
    let len = basis_masks(5, k).len();
    prop::collection::vec(-3i64..=3, len).prop_map(move |c| {
        KForm::from_dense(
            5,
            k,
            &c.into_iter().map(Scalar::from_int).collect::<Vec<_>>(),
        )
    })
}

pub fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=4, -2i64..=2).prop_filter_map("nonzero", |(a, b, s)| {
        let x = Scalar::from_frac(a, b) + Scalar::from_int(s) * Scalar::sqrt2();
        (!num_traits::Zero::is_zero(&x)).then_some(x)
    })
}

pub fn algebra_of(s: &str) -> LieAlgebra {
    LieAlgebra::new(parse_constants::<Scalar>(s).unwrap()).unwrap()
}

pub fn coframe_of(s: &str) -> Coframe {
    Coframe::new(parse_one_forms::<Scalar>(s, 5).unwrap()).unwrap()
}

/// Rational points (c, s) on the unit circle.
pub const ROTATIONS: &[(i64, i64, i64)] = &[
    (3, 4, 5),
    (5, 12, 13),
    (8, 15, 17),
    (-4, 3, 5),
    (0, 1, 1),
    (-1, 0, 1),
    (20, -21, 29),
];
pub mod props;
