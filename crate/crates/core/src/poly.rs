//! Multivariate polynomials over Q in the family parameters `eps, p, q, r`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ring::Ring;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param {
    Eps,
    P,
    Q,
    R,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Eps, Param::P, Param::Q, Param::R];

    pub fn name(self) -> &'static str {
        match self {
            Param::Eps => "eps",
            Param::P => "p",
            Param::Q => "q",
            Param::R => "r",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        match s {
            "eps" | "ε" | "epsilon" => Some(Param::Eps),
            "p" => Some(Param::P),
            "q" => Some(Param::Q),
            "r" => Some(Param::R),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Assignment of rational values to parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ParamPoint(pub BTreeMap<Param, BigRational>);

impl ParamPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: Param, v: BigRational) -> Self {
        self.0.insert(p, v);
        self
    }

    pub fn get(&self, p: Param) -> Option<&BigRational> {
        self.0.get(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

type Exponents = [u8; 4];

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigRational>,
}

fn graded_key(e: &Exponents) -> (u32, [std::cmp::Reverse<u8>; 4]) {
    let total = e.iter().map(|&x| x as u32).sum();
    (total, e.map(std::cmp::Reverse))
}

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(p: Param) -> Self {
        let mut e = [0; 4];
        e[p.slot()] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Poly { terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, _| acc * self)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; 4])
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.is_constant().then(|| {
            self.terms
                .get(&[0; 4])
                .cloned()
                .unwrap_or_else(BigRational::zero)
        })
    }

    /// Parameters occurring with nonzero coefficient.
    pub fn params(&self) -> Vec<Param> {
        Param::ALL
            .into_iter()
            .filter(|p| self.terms.keys().any(|e| e[p.slot()] > 0))
            .collect()
    }

    /// Evaluates at a point; parameters missing from the point are an error.
    pub fn eval(&self, pt: &ParamPoint) -> Result<BigRational, Param> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for p in Param::ALL {
                let k = e[p.slot()];
                if k == 0 {
                    continue;
                }
                let v = pt.get(p).ok_or(p)?;
                for _ in 0..k {
                    term *= v;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    fn sorted_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| graded_key(e));
        v
    }

    /// True when the printed form needs parentheses as a coefficient.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }
}

fn fmt_monomial(e: &Exponents) -> String {
    let mut parts = Vec::new();
    for p in Param::ALL {
        match e[p.slot()] {
            0 => {}
            1 => parts.push(p.name().to_string()),
            k => parts.push(format!("{}^{}", p.name(), k)),
        }
    }
    parts.join(" ")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = fmt_monomial(e);
            if c.is_negative() {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            let a = c.abs();
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a} {mono}"));
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::from_int(1)
    }
}

impl<'a> Add<&'a Poly> for Poly {
    type Output = Poly;

    fn add(mut self, rhs: &'a Poly) -> Poly {
        for (e, c) in &rhs.terms {
            let entry = self.terms.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
        self
    }
}

impl<'a> Sub<&'a Poly> for Poly {
    type Output = Poly;

    fn sub(self, rhs: &'a Poly) -> Poly {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Poly> for Poly {
    type Output = Poly;

    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                let mut single = Poly::zero();
                single.terms.insert(e, c1 * c2);
                out = out + &single;
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Ring for Poly {}
