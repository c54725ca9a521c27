//! Dense univariate polynomials over ℚ: interpolation, gcd, rational roots
//! and Sturm counts of real roots.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Q = BigRational;

/// Coefficients from the constant term up; never has a zero leading term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly(Vec<Q>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Q::one()])
    }

    /// x − r.
    pub fn linear_root(r: &Q) -> Self {
        UPoly(vec![-r.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    fn leading(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().clone();
        UPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        let lead = d.leading().clone();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(points: &[(Q, Q)]) -> Self {
        let mut acc = UPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = UPoly::one();
            let mut denom = Q::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::linear_root(xj));
                    denom *= xi - xj;
                }
            }
            let scale = yi / denom;
            acc = acc.add(&UPoly(basis.0.iter().map(|c| c * &scale).collect()));
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        UPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.0.get(k).cloned().unwrap_or_else(Q::zero);
                    let b = other.0.get(k).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    /// Rational roots, or `None` when the integer coefficients are too large
    /// to enumerate divisor candidates.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        const LIMIT: u64 = 1_000_000_000_000;
        if self.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        let mut p = self.squarefree();
        if p.0[0].is_zero() {
            out.push(Q::zero());
            p = p.div_rem(&UPoly::linear_root(&Q::zero())).0;
        }
        if p.degree() == Some(0) {
            return Some(out);
        }
        let denom_lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            p.0.iter()
                .map(|c| (c * Q::from_integer(denom_lcm.clone())).to_integer())
                .collect();
        let a0 = ints[0].abs().to_u64().filter(|&v| v <= LIMIT)?;
        let an = ints
            .last()
            .expect("nonzero")
            .abs()
            .to_u64()
            .filter(|&v| v <= LIMIT)?;
        for num in divisors(a0) {
            for den in divisors(an) {
                if num.gcd(&den) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let r = Q::new(BigInt::from(num) * sign, BigInt::from(den));
                    if p.eval(&r).is_zero() && !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }

    /// Removes the given roots (each once) from the squarefree part.
    pub fn without_roots(&self, roots: &[Q]) -> Self {
        let mut p = self.squarefree();
        for r in roots {
            let lin = UPoly::linear_root(r);
            let (q, rem) = p.div_rem(&lin);
            if rem.is_zero() {
                p = q;
            }
        }
        p.monic()
    }

    /// Number of distinct real roots, by Sturm's theorem.
    pub fn real_root_count(&self) -> usize {
        let p = self.squarefree();
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let changes = |signs: Vec<i8>| {
            let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_pos: Vec<i8> = seq.iter().map(|q| sign(q.leading())).collect();
        let at_neg: Vec<i8> = seq
            .iter()
            .map(|q| {
                let s = sign(q.leading());
                if q.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        changes(at_neg) - changes(at_pos)
    }
}

fn sign(q: &Q) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let body = if mono.is_empty() {
                s
            } else if c.is_one() {
                mono
            } else if *c == -Q::one() {
                format!("-{mono}")
            } else {
                format!("{s} {mono}")
            };
            if !first && !body.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}
