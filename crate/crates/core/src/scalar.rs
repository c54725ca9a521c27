//! Exact arithmetic in the real field Q(√2, √3).
//!
//! Every element is stored as `a + b√2 + c√3 + d√6` with rational `a..d`.
//! Pure rationals keep the irrational part unallocated, which is by far the
//! common case when working with structure constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{Field, Ring};

type Q = BigRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: Q,
    /// Coefficients of √2, √3, √6. `None` iff all three vanish.
    irr: Option<Box<[Q; 3]>>,
}

impl Scalar {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        Self::normalized(a, [b, c, d])
    }

    fn normalized(rat: Q, irr: [Q; 3]) -> Self {
        if irr.iter().all(Zero::is_zero) {
            Scalar { rat, irr: None }
        } else {
            Scalar {
                rat,
                irr: Some(Box::new(irr)),
            }
        }
    }

    pub fn from_rational(q: Q) -> Self {
        Scalar { rat: q, irr: None }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Q::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(Q::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt2() -> Self {
        Self::new(Q::zero(), Q::one(), Q::zero(), Q::zero())
    }

    pub fn sqrt3() -> Self {
        Self::new(Q::zero(), Q::zero(), Q::one(), Q::zero())
    }

    pub fn sqrt6() -> Self {
        Self::new(Q::zero(), Q::zero(), Q::zero(), Q::one())
    }

    /// The four rational coordinates `[a, b, c, d]`.
    pub fn parts(&self) -> [Q; 4] {
        match &self.irr {
            None => [self.rat.clone(), Q::zero(), Q::zero(), Q::zero()],
            Some(irr) => [
                self.rat.clone(),
                irr[0].clone(),
                irr[1].clone(),
                irr[2].clone(),
            ],
        }
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_none()
    }

    pub fn to_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.rat.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let [a, b, c, d] = self.parts();
        let f = |q: &Q| q.to_f64().unwrap_or(f64::NAN);
        f(&a) + f(&b) * std::f64::consts::SQRT_2 + f(&c) * 3f64.sqrt() + f(&d) * 6f64.sqrt()
    }

    /// Conjugate under √3 ↦ −√3.
    fn conj3(&self) -> Self {
        let [a, b, c, d] = self.parts();
        Self::new(a, b, -c, -d)
    }

    /// Conjugate under √2 ↦ −√2.
    fn conj2(&self) -> Self {
        let [a, b, c, d] = self.parts();
        Self::new(a, -b, c, -d)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        // x * conj3(x) lies in Q(√2); multiplying by its √2-conjugate lands in Q.
        let c3 = self.conj3();
        let n = self.clone() * &c3;
        let c2 = n.conj2();
        let norm = (n * &c2)
            .to_rational()
            .expect("norm of Q(√2,√3) element is rational");
        Some(c3 * &c2 * &Self::from_rational(norm.recip()))
    }

    /// Sign of the real number, with √2, √3 positive.
    pub fn signum(&self) -> Ordering {
        let [a, b, c, d] = self.parts();
        // x = P + Q√3 with P = a + b√2, Q = c + d√2.
        let sp = sign_q2(&a, &b);
        let sq = sign_q2(&c, &d);
        match (sp, sq) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (s, t) if s == t => s,
            (s, _) => {
                // sign(P + Q√3) = sign(P) * sign(P² − 3Q²) when P, Q have opposite signs.
                let m = &a * &a + Q::from_integer(2.into()) * &b * &b
                    - Q::from_integer(3.into()) * (&c * &c + Q::from_integer(2.into()) * &d * &d);
                let n = Q::from_integer(2.into()) * &a * &b - Q::from_integer(6.into()) * &c * &d;
                let t = sign_q2(&m, &n);
                if s == Ordering::Greater {
                    t
                } else {
                    t.reverse()
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `a+b*r2+c*r3+d*r6`, every coordinate printed, for diff-able output.
    pub fn to_machine_string(&self) -> String {
        let [a, b, c, d] = self.parts();
        let mut s = a.to_string();
        for (q, tag) in [(b, "r2"), (c, "r3"), (d, "r6")] {
            if q.is_negative() {
                s.push_str(&format!("-{}*{}", -q, tag));
            } else {
                s.push_str(&format!("+{}*{}", q, tag));
            }
        }
        s
    }
}

/// Sign of `m + n√2`.
fn sign_q2(m: &Q, n: &Q) -> Ordering {
    let sm = m.cmp(&Q::zero());
    let sn = n.cmp(&Q::zero());
    match (sm, sn) {
        (s, Ordering::Equal) => s,
        (Ordering::Equal, s) => s,
        (s, t) if s == t => s,
        (s, _) => {
            let t = (m * m).cmp(&(Q::from_integer(2.into()) * n * n));
            if s == Ordering::Greater {
                t
            } else {
                t.reverse()
            }
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Self::from_rational(Q::zero())
    }

    fn is_zero(&self) -> bool {
        self.irr.is_none() && self.rat.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Self::from_rational(Q::one())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Self::from_rational(q)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other).signum()
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self.irr, &rhs.irr) {
            (None, None) => Scalar::from_rational(self.rat + &rhs.rat),
            (l, r) => {
                let zero = || [Q::zero(), Q::zero(), Q::zero()];
                let l = l.map(|b| *b).unwrap_or_else(zero);
                let r = r.as_deref().cloned().unwrap_or_else(zero);
                let [l0, l1, l2] = l;
                let [r0, r1, r2] = r;
                Scalar::normalized(self.rat + &rhs.rat, [l0 + r0, l1 + r1, l2 + r2])
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (&self.irr, &rhs.irr) {
            (None, None) => Scalar::from_rational(self.rat * &rhs.rat),
            (None, Some(r)) => {
                if self.rat.is_zero() {
                    return Scalar::zero();
                }
                let k = &self.rat;
                Scalar::normalized(k * &rhs.rat, [k * &r[0], k * &r[1], k * &r[2]])
            }
            (Some(_), None) => rhs.clone() * &self,
            (Some(_), Some(_)) => {
                let [a1, b1, c1, d1] = self.parts();
                let [a2, b2, c2, d2] = rhs.parts();
                let two = Q::from_integer(2.into());
                let three = Q::from_integer(3.into());
                let six = Q::from_integer(6.into());
                let a = &a1 * &a2 + &two * &b1 * &b2 + &three * &c1 * &c2 + &six * &d1 * &d2;
                let b = &a1 * &b2 + &b1 * &a2 + &three * (&c1 * &d2 + &d1 * &c2);
                let c = &a1 * &c2 + &c1 * &a2 + &two * (&b1 * &d2 + &d1 * &b2);
                let d = &a1 * &d2 + &d1 * &a2 + &b1 * &c2 + &c1 * &b2;
                Scalar::normalized(a, [b, c, d])
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;

    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inverse().expect("division by zero")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self * &rhs
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            rat: -self.rat,
            irr: self.irr.map(|b| {
                let [x, y, z] = *b;
                Box::new([-x, -y, -z])
            }),
        }
    }
}

impl Ring for Scalar {}

impl Field for Scalar {
    fn inv(&self) -> Self {
        self.inverse().expect("inverse of zero")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.parts();
        let mut out = String::new();
        if !a.is_zero() {
            out.push_str(&a.to_string());
        }
        for (q, tag) in [(b, "r2"), (c, "r3"), (d, "r6")] {
            if q.is_zero() {
                continue;
            }
            let body = if q.abs().is_one() {
                tag.to_string()
            } else {
                format!("{}*{}", q.abs(), tag)
            };
            if q.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
