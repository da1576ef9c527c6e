//! Laurent polynomials in one variable `q` with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

/// Integer Laurent polynomial. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^e`
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Substitute `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (-e, v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.bar()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let d_hi = d.max_exp()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_lead = &d.terms[&d_hi];
        let d_lo = d.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        // Long division from the top; the quotient can have no term below
        // min(rem) - min(d).
        let floor = self.min_exp().unwrap() - d_lo;
        while let Some(hi) = rem.max_exp() {
            let e = hi - d_hi;
            if e < floor {
                return None;
            }
            let (c, r) = rem.terms[&hi].div_rem(d_lead);
            if !r.is_zero() {
                return None;
            }
            let t = Self::monomial(c, e);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

/// Quantum integer `[n] = q^{1-n} + q^{3-n} + ... + q^{n-1}`.
pub fn qint(n: i64) -> Result<LaurentPoly> {
    if n <= 0 {
        return domain(format!("quantum integer [{n}] needs n >= 1"));
    }
    Ok(LaurentPoly::from_terms(
        (0..n).map(|i| (1 - n + 2 * i, BigInt::one())),
    ))
}

/// Quantum binomial `[n choose k]`, built as a product of quantum integers
/// followed by exact division.
pub fn qbinom(n: i64, k: i64) -> Result<LaurentPoly> {
    if n < 0 || k < 0 || k > n {
        return domain(format!("quantum binomial [{n} choose {k}] out of range"));
    }
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for i in 1..=k {
        num = &num * &qint(n - k + i)?;
        den = &den * &qint(i)?;
    }
    num.exact_div(&den)
        .ok_or_else(|| Error::NotDivisible(format!("[{n} choose {k}]")))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if *e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(qint(1).unwrap(), LaurentPoly::one());
        assert_eq!(qint(2).unwrap(), lp(&[(-1, 1), (1, 1)]));
        // (q^3 - q^-3) / (q - q^-1) by long division
        let num = lp(&[(3, 1), (-3, -1)]);
        let den = lp(&[(1, 1), (-1, -1)]);
        assert_eq!(qint(3).unwrap(), num.exact_div(&den).unwrap());
        assert_eq!(qint(3).unwrap(), lp(&[(-2, 1), (0, 1), (2, 1)]));
        assert!(qint(0).is_err());
        assert!(qint(-2).is_err());
    }

    #[test]
    fn quantum_binomials() {
        for n in 0..6 {
            assert_eq!(qbinom(n, 0).unwrap(), LaurentPoly::one());
        }
        for n in 1..6 {
            assert_eq!(qbinom(n, 1).unwrap(), qint(n).unwrap());
        }
        assert_eq!(
            qbinom(4, 2).unwrap(),
            lp(&[(-4, 1), (-2, 1), (0, 2), (2, 1), (4, 1)])
        );
        assert!(qbinom(3, 4).is_err());
        assert!(qbinom(-1, 0).is_err());
    }

    #[test]
    fn ring_ops() {
        let q2 = qint(2).unwrap();
        assert_eq!(&q2 * &q2, lp(&[(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(qint(3).unwrap().eval_at_one(), BigInt::from(3));
        assert!((&q2 + &(-&q2)).is_zero());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(qint(3).unwrap().to_string(), "q^-2 + 1 + q^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(lp(&[(1, -1), (0, 2)]).to_string(), "2 - q");
        assert_eq!(lp(&[(-1, -3), (4, 1)]).to_string(), "-3q^-1 + q^4");
        assert_eq!(lp(&[(0, -1)]).to_string(), "-1");
    }

    #[test]
    fn non_divisible() {
        assert!(qint(3).unwrap().exact_div(&qint(2).unwrap()).is_none());
    }
}
