//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every variable carries a positive even weight (`deg x_j = 2j` for the
//! j-th elementary symmetric variable). Monomials are ordered graded-lex:
//! weighted degree first, then lexicographically on the declared variable
//! order. The order only fixes printing and the division algorithm.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered list of named, weighted variables.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new(vars: &[(&str, u32)]) -> Ring {
        for (name, w) in vars {
            assert!(*w > 0 && w % 2 == 0, "variable {name} needs a positive even weight");
        }
        Arc::new(PolyRing {
            names: vars.iter().map(|(n, _)| n.to_string()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Domain(format!("unknown variable {name}")))
    }

    fn monomial(&self, exps: Vec<u32>) -> Monomial {
        let wdeg = exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum();
        Monomial { wdeg, exps }
    }
}

/// Convenience constructors tied to a ring.
pub trait RingExt {
    fn zero(&self) -> MultiPoly;
    fn one(&self) -> MultiPoly;
    fn constant(&self, c: Rational) -> MultiPoly;
    fn var(&self, name: &str) -> MultiPoly;
    fn var_at(&self, idx: usize) -> MultiPoly;
    fn mono(&self, c: Rational, exps: &[u32]) -> MultiPoly;
}

impl RingExt for Ring {
    fn zero(&self) -> MultiPoly {
        MultiPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> MultiPoly {
        self.constant(Rational::one())
    }

    fn constant(&self, c: Rational) -> MultiPoly {
        self.mono(c, &vec![0; self.nvars()])
    }

    fn var(&self, name: &str) -> MultiPoly {
        let idx = self.index_of(name).expect("declared variable");
        self.var_at(idx)
    }

    fn var_at(&self, idx: usize) -> MultiPoly {
        let mut exps = vec![0; self.nvars()];
        exps[idx] = 1;
        self.mono(Rational::one(), &exps)
    }

    fn mono(&self, c: Rational, exps: &[u32]) -> MultiPoly {
        assert_eq!(exps.len(), self.nvars());
        let mut p = self.zero();
        p.add_term(self.monomial(exps.to_vec()), c);
        p
    }
}

/// Exponent vector with its cached weighted degree. The derived order is
/// graded-lex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    wdeg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn weighted_degree(&self) -> u32 {
        self.wdeg
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            wdeg: self.wdeg + other.wdeg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            wdeg: self.wdeg - other.wdeg,
            exps,
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let m = self.ring.monomial(exps.to_vec());
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Common weighted degree of all monomials, `None` for inhomogeneous
    /// input. The zero polynomial is homogeneous of every degree and
    /// reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Some(0);
        };
        it.all(|m| m.wdeg == first.wdeg).then_some(first.wdeg)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.wdeg == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials live in different rings"
        );
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = self.ring.zero();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / g`. Fails when the division algorithm leaves a
    /// remainder.
    pub fn exact_divide(&self, g: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(g);
        let Some((g_lm, g_lc)) = g.leading_term() else {
            return domain("division by the zero polynomial");
        };
        let mut rem = self.clone();
        let mut quot = self.ring.zero();
        while let Some((lm, lc)) = rem.leading_term() {
            let Some(m) = lm.div(g_lm) else {
                return Err(Error::NotDivisible(format!("{self} by {g}")));
            };
            let c = lc / g_lc;
            let mut t = self.ring.zero();
            t.add_term(m, c);
            rem = &rem - &(&t * g);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// `(f - f[v_new := v_old]) / (v_new - v_old)`.
    pub fn difference_quotient(&self, v_new: &str, v_old: &str) -> Result<MultiPoly> {
        if v_new == v_old {
            return domain("difference quotient needs two distinct variables");
        }
        let new_idx = self.ring.index_of(v_new)?;
        let old_idx = self.ring.index_of(v_old)?;
        let swapped = self.substitute(&[(v_new, self.ring.var_at(old_idx))])?;
        let denom = &self.ring.var_at(new_idx) - &self.ring.var_at(old_idx);
        (self - &swapped).exact_divide(&denom)
    }

    pub fn partial_derivative(&self, v: &str) -> Result<MultiPoly> {
        let idx = self.ring.index_of(v)?;
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[idx] -= 1;
            out.add_term(self.ring.monomial(exps), c * rat(e as i64));
        }
        Ok(out)
    }

    /// Replace the named variables by polynomials of the same ring.
    pub fn substitute(&self, bindings: &[(&str, MultiPoly)]) -> Result<MultiPoly> {
        let mut images: Vec<MultiPoly> =
            (0..self.ring.nvars()).map(|i| self.ring.var_at(i)).collect();
        for (name, p) in bindings {
            self.check_ring(p);
            images[self.ring.index_of(name)?] = p.clone();
        }
        Ok(self.map_into(&self.ring, &images))
    }

    /// Ring homomorphism sending the i-th variable to `images[i]`, all of
    /// which live in `target`.
    pub fn map_into(&self, target: &Ring, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars());
        let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                term = &term * &p;
            }
            out = &out + &term;
        }
        out
    }

    /// Embed into a ring that declares (at least) the same variable names.
    pub fn lift(&self, target: &Ring) -> Result<MultiPoly> {
        let images = self
            .ring
            .names
            .iter()
            .map(|n| target.index_of(n).map(|i| target.var_at(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.map_into(target, &images))
    }
}

impl MultiPoly {
    /// Remainder of the multivariate division algorithm by `divisors`
    /// (every term of the result is irreducible by their leading monomials).
    pub fn remainder(&self, divisors: &[MultiPoly]) -> MultiPoly {
        let lead: Vec<(Monomial, Rational)> = divisors
            .iter()
            .filter_map(|d| d.leading_term().map(|(m, c)| (m.clone(), c.clone())))
            .collect();
        let mut rem = self.ring.zero();
        let mut work = self.clone();
        while let Some((lm, lc)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let hit = lead
                .iter()
                .zip(divisors.iter().filter(|d| !d.is_zero()))
                .find_map(|((dm, dc), d)| lm.div(dm).map(|q| (q, &lc / dc, d)));
            match hit {
                Some((q, c, d)) => {
                    let mut t = self.ring.zero();
                    t.add_term(q, c);
                    work = &work - &(&t * d);
                }
                None => {
                    work.terms.remove(&lm);
                    rem.add_term(lm, lc);
                }
            }
        }
        rem
    }

    /// S-polynomial of two nonzero polynomials.
    pub fn s_polynomial(&self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        let (fm, fc) = self.leading_term().expect("nonzero");
        let (gm, gc) = other.leading_term().expect("nonzero");
        let lcm: Vec<u32> = fm.exps.iter().zip(&gm.exps).map(|(a, b)| *a.max(b)).collect();
        let lcm = self.ring.monomial(lcm);
        let mut a = self.ring.zero();
        a.add_term(lcm.div(fm).expect("lcm"), Rational::one() / fc);
        let mut b = self.ring.zero();
        b.add_term(lcm.div(gm).expect("lcm"), Rational::one() / gc);
        &(&a * self) - &(&b * other)
    }

    /// Leading monomials are coprime.
    pub fn leading_coprime(&self, other: &MultiPoly) -> bool {
        match (self.leading_term(), other.leading_term()) {
            (Some((f, _)), Some((g, _))) => f.exps.iter().zip(&g.exps).all(|(a, b)| *a == 0 || *b == 0),
            _ => true,
        }
    }

    /// Leading monomial of `self` divides that of `other`.
    pub fn leading_divides(&self, other: &MultiPoly) -> bool {
        match (self.leading_term(), other.leading_term()) {
            (Some((f, _)), Some((g, _))) => g.div(f).is_some(),
            _ => false,
        }
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let n = m.len();
    if n == 0 {
        return domain("empty matrix");
    }
    if m.iter().any(|row| row.len() != n) {
        return domain("determinant of a non-square matrix");
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let ring = m[0][0].ring().clone();
    let mut acc = ring.zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * &determinant(&minor)?;
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| match e {
                    1 => self.ring.names[i].clone(),
                    _ => format!("{}^{}", self.ring.names[i], e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = self.ring.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_ring() -> Ring {
        PolyRing::new(&[("x", 2), ("y", 2)])
    }

    #[test]
    fn exact_division_of_a_factorization() {
        let r = xy_ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let f = &(&x * &x) - &(&y * &y);
        let q = f.exact_divide(&(&x - &y)).unwrap();
        assert_eq!(q, &x + &y);
        assert_eq!(f.exact_divide(&r.one()).unwrap(), f);
        assert!(matches!(
            (&x + &r.one()).exact_divide(&y),
            Err(Error::NotDivisible(_))
        ));
        assert!(f.exact_divide(&r.zero()).is_err());
    }

    #[test]
    fn potential_difference_quotient_for_sl2() {
        // W(s,t) = s^3 - 3st; A' = (W(x+y,xy) - W(s,xy)) / (x+y-s)
        let r = PolyRing::new(&[("x", 2), ("y", 2), ("s", 2)]);
        let (x, y, s) = (r.var("x"), r.var("y"), r.var("s"));
        let w = |a: &MultiPoly, b: &MultiPoly| &a.pow(3) - &(a * b).scale(&rat(3));
        let xy = &x * &y;
        let sum = &x + &y;
        let num = &w(&sum, &xy) - &w(&s, &xy);
        let den = &sum - &s;
        let q = num.exact_divide(&den).unwrap();
        assert_eq!(&q * &den, num);
    }

    #[test]
    fn difference_quotients() {
        let r = PolyRing::new(&[("x", 2), ("y", 2)]);
        let (x, y) = (r.var("x"), r.var("y"));
        let expect = &(&(&x * &x) + &(&x * &y)) + &(&y * &y);
        assert_eq!(x.pow(3).difference_quotient("x", "y").unwrap(), expect);
        assert_eq!(x.difference_quotient("x", "y").unwrap(), r.one());
        assert!(x.difference_quotient("x", "x").is_err());

        let r = PolyRing::new(&[("s", 2), ("t", 4), ("u", 2)]);
        let (s, t, u) = (r.var("s"), r.var("t"), r.var("u"));
        let f = &s.pow(2) * &t;
        assert_eq!(f.difference_quotient("s", "u").unwrap(), &(&s + &u) * &t);
    }

    #[test]
    fn calculus_and_determinants() {
        let r = PolyRing::new(&[("s", 2), ("t", 4)]);
        let (s, t) = (r.var("s"), r.var("t"));
        let w = &s.pow(3) - &(&s * &t).scale(&rat(3));
        assert_eq!(w.partial_derivative("t").unwrap(), s.scale(&rat(-3)));

        let r2 = xy_ring();
        let (x, y) = (r2.var("x"), r2.var("y"));
        let m = vec![vec![x.clone(), r2.one()], vec![y.clone(), r2.one()]];
        assert_eq!(determinant(&m).unwrap(), &x - &y);
        assert!(determinant(&[vec![x.clone(), y.clone()]]).is_err());
    }

    #[test]
    fn substitution_into_power_sums() {
        let r = PolyRing::new(&[("x", 2), ("y", 2), ("s", 2), ("t", 4)]);
        let (x, y, s, t) = (r.var("x"), r.var("y"), r.var("s"), r.var("t"));
        let w = &s.pow(3) - &(&s * &t).scale(&rat(3));
        let sub = w
            .substitute(&[("s", &x + &y), ("t", &x * &y)])
            .unwrap();
        assert_eq!(sub, &x.pow(3) + &y.pow(3));
    }

    #[test]
    fn weighted_degrees_and_printing() {
        let r = PolyRing::new(&[("s", 2), ("t", 4)]);
        let (s, t) = (r.var("s"), r.var("t"));
        let p = &s.pow(2) - &t.scale(&rat_frac(3, 2));
        assert_eq!(p.homogeneous_degree(), Some(4));
        assert_eq!((&p + &s).homogeneous_degree(), None);
        assert_eq!(p.to_string(), "s^2 - 3/2*t");
        assert_eq!(r.zero().to_string(), "0");
    }
}
