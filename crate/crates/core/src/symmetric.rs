//! Partitions, Schur polynomials in at most three variables, Schur-basis
//! products and the facet potentials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::polyring::{determinant, rat, MultiPoly, PolyRing, Rational, Ring, RingExt};

/// Weakly decreasing tuple of one to three nonnegative parts. Trailing
/// zeros are explicit, so `(1,0)` and `(1,0,0)` are different keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.is_empty() || parts.len() > 3 {
            return domain(format!("partition length {} not in 1..=3", parts.len()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("{parts:?} is not weakly decreasing"));
        }
        Ok(Partition(parts.to_vec()))
    }

    pub fn empty(k: usize) -> Self {
        Partition(vec![0; k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|p| *p == 0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    /// Fits in the `k x width` box.
    pub fn fits(&self, width: u32) -> bool {
        self.0[0] <= width
    }

    /// Complement inside the `k x width` box, reversed: `(w - l_k, ..., w - l_1)`.
    pub fn complement(&self, width: u32) -> Option<Partition> {
        if !self.fits(width) {
            return None;
        }
        Some(Partition(self.0.iter().rev().map(|p| width - p).collect()))
    }

    /// All partitions with `k` parts and first part at most `width`.
    pub fn in_box(k: usize, width: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(k: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if cur.len() == k {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in 0..=max {
                cur.push(p);
                rec(k, p, cur, out);
                cur.pop();
            }
        }
        rec(k, width, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All partitions with `k` parts summing to `size`.
    pub fn of_size(k: usize, size: u32) -> Vec<Partition> {
        Partition::in_box(k, size)
            .into_iter()
            .filter(|p| p.size() == size)
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("partition {s:?} needs parentheses")))?;
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(&parts)
    }
}

/// Shorthand used throughout the crate and its tests.
pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts).expect("valid partition literal")
}

/// Rational linear combination of same-length partitions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SchurSum {
    k: usize,
    terms: BTreeMap<Partition, Rational>,
}

impl SchurSum {
    pub fn zero(k: usize) -> Self {
        SchurSum {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(p: Partition) -> Self {
        Self::term(p, Rational::one())
    }

    pub fn term(p: Partition, c: Rational) -> Self {
        let mut s = SchurSum::zero(p.len());
        s.add_term(p, c);
        s
    }

    pub fn one(k: usize) -> Self {
        Self::single(Partition::empty(k))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Partition) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, p: Partition, c: Rational) {
        assert_eq!(p.len(), self.k, "partition length mismatch in SchurSum");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &SchurSum) -> SchurSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SchurSum {
        let mut out = SchurSum::zero(self.k);
        for (p, v) in &self.terms {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &SchurSum) -> SchurSum {
        assert_eq!(self.k, other.k);
        let mut out = SchurSum::zero(self.k);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (p, v) in mult(a, b).terms {
                    out.add_term(p, v * &c);
                }
            }
        }
        out
    }

    /// Drop every partition whose first part exceeds `width`.
    pub fn truncate(&self, width: u32) -> SchurSum {
        SchurSum {
            k: self.k,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.fits(width))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Expand back into a symmetric polynomial in `x1..xk`.
    pub fn to_poly(&self) -> MultiPoly {
        let r = sym_ring(self.k);
        let mut out = r.zero();
        for (p, c) in &self.terms {
            out = &out + &schur(p, self.k).expect("length checked").scale(c);
        }
        out
    }
}

impl fmt::Display for SchurSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs.is_one() {
                write!(f, "pi{p}")?;
            } else {
                write!(f, "{abs}*pi{p}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SchurSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SchurSum[{}]({self})", self.k)
    }
}

fn ring_slot(slots: &'static [OnceLock<Ring>; 3], k: usize, make: impl FnOnce() -> Ring) -> Ring {
    assert!((1..=3).contains(&k), "variable count {k} not in 1..=3");
    slots[k - 1].get_or_init(make).clone()
}

/// `Q[x1..xk]`, every variable of weight 2.
pub fn sym_ring(k: usize) -> Ring {
    static SLOTS: [OnceLock<Ring>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    ring_slot(&SLOTS, k, || {
        let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        let vars: Vec<(&str, u32)> = names.iter().map(|n| (n.as_str(), 2)).collect();
        PolyRing::new(&vars)
    })
}

/// Ring of elementary symmetric variables for a `k`-facet: `x`, `(s,t)` or
/// `(p,q,r)` with weights `2, 4, 6`.
pub fn elem_ring(k: usize) -> Ring {
    static SLOTS: [OnceLock<Ring>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    ring_slot(&SLOTS, k, || match k {
        1 => PolyRing::new(&[("x", 2)]),
        2 => PolyRing::new(&[("s", 2), ("t", 4)]),
        _ => PolyRing::new(&[("p", 2), ("q", 4), ("r", 6)]),
    })
}

/// Elementary symmetric polynomials `e_1..e_k` in `sym_ring(k)`.
pub fn elementary(k: usize) -> Vec<MultiPoly> {
    let r = sym_ring(k);
    let xs: Vec<MultiPoly> = (0..k).map(|i| r.var_at(i)).collect();
    let mut e = vec![r.one()];
    for x in &xs {
        let mut next = e.clone();
        next.push(r.zero());
        for j in 1..next.len() {
            next[j] = &e.get(j).cloned().unwrap_or_else(|| r.zero()) + &(&e[j - 1] * x);
        }
        e = next;
    }
    e.into_iter().skip(1).collect()
}

/// Schur polynomial as the bialternant `|x_i^{l_j + k - j}| / Vandermonde`.
pub fn schur(p: &Partition, k: usize) -> Result<MultiPoly> {
    if p.len() != k {
        return domain(format!("partition {p} has length {} but k = {k}", p.len()));
    }
    static CACHE: OnceLock<Mutex<HashMap<Partition, MultiPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(p) {
        return Ok(hit.clone());
    }
    let r = sym_ring(k);
    let entry = |i: usize, exp: u32| {
        let mut exps = vec![0; k];
        exps[i] = exp;
        r.mono(Rational::one(), &exps)
    };
    let num: Vec<Vec<MultiPoly>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| entry(i, p.parts()[j] + (k - 1 - j) as u32))
                .collect()
        })
        .collect();
    let vander: Vec<Vec<MultiPoly>> = (0..k)
        .map(|i| (0..k).map(|j| entry(i, (k - 1 - j) as u32)).collect())
        .collect();
    let out = determinant(&num)?.exact_divide(&determinant(&vander)?)?;
    cache.lock().unwrap().insert(p.clone(), out.clone());
    Ok(out)
}

/// Express a symmetric polynomial in `x1..xk` in the Schur basis by
/// repeatedly cancelling the leading monomial.
pub fn to_schur_basis(f: &MultiPoly, k: usize) -> Result<SchurSum> {
    let r = sym_ring(k);
    if **f.ring() != *r {
        return domain(format!("expected a polynomial in x1..x{k}"));
    }
    let mut rem = f.lift(&r)?;
    let mut out = SchurSum::zero(k);
    while let Some((m, c)) = rem.leading_term() {
        let Ok(p) = Partition::new(m.exps()) else {
            return domain(format!("polynomial is not symmetric in x1..x{k}"));
        };
        let c = c.clone();
        rem = &rem - &schur(&p, k)?.scale(&c);
        out.add_term(p, c);
    }
    Ok(out)
}

/// Two-variable product rule: `pi_{i,j} pi_{a,b} = sum pi_{x,y}` over
/// `x + y = i + j + a + b`, `a + i >= x >= max(a + j, b + i)`.
pub fn mult2(l: &Partition, m: &Partition) -> Result<SchurSum> {
    if l.len() != 2 || m.len() != 2 {
        return domain("mult2 needs two partitions of length 2");
    }
    let (i, j) = (l.parts()[0], l.parts()[1]);
    let (a, b) = (m.parts()[0], m.parts()[1]);
    let total = i + j + a + b;
    let mut out = SchurSum::zero(2);
    for x in (a + j).max(b + i)..=(a + i) {
        out.add_term(Partition(vec![x, total - x]), Rational::one());
    }
    Ok(out)
}

/// Three-variable product by expansion and conversion back to the Schur
/// basis. Memoized.
pub fn mult3(l: &Partition, m: &Partition) -> Result<SchurSum> {
    if l.len() != 3 || m.len() != 3 {
        return domain("mult3 needs two partitions of length 3");
    }
    type Key = (Partition, Partition);
    static CACHE: OnceLock<Mutex<HashMap<Key, SchurSum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = if l <= m {
        (l.clone(), m.clone())
    } else {
        (m.clone(), l.clone())
    };
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let out = if l.is_empty() {
        SchurSum::single(m.clone())
    } else if m.is_empty() {
        SchurSum::single(l.clone())
    } else {
        to_schur_basis(&(&schur(l, 3)? * &schur(m, 3)?), 3)?
    };
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Product of two same-length Schur classes (length 1 is `x^a x^b`).
pub fn mult(l: &Partition, m: &Partition) -> SchurSum {
    match (l.len(), m.len()) {
        (1, 1) => SchurSum::single(Partition(vec![l.parts()[0] + m.parts()[0]])),
        (2, 2) => mult2(l, m).expect("length 2"),
        (3, 3) => mult3(l, m).expect("length 3"),
        _ => panic!("cannot multiply {l} by {m}"),
    }
}

/// Terms `(a,b,c)` of `pi_{i,j,k}(x1,x2,x3) = sum pi_{a,b}(x1,x2) x3^c` with
/// `i >= a >= j >= b >= k` and `a + b + c = i + j + k`.
pub fn decompose3(l: &Partition) -> Result<Vec<(Partition, u32)>> {
    if l.len() != 3 {
        return domain("decompose3 needs a partition of length 3");
    }
    let (i, j, k) = (l.parts()[0], l.parts()[1], l.parts()[2]);
    let mut out = Vec::new();
    for a in j..=i {
        for b in k..=j {
            out.push((Partition(vec![a, b]), i + j + k - a - b));
        }
    }
    Ok(out)
}

/// Facet potential `W(sigma_1..sigma_k)` with `W(e_1(y)..e_k(y)) = sum y^{N+1}`.
#[derive(Clone, Debug)]
pub struct Potential {
    pub n: u32,
    pub k: usize,
    pub poly: MultiPoly,
    /// `a_{ij}`: coefficient of `s^i t^j`, only tabulated for `k = 2`.
    pub coeffs: BTreeMap<(u32, u32), Rational>,
}

impl Potential {
    /// Partial derivative with respect to the `i`-th elementary variable
    /// (1-based).
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let name = self.poly.ring().names()[i - 1].clone();
        self.poly.partial_derivative(&name).expect("declared variable")
    }

    pub fn a(&self, i: u32, j: u32) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }
}

/// `a_{N+1-2j, j} = ((-1)^j / j) (N+1) binom(N-j, j-1)` for `j >= 1`.
pub fn potential_coefficient_closed_form(n: u32, j: u32) -> Rational {
    if j == 0 {
        return Rational::one();
    }
    let sign = if j % 2 == 0 { 1 } else { -1 };
    let b = binomial(BigInt::from(n - j), BigInt::from(j - 1));
    Rational::new(BigInt::from(sign * (n as i64 + 1)) * b, BigInt::from(j))
}

/// Build the potential through Newton's identities
/// `p_m = sum_{i=1}^{m} (-1)^{i-1} e_i p_{m-i}` (with `m e_m` for `i = m`).
pub fn potential(n: u32, k: usize) -> Result<Potential> {
    if n < 2 {
        return domain(format!("potential needs N >= 2, got {n}"));
    }
    if !(1..=3).contains(&k) {
        return domain(format!("facet thickness {k} not in 1..=3"));
    }
    let r = elem_ring(k);
    let e: Vec<MultiPoly> = (0..k).map(|i| r.var_at(i)).collect();
    let m_max = n as usize + 1;
    let mut p: Vec<MultiPoly> = vec![r.zero(); m_max + 1];
    for m in 1..=m_max {
        let mut acc = r.zero();
        for i in 1..=m.min(k) {
            let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
            let term = if i == m {
                e[i - 1].scale(&rat(m as i64))
            } else {
                &e[i - 1] * &p[m - i]
            };
            acc = &acc + &term.scale(&sign);
        }
        p[m] = acc;
    }
    let poly = p[m_max].clone();
    let mut coeffs = BTreeMap::new();
    if k == 2 {
        for (mono, c) in poly.terms() {
            coeffs.insert((mono.exps()[0], mono.exps()[1]), c.clone());
        }
        for j in 0..=(n + 1) / 2 {
            let i = n + 1 - 2 * j;
            if coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
                != potential_coefficient_closed_form(n, j)
            {
                return Err(Error::Domain(format!(
                    "potential coefficient a_({i},{j}) disagrees with its closed form"
                )));
            }
        }
    }
    Ok(Potential { n, k, poly, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> Vec<MultiPoly> {
        let r = sym_ring(k);
        (0..k).map(|i| r.var_at(i)).collect()
    }

    fn sum_of(parts: &[(&[u32], i64)]) -> SchurSum {
        let mut s = SchurSum::zero(parts[0].0.len());
        for (p, c) in parts {
            s.add_term(part(p), rat(*c));
        }
        s
    }

    #[test]
    fn partitions_validate_and_print() {
        assert!(Partition::new(&[1, 2]).is_err());
        assert!(Partition::new(&[]).is_err());
        assert!(Partition::new(&[1, 1, 1, 1]).is_err());
        assert_eq!(part(&[2, 1, 0]).to_string(), "(2,1,0)");
        assert_eq!("(2, 1,0)".parse::<Partition>().unwrap(), part(&[2, 1, 0]));
        assert!("2,1".parse::<Partition>().is_err());
        assert_eq!(Partition::in_box(2, 2).len(), 6);
        assert_eq!(part(&[2, 1, 0]).complement(3), Some(part(&[3, 2, 1])));
    }

    #[test]
    fn small_schur_polynomials() {
        let v = x(2);
        assert_eq!(schur(&part(&[1, 0]), 2).unwrap(), &v[0] + &v[1]);
        assert_eq!(schur(&part(&[1, 1]), 2).unwrap(), &v[0] * &v[1]);
        let x1x2 = &v[0] * &v[1];
        assert_eq!(
            schur(&part(&[2, 1]), 2).unwrap(),
            &(&x1x2 * &v[0]) + &(&x1x2 * &v[1])
        );
        assert!(schur(&part(&[1, 0]), 3).is_err());
    }

    #[test]
    fn two_variable_explicit_form() {
        let v = x(2);
        for i in 0..=6u32 {
            for j in 0..=i {
                let mut expect = sym_ring(2).zero();
                for l in j..=i {
                    expect = &expect + &(&v[0].pow(l) * &v[1].pow(i + j - l));
                }
                assert_eq!(schur(&part(&[i, j]), 2).unwrap(), expect, "pi_({i},{j})");
            }
        }
    }

    #[test]
    fn schur_basis_conversion() {
        let v = x(2);
        assert_eq!(
            to_schur_basis(&(&v[0] + &v[1]), 2).unwrap(),
            SchurSum::single(part(&[1, 0]))
        );
        let sq = &v[0].pow(2) + &v[1].pow(2);
        assert_eq!(
            to_schur_basis(&sq, 2).unwrap(),
            sum_of(&[(&[2, 0], 1), (&[1, 1], -1)])
        );
        let w = x(3);
        let e1 = &(&w[0] + &w[1]) + &w[2];
        assert_eq!(
            to_schur_basis(&e1.pow(2), 3).unwrap(),
            sum_of(&[(&[2, 0, 0], 1), (&[1, 1, 0], 1)])
        );
        assert!(to_schur_basis(&v[0], 2).is_err());
    }

    #[test]
    fn products() {
        assert_eq!(
            mult2(&part(&[1, 0]), &part(&[1, 0])).unwrap(),
            sum_of(&[(&[2, 0], 1), (&[1, 1], 1)])
        );
        assert_eq!(
            mult2(&part(&[3, 1]), &part(&[0, 0])).unwrap(),
            SchurSum::single(part(&[3, 1]))
        );
        assert_eq!(
            mult2(&part(&[1, 1]), &part(&[1, 1])).unwrap(),
            SchurSum::single(part(&[2, 2]))
        );
        assert_eq!(
            mult3(&part(&[2, 1, 0]), &part(&[0, 0, 0])).unwrap(),
            SchurSum::single(part(&[2, 1, 0]))
        );
        assert_eq!(
            mult3(&part(&[1, 0, 0]), &part(&[1, 0, 0])).unwrap(),
            sum_of(&[(&[2, 0, 0], 1), (&[1, 1, 0], 1)])
        );
        assert_eq!(
            mult3(&part(&[1, 1, 1]), &part(&[1, 1, 1])).unwrap(),
            SchurSum::single(part(&[2, 2, 2]))
        );
        assert!(mult2(&part(&[1]), &part(&[1, 0])).is_err());
    }

    #[test]
    fn mult2_matches_expansion_exhaustively() {
        for l in Partition::in_box(2, 4) {
            for m in Partition::in_box(2, 4) {
                let oracle =
                    to_schur_basis(&(&schur(&l, 2).unwrap() * &schur(&m, 2).unwrap()), 2)
                        .unwrap();
                assert_eq!(mult2(&l, &m).unwrap(), oracle, "{l} * {m}");
            }
        }
    }

    #[test]
    fn three_variable_decomposition() {
        assert_eq!(
            decompose3(&part(&[0, 0, 0])).unwrap(),
            vec![(part(&[0, 0]), 0)]
        );
        assert_eq!(
            decompose3(&part(&[1, 0, 0])).unwrap(),
            vec![(part(&[0, 0]), 1), (part(&[1, 0]), 0)]
        );
        assert_eq!(
            decompose3(&part(&[1, 1, 1])).unwrap(),
            vec![(part(&[1, 1]), 1)]
        );
        // Polynomial identity for all partitions with i <= 4.
        let r3 = sym_ring(3);
        let lift2 = |p: &Partition| {
            let f = schur(p, 2).unwrap();
            f.map_into(&r3, &[r3.var_at(0), r3.var_at(1)])
        };
        for l in Partition::in_box(3, 4) {
            let mut rhs = r3.zero();
            for (ab, c) in decompose3(&l).unwrap() {
                rhs = &rhs + &(&lift2(&ab) * &r3.var_at(2).pow(c));
            }
            assert_eq!(schur(&l, 3).unwrap(), rhs, "decompose3 {l}");
        }
    }

    #[test]
    fn potentials_for_sl2_and_simple_facets() {
        let w = potential(2, 2).unwrap();
        let r = elem_ring(2);
        let (s, t) = (r.var("s"), r.var("t"));
        assert_eq!(w.poly, &s.pow(3) - &(&s * &t).scale(&rat(3)));
        for n in 2..=7 {
            let w1 = potential(n, 1).unwrap();
            assert_eq!(w1.poly, elem_ring(1).var("x").pow(n + 1));
        }
        assert!(potential(3, 4).is_err());
        assert!(potential(1, 2).is_err());
    }

    #[test]
    fn potential_coefficient_a_n_minus_1() {
        for n in 2..=7u32 {
            let w = potential(n, 2).unwrap();
            assert_eq!(w.a(n - 1, 1), rat(-(n as i64 + 1)));
            assert_eq!(w.a(n + 1, 0), rat(1));
        }
    }
}
