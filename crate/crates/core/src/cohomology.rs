//! Cohomology of Grassmannians `G(k,N)` for `k <= 3` in the truncated Schur
//! basis, and of the flag varieties `Fl(1,2,N)`, `Fl(2,3,N)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::polyring::{MultiPoly, PolyRing, Rational, Ring, RingExt};
use crate::qlaurent::LaurentPoly;
use crate::symmetric::{elem_ring, mult, schur, sym_ring, to_schur_basis, Partition, SchurSum};

/// `H*(G(k,N))` with basis the partitions in the `k x (N-k)` box.
#[derive(Clone)]
pub struct GrassRing {
    n: u32,
    k: usize,
    basis: Vec<Partition>,
    elem_cache: Arc<Mutex<HashMap<Vec<u32>, SchurSum>>>,
}

impl fmt::Debug for GrassRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrassRing(k={}, N={})", self.k, self.n)
    }
}

impl GrassRing {
    pub fn new(n: u32, k: usize) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return domain(format!("Grassmannian rank {k} not in 1..=3"));
        }
        if (k as u32) > n {
            return domain(format!("G({k},{n}) is empty"));
        }
        Ok(GrassRing {
            n,
            k,
            basis: Partition::in_box(k, n - k as u32),
            elem_cache: Arc::default(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> u32 {
        self.n - self.k as u32
    }

    pub fn basis(&self) -> &[Partition] {
        &self.basis
    }

    pub fn contains(&self, p: &Partition) -> bool {
        p.len() == self.k && p.fits(self.width())
    }

    /// The full-box partition `(N-k, ..., N-k)`.
    pub fn top(&self) -> Partition {
        Partition::new(&vec![self.width(); self.k]).expect("constant tuple")
    }

    /// `(-1)^{floor(k/2)}`.
    pub fn sign(&self) -> Rational {
        if (self.k / 2) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k != self.k {
            return domain(format!(
                "element in {k} variables does not live in G({},{})",
                self.k, self.n
            ));
        }
        Ok(())
    }

    pub fn reduce(&self, v: &SchurSum) -> Result<SchurSum> {
        self.check_k(v.k())?;
        Ok(v.truncate(self.width()))
    }

    /// Reduce a polynomial given either in `x1..xk` or in the elementary
    /// variables of `elem_ring(k)`.
    pub fn reduce_poly(&self, f: &MultiPoly) -> Result<SchurSum> {
        if **f.ring() == *elem_ring(self.k) {
            return Ok(self.from_elementary(f));
        }
        if **f.ring() == *sym_ring(self.k) {
            return Ok(to_schur_basis(f, self.k)?.truncate(self.width()));
        }
        domain(format!(
            "polynomial ring {:?} is not a presentation of G({},{})",
            f.ring().names(),
            self.k,
            self.n
        ))
    }

    pub fn multiply(&self, a: &SchurSum, b: &SchurSum) -> Result<SchurSum> {
        self.check_k(a.k())?;
        self.check_k(b.k())?;
        let w = self.width();
        let mut out = SchurSum::zero(self.k);
        for (p, c) in a.terms() {
            if !p.fits(w) {
                continue;
            }
            for (q, d) in b.terms() {
                if !q.fits(w) {
                    continue;
                }
                let cd = c * d;
                for (r, e) in mult(p, q).terms() {
                    if r.fits(w) {
                        out.add_term(r.clone(), e * &cd);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Class of the elementary monomial `e_1^{a_1} ... e_k^{a_k}`.
    pub fn elementary_monomial(&self, exps: &[u32]) -> SchurSum {
        assert_eq!(exps.len(), self.k);
        if let Some(hit) = self.elem_cache.lock().unwrap().get(exps) {
            return hit.clone();
        }
        let out = match exps.iter().rposition(|e| *e > 0) {
            None => SchurSum::one(self.k),
            Some(j) => {
                let mut rest = exps.to_vec();
                rest[j] -= 1;
                let mut ones = vec![0; self.k];
                ones[..=j].iter_mut().for_each(|p| *p = 1);
                let e = SchurSum::single(Partition::new(&ones).expect("column"));
                self.multiply(&self.elementary_monomial(&rest), &e)
                    .expect("same rank")
            }
        };
        self.elem_cache
            .lock()
            .unwrap()
            .insert(exps.to_vec(), out.clone());
        out
    }

    /// Class of a polynomial in the elementary variables.
    pub fn from_elementary(&self, f: &MultiPoly) -> SchurSum {
        let mut out = SchurSum::zero(self.k);
        for (m, c) in f.terms() {
            out = out.add(&self.elementary_monomial(m.exps()).scale(c));
        }
        out
    }

    /// Trace form: signed coefficient of the top class.
    pub fn trace(&self, v: &SchurSum) -> Result<Rational> {
        self.check_k(v.k())?;
        Ok(v.coeff(&self.top()) * self.sign())
    }

    /// Dual basis element `(-1)^{floor(k/2)} pi_{N-k-l_k, ..., N-k-l_1}`.
    pub fn dual(&self, p: &Partition) -> Result<SchurSum> {
        if !self.contains(p) {
            return domain(format!("{p} is not in the basis of G({},{})", self.k, self.n));
        }
        let c = p.complement(self.width()).expect("fits");
        Ok(SchurSum::term(c, self.sign()))
    }

    /// `sum_{basis} q^{2|l|}`.
    pub fn qdim(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for p in &self.basis {
            out += &LaurentPoly::monomial(1, 2 * p.size() as i64);
        }
        out
    }

    /// One line per basis element: partition, dual, trace.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for p in &self.basis {
            let d = self.dual(p).expect("basis element");
            let t = self.trace(&SchurSum::single(p.clone())).expect("rank");
            out.push_str(&format!("{p}  dual {d}  trace {t}\n"));
        }
        out
    }
}

/// The two flag varieties with an explicit presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagKind {
    /// `Q[x1,x2] / <pi_{N-1,0}, pi_{N,0}>`.
    Fl12,
    /// `Q[s,t,x3] / <pi_{N-2,0,0}, pi_{N-1,0,0}, pi_{N,0,0}>` with
    /// `s = x1 + x2`, `t = x1 x2`.
    Fl23,
}

#[derive(Clone, Debug)]
pub struct FlagRing {
    n: u32,
    kind: FlagKind,
    ring: Ring,
    generators: Vec<MultiPoly>,
    groebner: Vec<MultiPoly>,
}

fn fl23_ring() -> Ring {
    static RING: std::sync::OnceLock<Ring> = std::sync::OnceLock::new();
    RING.get_or_init(|| PolyRing::new(&[("s", 2), ("t", 4), ("x3", 2)]))
        .clone()
}

/// Complete homogeneous `h_m(x1,x2,x3)` written in `s, t, x3`.
fn complete_fl23(m: u32) -> MultiPoly {
    let r = fl23_ring();
    let (s, t, x3) = (r.var("s"), r.var("t"), r.var("x3"));
    let mut h2 = vec![r.one(), s.clone()];
    for j in 2..=m as usize {
        let next = &(&s * &h2[j - 1]) - &(&t * &h2[j - 2]);
        h2.push(next);
    }
    let mut out = r.zero();
    for c in 0..=m {
        out = &out + &(&h2[(m - c) as usize] * &x3.pow(c));
    }
    out
}

/// Reduced Groebner basis under the graded-lex order of the ring.
pub fn groebner_basis(gens: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut g: Vec<MultiPoly> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        if g[i].leading_coprime(&g[j]) {
            continue;
        }
        let r = g[i].s_polynomial(&g[j]).remainder(&g);
        if !r.is_zero() {
            let idx = g.len();
            g.push(r.monic());
            pairs.extend((0..idx).map(|i| (i, idx)));
        }
    }
    // Minimal, then interreduced.
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i
                && q.leading_divides(p)
                && (!p.leading_divides(q) || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let lead = {
            let (m, c) = minimal[i].leading_term().expect("nonzero");
            minimal[i].ring().mono(c.clone(), m.exps())
        };
        let tail = &minimal[i] - &lead;
        out.push((&lead + &tail.remainder(&others)).monic());
    }
    out.sort_by(|a, b| a.leading_term().map(|t| t.0.clone()).cmp(&b.leading_term().map(|t| t.0.clone())));
    out
}

impl FlagRing {
    pub fn new(n: u32, kind: FlagKind) -> Result<Self> {
        let (ring, generators) = match kind {
            FlagKind::Fl12 => {
                if n < 2 {
                    return domain("Fl(1,2,N) needs N >= 2");
                }
                let gens = vec![
                    schur(&Partition::new(&[n - 1, 0])?, 2)?,
                    schur(&Partition::new(&[n, 0])?, 2)?,
                ];
                (sym_ring(2), gens)
            }
            FlagKind::Fl23 => {
                if n < 3 {
                    return domain("Fl(2,3,N) needs N >= 3");
                }
                let gens = (n - 2..=n).map(complete_fl23).collect();
                (fl23_ring(), gens)
            }
        };
        let groebner = groebner_basis(&generators);
        Ok(FlagRing {
            n,
            kind,
            ring,
            generators,
            groebner,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> FlagKind {
        self.kind
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn groebner(&self) -> &[MultiPoly] {
        &self.groebner
    }

    /// Normal form modulo the presentation ideal.
    pub fn reduce(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if **p.ring() != *self.ring {
            return domain(format!(
                "polynomial in {:?} is not in the variables {:?}",
                p.ring().names(),
                self.ring.names()
            ));
        }
        Ok(p.remainder(&self.groebner))
    }

    /// Standard monomials, i.e. a homogeneous basis of the quotient.
    pub fn standard_monomials(&self) -> Vec<MultiPoly> {
        let mut dims: Vec<u32> = match self.kind {
            FlagKind::Fl12 => vec![1, 2, self.n],
            FlagKind::Fl23 => vec![2, 3, self.n],
        };
        dims.dedup();
        let top = flag_dim(&dims).expect("valid flag");
        let weights = self.ring.weights().to_vec();
        let mut out = Vec::new();
        let mut exps = vec![0u32; weights.len()];
        fn rec(
            i: usize,
            budget: u32,
            weights: &[u32],
            exps: &mut Vec<u32>,
            ring: &Ring,
            gb: &[MultiPoly],
            out: &mut Vec<MultiPoly>,
        ) {
            if i == weights.len() {
                let m = ring.mono(Rational::one(), exps);
                if m.remainder(gb) == m {
                    out.push(m);
                }
                return;
            }
            let mut e = 0;
            while e * weights[i] <= budget {
                exps[i] = e;
                rec(i + 1, budget - e * weights[i], weights, exps, ring, gb, out);
                e += 1;
            }
            exps[i] = 0;
        }
        rec(0, top, &weights, &mut exps, &self.ring, &self.groebner, &mut out);
        out
    }

    /// Graded dimension `sum q^{deg}` over the standard monomials.
    pub fn qdim(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for m in self.standard_monomials() {
            let d = m.homogeneous_degree().expect("monomial");
            out += &LaurentPoly::monomial(1, d as i64);
        }
        out
    }
}

/// Real dimension `N^2 - sum (d_{i+1} - d_i)^2 - d_1^2` of a partial flag
/// variety, `N` being the last entry.
pub fn flag_dim(d: &[u32]) -> Result<u32> {
    if d.is_empty() || d[0] == 0 || d.windows(2).any(|w| w[0] >= w[1]) {
        return domain(format!("{d:?} is not a strictly increasing list of positive dimensions"));
    }
    let n = *d.last().expect("nonempty");
    let gaps: u32 = d.windows(2).map(|w| (w[1] - w[0]).pow(2)).sum();
    Ok(n * n - gaps - d[0] * d[0])
}

impl PartialEq for GrassRing {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k
    }
}

/// `true` when `v` is zero in the ring.
pub fn vanishes(r: &GrassRing, v: &SchurSum) -> bool {
    r.reduce(v).map(|x| x.is_zero()).unwrap_or(false)
}

/// Kronecker delta as a rational.
pub fn delta(a: bool) -> Rational {
    if a {
        Rational::one()
    } else {
        Rational::zero()
    }
}
