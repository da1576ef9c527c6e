//! Closed foams whose singular graph is a disjoint union of circles.
//!
//! Every facet is a closed surface of some genus with holes, one hole per
//! incidence with a singular circle. Cutting the neck next to every hole
//! turns the foam into a product of decorated closed facets and theta foams,
//! which is contracted here over the sparse nonzero theta entries.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::{grass, theta112_closed, theta123_closed};
use crate::error::{domain, Result};
use crate::polyring::{rat, Rational};
use crate::symmetric::{part, Partition, SchurSum};

/// A facet of thickness `k`, genus `genus`, decorated by a class of
/// `H*(G(k,N))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub k: u8,
    pub genus: u32,
    pub dec: SchurSum,
}

impl Facet {
    pub fn new(k: u8, genus: u32, dec: SchurSum) -> Self {
        Facet { k, genus, dec }
    }

    /// Genus-zero facet with a single Schur decoration.
    pub fn plain(k: u8, dec: &[u32]) -> Self {
        Facet { k, genus: 0, dec: SchurSum::single(part(dec)) }
    }

    /// Simple facet with `d` dots.
    pub fn dots(d: u32) -> Self {
        Facet::plain(1, &[d])
    }
}

/// A singular circle together with the facets along it; a facet listed
/// twice has two holes on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Circle {
    T112 { first: usize, second: usize, double: usize },
    T123 { simple: usize, double: usize, triple: usize, orient: i8 },
}

impl Circle {
    fn slots(&self) -> Vec<usize> {
        match *self {
            Circle::T112 { first, second, double } => vec![first, second, double],
            Circle::T123 { simple, double, triple, .. } => vec![simple, double, triple],
        }
    }

    fn kinds(&self) -> [u8; 3] {
        match self {
            Circle::T112 { .. } => [1, 1, 2],
            Circle::T123 { .. } => [1, 2, 3],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VFoam {
    pub facets: Vec<Facet>,
    pub circles: Vec<Circle>,
}

impl VFoam {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn facet(&mut self, f: Facet) -> usize {
        self.facets.push(f);
        self.facets.len() - 1
    }

    pub fn circle(&mut self, c: Circle) -> usize {
        self.circles.push(c);
        self.circles.len() - 1
    }

    /// Multiply the decoration of facet `i` by `extra`.
    pub fn decorate(&mut self, i: usize, extra: &SchurSum) {
        self.facets[i].dec = self.facets[i].dec.mul(extra);
    }

    fn check(&self) -> Result<()> {
        for f in &self.facets {
            if !(1..=3).contains(&f.k) || f.dec.k() != f.k as usize {
                return domain(format!("facet of thickness {} decorated in {} variables", f.k, f.dec.k()));
            }
        }
        for c in &self.circles {
            for (slot, want) in c.slots().into_iter().zip(c.kinds()) {
                let Some(f) = self.facets.get(slot) else {
                    return domain(format!("circle refers to missing facet {slot}"));
                };
                if f.k != want {
                    return domain(format!("circle expects a facet of thickness {want}, got {}", f.k));
                }
            }
            if let Circle::T123 { orient, .. } = c {
                if orient.abs() != 1 {
                    return domain("orientation must be +1 or -1");
                }
            }
        }
        Ok(())
    }
}

type Entry = (Vec<Partition>, Rational);

/// Nonzero entries of the closed-form theta tables, decorations in the
/// respective bases.
fn theta_entries(n: u32, kind: u8) -> Result<Arc<Vec<Entry>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u8), Arc<Vec<Entry>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&(n, kind)) {
        return Ok(e.clone());
    }
    let mut out = Vec::new();
    let g2 = grass(n, 2)?;
    if kind == 1 {
        for d1 in 0..n {
            for d2 in 0..n {
                for l in g2.basis() {
                    let v = theta112_closed(n, d1, d2, l)?;
                    if !v.is_zero() {
                        out.push((vec![part(&[d1]), part(&[d2]), l.clone()], v));
                    }
                }
            }
        }
    } else {
        let g3 = grass(n, 3)?;
        for i in 0..n {
            for l in g2.basis() {
                for m in g3.basis() {
                    let v = theta123_closed(n, m, l, i)?;
                    if !v.is_zero() {
                        out.push((vec![part(&[i]), l.clone(), m.clone()], v));
                    }
                }
            }
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert((n, kind), out.clone());
    Ok(out)
}

/// `sum_mu pi_mu dual(pi_mu)` in `H*(G(k,N))`: the class left by a handle.
pub fn handle_class(n: u32, k: usize) -> Result<SchurSum> {
    let g = grass(n, k)?;
    let mut h = SchurSum::zero(k);
    for mu in g.basis() {
        let d = g.dual(mu)?;
        h = h.add(&g.multiply(&SchurSum::single(mu.clone()), &d)?);
    }
    Ok(h)
}

struct Ctx<'a> {
    n: u32,
    foam: &'a VFoam,
    /// Reduced `dec * handle^genus` per facet.
    base: Vec<SchurSum>,
    /// `(circle, slot)` holes of each facet.
    holes: Vec<Vec<(usize, usize)>>,
    /// Facets whose last hole sits on circle `c`.
    closes_at: Vec<Vec<usize>>,
    entries: Vec<Arc<Vec<Entry>>>,
    memo: HashMap<(usize, Vec<Partition>), Rational>,
}

impl Ctx<'_> {
    fn facet_value(&mut self, f: usize, labels: Vec<Partition>) -> Result<Rational> {
        let key = (f, labels);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let k = self.foam.facets[f].k as usize;
        let g = grass(self.n, k)?;
        let mut acc = self.base[f].clone();
        for l in &key.1 {
            if acc.is_zero() {
                break;
            }
            acc = g.multiply(&acc, &g.dual(l)?)?;
        }
        let v = g.trace(&acc)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn run(&mut self, c: usize, assigned: &mut Vec<[Option<Partition>; 3]>) -> Result<Rational> {
        if c == self.foam.circles.len() {
            return Ok(rat(1));
        }
        let entries = self.entries[c].clone();
        let mut total = Rational::zero();
        for (labels, theta) in entries.iter() {
            assigned[c] = [Some(labels[0].clone()), Some(labels[1].clone()), Some(labels[2].clone())];
            let mut v = theta.clone();
            if let Circle::T123 { orient, .. } = self.foam.circles[c] {
                v *= rat(orient as i64);
            }
            for f in self.closes_at[c].clone() {
                let ls: Vec<Partition> = self.holes[f]
                    .iter()
                    .map(|&(ci, s)| assigned[ci][s].clone().expect("assigned"))
                    .collect();
                v *= self.facet_value(f, ls)?;
                if v.is_zero() {
                    break;
                }
            }
            if v.is_zero() {
                continue;
            }
            total += v * self.run(c + 1, assigned)?;
        }
        assigned[c] = [None, None, None];
        Ok(total)
    }
}

/// Evaluate a closed vertex-free foam.
pub fn eval_vfoam(foam: &VFoam, n: u32) -> Result<Rational> {
    foam.check()?;
    if n < 2 {
        return domain("foams need N >= 2");
    }
    if n < 4 && (foam.facets.iter().any(|f| f.k == 3)) {
        return domain("triple facets need N >= 4");
    }
    let mut base = Vec::with_capacity(foam.facets.len());
    for f in &foam.facets {
        let g = grass(n, f.k as usize)?;
        let mut b = g.reduce(&f.dec)?;
        if f.genus > 0 {
            let h = handle_class(n, f.k as usize)?;
            for _ in 0..f.genus {
                b = g.multiply(&b, &h)?;
            }
        }
        base.push(b);
    }
    let mut holes = vec![Vec::new(); foam.facets.len()];
    for (ci, c) in foam.circles.iter().enumerate() {
        for (s, f) in c.slots().into_iter().enumerate() {
            holes[f].push((ci, s));
        }
    }
    let mut closes_at = vec![Vec::new(); foam.circles.len()];
    let mut scalar = rat(1);
    for (f, h) in holes.iter().enumerate() {
        match h.last() {
            Some(&(ci, _)) => closes_at[ci].push(f),
            None => {
                let g = grass(n, foam.facets[f].k as usize)?;
                scalar *= g.trace(&base[f])?;
            }
        }
    }
    if scalar.is_zero() {
        return Ok(scalar);
    }
    let entries = foam
        .circles
        .iter()
        .map(|c| theta_entries(n, if matches!(c, Circle::T112 { .. }) { 1 } else { 2 }))
        .collect::<Result<Vec<_>>>()?;
    let mut ctx = Ctx {
        n,
        foam,
        base,
        holes,
        closes_at,
        entries,
        memo: HashMap::new(),
    };
    let mut assigned = vec![[None, None, None]; foam.circles.len()];
    Ok(scalar * ctx.run(0, &mut assigned)?)
}
