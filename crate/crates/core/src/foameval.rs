//! Closed vertex-free foams: dotted spheres and the two theta families,
//! their q-grading, Kapustin-Li determinant evaluation, closed-form tables,
//! dot migration and bubble removal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cohomology::GrassRing;
use crate::error::{domain, Result};
use crate::polyring::{determinant, rat, MultiPoly, PolyRing, Rational, Ring, RingExt};
use crate::symmetric::{part, potential, Partition, SchurSum};

pub mod duality;
pub mod glue;
pub mod migrate;
pub mod relations;
pub mod vfoam;

pub use migrate::{bubble_double, bubble_simple, bubble_triple, migrate, Elementary, Slot};
pub use relations::{verify_relation, RelationReport, RELATION_IDS};

/// A connected closed foam without singular vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoamAtom {
    /// Sphere of thickness `label` decorated by a Schur class.
    Sphere { label: u8, dec: Partition },
    /// Two simple disks and one double disk glued along a circle.
    Theta112 { d1: u32, d2: u32, dec2: Partition },
    /// Simple, double and triple disk glued along a circle.
    Theta123 {
        dec3: Partition,
        dec2: Partition,
        d1: u32,
        orient: i8,
    },
}

impl FoamAtom {
    pub fn sphere(label: u8, dec: &[u32]) -> Self {
        FoamAtom::Sphere { label, dec: part(dec) }
    }

    pub fn theta112(d1: u32, d2: u32, dec2: &[u32]) -> Self {
        FoamAtom::Theta112 { d1, d2, dec2: part(dec2) }
    }

    pub fn theta123(dec3: &[u32], dec2: &[u32], d1: u32) -> Self {
        FoamAtom::Theta123 { dec3: part(dec3), dec2: part(dec2), d1, orient: 1 }
    }

    /// Same atom with the singular circle reversed (only changes `Theta123`).
    pub fn reversed(&self) -> Self {
        match self {
            FoamAtom::Theta123 { dec3, dec2, d1, orient } => FoamAtom::Theta123 {
                dec3: dec3.clone(),
                dec2: dec2.clone(),
                d1: *d1,
                orient: -orient,
            },
            other => other.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FoamAtom::Sphere { label, dec } => {
                if !(1..=3).contains(label) || dec.len() != *label as usize {
                    return domain(format!("sphere label {label} with decoration {dec}"));
                }
            }
            FoamAtom::Theta112 { dec2, .. } => {
                if dec2.len() != 2 {
                    return domain(format!("double facet decoration {dec2}"));
                }
            }
            FoamAtom::Theta123 { dec3, dec2, orient, .. } => {
                if dec3.len() != 3 || dec2.len() != 2 || orient.abs() != 1 {
                    return domain(format!("theta decoration {dec3} {dec2} orient {orient}"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FoamAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoamAtom::Sphere { label, dec } => write!(f, "S{label}{dec}"),
            FoamAtom::Theta112 { d1, d2, dec2 } => write!(f, "T112[{d1},{d2},{dec2}]"),
            FoamAtom::Theta123 { dec3, dec2, d1, orient } => {
                let o = if *orient > 0 { "" } else { "~" };
                write!(f, "T123{o}[{dec3},{dec2},{d1}]")
            }
        }
    }
}

/// `q(u) = -sum_i i(N-i) chi_i - 2(N-2) chi_sing + (decoration degree)`.
pub fn q_grading(a: &FoamAtom, n: u32) -> Result<i64> {
    a.validate()?;
    let n = n as i64;
    let c = |i: i64| i * (n - i);
    Ok(match a {
        FoamAtom::Sphere { label, dec } => {
            if *label == 3 && n < 4 {
                return domain("triple facets need N >= 4");
            }
            -2 * c(*label as i64) + 2 * dec.size() as i64
        }
        FoamAtom::Theta112 { d1, d2, dec2 } => {
            -2 * c(1) - c(2) + 2 * (*d1 as i64 + *d2 as i64 + dec2.size() as i64)
        }
        FoamAtom::Theta123 { dec3, dec2, d1, .. } => {
            if n < 4 {
                return domain("triple facets need N >= 4");
            }
            -c(1) - c(2) - c(3) + 2 * (*d1 as i64 + dec2.size() as i64 + dec3.size() as i64)
        }
    })
}

/// Closed simple, double and triple spheres: only the top class survives.
pub fn sphere_eval(label: u8, dec: &Partition, n: u32) -> Result<Rational> {
    FoamAtom::Sphere { label, dec: dec.clone() }.validate()?;
    if n < label as u32 {
        return domain(format!("no facet of thickness {label} for N = {n}"));
    }
    let g = grass(n, label as usize)?;
    g.trace(&g.reduce(&SchurSum::single(dec.clone()))?)
}

type GrassKey = (u32, usize);

fn grass(n: u32, k: usize) -> Result<Arc<GrassRing>> {
    static CACHE: OnceLock<Mutex<HashMap<GrassKey, Arc<GrassRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(g.clone());
    }
    let g = Arc::new(GrassRing::new(n, k)?);
    cache.lock().unwrap().insert((n, k), g.clone());
    Ok(g)
}

/// Shared `H*(G(k,N))` instance with a warm multiplication cache.
pub fn grass_ring(n: u32, k: usize) -> Result<Arc<GrassRing>> {
    grass(n, k)
}

/// `eps(pi_mu pi_lambda)` in `H*(G(k,N))`.
pub fn pairing(g: &GrassRing, mu: &Partition, lambda: &Partition) -> Result<Rational> {
    let prod = g.multiply(&SchurSum::single(mu.clone()), &SchurSum::single(lambda.clone()))?;
    g.trace(&prod)
}

fn normalizer(n: u32, power: u32) -> Rational {
    Rational::from_integer(BigInt::from(n + 1).pow(power))
}

/// Matrix of difference quotients `a_{li}` of `dW/dsigma_i` between the
/// argument tuples `u` and `v`: row `l` replaces `u_l` by `v_l`.
fn difference_matrix(n: u32, k: usize, target: &Ring, u: &[MultiPoly], v: &[MultiPoly]) -> Result<Vec<Vec<MultiPoly>>> {
    let w = potential(n, k)?;
    let weights = [2, 4, 6];
    let names: Vec<(String, u32)> = (0..k)
        .map(|j| (format!("u{}", j + 1), weights[j]))
        .chain((0..k).map(|j| (format!("v{}", j + 1), weights[j])))
        .collect();
    let decl: Vec<(&str, u32)> = names.iter().map(|(s, w)| (s.as_str(), *w)).collect();
    let g = PolyRing::new(&decl);
    let uv = |j: usize, swapped: usize| -> MultiPoly {
        if j < swapped {
            g.var_at(k + j)
        } else {
            g.var_at(j)
        }
    };
    let mut images: Vec<MultiPoly> = u.to_vec();
    images.extend_from_slice(v);
    let mut rows = Vec::with_capacity(k);
    for l in 0..k {
        let before: Vec<MultiPoly> = (0..k).map(|j| uv(j, l)).collect();
        let after: Vec<MultiPoly> = (0..k).map(|j| uv(j, l + 1)).collect();
        let denom = &g.var_at(l) - &g.var_at(k + l);
        let mut row = Vec::with_capacity(k);
        for i in 1..=k {
            let wi = w.derivative(i);
            let num = &wi.map_into(&g, &before) - &wi.map_into(&g, &after);
            let a = num.exact_divide(&denom)?;
            row.push(a.map_into(target, &images));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Kapustin-Li polynomial of the (1,1,2) theta in `x, y, s, t`.
pub fn kl_theta112(n: u32) -> Result<MultiPoly> {
    let r = PolyRing::new(&[("x", 2), ("y", 2), ("s", 2), ("t", 4)]);
    let (x, y) = (r.var("x"), r.var("y"));
    let u = [&x + &y, &x * &y];
    let v = [r.var("s"), r.var("t")];
    let m = difference_matrix(n, 2, &r, &u, &v)?;
    Ok(&(&y - &x) * &determinant(&m)?)
}

/// Kapustin-Li polynomial of the (1,2,3) theta in `x, s, t, p, q, r`.
pub fn kl_theta123(n: u32) -> Result<MultiPoly> {
    let r = PolyRing::new(&[("x", 2), ("s", 2), ("t", 4), ("p", 2), ("q", 4), ("r", 6)]);
    let (x, s, t) = (r.var("x"), r.var("s"), r.var("t"));
    let u = [&x + &s, &(&x * &s) + &t, &x * &t];
    let v = [r.var("p"), r.var("q"), r.var("r")];
    let m = difference_matrix(n, 3, &r, &u, &v)?;
    let pre = &(&t - &(&s * &x)) + &(&x * &x);
    Ok((&pre * &determinant(&m)?).scale(&rat(-1)))
}

/// KL polynomial of the (1,1,2) theta reduced modulo `x^N, y^N` and the
/// double-facet Grassmannian relations, keyed by the `(x, y)` exponents.
struct Kl112 {
    g2: Arc<GrassRing>,
    by_dots: HashMap<(u32, u32), SchurSum>,
}

/// Same for the (1,2,3) theta: per `x` exponent, a tensor over pairs of
/// basis classes of `G(2,N)` and `G(3,N)`.
struct Kl123 {
    g2: Arc<GrassRing>,
    g3: Arc<GrassRing>,
    by_x: Vec<HashMap<(Partition, Partition), Rational>>,
}

fn kl112_table(n: u32) -> Result<Arc<Kl112>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Kl112>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let g2 = grass(n, 2)?;
    let kl = kl_theta112(n)?;
    let mut by_dots: HashMap<(u32, u32), SchurSum> = HashMap::new();
    for (m, c) in kl.terms() {
        let e = m.exps();
        if e[0] >= n || e[1] >= n {
            continue;
        }
        let class = g2.elementary_monomial(&e[2..4]).scale(c);
        let slot = by_dots.entry((e[0], e[1])).or_insert_with(|| SchurSum::zero(2));
        *slot = slot.add(&class);
    }
    let t = Arc::new(Kl112 { g2, by_dots });
    cache.lock().unwrap().insert(n, t.clone());
    Ok(t)
}

fn kl123_table(n: u32) -> Result<Arc<Kl123>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Kl123>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let (g2, g3) = (grass(n, 2)?, grass(n, 3)?);
    let kl = kl_theta123(n)?;
    let mut by_x = vec![HashMap::new(); n as usize];
    for (m, c) in kl.terms() {
        let e = m.exps();
        if e[0] >= n {
            continue;
        }
        let c2 = g2.elementary_monomial(&e[1..3]);
        if c2.is_zero() {
            continue;
        }
        let c3 = g3.elementary_monomial(&e[3..6]);
        let slot: &mut HashMap<(Partition, Partition), Rational> = &mut by_x[e[0] as usize];
        for (a, ca) in c2.terms() {
            for (b, cb) in c3.terms() {
                let v = slot.entry((a.clone(), b.clone())).or_insert_with(Rational::zero);
                *v += c * ca * cb;
            }
        }
    }
    for slot in &mut by_x {
        slot.retain(|_, v| !v.is_zero());
    }
    let t = Arc::new(Kl123 { g2, g3, by_x });
    cache.lock().unwrap().insert(n, t.clone());
    Ok(t)
}

/// Direct Kapustin-Li value of the (1,1,2) theta with `d1`, `d2` dots on
/// the simple facets and `pi_{dec2}` on the double facet, normalized.
pub fn theta112_direct(n: u32, d1: u32, d2: u32, dec2: &Partition) -> Result<Rational> {
    if n < 2 {
        return domain("theta foams need N >= 2");
    }
    if dec2.len() != 2 {
        return domain(format!("double facet decoration {dec2}"));
    }
    if d1 >= n || d2 >= n {
        return Ok(Rational::zero());
    }
    let t = kl112_table(n)?;
    let Some(class) = t.by_dots.get(&(n - 1 - d1, n - 1 - d2)) else {
        return Ok(Rational::zero());
    };
    let prod = t.g2.multiply(class, &SchurSum::single(dec2.clone()))?;
    Ok(t.g2.trace(&prod)? / normalizer(n, 2))
}

/// Direct Kapustin-Li value of the (1,2,3) theta, positively oriented.
/// The determinant polynomial of `kl_theta123` has top coefficient
/// `-(N+1)^3`, so the positive orientation is its negative.
pub fn theta123_direct(n: u32, dec3: &Partition, dec2: &Partition, d1: u32) -> Result<Rational> {
    if n < 4 {
        return domain("triple facets need N >= 4");
    }
    if dec3.len() != 3 || dec2.len() != 2 {
        return domain(format!("theta decorations {dec3} {dec2}"));
    }
    if d1 >= n {
        return Ok(Rational::zero());
    }
    let t = kl123_table(n)?;
    let mut acc = Rational::zero();
    for ((a, b), c) in &t.by_x[(n - 1 - d1) as usize] {
        let pa = pairing(&t.g2, a, dec2)?;
        if pa.is_zero() {
            continue;
        }
        let pb = pairing(&t.g3, b, dec3)?;
        acc += c * pa * pb;
    }
    Ok(-acc / normalizer(n, 3))
}

/// Closed-form (1,1,2) theta: with `d1 + d2 + j + k = 2N - 3`, the value is
/// `-1` when `d1 + j = N-2, d2 + k = N-1`, `+1` when `d1 + k = N-1,
/// d2 + j = N-2`, and `0` otherwise.
pub fn theta112_closed(n: u32, d1: u32, d2: u32, dec2: &Partition) -> Result<Rational> {
    if n < 2 {
        return domain("theta foams need N >= 2");
    }
    if dec2.len() != 2 {
        return domain(format!("double facet decoration {dec2}"));
    }
    let (j, k) = (dec2.parts()[0] as i64, dec2.parts()[1] as i64);
    let (d1, d2, n) = (d1 as i64, d2 as i64, n as i64);
    if d1 + d2 + j + k != 2 * n - 3 {
        return Ok(Rational::zero());
    }
    Ok(if d1 + j == n - 2 && d2 + k == n - 1 {
        rat(-1)
    } else if d1 + k == n - 1 && d2 + j == n - 2 {
        rat(1)
    } else {
        Rational::zero()
    })
}

/// Closed-form (1,2,3) theta `Theta(pi_{p,q,r}, pi_{j,k}, i)`: three signed
/// families, zero elsewhere.
pub fn theta123_closed(n: u32, dec3: &Partition, dec2: &Partition, i: u32) -> Result<Rational> {
    if n < 4 {
        return domain("triple facets need N >= 4");
    }
    if dec3.len() != 3 || dec2.len() != 2 {
        return domain(format!("theta decorations {dec3} {dec2}"));
    }
    let n = n as i64;
    let (j, k, i) = (dec2.parts()[0] as i64, dec2.parts()[1] as i64, i as i64);
    let pqr: Vec<i64> = dec3.parts().iter().map(|v| *v as i64).collect();
    let is = |a: i64, b: i64, c: i64| pqr == [a, b, c];
    if n - 2 >= j && j >= k && k >= i + 1 && is(n - 3 - i, n - 2 - k, n - 2 - j) {
        return Ok(rat(-1));
    }
    if n - 1 >= i && i >= j + 2 && j >= k && is(n - 3 - k, n - 3 - j, n - 1 - i) {
        return Ok(rat(-1));
    }
    if n - 2 >= j && j >= i && i >= k + 1 && is(n - 3 - k, n - 2 - i, n - 2 - j) {
        return Ok(rat(1));
    }
    Ok(Rational::zero())
}

/// Evaluate one atom with the closed-form tables.
pub fn eval_atom(a: &FoamAtom, n: u32) -> Result<Rational> {
    a.validate()?;
    match a {
        FoamAtom::Sphere { label, dec } => sphere_eval(*label, dec, n),
        FoamAtom::Theta112 { d1, d2, dec2 } => theta112_closed(n, *d1, *d2, dec2),
        FoamAtom::Theta123 { dec3, dec2, d1, orient } => {
            Ok(theta123_closed(n, dec3, dec2, *d1)? * rat(*orient as i64))
        }
    }
}

/// Evaluate one atom with the determinant formulas.
pub fn eval_atom_direct(a: &FoamAtom, n: u32) -> Result<Rational> {
    a.validate()?;
    match a {
        FoamAtom::Sphere { label, dec } => sphere_eval(*label, dec, n),
        FoamAtom::Theta112 { d1, d2, dec2 } => theta112_direct(n, *d1, *d2, dec2),
        FoamAtom::Theta123 { dec3, dec2, d1, orient } => {
            Ok(theta123_direct(n, dec3, dec2, *d1)? * rat(*orient as i64))
        }
    }
}

/// Formal rational combination of disjoint unions of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosedFoam {
    terms: BTreeMap<Vec<FoamAtom>, Rational>,
}

impl ClosedFoam {
    /// The empty foam, evaluating to 1.
    pub fn empty() -> Self {
        Self::from_atoms(Vec::new())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(a: FoamAtom) -> Self {
        Self::from_atoms(vec![a])
    }

    pub fn from_atoms(mut atoms: Vec<FoamAtom>) -> Self {
        atoms.sort();
        let mut terms = BTreeMap::new();
        terms.insert(atoms, Rational::one());
        ClosedFoam { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<FoamAtom>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mut atoms: Vec<FoamAtom>, c: Rational) {
        atoms.sort();
        let e = self.terms.entry(atoms).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &ClosedFoam) -> ClosedFoam {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ClosedFoam {
        let mut out = ClosedFoam::zero();
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    /// Disjoint union, extended bilinearly.
    pub fn disjoint_union(&self, other: &ClosedFoam) -> ClosedFoam {
        let mut out = ClosedFoam::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut atoms = a.clone();
                atoms.extend(b.iter().cloned());
                out.add_term(atoms, x * y);
            }
        }
        out
    }
}

impl fmt::Display for ClosedFoam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(atoms, c)| {
                let body: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                format!("{c}*[{}]", body.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Linear and multiplicative evaluation with the closed-form tables.
pub fn eval(f: &ClosedFoam, n: u32) -> Result<Rational> {
    let mut total = Rational::zero();
    for (atoms, c) in f.terms() {
        let mut v = c.clone();
        for a in atoms {
            if v.is_zero() {
                break;
            }
            v *= eval_atom(a, n)?;
        }
        total += v;
    }
    Ok(total)
}

