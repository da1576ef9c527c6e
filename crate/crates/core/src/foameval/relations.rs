//! Closed-pairing checks of the local foam relations.
//!
//! A relation between foams with boundary circles is checked by capping
//! every boundary circle with each member of a cap family (dotted disks and
//! holed theta foams) and comparing the closed evaluations. The dual-basis
//! relations on webs go through the pairing matrices of `duality`.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::duality::{self, is_identity, DualityCase};
use super::migrate::{decorate, migrate, Elementary, Slot};
use super::vfoam::{eval_vfoam, Circle, Facet, VFoam};
use super::{
    eval, eval_atom, eval_atom_direct, grass, sphere_eval, theta112_closed, theta112_direct, theta123_closed,
    theta123_direct, FoamAtom,
};
use crate::error::{domain, Result};
use crate::polyring::{rat, Rational};
use crate::symmetric::{part, Partition, SchurSum};

pub const RELATION_IDS: [&str; 17] = [
    "CN1",
    "CN2",
    "CNstar",
    "S1",
    "S2",
    "Sstar",
    "Theta",
    "ThetaStar",
    "DR1",
    "DR2",
    "SqR1",
    "RD1",
    "RD2",
    "FC",
    "3C",
    "DotMigration",
    "DotConversion",
];

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub id: String,
    pub n: u32,
    pub pass: bool,
    /// Number of closed evaluations compared.
    pub checks: usize,
    pub counterexample: Option<String>,
    /// Pairing matrix of a dual-basis relation.
    pub matrix: Option<Vec<Vec<Rational>>>,
    /// Size the pairing matrix must have.
    pub expected_size: Option<usize>,
    pub notes: Vec<String>,
}

impl RelationReport {
    fn new(id: &str, n: u32) -> Self {
        RelationReport {
            id: id.to_string(),
            n,
            pass: true,
            checks: 0,
            counterexample: None,
            matrix: None,
            expected_size: None,
            notes: Vec::new(),
        }
    }

    fn compare(&mut self, what: impl FnOnce() -> String, got: &Rational, want: &Rational) {
        self.checks += 1;
        if got != want && self.counterexample.is_none() {
            self.pass = false;
            self.counterexample = Some(format!("{}: got {got}, expected {want}", what()));
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(msg);
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} N={}: {verdict} ({} checks)", self.id, self.n, self.checks)?;
        if let (Some(m), Some(s)) = (&self.matrix, self.expected_size) {
            let ident = is_identity(m);
            write!(f, "\n  pairing matrix {}x{} (expected {s}), identity: {ident}", m.len(), m.first().map_or(0, |r| r.len()))?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// Check relation `id` at rank `n`.
pub fn verify_relation(id: &str, n: u32) -> Result<RelationReport> {
    let needs_triple = matches!(id, "CNstar" | "Sstar" | "ThetaStar" | "RD2");
    if !RELATION_IDS.contains(&id) {
        return domain(format!("unknown relation {id}; known: {}", RELATION_IDS.join(", ")));
    }
    if n < 2 || (needs_triple && n < 4) || (id == "SqR1" && n < 3) {
        return domain(format!("relation {id} is not defined for N = {n}"));
    }
    if n > 8 {
        return domain(format!("N = {n} is beyond the supported range 2..=8"));
    }
    match id {
        "S1" | "S2" | "Sstar" => spheres(id, n),
        "Theta" => theta(n),
        "ThetaStar" => theta_star(n),
        "DR1" => dual_basis(duality::dr1(n)?, n, (2 * n * (n - 1)) as usize),
        "DR2" => dual_basis(duality::dr2(n)?, n, (n * (n - 1) * (n - 1)) as usize),
        "SqR1" => {
            let size = n * n + 2 * n * (n - 2) + n * n * (n - 2) * (n - 2);
            dual_basis(duality::sqr1(n)?, n, size as usize)
        }
        "DotMigration" => dot_migration(n),
        "DotConversion" => dot_conversion(n),
        "3C" => Ok(three_cylinders(n)),
        _ => tube_relation(id, n),
    }
}

fn spheres(id: &str, n: u32) -> Result<RelationReport> {
    let mut rep = RelationReport::new(id, n);
    let k: usize = match id {
        "S1" => 1,
        "S2" => 2,
        _ => 3,
    };
    let top = n - k as u32;
    let sign = if k == 1 { rat(1) } else { rat(-1) };
    for p in Partition::in_box(k, 2 * n) {
        let want = if p.parts().iter().all(|&v| v == top) { sign.clone() } else { Rational::zero() };
        let got = sphere_eval(k as u8, &p, n)?;
        rep.compare(|| format!("sphere {p}"), &got, &want);
    }
    Ok(rep)
}

fn theta(n: u32) -> Result<RelationReport> {
    let mut rep = RelationReport::new("Theta", n);
    let g2 = grass(n, 2)?;
    for d1 in 0..n {
        for d2 in 0..n {
            for l in g2.basis() {
                let c = theta112_closed(n, d1, d2, l)?;
                let d = theta112_direct(n, d1, d2, l)?;
                rep.compare(|| format!("closed vs direct at ({d1},{d2},{l})"), &c, &d);
            }
        }
    }
    let z = part(&[0, 0]);
    rep.compare(|| "undotted double facet, (N-2,N-1)".into(), &theta112_direct(n, n - 2, n - 1, &z)?, &rat(-1));
    rep.compare(|| "undotted double facet, (N-1,N-2)".into(), &theta112_direct(n, n - 1, n - 2, &z)?, &rat(1));
    rep.notes.push(
        "letter binding: first simple sheet carries d1, second d2, double facet pi_{j,k}; \
         -1 iff d1+j=N-2 and d2+k=N-1, +1 iff d1+k=N-1 and d2+j=N-2"
            .into(),
    );
    Ok(rep)
}

fn theta_star(n: u32) -> Result<RelationReport> {
    let mut rep = RelationReport::new("ThetaStar", n);
    let (g2, g3) = (grass(n, 2)?, grass(n, 3)?);
    for i in 0..n {
        for l in g2.basis() {
            for m in g3.basis() {
                if m.size() + l.size() + i != 3 * n - 7 {
                    let c = theta123_closed(n, m, l, i)?;
                    rep.compare(|| format!("grading zero at ({m},{l},{i})"), &c, &Rational::zero());
                    continue;
                }
                let c = theta123_closed(n, m, l, i)?;
                let d = theta123_direct(n, m, l, i)?;
                rep.compare(|| format!("closed vs direct at ({m},{l},{i})"), &c, &d);
                let a = FoamAtom::Theta123 { dec3: m.clone(), dec2: l.clone(), d1: i, orient: 1 };
                rep.compare(|| format!("orientation reversal at {a}"), &eval_atom(&a.reversed(), n)?, &(-c));
            }
        }
    }
    let q = theta123_direct(n, &part(&[0, 0, 0]), &part(&[n - 2, n - 2]), n - 3)?;
    rep.compare(|| "undecorated triple facet, pi_{N-2,N-2}, N-3 dots".into(), &q, &rat(-1));
    Ok(rep)
}

fn dual_basis(case: DualityCase, n: u32, size: usize) -> Result<RelationReport> {
    let mut rep = RelationReport::new(case.name, n);
    rep.expected_size = Some(size);
    let m = case.gram(n)?;
    rep.checks = m.len() * m.len();
    if m.len() != size {
        rep.fail(format!("basis has {} elements", m.len()));
    }
    if !is_identity(&m) {
        let bad = (0..m.len())
            .flat_map(|i| (0..m.len()).map(move |j| (i, j)))
            .find(|&(i, j)| m[i][j] != if i == j { Rational::one() } else { Rational::zero() });
        if let Some((i, j)) = bad {
            rep.fail(format!("<{}, dual {}> = {}", case.basis[i].0, case.dual[j].0, m[i][j]));
        }
    }
    let (l, r) = case.relation_vectors(n)?;
    rep.checks += l.len();
    if let Some(j) = (0..l.len()).find(|&j| l[j] != r[j]) {
        rep.fail(format!("relation differs against dual {}: {} vs {}", case.dual[j].0, l[j], r[j]));
    }
    rep.matrix = Some(m);
    Ok(rep)
}

fn theta_atoms(n: u32) -> Result<Vec<FoamAtom>> {
    let mut out = Vec::new();
    let g2 = grass(n, 2)?;
    for d1 in 0..n {
        for d2 in 0..n {
            for l in g2.basis() {
                out.push(FoamAtom::Theta112 { d1, d2, dec2: l.clone() });
            }
        }
    }
    if n >= 4 {
        let g3 = grass(n, 3)?;
        for i in 0..n {
            for l in g2.basis() {
                for m in g3.basis() {
                    out.push(FoamAtom::Theta123 { dec3: m.clone(), dec2: l.clone(), d1: i, orient: 1 });
                }
            }
        }
    }
    Ok(out)
}

const MOVES: [(Slot, Elementary); 10] = [
    (Slot::Double, Elementary::Pi10),
    (Slot::Double, Elementary::Pi11),
    (Slot::Simple, Elementary::Dot),
    (Slot::Second, Elementary::Dot),
    (Slot::Triple, Elementary::Pi100),
    (Slot::Triple, Elementary::Pi110),
    (Slot::Triple, Elementary::Pi111),
    (Slot::Simple, Elementary::Dot),
    (Slot::Double, Elementary::Pi10),
    (Slot::Double, Elementary::Pi11),
];

fn dot_migration(n: u32) -> Result<RelationReport> {
    let mut rep = RelationReport::new("DotMigration", n);
    for a in theta_atoms(n)? {
        let moves = if matches!(a, FoamAtom::Theta112 { .. }) { &MOVES[..4] } else { &MOVES[4..] };
        for &(slot, class) in moves {
            let lhs = eval(&decorate(&a, slot, class)?, n)?;
            let rhs = eval(&migrate(&a, slot, class)?, n)?;
            rep.compare(|| format!("{class:?} off {slot:?} of {a}"), &rhs, &lhs);
        }
    }
    Ok(rep)
}

fn dot_conversion(n: u32) -> Result<RelationReport> {
    let mut rep = RelationReport::new("DotConversion", n);
    let g2 = grass(n, 2)?;
    for d in n..n + 3 {
        for other in 0..n {
            for l in g2.basis() {
                let a = FoamAtom::Theta112 { d1: d, d2: other, dec2: l.clone() };
                rep.compare(|| format!("{a}"), &eval_atom_direct(&a, n)?, &Rational::zero());
            }
        }
        rep.compare(|| format!("sphere with {d} dots"), &sphere_eval(1, &part(&[d]), n)?, &Rational::zero());
    }
    for j in n - 1..n + 2 {
        for k in 0..=j.min(n - 1) {
            let l = part(&[j, k]);
            for d1 in 0..n {
                let d2 = (2 * n - 3).saturating_sub(d1 + j + k);
                let a = FoamAtom::Theta112 { d1, d2, dec2: l.clone() };
                rep.compare(|| format!("{a}"), &eval_atom_direct(&a, n)?, &Rational::zero());
            }
            rep.compare(|| format!("double sphere {l}"), &sphere_eval(2, &l, n)?, &Rational::zero());
        }
    }
    if n >= 4 {
        for p in n - 2..n {
            for q in 0..=p.min(n - 3) {
                let m = part(&[p, q, 0]);
                for i in 0..n {
                    for l in g2.basis() {
                        if m.size() + l.size() + i != 3 * n - 7 {
                            continue;
                        }
                        let got = theta123_direct(n, &m, l, i)?;
                        rep.compare(|| format!("triple {m}, double {l}, {i} dots"), &got, &Rational::zero());
                    }
                }
                rep.compare(|| format!("triple sphere {m}"), &sphere_eval(3, &m, n)?, &Rational::zero());
            }
        }
    }
    Ok(rep)
}

/// Foam with boundary circles; `ports[i]` is the facet meeting circle `i`.
#[derive(Clone, Debug)]
struct Piece {
    foam: VFoam,
    ports: Vec<usize>,
}

/// Closed foam with one marked facet that has an extra hole.
#[derive(Clone, Debug)]
struct Cap {
    foam: VFoam,
    port: usize,
    label: String,
}

type Side = Vec<(Rational, Piece)>;

fn close(p: &Piece, caps: &[&Cap]) -> VFoam {
    let mut f = p.foam.clone();
    for (&pf, cap) in p.ports.iter().zip(caps) {
        let mut map = Vec::with_capacity(cap.foam.facets.len());
        for (i, fc) in cap.foam.facets.iter().enumerate() {
            if i == cap.port {
                map.push(pf);
                f.decorate(pf, &fc.dec);
                f.facets[pf].genus += fc.genus;
            } else {
                map.push(f.facet(fc.clone()));
            }
        }
        for c in &cap.foam.circles {
            f.circle(match *c {
                Circle::T112 { first, second, double } => Circle::T112 {
                    first: map[first],
                    second: map[second],
                    double: map[double],
                },
                Circle::T123 { simple, double, triple, orient } => Circle::T123 {
                    simple: map[simple],
                    double: map[double],
                    triple: map[triple],
                    orient,
                },
            });
        }
    }
    f
}

fn schur(dec: &Partition) -> SchurSum {
    SchurSum::single(dec.clone())
}

fn caps(n: u32, k: u8) -> Result<Vec<Cap>> {
    let mut out = Vec::new();
    let g = grass(n, k as usize)?;
    for dec in g.basis() {
        let mut f = VFoam::new();
        let port = f.facet(Facet::new(k, 0, schur(dec)));
        out.push(Cap { foam: f, port, label: format!("disk {dec}") });
    }
    let g1 = grass(n, 1)?;
    let g2 = grass(n, 2)?;
    let g3 = if n >= 4 { Some(grass(n, 3)?) } else { None };
    let empty = |k: u8| Facet::plain(k, &vec![0; k as usize]);
    match k {
        1 => {
            for d in g1.basis() {
                for l in g2.basis() {
                    let mut f = VFoam::new();
                    let port = f.facet(empty(1));
                    let s = f.facet(Facet::new(1, 0, schur(d)));
                    let dd = f.facet(Facet::new(2, 0, schur(l)));
                    f.circle(Circle::T112 { first: port, second: s, double: dd });
                    out.push(Cap { foam: f, port, label: format!("theta112 cap ({d},{l})") });
                }
            }
            if let Some(g3) = &g3 {
                for l in g2.basis() {
                    for m in g3.basis() {
                        let mut f = VFoam::new();
                        let port = f.facet(empty(1));
                        let dd = f.facet(Facet::new(2, 0, schur(l)));
                        let t = f.facet(Facet::new(3, 0, schur(m)));
                        f.circle(Circle::T123 { simple: port, double: dd, triple: t, orient: 1 });
                        out.push(Cap { foam: f, port, label: format!("theta123 cap ({l},{m})") });
                    }
                }
            }
        }
        2 => {
            for a in g1.basis() {
                for b in g1.basis() {
                    let mut f = VFoam::new();
                    let port = f.facet(empty(2));
                    let x = f.facet(Facet::new(1, 0, schur(a)));
                    let y = f.facet(Facet::new(1, 0, schur(b)));
                    f.circle(Circle::T112 { first: x, second: y, double: port });
                    out.push(Cap { foam: f, port, label: format!("theta112 cap ({a},{b})") });
                }
            }
            if let Some(g3) = &g3 {
                for a in g1.basis() {
                    for m in g3.basis() {
                        let mut f = VFoam::new();
                        let port = f.facet(empty(2));
                        let x = f.facet(Facet::new(1, 0, schur(a)));
                        let t = f.facet(Facet::new(3, 0, schur(m)));
                        f.circle(Circle::T123 { simple: x, double: port, triple: t, orient: 1 });
                        out.push(Cap { foam: f, port, label: format!("theta123 cap ({a},{m})") });
                    }
                }
            }
        }
        _ => {
            for a in g1.basis() {
                for l in g2.basis() {
                    let mut f = VFoam::new();
                    let port = f.facet(empty(3));
                    let x = f.facet(Facet::new(1, 0, schur(a)));
                    let dd = f.facet(Facet::new(2, 0, schur(l)));
                    f.circle(Circle::T123 { simple: x, double: dd, triple: port, orient: 1 });
                    out.push(Cap { foam: f, port, label: format!("theta123 cap ({a},{l})") });
                }
            }
        }
    }
    Ok(out)
}

fn tube(k: u8) -> Piece {
    let mut f = VFoam::new();
    let t = f.facet(Facet::plain(k, &vec![0; k as usize]));
    Piece { foam: f, ports: vec![t, t] }
}

fn disks(decs: &[(u8, SchurSum)]) -> Piece {
    let mut f = VFoam::new();
    let ports = decs.iter().map(|(k, d)| f.facet(Facet::new(*k, 0, d.clone()))).collect();
    Piece { foam: f, ports }
}

fn x(d: u32) -> (u8, SchurSum) {
    (1, schur(&part(&[d])))
}

fn cls(p: &[u32]) -> (u8, SchurSum) {
    (p.len() as u8, schur(&part(p)))
}

/// Both sides of a relation between foams bounded by circles, with the
/// thickness of each boundary circle.
fn tube_sides(id: &str, n: u32) -> Result<(Vec<u8>, Side, Side)> {
    let one = Rational::one;
    Ok(match id {
        "CN1" => {
            let rhs = (0..n).map(|i| (one(), disks(&[x(i), x(n - 1 - i)]))).collect();
            (vec![1, 1], vec![(one(), tube(1))], rhs)
        }
        "CN2" | "CNstar" => {
            let k: u8 = if id == "CN2" { 2 } else { 3 };
            let g = grass(n, k as usize)?;
            let rhs = g
                .basis()
                .iter()
                .map(|p| {
                    let hat = p.complement(g.width()).expect("basis partition fits");
                    (rat(-1), disks(&[(k, schur(p)), (k, schur(&hat))]))
                })
                .collect();
            (vec![k, k], vec![(one(), tube(k))], rhs)
        }
        "RD1" => {
            let mut f = VFoam::new();
            let a = f.facet(Facet::dots(0));
            let b = f.facet(Facet::dots(0));
            let d = f.facet(Facet::plain(2, &[0, 0]));
            f.circle(Circle::T112 { first: a, second: b, double: d });
            let lhs = vec![(one(), Piece { foam: f, ports: vec![a, b] })];
            let rhs = vec![(one(), disks(&[x(0), x(1)])), (rat(-1), disks(&[x(1), x(0)]))];
            (vec![1, 1], lhs, rhs)
        }
        "RD2" => {
            let mut f = VFoam::new();
            let a = f.facet(Facet::dots(0));
            let e = f.facet(Facet::plain(2, &[0, 0]));
            let t = f.facet(Facet::plain(3, &[0, 0, 0]));
            f.circle(Circle::T123 { simple: a, double: e, triple: t, orient: 1 });
            let lhs = vec![(one(), Piece { foam: f, ports: vec![a, e] })];
            let rhs = vec![
                (one(), disks(&[x(2), cls(&[0, 0])])),
                (rat(-1), disks(&[x(1), cls(&[1, 0])])),
                (one(), disks(&[x(0), cls(&[1, 1])])),
            ];
            (vec![1, 2], lhs, rhs)
        }
        "FC" => {
            let mut f = VFoam::new();
            let d = f.facet(Facet::plain(2, &[0, 0]));
            let a = f.facet(Facet::dots(0));
            let ia = f.facet(Facet::dots(0));
            let b = f.facet(Facet::dots(0));
            let ib = f.facet(Facet::dots(0));
            f.circle(Circle::T112 { first: a, second: ia, double: d });
            f.circle(Circle::T112 { first: b, second: ib, double: d });
            let lhs = vec![(one(), Piece { foam: f, ports: vec![a, b] })];
            (vec![1, 1], lhs, vec![(rat(-1), disks(&[x(0), x(0)]))])
        }
        _ => return domain(format!("{id} is not a tube relation")),
    })
}

fn side_value(side: &Side, caps: &[&Cap], n: u32) -> Result<Rational> {
    let mut v = Rational::zero();
    for (c, p) in side {
        v += c * eval_vfoam(&close(p, caps), n)?;
    }
    Ok(v)
}

fn tube_relation(id: &str, n: u32) -> Result<RelationReport> {
    let (kinds, lhs, rhs) = tube_sides(id, n)?;
    let (c0, c1) = (caps(n, kinds[0])?, caps(n, kinds[1])?);
    let pairs: Vec<(usize, usize)> = (0..c0.len()).flat_map(|i| (0..c1.len()).map(move |j| (i, j))).collect();
    let results: Vec<Result<(usize, usize, Rational, Rational)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let cs = [&c0[i], &c1[j]];
            Ok((i, j, side_value(&lhs, &cs, n)?, side_value(&rhs, &cs, n)?))
        })
        .collect();
    let mut rep = RelationReport::new(id, n);
    for r in results {
        let (i, j, l, r) = r?;
        rep.compare(|| format!("closed by {} and {}", c0[i].label, c1[j].label), &l, &r);
    }
    Ok(rep)
}

fn three_cylinders(n: u32) -> RelationReport {
    let mut rep = RelationReport::new("3C", n);
    rep.fail("no foam reading of the three-cylinder relation is available to check".into());
    rep.notes.push(
        "the relation is stated only through its pictures; the tube readings tried \
         (double and triple middle sections, fat tubes, double pants) give no identity of its shape"
            .into(),
    );
    rep
}
