//! Dot migration across a singular circle and bubble removal.
//!
//! Along a (1,1,2) circle the decorations satisfy `s = x + y`, `t = xy`;
//! along a (1,2,3) circle `p = x + s`, `q = xs + t`, `r = xt`. Migration
//! multiplies an atom by an elementary class on one facet and rewrites that
//! class through the other two facets.

use num_traits::{One, Zero};

use super::{grass, theta112_closed, theta123_closed, ClosedFoam, FoamAtom};
use crate::error::{domain, Result};
use crate::polyring::{rat, Rational};
use crate::symmetric::{part, Partition, SchurSum};

/// Facet of a theta atom. `Simple` and `Second` are the two simple sheets of
/// a (1,1,2) theta; a (1,2,3) theta only has `Simple`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Simple,
    Second,
    Double,
    Triple,
}

/// Elementary symmetric classes that can be pushed across a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Dot,
    Pi10,
    Pi11,
    Pi100,
    Pi110,
    Pi111,
}

impl Elementary {
    pub fn partition(self) -> Partition {
        match self {
            Elementary::Dot => part(&[1]),
            Elementary::Pi10 => part(&[1, 0]),
            Elementary::Pi11 => part(&[1, 1]),
            Elementary::Pi100 => part(&[1, 0, 0]),
            Elementary::Pi110 => part(&[1, 1, 0]),
            Elementary::Pi111 => part(&[1, 1, 1]),
        }
    }

    pub fn all() -> [Elementary; 6] {
        use Elementary::*;
        [Dot, Pi10, Pi11, Pi100, Pi110, Pi111]
    }
}

/// A monomial in the facet decorations of one theta: extra dots on the two
/// simple sheets (or the one simple sheet), an extra double class, an extra
/// triple class.
struct Mono {
    coeff: i64,
    x: u32,
    y: u32,
    dec2: Partition,
    dec3: Partition,
}

fn mono(coeff: i64, x: u32, y: u32, dec2: &[u32], dec3: &[u32]) -> Mono {
    Mono { coeff, x, y, dec2: part(dec2), dec3: part(dec3) }
}

/// Rewriting rules: the class on the chosen facet as a polynomial in the
/// classes of the other facets.
fn rule(a: &FoamAtom, slot: Slot, class: Elementary) -> Result<Vec<Mono>> {
    use Elementary::*;
    let rules = match (a, slot, class) {
        (FoamAtom::Theta112 { .. }, Slot::Double, Pi10) => {
            vec![mono(1, 1, 0, &[0, 0], &[0, 0, 0]), mono(1, 0, 1, &[0, 0], &[0, 0, 0])]
        }
        (FoamAtom::Theta112 { .. }, Slot::Double, Pi11) => vec![mono(1, 1, 1, &[0, 0], &[0, 0, 0])],
        (FoamAtom::Theta112 { .. }, Slot::Simple, Dot) => {
            vec![mono(1, 0, 0, &[1, 0], &[0, 0, 0]), mono(-1, 0, 1, &[0, 0], &[0, 0, 0])]
        }
        (FoamAtom::Theta112 { .. }, Slot::Second, Dot) => {
            vec![mono(1, 0, 0, &[1, 0], &[0, 0, 0]), mono(-1, 1, 0, &[0, 0], &[0, 0, 0])]
        }
        (FoamAtom::Theta123 { .. }, Slot::Triple, Pi100) => {
            vec![mono(1, 1, 0, &[0, 0], &[0, 0, 0]), mono(1, 0, 0, &[1, 0], &[0, 0, 0])]
        }
        (FoamAtom::Theta123 { .. }, Slot::Triple, Pi110) => {
            vec![mono(1, 1, 0, &[1, 0], &[0, 0, 0]), mono(1, 0, 0, &[1, 1], &[0, 0, 0])]
        }
        (FoamAtom::Theta123 { .. }, Slot::Triple, Pi111) => vec![mono(1, 1, 0, &[1, 1], &[0, 0, 0])],
        (FoamAtom::Theta123 { .. }, Slot::Simple, Dot) => {
            vec![mono(1, 0, 0, &[0, 0], &[1, 0, 0]), mono(-1, 0, 0, &[1, 0], &[0, 0, 0])]
        }
        (FoamAtom::Theta123 { .. }, Slot::Double, Pi10) => {
            vec![mono(1, 0, 0, &[0, 0], &[1, 0, 0]), mono(-1, 1, 0, &[0, 0], &[0, 0, 0])]
        }
        // t = q - x p + x^2
        (FoamAtom::Theta123 { .. }, Slot::Double, Pi11) => vec![
            mono(1, 0, 0, &[0, 0], &[1, 1, 0]),
            mono(-1, 1, 0, &[0, 0], &[1, 0, 0]),
            mono(1, 2, 0, &[0, 0], &[0, 0, 0]),
        ],
        _ => return domain(format!("cannot migrate {class:?} off the {slot:?} facet of {a}")),
    };
    Ok(rules)
}

fn expand(dec: &Partition, extra: &Partition) -> SchurSum {
    SchurSum::single(dec.clone()).mul(&SchurSum::single(extra.clone()))
}

/// The atom multiplied by `class` on facet `slot`, with that class rewritten
/// through the other facets. Products are expanded in the Schur basis.
pub fn migrate(a: &FoamAtom, slot: Slot, class: Elementary) -> Result<ClosedFoam> {
    let monos = rule(a, slot, class)?;
    let mut out = ClosedFoam::zero();
    for m in monos {
        let c = rat(m.coeff);
        match a {
            FoamAtom::Theta112 { d1, d2, dec2 } => {
                for (l, v) in expand(dec2, &m.dec2).terms() {
                    let atom = FoamAtom::Theta112 { d1: d1 + m.x, d2: d2 + m.y, dec2: l.clone() };
                    out.add_term(vec![atom], &c * v);
                }
            }
            FoamAtom::Theta123 { dec3, dec2, d1, orient } => {
                for (l3, v3) in expand(dec3, &m.dec3).terms() {
                    for (l2, v2) in expand(dec2, &m.dec2).terms() {
                        let atom = FoamAtom::Theta123 {
                            dec3: l3.clone(),
                            dec2: l2.clone(),
                            d1: d1 + m.x,
                            orient: *orient,
                        };
                        out.add_term(vec![atom], &c * v3 * v2);
                    }
                }
            }
            FoamAtom::Sphere { .. } => unreachable!("rule rejects spheres"),
        }
    }
    Ok(out)
}

/// The atom with `class` multiplied into facet `slot` and nothing moved.
pub fn decorate(a: &FoamAtom, slot: Slot, class: Elementary) -> Result<ClosedFoam> {
    let extra = class.partition();
    let mut out = ClosedFoam::zero();
    let one = Rational::one();
    match (a, slot) {
        (FoamAtom::Theta112 { d1, d2, dec2 }, Slot::Simple | Slot::Second) if extra.len() == 1 => {
            let e = extra.parts()[0];
            let (d1, d2) = if slot == Slot::Simple { (d1 + e, *d2) } else { (*d1, d2 + e) };
            out.add_term(vec![FoamAtom::Theta112 { d1, d2, dec2: dec2.clone() }], one);
        }
        (FoamAtom::Theta112 { d1, d2, dec2 }, Slot::Double) if extra.len() == 2 => {
            for (l, v) in expand(dec2, &extra).terms() {
                out.add_term(vec![FoamAtom::Theta112 { d1: *d1, d2: *d2, dec2: l.clone() }], v.clone());
            }
        }
        (FoamAtom::Theta123 { dec3, dec2, d1, orient }, _) => {
            let (k, which) = match slot {
                Slot::Simple => (1, 0),
                Slot::Double => (2, 1),
                Slot::Triple => (3, 2),
                Slot::Second => return domain("a (1,2,3) theta has one simple facet"),
            };
            if extra.len() != k {
                return domain(format!("{class:?} does not live on a facet of thickness {k}"));
            }
            let mut atom = a.clone();
            let mut push = |atom: FoamAtom, c: &Rational| out.add_term(vec![atom], c.clone());
            match which {
                0 => {
                    if let FoamAtom::Theta123 { d1: d, .. } = &mut atom {
                        *d += extra.parts()[0];
                    }
                    push(atom, &one);
                }
                1 => {
                    for (l, v) in expand(dec2, &extra).terms() {
                        push(FoamAtom::Theta123 { dec3: dec3.clone(), dec2: l.clone(), d1: *d1, orient: *orient }, v);
                    }
                }
                _ => {
                    for (l, v) in expand(dec3, &extra).terms() {
                        push(FoamAtom::Theta123 { dec3: l.clone(), dec2: dec2.clone(), d1: *d1, orient: *orient }, v);
                    }
                }
            }
        }
        _ => return domain(format!("{class:?} does not fit the {slot:?} facet of {a}")),
    }
    Ok(out)
}

/// Decoration left on the ambient double facet by a bubble made of two
/// simple disks with `i` and `j` dots. Determined by pairing against every
/// basis class of the ambient facet.
pub fn bubble_double(n: u32, i: u32, j: u32) -> Result<SchurSum> {
    let g = grass(n, 2)?;
    let mut out = SchurSum::zero(2);
    for mu in g.basis() {
        let v = theta112_closed(n, i, j, mu)?;
        if !v.is_zero() {
            out = out.add(&g.dual(mu)?.scale(&v));
        }
    }
    Ok(out)
}

/// Decoration left on a simple facet by a bubble whose other sheets are a
/// simple disk with `a` dots and a double disk decorated `(j,k)`. The
/// ambient facet is the first sheet of the circle.
pub fn bubble_simple(n: u32, a: u32, dec2: &Partition) -> Result<SchurSum> {
    let g = grass(n, 1)?;
    let mut out = SchurSum::zero(1);
    for d in 0..n {
        let v = theta112_closed(n, d, a, dec2)?;
        if !v.is_zero() {
            out = out.add(&g.dual(&part(&[d]))?.scale(&v));
        }
    }
    Ok(out)
}

/// The three (1,2,3) bubble shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleBubble {
    /// Triple disk `pi_{p,q,r}` and simple disk with `i` dots on a double facet.
    OnDouble,
    /// Double disk `pi_{k,m}` and simple disk with `i` dots on a triple facet.
    OnTriple,
    /// Triple disk `pi_{p,q,r}` and double disk `pi_{k,m}` on a simple facet.
    OnSimple,
}

impl TripleBubble {
    pub fn from_kind(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(TripleBubble::OnDouble),
            2 => Ok(TripleBubble::OnTriple),
            3 => Ok(TripleBubble::OnSimple),
            _ => domain(format!("bubble kind {kind} not in 1..=3")),
        }
    }

    /// Orientation of the bubble's circle relative to the (1,2,3) theta.
    fn orient(self) -> i64 {
        match self {
            TripleBubble::OnDouble | TripleBubble::OnTriple => -1,
            TripleBubble::OnSimple => 1,
        }
    }
}

/// Bubble removal for the (1,2,3) shapes. `indices` are `(p,q,r,i)`,
/// `(i,k,m)` and `(p,q,r,k,m)` for kinds 1, 2 and 3.
pub fn bubble_triple(n: u32, kind: u8, indices: &[u32]) -> Result<SchurSum> {
    let shape = TripleBubble::from_kind(kind)?;
    if n < 4 {
        return domain("triple facets need N >= 4");
    }
    let want = match shape {
        TripleBubble::OnDouble => 4,
        TripleBubble::OnTriple => 3,
        TripleBubble::OnSimple => 5,
    };
    if indices.len() != want {
        return domain(format!("bubble kind {kind} takes {want} indices"));
    }
    let ix = indices;
    let sign = rat(shape.orient());
    let mut out;
    match shape {
        TripleBubble::OnDouble => {
            let g = grass(n, 2)?;
            let dec3 = Partition::new(&ix[..3])?;
            out = SchurSum::zero(2);
            for mu in g.basis() {
                let v = theta123_closed(n, &dec3, mu, ix[3])?;
                if !v.is_zero() {
                    out = out.add(&g.dual(mu)?.scale(&(v * &sign)));
                }
            }
        }
        TripleBubble::OnTriple => {
            let g = grass(n, 3)?;
            let dec2 = Partition::new(&ix[1..3])?;
            out = SchurSum::zero(3);
            for mu in g.basis() {
                let v = theta123_closed(n, mu, &dec2, ix[0])?;
                if !v.is_zero() {
                    out = out.add(&g.dual(mu)?.scale(&(v * &sign)));
                }
            }
        }
        TripleBubble::OnSimple => {
            let g = grass(n, 1)?;
            let dec3 = Partition::new(&ix[..3])?;
            let dec2 = Partition::new(&ix[3..5])?;
            out = SchurSum::zero(1);
            for d in 0..n {
                let v = theta123_closed(n, &dec3, &dec2, d)?;
                if !v.is_zero() {
                    out = out.add(&g.dual(&part(&[d]))?.scale(&(v * &sign)));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foameval::eval;

    fn one(p: &[u32]) -> SchurSum {
        SchurSum::single(part(p))
    }

    fn neg(p: &[u32]) -> SchurSum {
        SchurSum::term(part(p), rat(-1))
    }

    #[test]
    fn double_class_splits_into_dots() {
        let a = FoamAtom::theta112(1, 2, &[1, 0]);
        let mut want = ClosedFoam::atom(FoamAtom::theta112(2, 2, &[1, 0]));
        want = want.add(&ClosedFoam::atom(FoamAtom::theta112(1, 3, &[1, 0])));
        assert_eq!(migrate(&a, Slot::Double, Elementary::Pi10).unwrap(), want);
        let got = migrate(&a, Slot::Double, Elementary::Pi11).unwrap();
        assert_eq!(got, ClosedFoam::atom(FoamAtom::theta112(2, 3, &[1, 0])));
    }

    #[test]
    fn top_triple_class_moves_to_simple_and_double() {
        let a = FoamAtom::theta123(&[0, 0, 0], &[0, 0], 2);
        let got = migrate(&a, Slot::Triple, Elementary::Pi111).unwrap();
        assert_eq!(got, ClosedFoam::atom(FoamAtom::theta123(&[0, 0, 0], &[1, 1], 3)));
    }

    #[test]
    fn bad_requests_are_domain_errors() {
        let a = FoamAtom::theta112(0, 0, &[0, 0]);
        assert!(migrate(&a, Slot::Triple, Elementary::Pi111).is_err());
        assert!(migrate(&a, Slot::Simple, Elementary::Pi11).is_err());
        assert!(migrate(&FoamAtom::sphere(1, &[0]), Slot::Simple, Elementary::Dot).is_err());
        assert!(bubble_triple(4, 7, &[0, 0, 0]).is_err());
    }

    #[test]
    fn migration_preserves_values() {
        for n in 2..=5 {
            let g2 = grass(n, 2).unwrap();
            for d1 in 0..n {
                for d2 in 0..n {
                    for l in g2.basis() {
                        let a = FoamAtom::Theta112 { d1, d2, dec2: l.clone() };
                        for (s, c) in [
                            (Slot::Double, Elementary::Pi10),
                            (Slot::Double, Elementary::Pi11),
                            (Slot::Simple, Elementary::Dot),
                            (Slot::Second, Elementary::Dot),
                        ] {
                            let lhs = eval(&decorate(&a, s, c).unwrap(), n).unwrap();
                            let rhs = eval(&migrate(&a, s, c).unwrap(), n).unwrap();
                            assert_eq!(lhs, rhs, "{a} {s:?} {c:?} N={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn double_bubble_matches_case_table() {
        for n in 2..=6 {
            for i in 0..n {
                for j in 0..n {
                    let want = if i > j {
                        neg(&[i - 1, j])
                    } else if j > i {
                        one(&[j - 1, i])
                    } else {
                        SchurSum::zero(2)
                    };
                    assert_eq!(bubble_double(n, i, j).unwrap(), want, "N={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn simple_bubble_matches_case_table() {
        for n in 2..=5 {
            for a in 0..n {
                for l in Partition::in_box(2, n - 2) {
                    let (j, k) = (l.parts()[0], l.parts()[1]);
                    let mut want = SchurSum::zero(1);
                    if a + k == n - 1 {
                        want = want.add(&neg(&[j + 1]));
                    }
                    if a + j == n - 2 {
                        want = want.add(&one(&[k]));
                    }
                    assert_eq!(bubble_simple(n, a, &l).unwrap(), want, "N={n} a={a} {l}");
                }
            }
        }
    }

    #[test]
    fn triple_bubble_on_double_matches_case_table() {
        for n in 4..=6 {
            for m in Partition::in_box(3, n - 3) {
                let (p, q, r) = (m.parts()[0], m.parts()[1], m.parts()[2]);
                for i in 0..n {
                    let want = if p + i == n - 3 {
                        neg(&[q, r])
                    } else if r + i == n - 1 {
                        neg(&[p + 1, q + 1])
                    } else if q + i == n - 2 {
                        one(&[p + 1, r])
                    } else {
                        SchurSum::zero(2)
                    };
                    assert_eq!(bubble_triple(n, 1, &[p, q, r, i]).unwrap(), want, "N={n} {m} i={i}");
                }
            }
        }
    }

    #[test]
    fn triple_bubble_on_triple_matches_case_table() {
        for n in 4..=6 {
            for l in Partition::in_box(2, n - 2) {
                let (k, m) = (l.parts()[0], l.parts()[1]);
                for i in 0..n {
                    let want = if n - 2 >= k && m > i {
                        neg(&[k - 1, m - 1, i])
                    } else if i >= k + 2 {
                        neg(&[i - 2, k, m])
                    } else if k >= i && i > m {
                        one(&[k - 1, i - 1, m])
                    } else {
                        SchurSum::zero(3)
                    };
                    assert_eq!(bubble_triple(n, 2, &[i, k, m]).unwrap(), want, "N={n} {l} i={i}");
                }
            }
        }
    }

    #[test]
    fn triple_bubble_on_simple_matches_case_table() {
        for n in 4..=6 {
            for t in Partition::in_box(3, n - 3) {
                let (p, q, r) = (t.parts()[0], t.parts()[1], t.parts()[2]);
                for l in Partition::in_box(2, n - 2) {
                    let (k, m) = (l.parts()[0], l.parts()[1]);
                    let want = if q + m == n - 2 && r + k == n - 2 {
                        neg(&[p + 2])
                    } else if p + m == n - 3 && q + k == n - 3 {
                        neg(&[r])
                    } else if p + m == n - 3 && r + k == n - 2 {
                        one(&[q + 1])
                    } else {
                        SchurSum::zero(1)
                    };
                    let got = bubble_triple(n, 3, &[p, q, r, k, m]).unwrap();
                    assert_eq!(got, want, "N={n} {t} {l}");
                }
            }
        }
    }
}
