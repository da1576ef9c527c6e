//! Dual bases of foam spaces of three closed webs, and the local relations
//! they detect.
//!
//! Each closed web `G` comes with a spanning family `u_b: empty -> G`, a
//! second family `u*_b`, and a planar symmetry `rho` of `G`. The dual foam
//! `hat(u*)` is the mirror image of `rho(u*)`, so `<u_a, hat(u*_b)>` is the
//! evaluation of `u_a` glued to the mirror of `rho(u*_b)`.

use num_traits::Zero;

use super::glue::{pairing, single, Combo, OpenFacet, OpenFoam, PlanarWeb};
use crate::error::{domain, Result};
use crate::polyring::{rat, Rational};

pub struct DualityCase {
    pub name: &'static str,
    pub web: PlanarWeb,
    pub basis: Vec<(String, Combo)>,
    /// Already transported by the web symmetry.
    pub dual: Vec<(String, Combo)>,
    pub lhs: Combo,
    pub rhs: Combo,
}

impl DualityCase {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `<u_a, hat(u*_b)>` for all `a, b`.
    pub fn gram(&self, n: u32) -> Result<Vec<Vec<Rational>>> {
        self.basis
            .iter()
            .map(|(_, u)| self.dual.iter().map(|(_, v)| pairing(&self.web, u, v, n)).collect())
            .collect()
    }

    /// Pairings of both sides of the relation with every dual foam.
    pub fn relation_vectors(&self, n: u32) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let side = |c: &Combo| -> Result<Vec<Rational>> {
            self.dual.iter().map(|(_, v)| pairing(&self.web, c, v, n)).collect()
        };
        Ok((side(&self.lhs)?, side(&self.rhs)?))
    }
}

pub fn is_identity(m: &[Vec<Rational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.len() == m.len() && row.iter().enumerate().all(|(j, x)| if i == j { *x == rat(1) } else { x.is_zero() })
    })
}

fn scaled(c: Combo, s: i64) -> Combo {
    c.into_iter().map(|(a, f)| (a * rat(s), f)).collect()
}

// Edges and vertices of the web with two (1,1)-digons joined by double
// edges. Digon 1 on top: a1 -> b1 with outer edge l1 and inner edge r1;
// digon 2 at the bottom: a2 -> b2 with outer l2 and inner r2.
mod w1 {
    pub const L1: usize = 0;
    pub const R1: usize = 1;
    pub const L2: usize = 2;
    pub const R2: usize = 3;
    pub const P: usize = 4;
    pub const Q: usize = 5;
    pub const A1: usize = 0;
    pub const B1: usize = 1;
    pub const A2: usize = 2;
    pub const B2: usize = 3;
}

fn web_dr1() -> Result<PlanarWeb> {
    use w1::*;
    PlanarWeb::new(
        vec![1, 1, 1, 1, 2, 2],
        vec![[L1, Q, R1], [L1, R1, P], [P, R2, L2], [R2, Q, L2]],
        vec![true, false, true, false],
    )
}

/// Removal foam of both digons: dots on the outer sheet of digon 1 and on
/// the inner sheet of digon 2, a Schur class on the double annulus.
fn dr1_u(i: u32, j: u32, k: u32, m: u32) -> OpenFoam {
    use w1::*;
    let mut f = OpenFoam::default();
    f.facet(OpenFacet::new(2, &[P, Q]).with(&[k, m]));
    f.facet(OpenFacet::new(1, &[L1]).with(&[i]));
    f.facet(OpenFacet::new(1, &[R1]));
    f.facet(OpenFacet::new(1, &[L2]));
    f.facet(OpenFacet::new(1, &[R2]).with(&[j]));
    f.arc(A1, B1);
    f.arc(A2, B2);
    f
}

/// Sign correcting the unsigned dual of the digon pair.
pub fn dr1_dual_sign(i: u32, j: u32) -> i64 {
    if (i + j) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn dr1(n: u32) -> Result<DualityCase> {
    use w1::*;
    if n < 2 {
        return domain("the digon web needs N >= 2");
    }
    let web = web_dr1()?;
    let edge_map = [L2, R2, L1, R1, P, Q];
    let vertex_map = [B2, A2, B1, A1];
    let mut basis = Vec::new();
    let mut dual = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..n - 1 {
                for m in 0..=k {
                    basis.push((format!("u[{i},{j};{k},{m}]"), single(dr1_u(i, j, k, m))));
                    let star = dr1_u(1 - j, 1 - i, n - 2 - m, n - 2 - k).relabel(&edge_map, &vertex_map);
                    dual.push((format!("u*[{i},{j};{k},{m}]"), scaled(single(star), dr1_dual_sign(i, j))));
                }
            }
        }
    }
    let mut lhs = OpenFoam::default();
    lhs.facet(OpenFacet::new(1, &[L1, L2]).with_chi(1));
    lhs.facet(OpenFacet::new(1, &[R1, R2]).with_chi(1));
    lhs.facet(OpenFacet::new(2, &[P]));
    lhs.facet(OpenFacet::new(2, &[Q]));
    lhs.arc(B1, A2);
    lhs.arc(B2, A1);
    let rhs = vec![(rat(1), dr1_u(0, 1, 0, 0)), (rat(-1), dr1_u(1, 0, 0, 0))];
    Ok(DualityCase { name: "DR1", web, basis, dual, lhs: single(lhs), rhs })
}

// The web with two (1,2)-digons on a simple circle. Digon 1 on top:
// v1 -> w1 with outer double edge d1 and inner simple edge s1; digon 2
// at the bottom: v2 -> w2 with outer double d2 and inner simple s2.
mod w2 {
    pub const D1: usize = 0;
    pub const S1: usize = 1;
    pub const D2: usize = 2;
    pub const S2: usize = 3;
    pub const P: usize = 4;
    pub const Q: usize = 5;
    pub const V1: usize = 0;
    pub const W1: usize = 1;
    pub const V2: usize = 2;
    pub const W2: usize = 3;
}

fn web_dr2() -> Result<PlanarWeb> {
    use w2::*;
    PlanarWeb::new(
        vec![2, 1, 2, 1, 1, 1],
        vec![[D1, Q, S1], [D1, S1, P], [P, S2, D2], [S2, Q, D2]],
        vec![false, true, false, true],
    )
}

/// Removal foam of both digons with dots on the three simple facets and
/// classes on the two double disks.
fn dr2_removal(s1: u32, f: u32, s2: u32, d1: &[u32], d2: &[u32]) -> OpenFoam {
    use w2::*;
    let mut foam = OpenFoam::default();
    foam.facet(OpenFacet::new(1, &[P, Q]).with(&[f]));
    foam.facet(OpenFacet::new(1, &[S1]).with(&[s1]));
    foam.facet(OpenFacet::new(2, &[D1]).with(d1));
    foam.facet(OpenFacet::new(1, &[S2]).with(&[s2]));
    foam.facet(OpenFacet::new(2, &[D2]).with(d2));
    foam.arc(V1, W1);
    foam.arc(V2, W2);
    foam
}

fn dr2_u(i: u32, k: u32, m: u32) -> OpenFoam {
    dr2_removal(i, k, 0, &[0, 0], &[m, 0])
}

pub fn dr2(n: u32) -> Result<DualityCase> {
    use w2::*;
    if n < 2 {
        return domain("the digon web needs N >= 2");
    }
    let web = web_dr2()?;
    let edge_map = [D2, S2, D1, S1, P, Q];
    let vertex_map = [W2, V2, W1, V1];
    let mut basis = Vec::new();
    let mut dual = Vec::new();
    for i in 0..n - 1 {
        for k in 0..n {
            for m in 0..n - 1 {
                basis.push((format!("u[{i},{k},{m}]"), single(dr2_u(i, k, m))));
                let star = dr2_u(n - 2 - m, n - 1 - k, n - 2 - i).relabel(&edge_map, &vertex_map);
                dual.push((format!("u*[{i},{k},{m}]"), single(star)));
            }
        }
    }
    let mut lhs = OpenFoam::default();
    lhs.facet(OpenFacet::new(1, &[P]));
    lhs.facet(OpenFacet::new(1, &[Q]));
    lhs.facet(OpenFacet::new(1, &[S1, S2]));
    lhs.facet(OpenFacet::new(2, &[D1, D2]));
    lhs.arc(W1, V2);
    lhs.arc(W2, V1);
    let mut rhs = Vec::new();
    for a in 0..n - 1 {
        for b in 0..n - 1 - a {
            rhs.push((rat(1), dr2_removal(a, b, n - 2 - a - b, &[0, 0], &[0, 0])));
        }
    }
    Ok(DualityCase { name: "DR2", web, basis, dual, lhs: single(lhs), rhs })
}

// The closure of a square: square S on top with corners v1 (top left),
// v2, v3, v4 (bottom left), simple edges t, b and double edges l, r; its
// reflection S' below with corners w1..w4; legs e1..e4 joining vi to wi,
// e3 and e4 straight down, e1 and e2 around the outside.
mod w3 {
    pub const T: usize = 0;
    pub const B: usize = 1;
    pub const L: usize = 2;
    pub const R: usize = 3;
    pub const TB: usize = 4;
    pub const BB: usize = 5;
    pub const LB: usize = 6;
    pub const RB: usize = 7;
    pub const E1: usize = 8;
    pub const E2: usize = 9;
    pub const E3: usize = 10;
    pub const E4: usize = 11;
    pub const V1: usize = 0;
    pub const V2: usize = 1;
    pub const V3: usize = 2;
    pub const V4: usize = 3;
    pub const W1: usize = 4;
    pub const W2: usize = 5;
    pub const W3: usize = 6;
    pub const W4: usize = 7;
}

fn web_sqr1() -> Result<PlanarWeb> {
    use w3::*;
    PlanarWeb::new(
        vec![1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 1, 1],
        vec![
            [T, E1, L],
            [E2, T, R],
            [R, B, E3],
            [B, L, E4],
            [TB, LB, E1],
            [RB, TB, E2],
            [E3, BB, RB],
            [BB, E4, LB],
        ],
        vec![true, false, true, false, false, true, false, true],
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Half {
    /// Vertical resolution: arcs along the double edges, a simple square.
    A,
    /// Horizontal resolution: arcs along the simple edges, a double square.
    B,
}

/// Foam with the given resolutions of the upper and lower square. `sq` are
/// the dots on the simple squares (upper, lower; only used for type A),
/// `legs` the dots on the facets containing e1, e2, e3, e4 in that order,
/// counted once per facet.
fn sq_foam(upper: Half, lower: Half, sq: [u32; 2], legs: &[(usize, u32)]) -> OpenFoam {
    use w3::*;
    let mut f = OpenFoam::default();
    let mut leg_sets: Vec<Vec<usize>> = vec![vec![E1], vec![E2], vec![E3], vec![E4]];
    let mut join = |a: usize, b: usize| {
        let ia = leg_sets.iter().position(|s| s.contains(&a)).unwrap();
        let ib = leg_sets.iter().position(|s| s.contains(&b)).unwrap();
        if ia != ib {
            let moved = leg_sets.remove(ib.max(ia));
            leg_sets[ib.min(ia)].extend(moved);
        }
    };
    match upper {
        Half::A => {
            f.facet(OpenFacet::new(1, &[T, B]).with(&[sq[0]]));
            f.facet(OpenFacet::new(2, &[L]));
            f.facet(OpenFacet::new(2, &[R]));
            f.arc(V1, V4);
            f.arc(V2, V3);
            join(E1, E4);
            join(E2, E3);
        }
        Half::B => {
            f.facet(OpenFacet::new(1, &[T]));
            f.facet(OpenFacet::new(1, &[B]));
            f.facet(OpenFacet::new(2, &[L, R]));
            f.arc(V1, V2);
            f.arc(V4, V3);
            join(E1, E2);
            join(E3, E4);
        }
    }
    match lower {
        Half::A => {
            f.facet(OpenFacet::new(1, &[TB, BB]).with(&[sq[1]]));
            f.facet(OpenFacet::new(2, &[LB]));
            f.facet(OpenFacet::new(2, &[RB]));
            f.arc(W4, W1);
            f.arc(W3, W2);
            join(E1, E4);
            join(E2, E3);
        }
        Half::B => {
            f.facet(OpenFacet::new(1, &[TB]));
            f.facet(OpenFacet::new(1, &[BB]));
            f.facet(OpenFacet::new(2, &[LB, RB]));
            f.arc(W4, W3);
            f.arc(W1, W2);
            join(E1, E2);
            join(E3, E4);
        }
    }
    for set in leg_sets {
        let mut facet = OpenFacet::new(1, &set);
        for &(e, d) in legs {
            if set.contains(&e) {
                facet = facet.with(&[d]);
            }
        }
        f.facet(facet);
    }
    f
}

fn sq_u(i: u32, j: u32) -> OpenFoam {
    sq_foam(Half::B, Half::B, [0, 0], &[(w3::E1, i), (w3::E3, j)])
}

fn sq_v(square: u32, other: u32) -> OpenFoam {
    sq_foam(Half::A, Half::B, [square, 0], &[(w3::E1, other)])
}

fn sq_w(square: u32, other: u32) -> OpenFoam {
    sq_foam(Half::B, Half::A, [0, square], &[(w3::E1, other)])
}

/// Both squares resolved vertically; dots on the upper and lower simple
/// squares first, then on the facets through e1 and e2.
fn sq_s(upper: u32, lower: u32, i: u32, j: u32) -> OpenFoam {
    sq_foam(Half::A, Half::A, [upper, lower], &[(w3::E1, i), (w3::E2, j)])
}

/// Sums over `a + b + c = t` of `f(a + b, c)`.
fn triple_sum(t: u32, mut f: impl FnMut(u32, u32) -> OpenFoam) -> Combo {
    let mut out = Vec::new();
    for a in 0..=t {
        for b in 0..=t - a {
            out.push((rat(1), f(a + b, t - a - b)));
        }
    }
    out
}

pub fn sqr1(n: u32) -> Result<DualityCase> {
    use w3::*;
    if n < 3 {
        return domain("the square web needs N >= 3");
    }
    let web = web_sqr1()?;
    let edge_map = [BB, TB, LB, RB, B, T, L, R, E4, E3, E2, E1];
    let vertex_map = [W4, W3, W2, W1, V4, V3, V2, V1];
    let hat = |f: OpenFoam| single(f.relabel(&edge_map, &vertex_map));
    let mut basis = Vec::new();
    let mut dual = Vec::new();
    for i in 0..n {
        for j in 0..n {
            basis.push((format!("u[{i},{j}]"), single(sq_u(i, j))));
            dual.push((format!("u*[{i},{j}]"), hat(sq_u(n - 1 - j, n - 1 - i))));
        }
    }
    for i in 0..n {
        for k in 0..n - 2 {
            basis.push((format!("v[{i},{k}]"), triple_sum(n - 3 - k, |ab, c| sq_v(c, ab + i))));
            dual.push((format!("v*[{i},{k}]"), scaled(hat(sq_w(k, n - 1 - i)), -1)));
        }
    }
    for i in 0..n {
        for k in 0..n - 2 {
            basis.push((format!("w[{i},{k}]"), triple_sum(n - 3 - k, |ab, c| sq_w(c, ab + i))));
            dual.push((format!("w*[{i},{k}]"), scaled(hat(sq_v(k, n - 1 - i)), -1)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n - 2 {
                for m in 0..n - 2 {
                    let mut terms = Vec::new();
                    for a in 0..=n - 3 - k {
                        for b in 0..=n - 3 - k - a {
                            let c = n - 3 - k - a - b;
                            for d in 0..=n - 3 - m {
                                for e in 0..=n - 3 - m - d {
                                    let f = n - 3 - m - d - e;
                                    terms.push((rat(1), sq_s(c, f, i + a + d, j + b + e)));
                                }
                            }
                        }
                    }
                    basis.push((format!("s[{i},{j},{k},{m}]"), terms));
                    dual.push((format!("s*[{i},{j},{k},{m}]"), hat(sq_s(m, k, n - 1 - i, n - 1 - j))));
                }
            }
        }
    }
    let mut lhs = OpenFoam::default();
    for e in [E1, E2, E3, E4] {
        lhs.facet(OpenFacet::new(1, &[e]));
    }
    lhs.facet(OpenFacet::new(1, &[T, TB]));
    lhs.facet(OpenFacet::new(1, &[B, BB]));
    lhs.facet(OpenFacet::new(2, &[L, LB]));
    lhs.facet(OpenFacet::new(2, &[R, RB]));
    for (v, w) in [(V1, W1), (V2, W2), (V3, W3), (V4, W4)] {
        lhs.arc(v, w);
    }
    let mut rhs = vec![(rat(-1), sq_u(0, 0))];
    for a in 0..=n - 3 {
        for b in 0..=n - 3 - a {
            for c in 0..=n - 3 - a - b {
                rhs.push((rat(1), sq_s(a, b, c, n - 3 - a - b - c)));
            }
        }
    }
    Ok(DualityCase { name: "SqR1", web, basis, dual, lhs: single(lhs), rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(c: &DualityCase, n: u32, dim: usize) {
        assert_eq!(c.dim(), dim, "{}", c.name);
        assert!(is_identity(&c.gram(n).unwrap()), "{} at N={n}", c.name);
        let (l, r) = c.relation_vectors(n).unwrap();
        assert_eq!(l, r, "{} at N={n}", c.name);
        assert!(l.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn digon_pair_bases_are_dual() {
        for n in 2..=5 {
            check(&dr1(n).unwrap(), n, (2 * n * (n - 1)) as usize);
        }
    }

    #[test]
    fn mixed_digon_bases_are_dual() {
        for n in 2..=5 {
            check(&dr2(n).unwrap(), n, (n * (n - 1) * (n - 1)) as usize);
        }
    }

    #[test]
    fn square_bases_are_dual() {
        for n in 3..=4 {
            let d = n * n + 2 * n * (n - 2) + n * n * (n - 2) * (n - 2);
            check(&sqr1(n).unwrap(), n, d as usize);
        }
    }

    #[test]
    fn literal_dual_signs_fail_where_corrected() {
        // Unsigned dual of the digon pair: diagonal of (-1)^(i+j).
        let c = dr1(3).unwrap();
        let g = c.gram(3).unwrap();
        for (a, (name, _)) in c.basis.iter().enumerate() {
            let odd = name.starts_with("u[0,1") || name.starts_with("u[1,0");
            let raw = &g[a][a] * rat(if odd { -1 } else { 1 });
            assert_eq!(raw, rat(if odd { -1 } else { 1 }));
        }
    }

    #[test]
    fn rejects_mismatched_sheets() {
        use w1::*;
        let web = web_dr1().unwrap();
        let mut bad = OpenFoam::default();
        bad.facet(OpenFacet::new(1, &[L1, R2]));
        bad.facet(OpenFacet::new(1, &[R1, L2]));
        bad.facet(OpenFacet::new(2, &[P]));
        bad.facet(OpenFacet::new(2, &[Q]));
        bad.arc(B1, A2);
        bad.arc(B2, A1);
        assert!(pairing(&web, &single(bad), &single(dr1_u(0, 0, 0, 0)), 3).is_err());
    }
}
