//! Foams from the empty web to a closed planar web, and their pairing.
//!
//! A foam `u: empty -> G` is stored combinatorially: facets know the web
//! edges on their boundary and their Euler characteristic, singular arcs
//! know their two endpoint vertices. The cyclic order of the three sheets
//! along an arc is read off the planar rotation system of `G`, which also
//! checks that every arc joins the right sheets. Pairing `<u, v>` glues `u`
//! below the plane to the mirror image of `v` above it.

use num_traits::Zero;

use super::vfoam::{eval_vfoam, Circle, Facet, VFoam};
use crate::error::{domain, Error, Result};
use crate::polyring::{rat, Rational};
use crate::symmetric::{part, SchurSum};

/// Planar web with trivalent vertices, edges listed counterclockwise.
/// `split[v]` holds when the double edge at `v` points into `v`.
#[derive(Clone, Debug)]
pub struct PlanarWeb {
    pub labels: Vec<u8>,
    pub rotation: Vec<[usize; 3]>,
    pub split: Vec<bool>,
}

impl PlanarWeb {
    pub fn new(labels: Vec<u8>, rotation: Vec<[usize; 3]>, split: Vec<bool>) -> Result<Self> {
        if split.len() != rotation.len() {
            return Err(Error::InvalidWeb("one vertex type per vertex".into()));
        }
        let mut seen = vec![0usize; labels.len()];
        for (v, rot) in rotation.iter().enumerate() {
            let doubles = rot.iter().filter(|&&e| labels.get(e) == Some(&2)).count();
            if doubles != 1 || rot.iter().any(|&e| e >= labels.len()) {
                return Err(Error::InvalidWeb(format!("vertex {v} needs one double and two simple edges")));
            }
            for &e in rot {
                seen[e] += 1;
            }
        }
        if let Some(e) = seen.iter().position(|&c| c != 2) {
            return Err(Error::InvalidWeb(format!("edge {e} must have two endpoints")));
        }
        for (v, rot) in rotation.iter().enumerate() {
            for &e in rot {
                if labels[e] == 2 {
                    let other = rotation.iter().enumerate().position(|(w, r)| w != v && r.contains(&e));
                    if other.map(|w| split[w]) != Some(!split[v]) {
                        return Err(Error::InvalidWeb(format!("double edge {e} must join a split and a merge")));
                    }
                }
            }
        }
        Ok(PlanarWeb { labels, rotation, split })
    }

    fn double_at(&self, v: usize) -> usize {
        self.rotation[v].iter().position(|&e| self.labels[e] == 2).expect("validated")
    }
}

#[derive(Clone, Debug)]
pub struct OpenFacet {
    pub k: u8,
    pub chi: i32,
    pub dec: SchurSum,
    pub edges: Vec<usize>,
}

impl OpenFacet {
    pub fn new(k: u8, edges: &[usize]) -> Self {
        OpenFacet { k, chi: 1, dec: SchurSum::one(k as usize), edges: edges.to_vec() }
    }

    pub fn with_chi(mut self, chi: i32) -> Self {
        self.chi = chi;
        self
    }

    pub fn with(mut self, dec: &[u32]) -> Self {
        self.dec = self.dec.mul(&SchurSum::single(part(dec)));
        self
    }

    pub fn with_class(mut self, dec: &SchurSum) -> Self {
        self.dec = self.dec.mul(dec);
        self
    }
}

/// Foam from the empty web to a closed planar web. Closed singular circles
/// inside the foam reference local facet indices.
#[derive(Clone, Debug, Default)]
pub struct OpenFoam {
    pub facets: Vec<OpenFacet>,
    pub arcs: Vec<(usize, usize)>,
    pub circles: Vec<Circle>,
}

impl OpenFoam {
    pub fn facet(&mut self, f: OpenFacet) -> usize {
        self.facets.push(f);
        self.facets.len() - 1
    }

    pub fn arc(&mut self, a: usize, b: usize) {
        self.arcs.push((a, b));
    }

    /// Multiply the decoration of the facet bounded by web edge `e`.
    pub fn decorate_edge(&mut self, e: usize, dec: &SchurSum) -> Result<()> {
        let f = self
            .facets
            .iter()
            .position(|f| f.edges.contains(&e))
            .ok_or_else(|| Error::Domain(format!("no facet on edge {e}")))?;
        self.facets[f].dec = self.facets[f].dec.mul(dec);
        Ok(())
    }

    /// Transport along a symmetry of the web given on edges and vertices.
    pub fn relabel(&self, edge_map: &[usize], vertex_map: &[usize]) -> OpenFoam {
        OpenFoam {
            facets: self
                .facets
                .iter()
                .map(|f| OpenFacet { edges: f.edges.iter().map(|&e| edge_map[e]).collect(), ..f.clone() })
                .collect(),
            arcs: self.arcs.iter().map(|&(a, b)| (vertex_map[a], vertex_map[b])).collect(),
            circles: self.circles.clone(),
        }
    }

    fn edge_facets(&self, web: &PlanarWeb) -> Result<Vec<usize>> {
        let mut of = vec![usize::MAX; web.labels.len()];
        for (i, f) in self.facets.iter().enumerate() {
            for &e in &f.edges {
                if e >= of.len() || of[e] != usize::MAX {
                    return domain(format!("edge {e} bounds zero or several facets"));
                }
                if web.labels[e] != f.k {
                    return domain(format!("edge {e} of label {} on a facet of thickness {}", web.labels[e], f.k));
                }
                of[e] = i;
            }
        }
        if let Some(e) = of.iter().position(|&f| f == usize::MAX) {
            return domain(format!("edge {e} bounds no facet"));
        }
        Ok(of)
    }

    fn arc_at(&self, web: &PlanarWeb) -> Result<Vec<usize>> {
        let mut at = vec![usize::MAX; web.rotation.len()];
        for (i, &(a, b)) in self.arcs.iter().enumerate() {
            if web.split.get(a) == web.split.get(b) {
                return domain(format!("arc {a}-{b} must join a split and a merge vertex"));
            }
            for v in [a, b] {
                if v >= at.len() || at[v] != usize::MAX {
                    return domain(format!("vertex {v} is the end of zero or several arcs"));
                }
                at[v] = i;
            }
        }
        if let Some(v) = at.iter().position(|&a| a == usize::MAX) {
            return domain(format!("vertex {v} is not the end of an arc"));
        }
        Ok(at)
    }
}

/// Facets in the roles (first simple, second simple, double) along an arc
/// traversed from `start` to `end`, for a foam below (`below`) or above
/// the plane of the web.
fn roles(web: &PlanarWeb, of: &[usize], start: usize, end: usize, below: bool) -> Result<[usize; 3]> {
    let pick = |v: usize, ccw: bool| -> [usize; 3] {
        let rot = web.rotation[v];
        let d = web.double_at(v);
        let (a, b) = if ccw { ((d + 1) % 3, (d + 2) % 3) } else { ((d + 2) % 3, (d + 1) % 3) };
        [of[rot[a]], of[rot[b]], of[rot[d]]]
    };
    let at_start = pick(start, !below);
    let at_end = pick(end, below);
    if at_start != at_end {
        return domain(format!(
            "the sheets of the arc {start}-{end} do not match the planar order of the web"
        ));
    }
    Ok(at_start)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Glue `u` (below the web) to the mirror image of `v` (above it).
pub fn glue(web: &PlanarWeb, u: &OpenFoam, v: &OpenFoam) -> Result<VFoam> {
    let (ofu, ofv) = (u.edge_facets(web)?, v.edge_facets(web)?);
    let (atu, atv) = (u.arc_at(web)?, v.arc_at(web)?);
    let nu = u.facets.len();
    let total = nu + v.facets.len();
    let mut dsu = Dsu((0..total).collect());
    for e in 0..web.labels.len() {
        dsu.union(ofu[e], nu + ofv[e]);
    }
    let all: Vec<&OpenFacet> = u.facets.iter().chain(v.facets.iter()).collect();
    let mut root_index = vec![usize::MAX; total];
    let mut foam = VFoam::new();
    let mut chi = Vec::new();
    for i in 0..total {
        let r = dsu.find(i);
        if root_index[r] == usize::MAX {
            root_index[r] = foam.facet(Facet::new(all[i].k, 0, SchurSum::one(all[i].k as usize)));
            chi.push(0i32);
        }
        let j = root_index[r];
        foam.decorate(j, &all[i].dec);
        chi[j] += all[i].chi;
    }
    for e in 0..web.labels.len() {
        chi[root_index[dsu.find(ofu[e])]] -= 1;
    }
    let idx = |dsu: &mut Dsu, local: usize| root_index[dsu.find(local)];

    for c in &u.circles {
        let c = map_circle(c, |f| idx(&mut dsu, f), false);
        foam.circle(c);
    }
    for c in &v.circles {
        let c = map_circle(c, |f| idx(&mut dsu, nu + f), true);
        foam.circle(c);
    }

    let mut used = vec![false; u.arcs.len()];
    for start_arc in 0..u.arcs.len() {
        if used[start_arc] {
            continue;
        }
        let (a, b) = u.arcs[start_arc];
        let origin = if web.split[a] { a } else { b };
        let mut vertex = origin;
        let mut from_u = true;
        let mut circle_roles: Option<[usize; 3]> = None;
        loop {
            let (arcs, at, of, offset) = if from_u { (&u.arcs, &atu, &ofu, 0) } else { (&v.arcs, &atv, &ofv, nu) };
            let k = at[vertex];
            if from_u {
                used[k] = true;
            }
            let (a, b) = arcs[k];
            let next = if a == vertex { b } else { a };
            let local = roles(web, of, vertex, next, from_u)?;
            let glob = local.map(|f| idx(&mut dsu, offset + f));
            match circle_roles {
                None => circle_roles = Some(glob),
                Some(r) if r == glob => {}
                Some(_) => return domain("singular circle with inconsistent sheet order"),
            }
            vertex = next;
            from_u = !from_u;
            if vertex == origin && from_u {
                break;
            }
        }
        let [first, second, double] = circle_roles.expect("nonempty");
        foam.circle(Circle::T112 { first, second, double });
    }

    let mut holes = vec![0i32; foam.facets.len()];
    for c in &foam.circles {
        let slots = match *c {
            Circle::T112 { first, second, double } => [first, second, double],
            Circle::T123 { simple, double, triple, .. } => [simple, double, triple],
        };
        for s in slots {
            holes[s] += 1;
        }
    }
    for (j, f) in foam.facets.iter_mut().enumerate() {
        let twice_genus = 2 - holes[j] - chi[j];
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return domain(format!("glued facet {j} has Euler characteristic {} with {} holes", chi[j], holes[j]));
        }
        f.genus = (twice_genus / 2) as u32;
    }
    Ok(foam)
}

fn map_circle(c: &Circle, mut f: impl FnMut(usize) -> usize, mirrored: bool) -> Circle {
    match *c {
        Circle::T112 { first, second, double } => {
            let (a, b) = if mirrored { (second, first) } else { (first, second) };
            Circle::T112 { first: f(a), second: f(b), double: f(double) }
        }
        Circle::T123 { simple, double, triple, orient } => Circle::T123 {
            simple: f(simple),
            double: f(double),
            triple: f(triple),
            orient: if mirrored { -orient } else { orient },
        },
    }
}

/// Formal rational combination of foams with the same boundary.
pub type Combo = Vec<(Rational, OpenFoam)>;

pub fn single(f: OpenFoam) -> Combo {
    vec![(rat(1), f)]
}

/// Bilinear extension of `eval(glue(u, v))`.
pub fn pairing(web: &PlanarWeb, u: &Combo, v: &Combo, n: u32) -> Result<Rational> {
    let mut total = Rational::zero();
    for (a, x) in u {
        for (b, y) in v {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            total += a * b * eval_vfoam(&glue(web, x, y)?, n)?;
        }
    }
    Ok(total)
}
