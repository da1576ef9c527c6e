//! Closed webs with simple and double edges, evaluated by MOY moves.
//!
//! A web is a rotation system: each trivalent vertex lists its three edges
//! counterclockwise. Evaluation removes circles, digon faces and square
//! faces, memoizing connected pieces by a canonical encoding of the
//! rotation system.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foameval::glue::PlanarWeb;
use crate::qlaurent::{qbinom, qint, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebCircle {
    pub label: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebVertex {
    /// Incident edge ids in counterclockwise order.
    pub halfedges: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebEdge {
    pub id: usize,
    pub label: u8,
    pub from: usize,
    pub to: usize,
    #[serde(default = "yes")]
    pub oriented: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Web {
    #[serde(default)]
    pub circles: Vec<WebCircle>,
    #[serde(default)]
    pub vertices: Vec<WebVertex>,
    #[serde(default)]
    pub edges: Vec<WebEdge>,
}

/// A broken web invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadLabel { edge: usize, label: u8 },
    DuplicateEdge(usize),
    UnknownEdge { vertex: usize, edge: usize },
    EndpointMismatch { edge: usize },
    VertexType { vertex: usize },
    Orientation { vertex: usize },
    Unoriented { edge: usize },
    NotPlanar { component: usize, euler: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadLabel { edge, label } => write!(f, "edge {edge} has label {label}, expected 1 or 2"),
            Violation::DuplicateEdge(e) => write!(f, "edge id {e} is used twice"),
            Violation::UnknownEdge { vertex, edge } => write!(f, "vertex {vertex} lists unknown edge {edge}"),
            Violation::EndpointMismatch { edge } => {
                write!(f, "edge {edge} is not listed exactly at its two endpoints")
            }
            Violation::VertexType { vertex } => {
                write!(f, "vertex {vertex} needs one double and two simple edges")
            }
            Violation::Orientation { vertex } => {
                write!(f, "vertex {vertex}: simple edges must both enter or both leave, the double edge the other way")
            }
            Violation::Unoriented { edge } => write!(f, "simple edge {edge} must be oriented"),
            Violation::NotPlanar { component, euler } => {
                write!(f, "component {component} has Euler characteristic {euler}, not 2")
            }
        }
    }
}

impl Web {
    pub fn circle(label: u8) -> Self {
        Web { circles: vec![WebCircle { label }], ..Default::default() }
    }

    /// Two vertices joined by two simple edges and one double edge.
    pub fn theta() -> Self {
        let e = |id, label, from, to| WebEdge { id, label, from, to, oriented: true };
        Web {
            circles: vec![],
            vertices: vec![WebVertex { halfedges: [0, 1, 2] }, WebVertex { halfedges: [0, 2, 1] }],
            edges: vec![e(0, 2, 1, 0), e(1, 1, 0, 1), e(2, 1, 0, 1)],
        }
    }

    /// Convert a rotation-system web whose split flags fix the orientation.
    pub fn from_planar(p: &PlanarWeb) -> Result<Self> {
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); p.labels.len()];
        for (v, r) in p.rotation.iter().enumerate() {
            for &e in r {
                ends[e].push(v);
            }
        }
        let mut edges = Vec::with_capacity(p.labels.len());
        for (id, (&label, vs)) in p.labels.iter().zip(&ends).enumerate() {
            let [a, b] = vs[..] else {
                return Err(Error::InvalidWeb(format!("edge {id} has {} endpoints", vs.len())));
            };
            // Simple edges leave split vertices; double edges leave merge vertices.
            let a_is_tail = (label == 1) == p.split[a];
            let (from, to) = if a_is_tail { (a, b) } else { (b, a) };
            edges.push(WebEdge { id, label, from, to, oriented: true });
        }
        let vertices = p.rotation.iter().map(|r| WebVertex { halfedges: *r }).collect();
        Ok(Web { circles: vec![], vertices, edges })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("webs serialize")
    }

    pub fn disjoint_union(&self, other: &Web) -> Web {
        let nv = self.vertices.len();
        let shift = self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        let mut out = self.clone();
        out.circles.extend(other.circles.iter().copied());
        for v in &other.vertices {
            out.vertices.push(WebVertex { halfedges: v.halfedges.map(|e| e + shift) });
        }
        for e in &other.edges {
            out.edges.push(WebEdge { id: e.id + shift, from: e.from + nv, to: e.to + nv, ..e.clone() });
        }
        out
    }

    /// Number of trivalent vertices plus circles: a crude size measure.
    pub fn size(&self) -> usize {
        self.vertices.len() + self.circles.len()
    }
}

/// Check the web invariants; every violation found is reported.
pub fn validate(w: &Web) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for c in &w.circles {
        if !(1..=2).contains(&c.label) {
            out.push(Violation::BadLabel { edge: usize::MAX, label: c.label });
        }
    }
    let mut index = HashMap::new();
    for (i, e) in w.edges.iter().enumerate() {
        if index.insert(e.id, i).is_some() {
            out.push(Violation::DuplicateEdge(e.id));
        }
        if !(1..=2).contains(&e.label) {
            out.push(Violation::BadLabel { edge: e.id, label: e.label });
        }
        if e.label == 1 && !e.oriented {
            out.push(Violation::Unoriented { edge: e.id });
        }
    }
    let mut seen: HashMap<usize, Vec<usize>> = HashMap::new();
    for (v, vx) in w.vertices.iter().enumerate() {
        let mut bad = false;
        for &e in &vx.halfedges {
            if !index.contains_key(&e) {
                out.push(Violation::UnknownEdge { vertex: v, edge: e });
                bad = true;
            }
            seen.entry(e).or_default().push(v);
        }
        if bad {
            continue;
        }
        let es: Vec<&WebEdge> = vx.halfedges.iter().map(|e| &w.edges[index[e]]).collect();
        let doubles: Vec<&&WebEdge> = es.iter().filter(|e| e.label == 2).collect();
        if doubles.len() != 1 || es.iter().filter(|e| e.label == 1).count() != 2 {
            out.push(Violation::VertexType { vertex: v });
            continue;
        }
        let ins = es.iter().filter(|e| e.label == 1 && e.to == v).count();
        let outs = es.iter().filter(|e| e.label == 1 && e.from == v).count();
        let d = doubles[0];
        let ok = (ins == 2 && d.from == v) || (outs == 2 && d.to == v);
        if !ok {
            out.push(Violation::Orientation { vertex: v });
        }
    }
    for e in &w.edges {
        let mut want = vec![e.from, e.to];
        want.sort_unstable();
        let mut got = seen.get(&e.id).cloned().unwrap_or_default();
        got.sort_unstable();
        if e.from == e.to || got != want {
            out.push(Violation::EndpointMismatch { edge: e.id });
        }
    }
    if out.is_empty() {
        let g = Graph::from_web(w);
        for (ci, comp) in g.components().iter().enumerate() {
            let faces = g.faces_of(comp).len() as i64;
            let (nv, ne) = (comp.len() as i64, g.edges_of(comp).len() as i64);
            let euler = nv - ne + faces;
            if euler != 2 {
                out.push(Violation::NotPlanar { component: ci, euler });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct E {
    label: u8,
    from: usize,
    to: usize,
}

/// Mutable working copy of a web, edges and vertices indexed densely.
#[derive(Clone, Debug)]
struct Graph {
    edges: Vec<Option<E>>,
    rot: Vec<Option<[usize; 3]>>,
    loops: [u32; 3],
}

type Dart = (usize, bool);

impl Graph {
    fn from_web(w: &Web) -> Self {
        let index: HashMap<usize, usize> = w.edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
        let mut loops = [0; 3];
        for c in &w.circles {
            loops[c.label as usize] += 1;
        }
        Graph {
            edges: w.edges.iter().map(|e| Some(E { label: e.label, from: e.from, to: e.to })).collect(),
            rot: w.vertices.iter().map(|v| Some(v.halfedges.map(|e| index[&e]))).collect(),
            loops,
        }
    }

    fn e(&self, i: usize) -> E {
        self.edges[i].expect("live edge")
    }

    fn r(&self, v: usize) -> [usize; 3] {
        self.rot[v].expect("live vertex")
    }

    fn live_vertices(&self) -> Vec<usize> {
        (0..self.rot.len()).filter(|&v| self.rot[v].is_some()).collect()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rot.len()];
        let mut out = Vec::new();
        for s in self.live_vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for e in self.r(v) {
                    let ed = self.e(e);
                    let u = if ed.from == v { ed.to } else { ed.from };
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn edges_of(&self, comp: &[usize]) -> Vec<usize> {
        let mut es: Vec<usize> = comp.iter().flat_map(|&v| self.r(v)).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    fn tail(&self, d: Dart) -> usize {
        let e = self.e(d.0);
        if d.1 {
            e.from
        } else {
            e.to
        }
    }

    fn head(&self, d: Dart) -> usize {
        let e = self.e(d.0);
        if d.1 {
            e.to
        } else {
            e.from
        }
    }

    /// Next dart of the face: turn to the next edge counterclockwise.
    fn next(&self, d: Dart) -> Dart {
        let h = self.head(d);
        let r = self.r(h);
        let i = r.iter().position(|&x| x == d.0).expect("edge at its head");
        let f = r[(i + 1) % 3];
        (f, self.e(f).from == h)
    }

    fn faces_of(&self, comp: &[usize]) -> Vec<Vec<Dart>> {
        let mut seen = HashMap::new();
        let mut faces = Vec::new();
        for e in self.edges_of(comp) {
            for dir in [true, false] {
                if seen.contains_key(&(e, dir)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (e, dir);
                while !seen.contains_key(&d) {
                    seen.insert(d, ());
                    face.push(d);
                    d = self.next(d);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Replace the removed vertices by strands: each removed vertex has one
    /// leg, and `pairs` joins the vertex whose leg enters to the vertex whose
    /// leg leaves.
    fn splice(&mut self, removed: &[usize], internal: &[usize], pairs: &[(usize, usize)]) {
        let leg = |g: &Graph, v: usize| -> usize {
            *g.r(v).iter().find(|e| !internal.contains(e)).expect("one leg per removed vertex")
        };
        let legs: HashMap<usize, usize> = removed.iter().map(|&v| (v, leg(self, v))).collect();
        let partner: HashMap<usize, usize> = pairs.iter().copied().collect();
        let label = self.e(legs[&removed[0]]).label;
        let mut used: Vec<usize> = Vec::new();
        let mut new_edges = Vec::new();
        for &start in removed {
            let l = legs[&start];
            let le = self.e(l);
            if le.to != start || removed.contains(&le.from) {
                continue;
            }
            let (x, first) = (le.from, l);
            used.push(l);
            let mut v = start;
            loop {
                let w = partner[&v];
                let out = legs[&w];
                used.push(out);
                let h = self.e(out).to;
                if removed.contains(&h) {
                    v = h;
                    continue;
                }
                new_edges.push((x, first, h, out));
                break;
            }
        }
        let mut loop_legs: Vec<usize> = legs.values().copied().filter(|l| !used.contains(l)).collect();
        loop_legs.sort_unstable();
        loop_legs.dedup();
        // Closed strands: each cycle passes through at least one leg.
        let mut cycles = 0;
        let mut done: Vec<usize> = Vec::new();
        for &l in &loop_legs {
            if done.contains(&l) {
                continue;
            }
            cycles += 1;
            let mut cur = l;
            loop {
                done.push(cur);
                let v = self.e(cur).to;
                let nxt = legs[&partner[&v]];
                if done.contains(&nxt) {
                    break;
                }
                cur = nxt;
            }
        }
        self.loops[label as usize] += cycles;
        for &e in internal.iter().chain(legs.values()) {
            self.edges[e] = None;
        }
        for &v in removed {
            self.rot[v] = None;
        }
        for (x, first, h, last) in new_edges {
            let id = self.edges.len();
            self.edges.push(Some(E { label, from: x, to: h }));
            for (v, old) in [(x, first), (h, last)] {
                let mut r = self.r(v);
                for slot in r.iter_mut() {
                    if *slot == old {
                        *slot = id;
                    }
                }
                self.rot[v] = Some(r);
            }
        }
    }

    /// Sub-graph induced on one component, reindexed, without loops.
    fn extract(&self, comp: &[usize]) -> Graph {
        let vmap: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let es = self.edges_of(comp);
        let emap: HashMap<usize, usize> = es.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Graph {
            edges: es
                .iter()
                .map(|&e| {
                    let x = self.e(e);
                    Some(E { label: x.label, from: vmap[&x.from], to: vmap[&x.to] })
                })
                .collect(),
            rot: comp.iter().map(|&v| Some(self.r(v).map(|e| emap[&e]))).collect(),
            loops: [0; 3],
        }
    }

    /// Lexicographically least traversal code over all starting darts.
    fn canonical(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for e in 0..self.edges.len() {
            if self.edges[e].is_none() {
                continue;
            }
            for dir in [true, false] {
                let code = self.code_from((e, dir));
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap_or_default()
    }

    fn code_from(&self, d: Dart) -> Vec<u32> {
        let mut id: HashMap<usize, u32> = HashMap::new();
        let mut order = vec![(self.tail(d), d.0)];
        id.insert(self.tail(d), 0);
        let mut code = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (v, start) = order[i];
            let r = self.r(v);
            let p = r.iter().position(|&x| x == start).expect("start edge at vertex");
            for k in 0..3 {
                let e = r[(p + k) % 3];
                let x = self.e(e);
                let (u, out) = if x.from == v { (x.to, 1) } else { (x.from, 0) };
                let next = id.len() as u32;
                let uid = *id.entry(u).or_insert_with(|| {
                    order.push((u, e));
                    next
                });
                code.extend([x.label as u32, out, uid]);
            }
            i += 1;
        }
        code
    }
}

enum Move {
    /// Two simple edges from a split vertex to a merge vertex.
    SimpleDigon { split: usize, merge: usize, edges: [usize; 2] },
    /// A double and a simple edge between the same two vertices.
    MixedDigon { merge: usize, split: usize, edges: [usize; 2] },
    /// Face bounded by double, simple, double, simple edges.
    Square { v: [usize; 4], edges: [usize; 4] },
    /// Three stacked I-shapes around a face with one double edge.
    FiveEdge(FivePattern),
}

/// Vertices and edges of an `X1 X2 X1` pattern, as drawn with strands going
/// up and the single strand on the right; `flip` marks the mirror drawing.
#[derive(Clone, Copy, Debug)]
struct FivePattern {
    verts: [usize; 6],
    internal: [usize; 6],
    /// Legs a, b, c entering and a', b', c' leaving, left to right.
    ins: [usize; 3],
    outs: [usize; 3],
    flip: bool,
}

impl Move {
    fn rank(&self) -> u8 {
        match self {
            Move::SimpleDigon { .. } | Move::MixedDigon { .. } => 0,
            Move::Square { .. } => 1,
            Move::FiveEdge(_) => 2,
        }
    }
}

/// Evaluation options: a step budget and an optional seed for a random move
/// order.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub budget: usize,
    pub seed: Option<u64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { budget: 200_000, seed: None }
    }
}

struct Evaluator {
    n: u32,
    memo: HashMap<Vec<u32>, LaurentPoly>,
    active: HashSet<Vec<u32>>,
    steps: usize,
    budget: usize,
    rng: Option<StdRng>,
    circle: [LaurentPoly; 3],
    digon2: LaurentPoly,
    digon_n1: LaurentPoly,
    square_n2: LaurentPoly,
}

impl Evaluator {
    fn new(n: u32, opts: &EvalOptions) -> Result<Self> {
        let n_i = n as i64;
        Ok(Evaluator {
            n,
            memo: HashMap::new(),
            active: HashSet::new(),
            steps: 0,
            budget: opts.budget,
            rng: opts.seed.map(StdRng::seed_from_u64),
            circle: [LaurentPoly::one(), qint(n_i)?, qbinom(n_i, 2)?],
            digon2: qint(2)?,
            digon_n1: if n >= 2 { qint(n_i - 1)? } else { LaurentPoly::zero() },
            square_n2: if n >= 3 { qint(n_i - 2)? } else { LaurentPoly::zero() },
        })
    }

    fn eval(&mut self, mut g: Graph) -> Result<LaurentPoly> {
        let mut factor = LaurentPoly::one();
        for label in 1..=2 {
            for _ in 0..g.loops[label] {
                factor = &factor * &self.circle[label];
            }
        }
        g.loops = [0; 3];
        let comps = g.components();
        for comp in comps {
            if factor.is_zero() {
                break;
            }
            let piece = g.extract(&comp);
            let v = self.eval_connected(piece)?;
            factor = &factor * &v;
        }
        Ok(factor)
    }

    fn eval_connected(&mut self, g: Graph) -> Result<LaurentPoly> {
        let key = g.canonical();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Irreducible(self.budget));
        }
        let mut moves = self.moves(&g);
        if moves.is_empty() || !self.active.insert(key.clone()) {
            return Err(Error::Irreducible(self.steps));
        }
        // Five-edge rewrites only when nothing else applies.
        moves.sort_by_key(Move::rank);
        let usable = moves.iter().take_while(|m| m.rank() / 2 == moves[0].rank() / 2).count();
        let pick = match &mut self.rng {
            Some(r) => r.gen_range(0..usable),
            None => 0,
        };
        let mut total = LaurentPoly::zero();
        for (coeff, next) in self.apply(&g, &moves[pick]) {
            let v = self.eval(next)?;
            total += &(&coeff * &v);
        }
        self.active.remove(&key);
        self.memo.insert(key, total.clone());
        Ok(total)
    }

    fn moves(&self, g: &Graph) -> Vec<Move> {
        let verts = g.live_vertices();
        let mut out = Vec::new();
        for face in g.faces_of(&verts) {
            let labels: Vec<u8> = face.iter().map(|d| g.e(d.0).label).collect();
            match face.len() {
                2 => {
                    let (a, b) = (face[0].0, face[1].0);
                    let edges = [a, b];
                    if labels == [1, 1] {
                        let s = g.e(a).from;
                        let m = g.e(a).to;
                        out.push(Move::SimpleDigon { split: s, merge: m, edges });
                    } else {
                        let d = if labels[0] == 2 { a } else { b };
                        let de = g.e(d);
                        out.push(Move::MixedDigon { merge: de.from, split: de.to, edges });
                    }
                }
                4 if labels == [2, 1, 2, 1] || labels == [1, 2, 1, 2] => {
                    let off = if labels[0] == 2 { 0 } else { 1 };
                    let ds: Vec<Dart> = (0..4).map(|k| face[(k + off) % 4]).collect();
                    // v[k] is the tail of dart k, so edge k joins v[k] and v[k+1].
                    let v = [g.tail(ds[0]), g.tail(ds[1]), g.tail(ds[2]), g.tail(ds[3])];
                    let mut uniq = v.to_vec();
                    uniq.sort_unstable();
                    uniq.dedup();
                    if uniq.len() == 4 {
                        out.push(Move::Square { v, edges: [ds[0].0, ds[1].0, ds[2].0, ds[3].0] });
                    }
                }
                4 if labels.iter().filter(|&&l| l == 2).count() == 1 => {
                    let d2 = face[labels.iter().position(|&l| l == 2).expect("one double")].0;
                    let es: Vec<usize> = face.iter().map(|d| d.0).collect();
                    if let Some(p) = five_pattern(g, d2, &es) {
                        out.push(Move::FiveEdge(p));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn apply(&self, g: &Graph, m: &Move) -> Vec<(LaurentPoly, Graph)> {
        match *m {
            Move::SimpleDigon { split, merge, edges } => {
                let mut h = g.clone();
                h.splice(&[split, merge], &edges, &[(split, merge)]);
                vec![(self.digon2.clone(), h)]
            }
            Move::MixedDigon { merge, split, edges } => {
                let mut h = g.clone();
                h.splice(&[merge, split], &edges, &[(merge, split)]);
                vec![(self.digon_n1.clone(), h)]
            }
            Move::Square { v, edges } => {
                // Legs enter at merge vertices and leave at split vertices.
                let is_in = |x: usize| {
                    let r = g.r(x);
                    let leg = *r.iter().find(|e| !edges.contains(e)).expect("leg");
                    g.e(leg).to == x
                };
                let pair = |a: usize, b: usize| if is_in(a) { (a, b) } else { (b, a) };
                let across_double = [pair(v[0], v[1]), pair(v[2], v[3])];
                let across_simple = [pair(v[1], v[2]), pair(v[3], v[0])];
                let mut a = g.clone();
                a.splice(&v, &edges, &across_simple);
                let mut b = g.clone();
                b.splice(&v, &edges, &across_double);
                vec![(LaurentPoly::one(), a), (self.square_n2.clone(), b)]
            }
            Move::FiveEdge(p) => {
                let minus = LaurentPoly::monomial(-1, 0);
                vec![
                    (LaurentPoly::one(), five_rewrite(g, &p, Replacement::Opposite)),
                    (LaurentPoly::one(), five_rewrite(g, &p, Replacement::SamePair)),
                    (minus, five_rewrite(g, &p, Replacement::OtherPair)),
                ]
            }
        }
    }
}

/// The other edge at `v` among the two not equal to `a` or `b`.
fn third(g: &Graph, v: usize, a: usize, b: usize) -> usize {
    *g.r(v).iter().find(|&&e| e != a && e != b).expect("trivalent")
}

/// Read an `X1 X2 X1` pattern off the double edge of its middle face.
fn five_pattern(g: &Graph, d2: usize, face: &[usize]) -> Option<FivePattern> {
    let (m2, s2) = (g.e(d2).from, g.e(d2).to);
    let rm = g.r(m2);
    let pm = rm.iter().position(|&e| e == d2)?;
    // Of the two simple edges at m2, the face edge comes from the split s1.
    let (x, y) = (rm[(pm + 1) % 3], rm[(pm + 2) % 3]);
    let rs = g.r(s2);
    let ps = rs.iter().position(|&e| e == d2)?;
    let (u, w) = (rs[(ps + 1) % 3], rs[(ps + 2) % 3]);
    for (b1, c, flip) in [(x, y, false), (y, x, true)] {
        // Standard drawing: at m2 the order is d2, b', c; at s2 it is d2, c', b''.
        let (c_out, b2) = if flip { (w, u) } else { (u, w) };
        let s1 = g.e(b1).from;
        let m3 = g.e(b2).to;
        let a1 = *g.r(s1).iter().find(|&&e| e != b1 && g.e(e).label == 1)?;
        if g.e(a1).to != m3 || ![a1, b1, b2].iter().all(|e| face.contains(e)) {
            continue;
        }
        let d1 = third(g, s1, a1, b1);
        let d3 = third(g, m3, a1, b2);
        let (m1, s3) = (g.e(d1).from, g.e(d3).to);
        let verts = [m1, s1, m2, s2, m3, s3];
        let mut uniq = verts.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != 6 {
            continue;
        }
        let r1 = g.r(m1);
        let p1 = r1.iter().position(|&e| e == d1)?;
        let (l1, l2) = (r1[(p1 + 1) % 3], r1[(p1 + 2) % 3]);
        let r3 = g.r(s3);
        let p3 = r3.iter().position(|&e| e == d3)?;
        let (o1, o2) = (r3[(p3 + 1) % 3], r3[(p3 + 2) % 3]);
        let (a, b, ao, bo) = if flip { (l2, l1, o1, o2) } else { (l1, l2, o2, o1) };
        return Some(FivePattern {
            verts,
            internal: [d1, a1, b1, d2, b2, d3],
            ins: [a, b, c],
            outs: [ao, bo, c_out],
            flip,
        });
    }
    None
}

#[derive(Clone, Copy)]
enum Replacement {
    /// `X2 X1 X2` for the pattern `X1 X2 X1`.
    Opposite,
    /// One I-shape on the pair merged by the outer double edges.
    SamePair,
    /// One I-shape on the other pair.
    OtherPair,
}

fn five_rewrite(g: &Graph, p: &FivePattern, kind: Replacement) -> Graph {
    let mut h = g.clone();
    for &v in &p.verts {
        h.rot[v] = None;
    }
    for &e in &p.internal {
        h.edges[e] = None;
    }
    let [a, b, c] = p.ins;
    let [ao, bo, co] = p.outs;
    let orient = |r: [usize; 3]| if p.flip { [r[0], r[2], r[1]] } else { r };
    let mut joins = Vec::new();
    {
        let h = &mut h;
        let vertex = |h: &mut Graph, r: [usize; 3]| {
            let v = h.rot.len();
            h.rot.push(Some(orient(r)));
            v
        };
        let new_edge = |h: &mut Graph, label: u8| {
            h.edges.push(Some(E { label, from: usize::MAX, to: usize::MAX }));
            h.edges.len() - 1
        };
        let set = |h: &mut Graph, e: usize, from: Option<usize>, to: Option<usize>| {
            let x = h.edges[e].as_mut().expect("live edge");
            if let Some(f) = from {
                x.from = f;
            }
            if let Some(t) = to {
                x.to = t;
            }
        };
        // An I-shape: merge (l, r), double edge, split into (l', r').
        let shape = |h: &mut Graph, l: usize, r: usize, lo: usize, ro: usize| {
            let d = new_edge(h, 2);
            let m = vertex(h, [d, l, r]);
            let s = vertex(h, [d, ro, lo]);
            set(h, d, Some(m), Some(s));
            set(h, l, None, Some(m));
            set(h, r, None, Some(m));
            set(h, lo, Some(s), None);
            set(h, ro, Some(s), None);
        };
        match kind {
            Replacement::Opposite => {
                let (b1, c1, b2) = (new_edge(h, 1), new_edge(h, 1), new_edge(h, 1));
                shape(h, b, c, b1, c1);
                shape(h, a, b1, ao, b2);
                shape(h, b2, c1, bo, co);
            }
            Replacement::SamePair => {
                shape(h, a, b, ao, bo);
                joins.push((c, co));
            }
            Replacement::OtherPair => {
                shape(h, b, c, bo, co);
                joins.push((a, ao));
            }
        }
    }
    for (e_in, e_out) in joins {
        if e_in == e_out {
            h.edges[e_in] = None;
            h.loops[1] += 1;
            continue;
        }
        let y = h.e(e_out).to;
        h.edges[e_in].as_mut().expect("live edge").to = y;
        let mut r = h.r(y);
        for slot in r.iter_mut() {
            if *slot == e_out {
                *slot = e_in;
            }
        }
        h.rot[y] = Some(r);
        h.edges[e_out] = None;
    }
    h
}

/// MOY polynomial of a valid web.
pub fn moy_eval(w: &Web, n: u32) -> Result<LaurentPoly> {
    moy_eval_with(w, n, &EvalOptions::default())
}

pub fn moy_eval_with(w: &Web, n: u32, opts: &EvalOptions) -> Result<LaurentPoly> {
    if let Err(vs) = validate(w) {
        let msg: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidWeb(msg.join("; ")));
    }
    if n < 2 {
        return crate::error::domain("webs need N >= 2");
    }
    let mut ev = Evaluator::new(n, opts)?;
    let v = ev.eval(Graph::from_web(w))?;
    debug_assert!(ev.n == n);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkpoly::{resolve, LinkDiagram, ResolutionState};

    /// Closure of a braid word read as stacked I-shapes (1-flattenings of
    /// positive crossings).
    fn closed_shapes(strands: usize, word: &[i32], extra: &[i32]) -> Web {
        let mut full = word.to_vec();
        full.extend_from_slice(extra);
        let d = LinkDiagram::from_braid(strands, &full).unwrap();
        let bits = full.iter().enumerate().map(|(i, g)| i < word.len() && *g > 0).collect();
        resolve(&d, &ResolutionState(bits)).unwrap()
    }

    #[test]
    fn hecke_relation_on_closures() {
        for extra in [&[][..], &[1], &[2, 2], &[-1, 2]] {
            for n in 2..6 {
                let ev = |w: &[i32]| moy_eval(&closed_shapes(3, w, extra), n).unwrap();
                assert_eq!(&ev(&[1, 2, 1]) + &ev(&[2]), &ev(&[2, 1, 2]) + &ev(&[1]), "extra {extra:?} N={n}");
            }
        }
    }

    #[test]
    fn five_edge_rewrite_preserves_value() {
        let mut found = [0usize; 2];
        for word in [[1, 2, 1], [2, 1, 2]] {
            for extra in [&[][..], &[1], &[2], &[-1, -2], &[2, -1, 2]] {
                let w = closed_shapes(3, &word, extra);
                for n in 2..5 {
                    let mut ev = Evaluator::new(n, &EvalOptions::default()).unwrap();
                    let g = Graph::from_web(&w);
                    let want = ev.eval(g.clone()).unwrap();
                    let comps = g.components();
                    for comp in comps {
                        let piece = g.extract(&comp);
                        let others: LaurentPoly = {
                            let mut rest = g.clone();
                            for &v in &comp {
                                rest.rot[v] = None;
                            }
                            for e in g.edges_of(&comp) {
                                rest.edges[e] = None;
                            }
                            ev.eval(rest).unwrap()
                        };
                        for m in ev.moves(&piece) {
                            let Move::FiveEdge(p) = m else { continue };
                            found[p.flip as usize] += 1;
                            let mut total = LaurentPoly::zero();
                            for (c, h) in ev.apply(&piece, &m) {
                                total += &(&c * &ev.eval(h).unwrap());
                            }
                            assert_eq!(&total * &others, want, "{word:?} {extra:?} N={n}");
                        }
                    }
                }
            }
        }
        assert!(found[0] > 0 && found[1] > 0, "{found:?}");
    }

    #[test]
    fn canonical_form_ignores_numbering() {
        let w = closed_shapes(3, &[1, 2, 1, 2], &[]);
        let mut v = w.clone();
        let nv = v.vertices.len();
        for e in &mut v.edges {
            e.id += 10;
            e.from = nv - 1 - e.from;
            e.to = nv - 1 - e.to;
        }
        v.vertices.reverse();
        for x in &mut v.vertices {
            x.halfedges = x.halfedges.map(|e| e + 10);
            x.halfedges.rotate_left(1);
        }
        assert_eq!(Graph::from_web(&w).canonical(), Graph::from_web(&v).canonical());
        assert_eq!(moy_eval(&w, 4).unwrap(), moy_eval(&v, 4).unwrap());
    }
}
