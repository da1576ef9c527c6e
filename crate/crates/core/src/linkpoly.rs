//! Link diagrams as PD codes and their sl(N) polynomial.
//!
//! `X[i,j,k,l]` lists the four arcs at a crossing counterclockwise, starting
//! with the incoming under-arc; `k` is the outgoing under-arc. The direction
//! of the over-strand is propagated from the under-strands of the diagram.
//! Components that never pass under fall back to the label convention: the
//! over-strand runs `j -> l` when `l = j + 1` or `j - l > 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::qlaurent::LaurentPoly;
use crate::webcalc::{moy_eval, Web, WebCircle, WebEdge, WebVertex};

/// Position of a crossing entry: 0 = under in, 1 = j, 2 = under out, 3 = l.
type Pos = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    pub crossings: Vec<[u64; 4]>,
    pub unknots: usize,
    /// Position (1 or 3) where the over-strand enters, per crossing.
    over_in: Vec<Pos>,
}

/// Positive crossings enter the over-strand at position `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<[u64; 4]>, unknots: usize) -> Result<Self> {
        let over_in = orient(&crossings)?;
        Ok(LinkDiagram { crossings, unknots, over_in })
    }

    /// Parse `X[a,b,c,d]` and `U` entries separated by commas.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("invalid PD: {m}"));
        let mut crossings = Vec::new();
        let mut unknots = 0;
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix('U') {
                unknots += 1;
                rest = r;
            } else if let Some(r) = rest.strip_prefix("X[") {
                let end = r.find(']').ok_or_else(|| bad("missing ]"))?;
                let nums: Vec<u64> = r[..end]
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| bad(&format!("bad label {:?}", s.trim()))))
                    .collect::<Result<_>>()?;
                let x: [u64; 4] = nums.try_into().map_err(|_| bad("a crossing needs four labels"))?;
                crossings.push(x);
                rest = &r[end + 1..];
            } else {
                return Err(bad(&format!("unexpected text {rest:?}")));
            }
        }
        if crossings.is_empty() && unknots == 0 {
            return Err(bad("empty diagram"));
        }
        Self::new(crossings, unknots)
    }

    /// Closure of a braid on `strands` strands; generator `+i` is the
    /// positive crossing of strands i and i+1, `-i` its inverse.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Self> {
        if strands == 0 {
            return domain("a braid needs at least one strand");
        }
        let mut cur: Vec<u64> = (1..=strands as u64).collect();
        let mut next = strands as u64 + 1;
        let mut touched = vec![false; strands];
        let mut crossings = Vec::new();
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return domain(format!("generator {g} out of range for {strands} strands"));
            }
            let (a, b) = (cur[i - 1], cur[i]);
            let (c, d) = (next, next + 1);
            next += 2;
            // a enters bottom left and leaves top right as d; b goes to c.
            crossings.push(if g > 0 { [b, d, c, a] } else { [a, b, d, c] });
            cur[i - 1] = c;
            cur[i] = d;
            touched[i - 1] = true;
            touched[i] = true;
        }
        let close: HashMap<u64, u64> =
            cur.iter().enumerate().filter(|(p, _)| touched[*p]).map(|(p, &l)| (l, p as u64 + 1)).collect();
        for x in &mut crossings {
            for l in x.iter_mut() {
                if let Some(&m) = close.get(l) {
                    *l = m;
                }
            }
        }
        let unknots = touched.iter().filter(|t| !**t).count();
        Self::new(crossings, unknots)
    }

    pub fn sign(&self, c: usize) -> Sign {
        if self.over_in[c] == 3 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn n_plus(&self) -> usize {
        (0..self.crossings.len()).filter(|&c| self.sign(c) == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    /// Switch every crossing.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.over_in)
            .map(|(&[i, j, k, l], &o)| if o == 3 { [l, i, j, k] } else { [j, k, l, i] })
            .collect();
        LinkDiagram::new(crossings, self.unknots).expect("mirror of a valid diagram")
    }

    pub fn components(&self) -> usize {
        let arcs = arc_ends(&self.crossings).expect("validated");
        let mut seen: HashMap<u64, bool> = HashMap::new();
        let mut count = self.unknots;
        for &a in arcs.keys() {
            if seen.contains_key(&a) {
                continue;
            }
            count += 1;
            let mut cur = a;
            while !seen.contains_key(&cur) {
                seen.insert(cur, true);
                let (c, p) = self.head(cur, &arcs);
                let out = if p == 0 { 2 } else { 4 - p };
                cur = self.crossings[c][out];
            }
        }
        count
    }

    /// Crossing and position where the arc ends.
    fn head(&self, a: u64, arcs: &HashMap<u64, [(usize, Pos); 2]>) -> (usize, Pos) {
        let ends = arcs[&a];
        *ends
            .iter()
            .find(|&&(c, p)| p == 0 || p == self.over_in[c])
            .expect("each arc has a head")
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        parts.extend(std::iter::repeat_n("U".to_string(), self.unknots));
        write!(f, "{}", parts.join(","))
    }
}

fn arc_ends(crossings: &[[u64; 4]]) -> Result<HashMap<u64, [(usize, Pos); 2]>> {
    let mut occ: HashMap<u64, Vec<(usize, Pos)>> = HashMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (p, &l) in x.iter().enumerate() {
            occ.entry(l).or_default().push((c, p));
        }
    }
    occ.into_iter()
        .map(|(l, v)| match v[..] {
            [a, b] => Ok((l, [a, b])),
            _ => Err(Error::Parse(format!("invalid PD: arc {l} occurs {} times", v.len()))),
        })
        .collect()
}

/// Decide at each crossing where the over-strand enters.
fn orient(crossings: &[[u64; 4]]) -> Result<Vec<Pos>> {
    let arcs = arc_ends(crossings)?;
    let n = crossings.len();
    let bad = |m: String| Error::Parse(format!("invalid PD: {m}"));
    // For each crossing end (c, p): is it the head of its arc?
    let mut is_head: HashMap<(usize, Pos), bool> = HashMap::new();
    let mut stack: Vec<(usize, Pos, bool)> = Vec::new();
    for c in 0..n {
        stack.push((c, 0, true));
        stack.push((c, 2, false));
    }
    let mut seed = 0;
    loop {
        while let Some((c, p, head)) = stack.pop() {
            if let Some(&h) = is_head.get(&(c, p)) {
                if h != head {
                    return Err(bad(format!("inconsistent orientation at arc {}", crossings[c][p])));
                }
                continue;
            }
            is_head.insert((c, p), head);
            // The strand passes straight through the crossing.
            stack.push((c, (p + 2) % 4, !head));
            let ends = arcs[&crossings[c][p]];
            let other = if ends[0] == (c, p) { ends[1] } else { ends[0] };
            stack.push((other.0, other.1, !head));
        }
        while seed < n && is_head.contains_key(&(seed, 1)) {
            seed += 1;
        }
        if seed == n {
            break;
        }
        let [_, j, _, l] = crossings[seed];
        let forward = l == j + 1 || j > l + 1;
        stack.push((seed, 1, !forward));
    }
    Ok((0..n).map(|c| if is_head[&(c, 1)] { 1 } else { 3 }).collect())
}

/// One bit per crossing: false for the 0-flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionState(pub Vec<bool>);

impl ResolutionState {
    pub fn from_index(crossings: usize, index: u64) -> Self {
        ResolutionState((0..crossings).map(|c| index >> c & 1 == 1).collect())
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }
}

#[derive(Clone, Copy)]
enum Ref {
    Arc(u64),
    Double(usize),
}

/// The web of a complete flattening.
pub fn resolve(d: &LinkDiagram, s: &ResolutionState) -> Result<Web> {
    if s.0.len() != d.crossings.len() {
        return domain("state length differs from the crossing count");
    }
    let arcs = arc_ends(&d.crossings)?;
    // Per crossing: None for a smoothing, otherwise (merge, split) vertex ids.
    let mut verts: Vec<[Ref; 3]> = Vec::new();
    let mut fused: Vec<Option<(usize, usize)>> = Vec::with_capacity(d.crossings.len());
    let mut smooth_next: HashMap<u64, u64> = HashMap::new();
    let mut dbl = 0;
    for (c, x) in d.crossings.iter().enumerate() {
        let o_in = d.over_in[c];
        let o_out = 4 - o_in;
        let double = s.0[c] == (d.sign(c) == Sign::Positive);
        if double {
            let ins = if o_in == 3 { [3, 0] } else { [0, 1] };
            let outs = if o_out == 1 { [1, 2] } else { [2, 3] };
            let m = verts.len();
            verts.push([Ref::Arc(x[ins[0]]), Ref::Arc(x[ins[1]]), Ref::Double(dbl)]);
            verts.push([Ref::Arc(x[outs[0]]), Ref::Arc(x[outs[1]]), Ref::Double(dbl)]);
            dbl += 1;
            fused.push(Some((m, m + 1)));
        } else {
            smooth_next.insert(x[0], x[o_out]);
            smooth_next.insert(x[o_in], x[2]);
            fused.push(None);
        }
    }
    let mut edges: Vec<WebEdge> = fused
        .iter()
        .flatten()
        .enumerate()
        .map(|(id, &(m, s))| WebEdge { id, label: 2, from: m, to: s, oriented: true })
        .collect();
    let mut start_edge: HashMap<u64, usize> = HashMap::new();
    let mut end_edge: HashMap<u64, usize> = HashMap::new();
    let mut used: HashMap<u64, ()> = HashMap::new();
    let tail_vertex = |a: u64| -> Option<usize> {
        let ends = arcs[&a];
        let (c, _) = *ends.iter().find(|&&(c, p)| !(p == 0 || p == d.over_in[c]))?;
        fused[c].map(|(_, s)| s)
    };
    let mut sorted_arcs: Vec<u64> = arcs.keys().copied().collect();
    sorted_arcs.sort_unstable();
    for &a in &sorted_arcs {
        let Some(from) = tail_vertex(a) else { continue };
        let mut cur = a;
        loop {
            used.insert(cur, ());
            let (c, _) = d.head(cur, &arcs);
            match fused[c] {
                Some((m, _)) => {
                    let id = edges.len();
                    edges.push(WebEdge { id, label: 1, from, to: m, oriented: true });
                    start_edge.insert(a, id);
                    end_edge.insert(cur, id);
                    break;
                }
                None => cur = smooth_next[&cur],
            }
        }
    }
    let mut circles = d.unknots;
    for &a in &sorted_arcs {
        if used.contains_key(&a) {
            continue;
        }
        circles += 1;
        let mut cur = a;
        while used.insert(cur, ()).is_none() {
            cur = smooth_next[&cur];
        }
    }
    let vertices = verts
        .iter()
        .enumerate()
        .map(|(v, r)| {
            let merge = v % 2 == 0;
            WebVertex {
                halfedges: r.map(|x| match x {
                    Ref::Double(k) => k,
                    Ref::Arc(a) if merge => end_edge[&a],
                    Ref::Arc(a) => start_edge[&a],
                }),
            }
        })
        .collect();
    Ok(Web { circles: vec![WebCircle { label: 1 }; circles], vertices, edges })
}

fn normalization(d: &LinkDiagram, n: u32) -> LaurentPoly {
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let shift = (n as i64 - 1) * np - n as i64 * nm;
    LaurentPoly::monomial(if nm % 2 == 0 { 1 } else { -1 }, shift)
}

fn state_values(d: &LinkDiagram, n: u32) -> Result<Vec<(usize, LaurentPoly)>> {
    let c = d.crossings.len();
    if c > 20 {
        return domain(format!("{c} crossings is beyond the supported envelope"));
    }
    (0..1u64 << c)
        .into_par_iter()
        .map(|i| {
            let s = ResolutionState::from_index(c, i);
            let w = resolve(d, &s)?;
            Ok((s.weight(), moy_eval(&w, n)?))
        })
        .collect()
}

/// Sum over flattenings; a 1-flattening contributes a factor -q.
pub fn state_sum(d: &LinkDiagram, n: u32) -> Result<LaurentPoly> {
    let mut total = LaurentPoly::zero();
    for (w, v) in state_values(d, n)? {
        let sign = if w % 2 == 0 { 1 } else { -1 };
        total += &v.scale(&BigInt::from(sign)).shift(w as i64);
    }
    Ok(&total * &normalization(d, n))
}

/// Graded Euler characteristic of the shifted cube of flattenings.
pub fn euler_characteristic(d: &LinkDiagram, n: u32) -> Result<LaurentPoly> {
    let c = d.crossings.len();
    let mut by_degree = vec![LaurentPoly::zero(); c + 1];
    for (w, v) in state_values(d, n)? {
        by_degree[w] += &v;
    }
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let base = (n as i64 - 1) * np - n as i64 * nm;
    let mut total = LaurentPoly::zero();
    for (i, chain) in by_degree.into_iter().enumerate() {
        let sign = if (i as i64 - nm).rem_euclid(2) == 0 { 1 } else { -1 };
        total += &(&LaurentPoly::monomial(sign, base + i as i64) * &chain);
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct SkeinReport {
    pub pass: bool,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

impl fmt::Display for SkeinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "skein: {verdict}\n  lhs = {}\n  rhs = {}", self.lhs, self.rhs)
    }
}

/// q^N P(d_minus) - q^-N P(d_plus) = (q - q^-1) P(d_zero).
pub fn skein_check(d_plus: &LinkDiagram, d_minus: &LinkDiagram, d_zero: &LinkDiagram, n: u32) -> Result<SkeinReport> {
    let n_i = n as i64;
    let lhs = &state_sum(d_minus, n)?.shift(n_i) - &state_sum(d_plus, n)?.shift(-n_i);
    let q_minus = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    let rhs = &q_minus * &state_sum(d_zero, n)?;
    Ok(SkeinReport { pass: lhs == rhs, lhs, rhs })
}

pub const REIDEMEISTER_PAIRS: [&str; 5] = ["R1+", "R1-", "R2", "R2b", "R3"];

/// Built-in pairs of diagrams related by one Reidemeister move.
pub fn reidemeister_pair(id: &str) -> Result<(LinkDiagram, LinkDiagram)> {
    let b = LinkDiagram::from_braid;
    Ok(match id {
        "R1+" => (b(2, &[1])?, LinkDiagram::parse("U")?),
        "R1-" => (b(2, &[-1])?, LinkDiagram::parse("U")?),
        "R2" => (b(2, &[1, -1])?, b(2, &[])?),
        "R2b" => (b(3, &[1, 1, 2, -2])?, b(3, &[1, 1])?),
        "R3" => (b(3, &[1, 2, 1])?, b(3, &[2, 1, 2])?),
        _ => return domain(format!("unknown Reidemeister pair {id:?}")),
    })
}

#[derive(Clone, Debug)]
pub struct ReidemeisterReport {
    pub id: String,
    pub n: u32,
    pub pass: bool,
    pub left: LaurentPoly,
    pub right: LaurentPoly,
}

impl fmt::Display for ReidemeisterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} N={}: {verdict}", self.id, self.n)?;
        if !self.pass {
            write!(f, "\n  left  = {}\n  right = {}", self.left, self.right)?;
        }
        Ok(())
    }
}

pub fn verify_reidemeister(id: &str, n: u32) -> Result<ReidemeisterReport> {
    let (a, b) = reidemeister_pair(id)?;
    let (left, right) = (state_sum(&a, n)?, state_sum(&b, n)?);
    Ok(ReidemeisterReport { id: id.to_string(), n, pass: left == right, left, right })
}

/// Named diagrams: unknots, unlink, Hopf links, trefoils, figure-eight.
pub fn corpus() -> Vec<(&'static str, LinkDiagram)> {
    let p = |s: &str| LinkDiagram::parse(s).expect("built-in PD");
    let b = |k: usize, w: &[i32]| LinkDiagram::from_braid(k, w).expect("built-in braid");
    vec![
        ("unknot", p("U")),
        ("unknot-kink+", p("X[2,2,1,1]")),
        ("unknot-kink-", p("X[1,2,2,1]")),
        ("unlink2", p("U,U")),
        ("hopf+", p("X[1,3,2,4],X[3,1,4,2]")),
        ("hopf-", p("X[4,1,3,2],X[2,3,1,4]")),
        ("trefoil-left", p("X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]")),
        ("trefoil-right", b(2, &[1, 1, 1])),
        ("figure-eight", p("X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]")),
    ]
}

/// Skein triples (d_plus, d_minus, d_zero) differing at one crossing.
pub fn skein_triples() -> Vec<(&'static str, [LinkDiagram; 3])> {
    let b = |k: usize, w: &[i32]| LinkDiagram::from_braid(k, w).expect("built-in braid");
    vec![
        ("kink", [b(2, &[1]), b(2, &[-1]), b(2, &[])]),
        ("trefoil", [b(2, &[1, 1, 1]), b(2, &[1, 1, -1]), b(2, &[1, 1])]),
        ("figure-eight", [b(3, &[1, -2, 1, -2]), b(3, &[-1, -2, 1, -2]), b(3, &[-2, 1, -2])]),
    ]
}
