//! Lindström–Gessel–Viennot machinery on finite acyclic directed graphs.
//!
//! Weights are exact rationals. Besides the determinant itself the module
//! exposes the pieces needed to check it from first principles: path
//! enumeration, brute-force tuple sums, and the tail-swap involution that
//! cancels every intersecting term of the signed expansion.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{bareiss_det, parse_rational, permutation_sign, permutations, Rational};

/// Default bound on the number of path tuples (or paths) an exhaustive
/// operation may visit.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LgvError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("vertex order must list every vertex exactly once")]
    BadOrder,
    #[error("invalid edge weight {0:?}")]
    BadWeight(String),
    #[error("source and sink lists differ in length ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("configuration is nonintersecting; tail swap undefined")]
    Nonintersecting,
    #[error("malformed path tuple: {0}")]
    BadTuple(String),
}

pub type VertexId = usize;

/// A directed acyclic graph with exact edge weights and a fixed total order on
/// its vertices.
#[derive(Debug, Clone)]
pub struct PathGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    /// `rank[v]` is the position of `v` in the total vertex order.
    rank: Vec<usize>,
    out: Vec<Vec<(VertexId, Rational)>>,
    topo: Vec<VertexId>,
}

impl PathGraph {
    /// Builds and validates a graph. `order` defaults to construction order.
    pub fn new(
        vertices: Vec<String>,
        order: Option<Vec<String>>,
        edges: Vec<(String, String, Rational)>,
    ) -> Result<Self, LgvError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(LgvError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| LgvError::UnknownVertex(s.to_string()));
        let n = vertices.len();
        let rank = match order {
            None => (0..n).collect(),
            Some(order) => {
                if order.len() != n {
                    return Err(LgvError::BadOrder);
                }
                let mut rank = vec![usize::MAX; n];
                for (pos, lab) in order.iter().enumerate() {
                    let v = lookup(lab)?;
                    if rank[v] != usize::MAX {
                        return Err(LgvError::BadOrder);
                    }
                    rank[v] = pos;
                }
                rank
            }
        };
        let mut out: Vec<Vec<(VertexId, Rational)>> = vec![Vec::new(); n];
        for (a, b, w) in edges {
            let (ia, ib) = (lookup(&a)?, lookup(&b)?);
            if out[ia].iter().any(|(t, _)| *t == ib) {
                return Err(LgvError::DuplicateEdge(a, b));
            }
            out[ia].push((ib, w));
        }
        let topo = topological_order(&out).ok_or(LgvError::Cyclic)?;
        Ok(PathGraph { labels: vertices, index, rank, out, topo })
    }

    /// The lattice of the vicious-walker model: vertices `(x, t)` with `x + t`
    /// even, `0 ≤ t ≤ horizon`, positions restricted to the window
    /// `[x_min − horizon, x_max + horizon]`, and unit-weight edges
    /// `(x, t−1) → (x ± 1, t)`. Vertices are ordered lexicographically by
    /// `(t, x)`. Labels are `"x@t"`.
    pub fn vicious_walk(x_min: i64, x_max: i64, horizon: usize) -> Self {
        let lo = x_min - horizon as i64;
        let hi = x_max + horizon as i64;
        let mut labels = Vec::new();
        let mut coords = Vec::new();
        for t in 0..=horizon as i64 {
            for x in lo..=hi {
                if (x + t).rem_euclid(2) == 0 {
                    labels.push(walk_label(x, t as usize));
                    coords.push((x, t));
                }
            }
        }
        let index: HashMap<String, VertexId> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut out: Vec<Vec<(VertexId, Rational)>> = vec![Vec::new(); labels.len()];
        for (i, &(x, t)) in coords.iter().enumerate() {
            if t as usize == horizon {
                continue;
            }
            for nx in [x - 1, x + 1] {
                if let Some(&j) = index.get(&walk_label(nx, t as usize + 1)) {
                    out[i].push((j, Rational::one()));
                }
            }
        }
        let n = labels.len();
        let topo = (0..n).collect();
        PathGraph { labels, index, rank: (0..n).collect(), out, topo }
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId, LgvError> {
        self.index.get(label).copied().ok_or_else(|| LgvError::UnknownVertex(label.to_string()))
    }

    pub fn vertices_of(&self, labels: &[String]) -> Result<Vec<VertexId>, LgvError> {
        labels.iter().map(|l| self.vertex(l)).collect()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v]
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = &(VertexId, Rational)> {
        self.out[v].iter()
    }

    pub fn edge_weight(&self, a: VertexId, b: VertexId) -> Option<&Rational> {
        self.out[a].iter().find(|(t, _)| *t == b).map(|(_, w)| w)
    }

    /// Green function from `u` to every vertex.
    pub fn green_from(&self, u: VertexId) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); self.len()];
        g[u] = Rational::one();
        let start = self.topo.iter().position(|&v| v == u).expect("vertex in topological order");
        for &v in &self.topo[start..] {
            if g[v].is_zero() {
                continue;
            }
            let gv = g[v].clone();
            for (w, wt) in &self.out[v] {
                g[*w] += &gv * wt;
            }
        }
        g
    }

    /// Weight of a path given as a vertex sequence; `None` if some consecutive
    /// pair is not an edge.
    pub fn path_weight(&self, path: &[VertexId]) -> Option<Rational> {
        let mut w = Rational::one();
        for pair in path.windows(2) {
            w *= self.edge_weight(pair[0], pair[1])?;
        }
        Some(w)
    }

    pub fn to_json(&self) -> GraphJson {
        let mut order: Vec<(usize, String)> = self.rank.iter().copied().zip(self.labels.iter().cloned()).collect();
        order.sort();
        let edges = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(a, es)| {
                es.iter().map(move |(b, w)| EdgeJson {
                    from: self.labels[a].clone(),
                    to: self.labels[*b].clone(),
                    weight: WeightJson::from_rational(w),
                })
            })
            .collect();
        GraphJson { vertices: self.labels.clone(), order: order.into_iter().map(|(_, l)| l).collect(), edges }
    }

    pub fn from_json(g: GraphJson) -> Result<Self, LgvError> {
        let edges = g
            .edges
            .into_iter()
            .map(|e| Ok((e.from, e.to, e.weight.to_rational()?)))
            .collect::<Result<Vec<_>, LgvError>>()?;
        let order = if g.order.is_empty() { None } else { Some(g.order) };
        PathGraph::new(g.vertices, order, edges)
    }
}

pub fn walk_label(x: i64, t: usize) -> String {
    format!("{x}@{t}")
}

fn topological_order(out: &[Vec<(VertexId, Rational)>]) -> Option<Vec<VertexId>> {
    let n = out.len();
    let mut indeg = vec![0usize; n];
    for es in out {
        for (b, _) in es {
            indeg[*b] += 1;
        }
    }
    let mut stack: Vec<VertexId> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        order.push(v);
        for (b, _) in out[v].iter().rev() {
            indeg[*b] -= 1;
            if indeg[*b] == 0 {
                stack.push(*b);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// On-disk graph format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub order: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub weight: WeightJson,
}

/// Integer weights are plain JSON numbers; other rationals are strings such
/// as `"3/4"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightJson {
    Int(i64),
    Text(String),
}

impl WeightJson {
    fn from_rational(r: &Rational) -> Self {
        match (r.is_integer(), i64::try_from(r.numer())) {
            (true, Ok(v)) => WeightJson::Int(v),
            _ => WeightJson::Text(crate::exact::format_rational(r)),
        }
    }

    fn to_rational(&self) -> Result<Rational, LgvError> {
        match self {
            WeightJson::Int(v) => Ok(Rational::from_integer((*v).into())),
            WeightJson::Text(s) => parse_rational(s).ok_or_else(|| LgvError::BadWeight(s.clone())),
        }
    }
}

pub fn green_function(g: &PathGraph, u: VertexId, v: VertexId) -> Rational {
    g.green_from(u).swap_remove(v)
}

/// `[G(u_i, v_j)]_{i,j}`.
pub fn green_matrix(g: &PathGraph, sources: &[VertexId], sinks: &[VertexId]) -> Vec<Vec<Rational>> {
    sources
        .iter()
        .map(|&u| {
            let row = g.green_from(u);
            sinks.iter().map(|&v| row[v].clone()).collect()
        })
        .collect()
}

/// `det[G(u_i, v_j)]`. Returned as-is whether or not the endpoints are
/// compatible; see [`check_compatibility`].
pub fn lgv_determinant(g: &PathGraph, sources: &[VertexId], sinks: &[VertexId]) -> Result<Rational, LgvError> {
    if sources.len() != sinks.len() {
        return Err(LgvError::SizeMismatch(sources.len(), sinks.len()));
    }
    Ok(bareiss_det(&green_matrix(g, sources, sinks)))
}

/// All directed paths from `u` to `v`, as vertex sequences.
pub fn enumerate_paths(g: &PathGraph, u: VertexId, v: VertexId, cap: usize) -> Result<Vec<Vec<VertexId>>, LgvError> {
    // prune with reachability so every branch explored ends at v
    let mut reaches = vec![false; g.len()];
    reaches[v] = true;
    for &w in g.topo.iter().rev() {
        if g.out[w].iter().any(|(b, _)| reaches[*b]) {
            reaches[w] = true;
        }
    }
    let mut out = Vec::new();
    if !reaches[u] {
        return Ok(out);
    }
    let mut stack = vec![u];
    fn dfs(
        g: &PathGraph,
        v: VertexId,
        reaches: &[bool],
        stack: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
        cap: usize,
    ) -> Result<(), LgvError> {
        let cur = *stack.last().unwrap();
        if cur == v {
            if out.len() >= cap {
                return Err(LgvError::CapExceeded(cap));
            }
            out.push(stack.clone());
            return Ok(());
        }
        for (b, _) in &g.out[cur] {
            if reaches[*b] {
                stack.push(*b);
                dfs(g, v, reaches, stack, out, cap)?;
                stack.pop();
            }
        }
        Ok(())
    }
    dfs(g, v, &reaches, &mut stack, &mut out, cap)?;
    Ok(out)
}

fn paths_disjoint(a: &[VertexId], b: &[VertexId]) -> bool {
    !a.iter().any(|x| b.contains(x))
}

/// A permutation together with one path per source, path `i` running from
/// `u_i` to `v_{σ(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathTuple {
    pub permutation: Vec<usize>,
    pub paths: Vec<Vec<VertexId>>,
}

impl PathTuple {
    pub fn sign(&self) -> i32 {
        permutation_sign(&self.permutation)
    }

    pub fn weight(&self, g: &PathGraph) -> Rational {
        self.paths
            .iter()
            .map(|p| g.path_weight(p).expect("tuple paths follow graph edges"))
            .fold(Rational::one(), |a, b| a * b)
    }

    pub fn is_intersecting(&self) -> bool {
        (0..self.paths.len()).any(|i| (i + 1..self.paths.len()).any(|j| !paths_disjoint(&self.paths[i], &self.paths[j])))
    }

    /// Checks that every path is a walk in `g` from `sources[i]` to
    /// `sinks[σ(i)]`.
    pub fn validate(&self, g: &PathGraph, sources: &[VertexId], sinks: &[VertexId]) -> Result<(), LgvError> {
        let n = sources.len();
        if self.paths.len() != n || self.permutation.len() != n || sinks.len() != n {
            return Err(LgvError::BadTuple("size mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &s in &self.permutation {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(LgvError::BadTuple("not a permutation".into()));
            }
        }
        for (i, p) in self.paths.iter().enumerate() {
            if p.first() != Some(&sources[i]) || p.last() != Some(&sinks[self.permutation[i]]) {
                return Err(LgvError::BadTuple(format!("path {i} has wrong endpoints")));
            }
            if g.path_weight(p).is_none() {
                return Err(LgvError::BadTuple(format!("path {i} leaves the graph")));
            }
        }
        Ok(())
    }
}

/// Sum of `w(P)` over tuples with the identity pairing `u_i → v_i`, keeping
/// only vertex-disjoint tuples when `nonintersecting_only` is set.
pub fn brute_force_tuples(
    g: &PathGraph,
    sources: &[VertexId],
    sinks: &[VertexId],
    nonintersecting_only: bool,
    cap: usize,
) -> Result<Rational, LgvError> {
    if sources.len() != sinks.len() {
        return Err(LgvError::SizeMismatch(sources.len(), sinks.len()));
    }
    let per: Vec<Vec<Vec<VertexId>>> = sources
        .iter()
        .zip(sinks)
        .map(|(&u, &v)| enumerate_paths(g, u, v, cap))
        .collect::<Result<_, _>>()?;
    let weights: Vec<Vec<Rational>> =
        per.iter().map(|ps| ps.iter().map(|p| g.path_weight(p).unwrap()).collect()).collect();
    let total = per.iter().try_fold(1usize, |acc, ps| acc.checked_mul(ps.len().max(1)));
    if total.is_none_or(|t| t > cap) {
        return Err(LgvError::CapExceeded(cap));
    }
    let mut sum = Rational::zero();
    let mut chosen: Vec<usize> = Vec::with_capacity(per.len());
    fn rec(
        per: &[Vec<Vec<VertexId>>],
        weights: &[Vec<Rational>],
        chosen: &mut Vec<usize>,
        nonint: bool,
        sum: &mut Rational,
    ) {
        let k = chosen.len();
        if k == per.len() {
            let w = chosen.iter().enumerate().fold(Rational::one(), |a, (i, &c)| a * &weights[i][c]);
            *sum += w;
            return;
        }
        for c in 0..per[k].len() {
            if nonint && chosen.iter().enumerate().any(|(i, &ci)| !paths_disjoint(&per[i][ci], &per[k][c])) {
                continue;
            }
            chosen.push(c);
            rec(per, weights, chosen, nonint, sum);
            chosen.pop();
        }
    }
    rec(&per, &weights, &mut chosen, nonintersecting_only, &mut sum);
    Ok(sum)
}

/// Every `(σ, P_1, …, P_N)` with `P_i` a path `u_i → v_{σ(i)}`.
pub fn all_tuples(
    g: &PathGraph,
    sources: &[VertexId],
    sinks: &[VertexId],
    cap: usize,
) -> Result<Vec<PathTuple>, LgvError> {
    if sources.len() != sinks.len() {
        return Err(LgvError::SizeMismatch(sources.len(), sinks.len()));
    }
    let n = sources.len();
    let mut table: Vec<Vec<Vec<Vec<VertexId>>>> = Vec::with_capacity(n);
    for &u in sources {
        table.push(sinks.iter().map(|&v| enumerate_paths(g, u, v, cap)).collect::<Result<_, _>>()?);
    }
    let mut out = Vec::new();
    for perm in permutations(n) {
        let lists: Vec<&Vec<Vec<VertexId>>> = (0..n).map(|i| &table[i][perm[i]]).collect();
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; n];
        loop {
            if out.len() >= cap {
                return Err(LgvError::CapExceeded(cap));
            }
            out.push(PathTuple {
                permutation: perm.clone(),
                paths: (0..n).map(|i| lists[i][idx[i]].clone()).collect(),
            });
            // odometer increment
            let mut done = true;
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    done = false;
                    break;
                }
                idx[k] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(out)
}

/// `Σ sgn(σ) w(P)` over all tuples; equals the determinant by expansion.
pub fn signed_tuple_sum(g: &PathGraph, sources: &[VertexId], sinks: &[VertexId], cap: usize) -> Result<Rational, LgvError> {
    Ok(all_tuples(g, sources, sinks, cap)?
        .iter()
        .map(|c| {
            let w = c.weight(g);
            if c.sign() < 0 {
                -w
            } else {
                w
            }
        })
        .fold(Rational::zero(), |a, b| a + b))
}

/// The sign-reversing involution on intersecting tuples: find the last
/// intersection vertex `v` in the vertex order, take the two lowest-indexed
/// paths through `v`, and exchange their tails after `v`.
pub fn tail_swap(c: &PathTuple, g: &PathGraph) -> Result<PathTuple, LgvError> {
    let mut through: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, p) in c.paths.iter().enumerate() {
        for &v in p {
            through.entry(v).or_default().push(i);
        }
    }
    let (v, idx) = through
        .iter()
        .filter(|(_, ps)| ps.len() >= 2)
        .max_by_key(|(&v, _)| g.rank(v))
        .ok_or(LgvError::Nonintersecting)?;
    // paths were pushed in index order, so the first two are the smallest
    let (i, j) = (idx[0], idx[1]);
    let pos_i = c.paths[i].iter().position(|x| x == v).unwrap();
    let pos_j = c.paths[j].iter().position(|x| x == v).unwrap();
    let mut paths = c.paths.clone();
    paths[i] = c.paths[i][..=pos_i].iter().chain(&c.paths[j][pos_j + 1..]).copied().collect();
    paths[j] = c.paths[j][..=pos_j].iter().chain(&c.paths[i][pos_i + 1..]).copied().collect();
    let mut permutation = c.permutation.clone();
    permutation.swap(i, j);
    Ok(PathTuple { permutation, paths })
}

/// True iff for all `i < j` every path `u_i → v_j` meets every path
/// `u_j → v_i`. Decided by enumeration.
pub fn check_compatibility(g: &PathGraph, sources: &[VertexId], sinks: &[VertexId], cap: usize) -> Result<bool, LgvError> {
    if sources.len() != sinks.len() {
        return Err(LgvError::SizeMismatch(sources.len(), sinks.len()));
    }
    let n = sources.len();
    for i in 0..n {
        for j in i + 1..n {
            let a = enumerate_paths(g, sources[i], sinks[j], cap)?;
            let b = enumerate_paths(g, sources[j], sinks[i], cap)?;
            if a.len().saturating_mul(b.len()) > cap {
                return Err(LgvError::CapExceeded(cap));
            }
            if a.iter().any(|p| b.iter().any(|q| paths_disjoint(p, q))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use num_bigint::BigInt;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn walk_ends(g: &PathGraph, xs: &[i64], ys: &[i64], t: usize) -> (Vec<VertexId>, Vec<VertexId>) {
        let s = xs.iter().map(|&x| g.vertex(&walk_label(x, 0)).unwrap()).collect();
        let e = ys.iter().map(|&y| g.vertex(&walk_label(y, t)).unwrap()).collect();
        (s, e)
    }

    #[test]
    fn green_trivial_cases() {
        let g = PathGraph::new(vec!["a".into(), "b".into()], None, vec![("a".into(), "b".into(), r(1))]).unwrap();
        assert_eq!(green_function(&g, 0, 1), r(1));
        assert_eq!(green_function(&g, 0, 0), r(1));
        assert_eq!(green_function(&g, 1, 0), r(0));
    }

    #[test]
    fn green_on_walk_lattice_is_binomial() {
        let g = PathGraph::vicious_walk(0, 0, 6);
        for t in [2usize, 4, 6] {
            let gt = PathGraph::vicious_walk(0, 0, t);
            for y in (-(t as i64)..=t as i64).step_by(2) {
                let (s, e) = walk_ends(&gt, &[0], &[y], t);
                let expect = binomial(t as u64, (t as i64 - y) / 2);
                assert_eq!(green_function(&gt, s[0], e[0]), Rational::from_integer(BigInt::from(expect)));
            }
        }
        let (s, e) = walk_ends(&g, &[0], &[0], 6);
        assert_eq!(green_function(&g, s[0], e[0]), r(20));
    }

    #[test]
    fn two_walker_example() {
        let g = PathGraph::vicious_walk(0, 2, 2);
        let (s, e) = walk_ends(&g, &[0, 2], &[0, 2], 2);
        assert_eq!(lgv_determinant(&g, &s, &e).unwrap(), r(3));
        assert_eq!(brute_force_tuples(&g, &s, &e, true, DEFAULT_ENUMERATION_CAP).unwrap(), r(3));
        assert_eq!(brute_force_tuples(&g, &s, &e, false, DEFAULT_ENUMERATION_CAP).unwrap(), r(4));
        assert!(check_compatibility(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap());
        assert_eq!(
            lgv_determinant(&g, &s, &e[..1]),
            Err(LgvError::SizeMismatch(2, 1))
        );
    }

    #[test]
    fn single_pair_reduces_to_green() {
        let g = PathGraph::vicious_walk(0, 0, 4);
        let (s, e) = walk_ends(&g, &[0], &[2], 4);
        let gf = green_function(&g, s[0], e[0]);
        assert_eq!(lgv_determinant(&g, &s, &e).unwrap(), gf);
        assert_eq!(brute_force_tuples(&g, &s, &e, true, DEFAULT_ENUMERATION_CAP).unwrap(), gf);
        assert!(check_compatibility(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap());
    }

    #[test]
    fn crossed_parallel_lanes_are_incompatible() {
        // two disjoint lanes a1->a2 and b1->b2 with sinks listed crosswise
        let g = PathGraph::new(
            vec!["a1".into(), "a2".into(), "b1".into(), "b2".into()],
            None,
            vec![("a1".into(), "a2".into(), r(1)), ("b1".into(), "b2".into(), r(1))],
        )
        .unwrap();
        let s = g.vertices_of(&["a1".into(), "b1".into()]).unwrap();
        let e = g.vertices_of(&["b2".into(), "a2".into()]).unwrap();
        assert!(!check_compatibility(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap());
        // the determinant is returned as-is: -1 while no identity-paired tuple exists
        assert_eq!(lgv_determinant(&g, &s, &e).unwrap(), r(-1));
        assert_eq!(brute_force_tuples(&g, &s, &e, true, DEFAULT_ENUMERATION_CAP).unwrap(), r(0));
    }

    #[test]
    fn rejects_cycles_and_bad_input() {
        let cyc = PathGraph::new(
            vec!["a".into(), "b".into()],
            None,
            vec![("a".into(), "b".into(), r(1)), ("b".into(), "a".into(), r(1))],
        );
        assert_eq!(cyc.unwrap_err(), LgvError::Cyclic);
        let unknown = PathGraph::new(vec!["a".into()], None, vec![("a".into(), "z".into(), r(1))]);
        assert_eq!(unknown.unwrap_err(), LgvError::UnknownVertex("z".into()));
        let bad_order = PathGraph::new(vec!["a".into(), "b".into()], Some(vec!["a".into(), "a".into()]), vec![]);
        assert_eq!(bad_order.unwrap_err(), LgvError::BadOrder);
    }

    #[test]
    fn weighted_graph_json_round_trip() {
        let json = r#"{"vertices":["s","m","t"],"order":["t","m","s"],
            "edges":[{"from":"s","to":"m","weight":"1/2"},{"from":"m","to":"t","weight":3},{"from":"s","to":"t","weight":"-1"}]}"#;
        let g = PathGraph::from_json(serde_json::from_str(json).unwrap()).unwrap();
        assert_eq!(green_function(&g, 0, 2), Rational::new(1.into(), 2.into()));
        assert_eq!(g.rank(0), 2);
        let back = PathGraph::from_json(g.to_json()).unwrap();
        assert_eq!(green_function(&back, 0, 2), Rational::new(1.into(), 2.into()));
        assert_eq!(back.rank(0), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g = PathGraph::vicious_walk(0, 0, 10);
        let (s, e) = walk_ends(&g, &[0], &[0], 10);
        assert_eq!(enumerate_paths(&g, s[0], e[0], 100), Err(LgvError::CapExceeded(100)));
        assert_eq!(enumerate_paths(&g, s[0], e[0], 1000).unwrap().len(), 252);
    }

    #[test]
    fn canceled_pair_in_two_step_example() {
        let g = PathGraph::vicious_walk(0, 2, 2);
        let (s, e) = walk_ends(&g, &[0, 2], &[0, 2], 2);
        let tuples = all_tuples(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap();
        let ident_inter: Vec<_> =
            tuples.iter().filter(|c| c.permutation == vec![0, 1] && c.is_intersecting()).collect();
        let swap_inter: Vec<_> =
            tuples.iter().filter(|c| c.permutation == vec![1, 0] && c.is_intersecting()).collect();
        assert_eq!(ident_inter.len(), 1);
        assert_eq!(swap_inter.len(), 1);
        assert_eq!(&tail_swap(ident_inter[0], &g).unwrap(), swap_inter[0]);
        let nonint = tuples.iter().find(|c| !c.is_intersecting()).unwrap();
        assert_eq!(tail_swap(nonint, &g), Err(LgvError::Nonintersecting));
        assert_eq!(signed_tuple_sum(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap(), r(3));
    }

    #[test]
    fn involution_exhaustive_two_walkers() {
        for t in 1..=3usize {
            for x in [[0i64, 2], [0, 4]] {
                let g = PathGraph::vicious_walk(x[0], x[1], t);
                let reach = |x0: i64| (x0 - t as i64..=x0 + t as i64).step_by(2).collect::<Vec<_>>();
                for y1 in reach(x[0]) {
                    for y2 in reach(x[1]) {
                        if y1 >= y2 {
                            continue;
                        }
                        let (s, e) = walk_ends(&g, &x, &[y1, y2], t);
                        for c in all_tuples(&g, &s, &e, DEFAULT_ENUMERATION_CAP).unwrap() {
                            if !c.is_intersecting() {
                                continue;
                            }
                            let d = tail_swap(&c, &g).unwrap();
                            d.validate(&g, &s, &e).unwrap();
                            assert!(d.is_intersecting());
                            assert_ne!(d, c);
                            assert_eq!(d.sign(), -c.sign());
                            assert_eq!(d.weight(&g), c.weight(&g));
                            assert_eq!(tail_swap(&d, &g).unwrap(), c);
                        }
                    }
                }
            }
        }
    }
}
