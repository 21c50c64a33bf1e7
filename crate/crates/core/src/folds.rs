//! Proper full, complete and partial folds, and Stallings fold
//! decompositions of surjective homotopy equivalences.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    compose, oriented_label, validate_map, Edge, EdgeId, EdgePath, Graph, GraphIso, GraphMap, OrientedEdge,
    VertexId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FoldKind {
    ProperFull,
    Complete,
    Partial,
}

impl fmt::Display for FoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldKind::ProperFull => "proper-full",
            FoldKind::Complete => "complete",
            FoldKind::Partial => "partial",
        })
    }
}

/// Result of a single fold: the folded graph, the quotient map, and where
/// every old edge and vertex went.
#[derive(Clone, Debug)]
pub struct Fold {
    pub kind: FoldKind,
    pub e0: OrientedEdge,
    pub e1: OrientedEdge,
    pub graph: Arc<Graph>,
    pub map: GraphMap,
    /// New id of every old edge that survives unchanged.
    pub kept: Vec<Option<EdgeId>>,
    /// Produced edges, oriented like the fold roles: `[e1']` for a proper
    /// full fold, `[e0']` for a complete fold, `[e0', e0'', e1']` for a partial fold.
    pub produced: Vec<OrientedEdge>,
    /// Old labels paired with the labels they gave rise to.
    pub produced_labels: Vec<(String, String)>,
}

fn check_pair(g: &Graph, e0: OrientedEdge, e1: OrientedEdge) -> Result<()> {
    if e0.edge >= g.num_edges() || e1.edge >= g.num_edges() {
        return Err(Error::InvalidFold("edge out of range".into()));
    }
    if e0.edge == e1.edge {
        return Err(Error::InvalidFold("e1 must differ from e0 and its reverse".into()));
    }
    if g.init(e0) != g.init(e1) {
        return Err(Error::InvalidFold(format!(
            "{} and {} do not share an initial vertex",
            oriented_label(g, e0),
            oriented_label(g, e1)
        )));
    }
    Ok(())
}

fn fresh_label(base: &str, suffix: &str, used: &mut HashSet<String>) -> String {
    let mut l = format!("{base}{suffix}");
    while used.contains(&l) {
        l.push('\'');
    }
    used.insert(l.clone());
    l
}

/// Stores an oriented edge `from -> to` with the sign `forward`; returns the edge record.
fn stored(label: String, from: VertexId, to: VertexId, forward: bool) -> Edge {
    if forward {
        Edge { label, init: from, term: to }
    } else {
        Edge { label, init: to, term: from }
    }
}

fn path_oriented(o: OrientedEdge) -> EdgePath {
    EdgePath::single(o)
}

/// Sets the image of the underlying edge of `o` so that `o` itself maps to `p`.
fn set_oriented_image(em: &mut [EdgePath], o: OrientedEdge, p: EdgePath) {
    em[o.edge] = if o.forward { p } else { p.reversed() };
}

/// Proper full fold of `e1` over `e0`: `e1` becomes `e0 e1'`.
pub fn fold_proper_full(g: &Arc<Graph>, e0: OrientedEdge, e1: OrientedEdge) -> Result<Fold> {
    check_pair(g, e0, e1)?;
    let mut used: HashSet<String> = g.edges().iter().map(|e| e.label.clone()).collect();
    let old = g.edge(e1.edge).label.clone();
    used.remove(&old);
    let label = fresh_label(&old, "'", &mut used);
    let mut edges = g.edges().to_vec();
    edges[e1.edge] = stored(label.clone(), g.term(e0), g.term(e1), e1.forward);
    let ng = Arc::new(Graph::new(g.vertex_names().to_vec(), edges)?);
    let e1p = OrientedEdge::new(e1.edge, e1.forward);
    let mut em: Vec<EdgePath> = (0..g.num_edges()).map(|e| path_oriented(OrientedEdge::fwd(e))).collect();
    set_oriented_image(&mut em, e1, EdgePath(vec![e0, e1p]));
    let vm = (0..g.num_vertices()).collect();
    let map = GraphMap::new(g.clone(), ng.clone(), vm, em);
    let kept = (0..g.num_edges()).map(|e| (e != e1.edge).then_some(e)).collect();
    Ok(Fold {
        kind: FoldKind::ProperFull,
        e0,
        e1,
        graph: ng,
        map,
        kept,
        produced: vec![e1p],
        produced_labels: vec![(old, label)],
    })
}

/// Complete fold of `e1` and `e0`: both become `e0'` and `τ(e1)` is merged into `τ(e0)`.
pub fn fold_complete(g: &Arc<Graph>, e0: OrientedEdge, e1: OrientedEdge) -> Result<Fold> {
    check_pair(g, e0, e1)?;
    let (t0, t1) = (g.term(e0), g.term(e1));
    let nv = g.num_vertices();
    let vmap: Vec<VertexId> = (0..nv)
        .map(|v| {
            let v = if v == t1 { t0 } else { v };
            if t0 != t1 && v > t1 {
                v - 1
            } else {
                v
            }
        })
        .collect();
    let names: Vec<String> = (0..nv)
        .filter(|&v| t0 == t1 || v != t1)
        .map(|v| g.vertex_name(v).to_string())
        .collect();
    let mut used: HashSet<String> = g.edges().iter().map(|e| e.label.clone()).collect();
    let old0 = g.edge(e0.edge).label.clone();
    let old1 = g.edge(e1.edge).label.clone();
    used.remove(&old0);
    used.remove(&old1);
    let label = fresh_label(&old0, "'", &mut used);
    let renum = |e: EdgeId| if e > e1.edge { e - 1 } else { e };
    let mut edges = Vec::with_capacity(g.num_edges() - 1);
    for (i, e) in g.edges().iter().enumerate() {
        if i == e1.edge {
            continue;
        }
        if i == e0.edge {
            edges.push(stored(label.clone(), vmap[g.init(e0)], vmap[t0], e0.forward));
        } else {
            edges.push(Edge {
                label: e.label.clone(),
                init: vmap[e.init],
                term: vmap[e.term],
            });
        }
    }
    let ng = Arc::new(Graph::new(names, edges)?);
    let e0p = OrientedEdge::new(renum(e0.edge), e0.forward);
    let mut em: Vec<EdgePath> = (0..g.num_edges())
        .map(|e| path_oriented(OrientedEdge::fwd(if e == e1.edge { 0 } else { renum(e) })))
        .collect();
    set_oriented_image(&mut em, e0, EdgePath::single(e0p));
    set_oriented_image(&mut em, e1, EdgePath::single(e0p));
    let map = GraphMap::new(g.clone(), ng.clone(), vmap, em);
    let kept = (0..g.num_edges())
        .map(|e| (e != e0.edge && e != e1.edge).then(|| renum(e)))
        .collect();
    Ok(Fold {
        kind: FoldKind::Complete,
        e0,
        e1,
        graph: ng,
        map,
        kept,
        produced: vec![e0p],
        produced_labels: vec![(old0, label.clone()), (old1, label)],
    })
}

/// Partial fold of `e1` over `e0`: a new vertex `v'`, `e0 = e0' e0''` and `e1 = e0' e1'`.
pub fn fold_partial(g: &Arc<Graph>, e0: OrientedEdge, e1: OrientedEdge) -> Result<Fold> {
    check_pair(g, e0, e1)?;
    let nv = g.num_vertices();
    let vnew = nv;
    let mut names = g.vertex_names().to_vec();
    let mut vn = format!("v{nv}");
    while names.contains(&vn) {
        vn.push('\'');
    }
    names.push(vn);
    let mut used: HashSet<String> = g.edges().iter().map(|e| e.label.clone()).collect();
    let old0 = g.edge(e0.edge).label.clone();
    let old1 = g.edge(e1.edge).label.clone();
    used.remove(&old0);
    used.remove(&old1);
    let l0p = fresh_label(&old0, "'", &mut used);
    let l0pp = fresh_label(&old0, "''", &mut used);
    let l1p = fresh_label(&old1, "'", &mut used);
    let mut edges = g.edges().to_vec();
    edges[e0.edge] = stored(l0p.clone(), g.init(e0), vnew, e0.forward);
    edges[e1.edge] = stored(l1p.clone(), vnew, g.term(e1), e1.forward);
    let ne = g.num_edges();
    edges.push(stored(l0pp.clone(), vnew, g.term(e0), e0.forward));
    let ng = Arc::new(Graph::new(names, edges)?);
    let e0p = OrientedEdge::new(e0.edge, e0.forward);
    let e0pp = OrientedEdge::new(ne, e0.forward);
    let e1p = OrientedEdge::new(e1.edge, e1.forward);
    let mut em: Vec<EdgePath> = (0..ne).map(|e| path_oriented(OrientedEdge::fwd(e))).collect();
    set_oriented_image(&mut em, e0, EdgePath(vec![e0p, e0pp]));
    set_oriented_image(&mut em, e1, EdgePath(vec![e0p, e1p]));
    let map = GraphMap::new(g.clone(), ng.clone(), (0..nv).collect(), em);
    let kept = (0..ne).map(|e| (e != e0.edge && e != e1.edge).then_some(e)).collect();
    Ok(Fold {
        kind: FoldKind::Partial,
        e0,
        e1,
        graph: ng,
        map,
        kept,
        produced: vec![e0p, e0pp, e1p],
        produced_labels: vec![(old0.clone(), l0p), (old0, l0pp), (old1, l1p)],
    })
}

pub fn fold(g: &Arc<Graph>, kind: FoldKind, e0: OrientedEdge, e1: OrientedEdge) -> Result<Fold> {
    match kind {
        FoldKind::ProperFull => fold_proper_full(g, e0, e1),
        FoldKind::Complete => fold_complete(g, e0, e1),
        FoldKind::Partial => fold_partial(g, e0, e1),
    }
}

/// One step of a decomposition, with labels resolved in its source graph.
#[derive(Clone, Debug)]
pub struct FoldStep {
    pub kind: FoldKind,
    pub e0: OrientedEdge,
    pub e1: OrientedEdge,
    pub e0_label: String,
    pub e1_label: String,
    pub produced_labels: Vec<(String, String)>,
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub map: GraphMap,
}

impl fmt::Display for FoldStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind, self.e0_label, self.e1_label)
    }
}

#[derive(Clone, Debug)]
pub struct FoldDecomposition {
    pub original: GraphMap,
    pub steps: Vec<FoldStep>,
    pub terminal_graph: Arc<Graph>,
    pub terminal_iso: GraphIso,
}

impl FoldDecomposition {
    pub fn m(&self) -> usize {
        self.steps.len()
    }

    pub fn count(&self, kind: FoldKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    /// `h ∘ f_m ∘ ... ∘ f_1`.
    pub fn recompose(&self) -> Result<GraphMap> {
        let mut acc = GraphMap::identity(self.original.domain.clone());
        for s in &self.steps {
            acc = compose(&s.map, &acc)?;
        }
        let h = self
            .terminal_iso
            .to_map(self.terminal_graph.clone(), self.original.codomain.clone());
        compose(&h, &acc)
    }

    /// `T_i = sum(|(f_i ∘ ... ∘ f_1)(e)| - 1)` for `i = 0..=m`, with `T_0 = 0`.
    pub fn image_ledger(&self) -> Result<Vec<usize>> {
        let mut acc = GraphMap::identity(self.original.domain.clone());
        let mut out = vec![0];
        for s in &self.steps {
            acc = compose(&s.map, &acc)?;
            out.push(acc.excess());
        }
        Ok(out)
    }

    /// Checks the per-step image-length and vertex-count ledger: a proper full
    /// fold adds at least 1 to `T_i` and keeps `|V|`, a complete fold keeps `T_i`
    /// and removes a vertex, a partial fold adds at least 2 and adds a vertex.
    pub fn ledger_violations(&self) -> Result<Vec<String>> {
        let t = self.image_ledger()?;
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            let (a, b) = (t[i], t[i + 1]);
            let (va, vb) = (s.source.num_vertices() as i64, s.target.num_vertices() as i64);
            let ok = match s.kind {
                FoldKind::ProperFull => b > a && vb == va,
                FoldKind::Complete => b == a && vb == va - 1,
                FoldKind::Partial => b >= a + 2 && vb == va + 1,
            };
            if !ok {
                out.push(format!("step {} ({s}): T {a} -> {b}, |V| {va} -> {vb}", i + 1));
            }
        }
        let v_end = self.terminal_graph.num_vertices() as i64;
        let v0 = self.original.domain.num_vertices() as i64;
        let (p, c) = (self.count(FoldKind::Partial) as i64, self.count(FoldKind::Complete) as i64);
        if v_end != v0 + p - c {
            out.push(format!("terminal vertex count {v_end} != {v0} + {p} - {c}"));
        }
        Ok(out)
    }

    /// Step list as text, one fold per line.
    pub fn step_lines(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.to_string()).collect()
    }
}

/// Working state of a decomposition: current graph and the remaining map to the target.
#[derive(Clone)]
struct State {
    graph: Arc<Graph>,
    rest: GraphMap,
}

fn remaining_iso(st: &State) -> Option<GraphIso> {
    if st.rest.edge_map.iter().any(|p| p.len() != 1) {
        return None;
    }
    let iso = GraphIso {
        vertex_map: st.rest.vertex_map.clone(),
        edge_map: st.rest.edge_map.iter().map(|p| p.first()).collect(),
    };
    iso.is_valid(&st.graph, &st.rest.codomain).then_some(iso)
}

/// All pairs `(d0, d1)`, `d0 < d1`, with a common initial vertex and the
/// same first edge in their remaining images, in lexicographic order.
fn foldable_pairs(st: &State) -> Vec<(OrientedEdge, OrientedEdge)> {
    let g = &st.graph;
    let mut firsts: Vec<(OrientedEdge, OrientedEdge)> = g
        .oriented_edges()
        .map(|o| {
            let p = &st.rest.edge_map[o.edge].0;
            let first = if o.forward { p[0] } else { p[p.len() - 1].reversed() };
            (o, first)
        })
        .collect();
    firsts.sort();
    let mut out = Vec::new();
    for i in 0..firsts.len() {
        for j in i + 1..firsts.len() {
            let (d0, b0) = firsts[i];
            let (d1, b1) = firsts[j];
            if d0.edge != d1.edge && b0 == b1 && g.init(d0) == g.init(d1) {
                out.push((d0, d1));
            }
        }
    }
    out
}

fn drop_first(p: &EdgePath) -> EdgePath {
    EdgePath(p.0[1..].to_vec())
}

/// Performs the fold dictated by the pair and returns the new state.
fn step(st: &State, d0: OrientedEdge, d1: OrientedEdge) -> Result<(Fold, State)> {
    let r0 = st.rest.image(d0);
    let r1 = st.rest.image(d1);
    let b = r0.first();
    let target = st.rest.codomain.clone();
    let (fold, images): (Fold, Vec<(OrientedEdge, EdgePath)>) = match (r0.len(), r1.len()) {
        (1, 1) => {
            if st.graph.term(d0) == st.graph.term(d1) {
                return Err(Error::Decomposition(
                    "a complete fold would identify two edges with the same endpoints; the map is not a homotopy equivalence".into(),
                ));
            }
            let f = fold_complete(&st.graph, d0, d1)?;
            let p = f.produced[0];
            (f, vec![(p, r0)])
        }
        (1, _) => {
            let f = fold_proper_full(&st.graph, d0, d1)?;
            let p = f.produced[0];
            (f, vec![(p, drop_first(&r1))])
        }
        (_, 1) => {
            let f = fold_proper_full(&st.graph, d1, d0)?;
            let p = f.produced[0];
            (f, vec![(p, drop_first(&r0))])
        }
        _ => {
            let f = fold_partial(&st.graph, d0, d1)?;
            let pr = f.produced.clone();
            (
                f,
                vec![
                    (pr[0], EdgePath::single(b)),
                    (pr[1], drop_first(&r0)),
                    (pr[2], drop_first(&r1)),
                ],
            )
        }
    };
    let ng = fold.graph.clone();
    let mut em = vec![EdgePath::default(); ng.num_edges()];
    for (old, new) in fold.kept.iter().enumerate() {
        if let Some(n) = new {
            em[*n] = st.rest.edge_map[old].clone();
        }
    }
    for (o, p) in images {
        set_oriented_image(&mut em, o, p);
    }
    let mut vm = vec![usize::MAX; ng.num_vertices()];
    for (v, &w) in fold.map.vertex_map.iter().enumerate() {
        vm[w] = st.rest.vertex_map[v];
    }
    if fold.kind == FoldKind::Partial {
        vm[ng.num_vertices() - 1] = target.term(b);
    }
    let rest = GraphMap::new(ng.clone(), target, vm, em);
    Ok((fold, State { graph: ng, rest }))
}

fn to_step(st: &State, f: Fold) -> FoldStep {
    FoldStep {
        kind: f.kind,
        e0: f.e0,
        e1: f.e1,
        e0_label: oriented_label(&st.graph, f.e0),
        e1_label: oriented_label(&st.graph, f.e1),
        produced_labels: f.produced_labels,
        source: st.graph.clone(),
        target: f.graph,
        map: f.map,
    }
}

fn precheck(f: &GraphMap) -> Result<()> {
    if let Err(v) = validate_map(f) {
        return Err(Error::InvalidMap(v.to_string()));
    }
    if !f.is_surjective() {
        return Err(Error::Hypothesis("map is not surjective on edges".into()));
    }
    Ok(())
}

fn finish(f: &GraphMap, steps: Vec<FoldStep>, st: &State, iso: GraphIso) -> Result<FoldDecomposition> {
    let d = FoldDecomposition {
        original: f.clone(),
        steps,
        terminal_graph: st.graph.clone(),
        terminal_iso: iso,
    };
    let back = d.recompose()?;
    if back.edge_map != f.edge_map || back.vertex_map != f.vertex_map {
        return Err(Error::Internal("decomposition does not recompose to the input map".into()));
    }
    Ok(d)
}

/// Deterministic Stallings decomposition: always fold the lexicographically
/// least foldable pair.
pub fn decompose(f: &GraphMap) -> Result<FoldDecomposition> {
    precheck(f)?;
    let mut st = State {
        graph: f.domain.clone(),
        rest: f.clone(),
    };
    let mut steps = Vec::new();
    let limit = f.excess() + f.domain.num_vertices() + f.domain.num_edges() + 1;
    loop {
        if let Some(iso) = remaining_iso(&st) {
            return finish(f, steps, &st, iso);
        }
        let Some(&(d0, d1)) = foldable_pairs(&st).first() else {
            return Err(Error::Decomposition(
                "no foldable pair remains but the remaining map is not an isomorphism".into(),
            ));
        };
        let (fold, next) = step(&st, d0, d1)?;
        steps.push(to_step(&st, fold));
        st = next;
        if steps.len() > 2 * limit {
            return Err(Error::Internal("fold loop did not terminate".into()));
        }
    }
}

/// Fold count of the deterministic decomposition, without building step records.
pub fn fold_count(f: &GraphMap) -> Result<usize> {
    precheck(f)?;
    let mut st = State {
        graph: f.domain.clone(),
        rest: f.clone(),
    };
    let mut m = 0;
    loop {
        if remaining_iso(&st).is_some() {
            return Ok(m);
        }
        let Some(&(d0, d1)) = foldable_pairs(&st).first() else {
            return Err(Error::Decomposition("remaining map is not an isomorphism".into()));
        };
        st = step(&st, d0, d1)?.1;
        m += 1;
    }
}

/// Minimum number of folds over all fold orders, searched depth first in
/// lexicographic pair order.
///
/// A proper full fold lowers `sum(|r(e)| - 1)` of the remaining map by one, a
/// partial fold lowers it by two and adds a vertex, and a complete fold leaves
/// it fixed and removes a vertex. Every completed sequence therefore has
/// `sum(|r(e)| - 1) + |V| - |V_target|` folds, so that quantity prunes the
/// search and the first completed sequence is optimal.
pub fn decompose_min_folds(f: &GraphMap, max_edges: usize) -> Result<FoldDecomposition> {
    precheck(f)?;
    if f.domain.num_edges() > max_edges {
        return Err(Error::Budget(format!(
            "exhaustive fold search is limited to graphs with at most {max_edges} edges"
        )));
    }
    let start = State {
        graph: f.domain.clone(),
        rest: f.clone(),
    };
    let target_v = f.codomain.num_vertices();
    let lower = |st: &State| st.rest.excess() + st.graph.num_vertices().saturating_sub(target_v);

    struct Found {
        path: Vec<(State, Fold)>,
        last: State,
        iso: GraphIso,
    }

    fn search(
        st: &State,
        path: &mut Vec<(State, Fold)>,
        best: &mut Option<Found>,
        bound: &mut usize,
        floor: usize,
        lower: &dyn Fn(&State) -> usize,
    ) -> bool {
        if path.len() + lower(st) > *bound || (best.is_some() && path.len() + lower(st) == *bound) {
            return false;
        }
        if let Some(iso) = remaining_iso(st) {
            *bound = path.len();
            *best = Some(Found {
                path: path.clone(),
                last: st.clone(),
                iso,
            });
            return path.len() <= floor;
        }
        for (d0, d1) in foldable_pairs(st) {
            let Ok((fold, next)) = step(st, d0, d1) else { continue };
            path.push((st.clone(), fold));
            let done = search(&next, path, best, bound, floor, lower);
            path.pop();
            if done {
                return true;
            }
        }
        false
    }

    let floor = lower(&start);
    let firsts = foldable_pairs(&start);
    let found: Vec<Option<Found>> = if firsts.is_empty() {
        let mut best = None;
        let mut bound = usize::MAX;
        search(&start, &mut Vec::new(), &mut best, &mut bound, floor, &lower);
        vec![best]
    } else {
        firsts
            .par_iter()
            .map(|&(d0, d1)| {
                let (fold, next) = step(&start, d0, d1).ok()?;
                let mut best = None;
                let mut bound = usize::MAX;
                let mut path = vec![(start.clone(), fold)];
                search(&next, &mut path, &mut best, &mut bound, floor, &lower);
                best
            })
            .collect()
    };
    // first branch in pair order among those of least length
    let best = found
        .into_iter()
        .flatten()
        .min_by_key(|b| b.path.len())
        .ok_or_else(|| Error::Decomposition("no fold order ends in an isomorphism".into()))?;
    let steps = best.path.iter().map(|(s, fo)| to_step(s, fo.clone())).collect();
    finish(f, steps, &best.last, best.iso)
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldBudget {
    pub m: usize,
    pub sum_excess: usize,
    pub p: usize,
    pub periodic_vertices: bool,
    pub inequalities_hold: bool,
}

/// Checks `m <= sum(|f(e)| - 1)` and, for vertex-periodic maps, `p <= m`.
pub fn fold_budget_check(f: &GraphMap) -> Result<FoldBudget> {
    let part = crate::stacks::stack_partition(f)?;
    let m = decompose(f)?.m();
    let sum_excess = f.excess();
    let periodic = f.is_vertex_bijective();
    let p = part.stacks.len();
    Ok(FoldBudget {
        m,
        sum_excess,
        p,
        periodic_vertices: periodic,
        inequalities_hold: m <= sum_excess && (!periodic || p <= m),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteOrderReport {
    pub m: usize,
    /// Least `n >= 1` with `f^n` the identity, if any.
    pub order: Option<usize>,
    pub lambda_is_one: bool,
    /// Every image length grows without bound, judged from the iterates.
    pub expanding: bool,
    pub equivalent: bool,
}

fn is_identity_map(f: &GraphMap) -> bool {
    f.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
        && f.edge_map.iter().enumerate().all(|(e, p)| p.len() == 1 && p.first() == OrientedEdge::fwd(e))
}

/// `|f^k(e)|` for every edge, saturating.
fn iterate_lengths(f: &GraphMap, k: usize) -> Vec<u128> {
    let mut len = vec![1u128; f.edge_map.len()];
    for _ in 0..k {
        len = f
            .edge_map
            .iter()
            .map(|p| p.steps().iter().fold(0u128, |s, o| s.saturating_add(len[o.edge])))
            .collect();
    }
    len
}

/// Compares the four finite-order conditions on an irreducible homotopy
/// equivalence: no folds, a power equal to the identity, `λ = 1`, and bounded
/// image lengths. The last is decided from lengths alone: an irreducible map
/// is expanding exactly when every `|f^k(e)|` exceeds one by `k = 2n`, and
/// otherwise it permutes edges.
pub fn finite_order_check(f: &GraphMap) -> Result<FiniteOrderReport> {
    if !crate::spectral::is_irreducible_map(f)? {
        return Err(Error::Hypothesis("map is not irreducible".into()));
    }
    let m = decompose(f)?.m();
    let n = f.edge_map.len();
    let mut order = None;
    let mut acc = f.clone();
    for k in 1..=100_000 {
        if acc.excess() > 0 {
            break;
        }
        if is_identity_map(&acc) {
            order = Some(k);
            break;
        }
        acc = compose(f, &acc)?;
    }
    let t = crate::spectral::transition_matrix(f, None)?;
    let lambda_is_one = crate::spectral::leading_eigenvalue(&t, &crate::spectral::default_precision()).cmp_int(1)
        == std::cmp::Ordering::Equal;
    let a = iterate_lengths(f, 2 * n);
    let b = iterate_lengths(f, 4 * n);
    let expanding = a.iter().zip(&b).all(|(x, y)| y > x);
    let equivalent = [order.is_some(), lambda_is_one, !expanding].iter().all(|&c| c == (m == 0));
    Ok(FiniteOrderReport {
        m,
        order,
        lambda_is_one,
        expanding,
        equivalent,
    })
}
