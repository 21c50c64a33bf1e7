//! Finite directed multigraphs, oriented edges, untightened edge paths,
//! graph maps and graph isomorphisms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub init: VertexId,
    pub term: VertexId,
}

/// A finite graph with dense vertex ids `0..V` and dense edge ids `0..E`.
/// Loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, checking endpoints and label uniqueness.
    pub fn new(vertex_names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = vertex_names.len();
        let mut seen = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.init >= n || e.term >= n {
                return Err(Error::Argument(format!(
                    "edge {} has an endpoint outside 0..{}",
                    e.label, n
                )));
            }
            if seen.insert(e.label.as_str(), i).is_some() {
                return Err(Error::Argument(format!("duplicate edge label {}", e.label)));
            }
        }
        let mut vseen = HashMap::new();
        for v in &vertex_names {
            if vseen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Argument(format!("duplicate vertex name {v}")));
            }
        }
        Ok(Graph { vertex_names, edges })
    }

    /// Builds a graph with vertices named `v0..v{n-1}` from `(label, init, term)` triples.
    pub fn from_triples<S: Into<String>>(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (S, VertexId, VertexId)>,
    ) -> Result<Self> {
        let names = (0..num_vertices).map(|i| format!("v{i}")).collect();
        let edges = edges
            .into_iter()
            .map(|(label, init, term)| Edge {
                label: label.into(),
                init,
                term,
            })
            .collect();
        Graph::new(names, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn init(&self, o: OrientedEdge) -> VertexId {
        let e = &self.edges[o.edge];
        if o.forward {
            e.init
        } else {
            e.term
        }
    }

    pub fn term(&self, o: OrientedEdge) -> VertexId {
        self.init(o.reversed())
    }

    /// All oriented edges in the canonical order `e0, ~e0, e1, ~e1, ...`.
    pub fn oriented_edges(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        (0..self.edges.len()).flat_map(|e| [OrientedEdge::fwd(e), OrientedEdge::rev(e)])
    }

    /// Oriented edges starting at `v`, in canonical order.
    pub fn outgoing(&self, v: VertexId) -> Vec<OrientedEdge> {
        self.oriented_edges().filter(|&o| self.init(o) == v).collect()
    }

    /// Valence of each vertex; a loop contributes two.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.num_vertices()];
        for e in &self.edges {
            val[e.init] += 1;
            val[e.term] += 1;
        }
        val
    }

    /// Connected component index of each vertex, numbered by first appearance.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for e in &self.edges {
            let a = find(&mut parent, e.init);
            let b = find(&mut parent, e.term);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }

    /// Symmetric matrix of edge counts between vertex pairs (loops on the diagonal).
    pub fn adjacency_counts(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0; n]; n];
        for e in &self.edges {
            a[e.init][e.term] += 1;
            if e.init != e.term {
                a[e.term][e.init] += 1;
            }
        }
        a
    }

    /// Disjoint union; the second graph's vertices and edges are shifted and
    /// all vertices are renamed `v0, v1, ...`. Edge labels must stay distinct.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let off = self.num_vertices();
        let names = (0..off + other.num_vertices()).map(|i| format!("v{i}")).collect();
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            label: e.label.clone(),
            init: e.init + off,
            term: e.term + off,
        }));
        Graph::new(names, edges)
    }
}

/// An edge together with a direction of travel. Ordered as `(edge, reversed)`
/// so that `e` sorts immediately before `~e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl OrientedEdge {
    pub fn new(edge: EdgeId, forward: bool) -> Self {
        OrientedEdge { edge, forward }
    }

    pub fn fwd(edge: EdgeId) -> Self {
        OrientedEdge::new(edge, true)
    }

    pub fn rev(edge: EdgeId) -> Self {
        OrientedEdge::new(edge, false)
    }

    pub fn reversed(self) -> Self {
        OrientedEdge::new(self.edge, !self.forward)
    }

    /// Dense index `2 * edge + reversed`.
    pub fn index(self) -> usize {
        2 * self.edge + usize::from(!self.forward)
    }

    pub fn from_index(i: usize) -> Self {
        OrientedEdge::new(i / 2, i % 2 == 0)
    }
}

impl Ord for OrientedEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for OrientedEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A concatenation of oriented edges. Never tightened: `e ~e` is kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgePath(pub Vec<OrientedEdge>);

impl EdgePath {
    pub fn single(o: OrientedEdge) -> Self {
        EdgePath(vec![o])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[OrientedEdge] {
        &self.0
    }

    pub fn first(&self) -> OrientedEdge {
        self.0[0]
    }

    pub fn reversed(&self) -> EdgePath {
        EdgePath(self.0.iter().rev().map(|o| o.reversed()).collect())
    }

    pub fn init(&self, g: &Graph) -> VertexId {
        g.init(self.0[0])
    }

    pub fn term(&self, g: &Graph) -> VertexId {
        g.term(*self.0.last().expect("nonempty path"))
    }

    /// True when consecutive steps are joined and the path is nonempty.
    pub fn is_connected_in(&self, g: &Graph) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|o| o.edge < g.num_edges())
            && self.0.windows(2).all(|w| g.term(w[0]) == g.init(w[1]))
    }

    /// Number of occurrences of the underlying edge `e`, either direction.
    pub fn count(&self, e: EdgeId) -> usize {
        self.0.iter().filter(|o| o.edge == e).count()
    }

    /// Free reduction. Not used by any of the analyses, which work with
    /// untightened paths throughout.
    pub fn tightened(&self) -> EdgePath {
        let mut out: Vec<OrientedEdge> = Vec::with_capacity(self.0.len());
        for &o in &self.0 {
            if out.last() == Some(&o.reversed()) {
                out.pop();
            } else {
                out.push(o);
            }
        }
        EdgePath(out)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph: g }
    }
}

pub struct PathDisplay<'a> {
    path: &'a EdgePath,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.path.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if !o.forward {
                f.write_str("~")?;
            }
            f.write_str(&self.graph.edge(o.edge).label)?;
        }
        Ok(())
    }
}

/// Formats an oriented edge as `label` or `~label`.
pub fn oriented_label(g: &Graph, o: OrientedEdge) -> String {
    let l = &g.edge(o.edge).label;
    if o.forward {
        l.clone()
    } else {
        format!("~{l}")
    }
}

/// A graph map: vertex map plus an image path for every positive edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub domain: Arc<Graph>,
    pub codomain: Arc<Graph>,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgePath>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub edge: Option<EdgeId>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.edge {
            Some(e) => write!(f, "edge #{e}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl GraphMap {
    pub fn new(
        domain: Arc<Graph>,
        codomain: Arc<Graph>,
        vertex_map: Vec<VertexId>,
        edge_map: Vec<EdgePath>,
    ) -> Self {
        GraphMap {
            domain,
            codomain,
            vertex_map,
            edge_map,
        }
    }

    /// Builds a map and infers the vertex map from edge images.
    /// Fails if the images disagree or some vertex has no incident edge.
    pub fn with_inferred_vertices(
        domain: Arc<Graph>,
        codomain: Arc<Graph>,
        edge_map: Vec<EdgePath>,
    ) -> Result<Self> {
        let vm = infer_vertex_map(&domain, &codomain, &edge_map)?;
        Ok(GraphMap::new(domain, codomain, vm, edge_map))
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let vm = (0..g.num_vertices()).collect();
        let em = (0..g.num_edges())
            .map(|e| EdgePath::single(OrientedEdge::fwd(e)))
            .collect();
        GraphMap::new(g.clone(), g, vm, em)
    }

    pub fn is_self_map(&self) -> bool {
        Arc::ptr_eq(&self.domain, &self.codomain) || self.domain == self.codomain
    }

    pub fn image(&self, o: OrientedEdge) -> EdgePath {
        let p = &self.edge_map[o.edge];
        if o.forward {
            p.clone()
        } else {
            p.reversed()
        }
    }

    /// Appends the image of `o` to `out` without allocating an intermediate path.
    pub fn push_image(&self, o: OrientedEdge, out: &mut Vec<OrientedEdge>) {
        let p = &self.edge_map[o.edge].0;
        if o.forward {
            out.extend_from_slice(p);
        } else {
            out.extend(p.iter().rev().map(|s| s.reversed()));
        }
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.edge_map.iter().map(EdgePath::len).collect()
    }

    /// Total image length minus the edge count, `sum(|f(e)| - 1)`.
    pub fn excess(&self) -> usize {
        self.edge_map.iter().map(|p| p.len()).sum::<usize>() - self.edge_map.len()
    }

    /// The `k`-th iterate of a self map (`k = 0` gives the identity).
    pub fn iterate(&self, k: usize) -> Result<GraphMap> {
        if !self.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        let mut acc = GraphMap::identity(self.domain.clone());
        for _ in 0..k {
            acc = compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// Vertex bijectivity of a self map.
    pub fn is_vertex_bijective(&self) -> bool {
        let mut seen = vec![false; self.codomain.num_vertices()];
        for &w in &self.vertex_map {
            if seen[w] {
                return false;
            }
            seen[w] = true;
        }
        self.vertex_map.len() == self.codomain.num_vertices()
    }

    /// Every codomain edge occurs in some image.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.num_edges()];
        for p in &self.edge_map {
            for o in &p.0 {
                hit[o.edge] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Edge images as a single comparable key.
    pub fn edge_key(&self) -> Vec<Vec<usize>> {
        self.edge_map
            .iter()
            .map(|p| p.0.iter().map(|o| o.index()).collect())
            .collect()
    }
}

fn infer_vertex_map(domain: &Graph, codomain: &Graph, edge_map: &[EdgePath]) -> Result<Vec<VertexId>> {
    if edge_map.len() != domain.num_edges() {
        return Err(Error::InvalidMap(format!(
            "{} edge images for {} edges",
            edge_map.len(),
            domain.num_edges()
        )));
    }
    let mut vm: Vec<Option<VertexId>> = vec![None; domain.num_vertices()];
    for (i, e) in domain.edges().iter().enumerate() {
        let p = &edge_map[i];
        if !p.is_connected_in(codomain) {
            return Err(Error::InvalidMap(format!("image of {} is not an edge path", e.label)));
        }
        for (v, w) in [(e.init, p.init(codomain)), (e.term, p.term(codomain))] {
            match vm[v] {
                None => vm[v] = Some(w),
                Some(x) if x != w => {
                    return Err(Error::InvalidMap(format!(
                        "inferred vertex map is inconsistent at {} (edge {})",
                        domain.vertex_name(v),
                        e.label
                    )))
                }
                _ => {}
            }
        }
    }
    vm.into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| {
                Error::InvalidMap(format!(
                    "vertex {} is isolated; give its image explicitly",
                    domain.vertex_name(v)
                ))
            })
        })
        .collect()
}

/// Checks the graph map axioms; reports the first violating edge.
pub fn validate_map(m: &GraphMap) -> std::result::Result<(), Violation> {
    let (d, c) = (&*m.domain, &*m.codomain);
    if m.vertex_map.len() != d.num_vertices() {
        return Err(Violation {
            edge: None,
            reason: format!("vertex map has {} entries, expected {}", m.vertex_map.len(), d.num_vertices()),
        });
    }
    if let Some(v) = m.vertex_map.iter().position(|&w| w >= c.num_vertices()) {
        return Err(Violation {
            edge: None,
            reason: format!("vertex {} maps outside the codomain", d.vertex_name(v)),
        });
    }
    if m.edge_map.len() != d.num_edges() {
        return Err(Violation {
            edge: None,
            reason: format!("edge map has {} entries, expected {}", m.edge_map.len(), d.num_edges()),
        });
    }
    for (i, e) in d.edges().iter().enumerate() {
        let p = &m.edge_map[i];
        if !p.is_connected_in(c) {
            return Err(Violation {
                edge: Some(i),
                reason: format!("image of {} is not an edge path", e.label),
            });
        }
        if m.vertex_map[e.init] != p.init(c) {
            return Err(Violation {
                edge: Some(i),
                reason: format!("image of {} starts at the wrong vertex", e.label),
            });
        }
        if m.vertex_map[e.term] != p.term(c) {
            return Err(Violation {
                edge: Some(i),
                reason: format!("image of {} ends at the wrong vertex", e.label),
            });
        }
    }
    Ok(())
}

/// Image of a path, without tightening.
pub fn apply(m: &GraphMap, p: &EdgePath) -> EdgePath {
    let mut out = Vec::with_capacity(p.len() * 2);
    for &o in &p.0 {
        m.push_image(o, &mut out);
    }
    EdgePath(out)
}

/// `g ∘ f`.
pub fn compose(g: &GraphMap, f: &GraphMap) -> Result<GraphMap> {
    if !(Arc::ptr_eq(&f.codomain, &g.domain) || f.codomain == g.domain) {
        return Err(Error::DomainMismatch(
            "codomain of the inner map differs from the domain of the outer map".into(),
        ));
    }
    let vm = f.vertex_map.iter().map(|&v| g.vertex_map[v]).collect();
    let em = f.edge_map.iter().map(|p| apply(g, p)).collect();
    Ok(GraphMap::new(f.domain.clone(), g.codomain.clone(), vm, em))
}

/// A graph isomorphism: vertex bijection and a signed edge bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphIso {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<OrientedEdge>,
}

impl GraphIso {
    pub fn identity(g: &Graph) -> Self {
        GraphIso {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).map(OrientedEdge::fwd).collect(),
        }
    }

    pub fn to_map(&self, domain: Arc<Graph>, codomain: Arc<Graph>) -> GraphMap {
        let em = self.edge_map.iter().map(|&o| EdgePath::single(o)).collect();
        GraphMap::new(domain, codomain, self.vertex_map.clone(), em)
    }

    pub fn apply_oriented(&self, o: OrientedEdge) -> OrientedEdge {
        let img = self.edge_map[o.edge];
        if o.forward {
            img
        } else {
            img.reversed()
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &GraphIso) -> GraphIso {
        GraphIso {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other.edge_map.iter().map(|&o| self.apply_oriented(o)).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        let mut vm = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vm[w] = v;
        }
        let mut em = vec![OrientedEdge::fwd(0); self.edge_map.len()];
        for (e, &o) in self.edge_map.iter().enumerate() {
            em[o.edge] = OrientedEdge::new(e, o.forward);
        }
        GraphIso {
            vertex_map: vm,
            edge_map: em,
        }
    }

    /// Checks that this is an isomorphism `g1 -> g2`.
    pub fn is_valid(&self, g1: &Graph, g2: &Graph) -> bool {
        if self.vertex_map.len() != g1.num_vertices()
            || g1.num_vertices() != g2.num_vertices()
            || self.edge_map.len() != g1.num_edges()
            || g1.num_edges() != g2.num_edges()
        {
            return false;
        }
        let mut vs = vec![false; g2.num_vertices()];
        for &w in &self.vertex_map {
            if w >= vs.len() || vs[w] {
                return false;
            }
            vs[w] = true;
        }
        let mut es = vec![false; g2.num_edges()];
        for (e, &o) in self.edge_map.iter().enumerate() {
            if o.edge >= es.len() || es[o.edge] {
                return false;
            }
            es[o.edge] = true;
            let ed = g1.edge(e);
            if g2.init(o) != self.vertex_map[ed.init] || g2.term(o) != self.vertex_map[ed.term] {
                return false;
            }
        }
        true
    }
}

struct IsoSearch<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    adj1: Vec<Vec<usize>>,
    adj2: Vec<Vec<usize>>,
    val1: Vec<usize>,
    val2: Vec<usize>,
    /// oriented edges of g2 grouped by (init, term)
    by_ends: HashMap<(VertexId, VertexId), Vec<OrientedEdge>>,
}

impl<'a> IsoSearch<'a> {
    fn new(g1: &'a Graph, g2: &'a Graph) -> Self {
        let mut by_ends: HashMap<(VertexId, VertexId), Vec<OrientedEdge>> = HashMap::new();
        for o in g2.oriented_edges() {
            by_ends.entry((g2.init(o), g2.term(o))).or_default().push(o);
        }
        IsoSearch {
            g1,
            g2,
            adj1: g1.adjacency_counts(),
            adj2: g2.adjacency_counts(),
            val1: g1.valences(),
            val2: g2.valences(),
            by_ends,
        }
    }

    fn compatible_sizes(&self) -> bool {
        if self.g1.num_vertices() != self.g2.num_vertices() || self.g1.num_edges() != self.g2.num_edges() {
            return false;
        }
        let mut a: Vec<(usize, usize)> = (0..self.val1.len()).map(|v| (self.val1[v], self.adj1[v][v])).collect();
        let mut b: Vec<(usize, usize)> = (0..self.val2.len()).map(|v| (self.val2[v], self.adj2[v][v])).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    fn vertices<F: FnMut(&[VertexId]) -> bool>(&self, vm: &mut Vec<VertexId>, used: &mut [bool], f: &mut F) -> bool {
        let u = vm.len();
        if u == self.g1.num_vertices() {
            return f(vm);
        }
        for w in 0..self.g2.num_vertices() {
            if used[w] || self.val1[u] != self.val2[w] || self.adj1[u][u] != self.adj2[w][w] {
                continue;
            }
            if (0..u).any(|x| self.adj1[u][x] != self.adj2[w][vm[x]]) {
                continue;
            }
            used[w] = true;
            vm.push(w);
            let go_on = self.vertices(vm, used, f);
            vm.pop();
            used[w] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    fn edges<F: FnMut(&GraphIso) -> bool>(
        &self,
        vm: &[VertexId],
        em: &mut Vec<OrientedEdge>,
        used: &mut [bool],
        f: &mut F,
    ) -> bool {
        let e = em.len();
        if e == self.g1.num_edges() {
            let iso = GraphIso {
                vertex_map: vm.to_vec(),
                edge_map: em.clone(),
            };
            return f(&iso);
        }
        let ed = self.g1.edge(e);
        let key = (vm[ed.init], vm[ed.term]);
        let Some(cands) = self.by_ends.get(&key) else {
            return true;
        };
        for &o in cands {
            if used[o.edge] {
                continue;
            }
            used[o.edge] = true;
            em.push(o);
            let go_on = self.edges(vm, em, used, f);
            em.pop();
            used[o.edge] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Calls `f` on every isomorphism `g1 -> g2` in lexicographic order of
/// (vertex images, signed edge images). Stops early when `f` returns false.
pub fn for_each_isomorphism<F: FnMut(&GraphIso) -> bool>(g1: &Graph, g2: &Graph, mut f: F) {
    let s = IsoSearch::new(g1, g2);
    if !s.compatible_sizes() {
        return;
    }
    let mut vm = Vec::with_capacity(g1.num_vertices());
    let mut used = vec![false; g2.num_vertices()];
    s.vertices(&mut vm, &mut used, &mut |vm: &[VertexId]| {
        let mut em = Vec::with_capacity(g1.num_edges());
        let mut eused = vec![false; g2.num_edges()];
        s.edges(vm, &mut em, &mut eused, &mut f)
    });
}

/// Calls `f` on every vertex bijection that extends to an isomorphism.
pub fn for_each_vertex_isomorphism<F: FnMut(&[VertexId]) -> bool>(g1: &Graph, g2: &Graph, mut f: F) {
    let s = IsoSearch::new(g1, g2);
    if !s.compatible_sizes() {
        return;
    }
    let mut vm = Vec::with_capacity(g1.num_vertices());
    let mut used = vec![false; g2.num_vertices()];
    s.vertices(&mut vm, &mut used, &mut f);
}

/// Complete, deterministically ordered list of isomorphisms `g1 -> g2`.
pub fn find_isomorphisms(g1: &Graph, g2: &Graph) -> Vec<GraphIso> {
    let mut out = Vec::new();
    for_each_isomorphism(g1, g2, |iso| {
        out.push(iso.clone());
        true
    });
    out
}

pub fn first_isomorphism(g1: &Graph, g2: &Graph) -> Option<GraphIso> {
    let mut out = None;
    for_each_isomorphism(g1, g2, |iso| {
        out = Some(iso.clone());
        false
    });
    out
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    let mut found = false;
    for_each_vertex_isomorphism(g1, g2, |_| {
        found = true;
        false
    });
    found
}

/// Number of isomorphisms, counted without materializing them.
pub fn count_isomorphisms(g1: &Graph, g2: &Graph) -> u128 {
    let adj1 = g1.adjacency_counts();
    let mut total: u128 = 0;
    for_each_vertex_isomorphism(g1, g2, |_| {
        let mut c: u128 = 1;
        for u in 0..g1.num_vertices() {
            for v in u..g1.num_vertices() {
                let k = adj1[u][v] as u128;
                c *= (1..=k).product::<u128>();
                if u == v {
                    c *= 1u128 << k;
                }
            }
        }
        total += c;
        true
    });
    total
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Structure {
    pub rank: usize,
    pub components: usize,
    pub min_valence: usize,
    pub is_connected: bool,
    pub valences: Vec<usize>,
}

pub fn structure(g: &Graph) -> Structure {
    let valences = g.valences();
    let comps = g.component_ids().into_iter().max().map_or(0, |m| m + 1);
    Structure {
        rank: g.num_edges() + comps - g.num_vertices(),
        components: comps,
        min_valence: valences.iter().copied().min().unwrap_or(0),
        is_connected: comps <= 1,
        valences,
    }
}

/// Parses whitespace-separated labels, `~label` meaning the reversed edge.
pub fn parse_path(g: &Graph, s: &str) -> Result<EdgePath> {
    let mut steps = Vec::new();
    for tok in s.split_whitespace() {
        let (name, forward) = match tok.strip_prefix('~') {
            Some(l) => (l, false),
            None => (tok, true),
        };
        let e = g
            .edge_by_label(name)
            .ok_or_else(|| Error::Argument(format!("unknown edge label {name}")))?;
        steps.push(OrientedEdge::new(e, forward));
    }
    if steps.is_empty() {
        return Err(Error::Argument("empty edge path".into()));
    }
    Ok(EdgePath(steps))
}

impl GraphMap {
    /// Self map from an image table keyed by edge label; the vertex map is inferred.
    pub fn from_table(g: Arc<Graph>, table: &[(&str, &str)]) -> Result<GraphMap> {
        let mut em: Vec<Option<EdgePath>> = vec![None; g.num_edges()];
        for (l, p) in table {
            let e = g
                .edge_by_label(l)
                .ok_or_else(|| Error::Argument(format!("unknown edge label {l}")))?;
            em[e] = Some(parse_path(&g, p)?);
        }
        let em = em
            .into_iter()
            .enumerate()
            .map(|(e, p)| p.ok_or_else(|| Error::Argument(format!("no image for {}", g.edge(e).label))))
            .collect::<Result<Vec<_>>>()?;
        GraphMap::with_inferred_vertices(g.clone(), g, em)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose(r: usize) -> Graph {
        Graph::from_triples(1, (1..=r).map(|i| (format!("e{i}"), 0, 0))).unwrap()
    }

    fn delta2() -> Graph {
        Graph::from_triples(
            3,
            [("a1", 0, 1), ("b1", 2, 0), ("b2", 2, 0), ("c1", 1, 2), ("c2", 1, 2)],
        )
        .unwrap()
    }

    fn p(g: &Graph, s: &str) -> EdgePath {
        EdgePath(
            s.split_whitespace()
                .map(|t| match t.strip_prefix('~') {
                    Some(l) => OrientedEdge::rev(g.edge_by_label(l).unwrap()),
                    None => OrientedEdge::fwd(g.edge_by_label(t).unwrap()),
                })
                .collect(),
        )
    }

    #[test]
    fn oriented_edge_order_puts_forward_first() {
        let mut v = vec![OrientedEdge::rev(1), OrientedEdge::fwd(1), OrientedEdge::rev(0)];
        v.sort();
        assert_eq!(v, vec![OrientedEdge::rev(0), OrientedEdge::fwd(1), OrientedEdge::rev(1)]);
        assert_eq!(OrientedEdge::from_index(OrientedEdge::rev(3).index()), OrientedEdge::rev(3));
    }

    #[test]
    fn rejects_duplicate_labels_and_bad_endpoints() {
        assert!(Graph::from_triples(1, [("a", 0, 0), ("a", 0, 0)]).is_err());
        assert!(Graph::from_triples(1, [("a", 0, 1)]).is_err());
    }

    #[test]
    fn validate_reports_first_bad_edge() {
        let g = Arc::new(delta2());
        let mut em: Vec<EdgePath> = ["b2", "c1", "c2", "a1", "~b1 ~c1"].iter().map(|s| p(&g, s)).collect();
        let m = GraphMap::with_inferred_vertices(g.clone(), g.clone(), em.clone()).unwrap();
        assert!(validate_map(&m).is_ok());
        em[1] = p(&g, "a1");
        let bad = GraphMap::new(g.clone(), g.clone(), m.vertex_map.clone(), em);
        assert_eq!(validate_map(&bad).unwrap_err().edge, Some(1));
    }

    #[test]
    fn apply_does_not_tighten() {
        let g = Arc::new(rose(2));
        let em = vec![p(&g, "e1 e2"), p(&g, "~e2")];
        let m = GraphMap::with_inferred_vertices(g.clone(), g.clone(), em).unwrap();
        let out = apply(&m, &p(&g, "e1 ~e1"));
        assert_eq!(out.display(&g).to_string(), "e1 e2 ~e2 ~e1");
        assert!(out.tightened().is_empty());
    }

    #[test]
    fn rose_automorphism_count() {
        let r3 = rose(3);
        assert_eq!(find_isomorphisms(&r3, &r3).len(), 48);
        assert_eq!(count_isomorphisms(&r3, &r3), 48);
        assert!(find_isomorphisms(&r3, &rose(4)).is_empty());
    }

    #[test]
    fn isomorphisms_are_sorted_and_valid() {
        let g = delta2();
        let isos = find_isomorphisms(&g, &g);
        assert!(!isos.is_empty());
        assert_eq!(isos[0], GraphIso::identity(&g));
        for w in isos.windows(2) {
            assert!((&w[0].vertex_map, &w[0].edge_map) < (&w[1].vertex_map, &w[1].edge_map));
        }
        assert!(isos.iter().all(|i| i.is_valid(&g, &g)));
    }

    #[test]
    fn structure_of_delta_and_union() {
        let g = delta2();
        let s = structure(&g);
        assert_eq!((s.rank, s.components, s.min_valence, s.is_connected), (3, 1, 3, true));
        let u = g.disjoint_union(&rose(2)).unwrap();
        let s = structure(&u);
        assert_eq!((s.rank, s.components, s.is_connected), (5, 2, false));
        assert!(g.disjoint_union(&g).is_err());
    }
}
