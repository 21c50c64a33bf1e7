//! Stack and orbit scores of a graph, supergraph witnesses built from stacks,
//! polygonal-graph recognition and side profiles of subgraphs of polygons.
//!
//! Both scores reduce to a search over vertex permutations: an automorphism
//! `ψ` of a supergraph with vertex action `σ` must send the edges joining
//! `{u, v}` onto edges joining `{σu, σv}`, so the unordered vertex pairs
//! ("types") fall into `σ`-cycles and every cycle is independent. On a cycle
//! `t_0 .. t_{L-1}` where `Γ` has `γ_j` edges of type `t_j`, the supergraph
//! needs at least `k = max γ_j` edges of every type in the cycle, and the
//! number of `∼_ψ` classes is at least `Σγ_j − Σ min(γ_j, γ_{j+1})` (each
//! class ends at an edge whose successor is outside `Γ`), or 1 when that is
//! zero. A single `ψ`-cycle threading all `L·k` edges attains both, so the
//! per-permutation optimum is known in closed form and the minimum over all
//! permutations is the exact score.

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::atlas::families::make_polygonal;
use crate::error::{Error, Result};
use crate::graph::{validate_map, Edge, EdgeId, Graph, GraphIso, GraphMap, OrientedEdge, VertexId};
use crate::spectral::{lambda_pow_at_least, transition_matrix};
use crate::stacks::stack_partition;

/// Permutation searches beyond this many vertices are refused.
pub const MAX_SEARCH_VERTICES: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryWitness {
    /// `Γ`'s edges occupy ids `0..|EΓ|` in the same order, extra edges follow.
    pub supergraph: Graph,
    pub psi: GraphIso,
    pub class_count: usize,
    pub orbit_count: usize,
    /// Classes of `Γ`'s edge ids, ordered by least member.
    pub classes: Vec<Vec<EdgeId>>,
    pub extra_edges: usize,
}

impl SymmetryWitness {
    pub fn to_json(&self) -> serde_json::Value {
        let g = &self.supergraph;
        let label = |e: EdgeId| g.edge(e).label.clone();
        serde_json::json!({
            "class_count": self.class_count,
            "orbit_count": self.orbit_count,
            "extra_edges": self.extra_edges,
            "classes": self.classes.iter().map(|c| c.iter().map(|&e| label(e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "psi_vertices": self.psi.vertex_map.iter().map(|&v| g.vertex_name(v).to_string()).collect::<Vec<_>>(),
            "psi_edges": self.psi.edge_map.iter().map(|&o| crate::graph::oriented_label(g, o)).collect::<Vec<_>>(),
        })
    }
}

/// Maps each edge of `gamma` to the supergraph edge with the same label and ends.
fn embed(gamma: &Graph, sup: &Graph) -> Result<Vec<EdgeId>> {
    if gamma.vertex_names() != sup.vertex_names() {
        return Err(Error::Argument("supergraph must have the same vertex set".into()));
    }
    gamma
        .edges()
        .iter()
        .map(|e| {
            let id = sup
                .edge_by_label(&e.label)
                .ok_or_else(|| Error::Argument(format!("edge {} missing from supergraph", e.label)))?;
            let s = sup.edge(id);
            if (s.init, s.term) != (e.init, e.term) {
                return Err(Error::Argument(format!("edge {} has different ends in supergraph", e.label)));
            }
            Ok(id)
        })
        .collect()
}

/// The `∼_ψ` classes of `Γ`'s edges, generated by `a ∼ ψ(a)` whenever both
/// lie in `Γ` (membership up to orientation).
pub fn classes_under(gamma: &Graph, sup: &Graph, psi: &GraphIso) -> Result<Vec<Vec<EdgeId>>> {
    let emb = embed(gamma, sup)?;
    if !psi.is_valid(sup, sup) {
        return Err(Error::Argument("psi is not an automorphism of the supergraph".into()));
    }
    let mut back = vec![None; sup.num_edges()];
    for (i, &e) in emb.iter().enumerate() {
        back[e] = Some(i);
    }
    let n = gamma.num_edges();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        if let Some(j) = back[psi.edge_map[emb[i]].edge] {
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    Ok(by_root.into_values().collect())
}

/// Number of `ψ`-orbits on the supergraph's edges.
pub fn edge_orbit_count(psi: &GraphIso) -> usize {
    let n = psi.edge_map.len();
    let mut seen = vec![false; n];
    let mut orbits = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        orbits += 1;
        let mut e = s;
        while !seen[e] {
            seen[e] = true;
            e = psi.edge_map[e].edge;
        }
    }
    orbits
}

type VType = (VertexId, VertexId);

fn vtype(a: VertexId, b: VertexId) -> VType {
    (a.min(b), a.max(b))
}

/// Closed-form optimum for one vertex permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SigmaPlan {
    classes: usize,
    orbits: usize,
    extra: usize,
    /// Type cycles meeting `Γ`, each with `Γ`'s multiplicities.
    cycles: Vec<Vec<(VType, usize)>>,
}

fn plan(sigma: &[VertexId], mult: &HashMap<VType, usize>) -> SigmaPlan {
    let mut seen: HashSet<VType> = HashSet::new();
    let mut p = SigmaPlan {
        classes: 0,
        orbits: 0,
        extra: 0,
        cycles: Vec::new(),
    };
    let mut keys: Vec<VType> = mult.keys().copied().collect();
    keys.sort_unstable();
    for t0 in keys {
        if seen.contains(&t0) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut t = t0;
        loop {
            seen.insert(t);
            cyc.push((t, mult.get(&t).copied().unwrap_or(0)));
            t = vtype(sigma[t.0], sigma[t.1]);
            if t == t0 {
                break;
            }
        }
        let k = cyc.iter().map(|c| c.1).max().unwrap_or(0);
        let total: usize = cyc.iter().map(|c| c.1).sum();
        let l = cyc.len();
        let matched: usize = (0..l).map(|j| cyc[j].1.min(cyc[(j + 1) % l].1)).sum();
        p.classes += (total - matched).max(1);
        p.orbits += 1;
        p.extra += l * k - total;
        p.cycles.push(cyc);
    }
    p
}

fn fresh_label(taken: &mut HashSet<String>, counter: &mut usize, prefix: &str) -> String {
    loop {
        *counter += 1;
        let l = format!("{prefix}{counter}");
        if taken.insert(l.clone()) {
            return l;
        }
    }
}

/// Builds the supergraph and automorphism realizing `plan` for `σ`.
fn realize(gamma: &Graph, sigma: &[VertexId], p: &SigmaPlan) -> Result<SymmetryWitness> {
    let mut edges: Vec<Edge> = gamma.edges().to_vec();
    let mut taken: HashSet<String> = edges.iter().map(|e| e.label.clone()).collect();
    let mut counter = 0;
    let mut by_type: HashMap<VType, Vec<EdgeId>> = HashMap::new();
    for (i, e) in gamma.edges().iter().enumerate() {
        by_type.entry(vtype(e.init, e.term)).or_default().push(i);
    }
    // (edge, canonical orientation u -> v with u <= v)
    let canon = |edges: &[Edge], e: EdgeId| {
        let ed = &edges[e];
        OrientedEdge::new(e, ed.init <= ed.term)
    };
    let mut psi_edges: Vec<Option<OrientedEdge>> = Vec::new();
    let mut layers_all: Vec<Vec<Vec<EdgeId>>> = Vec::new();
    for cyc in &p.cycles {
        let k = cyc.iter().map(|c| c.1).max().unwrap_or(0);
        let l = cyc.len();
        let top = cyc.iter().position(|c| c.1 == k).expect("max exists");
        let order: Vec<(VType, usize)> = (0..l).map(|j| cyc[(top + 1 + j) % l]).collect();
        let mut layers = Vec::with_capacity(l);
        for &(t, _) in &order {
            let mut layer = by_type.get(&t).cloned().unwrap_or_default();
            while layer.len() < k {
                let label = fresh_label(&mut taken, &mut counter, "z");
                edges.push(Edge {
                    label,
                    init: t.0,
                    term: t.1,
                });
                layer.push(edges.len() - 1);
            }
            layers.push(layer);
        }
        layers_all.push(layers);
    }
    psi_edges.resize(edges.len(), None);
    for (cyc, layers) in p.cycles.iter().zip(&layers_all) {
        let l = cyc.len();
        let k = layers[0].len();
        for j in 0..l {
            for i in 0..k {
                let a = layers[j][i];
                let b = if j + 1 < l { layers[j + 1][i] } else { layers[0][(i + 1) % k] };
                let oa = canon(&edges, a);
                let ob = canon(&edges, b);
                let u = edges[a].init.min(edges[a].term);
                let target_start = sigma[u];
                let ob_start = if ob.forward { edges[b].init } else { edges[b].term };
                let img = if ob_start == target_start { ob } else { ob.reversed() };
                // psi(fwd a) from psi(oa) = img
                psi_edges[a] = Some(if oa.forward { img } else { img.reversed() });
            }
        }
    }
    let sup = Graph::new(gamma.vertex_names().to_vec(), edges)?;
    // edges of untouched types are fixed
    let edge_map: Vec<OrientedEdge> = psi_edges
        .into_iter()
        .enumerate()
        .map(|(e, o)| o.unwrap_or(OrientedEdge::fwd(e)))
        .collect();
    let psi = GraphIso {
        vertex_map: sigma.to_vec(),
        edge_map,
    };
    if !psi.is_valid(&sup, &sup) {
        return Err(Error::Internal("constructed psi is not an automorphism".into()));
    }
    let classes = classes_under(gamma, &sup, &psi)?;
    if classes.len() != p.classes {
        return Err(Error::Internal(format!(
            "witness has {} classes, expected {}",
            classes.len(),
            p.classes
        )));
    }
    Ok(SymmetryWitness {
        extra_edges: sup.num_edges() - gamma.num_edges(),
        orbit_count: edge_orbit_count(&psi),
        class_count: classes.len(),
        classes,
        supergraph: sup,
        psi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Objective {
    Classes,
    Orbits,
}

fn search(gamma: &Graph, budget: Option<usize>, obj: Objective) -> Result<SymmetryWitness> {
    let v = gamma.num_vertices();
    if v > MAX_SEARCH_VERTICES {
        return Err(Error::Budget(format!(
            "symmetry search over {v}! vertex permutations exceeds the cap of {MAX_SEARCH_VERTICES} vertices"
        )));
    }
    if gamma.num_edges() == 0 {
        return Err(Error::Argument("graph has no edges".into()));
    }
    let mut mult: HashMap<VType, usize> = HashMap::new();
    for e in gamma.edges() {
        *mult.entry(vtype(e.init, e.term)).or_default() += 1;
    }
    let perms: Vec<Vec<VertexId>> = (0..v).permutations(v).collect();
    let best = perms
        .par_iter()
        .filter_map(|s| {
            let p = plan(s, &mult);
            if budget.is_some_and(|b| p.extra > b) {
                return None;
            }
            let key = match obj {
                Objective::Classes => (p.classes, p.orbits, p.extra),
                Objective::Orbits => (p.orbits, p.classes, p.extra),
            };
            Some((key, s.clone(), p))
        })
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .expect("the identity permutation needs no extra edges");
    realize(gamma, &best.1, &best.2)
}

/// Fewest `∼_ψ` classes over supergraphs with at most `budget` extra edges.
/// Ties go to fewer orbits, then fewer extra edges, then the least vertex permutation.
pub fn score_upper_bound(gamma: &Graph, budget: usize) -> Result<SymmetryWitness> {
    search(gamma, Some(budget), Objective::Classes)
}

/// Fewest `ψ`-orbits on the supergraph's edges, under the same budget.
pub fn orbit_score_upper_bound(gamma: &Graph, budget: usize) -> Result<SymmetryWitness> {
    search(gamma, Some(budget), Objective::Orbits)
}

/// The stack score with an optimal witness; no budget on extra edges.
pub fn stack_score(gamma: &Graph) -> Result<SymmetryWitness> {
    search(gamma, None, Objective::Classes)
}

/// The orbit score with an optimal witness.
pub fn orbit_score(gamma: &Graph) -> Result<SymmetryWitness> {
    search(gamma, None, Objective::Orbits)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn vertex_period(vm: &[VertexId], v: VertexId) -> usize {
    let mut w = vm[v];
    let mut p = 1;
    while w != v {
        w = vm[w];
        p += 1;
    }
    p
}

/// Supergraph and automorphism whose classes are the stacks of `f`: each
/// stack `e, f(e), .., α` is closed into a cycle by new edges joining the
/// further iterates of its endpoints.
pub fn theorem_b_witness(f: &GraphMap) -> Result<SymmetryWitness> {
    if !f.is_vertex_bijective() {
        return Err(Error::Hypothesis("map is not a bijection on vertices".into()));
    }
    let part = stack_partition(f)?;
    let g = &*f.domain;
    let vm = &f.vertex_map;
    let mut edges = g.edges().to_vec();
    let mut taken: HashSet<String> = edges.iter().map(|e| e.label.clone()).collect();
    let mut psi: Vec<Option<OrientedEdge>> = vec![None; g.num_edges()];
    for (si, st) in part.stacks.iter().enumerate() {
        // oriented chain o_j = f^j(fwd root)
        let mut o = vec![OrientedEdge::fwd(st.root())];
        for _ in 1..st.size() {
            let img = f.image(*o.last().expect("nonempty"));
            o.push(img.first());
        }
        let (v0, w0) = (g.init(o[0]), g.term(o[0]));
        let per = {
            let (a, b) = (vertex_period(vm, v0), vertex_period(vm, w0));
            a / gcd(a, b) * b
        };
        let n = st.size();
        let q = n.div_ceil(per) * per;
        let (mut v, mut w) = (v0, w0);
        for _ in 0..n {
            v = vm[v];
            w = vm[w];
        }
        let mut extra = Vec::new();
        for j in n..q {
            let mut label = format!("z{}_{}", si + 1, j);
            while !taken.insert(label.clone()) {
                label.push('\'');
            }
            edges.push(Edge { label, init: v, term: w });
            extra.push(OrientedEdge::fwd(edges.len() - 1));
            v = vm[v];
            w = vm[w];
        }
        let cycle: Vec<OrientedEdge> = o.iter().copied().chain(extra).collect();
        psi.resize(edges.len(), None);
        for (j, &a) in cycle.iter().enumerate() {
            let b = cycle[(j + 1) % cycle.len()];
            psi[a.edge] = Some(if a.forward { b } else { b.reversed() });
        }
    }
    let sup = Graph::new(g.vertex_names().to_vec(), edges)?;
    let edge_map = psi
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("stacks do not cover every edge".into()))?;
    let psi = GraphIso {
        vertex_map: vm.clone(),
        edge_map,
    };
    if !psi.is_valid(&sup, &sup) {
        return Err(Error::Internal("stack cycle map is not an automorphism".into()));
    }
    let classes = classes_under(g, &sup, &psi)?;
    if classes.len() != part.stacks.len() {
        return Err(Error::Internal(format!(
            "{} classes for {} stacks",
            classes.len(),
            part.stacks.len()
        )));
    }
    Ok(SymmetryWitness {
        extra_edges: sup.num_edges() - g.num_edges(),
        orbit_count: edge_orbit_count(&psi),
        class_count: classes.len(),
        classes,
        supergraph: sup,
        psi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalSpec {
    pub s: usize,
    pub k: usize,
    /// Side of each edge of the recognized graph.
    pub side_assignment: Vec<usize>,
    /// Isomorphism onto `make_polygonal(s, k)`.
    pub iso: GraphIso,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Polygonal(PolygonalSpec),
    NotPolygonal(String),
}

impl Recognition {
    pub fn spec(&self) -> Option<&PolygonalSpec> {
        match self {
            Recognition::Polygonal(s) => Some(s),
            Recognition::NotPolygonal(_) => None,
        }
    }
}

/// Recognizes `P_{s,k}` up to isomorphism by its shape: a cycle of `s`
/// vertices with `k` parallel edges on every side (a rose when `s = 1`).
pub fn recognize_polygonal(g: &Graph) -> Result<Recognition> {
    let st = crate::graph::structure(g);
    if !st.is_connected {
        return Err(Error::Argument("graph is disconnected".into()));
    }
    let s = g.num_vertices();
    let e = g.num_edges();
    let no = |r: String| Ok(Recognition::NotPolygonal(r));
    if e == 0 {
        return no("graph has no edges".into());
    }
    // walk the vertex cycle w_0, w_1, ..
    let order: Vec<VertexId> = if s == 1 {
        vec![0]
    } else {
        if g.edges().iter().any(|ed| ed.init == ed.term) {
            return no("graph has a loop".into());
        }
        let adj = g.adjacency_counts();
        let nbrs: Vec<Vec<VertexId>> = (0..s)
            .map(|v| (0..s).filter(|&w| w != v && adj[v][w] > 0).collect())
            .collect();
        let want = if s == 2 { 1 } else { 2 };
        if let Some(v) = (0..s).find(|&v| nbrs[v].len() != want) {
            return no(format!("vertex {} has {} neighbours", g.vertex_name(v), nbrs[v].len()));
        }
        let mut order = vec![0, nbrs[0][0]];
        while order.len() < s {
            let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
            let nx = *nbrs[cur].iter().find(|&&w| w != prev).expect("two neighbours");
            if nx == 0 {
                return no("underlying simple graph is not a single cycle".into());
            }
            order.push(nx);
        }
        order
    };
    let pos: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // side i joins order[i] and order[i+1 mod s]
    let mut sides: Vec<Vec<EdgeId>> = vec![Vec::new(); s];
    if s == 2 {
        if e % 2 == 1 {
            return no(format!("{e} parallel edges between two vertices cannot form two equal sides"));
        }
        sides[0] = (0..e / 2).collect();
        sides[1] = (e / 2..e).collect();
    } else {
        for (id, ed) in g.edges().iter().enumerate() {
            let (a, b) = (pos[&ed.init], pos[&ed.term]);
            let side = if s == 1 || (a + 1) % s == b { a } else { b };
            sides[side].push(id);
        }
    }
    let k = sides[0].len();
    if sides.iter().any(|x| x.len() != k) {
        let counts = sides.iter().map(|x| x.len().to_string()).collect::<Vec<_>>().join(", ");
        return no(format!("side multiplicities differ ({counts})"));
    }
    let mut side_assignment = vec![0; e];
    let mut edge_map = vec![OrientedEdge::fwd(0); e];
    for (i, side) in sides.iter().enumerate() {
        for (j, &id) in side.iter().enumerate() {
            side_assignment[id] = i;
            let target = i * k + j;
            let forward = s == 1 || g.edge(id).init == order[i];
            edge_map[id] = OrientedEdge::new(target, forward);
        }
    }
    let mut vertex_map = vec![0; s];
    for (i, &v) in order.iter().enumerate() {
        vertex_map[v] = i;
    }
    let iso = GraphIso { vertex_map, edge_map };
    if !iso.is_valid(g, &make_polygonal(s, k)?) {
        return Err(Error::Internal("polygonal isomorphism failed validation".into()));
    }
    Ok(Recognition::Polygonal(PolygonalSpec {
        s,
        k,
        side_assignment,
        iso,
    }))
}

/// The rotation of `P_{s,k}` sending side `i` to side `i+1` and the last side
/// to the first shifted by one, which is transitive on vertices and edges.
pub fn polygon_rotation(s: usize, k: usize) -> GraphIso {
    let mut edge_map = Vec::with_capacity(s * k);
    for i in 0..s {
        for j in 0..k {
            let t = if i + 1 < s { (i + 1) * k + j } else { (j + 1) % k };
            edge_map.push(OrientedEdge::fwd(t));
        }
    }
    GraphIso {
        vertex_map: (0..s).map(|v| (v + 1) % s).collect(),
        edge_map,
    }
}

/// [`polygon_rotation`] transported to a recognized polygonal graph.
pub fn edge_transitive_automorphism(spec: &PolygonalSpec) -> GraphIso {
    let rot = polygon_rotation(spec.s, spec.k);
    spec.iso.inverse().after(&rot.after(&spec.iso))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideProfile {
    pub counts: Vec<usize>,
    pub m: usize,
    pub t: usize,
    pub holds: bool,
}

/// Per-side edge counts of `Γ` inside a polygonal host, where `Γ` is the
/// `ψ`-orbit prefix of length `|EΓ|` starting at host edge `e`. With
/// `|EΓ| = s·m + t`, exactly `t` sides should carry `m + 1` edges.
pub fn side_profile(
    gamma: &Graph,
    host: &Graph,
    spec: &PolygonalSpec,
    psi: &GraphIso,
    e: EdgeId,
) -> Result<SideProfile> {
    if spec.s < 3 {
        return Err(Error::Hypothesis("side profiles need at least three sides".into()));
    }
    if !crate::graph::structure(gamma).is_connected {
        return Err(Error::Hypothesis("subgraph is disconnected".into()));
    }
    let emb = embed(gamma, host)?;
    if !psi.is_valid(host, host) {
        return Err(Error::Argument("psi is not an automorphism of the host".into()));
    }
    let n = gamma.num_edges();
    let mut orbit = vec![e];
    let mut cur = psi.edge_map[e].edge;
    while cur != e {
        orbit.push(cur);
        cur = psi.edge_map[cur].edge;
    }
    if orbit.len() != host.num_edges() {
        return Err(Error::Hypothesis("psi is not edge-transitive".into()));
    }
    let prefix: HashSet<EdgeId> = orbit[..n].iter().copied().collect();
    let sub: HashSet<EdgeId> = emb.iter().copied().collect();
    if prefix != sub {
        return Err(Error::Hypothesis("the orbit prefix from e is not the subgraph's edge set".into()));
    }
    let mut counts = vec![0; spec.s];
    for &h in &emb {
        counts[spec.side_assignment[h]] += 1;
    }
    let (m, t) = (n / spec.s, n % spec.s);
    let big = counts.iter().filter(|&&c| c == m + 1).count();
    let small = counts.iter().filter(|&&c| c == m).count();
    let holds = if t == 0 { small == spec.s } else { big == t && small == spec.s - t };
    Ok(SideProfile { counts, m, t, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corollary63Check {
    /// Stack count `p`, the witness upper bound for the score.
    pub score_bound: usize,
    /// Exact score when the vertex count allows the search, else 1.
    pub score_lower: usize,
    pub exact: bool,
    pub n: usize,
    pub holds: bool,
}

/// Checks `λ^n ≥ 𝔖 + 1` and `λ^n ≥ p + 1` for a vertex-periodic expanding
/// irreducible map, with `p` from [`theorem_b_witness`].
pub fn corollary_63_check(f: &GraphMap) -> Result<Corollary63Check> {
    if let Err(v) = validate_map(f) {
        return Err(Error::InvalidMap(v.to_string()));
    }
    let w = theorem_b_witness(f)?;
    let g = &*f.domain;
    let (score, exact) = if g.num_vertices() <= MAX_SEARCH_VERTICES {
        (stack_score(g)?.class_count, true)
    } else {
        (1, false)
    };
    if score > w.class_count {
        return Err(Error::Internal("exact score exceeds the witness bound".into()));
    }
    let t = transition_matrix(f, None)?;
    let n = t.n();
    let holds = lambda_pow_at_least(&t, n, score as u64 + 1) && lambda_pow_at_least(&t, n, w.class_count as u64 + 1);
    Ok(Corollary63Check {
        score_bound: w.class_count,
        score_lower: score,
        exact,
        n,
        holds,
    })
}
