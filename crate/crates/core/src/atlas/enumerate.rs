//! Connected multigraphs of a given rank with every valence at least 3, and
//! the single-fold self maps they carry.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::atlas::families::{make_delta_minus, make_delta_plus, make_rose};
use crate::error::{Error, Result};
use crate::folds::fold_proper_full;
use crate::graph::{are_isomorphic, for_each_isomorphism, EdgePath, Graph, GraphMap, OrientedEdge};
use crate::spectral::{
    char_poly, default_precision, is_irreducible, is_train_track, leading_eigenvalue, transition_matrix,
    AlgebraicValue,
};

/// Largest rank [`enumerate_graphs`] accepts.
pub const MAX_RANK: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapFlags {
    pub irreducible: bool,
    pub expanding: bool,
    pub train_track: bool,
    pub vertex_periodic: bool,
}

#[derive(Clone, Debug)]
pub struct MapRecord {
    pub graph: Arc<Graph>,
    pub map: GraphMap,
    pub m: usize,
    pub lambda: AlgebraicValue,
    pub flags: MapFlags,
}

/// Memoizes leading eigenvalues by characteristic polynomial: the spectral
/// radius of a nonnegative matrix is its largest real root, so equal
/// polynomials give equal values.
#[derive(Default)]
pub struct LambdaCache(std::sync::Mutex<HashMap<crate::poly::IntPoly, AlgebraicValue>>);

impl LambdaCache {
    pub fn get(&self, t: &crate::spectral::TransitionMatrix) -> AlgebraicValue {
        let cp = char_poly(t);
        if let Some(v) = self.0.lock().expect("cache lock").get(&cp) {
            return v.clone();
        }
        let v = leading_eigenvalue(t, &default_precision());
        self.0.lock().expect("cache lock").insert(cp, v.clone());
        v
    }
}

/// Builds a record with every flag recomputed from the map.
pub fn make_record(map: GraphMap, m: usize, cache: &LambdaCache) -> Result<MapRecord> {
    let t = transition_matrix(&map, None)?;
    let lambda = cache.get(&t);
    let flags = MapFlags {
        irreducible: is_irreducible(&t),
        expanding: lambda.cmp_int(1) == std::cmp::Ordering::Greater,
        train_track: is_train_track(&map),
        vertex_periodic: map.is_vertex_bijective(),
    };
    Ok(MapRecord {
        graph: map.domain.clone(),
        map,
        m,
        lambda,
        flags,
    })
}

fn degree_sequences(v: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(v: usize, left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == v {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = v - cur.len();
        for d in (3..=max.min(left)).rev() {
            if left - d < 3 * (slots - 1) || left - d > d * (slots - 1) {
                continue;
            }
            cur.push(d);
            go(v, left - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(v, total, total, &mut Vec::new(), &mut out);
    out
}

/// Fills the upper-triangular multiplicity matrix row by row, loops counting
/// twice toward the valence. Vertices `j-1, j` that agree on degree and on
/// every finished row can be swapped without changing anything chosen so
/// far, so row `i` is kept non-increasing across them.
fn fill(deg: &[usize], cb: &mut dyn FnMut(&[Vec<usize>])) {
    struct St<'a> {
        deg: &'a [usize],
        rem: Vec<usize>,
        mult: Vec<Vec<usize>>,
    }
    fn go(st: &mut St<'_>, i: usize, j: usize, cb: &mut dyn FnMut(&[Vec<usize>])) {
        let v = st.deg.len();
        if i == v {
            cb(&st.mult);
            return;
        }
        if j == v {
            if st.rem[i] == 0 {
                go(st, i + 1, i + 1, cb);
            }
            return;
        }
        let mut max = if i == j { st.rem[i] / 2 } else { st.rem[i].min(st.rem[j]) };
        if j > i + 1 && st.deg[j] == st.deg[j - 1] && (0..i).all(|r| st.mult[r][j] == st.mult[r][j - 1]) {
            max = max.min(st.mult[i][j - 1]);
        }
        let min = if j + 1 == v && i != j { st.rem[i] } else { 0 };
        if min > max {
            return;
        }
        let w = if i == j { 2 } else { 1 };
        for m in min..=max {
            st.rem[i] -= w * m;
            if i != j {
                st.rem[j] -= m;
            }
            st.mult[i][j] = m;
            go(st, i, j + 1, cb);
            st.mult[i][j] = 0;
            st.rem[i] += w * m;
            if i != j {
                st.rem[j] += m;
            }
        }
    }
    let v = deg.len();
    let mut st = St {
        deg,
        rem: deg.to_vec(),
        mult: vec![vec![0; v]; v],
    };
    go(&mut st, 0, 0, cb);
}

fn connected(mult: &[Vec<usize>]) -> bool {
    let v = mult.len();
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..v {
            let m = if a < b { mult[a][b] } else { mult[b][a] };
            if m > 0 && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Symmetric multiplicity matrix; loops sit on the diagonal.
fn symmetric(mult: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let v = mult.len();
    (0..v).map(|i| (0..v).map(|j| mult[i.min(j)][i.max(j)]).collect()).collect()
}

/// Relabels colors by sorted signature until the partition is stable.
fn refine(m: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    let v = m.len();
    let mut classes = colors.iter().collect::<HashSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..v)
            .map(|a| {
                let mut nb: Vec<(usize, usize)> = (0..v).filter(|&b| m[a][b] > 0).map(|b| (colors[b], m[a][b])).collect();
                nb.sort_unstable();
                (colors[a], nb)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<(usize, usize)>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        colors = sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

/// Canonical form by color refinement and individualization: the least
/// relabeled upper triangle over all leaves of the search tree.
fn canonical_key(mult: &[Vec<usize>]) -> Vec<usize> {
    fn search(m: &[Vec<usize>], colors: Vec<usize>, best: &mut Option<Vec<usize>>) {
        let v = m.len();
        let colors = refine(m, colors);
        let mut count = vec![0usize; v];
        for &c in &colors {
            count[c] += 1;
        }
        match (0..v).find(|&c| count[c] > 1) {
            None => {
                let mut order = vec![0; v];
                for (a, &c) in colors.iter().enumerate() {
                    order[c] = a;
                }
                let key: Vec<usize> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).map(|(i, j)| m[order[i]][order[j]]).collect();
                if best.as_ref().is_none_or(|b| key < *b) {
                    *best = Some(key);
                }
            }
            Some(cell) => {
                for a in (0..v).filter(|&a| colors[a] == cell) {
                    let split = colors.iter().enumerate().map(|(b, &c)| 2 * c + usize::from(c == cell && b != a)).collect();
                    search(m, split, best);
                }
            }
        }
    }
    let m = symmetric(mult);
    let init = (0..m.len()).map(|a| m[a].iter().sum::<usize>() + m[a][a]).collect();
    let mut best = None;
    search(&m, init, &mut best);
    best.expect("search reaches a leaf")
}

fn to_graph(mult: &[Vec<usize>]) -> Graph {
    let v = mult.len();
    let mut triples = Vec::new();
    for i in 0..v {
        for j in i..v {
            for _ in 0..mult[i][j] {
                triples.push((format!("e{}", triples.len() + 1), i, j));
            }
        }
    }
    Graph::from_triples(v, triples).expect("generated graphs are well formed")
}

/// All connected graphs of rank `rank` with every valence at least 3, one per
/// isomorphism class. Such graphs have at most `2(rank-1)` vertices and
/// `3(rank-1)` edges.
pub fn enumerate_graphs(rank: usize) -> Result<Vec<Graph>> {
    if rank < 2 {
        return Err(Error::Argument("rank must be at least 2".into()));
    }
    if rank > MAX_RANK {
        return Err(Error::Budget(format!("rank {rank} is above the enumeration cap {MAX_RANK}")));
    }
    let mut out = Vec::new();
    for v in 1..=2 * (rank - 1) {
        let e = rank + v - 1;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut found: Vec<Graph> = Vec::new();
        for deg in degree_sequences(v, 2 * e) {
            fill(&deg, &mut |mult| {
                if connected(mult) && seen.insert(canonical_key(mult)) {
                    found.push(to_graph(mult));
                }
            });
        }
        out.extend(found);
    }
    Ok(out)
}

/// `h ∘ φ` for a proper full fold `φ` of `e1` over `e0` and an isomorphism
/// `h` from the folded graph back to `g`; images are written directly.
fn fold_then_iso(g: &Arc<Graph>, e0: OrientedEdge, e1: OrientedEdge, h: &crate::graph::GraphIso) -> GraphMap {
    let mut em: Vec<EdgePath> = h.edge_map.iter().map(|&o| EdgePath::single(o)).collect();
    let img = EdgePath(vec![h.apply_oriented(e0), h.apply_oriented(e1)]);
    em[e1.edge] = if e1.forward { img } else { img.reversed() };
    GraphMap::new(g.clone(), g.clone(), h.vertex_map.clone(), em)
}

/// Calls `visit` on every map `h ∘ φ` with `φ` a proper full fold of `g`
/// and `h` an isomorphism from the folded graph back to `g`, in a fixed
/// order, until `visit` returns false. Maps may repeat.
pub fn for_each_single_fold_map(g: &Arc<Graph>, mut visit: impl FnMut(GraphMap) -> bool) {
    for d0 in g.oriented_edges() {
        for d1 in g.oriented_edges() {
            if d0.edge == d1.edge || g.init(d0) != g.init(d1) {
                continue;
            }
            let Ok(fold) = fold_proper_full(g, d0, d1) else {
                continue;
            };
            let mut go_on = true;
            for_each_isomorphism(&fold.graph, g, |h| {
                go_on = visit(fold_then_iso(g, d0, d1, h));
                go_on
            });
            if !go_on {
                return;
            }
        }
    }
}

/// Distinct single-fold self maps of `g` with irreducible transition matrix.
pub fn enumerate_single_fold_maps(g: &Arc<Graph>) -> Result<Vec<MapRecord>> {
    enumerate_single_fold_maps_with(g, &LambdaCache::default())
}

pub fn enumerate_single_fold_maps_with(g: &Arc<Graph>, cache: &LambdaCache) -> Result<Vec<MapRecord>> {
    let mut seen: HashSet<(Vec<usize>, Vec<Vec<usize>>)> = HashSet::new();
    let mut maps = Vec::new();
    for_each_single_fold_map(g, |m| {
        if seen.insert((m.vertex_map.clone(), m.edge_key())) {
            maps.push(m);
        }
        true
    });
    let recs: Vec<Option<MapRecord>> = maps
        .into_par_iter()
        .map(|m| -> Result<Option<MapRecord>> {
            let t = transition_matrix(&m, None)?;
            if !is_irreducible(&t) {
                return Ok(None);
            }
            make_record(m, 1, cache).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(recs.into_iter().flatten().collect())
}

/// Number of distinct single-fold self maps, irreducible or not.
pub fn count_single_fold_maps(g: &Arc<Graph>) -> usize {
    let mut seen: HashSet<(Vec<usize>, Vec<Vec<usize>>)> = HashSet::new();
    for_each_single_fold_map(g, |m| {
        seen.insert((m.vertex_map.clone(), m.edge_key()));
        true
    });
    seen.len()
}

/// Whether some single-fold self map of `g` has irreducible transition matrix.
pub fn admits_single_fold_map(g: &Arc<Graph>) -> bool {
    let mut found = false;
    for_each_single_fold_map(g, |m| {
        found = transition_matrix(&m, None).map(|t| is_irreducible(&t)).unwrap_or(false);
        !found
    });
    found
}

/// Names a graph when it is one of the families singled out by the
/// single-fold classification.
pub fn family_name(g: &Graph) -> Option<String> {
    let r = crate::graph::structure(g).rank;
    if are_isomorphic(g, &make_rose(r).ok()?) {
        return Some(format!("R{r}"));
    }
    for k in 2..=r {
        if let Ok(d) = make_delta_minus(k) {
            if are_isomorphic(g, &d) {
                return Some(format!("Delta{k}-"));
            }
        }
        if let Ok(d) = make_delta_plus(k) {
            if are_isomorphic(g, &d) {
                return Some(format!("Delta{k}+"));
            }
        }
    }
    None
}

/// The graphs of rank `r` expected to carry an irreducible single-fold map.
pub fn expected_admitting(r: usize) -> Vec<String> {
    let mut v = vec![format!("R{r}")];
    if r % 3 == 0 && r >= 3 {
        v.push(format!("Delta{}-", (r + 3) / 3));
    }
    if r % 3 == 2 && (r + 1) / 3 >= 2 {
        v.push(format!("Delta{}+", (r + 1) / 3));
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremCReport {
    pub rank: usize,
    pub graphs_examined: usize,
    pub admitting: Vec<String>,
    pub expected: Vec<String>,
    pub holds: bool,
}

/// Enumerates the rank-`r` graphs and records which carry an irreducible
/// single-fold map; unnamed admitting graphs are reported by index.
pub fn theorem_c_verify(rank: usize) -> Result<TheoremCReport> {
    let graphs: Vec<Arc<Graph>> = enumerate_graphs(rank)?.into_iter().map(Arc::new).collect();
    let admits: Vec<bool> = graphs.par_iter().map(admits_single_fold_map).collect();
    let mut admitting: Vec<String> = graphs
        .iter()
        .zip(&admits)
        .enumerate()
        .filter(|(_, (_, &a))| a)
        .map(|(i, (g, _))| family_name(g).unwrap_or_else(|| format!("graph#{i}")))
        .collect();
    admitting.sort();
    let mut expected = expected_admitting(rank);
    expected.sort();
    Ok(TheoremCReport {
        rank,
        graphs_examined: graphs.len(),
        holds: admitting == expected,
        admitting,
        expected,
    })
}
