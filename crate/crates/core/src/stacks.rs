//! Mixing and surplus edges, stacks, and the stack graph with its weights,
//! arc lengths and directed balls.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::folds::decompose;
use crate::graph::{validate_map, EdgeId, GraphMap};
use crate::spectral::{
    default_precision, is_irreducible, leading_eigenvalue, transition_matrix, AlgebraicValue,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClasses {
    pub mixing: Vec<EdgeId>,
    pub surplus: Vec<EdgeId>,
}

pub fn classify_edges(f: &GraphMap) -> EdgeClasses {
    let n = f.domain.num_edges();
    let mixing: Vec<EdgeId> = (0..n).filter(|&e| f.edge_map[e].len() > 1).collect();
    let surplus = (0..n)
        .filter(|&e| {
            let p = &f.edge_map[e];
            p.len() == 1 && (0..n).any(|u| u != e && f.edge_map[u].len() == 1 && f.edge_map[u].0[0].edge == p.0[0].edge)
        })
        .collect();
    EdgeClasses { mixing, surplus }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FinalKind {
    Mixing,
    Surplus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stack {
    pub name: String,
    /// `[e, f(e), ..., f^s(e)]` as unoriented edges.
    pub chain: Vec<EdgeId>,
    pub final_kind: FinalKind,
}

impl Stack {
    pub fn root(&self) -> EdgeId {
        self.chain[0]
    }

    pub fn final_edge(&self) -> EdgeId {
        *self.chain.last().expect("stacks are nonempty")
    }

    pub fn size(&self) -> usize {
        self.chain.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackPartition {
    pub stacks: Vec<Stack>,
    pub stack_of: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let nx = parent[x];
        parent[x] = r;
        x = nx;
    }
    r
}

fn stem(label: &str) -> &str {
    label.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'' || c == '_')
}

/// Expanding irreducible self-map, the setting in which stacks are chains.
fn check_expanding_irreducible(f: &GraphMap) -> Result<crate::spectral::TransitionMatrix> {
    if let Err(v) = validate_map(f) {
        return Err(Error::InvalidMap(v.to_string()));
    }
    let t = transition_matrix(f, None)?;
    if !is_irreducible(&t) {
        return Err(Error::Hypothesis("transition matrix is reducible".into()));
    }
    if !crate::spectral::lambda_exceeds_one(&t) {
        return Err(Error::Hypothesis("map is not expanding".into()));
    }
    Ok(t)
}

/// Stacks computed with `e ~ f(e)` for every non-mixing non-surplus `e`, each
/// linearized into its chain from the root edge.
pub fn stack_partition(f: &GraphMap) -> Result<StackPartition> {
    check_expanding_irreducible(f)?;
    let g = &f.domain;
    let n = g.num_edges();
    let cls = classify_edges(f);
    let mut plain = vec![true; n];
    for &e in cls.mixing.iter().chain(&cls.surplus) {
        plain[e] = false;
    }
    let next = |e: EdgeId| f.edge_map[e].0[0].edge;
    let mut parent: Vec<usize> = (0..n).collect();
    let mut is_image = vec![false; n];
    for e in 0..n {
        if plain[e] {
            let (a, b) = (find(&mut parent, e), find(&mut parent, next(e)));
            parent[a] = b;
            is_image[next(e)] = true;
        }
    }
    let mut classes: Vec<Vec<EdgeId>> = Vec::new();
    let mut class_of_root = vec![usize::MAX; n];
    for e in 0..n {
        let r = find(&mut parent, e);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_of_root[r]].push(e);
    }
    let mut stacks = Vec::with_capacity(classes.len());
    for class in &classes {
        let roots: Vec<EdgeId> = class.iter().copied().filter(|&e| !is_image[e]).collect();
        if roots.len() != 1 {
            return Err(Error::Internal(format!(
                "stack containing {} has {} root edges",
                g.edge(class[0]).label,
                roots.len()
            )));
        }
        let mut chain = vec![roots[0]];
        let mut cur = roots[0];
        while plain[cur] {
            cur = next(cur);
            if chain.contains(&cur) {
                return Err(Error::Internal("stack chain closes up on itself".into()));
            }
            chain.push(cur);
        }
        if chain.len() != class.len() {
            return Err(Error::Internal(format!(
                "stack containing {} is not a chain",
                g.edge(class[0]).label
            )));
        }
        let final_kind = if f.edge_map[cur].len() > 1 {
            FinalKind::Mixing
        } else {
            FinalKind::Surplus
        };
        stacks.push(Stack {
            name: String::new(),
            chain,
            final_kind,
        });
    }
    let stems: Vec<&str> = stacks.iter().map(|s| stem(&g.edge(s.root()).label)).collect();
    let unique: BTreeSet<&str> = stems.iter().copied().collect();
    let use_stems = unique.len() == stems.len() && stems.iter().all(|s| !s.is_empty());
    for (s, st) in stacks.iter_mut().zip(&stems) {
        s.name = if use_stems {
            st.to_string()
        } else {
            g.edge(s.root()).label.clone()
        };
    }
    let mut stack_of = vec![0; n];
    for (i, s) in stacks.iter().enumerate() {
        for &e in &s.chain {
            stack_of[e] = i;
        }
    }
    Ok(StackPartition { stacks, stack_of })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackArc {
    pub from: usize,
    pub to: usize,
    pub length: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StackGraph {
    pub partition: StackPartition,
    pub weights: Vec<usize>,
    pub arcs: Vec<StackArc>,
}

/// Unoriented edges traversed by `f(p)` given those traversed by `p`.
fn image_support(f: &GraphMap, support: &[bool]) -> Vec<bool> {
    let mut out = vec![false; support.len()];
    for (e, &on) in support.iter().enumerate() {
        if on {
            for o in f.edge_map[e].steps() {
                out[o.edge] = true;
            }
        }
    }
    out
}

pub fn stack_graph(f: &GraphMap) -> Result<StackGraph> {
    let partition = stack_partition(f)?;
    let n = f.domain.num_edges();
    let p = partition.stacks.len();
    let weights = partition
        .stacks
        .iter()
        .map(|s| f.edge_map[s.final_edge()].len() - 1)
        .collect();
    let mut arcs = Vec::new();
    for i in 0..p {
        let alpha = partition.stacks[i].final_edge();
        let mut targets = BTreeSet::new();
        for o in f.edge_map[alpha].steps() {
            targets.insert(partition.stack_of[o.edge]);
        }
        let mut support = vec![false; n];
        support[alpha] = true;
        let mut length = vec![usize::MAX; p];
        let mut remaining = targets.len();
        let mut s = 0;
        while remaining > 0 && s <= n {
            support = image_support(f, &support);
            s += 1;
            for &j in &targets {
                if length[j] == usize::MAX && support[partition.stacks[j].final_edge()] {
                    length[j] = s;
                    remaining -= 1;
                }
            }
        }
        for &j in &targets {
            if length[j] == usize::MAX {
                return Err(Error::Internal("arc length exceeds the stack size bound".into()));
            }
            arcs.push(StackArc { from: i, to: j, length: length[j] });
        }
    }
    Ok(StackGraph { partition, weights, arcs })
}

impl StackGraph {
    pub fn num_stacks(&self) -> usize {
        self.weights.len()
    }

    pub fn arc_length(&self, from: usize, to: usize) -> Option<usize> {
        self.arcs.iter().find(|a| a.from == from && a.to == to).map(|a| a.length)
    }

    pub fn stack_by_name(&self, name: &str) -> Option<usize> {
        self.partition.stacks.iter().position(|s| s.name == name)
    }

    /// Least `s(P)` over directed paths from `i`.
    pub fn distances(&self, i: usize) -> Vec<Option<usize>> {
        let p = self.num_stacks();
        let mut dist = vec![None; p];
        let mut heap = BinaryHeap::new();
        dist[i] = Some(0);
        heap.push(Reverse((0usize, i)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|x| x < d) {
                continue;
            }
            for a in self.arcs.iter().filter(|a| a.from == v) {
                let nd = d + a.length;
                if dist[a.to].is_none_or(|x| nd < x) {
                    dist[a.to] = Some(nd);
                    heap.push(Reverse((nd, a.to)));
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        (0..self.num_stacks()).all(|i| self.distances(i).iter().all(Option::is_some))
    }

    pub fn to_dot(&self, f: &GraphMap) -> String {
        let mut s = String::from("digraph stackgraph {\n");
        for (i, st) in self.partition.stacks.iter().enumerate() {
            let _ = writeln!(
                s,
                "  k{i} [label=\"{} ({})\" xlabel=\"{}\"];",
                st.name,
                f.domain.edge(st.final_edge()).label,
                self.weights[i]
            );
        }
        for a in &self.arcs {
            let _ = writeln!(s, "  k{} -> k{} [label=\"{}\"];", a.from, a.to, a.length);
        }
        s.push_str("}\n");
        s
    }
}

/// Stacks reachable from `i` by a directed path with `s(P) <= d`.
pub fn directed_ball(sg: &StackGraph, i: usize, d: usize) -> Vec<usize> {
    sg.distances(i)
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_some_and(|x| x <= d))
        .map(|(j, _)| j)
        .collect()
}

/// Stacks reached from `i` by a directed path with `s(P) = d` exactly.
pub fn reachable_at_length(sg: &StackGraph, i: usize, d: usize) -> Vec<usize> {
    let p = sg.num_stacks();
    let mut at = vec![vec![false; p]; d + 1];
    at[0][i] = true;
    for len in 0..d {
        for v in 0..p {
            if !at[len][v] {
                continue;
            }
            for a in sg.arcs.iter().filter(|a| a.from == v && len + a.length <= d) {
                at[len + a.length][a.to] = true;
            }
        }
    }
    (0..p).filter(|&j| at[d][j]).collect()
}

/// Occurrence counts of every edge in `f^k(e)` for `k = 0..=steps`.
fn iterate_counts(f: &GraphMap, e: EdgeId, steps: usize) -> Vec<Vec<u128>> {
    let n = f.domain.num_edges();
    let mut cur = vec![0u128; n];
    cur[e] = 1;
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        let mut next = vec![0u128; n];
        for (a, &c) in cur.iter().enumerate() {
            if c > 0 {
                for o in f.edge_map[a].steps() {
                    next[o.edge] = next[o.edge].saturating_add(c);
                }
            }
        }
        out.push(next.clone());
        cur = next;
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BallGrowthReport {
    pub strongly_connected: bool,
    pub balls_cover: bool,
    pub growth_checks: usize,
    pub path_checks: usize,
    pub failures: Vec<String>,
}

impl BallGrowthReport {
    pub fn holds(&self) -> bool {
        self.strongly_connected && self.balls_cover && self.failures.is_empty()
    }
}

/// Checks the growth inequality `|f^{d+1}(alpha_i)| >= 1 + sum of weights over B_d`
/// for every stack and `0 <= d <= n - n_i`, that shortest paths are realized by
/// traversals, strong connectivity, and that `B_{n-n_i}` covers every stack.
pub fn verify_ball_growth(f: &GraphMap) -> Result<BallGrowthReport> {
    let sg = stack_graph(f)?;
    let n = f.domain.num_edges();
    let mut rep = BallGrowthReport {
        strongly_connected: sg.is_strongly_connected(),
        balls_cover: true,
        ..Default::default()
    };
    for (i, st) in sg.partition.stacks.iter().enumerate() {
        let alpha = st.final_edge();
        let dmax = n - st.size();
        let dist = sg.distances(i);
        if directed_ball(&sg, i, dmax).len() != sg.num_stacks() {
            rep.balls_cover = false;
        }
        let counts = iterate_counts(f, alpha, dmax + 1);
        for d in 0..=dmax {
            let len: u128 = counts[d + 1].iter().fold(0u128, |s, &c| s.saturating_add(c));
            let rhs: u128 = 1 + directed_ball(&sg, i, d).iter().map(|&j| sg.weights[j] as u128).sum::<u128>();
            rep.growth_checks += 1;
            if len < rhs {
                rep.failures.push(format!("stack {} at d={d}: {len} < {rhs}", st.name));
            }
        }
        for (j, dj) in dist.iter().enumerate() {
            let Some(dj) = *dj else { continue };
            if dj == 0 {
                continue;
            }
            let aj = sg.partition.stacks[j].final_edge();
            let hit = if dj <= dmax + 1 {
                counts[dj][aj] > 0
            } else {
                iterate_counts(f, alpha, dj)[dj][aj] > 0
            };
            rep.path_checks += 1;
            if !hit {
                rep.failures.push(format!(
                    "f^{dj} of the final edge of {} misses the final edge of {}",
                    st.name, sg.partition.stacks[j].name
                ));
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct TheoremACheck {
    pub m: usize,
    pub n: usize,
    pub lambda: AlgebraicValue,
    pub holds: bool,
}

impl TheoremACheck {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "lambda": self.lambda.to_json(),
            "holds": self.holds,
        })
    }
}

/// Decides `lambda^n >= m + 1` with `m` from the deterministic decomposition.
pub fn theorem_a_check(f: &GraphMap) -> Result<TheoremACheck> {
    let m = decompose(f)?.m();
    theorem_a_check_with(f, m)
}

/// As [`theorem_a_check`] for an externally supplied fold count.
pub fn theorem_a_check_with(f: &GraphMap, m: usize) -> Result<TheoremACheck> {
    let t = transition_matrix(f, None)?;
    if !is_irreducible(&t) {
        return Err(Error::Hypothesis("transition matrix is reducible".into()));
    }
    let n = t.n();
    let lambda = leading_eigenvalue(&t, &default_precision());
    let holds = lambda.pow_cmp(n, &BigInt::from(m + 1)) != Ordering::Less;
    Ok(TheoremACheck { m, n, lambda, holds })
}
