//! Few-fold self maps below a stretch-factor bound.
//!
//! A self map that factors as `m` folds and an isomorphism on a graph with
//! `n` edges has `λ^n ≥ m + 1`, so for a bound `β` only pairs `(n, m)` with
//! `β^n ≥ m + 1` can hold maps with `λ ≤ β`. For each admissible pair the
//! census walks all fold sequences of length `m` (proper full, complete,
//! partial), pruned by the vertex count that must be restored by the end,
//! and closes each sequence ending on a graph isomorphic to the start with
//! every such isomorphism.
//!
//! Checkpoints are JSON: `{version, query, shards, shard, cursor, candidates,
//! records}` with `cursor = {graph, pair, branch}` naming the next unit of
//! work (graph position within the shard, admissible-pair index for that
//! graph, first-fold branch). Records are stored as documents and rebuilt on
//! resume, so their flags are always recomputed.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::enumerate::{enumerate_graphs, make_record, LambdaCache, MapRecord};
use crate::error::{Error, Result};
use crate::folds::{fold, FoldKind};
use crate::format::{parse, print, Document};
use crate::graph::{compose, for_each_isomorphism, Graph, GraphMap, OrientedEdge};
use crate::poly::{IntPoly, RealRoot};
use crate::spectral::{is_irreducible, transition_matrix};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusQuery {
    pub rank: usize,
    pub edge_min: usize,
    pub edge_max: usize,
    pub max_folds: usize,
    /// The bound is the largest real root of this polynomial.
    pub bound: String,
    pub require_vertex_periodic: bool,
}

impl CensusQuery {
    pub fn bound_root(&self) -> Result<Option<RealRoot>> {
        Ok(RealRoot::largest(&IntPoly::parse(&self.bound)?))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    pub graph: usize,
    pub pair: usize,
    pub branch: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub query: CensusQuery,
    pub shards: usize,
    pub shard: usize,
    pub cursor: Cursor,
    pub candidates: u64,
    pub records: Vec<String>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let c: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if c.version != CHECKPOINT_VERSION {
            return Err(Error::Argument(format!("unsupported checkpoint version {}", c.version)));
        }
        Ok(c)
    }

    fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub shards: usize,
    pub shard: usize,
    pub checkpoint: Option<PathBuf>,
    /// Completed fold sequences between checkpoint writes.
    pub checkpoint_every: u64,
    /// Stop with a budget error (after checkpointing) beyond this many sequences.
    pub max_candidates: Option<u64>,
    pub resume: Option<Checkpoint>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 1,
            shard: 0,
            checkpoint: None,
            checkpoint_every: 100_000,
            max_candidates: None,
            resume: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusOutcome {
    pub records: Vec<MapRecord>,
    pub candidates: u64,
    pub pairs: Vec<(usize, usize)>,
}

/// Pairs `(n, m)` with `β^n ≥ m + 1`, `m ≥ 1`, `n` in the edge range.
pub fn admissible_pairs(q: &CensusQuery) -> Result<Vec<(usize, usize)>> {
    let Some(beta) = q.bound_root()? else {
        return Ok(Vec::new());
    };
    if beta.clone().cmp_rational(&num_rational::BigRational::from_integer(BigInt::from(1))) != Ordering::Greater {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for n in q.edge_min..=q.edge_max {
        for m in 1..=q.max_folds {
            if beta.clone().pow_cmp_int(n, &BigInt::from(m + 1)) != Ordering::Less {
                out.push((n, m));
            }
        }
    }
    Ok(out)
}

/// One record per line: `{graph, map, m, char_poly, lambda_interval, flags}`.
pub fn record_json(r: &MapRecord) -> serde_json::Value {
    let doc = Document::single("G", "f", &r.map);
    serde_json::json!({
        "graph": crate::format::print_graph("G", &r.graph),
        "map": crate::format::print_map("f", "G", &r.map),
        "document": print(&doc),
        "m": r.m,
        "char_poly": r.lambda.char_poly.to_string(),
        "lambda_interval": [r.lambda.lo().to_string(), r.lambda.hi().to_string()],
        "lambda_float": crate::spectral::format_float(r.lambda.float_hint),
        "flags": r.flags,
    })
}

fn record_from_document(text: &str, cache: &LambdaCache) -> Result<MapRecord> {
    let d = parse(text)?;
    let (_, _, m) = d.maps.first().ok_or_else(|| Error::Argument("checkpoint record holds no map".into()))?;
    make_record(m.clone(), m.excess(), cache)
}

/// All ordered pairs of distinct edges leaving a common vertex.
fn pairs_at_common_init(g: &Graph) -> Vec<(OrientedEdge, OrientedEdge)> {
    let mut out = Vec::new();
    for d0 in g.oriented_edges() {
        for d1 in g.oriented_edges() {
            if d0.edge != d1.edge && g.init(d0) == g.init(d1) {
                out.push((d0, d1));
            }
        }
    }
    out
}

/// Fold moves out of `g`. Complete and partial folds are symmetric in the
/// pair up to relabeling, so only `d0 < d1` is kept for them; a complete
/// fold of edges with a common terminal vertex would kill a loop and is skipped.
fn moves(g: &Graph) -> Vec<(FoldKind, OrientedEdge, OrientedEdge)> {
    let mut out = Vec::new();
    for (d0, d1) in pairs_at_common_init(g) {
        out.push((FoldKind::ProperFull, d0, d1));
        if d0 < d1 {
            if g.term(d0) != g.term(d1) {
                out.push((FoldKind::Complete, d0, d1));
            }
            out.push((FoldKind::Partial, d0, d1));
        }
    }
    out
}

struct Search<'a> {
    start: &'a Arc<Graph>,
    m: usize,
    beta: &'a RealRoot,
    require_vp: bool,
    cache: &'a LambdaCache,
}

impl Search<'_> {
    /// Extends `acc: start -> cur` by folds; returns completed sequence count.
    fn walk(&self, cur: &Arc<Graph>, acc: &GraphMap, depth: usize, out: &mut Vec<GraphMap>) -> Result<u64> {
        let v0 = self.start.num_vertices() as isize;
        if depth == self.m {
            if cur.num_vertices() != self.start.num_vertices() || cur.num_edges() != self.start.num_edges() {
                return Ok(1);
            }
            for_each_isomorphism(cur, self.start, |h| {
                let hm = h.to_map(cur.clone(), self.start.clone());
                if let Ok(f) = compose(&hm, acc) {
                    out.push(f);
                }
                true
            });
            return Ok(1);
        }
        let mut n = 0;
        for (kind, d0, d1) in moves(cur) {
            let Ok(fd) = fold(cur, kind, d0, d1) else {
                continue;
            };
            let dv = (fd.graph.num_vertices() as isize - v0).unsigned_abs();
            if dv > self.m - depth - 1 {
                continue;
            }
            let next = compose(&fd.map, acc)?;
            n += self.walk(&fd.graph, &next, depth + 1, out)?;
        }
        Ok(n)
    }

    fn branch(&self, mv: (FoldKind, OrientedEdge, OrientedEdge)) -> Result<(u64, Vec<MapRecord>)> {
        let (kind, d0, d1) = mv;
        let Ok(fd) = fold(self.start, kind, d0, d1) else {
            return Ok((0, Vec::new()));
        };
        let dv = (fd.graph.num_vertices() as isize - self.start.num_vertices() as isize).unsigned_abs();
        if dv > self.m - 1 {
            return Ok((0, Vec::new()));
        }
        let mut maps = Vec::new();
        let n = self.walk(&fd.graph, &fd.map, 1, &mut maps)?;
        let mut recs = Vec::new();
        for f in maps {
            if self.require_vp && !f.is_vertex_bijective() {
                continue;
            }
            let t = transition_matrix(&f, None)?;
            if !is_irreducible(&t) {
                continue;
            }
            let m = f.excess();
            let r = make_record(f, m, self.cache)?;
            if r.lambda.cmp_root(self.beta) == Ordering::Greater {
                continue;
            }
            recs.push(r);
        }
        Ok((n, recs))
    }
}

fn key(r: &MapRecord) -> (Vec<usize>, Vec<Vec<usize>>, usize) {
    (r.map.vertex_map.clone(), r.map.edge_key(), r.graph.num_edges())
}

/// Sorted by `λ`, then by the printed document.
pub fn sort_records(recs: &mut Vec<MapRecord>) {
    let mut keyed: Vec<(String, MapRecord)> = recs
        .drain(..)
        .map(|r| (print(&Document::single("G", "f", &r.map)), r))
        .collect();
    keyed.sort_by(|(da, a), (db, b)| {
        let l = if a.lambda.char_poly == b.lambda.char_poly {
            Ordering::Equal
        } else {
            a.lambda.cmp_exact(&b.lambda)
        };
        l.then_with(|| da.cmp(db))
    });
    recs.extend(keyed.into_iter().map(|(_, r)| r));
}

pub fn census(q: &CensusQuery, opts: &CensusOptions) -> Result<CensusOutcome> {
    if opts.shards == 0 || opts.shard >= opts.shards {
        return Err(Error::Argument("shard index must be below the shard count".into()));
    }
    let pairs = admissible_pairs(q)?;
    let cache = LambdaCache::default();
    let mut records: Vec<MapRecord> = Vec::new();
    let mut seen: HashSet<(Vec<usize>, Vec<Vec<usize>>, usize)> = HashSet::new();
    let mut cursor = Cursor::default();
    let mut candidates = 0u64;
    if let Some(c) = &opts.resume {
        if c.query != *q || c.shards != opts.shards || c.shard != opts.shard {
            return Err(Error::Argument("checkpoint was written for a different query or shard".into()));
        }
        for text in &c.records {
            let r = record_from_document(text, &cache)?;
            seen.insert(key(&r));
            records.push(r);
        }
        cursor = c.cursor;
        candidates = c.candidates;
    }
    let Some(beta) = q.bound_root()? else {
        return Ok(CensusOutcome {
            records,
            candidates,
            pairs,
        });
    };
    let graphs: Vec<Arc<Graph>> = enumerate_graphs(q.rank)?
        .into_iter()
        .filter(|g| (q.edge_min..=q.edge_max).contains(&g.num_edges()))
        .enumerate()
        .filter(|(i, _)| i % opts.shards == opts.shard)
        .map(|(_, g)| Arc::new(g))
        .collect();
    let mut since_save = 0u64;
    let checkpoint = |cursor: Cursor, candidates: u64, records: &[MapRecord]| -> Result<()> {
        if let Some(path) = &opts.checkpoint {
            Checkpoint {
                version: CHECKPOINT_VERSION,
                query: q.clone(),
                shards: opts.shards,
                shard: opts.shard,
                cursor,
                candidates,
                records: records.iter().map(|r| print(&Document::single("G", "f", &r.map))).collect(),
            }
            .save(path)?;
        }
        Ok(())
    };
    const CHUNK: usize = 16;
    for gi in cursor.graph..graphs.len() {
        let g = &graphs[gi];
        let ms: Vec<usize> = pairs.iter().filter(|p| p.0 == g.num_edges()).map(|p| p.1).collect();
        let first_pair = if gi == cursor.graph { cursor.pair } else { 0 };
        for (pi, &m) in ms.iter().enumerate().skip(first_pair) {
            let search = Search {
                start: g,
                m,
                beta: &beta,
                require_vp: q.require_vertex_periodic,
                cache: &cache,
            };
            let mvs = moves(g);
            let mut b = if gi == cursor.graph && pi == cursor.pair { cursor.branch } else { 0 };
            while b < mvs.len() {
                let end = (b + CHUNK).min(mvs.len());
                let results = mvs[b..end]
                    .par_iter()
                    .map(|&mv| search.branch(mv))
                    .collect::<Result<Vec<_>>>()?;
                for (n, recs) in results {
                    candidates += n;
                    since_save += n;
                    for r in recs {
                        if seen.insert(key(&r)) {
                            records.push(r);
                        }
                    }
                }
                b = end;
                let here = Cursor {
                    graph: gi,
                    pair: pi,
                    branch: b,
                };
                if opts.max_candidates.is_some_and(|mx| candidates > mx) {
                    checkpoint(here, candidates, &records)?;
                    return Err(Error::Budget(format!(
                        "census stopped after {candidates} fold sequences; resume from the checkpoint"
                    )));
                }
                if since_save >= opts.checkpoint_every {
                    checkpoint(here, candidates, &records)?;
                    since_save = 0;
                }
            }
        }
    }
    let done = Cursor {
        graph: graphs.len(),
        pair: 0,
        branch: 0,
    };
    checkpoint(done, candidates, &records)?;
    sort_records(&mut records);
    Ok(CensusOutcome {
        records,
        candidates,
        pairs,
    })
}

/// Merges shard outputs with the same ordering as a single run.
pub fn merge_shards(parts: Vec<Vec<MapRecord>>) -> Vec<MapRecord> {
    let mut seen = HashSet::new();
    let mut all: Vec<MapRecord> = parts.into_iter().flatten().filter(|r| seen.insert(key(r))).collect();
    sort_records(&mut all);
    all
}
