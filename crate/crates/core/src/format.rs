//! Plain-text documents holding named graphs and maps.
//!
//! ```text
//! graph D
//! vertex v0
//! vertex v1
//! edge a : v0 -> v1
//! edge b : v1 -> v0
//! endgraph
//!
//! map f on D
//! a -> b
//! b -> a
//! vertexmap v0 -> v1
//! vertexmap v1 -> v0
//! endmap
//! ```
//!
//! `#` starts a comment. `vertexmap` lines are optional; when absent the
//! vertex map is inferred from the edge images.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{oriented_label, validate_map, Edge, EdgePath, Graph, GraphMap, OrientedEdge, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub graphs: Vec<(String, Arc<Graph>)>,
    /// `(name, graph name, map)`.
    pub maps: Vec<(String, String, GraphMap)>,
}

impl Document {
    pub fn graph(&self, name: &str) -> Option<&Arc<Graph>> {
        self.graphs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn map(&self, name: &str) -> Option<&GraphMap> {
        self.maps.iter().find(|(n, _, _)| n == name).map(|(_, _, m)| m)
    }

    pub fn add_graph(&mut self, name: &str, g: Arc<Graph>) {
        self.graphs.push((name.to_string(), g));
    }

    pub fn add_map(&mut self, name: &str, graph: &str, m: GraphMap) {
        self.maps.push((name.to_string(), graph.to_string(), m));
    }

    /// A document holding just `f` and its graph.
    pub fn single(graph_name: &str, map_name: &str, f: &GraphMap) -> Document {
        let mut d = Document::default();
        d.add_graph(graph_name, f.domain.clone());
        d.add_map(map_name, graph_name, f.clone());
        d
    }
}

/// Labels and vertex names: a letter, then letters, digits and `_`, then
/// optional primes.
pub fn is_identifier(s: &str) -> bool {
    let core = s.trim_end_matches('\'');
    let mut cs = core.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Line<'a> {
    no: usize,
    /// (column, token)
    toks: Vec<(usize, &'a str)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push((s, &body[s..j]));
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            toks.push((s, &body[s..]));
        }
        if !toks.is_empty() {
            out.push(Line { no: i + 1, toks });
        }
    }
    out
}

impl Line<'_> {
    fn col(&self, i: usize) -> usize {
        self.toks.get(i).map_or_else(|| self.toks.last().map_or(1, |t| t.0 + t.1.len() + 1), |t| t.0 + 1)
    }

    fn tok(&self, i: usize) -> Option<&str> {
        self.toks.get(i).map(|t| t.1)
    }

    fn expect(&self, i: usize, what: &str) -> Result<&str> {
        self.tok(i).ok_or_else(|| perr(self.no, self.col(i), format!("expected {what}")))
    }

    fn ident(&self, i: usize, what: &str) -> Result<&str> {
        let t = self.expect(i, what)?;
        if !is_identifier(t) {
            return Err(perr(self.no, self.col(i), format!("invalid {what} `{t}`")));
        }
        Ok(t)
    }

    fn keyword(&self, i: usize, kw: &str) -> Result<()> {
        match self.tok(i) {
            Some(t) if t == kw => Ok(()),
            Some(t) => Err(perr(self.no, self.col(i), format!("expected `{kw}`, found `{t}`"))),
            None => Err(perr(self.no, self.col(i), format!("expected `{kw}`"))),
        }
    }

    fn end(&self, i: usize) -> Result<()> {
        match self.tok(i) {
            None => Ok(()),
            Some(t) => Err(perr(self.no, self.col(i), format!("unexpected `{t}`"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let lines = tokenize(text);
    let mut doc = Document::default();
    let mut i = 0;
    while i < lines.len() {
        let l = &lines[i];
        match l.tok(0) {
            Some("graph") => i = parse_graph(&lines, i, &mut doc)?,
            Some("map") => i = parse_map(&lines, i, &mut doc)?,
            Some(t) => return Err(perr(l.no, l.col(0), format!("expected `graph` or `map`, found `{t}`"))),
            None => unreachable!("blank lines are dropped"),
        }
    }
    Ok(doc)
}

fn parse_graph(lines: &[Line<'_>], mut i: usize, doc: &mut Document) -> Result<usize> {
    let head = &lines[i];
    let name = head.ident(1, "graph name")?;
    head.end(2)?;
    if doc.graph(name).is_some() {
        return Err(perr(head.no, head.col(1), format!("graph {name} declared twice")));
    }
    let mut vnames: Vec<String> = Vec::new();
    let mut vindex: HashMap<&str, VertexId> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut labels: HashMap<&str, ()> = HashMap::new();
    i += 1;
    loop {
        let Some(l) = lines.get(i) else {
            return Err(perr(head.no, 1, format!("graph {name} is missing `endgraph`")));
        };
        match l.tok(0) {
            Some("vertex") => {
                let v = l.ident(1, "vertex name")?;
                l.end(2)?;
                if vindex.insert(v, vnames.len()).is_some() {
                    return Err(perr(l.no, l.col(1), format!("vertex {v} declared twice")));
                }
                vnames.push(v.to_string());
            }
            Some("edge") => {
                let label = l.ident(1, "edge label")?;
                l.keyword(2, ":")?;
                let a = l.ident(3, "vertex name")?;
                l.keyword(4, "->")?;
                let b = l.ident(5, "vertex name")?;
                l.end(6)?;
                if labels.insert(label, ()).is_some() {
                    return Err(perr(l.no, l.col(1), format!("edge {label} declared twice")));
                }
                let look = |v: &str, col: usize| {
                    vindex
                        .get(v)
                        .copied()
                        .ok_or_else(|| perr(l.no, l.col(col), format!("undeclared vertex {v}")))
                };
                edges.push(Edge {
                    label: label.to_string(),
                    init: look(a, 3)?,
                    term: look(b, 5)?,
                });
            }
            Some("endgraph") => {
                l.end(1)?;
                let g = Graph::new(vnames, edges).map_err(|e| perr(l.no, 1, e.to_string()))?;
                doc.add_graph(name, Arc::new(g));
                return Ok(i + 1);
            }
            Some(t) => return Err(perr(l.no, l.col(0), format!("unexpected `{t}` inside graph {name}"))),
            None => unreachable!(),
        }
        i += 1;
    }
}

fn parse_map(lines: &[Line<'_>], mut i: usize, doc: &mut Document) -> Result<usize> {
    let head = &lines[i];
    let name = head.ident(1, "map name")?;
    head.keyword(2, "on")?;
    let gname = head.ident(3, "graph name")?;
    head.end(4)?;
    if doc.map(name).is_some() {
        return Err(perr(head.no, head.col(1), format!("map {name} declared twice")));
    }
    let g = doc
        .graph(gname)
        .cloned()
        .ok_or_else(|| perr(head.no, head.col(3), format!("undeclared graph {gname}")))?;
    let mut images: Vec<Option<EdgePath>> = vec![None; g.num_edges()];
    let mut vmap: Vec<Option<VertexId>> = vec![None; g.num_vertices()];
    let mut any_vmap = false;
    i += 1;
    loop {
        let Some(l) = lines.get(i) else {
            return Err(perr(head.no, 1, format!("map {name} is missing `endmap`")));
        };
        match l.tok(0) {
            Some("endmap") => {
                l.end(1)?;
                let em = images
                    .into_iter()
                    .enumerate()
                    .map(|(e, p)| p.ok_or_else(|| perr(l.no, 1, format!("no image for edge {}", g.edge(e).label))))
                    .collect::<Result<Vec<_>>>()?;
                let m = if any_vmap {
                    let vm = vmap
                        .into_iter()
                        .enumerate()
                        .map(|(v, w)| w.ok_or_else(|| perr(l.no, 1, format!("no vertexmap for {}", g.vertex_name(v)))))
                        .collect::<Result<Vec<_>>>()?;
                    GraphMap::new(g.clone(), g.clone(), vm, em)
                } else {
                    GraphMap::with_inferred_vertices(g.clone(), g.clone(), em).map_err(|e| perr(head.no, 1, e.to_string()))?
                };
                if let Err(v) = validate_map(&m) {
                    return Err(perr(head.no, 1, format!("map {name}: {v}")));
                }
                doc.add_map(name, gname, m);
                return Ok(i + 1);
            }
            Some("vertexmap") => {
                let a = l.ident(1, "vertex name")?;
                l.keyword(2, "->")?;
                let b = l.ident(3, "vertex name")?;
                l.end(4)?;
                let va = g.vertex_by_name(a).ok_or_else(|| perr(l.no, l.col(1), format!("undeclared vertex {a}")))?;
                let vb = g.vertex_by_name(b).ok_or_else(|| perr(l.no, l.col(3), format!("undeclared vertex {b}")))?;
                if vmap[va].replace(vb).is_some() {
                    return Err(perr(l.no, l.col(1), format!("vertex {a} mapped twice")));
                }
                any_vmap = true;
            }
            Some(label) => {
                let e = g
                    .edge_by_label(label)
                    .ok_or_else(|| perr(l.no, l.col(0), format!("undeclared edge {label}")))?;
                l.keyword(1, "->")?;
                let mut steps = Vec::new();
                for j in 2..l.toks.len() {
                    let t = l.tok(j).expect("in range");
                    let (lab, fwd) = match t.strip_prefix('~') {
                        Some(r) => (r, false),
                        None => (t, true),
                    };
                    let id = g
                        .edge_by_label(lab)
                        .ok_or_else(|| perr(l.no, l.col(j), format!("undeclared edge {lab}")))?;
                    steps.push(OrientedEdge::new(id, fwd));
                }
                if steps.is_empty() {
                    return Err(perr(l.no, l.col(2), "expected an edge path"));
                }
                if images[e].replace(EdgePath(steps)).is_some() {
                    return Err(perr(l.no, l.col(0), format!("edge {label} mapped twice")));
                }
            }
            None => unreachable!(),
        }
        i += 1;
    }
}

pub fn print_graph(name: &str, g: &Graph) -> String {
    let mut s = format!("graph {name}\n");
    for v in g.vertex_names() {
        let _ = writeln!(s, "vertex {v}");
    }
    for e in g.edges() {
        let _ = writeln!(s, "edge {} : {} -> {}", e.label, g.vertex_name(e.init), g.vertex_name(e.term));
    }
    s.push_str("endgraph\n");
    s
}

pub fn print_map(name: &str, graph: &str, m: &GraphMap) -> String {
    let g = &m.domain;
    let mut s = format!("map {name} on {graph}\n");
    for (e, p) in m.edge_map.iter().enumerate() {
        let img: Vec<String> = p.steps().iter().map(|&o| oriented_label(&m.codomain, o)).collect();
        let _ = writeln!(s, "{} -> {}", g.edge(e).label, img.join(" "));
    }
    for (v, &w) in m.vertex_map.iter().enumerate() {
        let _ = writeln!(s, "vertexmap {} -> {}", g.vertex_name(v), m.codomain.vertex_name(w));
    }
    s.push_str("endmap\n");
    s
}

pub fn print(doc: &Document) -> String {
    let mut parts: Vec<String> = doc.graphs.iter().map(|(n, g)| print_graph(n, g)).collect();
    parts.extend(doc.maps.iter().map(|(n, g, m)| print_map(n, g, m)));
    parts.join("\n")
}

pub fn read_file(path: &std::path::Path) -> Result<Document> {
    parse(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::examples::{frak_f, frak_g, gamma};

    const G_DOC: &str = "\
# the single fold map on the almost 3-gonal graph
graph D
vertex v0
vertex v1
vertex v2
edge a1 : v0 -> v1
edge b1 : v2 -> v0
edge b2 : v2 -> v0
edge c1 : v1 -> v2
edge c2 : v1 -> v2
endgraph

map g on D
a1 -> b2
b1 -> c1
b2 -> c2
c1 -> a1
c2 -> ~b1 ~c1   # the only mixing edge
endmap
";

    #[test]
    fn parses_and_infers_vertices() {
        let d = parse(G_DOC).unwrap();
        let m = d.map("g").unwrap();
        assert_eq!(m.edge_map, frak_g().edge_map);
        assert_eq!(m.vertex_map, vec![2, 0, 1]);
    }

    #[test]
    fn loops_are_legal() {
        let d = parse("graph R\nvertex v0\nedge a : v0 -> v0\nendgraph\n").unwrap();
        assert_eq!(d.graph("R").unwrap().edge(0).init, 0);
    }

    #[test]
    fn round_trip() {
        for (n, f) in [("g", frak_g()), ("f", frak_f()), ("gamma", gamma())] {
            let d = Document::single("G", n, &f);
            let text = print(&d);
            assert_eq!(parse(&text).unwrap(), d);
        }
        let d = parse(G_DOC).unwrap();
        assert_eq!(parse(&print(&d)).unwrap(), d);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let bad = G_DOC.replace("c1 -> a1", "c1 -> q9");
        match parse(&bad) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (17, 7)),
            other => panic!("{other:?}"),
        }
        let bad = G_DOC.replace("edge c2 : v1 -> v2", "edge c2 : v1 => v2");
        assert!(matches!(parse(&bad), Err(Error::Parse { line: 10, col: 14, .. })));
        let bad = G_DOC.replace("a1 -> b2", "a1 -> c1");
        assert!(matches!(parse(&bad), Err(Error::Parse { .. })));
        assert!(parse("graph 9x\nendgraph\n").is_err());
        assert!(parse("map f on Nope\nendmap\n").is_err());
    }
}
