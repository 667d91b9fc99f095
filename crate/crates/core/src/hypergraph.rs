//! Uniform hypergraphs: parsing, generators and combinatorial classification.
//!
//! Vertices are 0-indexed in memory. The text formats are 1-indexed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::smith::{solve_mod, IntMatrix};

/// An `m`-uniform hypergraph on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    m: usize,
    edges: Vec<Vec<usize>>,
    degrees: Vec<usize>,
}

impl Hypergraph {
    /// Validates and normalizes an edge list (0-indexed vertices).
    ///
    /// Edges are sorted internally and the list is sorted and deduplicated;
    /// duplicates are reported through `log::warn!`.
    pub fn new(n: usize, m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("vertex count must be positive".into()));
        }
        if m < 2 {
            return Err(Error::Argument(format!(
                "uniformity must be at least 2, got {m}"
            )));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for mut e in edges {
            validate_edge(&mut e, n, m).map_err(Error::Argument)?;
            normalized.push(e);
        }
        Ok(Self::from_normalized(n, m, normalized))
    }

    fn from_normalized(n: usize, m: usize, mut edges: Vec<Vec<usize>>) -> Self {
        let before = edges.len();
        edges.sort();
        edges.dedup();
        if edges.len() < before {
            warn!("dropped {} duplicate edge(s)", before - edges.len());
        }
        let mut degrees = vec![0; n];
        for e in &edges {
            for &v in e {
                degrees[v] += 1;
            }
        }
        Self {
            n,
            m,
            edges,
            degrees,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniformity (edge size), which is also the tensor order.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// Vertex–edge 0/1 incidence matrix, one row per edge.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .edges
            .iter()
            .map(|e| {
                let mut row = vec![0i64; self.n];
                for &v in e {
                    row[v] = 1;
                }
                row
            })
            .collect();
        IntMatrix::from_rows(self.n, &rows).expect("rows have length n")
    }

    /// Connectivity under the share-an-edge relation.
    pub fn is_connected(&self) -> bool {
        let mut incident = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            for &v in e {
                incident[v].push(k);
            }
        }
        let mut seen = vec![false; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &k in &incident[v] {
                if std::mem::replace(&mut edge_seen[k], true) {
                    continue;
                }
                for &u in &self.edges[k] {
                    if !std::mem::replace(&mut seen[u], true) {
                        reached += 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        reached == self.n
    }

    /// Every edge contains a vertex of degree one.
    pub fn is_cored(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.iter().any(|&v| self.degrees[v] == 1))
    }

    /// Serializes to the HGF text format.
    pub fn to_hgf(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for e in &self.edges {
            let ids: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }
}

fn validate_edge(e: &mut [usize], n: usize, m: usize) -> Result<(), String> {
    if e.len() != m {
        return Err(format!("edge has {} vertices, expected {m}", e.len()));
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(format!("vertex {} out of range 1..={n}", v + 1));
    }
    e.sort_unstable();
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err("edge repeats a vertex".into());
    }
    Ok(())
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ids(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect()
}

/// Parses the HGF format: `#` comments, a header `n m`, then one edge per line.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = data_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing header line \"n m\"".into(),
        });
    };
    let header = parse_ids(hline, header)?;
    let [n, m] = header[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be \"n m\"".into(),
        });
    };
    if n == 0 {
        return Err(Error::Parse {
            line: hline,
            msg: "vertex count must be positive".into(),
        });
    }
    if m < 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("uniformity must be at least 2, got {m}"),
        });
    }
    let mut edges = Vec::new();
    for (line, l) in lines {
        let ids = parse_ids(line, l)?;
        if let Some(&bad) = ids.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::Parse {
                line,
                msg: format!("vertex {bad} out of range 1..={n}"),
            });
        }
        let mut e: Vec<usize> = ids.into_iter().map(|v| v - 1).collect();
        validate_edge(&mut e, n, m).map_err(|msg| Error::Parse { line, msg })?;
        edges.push(e);
    }
    Ok(Hypergraph::from_normalized(n, m, edges))
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_hypergraph(s)
    }
}

/// A simple graph; the base of generalized power hypergraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("vertex count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({}, {}) out of range 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Argument(format!("loop at vertex {}", u + 1)));
            }
            if !set.insert((u.min(v), u.max(v))) {
                warn!("dropped duplicate graph edge ({}, {})", u + 1, v + 1);
            }
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The graph as a 2-uniform hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let edges = self.edges.iter().map(|&(u, v)| vec![u, v]).collect();
        Hypergraph::from_normalized(self.n, 2, edges)
    }
}

/// Parses a simple graph: a line `n`, then one `u v` pair per line.
pub fn parse_simple_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = data_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing vertex count line".into(),
        });
    };
    let [n] = parse_ids(hline, header)?[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be a single vertex count".into(),
        });
    };
    let mut edges = Vec::new();
    for (line, l) in lines {
        let [u, v] = parse_ids(line, l)?[..] else {
            return Err(Error::Parse {
                line,
                msg: "expected a pair \"u v\"".into(),
            });
        };
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::Parse {
                line,
                msg: format!("vertex out of range 1..={n}"),
            });
        }
        edges.push((u - 1, v - 1));
    }
    SimpleGraph::new(n, edges).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })
}

/// Complete `m`-uniform hypergraph `K_n^[m]`; requires `n ≥ m + 1 ≥ 3`.
pub fn gen_complete(n: usize, m: usize) -> Result<Hypergraph> {
    if m < 2 || n < m + 1 {
        return Err(Error::Argument(format!(
            "complete hypergraph needs n >= m + 1 >= 3, got n={n}, m={m}"
        )));
    }
    let mut edges = Vec::new();
    let mut comb: Vec<usize> = (0..m).collect();
    loop {
        edges.push(comb.clone());
        // next m-subset in lexicographic order
        let Some(i) = (0..m).rev().find(|&i| comb[i] < n - m + i) else {
            break;
        };
        comb[i] += 1;
        for j in i + 1..m {
            comb[j] = comb[j - 1] + 1;
        }
    }
    Ok(Hypergraph::from_normalized(n, m, edges))
}

/// Generalized power hypergraph `G^{m, m/2}`: vertex `v` of `g` becomes the
/// block of `m/2` vertices starting at `v·m/2`, and each graph edge becomes the
/// union of its endpoint blocks.
pub fn gen_power(g: &SimpleGraph, m: usize) -> Result<Hypergraph> {
    if !m.is_multiple_of(2) || m < 4 {
        return Err(Error::Argument(format!(
            "power hypergraph needs an even uniformity m >= 4, got {m}"
        )));
    }
    let mut covered = vec![false; g.n];
    for &(u, v) in &g.edges {
        covered[u] = true;
        covered[v] = true;
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::Argument(format!(
            "graph vertex {} is isolated",
            v + 1
        )));
    }
    let half = m / 2;
    let edges = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let mut e: Vec<usize> = (u * half..(u + 1) * half).collect();
            e.extend(v * half..(v + 1) * half);
            e.sort_unstable();
            e
        })
        .collect();
    Ok(Hypergraph::from_normalized(g.n * half, m, edges))
}

/// Combinatorial properties of a hypergraph.
///
/// `odd_bipartite` and `odd_colorable` are `None` when `m` is odd.
/// Witness vertex ids are 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub connected: bool,
    pub cored: bool,
    pub odd_bipartite: Option<bool>,
    pub odd_colorable: Option<bool>,
    /// `f(v) ∈ Z_m` with `Σ_{v∈e} f(v) ≡ m/2 (mod m)` on every edge.
    pub witness_coloring: Option<Vec<u64>>,
    /// `V_1` meeting every edge in an odd number of vertices.
    pub witness_bipartition: Option<Vec<usize>>,
}

pub fn classify(h: &Hypergraph) -> ClassificationReport {
    let mut report = ClassificationReport {
        connected: h.is_connected(),
        cored: h.is_cored(),
        odd_bipartite: None,
        odd_colorable: None,
        witness_coloring: None,
        witness_bipartition: None,
    };
    if !h.m.is_multiple_of(2) {
        return report;
    }
    let inc = h.incidence_matrix();
    let t = h.num_edges();

    let half = vec![(h.m / 2) as i64; t];
    let coloring = solve_mod(&inc, &half, h.m as u64)
        .expect("dimensions agree")
        .map(|(f, _)| f);
    report.odd_colorable = Some(coloring.is_some());
    report.witness_coloring = coloring;

    let ones = vec![1i64; t];
    let parity = solve_mod(&inc, &ones, 2)
        .expect("dimensions agree")
        .map(|(x, _)| x);
    report.odd_bipartite = Some(parity.is_some());
    report.witness_bipartition = parity.map(|x| {
        x.iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(v, _)| v)
            .collect()
    });
    report
}

/// The odd-coloring congruences hold for `f`.
pub fn is_odd_coloring(h: &Hypergraph, f: &[u64]) -> bool {
    let m = h.m as u64;
    h.m.is_multiple_of(2)
        && f.len() == h.n
        && h.edges
            .iter()
            .all(|e| e.iter().map(|&v| f[v] % m).sum::<u64>() % m == m / 2)
}

/// Every edge meets `part` in an odd number of vertices.
pub fn is_odd_bipartition(h: &Hypergraph, part: &[usize]) -> bool {
    let mut inside = vec![false; h.n];
    for &v in part {
        if v >= h.n {
            return false;
        }
        inside[v] = true;
    }
    h.edges
        .iter()
        .all(|e| e.iter().filter(|&&v| inside[v]).count() % 2 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_power() -> Hypergraph {
        gen_power(&SimpleGraph::cycle(3).unwrap(), 4).unwrap()
    }

    #[test]
    fn parse_single_edge() {
        let h = parse_hypergraph("3 3\n1 2 3").unwrap();
        assert_eq!((h.n(), h.m()), (3, 3));
        assert_eq!(h.edges(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn parse_triangle_power() {
        let h = parse_hypergraph("6 4\n1 2 3 4\n3 4 5 6\n1 2 5 6").unwrap();
        assert_eq!(h, triangle_power());
    }

    #[test]
    fn parse_comments_crlf_and_dedup() {
        let h =
            parse_hypergraph("# header\r\n4 3\r\n3 2 1\r\n\r\n1 2 3\r\n# x\r\n2 3 4\r\n").unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![1, 2, 3]]);
        assert_eq!(h.degrees(), &[1, 2, 2, 1]);
    }

    #[test]
    fn parse_errors_name_lines() {
        let err = parse_hypergraph("3 3\n1 2 4").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "vertex 4 out of range 1..=3".into()
            }
        );
        assert!(matches!(
            parse_hypergraph("# c\n4 3\n1 2").unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            parse_hypergraph("3 1\n1").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_hypergraph("3 3\n1 x 2").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_hypergraph("3 3\n1 1 2").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_hypergraph("").unwrap_err(),
            Error::Parse { line: 0, .. }
        ));
    }

    #[test]
    fn hgf_round_trip() {
        let h = triangle_power();
        assert_eq!(parse_hypergraph(&h.to_hgf()).unwrap(), h);
    }

    #[test]
    fn complete_generator() {
        let h = gen_complete(4, 3).unwrap();
        assert_eq!(
            h.edges(),
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        assert_eq!(gen_complete(5, 3).unwrap().num_edges(), 10);
        assert!(gen_complete(3, 3).is_err());
    }

    #[test]
    fn power_generator() {
        let h = triangle_power();
        assert_eq!(h.n(), 6);
        assert_eq!(
            h.edges(),
            &[vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![2, 3, 4, 5]]
        );

        let k2 = SimpleGraph::new(2, vec![(0, 1)]).unwrap();
        let h = gen_power(&k2, 4).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2, 3]]);

        let h = gen_power(&SimpleGraph::path(3).unwrap(), 6).unwrap();
        assert_eq!(h.n(), 9);
        assert_eq!(h.edges(), &[vec![0, 1, 2, 3, 4, 5], vec![3, 4, 5, 6, 7, 8]]);

        assert!(gen_power(&k2, 5).is_err());
        let isolated = SimpleGraph::new(3, vec![(0, 1)]).unwrap();
        assert!(gen_power(&isolated, 4).is_err());
    }

    #[test]
    fn simple_graph_parsing() {
        let g = parse_simple_graph("3\n1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g, SimpleGraph::cycle(3).unwrap());
        assert!(parse_simple_graph("3\n1 1\n").is_err());
        assert!(parse_simple_graph("3\n1 4\n").is_err());
    }

    #[test]
    fn connectivity() {
        assert!(triangle_power().is_connected());
        let two = Hypergraph::new(6, 3, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(!two.is_connected());
        assert!(Hypergraph::new(1, 2, vec![]).unwrap().is_connected());
        assert!(!Hypergraph::new(2, 2, vec![]).unwrap().is_connected());
    }

    #[test]
    fn classify_single_four_edge() {
        let h = Hypergraph::new(4, 4, vec![vec![0, 1, 2, 3]]).unwrap();
        let r = classify(&h);
        assert!(r.connected && r.cored);
        assert_eq!(r.odd_bipartite, Some(true));
        assert_eq!(r.odd_colorable, Some(true));
        assert!(is_odd_bipartition(
            &h,
            r.witness_bipartition.as_ref().unwrap()
        ));
        assert!(is_odd_coloring(&h, r.witness_coloring.as_ref().unwrap()));
    }

    #[test]
    fn classify_triangle_power() {
        let h = triangle_power();
        let r = classify(&h);
        assert!(r.connected);
        assert!(!r.cored);
        assert_eq!(r.odd_bipartite, Some(false));
        assert_eq!(r.witness_bipartition, None);
        assert_eq!(r.odd_colorable, Some(true));
        assert!(is_odd_coloring(&h, r.witness_coloring.as_ref().unwrap()));
    }

    #[test]
    fn classify_odd_uniformity_not_applicable() {
        let r = classify(&gen_complete(5, 3).unwrap());
        assert_eq!(r.odd_bipartite, None);
        assert_eq!(r.odd_colorable, None);
        assert!(r.connected && !r.cored);
    }

    #[test]
    fn power_of_path_is_cored_and_odd_bipartite() {
        let h = gen_power(&SimpleGraph::path(2).unwrap(), 4).unwrap();
        let r = classify(&h);
        assert!(r.cored);
        assert_eq!(r.odd_bipartite, Some(true));
    }
}
