//! Sparse undirected multigraphs in CSR form.
//!
//! Adjacency entries follow the multigraph convention: `A(i, j)` counts the
//! edges between `i != j`, and `A(i, i)` is twice the number of self-edges.
//! The edge-list loader enforces that convention; [`Graph::from_entries`]
//! takes matrix entries verbatim.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Largest node index accepted in direct-index mode.
pub const MAX_NODE_INDEX: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<u64>,
    degrees: Vec<u64>,
    total: u64,
    ids: Vec<u64>,
}

/// How node tokens in an edge list map to dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexMode {
    /// Arbitrary integer ids, relabelled to `0..n` in ascending id order.
    #[default]
    Dense,
    ZeroBased,
    OneBased,
}

/// What each `i j [k]` line of an edge list denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Listing {
    /// One undirected edge of multiplicity `k` (default 1); `i i` is a self-edge.
    #[default]
    Edges,
    /// The matrix entry `A(i, j) += k`; the listing must be symmetric.
    Entries,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub index: IndexMode,
    pub listing: Listing,
    pub drop_self_loops: bool,
    /// Collapse every multi-edge to a single edge.
    pub simple: bool,
}

impl Graph {
    /// Builds a graph from undirected edges `(i, j, multiplicity)`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut entries = Vec::new();
        for (i, j, k) in edges {
            if i >= n || j >= n {
                return Err(Error::Invalid(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            if i == j {
                entries.push((i, i, 2 * k));
            } else {
                entries.push((i, j, k));
                entries.push((j, i, k));
            }
        }
        Self::build(n, entries, (0..n as u64).collect())
    }

    /// Builds a graph from adjacency entries `(i, j, A(i, j))`; repeated
    /// coordinates accumulate. The entries must describe a symmetric matrix.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some(&(i, j, _)) = entries.iter().find(|&&(i, j, _)| i >= n || j >= n) {
            return Err(Error::Invalid(format!(
                "entry ({i}, {j}) out of range for {n} nodes"
            )));
        }
        let g = Self::build(n, entries, (0..n as u64).collect())?;
        g.check_symmetric()?;
        Ok(g)
    }

    /// Builds a graph from a dense square matrix.
    pub fn from_dense(rows: &[Vec<u64>]) -> Result<Graph> {
        let n = rows.len();
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid("matrix is not square".into()));
            }
            entries.extend(
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(j, &a)| (i, j, a)),
            );
        }
        Self::from_entries(n, entries)
    }

    fn build(n: usize, entries: Vec<(usize, usize, u64)>, ids: Vec<u64>) -> Result<Graph> {
        let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
        for (i, j, k) in entries {
            if k > 0 {
                *rows[i].entry(j).or_insert(0) += k;
            }
        }
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut degrees = Vec::with_capacity(n);
        indptr.push(0);
        for row in rows {
            let mut d = 0u64;
            for (j, a) in row {
                indices.push(j);
                values.push(a);
                d += a;
            }
            degrees.push(d);
            indptr.push(indices.len());
        }
        let total = degrees.iter().sum();
        Ok(Graph {
            indptr,
            indices,
            values,
            degrees,
            total,
            ids,
        })
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n() {
            for (j, a) in self.row(i) {
                if self.entry(j, i) != a {
                    return Err(Error::Invalid(format!(
                        "asymmetric entries A({i},{j})={a}, A({j},{i})={}",
                        self.entry(j, i)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Number of stored nonzero entries (both triangles plus the diagonal).
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// `sum_ij A(i, j)`, i.e. twice the edge count.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Original node ids, indexed by dense node index.
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Nonzero entries `(j, A(i, j))` of row `i`, in ascending `j`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        let span = self.indptr[i]..self.indptr[i + 1];
        match self.indices[span.clone()].binary_search(&j) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0,
        }
    }

    /// `A(i, i)`.
    pub fn diagonal(&self, i: usize) -> u64 {
        self.entry(i, i)
    }

    /// Upper-triangular entries `(i, j, A(i, j))` with `i <= j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.row(i)
                .filter(move |&(j, _)| j >= i)
                .map(move |(j, a)| (i, j, a))
        })
    }

    /// `||A||_F^2`.
    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|&a| (a as f64) * (a as f64)).sum()
    }

    /// `out = A x`.
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).map(|(j, a)| a as f64 * x[j]).sum();
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let n = self.n();
        let mut dense = vec![vec![0; n]; n];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, a) in self.row(i) {
                row[j] = a;
            }
        }
        dense
    }

    /// Returns a copy with every diagonal entry removed.
    pub fn without_self_loops(&self) -> Graph {
        self.map_entries(|i, j, a| if i == j { 0 } else { a })
    }

    /// Returns a copy with multi-edges collapsed to single edges
    /// (and multiple self-edges collapsed to one).
    pub fn simplified(&self) -> Graph {
        self.map_entries(|i, j, a| match (i == j, a) {
            (_, 0) => 0,
            (true, _) => 2,
            (false, _) => 1,
        })
    }

    fn map_entries(&self, f: impl Fn(usize, usize, u64) -> u64) -> Graph {
        let mut entries = Vec::with_capacity(self.nnz());
        for i in 0..self.n() {
            entries.extend(self.row(i).map(|(j, a)| (i, j, f(i, j, a))));
        }
        Self::build(self.n(), entries, self.ids.clone()).expect("valid entries")
    }

    /// Induced subgraph on `nodes` (new index = position in `nodes`).
    pub fn subgraph(&self, nodes: &[usize]) -> Graph {
        let mut old_to_new = vec![usize::MAX; self.n()];
        for (new, &old) in nodes.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut entries = Vec::new();
        for (new, &old) in nodes.iter().enumerate() {
            for (j, a) in self.row(old) {
                if old_to_new[j] != usize::MAX {
                    entries.push((new, old_to_new[j], a));
                }
            }
        }
        let ids = nodes.iter().map(|&i| self.ids[i]).collect();
        Self::build(nodes.len(), entries, ids).expect("valid entries")
    }

    /// Connected components, each as a sorted node list, ordered by their
    /// smallest node index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for (v, _) in self.row(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Writes the graph as a zero-based edge list with a node-count header.
    /// Fails if some diagonal entry is odd, which an edge list cannot express.
    pub fn save_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        let _ = writeln!(out, "# nodes, then one `i j multiplicity` edge per line");
        let _ = writeln!(out, "{}", self.n());
        for (i, j, a) in self.upper_entries() {
            let k = if i == j {
                if a % 2 != 0 {
                    return Err(Error::Invalid(format!(
                        "odd diagonal entry A({i},{i})={a} cannot be written as self-edges"
                    )));
                }
                a / 2
            } else {
                a
            };
            let _ = writeln!(out, "{i} {j} {k}");
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Largest connected component together with the index maps.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Graph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

/// Induced subgraph on the largest connected component. Ties go to the
/// component holding the smallest node index.
pub fn largest_connected_component(g: &Graph) -> Result<Component> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut best: Vec<usize> = Vec::new();
    for comp in g.components() {
        if comp.len() > best.len() {
            best = comp;
        }
    }
    let mut old_to_new = vec![None; g.n()];
    for (new, &old) in best.iter().enumerate() {
        old_to_new[old] = Some(new);
    }
    Ok(Component {
        graph: g.subgraph(&best),
        old_to_new,
        new_to_old: best,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, &path.display().to_string(), opts)
}

/// Parses edge-list text; `source` only labels error messages.
pub fn parse_edge_list(text: &str, source: &str, opts: LoadOptions) -> Result<Graph> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut header: Option<u64> = None;
    let mut seen_data = false;
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let parse = |t: &str| -> Result<u64> {
            t.parse::<u64>().map_err(|e| match e.kind() {
                std::num::IntErrorKind::PosOverflow => Error::IndexOverflow(u64::MAX),
                _ => perr(lineno, format!("expected a nonnegative integer, found {t:?}")),
            })
        };
        match toks.len() {
            1 if !seen_data && header.is_none() => header = Some(parse(toks[0])?),
            2 | 3 => {
                let i = parse(toks[0])?;
                let j = parse(toks[1])?;
                let k = if toks.len() == 3 { parse(toks[2])? } else { 1 };
                raw.push((lineno, i, j, k));
            }
            _ => {
                return Err(perr(
                    lineno,
                    format!("expected `i j [multiplicity]`, found {line:?}"),
                ))
            }
        }
        seen_data = true;
    }

    // A node-count header implies the ids are already dense indices.
    let mode = match (opts.index, header) {
        (IndexMode::Dense, Some(_)) => IndexMode::ZeroBased,
        (m, _) => m,
    };
    let (n, ids, map): (usize, Vec<u64>, Box<dyn Fn(u64) -> usize>) = match mode {
        IndexMode::Dense => {
            let mut ids: Vec<u64> = raw.iter().flat_map(|&(_, i, j, _)| [i, j]).collect();
            ids.sort_unstable();
            ids.dedup();
            let lookup: HashMap<u64, usize> =
                ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
            (ids.len(), ids, Box::new(move |id| lookup[&id]))
        }
        IndexMode::ZeroBased | IndexMode::OneBased => {
            let base = u64::from(mode == IndexMode::OneBased);
            let mut max_index: Option<u64> = None;
            for &(lineno, i, j, _) in &raw {
                for id in [i, j] {
                    if id < base {
                        return Err(perr(lineno, "node id 0 in a one-based listing".into()));
                    }
                    if id - base > MAX_NODE_INDEX {
                        return Err(Error::IndexOverflow(id));
                    }
                    max_index = Some(max_index.map_or(id - base, |m: u64| m.max(id - base)));
                }
            }
            let from_edges = max_index.map_or(0, |m| m + 1);
            let n = match header {
                Some(h) if h > MAX_NODE_INDEX => return Err(Error::IndexOverflow(h)),
                Some(h) if h < from_edges => {
                    return Err(perr(
                        1,
                        format!("header declares {h} nodes but index {} appears", from_edges - 1),
                    ))
                }
                Some(h) => h,
                None => from_edges,
            } as usize;
            let ids = (0..n as u64).map(|i| i + base).collect();
            (n, ids, Box::new(move |id| (id - base) as usize))
        }
    };

    let mut entries = Vec::with_capacity(2 * raw.len());
    for &(_, i, j, k) in &raw {
        let (i, j) = (map(i), map(j));
        match opts.listing {
            Listing::Edges if i == j => entries.push((i, i, 2 * k)),
            Listing::Edges => {
                entries.push((i, j, k));
                entries.push((j, i, k));
            }
            Listing::Entries => entries.push((i, j, k)),
        }
    }
    let mut g = Graph::build(n, entries, ids)?;
    if opts.listing == Listing::Entries {
        g.check_symmetric()
            .map_err(|e| perr(0, format!("entry listing is not symmetric: {e}")))?;
    }
    if opts.drop_self_loops {
        g = g.without_self_loops();
    }
    if opts.simple {
        g = g.simplified();
    }
    Ok(g)
}

/// Ground-truth community labels; `None` marks an unlabeled node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub assignment: Vec<Option<usize>>,
    pub r: usize,
}

impl Labels {
    /// Labels for every node; `r` is one more than the largest label.
    pub fn complete(assignment: &[usize]) -> Labels {
        let r = assignment.iter().max().map_or(1, |&m| m + 1);
        Labels {
            assignment: assignment.iter().map(|&k| Some(k)).collect(),
            r,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }
}

/// Reads `node community` lines. Node tokens are original ids of `g`;
/// community tokens are relabelled to `0..r` in ascending order.
pub fn load_labels(path: impl AsRef<Path>, g: &Graph) -> Result<Labels> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, &path.display().to_string(), g)
}

pub fn parse_labels(text: &str, source: &str, g: &Graph) -> Result<Labels> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let lookup: HashMap<u64, usize> = g.ids().iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(perr(lineno, format!("expected `node community`, found {line:?}")));
        }
        let node: u64 = toks[0]
            .parse()
            .map_err(|_| perr(lineno, format!("bad node id {:?}", toks[0])))?;
        let comm: u64 = toks[1]
            .parse()
            .map_err(|_| perr(lineno, format!("bad community {:?}", toks[1])))?;
        // Labels for nodes outside the graph (e.g. dropped by LCC) are skipped.
        if let Some(&idx) = lookup.get(&node) {
            pairs.push((idx, comm));
        }
    }
    let mut comms: Vec<u64> = pairs.iter().map(|&(_, c)| c).collect();
    comms.sort_unstable();
    comms.dedup();
    let mut assignment = vec![None; g.n()];
    for (idx, c) in pairs {
        assignment[idx] = Some(comms.binary_search(&c).expect("present"));
    }
    Ok(Labels {
        assignment,
        r: comms.len().max(1),
    })
}

/// Writes `node community` lines using the graph's original node ids.
pub fn save_assignment(path: impl AsRef<Path>, g: &Graph, assignment: &[usize]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (i, k) in assignment.iter().enumerate() {
        let _ = writeln!(out, "{} {}", g.ids()[i], k);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_edge_list(text, "test", LoadOptions::default())
    }

    #[test]
    fn path_graph() {
        let g = parse("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.entry(0, 1), 1);
        assert_eq!(g.entry(1, 0), 1);
        assert_eq!(g.entry(1, 2), 1);
        assert_eq!(g.entry(2, 1), 1);
        assert_eq!(g.degrees(), &[1, 2, 1]);
        assert_eq!(g.total(), 4);
    }

    #[test]
    fn self_edge_counts_twice() {
        let g = parse("0 0").unwrap();
        assert_eq!(g.entry(0, 0), 2);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn duplicate_lines_accumulate() {
        let g = parse("0 1\n0 1").unwrap();
        assert_eq!(g.entry(0, 1), 2);
        let g = parse("0 1 3\n1 0").unwrap();
        assert_eq!(g.entry(1, 0), 4);
    }

    #[test]
    fn comments_and_whitespace() {
        let g = parse("# a comment\n\n  0\t1  \n# another\n1   2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.total(), 4);
    }

    #[test]
    fn dense_relabelling_keeps_ids() {
        let g = parse("10 30\n30 20").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.ids(), &[10, 20, 30]);
        assert_eq!(g.entry(0, 2), 1);
        assert_eq!(g.entry(1, 2), 1);
    }

    #[test]
    fn header_adds_isolated_nodes() {
        let g = parse("5\n0 1\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.degree(4), 0);
        assert!(matches!(parse("2\n0 3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn one_based() {
        let opts = LoadOptions {
            index: IndexMode::OneBased,
            ..Default::default()
        };
        let g = parse_edge_list("1 2\n2 3", "t", opts).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.entry(0, 1), 1);
        assert_eq!(g.ids(), &[1, 2, 3]);
        assert!(parse_edge_list("0 1", "t", opts).is_err());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("0 1\n1 2 3 4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 -1"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn index_overflow_rejected() {
        let opts = LoadOptions {
            index: IndexMode::ZeroBased,
            ..Default::default()
        };
        assert!(matches!(
            parse_edge_list("0 99999999999", "t", opts),
            Err(Error::IndexOverflow(_))
        ));
        assert!(matches!(
            parse("0 99999999999999999999999"),
            Err(Error::IndexOverflow(_))
        ));
    }

    #[test]
    fn entry_listing_keeps_odd_diagonal() {
        let opts = LoadOptions {
            listing: Listing::Entries,
            ..Default::default()
        };
        let g = parse_edge_list("0 1\n1 0\n2 2 1", "t", opts).unwrap();
        assert_eq!(g.entry(2, 2), 1);
        assert!(parse_edge_list("0 1", "t", opts).is_err());
    }

    #[test]
    fn drop_self_loops_and_simplify() {
        let opts = LoadOptions {
            drop_self_loops: true,
            simple: true,
            ..Default::default()
        };
        let g = parse_edge_list("0 0\n0 1 3\n1 2", "t", opts).unwrap();
        assert_eq!(g.entry(0, 0), 0);
        assert_eq!(g.entry(0, 1), 1);
        assert_eq!(g.total(), 4);
    }

    #[test]
    fn lcc_picks_larger_component() {
        let g = parse("7\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n6 3").unwrap();
        let c = largest_connected_component(&g).unwrap();
        assert_eq!(c.new_to_old, vec![3, 4, 5, 6]);
        assert_eq!(c.graph.n(), 4);
        assert_eq!(c.old_to_new[0], None);
        assert_eq!(c.old_to_new[6], Some(3));
        assert_eq!(c.graph.ids(), &[3, 4, 5, 6]);
    }

    #[test]
    fn lcc_tie_goes_to_smallest_index() {
        let g = parse("0 1\n2 3").unwrap();
        let c = largest_connected_component(&g).unwrap();
        assert_eq!(c.new_to_old, vec![0, 1]);
    }

    #[test]
    fn lcc_of_connected_graph_is_identity() {
        let g = parse("0 1\n1 2\n2 3").unwrap();
        let c = largest_connected_component(&g).unwrap();
        assert_eq!(c.new_to_old, vec![0, 1, 2, 3]);
        assert_eq!(c.graph, g);
    }

    #[test]
    fn lcc_of_empty_graph_fails() {
        let g = Graph::from_edges(0, []).unwrap();
        assert!(matches!(largest_connected_component(&g), Err(Error::EmptyGraph)));
    }

    #[test]
    fn labels_follow_original_ids() {
        let g = parse("10 20\n20 30").unwrap();
        let l = parse_labels("30 7\n10 3\n", "t", &g).unwrap();
        assert_eq!(l.assignment, vec![Some(0), None, Some(1)]);
        assert_eq!(l.r, 2);
        assert!(!l.is_complete());
    }

    #[test]
    fn asymmetric_entries_rejected() {
        assert!(Graph::from_entries(2, [(0, 1, 1)]).is_err());
        assert!(Graph::from_dense(&[vec![0, 1], vec![1, 0]]).is_ok());
    }
}
