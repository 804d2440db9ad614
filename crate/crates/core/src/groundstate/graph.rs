use crate::error::{Error, Result};

/// Simple undirected graph; edges stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    /// `Some((rows, cols))` when built by [`GraphSpec::lattice`].
    lattice: Option<(usize, usize)>,
}

impl GraphSpec {
    /// Edges are normalized to `u < v`; self-loops and duplicates are errors.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for {n_nodes} nodes")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop on node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            out.push(e);
        }
        Ok(Self { n_nodes, edges: out, lattice: None })
    }

    /// Open-boundary `rows × cols` square lattice, node `r·cols + c`.
    pub fn lattice(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("lattice dimensions must be positive"));
        }
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        let mut g = Self::new(rows * cols, edges)?;
        g.lattice = Some((rows, cols));
        Ok(g)
    }

    /// Parse `LxL` or `RxC`.
    pub fn lattice_from_label(label: &str) -> Result<Self> {
        let parts: Vec<&str> = label.split(['x', 'X']).collect();
        let bad = || Error::invalid(format!("lattice label {label:?} is not of the form RxC"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let r = parts[0].trim().parse().map_err(|_| bad())?;
        let c = parts[1].trim().parse().map_err(|_| bad())?;
        Self::lattice(r, c)
    }

    /// `nodes N` followed by one `u v` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: idx + 1, msg };
            let tok: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => {
                    if tok.len() != 2 || !tok[0].eq_ignore_ascii_case("nodes") {
                        return Err(perr("first line must be `nodes N`".into()));
                    }
                    n = Some(tok[1].parse().map_err(|e| perr(format!("bad node count: {e}")))?);
                }
                Some(_) => {
                    if tok.len() != 2 {
                        return Err(perr(format!("expected `u v`, got {line:?}")));
                    }
                    let u = tok[0].parse().map_err(|e| perr(format!("bad node: {e}")))?;
                    let v = tok[1].parse().map_err(|e| perr(format!("bad node: {e}")))?;
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing `nodes N` header".into() })?;
        Self::new(n, edges)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn lattice_shape(&self) -> Option<(usize, usize)> {
        self.lattice
    }

    pub fn is_connected(&self) -> bool {
        if self.n_nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_edge_count() {
        let g = GraphSpec::lattice(4, 4).unwrap();
        assert_eq!(g.edges().len(), 24);
        assert!(g.is_connected());
        assert_eq!(GraphSpec::lattice_from_label("3x3").unwrap().edges().len(), 12);
        assert!(GraphSpec::lattice_from_label("3by3").is_err());
    }

    #[test]
    fn parse_file_format() {
        let g = GraphSpec::parse("# triangle\nnodes 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
        assert!(GraphSpec::parse("nodes 2\n0 0\n").is_err());
        assert!(GraphSpec::parse("nodes 2\n0 1\n1 0\n").is_err());
        assert!(matches!(GraphSpec::parse("0 1\n"), Err(Error::Parse { line: 1, .. })));
    }
}
