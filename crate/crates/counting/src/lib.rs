//! Proper 3-edge-colorings of cubic multigraphs, counted by contracting one
//! order-3 Levi-Civita tensor per node.
//!
//! Each node's legs follow its incident edges in ascending edge id. The
//! contraction sums the sign of every proper coloring, so it equals the
//! number of colorings only when all terms share a sign (planar graphs up to
//! a global sign). For other graphs the signed sum is returned as is.

use thiserror::Error;
use tnq_gates::GateError;
use tnq_netgraph::{NetError, NetworkBuilder};
use tnq_tensor::{Orientation, TensorError, C64};

/// Edge cap of the exhaustive oracle.
pub const BRUTEFORCE_MAX_EDGES: usize = 20;
const RESIDUE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node {node} has degree {degree}, expected 3")]
    NotCubic { node: usize, degree: usize },
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeRange(usize, usize, usize),
    #[error("contraction is not an integer (residue {0:.3e})")]
    Residue(f64),
    #[error("{0} edges exceed the oracle cap of {BRUTEFORCE_MAX_EDGES}")]
    TooLarge(usize),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

pub type CountResult<T> = Result<T, CountError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    planarity_asserted: bool,
}

impl ColorGraph {
    /// Node ids are checked here; degrees are checked when counting.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>, planarity_asserted: bool) -> CountResult<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n_nodes || v >= n_nodes) {
            return Err(CountError::NodeRange(u, v, n_nodes));
        }
        Ok(ColorGraph { n_nodes, edges, planarity_asserted })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn planarity_asserted(&self) -> bool {
        self.planarity_asserted
    }

    pub fn with_planarity(mut self, asserted: bool) -> Self {
        self.planarity_asserted = asserted;
        self
    }

    /// A self-loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn check_cubic(&self) -> CountResult<()> {
        match self.degrees().into_iter().enumerate().find(|&(_, d)| d != 3) {
            Some((node, degree)) => Err(CountError::NotCubic { node, degree }),
            None => Ok(()),
        }
    }

    /// Incident edge ids of each node, ascending. A self-loop appears twice.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_nodes];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        inc
    }
}

/// `u v` per line, 0-based; `#` starts a comment. The node count is one past
/// the largest id.
pub fn parse_edgelist(text: &str) -> CountResult<ColorGraph> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(CountError::Parse { line, msg: format!("expected two node ids, found {} tokens", toks.len()) });
        }
        let mut ids = [0usize; 2];
        for (slot, tok) in ids.iter_mut().zip(&toks) {
            let v: i64 = tok
                .parse()
                .map_err(|_| CountError::Parse { line, msg: format!("`{tok}` is not an integer") })?;
            if v < 0 {
                return Err(CountError::Parse { line, msg: format!("negative node id {v}") });
            }
            *slot = v as usize;
        }
        edges.push((ids[0], ids[1]));
    }
    let n_nodes = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    ColorGraph::new(n_nodes, edges, false)
}

pub fn write_edgelist(g: &ColorGraph) -> String {
    g.edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

/// Signed contraction of the epsilon network.
pub fn count_colorings_epsilon(g: &ColorGraph) -> CountResult<i64> {
    g.check_cubic()?;
    // a loop closes two legs of one antisymmetric tensor
    if g.edges.iter().any(|&(u, v)| u == v) {
        return Ok(0);
    }
    if g.n_nodes == 0 {
        return Ok(1);
    }
    let eps = tnq_gates::epsilon(3)?;
    let inc = g.incidence();
    let mut nb = NetworkBuilder::new();
    for (node, edges) in inc.iter().enumerate() {
        let orients: Vec<Orientation> = edges
            .iter()
            .map(|&e| if g.edges[e].0.min(g.edges[e].1) == node { Orientation::Down } else { Orientation::Up })
            .collect();
        nb.add_node(eps.with_orientations(&orients)?);
    }
    let port = |node: usize, e: usize| inc[node].iter().position(|&x| x == e).expect("incident edge");
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        nb.bond(u, port(u, e), v, port(v, e));
    }
    let k = nb.build()?.contract()?.scalar_value().unwrap_or(C64::new(0.0, 0.0));
    let rounded = k.re.round();
    let residue = (k - C64::new(rounded, 0.0)).norm();
    if residue > RESIDUE_TOL {
        return Err(CountError::Residue(residue));
    }
    Ok(rounded as i64)
}

/// Exhaustive search over edge colorings, pruned at the first clash.
pub fn count_colorings_bruteforce(g: &ColorGraph) -> CountResult<u64> {
    g.check_cubic()?;
    if g.edges.len() > BRUTEFORCE_MAX_EDGES {
        return Err(CountError::TooLarge(g.edges.len()));
    }
    let mut used = vec![[false; 3]; g.n_nodes];
    Ok(extend(&g.edges, 0, &mut used))
}

fn extend(edges: &[(usize, usize)], e: usize, used: &mut [[bool; 3]]) -> u64 {
    let Some(&(u, v)) = edges.get(e) else { return 1 };
    if u == v {
        return 0;
    }
    let mut total = 0;
    for c in 0..3 {
        if used[u][c] || used[v][c] {
            continue;
        }
        used[u][c] = true;
        used[v][c] = true;
        total += extend(edges, e + 1, used);
        used[u][c] = false;
        used[v][c] = false;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_by_hand() {
        let g = parse_edgelist("0 1\n0 1\n0 1").unwrap();
        assert_eq!(g.n_nodes(), 2);
        assert_eq!(count_colorings_bruteforce(&g).unwrap(), 6);
        assert_eq!(count_colorings_epsilon(&g).unwrap(), 6);
    }

    #[test]
    fn loops_admit_no_coloring() {
        // a loop at 0 plus a bridge to a node carrying another loop
        let g = ColorGraph::new(2, vec![(0, 0), (0, 1), (1, 1)], true).unwrap();
        assert_eq!(count_colorings_bruteforce(&g).unwrap(), 0);
        assert_eq!(count_colorings_epsilon(&g).unwrap(), 0);
    }
}
