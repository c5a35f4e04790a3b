//! Tensor networks as multigraphs: nodes hold tensors, bonds join legs, and
//! the remaining legs are exposed in a user-declared order.
//!
//! Contraction is pairwise. A few candidate orders are dry-run on shapes
//! alone and the one with the smallest peak intermediate is executed.

use std::collections::BTreeMap;

use thiserror::Error;
use tnq_tensor::{bend_all, conj, contract, permute_legs, tensor_product, trace_pairs, Tensor, TensorError, C64};

pub type NodeId = usize;

/// A leg of a particular node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub node: NodeId,
    pub leg: usize,
}

impl Port {
    pub fn new(node: NodeId, leg: usize) -> Self {
        Port { node, leg }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("network has no nodes")]
    Empty,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {} has no leg {}", .0.node, .0.leg)]
    NoSuchLeg(Port),
    #[error("leg {}.{} is used more than once", .0.node, .0.leg)]
    LegReused(Port),
    #[error("leg {}.{} is neither bonded nor open", .0.node, .0.leg)]
    LegUnused(Port),
    #[error("bond {}.{} - {}.{}: {reason}", .a.node, .a.leg, .b.node, .b.leg)]
    BadBond { a: Port, b: Port, reason: String },
    #[error("open legs differ: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type NetResult<T> = Result<T, NetError>;

#[derive(Debug, Clone)]
pub struct Network {
    nodes: Vec<Tensor>,
    bonds: Vec<(Port, Port)>,
    open: Vec<Port>,
}

#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    nodes: Vec<Tensor>,
    bonds: Vec<(Port, Port)>,
    open: Vec<Port>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, t: Tensor) -> NodeId {
        self.nodes.push(t);
        self.nodes.len() - 1
    }

    pub fn bond(&mut self, a: NodeId, leg_a: usize, b: NodeId, leg_b: usize) -> &mut Self {
        self.bonds.push((Port::new(a, leg_a), Port::new(b, leg_b)));
        self
    }

    pub fn open(&mut self, node: NodeId, leg: usize) -> &mut Self {
        self.open.push(Port::new(node, leg));
        self
    }

    fn port_leg(&self, p: Port) -> NetResult<tnq_tensor::Leg> {
        let t = self.nodes.get(p.node).ok_or(NetError::UnknownNode(p.node))?;
        t.legs().get(p.leg).copied().ok_or(NetError::NoSuchLeg(p))
    }

    fn validate(&self, require_all: bool) -> NetResult<Vec<Port>> {
        if self.nodes.is_empty() {
            return Err(NetError::Empty);
        }
        let mut used = BTreeMap::new();
        let mut mark = |p: Port| -> NetResult<()> {
            if used.insert(p, ()).is_some() {
                return Err(NetError::LegReused(p));
            }
            Ok(())
        };
        for &(a, b) in &self.bonds {
            let (la, lb) = (self.port_leg(a)?, self.port_leg(b)?);
            if a == b {
                return Err(NetError::BadBond { a, b, reason: "leg bonded to itself".into() });
            }
            if la.dim != lb.dim {
                return Err(NetError::BadBond { a, b, reason: format!("dimensions {} and {}", la.dim, lb.dim) });
            }
            if la.orient == lb.orient {
                return Err(NetError::BadBond { a, b, reason: "same orientation".into() });
            }
            mark(a)?;
            mark(b)?;
        }
        for &p in &self.open {
            self.port_leg(p)?;
            mark(p)?;
        }
        let mut missing = Vec::new();
        for (n, t) in self.nodes.iter().enumerate() {
            for l in 0..t.order() {
                let p = Port::new(n, l);
                if !used.contains_key(&p) {
                    if require_all {
                        return Err(NetError::LegUnused(p));
                    }
                    missing.push(p);
                }
            }
        }
        Ok(missing)
    }

    /// Finalizes the network; every leg must be bonded or declared open.
    pub fn build(&self) -> NetResult<Network> {
        self.validate(true)?;
        Ok(Network { nodes: self.nodes.clone(), bonds: self.bonds.clone(), open: self.open.clone() })
    }

    /// Finalizes the network, appending any undeclared legs to the open list
    /// in `(node, leg)` order.
    pub fn build_open_rest(&self) -> NetResult<Network> {
        let missing = self.validate(false)?;
        let mut open = self.open.clone();
        open.extend(missing);
        Ok(Network { nodes: self.nodes.clone(), bonds: self.bonds.clone(), open })
    }
}

struct Cluster {
    id: NodeId,
    tensor: Tensor,
    ports: Vec<Port>,
}

/// Pairwise contraction orders considered by [`Network::contract`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Planner {
    /// Connected pair with the smallest merged tensor, ties to the smallest ids.
    GreedySize,
    /// Connected pair whose merge grows the stored entry count least.
    GreedyGrowth,
    /// Absorb nodes one at a time in id order.
    Sequential,
}

struct Plan {
    steps: Vec<(usize, usize)>,
    peak: usize,
    cost: u128,
}

#[derive(Clone)]
struct ShapeCluster {
    id: NodeId,
    ports: Vec<Port>,
    dims: Vec<usize>,
}

impl ShapeCluster {
    fn of(c: &Cluster) -> Self {
        ShapeCluster { id: c.id, ports: c.ports.clone(), dims: c.tensor.dims() }
    }

    fn len(&self) -> usize {
        self.dims.iter().fold(1usize, |acc, &d| acc.saturating_mul(d))
    }

    fn merged_len(&self, other: &ShapeCluster, partner: &BTreeMap<Port, Port>) -> u128 {
        let mut shared = 1u128;
        for (i, p) in self.ports.iter().enumerate() {
            if partner.get(p).is_some_and(|q| other.ports.contains(q)) {
                shared *= self.dims[i] as u128;
            }
        }
        self.len() as u128 * other.len() as u128 / (shared * shared)
    }

    /// Merged shape and the product of the contracted dimensions.
    fn merge(&self, other: &ShapeCluster, partner: &BTreeMap<Port, Port>) -> (ShapeCluster, usize) {
        let mut shared_dim = 1usize;
        let mut drop_a = vec![false; self.ports.len()];
        let mut drop_b = vec![false; other.ports.len()];
        for (i, p) in self.ports.iter().enumerate() {
            if let Some(j) = partner.get(p).and_then(|q| other.ports.iter().position(|x| x == q)) {
                drop_a[i] = true;
                drop_b[j] = true;
                shared_dim = shared_dim.saturating_mul(self.dims[i]);
            }
        }
        let mut ports = Vec::new();
        let mut dims = Vec::new();
        for (k, (p, d)) in self.ports.iter().zip(&self.dims).enumerate() {
            if !drop_a[k] {
                ports.push(*p);
                dims.push(*d);
            }
        }
        for (k, (p, d)) in other.ports.iter().zip(&other.dims).enumerate() {
            if !drop_b[k] {
                ports.push(*p);
                dims.push(*d);
            }
        }
        (ShapeCluster { id: self.id.min(other.id), ports, dims }, shared_dim)
    }
}

impl Planner {
    pub const ALL: [Planner; 3] = [Planner::GreedySize, Planner::GreedyGrowth, Planner::Sequential];

    fn plan(self, shapes: &[ShapeCluster], partner: &BTreeMap<Port, Port>) -> Plan {
        let mut slots: Vec<Option<ShapeCluster>> = shapes.iter().cloned().map(Some).collect();
        // original node -> slot currently holding it
        let mut owner: Vec<usize> = (0..shapes.len()).collect();
        let mut peak = shapes.iter().map(ShapeCluster::len).max().unwrap_or(1);
        let mut cost = 0u128;
        let mut steps = Vec::new();
        for _ in 1..shapes.len() {
            let (i, j) = match self {
                Planner::Sequential => {
                    let live: Vec<usize> = (0..slots.len()).filter(|&k| slots[k].is_some()).take(2).collect();
                    (live[0], live[1])
                }
                _ => self.pick(&slots, &owner, partner),
            };
            let (merged, shared) = slots[i].as_ref().unwrap().merge(slots[j].as_ref().unwrap(), partner);
            let len = merged.len();
            peak = peak.max(len);
            cost = cost.saturating_add(len as u128 * shared as u128);
            for o in owner.iter_mut() {
                if *o == j {
                    *o = i;
                }
            }
            slots[j] = None;
            slots[i] = Some(merged);
            steps.push((i, j));
        }
        Plan { steps, peak, cost }
    }

    fn pick(self, slots: &[Option<ShapeCluster>], owner: &[usize], partner: &BTreeMap<Port, Port>) -> (usize, usize) {
        let mut pairs = std::collections::BTreeSet::new();
        for (i, c) in slots.iter().enumerate() {
            if let Some(c) = c {
                for p in &c.ports {
                    if let Some(q) = partner.get(p) {
                        let k = owner[q.node];
                        if k != i {
                            pairs.insert((i.min(k), i.max(k)));
                        }
                    }
                }
            }
        }
        if pairs.is_empty() {
            // disconnected pieces: outer products between any two
            let live: Vec<usize> = (0..slots.len()).filter(|&k| slots[k].is_some()).collect();
            for (x, &i) in live.iter().enumerate() {
                for &j in &live[x + 1..] {
                    pairs.insert((i, j));
                }
            }
        }
        let key = |&(i, j): &(usize, usize)| {
            let (a, b) = (slots[i].as_ref().unwrap(), slots[j].as_ref().unwrap());
            let m = a.merged_len(b, partner);
            let score = match self {
                Planner::GreedyGrowth => m as i128 - a.len() as i128 - b.len() as i128,
                _ => m as i128,
            };
            (score, a.id.min(b.id), a.id.max(b.id))
        };
        pairs.into_iter().min_by_key(key).expect("two live clusters")
    }
}

impl Network {
    pub fn nodes(&self) -> &[Tensor] {
        &self.nodes
    }

    pub fn bonds(&self) -> &[(Port, Port)] {
        &self.bonds
    }

    pub fn open_legs(&self) -> &[Port] {
        &self.open
    }

    pub fn open_leg_shapes(&self) -> Vec<tnq_tensor::Leg> {
        self.open.iter().map(|p| self.nodes[p.node].legs()[p.leg]).collect()
    }

    fn partners(&self) -> BTreeMap<Port, Port> {
        let mut m = BTreeMap::new();
        for &(a, b) in &self.bonds {
            m.insert(a, b);
            m.insert(b, a);
        }
        m
    }

    /// Each node with its self-loops already traced out.
    fn initial_clusters(&self, partner: &BTreeMap<Port, Port>) -> NetResult<Vec<Cluster>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for (n, t) in self.nodes.iter().enumerate() {
            let loops: Vec<(usize, usize)> = self
                .bonds
                .iter()
                .filter(|(a, b)| a.node == n && b.node == n)
                .map(|(a, b)| (a.leg, b.leg))
                .collect();
            let tensor = if loops.is_empty() { t.clone() } else { trace_pairs(t, &loops)? };
            let ports = (0..t.order())
                .filter(|&l| partner.get(&Port::new(n, l)).map(|q| q.node != n).unwrap_or(true))
                .map(|l| Port::new(n, l))
                .collect();
            out.push(Cluster { id: n, tensor, ports });
        }
        Ok(out)
    }

    fn merge(a: &Cluster, b: &Cluster, partner: &BTreeMap<Port, Port>) -> NetResult<Cluster> {
        let mut la = Vec::new();
        let mut lb = Vec::new();
        for (i, p) in a.ports.iter().enumerate() {
            if let Some(q) = partner.get(p) {
                if let Some(j) = b.ports.iter().position(|x| x == q) {
                    la.push(i);
                    lb.push(j);
                }
            }
        }
        let tensor = if la.is_empty() { tensor_product(&a.tensor, &b.tensor)? } else { contract(&a.tensor, &la, &b.tensor, &lb)? };
        let mut ports: Vec<Port> = a.ports.iter().enumerate().filter(|(i, _)| !la.contains(i)).map(|(_, p)| *p).collect();
        ports.extend(b.ports.iter().enumerate().filter(|(j, _)| !lb.contains(j)).map(|(_, p)| *p));
        Ok(Cluster { id: a.id.min(b.id), tensor, ports })
    }

    fn finish(&self, c: Cluster) -> NetResult<Tensor> {
        let perm: Vec<usize> = self
            .open
            .iter()
            .map(|p| c.ports.iter().position(|q| q == p).expect("open leg survives contraction"))
            .collect();
        Ok(permute_legs(&c.tensor, &perm)?)
    }

    /// Contracts the whole network along the plan with the smallest peak
    /// intermediate among [`Planner`]'s candidates.
    pub fn contract(&self) -> NetResult<Tensor> {
        let partner = self.partners();
        let initial = self.initial_clusters(&partner)?;
        let shapes: Vec<ShapeCluster> = initial.iter().map(ShapeCluster::of).collect();
        let plan = Planner::ALL
            .iter()
            .map(|&p| p.plan(&shapes, &partner))
            .min_by_key(|plan| (plan.peak, plan.cost))
            .expect("at least one planner");
        self.run_plan(initial, &plan.steps, &partner)
    }

    /// Contracts with one specific planner.
    pub fn contract_with(&self, planner: Planner) -> NetResult<Tensor> {
        let partner = self.partners();
        let initial = self.initial_clusters(&partner)?;
        let shapes: Vec<ShapeCluster> = initial.iter().map(ShapeCluster::of).collect();
        let plan = planner.plan(&shapes, &partner);
        self.run_plan(initial, &plan.steps, &partner)
    }

    /// Peak entry count of each candidate plan, without touching any data.
    pub fn plan_peaks(&self) -> NetResult<Vec<(Planner, usize)>> {
        let partner = self.partners();
        let shapes: Vec<ShapeCluster> = self.initial_clusters(&partner)?.iter().map(ShapeCluster::of).collect();
        Ok(Planner::ALL.iter().map(|&p| (p, p.plan(&shapes, &partner).peak)).collect())
    }

    fn run_plan(&self, initial: Vec<Cluster>, steps: &[(usize, usize)], partner: &BTreeMap<Port, Port>) -> NetResult<Tensor> {
        let mut slots: Vec<Option<Cluster>> = initial.into_iter().map(Some).collect();
        for &(i, j) in steps {
            let b = slots[j].take().expect("live slot");
            let a = slots[i].take().expect("live slot");
            slots[i] = Some(Self::merge(&a, &b, partner)?);
        }
        let last = slots.into_iter().flatten().next().ok_or(NetError::Empty)?;
        self.finish(last)
    }

    /// Reference path: absorbs nodes one at a time in id order.
    pub fn contract_sequential(&self) -> NetResult<Tensor> {
        let partner = self.partners();
        let mut clusters = self.initial_clusters(&partner)?.into_iter();
        let mut acc = clusters.next().ok_or(NetError::Empty)?;
        for c in clusters {
            acc = Self::merge(&acc, &c, &partner)?;
        }
        self.finish(acc)
    }

    /// The network joined to its mirror image (conjugated, every leg bent),
    /// `self`'s open legs bonded to `other`'s in order.
    fn join_with_mirror(a: &Network, b: &Network) -> NetResult<Network> {
        let sa = a.open_leg_shapes();
        let sb = b.open_leg_shapes();
        if sa != sb {
            return Err(NetError::ShapeMismatch(format!("{sa:?} vs {sb:?}")));
        }
        let mut nb = NetworkBuilder::new();
        let off = a.nodes.len();
        for t in &a.nodes {
            nb.add_node(bend_all(&conj(t)));
        }
        for t in &b.nodes {
            nb.add_node(t.clone());
        }
        for &(p, q) in &a.bonds {
            nb.bond(p.node, p.leg, q.node, q.leg);
        }
        for &(p, q) in &b.bonds {
            nb.bond(p.node + off, p.leg, q.node + off, q.leg);
        }
        for (p, q) in a.open.iter().zip(&b.open) {
            nb.bond(p.node, p.leg, q.node + off, q.leg);
        }
        nb.build()
    }

    /// `<self|self>` computed by contracting against the conjugate mirror.
    pub fn norm_squared(&self) -> NetResult<f64> {
        let v = self.inner_product(self)?;
        Ok(v.re.max(0.0))
    }

    /// `<self|other>` with `self` conjugated.
    pub fn inner_product(&self, other: &Network) -> NetResult<C64> {
        let joined = Self::join_with_mirror(self, other)?;
        let t = joined.contract()?;
        Ok(t.scalar_value().expect("closed network"))
    }
}

/// Network holding a single tensor with all legs open.
pub fn single(t: Tensor) -> Network {
    let mut nb = NetworkBuilder::new();
    nb.add_node(t);
    nb.build_open_rest().expect("single node network")
}

pub fn contract_network(n: &Network) -> NetResult<Tensor> {
    n.contract()
}

pub fn norm_squared(n: &Network) -> NetResult<f64> {
    n.norm_squared()
}

pub fn inner_product(a: &Network, b: &Network) -> NetResult<C64> {
    a.inner_product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tnq_tensor::Leg;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn ket(bits: &[usize]) -> Tensor {
        Tensor::ket(&vec![2; bits.len()], bits).unwrap()
    }

    #[test]
    fn single_node_is_identity_map() {
        let t = Tensor::matrix(2, 2, vec![r(1.0), r(2.0), r(3.0), r(4.0)]).unwrap();
        assert_eq!(single(t.clone()).contract().unwrap(), t);
    }

    #[test]
    fn open_order_is_preserved() {
        let t = Tensor::matrix(2, 3, (0..6).map(|k| r(k as f64)).collect()).unwrap();
        let mut nb = NetworkBuilder::new();
        let n = nb.add_node(t.clone());
        nb.open(n, 1).open(n, 0);
        let out = nb.build().unwrap().contract().unwrap();
        assert_eq!(out.dims(), vec![3, 2]);
        assert_eq!(out.get(&[2, 1]), t.get(&[1, 2]));
    }

    #[test]
    fn builder_rejects_bad_networks() {
        let v = ket(&[0]);
        let mut nb = NetworkBuilder::new();
        let a = nb.add_node(v.clone());
        let b = nb.add_node(v.clone());
        nb.bond(a, 0, b, 0);
        assert!(matches!(nb.build(), Err(NetError::BadBond { .. })));

        let mut nb = NetworkBuilder::new();
        nb.add_node(v.clone());
        assert!(matches!(nb.build(), Err(NetError::LegUnused(_))));

        let mut nb = NetworkBuilder::new();
        let a = nb.add_node(v.clone());
        nb.open(a, 0).open(a, 0);
        assert!(matches!(nb.build(), Err(NetError::LegReused(_))));

        let mut nb = NetworkBuilder::new();
        let a = nb.add_node(v);
        nb.open(a, 3);
        assert!(matches!(nb.build(), Err(NetError::NoSuchLeg(_))));
        assert!(matches!(NetworkBuilder::new().build(), Err(NetError::Empty)));
    }

    #[test]
    fn norms_and_inner_products() {
        assert!((single(ket(&[0])).norm_squared().unwrap() - 1.0).abs() < 1e-15);
        let phi = ket(&[0, 0]).add(&ket(&[1, 1])).unwrap();
        assert!((single(phi.clone()).norm_squared().unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(single(ket(&[0])).inner_product(&single(ket(&[1]))).unwrap(), r(0.0));
        assert_eq!(single(ket(&[0, 1])).inner_product(&single(phi)).unwrap(), r(0.0));
        let bad = single(ket(&[0, 1, 1]));
        assert!(matches!(single(ket(&[0, 1])).inner_product(&bad), Err(NetError::ShapeMismatch(_))));
    }

    #[test]
    fn self_loop_is_a_trace() {
        let t = Tensor::matrix(3, 3, (0..9).map(|k| r(k as f64)).collect()).unwrap();
        let mut nb = NetworkBuilder::new();
        let n = nb.add_node(t);
        nb.bond(n, 0, n, 1);
        let v = nb.build().unwrap().contract().unwrap();
        assert_eq!(v.scalar_value(), Some(r(12.0)));
    }

    #[test]
    fn parallel_bonds() {
        // theta-like: two nodes joined by two wires
        let a = Tensor::from_fn(vec![Leg::down(2), Leg::down(2)], |ix| r((ix[0] * 2 + ix[1] + 1) as f64)).unwrap();
        let b = tnq_tensor::bend_all(&a);
        let mut nb = NetworkBuilder::new();
        let x = nb.add_node(a.clone());
        let y = nb.add_node(b);
        nb.bond(x, 0, y, 0).bond(x, 1, y, 1);
        let v = nb.build().unwrap().contract().unwrap().scalar_value().unwrap();
        let want: f64 = a.data().iter().map(|z| z.norm_sqr()).sum();
        assert_eq!(v, r(want));
    }

    #[test]
    fn size_cap_reports_shape() {
        let prev = tnq_tensor::size_cap();
        let big = Tensor::zeros(vec![Leg::down(64)]).unwrap();
        let mut nb = NetworkBuilder::new();
        for _ in 0..5 {
            nb.add_node(big.clone());
        }
        let net = nb.build_open_rest().unwrap();
        // 64^5 = 2^30 entries, above the default cap of 2^26
        match net.contract() {
            Err(NetError::Tensor(TensorError::SizeCap { shape, .. })) => assert!(shape.iter().all(|&d| d == 64)),
            other => panic!("expected size-cap error, got {other:?}"),
        }
        assert_eq!(tnq_tensor::size_cap(), prev);
    }
}
