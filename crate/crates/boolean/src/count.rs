use tnq_gates::{copy, copy_map, gate_forward, pauli_x, BoolGate};
use tnq_netgraph::{Network, NetworkBuilder};
use tnq_tensor::{Leg, Tensor, C64};

use crate::{boolean_state, BoolError, BoolResult, BooleanFunction, CnfFormula, StateMode};

fn bit(b: bool) -> C64 {
    C64::new(if b { 1.0 } else { 0.0 }, 0.0)
}

/// k-input OR with legs `(out Down, in_1 Up, .., in_k Up)`.
pub fn or_tensor(k: usize) -> BoolResult<Tensor> {
    let mut legs = vec![Leg::down(2)];
    legs.extend(vec![Leg::up(2); k]);
    Ok(Tensor::from_fn(legs, |ix| bit((ix[0] == 1) == ix[1..].contains(&1)))?)
}

/// Closed network whose value is the number of satisfying assignments of the
/// variables that occur in `f`.
///
/// Each occurring variable is a COPY spider feeding its literals (through NOT
/// for negative ones), each clause is an OR, and the clause outputs meet in a
/// chain of two-input ANDs capped by `<1|`. Spiders with more than three legs
/// are split into chains of small spiders, and node ids follow clause
/// order so absorbing nodes in id order sweeps through the formula.
pub fn cnf_network(f: &CnfFormula) -> BoolResult<Network> {
    let clauses = f.clauses();
    if clauses.is_empty() {
        return Err(BoolError::Arity("formula has no clauses".into()));
    }
    let mut counts = vec![0usize; f.n_vars()];
    for &lit in clauses.iter().flatten() {
        counts[lit.unsigned_abs() as usize - 1] += 1;
    }
    let mut spiders: Vec<Spider> = counts.iter().map(|&k| Spider::new(k)).collect();
    let mut nb = NetworkBuilder::new();
    let mut acc: Option<usize> = None;
    for c in clauses {
        let or = nb.add_node(or_tensor(c.len())?);
        for (j, &lit) in c.iter().enumerate() {
            let (node, leg) = spiders[lit.unsigned_abs() as usize - 1].next_leg(&mut nb)?;
            if lit > 0 {
                nb.bond(node, leg, or, j + 1);
            } else {
                let not = nb.add_node(pauli_x());
                nb.bond(node, leg, not, 1).bond(not, 0, or, j + 1);
            }
        }
        acc = Some(match acc {
            None => or,
            Some(prev) => {
                let and = nb.add_node(gate_forward(BoolGate::And));
                nb.bond(prev, 0, and, 1).bond(or, 0, and, 2);
                and
            }
        });
    }
    let cap = nb.add_node(Tensor::new(vec![Leg::up(2)], vec![bit(false), bit(true)])?);
    nb.bond(acc.expect("at least one clause"), 0, cap, 0);
    Ok(nb.build()?)
}

/// A `k`-leg COPY spider handed out one free (Down) leg at a time, built as a
/// chain with one small spider per leg, created on demand.
struct Spider {
    k: usize,
    handed: usize,
    link: (usize, usize),
}

impl Spider {
    fn new(k: usize) -> Self {
        Spider { k, handed: 0, link: (usize::MAX, 0) }
    }

    fn next_leg(&mut self, nb: &mut NetworkBuilder) -> BoolResult<(usize, usize)> {
        let (k, t) = (self.k, self.handed);
        self.handed += 1;
        if t == 0 {
            let node = nb.add_node(copy(k.min(2), 2)?);
            self.link = (node, 1);
            return Ok((node, 0));
        }
        // legs (free, onward link, back link), or (free, back link) at the end
        let node = if t + 1 == k { nb.add_node(copy_map(1, 1, 2)?) } else { nb.add_node(copy_map(1, 2, 2)?) };
        let back = if t + 1 == k { 1 } else { 2 };
        nb.bond(self.link.0, self.link.1, node, back);
        self.link = (node, 1);
        Ok((node, 0))
    }
}

/// Rounds a contraction value that should be a nonnegative integer.
pub fn round_count(v: C64) -> BoolResult<u64> {
    let r = v.re.round();
    let residue = (v - C64::new(r, 0.0)).norm();
    if residue > 1e-6 || r < 0.0 {
        return Err(BoolError::Residue(format!("{v}")));
    }
    Ok(r as u64)
}

/// Model count by tensor contraction.
pub fn count_sat(f: &CnfFormula) -> BoolResult<u64> {
    let free = (0..f.n_vars())
        .filter(|&v| !f.clauses().iter().flatten().any(|l| l.unsigned_abs() as usize == v + 1))
        .count() as u32;
    if f.clauses().is_empty() {
        return Ok(1u64 << f.n_vars());
    }
    let value = cnf_network(f)?.contract()?.scalar_value().expect("closed network");
    Ok(round_count(value)? << free)
}

/// `||psi_f||^2` for the post-selected state of a truth table.
pub fn count_sat_function(f: &BooleanFunction) -> BoolResult<u64> {
    let psi = boolean_state(f, StateMode::Postselected)?;
    round_count(psi.inner(&psi)?)
}
