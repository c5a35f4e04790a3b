use std::collections::VecDeque;

use tnq_gates::{copy_map, gate_forward, pauli_x, BoolGate};
use tnq_netgraph::{Network, NetworkBuilder};
use tnq_tensor::{Leg, Orientation, Tensor, C64};

use crate::{BoolError, BoolResult, BooleanFunction, StateMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    /// Circuit input `x_{i+1}`.
    Input(usize),
    /// Output `port` of gate `gate`.
    Gate { gate: usize, port: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
    /// One input, two identical outputs.
    Copy,
    Const(bool),
}

impl GateKind {
    pub fn n_inputs(self) -> usize {
        match self {
            GateKind::And | GateKind::Or | GateKind::Xor => 2,
            GateKind::Not | GateKind::Copy => 1,
            GateKind::Const(_) => 0,
        }
    }

    pub fn n_outputs(self) -> usize {
        if self == GateKind::Copy {
            2
        } else {
            1
        }
    }

    fn eval(self, x: &[bool]) -> [bool; 2] {
        match self {
            GateKind::And => [x[0] && x[1]; 2],
            GateKind::Or => [x[0] || x[1]; 2],
            GateKind::Xor => [x[0] ^ x[1]; 2],
            GateKind::Not => [!x[0]; 2],
            GateKind::Copy => [x[0]; 2],
            GateKind::Const(b) => [b; 2],
        }
    }

    /// Tensor with output legs (Down) first, then input legs (Up).
    fn tensor(self) -> BoolResult<Tensor> {
        Ok(match self {
            GateKind::And => gate_forward(BoolGate::And),
            GateKind::Or => gate_forward(BoolGate::Or),
            GateKind::Xor => gate_forward(BoolGate::Xor),
            GateKind::Not => pauli_x(),
            GateKind::Copy => copy_map(1, 2, 2)?,
            GateKind::Const(b) => Tensor::ket(&[2], &[b as usize])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGate {
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

impl CircuitGate {
    pub fn new(kind: GateKind, inputs: Vec<Wire>) -> Self {
        CircuitGate { kind, inputs }
    }
}

/// Single-output classical circuit. Every wire has exactly one consumer, so
/// fan-out goes through explicit COPY gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_inputs: usize,
    gates: Vec<CircuitGate>,
    output: Wire,
    order: Vec<usize>,
}

impl Circuit {
    pub fn new(n_inputs: usize, gates: Vec<CircuitGate>, output: Wire) -> BoolResult<Self> {
        let exists = |w: Wire| match w {
            Wire::Input(i) => i < n_inputs,
            Wire::Gate { gate, port } => gate < gates.len() && port < gates[gate].kind.n_outputs(),
        };
        let mut consumers = std::collections::HashMap::new();
        for (g, gate) in gates.iter().enumerate() {
            if gate.inputs.len() != gate.kind.n_inputs() {
                return Err(BoolError::Arity(format!(
                    "gate {g} ({:?}) takes {} inputs, got {}",
                    gate.kind,
                    gate.kind.n_inputs(),
                    gate.inputs.len()
                )));
            }
            for &w in &gate.inputs {
                if !exists(w) {
                    return Err(BoolError::Dangling(format!("gate {g} reads missing wire {w:?}")));
                }
                if consumers.insert(w, g).is_some() {
                    return Err(BoolError::Dangling(format!("wire {w:?} has two consumers")));
                }
            }
        }
        if !exists(output) {
            return Err(BoolError::Dangling(format!("output {output:?} does not exist")));
        }
        if consumers.contains_key(&output) {
            return Err(BoolError::Dangling(format!("output {output:?} also feeds a gate")));
        }
        for (g, gate) in gates.iter().enumerate() {
            for port in 0..gate.kind.n_outputs() {
                let w = Wire::Gate { gate: g, port };
                if w != output && !consumers.contains_key(&w) {
                    return Err(BoolError::Dangling(format!("{w:?} is never read")));
                }
            }
        }
        // Kahn's algorithm over gate-to-gate edges
        let mut indegree: Vec<usize> = gates
            .iter()
            .map(|g| g.inputs.iter().filter(|w| matches!(w, Wire::Gate { .. })).count())
            .collect();
        let mut ready: VecDeque<usize> = (0..gates.len()).filter(|&g| indegree[g] == 0).collect();
        let mut order = Vec::with_capacity(gates.len());
        while let Some(g) = ready.pop_front() {
            order.push(g);
            for port in 0..gates[g].kind.n_outputs() {
                if let Some(&next) = consumers.get(&Wire::Gate { gate: g, port }) {
                    indegree[next] -= 1;
                    if indegree[next] == 0 {
                        ready.push_back(next);
                    }
                }
            }
        }
        if order.len() != gates.len() {
            return Err(BoolError::Cyclic);
        }
        Ok(Circuit { n_inputs, gates, output, order })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn output(&self) -> Wire {
        self.output
    }

    /// Direct evaluation in topological order.
    pub fn eval(&self, x: &[bool]) -> bool {
        let mut vals = vec![[false; 2]; self.gates.len()];
        let read = |vals: &[[bool; 2]], w: Wire| match w {
            Wire::Input(i) => x[i],
            Wire::Gate { gate, port } => vals[gate][port],
        };
        for &g in &self.order {
            let ins: Vec<bool> = self.gates[g].inputs.iter().map(|&w| read(&vals, w)).collect();
            vals[g] = self.gates[g].kind.eval(&ins);
        }
        read(&vals, self.output)
    }

    pub fn to_function(&self) -> BoolResult<BooleanFunction> {
        BooleanFunction::from_fn(self.n_inputs, |x| self.eval(x))
    }
}

fn build(c: &Circuit, postselect: bool) -> BoolResult<Network> {
    let mut nb = NetworkBuilder::new();
    let nodes: Vec<usize> = c.gates.iter().map(|g| g.kind.tensor().map(|t| nb.add_node(t))).collect::<BoolResult<_>>()?;
    // (node, leg) that reads each input, filled as gates are wired
    let mut input_ports: Vec<Option<(usize, usize)>> = vec![None; c.n_inputs];
    for (g, gate) in c.gates.iter().enumerate() {
        let n_out = gate.kind.n_outputs();
        for (j, &w) in gate.inputs.iter().enumerate() {
            match w {
                Wire::Input(i) => input_ports[i] = Some((nodes[g], n_out + j)),
                Wire::Gate { gate: src, port } => {
                    nb.bond(nodes[src], port, nodes[g], n_out + j);
                }
            }
        }
    }
    let out_port = match c.output {
        Wire::Gate { gate, port } => (nodes[gate], port),
        Wire::Input(i) => {
            let id = nb.add_node(Tensor::identity(2)?);
            input_ports[i] = Some((id, 1));
            (id, 0)
        }
    };
    for port in input_ports.iter_mut() {
        if port.is_none() {
            // unread input: the all-ones effect leaves that variable free
            let ones = nb.add_node(Tensor::new(vec![Leg::up(2)], vec![C64::new(1.0, 0.0); 2])?);
            *port = Some((ones, 0));
        }
    }
    for &(node, leg) in input_ports.iter().flatten() {
        nb.open(node, leg);
    }
    if postselect {
        let cap = nb.add_node(Tensor::new(vec![Leg::up(2)], vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])?);
        nb.bond(out_port.0, out_port.1, cap, 0);
    } else {
        nb.open(out_port.0, out_port.1);
    }
    Ok(nb.build()?)
}

/// Network of the circuit's gate tensors with open legs `x1 .. xn` (Up) then
/// the output (Down).
pub fn network_from_circuit(c: &Circuit) -> BoolResult<Network> {
    build(c, false)
}

/// Contracts the circuit network into [`crate::boolean_state`] form; the
/// post-selected mode caps the output with `<1|` inside the network.
pub fn circuit_state(c: &Circuit, mode: StateMode) -> BoolResult<Tensor> {
    let t = build(c, mode == StateMode::Postselected)?.contract()?;
    Ok(t.with_orientations(&vec![Orientation::Down; t.order()])?)
}
