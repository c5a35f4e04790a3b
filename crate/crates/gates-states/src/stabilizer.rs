use tnq_tensor::{apply, compose, dagger, kron, permute_legs, Orientation, Tensor, C64, DEFAULT_TOL};

use crate::{GateError, GateResult, PauliString};

/// Anything that can be turned into a square operator on the state's legs.
pub trait StabilizerOp {
    fn operator(&self) -> Tensor;
}

impl StabilizerOp for Tensor {
    fn operator(&self) -> Tensor {
        self.clone()
    }
}

impl StabilizerOp for PauliString {
    fn operator(&self) -> Tensor {
        self.to_tensor()
    }
}

fn identity_deviation(m: &Tensor) -> f64 {
    let n = (m.len() as f64).sqrt().round() as usize;
    m.data()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let want = if k / n == k % n { 1.0 } else { 0.0 };
            (z - C64::new(want, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest entry of `|U^dag U - I|` and `|U U^dag - I|`; errors when `u` is not a square operator.
pub fn unitarity_deviation(u: &Tensor) -> GateResult<f64> {
    if !u.is_operator_form() {
        return Err(GateError::Shape("expected an operator (outputs then inputs)".into()));
    }
    let outs: usize =
        u.legs().iter().filter(|l| l.orient == Orientation::Down).map(|l| l.dim).product();
    let ins: usize = u.legs().iter().filter(|l| l.orient == Orientation::Up).map(|l| l.dim).product();
    if outs != ins {
        return Err(GateError::Shape(format!("operator is {outs}x{ins}, not square")));
    }
    let ud = dagger(u);
    let a = identity_deviation(&compose(&ud, u)?);
    let b = identity_deviation(&compose(u, &ud)?);
    Ok(a.max(b))
}

pub fn check_unitary(u: &Tensor, tol: f64) -> GateResult<()> {
    let dev = unitarity_deviation(u)?;
    if dev > tol {
        return Err(GateError::NotUnitary(dev));
    }
    Ok(())
}

/// True iff `op |state> = |state>` within `tol` (a +1 eigenvector, not up to phase).
pub fn is_stabilizer(state: &Tensor, op: &impl StabilizerOp, tol: f64) -> GateResult<bool> {
    let u = op.operator();
    let n = state.order();
    if state.legs().iter().any(|l| l.orient != Orientation::Down) {
        return Err(GateError::Shape("state must have only ket legs".into()));
    }
    let expect: Vec<_> = state
        .legs()
        .iter()
        .copied()
        .chain(state.legs().iter().map(|l| tnq_tensor::Leg::up(l.dim)))
        .collect();
    if u.legs() != expect.as_slice() || u.order() != 2 * n {
        return Err(GateError::Shape(format!(
            "operator legs {:?} do not act on state dims {:?}",
            u.dims(),
            state.dims()
        )));
    }
    let out = apply(&u, state)?;
    Ok(out.max_abs_diff(state)? <= tol)
}

/// Embeds a `k`-qubit operator acting on `targets` (in the operator's wire order)
/// into an `n`-qubit operator.
pub fn on_qubits(op: &Tensor, targets: &[usize], n: usize) -> GateResult<Tensor> {
    let k = targets.len();
    if op.order() != 2 * k || !op.is_operator_form() || targets.iter().any(|&t| t >= n) {
        return Err(GateError::Shape(format!("cannot place a {}-leg operator on wires {targets:?}", op.order())));
    }
    let mut seen = vec![false; n];
    for &t in targets {
        if std::mem::replace(&mut seen[t], true) {
            return Err(GateError::Shape(format!("repeated wire {t}")));
        }
    }
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    let mut full = op.clone();
    for _ in &rest {
        full = kron(&full, &Tensor::identity(2)?)?;
    }
    let order: Vec<usize> = targets.iter().chain(&rest).copied().collect();
    let mut pos = vec![0; n];
    for (p, &q) in order.iter().enumerate() {
        pos[q] = p;
    }
    let perm: Vec<usize> = pos.iter().copied().chain(pos.iter().map(|p| p + n)).collect();
    Ok(permute_legs(&full, &perm)?)
}

/// `U g U^dag` for a unitary `u`.
pub fn evolve_generator(u: &Tensor, g: &PauliString) -> GateResult<Tensor> {
    check_unitary(u, DEFAULT_TOL)?;
    let gt = g.to_tensor();
    if gt.legs() != u.legs() {
        return Err(GateError::Shape(format!("generator on {} qubits, unitary legs {:?}", g.len(), u.dims())));
    }
    Ok(compose(&compose(u, &gt)?, &dagger(u))?)
}

/// The single-qubit Boolean state `c0|0> + c1|1>` with `c0 = b0 or not b1`,
/// `c1 = b0 or b1`, together with its stabilizer `(-1)^b1 (1-b0) Z + b0 X`.
pub fn boolean_stabilizer(b0: bool, b1: bool) -> (Tensor, PauliString) {
    let amp = |b: bool| C64::new(if b { 1.0 } else { 0.0 }, 0.0);
    let state = Tensor::vector(vec![amp(b0 || !b1), amp(b0 || b1)]).unwrap();
    let p = match (b0, b1) {
        (true, _) => "X",
        (false, false) => "Z",
        (false, true) => "-Z",
    };
    (state, PauliString::parse(p).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::*;

    #[test]
    fn boolean_stabilizer_table() {
        for (b0, b1) in [(false, false), (false, true), (true, false), (true, true)] {
            let (s, p) = boolean_stabilizer(b0, b1);
            assert!(is_stabilizer(&s, &p, 1e-12).unwrap(), "{b0} {b1}");
        }
        assert_eq!(boolean_stabilizer(false, false).0.data()[1], C64::new(0., 0.));
        assert_eq!(boolean_stabilizer(false, true).0.data()[0], C64::new(0., 0.));
        assert_eq!(boolean_stabilizer(true, false).1.to_string(), "+X");
    }

    #[test]
    fn minus_z_does_not_stabilize_zero() {
        let zero = Tensor::ket(&[2], &[0]).unwrap();
        assert!(!is_stabilizer(&zero, &PauliString::parse("-Z").unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let zero = Tensor::ket(&[2], &[0]).unwrap();
        assert!(is_stabilizer(&zero, &PauliString::parse("ZZ").unwrap(), 1e-12).is_err());
    }

    #[test]
    fn non_unitary_rejected() {
        let m = pauli_x().add(&pauli_z()).unwrap();
        assert!(matches!(evolve_generator(&m, &PauliString::parse("Z").unwrap()), Err(GateError::NotUnitary(_))));
        assert!(check_unitary(&cnot(), 1e-14).is_ok());
    }

    #[test]
    fn on_qubits_places_cnot() {
        // control 2, target 0 on three wires: |001> -> |101>
        let op = on_qubits(&cnot(), &[2, 0], 3).unwrap();
        let out = apply(&op, &Tensor::ket(&[2, 2, 2], &[0, 0, 1]).unwrap()).unwrap();
        assert!(out.approx_eq(&Tensor::ket(&[2, 2, 2], &[1, 0, 1]).unwrap(), 0.0));
    }
}
