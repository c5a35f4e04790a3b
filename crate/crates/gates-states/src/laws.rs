use tnq_netgraph::NetworkBuilder;
use tnq_tensor::{apply, bend_leg, compose, dagger, kron, tensor_product, Tensor, C64, DEFAULT_TOL};

use crate::catalogue::{copy, copy_map, gate_forward, normalize, plus, toffoli, xor, BoolGate};
use crate::stabilizer::check_unitary;
use crate::GateResult;

/// CNOT assembled from a COPY on the control and an XOR on the target,
/// joined by one internal wire.
pub fn cnot_from_copy_xor() -> GateResult<Tensor> {
    // COPY legs (q, m, i) and XOR legs (r, m, j)
    let c = bend_leg(&copy(3, 2)?, 2)?;
    let x = bend_leg(&bend_leg(&xor(3)?, 1)?, 2)?;
    let mut nb = NetworkBuilder::new();
    let a = nb.add_node(c);
    let b = nb.add_node(x);
    nb.bond(a, 1, b, 1).open(a, 0).open(b, 0).open(a, 2).open(b, 2);
    Ok(nb.build()?.contract()?)
}

/// `(U^dag (x) U^dag) COPY U`: copies the basis `{U^dag |i>}`.
pub fn rotated_copy(u: &Tensor) -> GateResult<Tensor> {
    check_unitary(u, DEFAULT_TOL)?;
    let d = u.dims()[0];
    let ud = dagger(u);
    Ok(compose(&compose(&kron(&ud, &ud)?, &copy_map(1, 2, d)?)?, u)?)
}

/// Scalar relating [`and_from_toffoli`] to the 0/1 AND state.
pub const AND_FROM_TOFFOLI_SCALAR: f64 = 0.5;

/// Toffoli fed with normalized `|+>|+>|0>`; equals the AND state times
/// [`AND_FROM_TOFFOLI_SCALAR`].
pub fn and_from_toffoli() -> GateResult<Tensor> {
    let p = normalize(&plus());
    let input = tensor_product(&tensor_product(&p, &p)?, &Tensor::ket(&[2], &[0])?)?;
    Ok(apply(&toffoli(), &input)?)
}

/// The single-wire map `x -> g(b, x)` obtained by feeding the basis state
/// `|b>` into the first input of `g`.
pub fn partial_map(g: BoolGate, b: usize) -> GateResult<Tensor> {
    let fwd = gate_forward(g);
    let k = Tensor::ket(&[2], &[b])?.with_orientations(&[tnq_tensor::Orientation::Down])?;
    Ok(tnq_tensor::contract(&fwd, &[1], &k, &[0])?)
}

/// Fixed-point test: whether `partial_map(g, b)` sends every input to the
/// same basis state, returned if so.
pub fn fixed_point_output(g: BoolGate, b: usize) -> GateResult<Option<usize>> {
    let m = partial_map(g, b)?;
    let one = C64::new(1.0, 0.0);
    Ok((0..2).find(|&out| (0..2).all(|x| m.get(&[out, x]) == one)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::*;
    use tnq_tensor::equal_up_to_scalar;

    #[test]
    fn cnot_contraction_is_exact() {
        let c = cnot_from_copy_xor().unwrap();
        assert!(c.approx_eq(&cnot(), 0.0));
    }

    #[test]
    fn rotated_copy_identity_and_hadamard() {
        let id = rotated_copy(&pauli_i()).unwrap();
        assert!(id.approx_eq(&copy_map(1, 2, 2).unwrap(), 1e-15));
        let h = rotated_copy(&hadamard()).unwrap();
        let lam = equal_up_to_scalar(&h, &xor_map(1, 2).unwrap(), 1e-12).unwrap();
        assert!((lam - C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-14);
        assert!(rotated_copy(&pauli_x().add(&pauli_z()).unwrap()).is_err());
    }

    #[test]
    fn toffoli_prepares_and() {
        let t = and_from_toffoli().unwrap();
        let lam = equal_up_to_scalar(&t, &gate_state(BoolGate::And), 1e-12).unwrap();
        assert!((lam - C64::new(AND_FROM_TOFFOLI_SCALAR, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn weak_units_and_fixed_points() {
        let id = pauli_i();
        let x = pauli_x();
        assert!(partial_map(BoolGate::And, 1).unwrap().approx_eq(&id, 0.0));
        assert!(partial_map(BoolGate::Or, 0).unwrap().approx_eq(&id, 0.0));
        for (g, b) in [(BoolGate::Nand, 1), (BoolGate::Nor, 0)] {
            let m = partial_map(g, b).unwrap();
            assert!(m.approx_eq(&x, 0.0));
            assert!(compose(&m, &m).unwrap().approx_eq(&id, 0.0));
        }
        // the unit of one is the zero of the other
        assert_eq!(fixed_point_output(BoolGate::Or, 1).unwrap(), Some(1));
        assert_eq!(fixed_point_output(BoolGate::And, 0).unwrap(), Some(0));
        assert_eq!(fixed_point_output(BoolGate::And, 1).unwrap(), None);
    }
}
