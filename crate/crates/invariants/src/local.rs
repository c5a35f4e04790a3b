use tnq_gates::epsilon;
use tnq_netgraph::NetworkBuilder;
use tnq_tensor::{apply, bend_all, conj, kron, Leg, Orientation, Tensor, C64};

use crate::{InvError, InvResult};

/// Largest matrix handled by [`epsilon_det`]; the dense symbol has `n^n` entries.
pub const MAX_EPSILON_ORDER: usize = 6;

fn ket(state: &Tensor) -> Tensor {
    state.as_ket()
}

fn bra(state: &Tensor) -> Tensor {
    bend_all(&conj(&ket(state)))
}

fn bipartite(state: &Tensor) -> InvResult<Tensor> {
    if state.order() != 2 {
        return Err(InvError::Shape(format!("expected a two-leg state, got {} legs", state.order())));
    }
    Ok(ket(state))
}

fn two_qubit(state: &Tensor) -> InvResult<Tensor> {
    if state.dims() != [2, 2] {
        return Err(InvError::Shape(format!("expected a two-qubit state, got dims {:?}", state.dims())));
    }
    Ok(ket(state))
}

/// `sum a_ij conj(a_ij)`.
pub fn j1(state: &Tensor) -> f64 {
    state.data().iter().map(|z| z.norm_sqr()).sum()
}

/// `a^{ij} a^{kl} conj(a_il) conj(a_kj)` contracted as a four-node network.
pub fn j2(state: &Tensor) -> InvResult<f64> {
    let psi = bipartite(state)?;
    let mut nb = NetworkBuilder::new();
    let p1 = nb.add_node(psi.clone());
    let p2 = nb.add_node(psi.clone());
    let b1 = nb.add_node(bra(&psi));
    let b2 = nb.add_node(bra(&psi));
    // i, j, k, l
    nb.bond(p1, 0, b1, 0).bond(p1, 1, b2, 1).bond(p2, 0, b2, 0).bond(p2, 1, b1, 1);
    Ok(nb.build()?.contract()?.scalar_value().unwrap().re)
}

/// `Tr(B^2)` with `B^j_l = a^{ij} conj(a_il)`, the reduced operator on the second party.
pub fn j2_reduced(state: &Tensor) -> InvResult<f64> {
    let psi = bipartite(state)?;
    let (da, db) = (psi.dims()[0], psi.dims()[1]);
    let a = psi.data();
    let mut b = vec![C64::new(0.0, 0.0); db * db];
    for j in 0..db {
        for l in 0..db {
            b[j * db + l] = (0..da).map(|i| a[i * db + j] * a[i * db + l].conj()).sum();
        }
    }
    let tr: C64 = (0..db).flat_map(|j| (0..db).map(move |l| (j, l))).map(|(j, l)| b[j * db + l] * b[l * db + j]).sum();
    Ok(tr.re)
}

/// `eps_ij eps_kl a^{ik} a^{jl}`, which is `2 det(a)`.
pub fn k1(state: &Tensor) -> InvResult<C64> {
    let psi = two_qubit(state)?;
    let eps = bend_all(&epsilon(2)?);
    let mut nb = NetworkBuilder::new();
    let e1 = nb.add_node(eps.clone());
    let e2 = nb.add_node(eps);
    let p1 = nb.add_node(psi.clone());
    let p2 = nb.add_node(psi);
    // i, j, k, l
    nb.bond(p1, 0, e1, 0).bond(p2, 0, e1, 1).bond(p1, 1, e2, 0).bond(p2, 1, e2, 1);
    Ok(nb.build()?.contract()?.scalar_value().unwrap())
}

#[derive(Debug, Clone, Copy)]
pub struct K1Composition {
    /// `K1((S1 (x) S2) psi)` contracted directly
    pub transformed: C64,
    /// `det(S1) det(S2) K1(psi)`
    pub predicted: C64,
}

/// Both sides of the composition law for K1 under local linear maps.
pub fn k1_compose(s1: &Tensor, s2: &Tensor, psi: &Tensor) -> InvResult<K1Composition> {
    for s in [s1, s2] {
        if s.legs() != [Leg::down(2), Leg::up(2)] {
            return Err(InvError::Shape("local maps must be 2x2 operators".into()));
        }
    }
    let psi = two_qubit(psi)?;
    let moved = apply(&kron(s1, s2)?, &psi)?;
    Ok(K1Composition {
        transformed: k1(&moved)?,
        predicted: k1(&psi)? * epsilon_det(s1)? * epsilon_det(s2)?,
    })
}

/// `eps^{i0 .. i(n-1)} A^0_{i0} ... A^(n-1)_{i(n-1)}`: one node per row of `a`
/// joined to a single Levi-Civita node.
pub fn epsilon_det(a: &Tensor) -> InvResult<C64> {
    let dims = a.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(InvError::Shape(format!("determinant needs a square matrix, got dims {dims:?}")));
    }
    let n = dims[0];
    if n > MAX_EPSILON_ORDER {
        return Err(InvError::Shape(format!("order {n} exceeds the dense epsilon cap {MAX_EPSILON_ORDER}")));
    }
    let mut nb = NetworkBuilder::new();
    let eps = nb.add_node(bend_all(&epsilon(n)?));
    for row in 0..n {
        let r = Tensor::new(vec![Leg::down(n)], a.data()[row * n..(row + 1) * n].to_vec())?;
        let id = nb.add_node(r);
        nb.bond(id, 0, eps, row);
    }
    Ok(nb.build()?.contract()?.scalar_value().unwrap())
}

/// `psi^{ijk} conj(psi_ilm) psi^{nlo} conj(psi_pjo) psi^{pqm} conj(psi_nqk)`.
pub fn kempe(psi3: &Tensor) -> InvResult<C64> {
    if psi3.dims() != [2, 2, 2] {
        return Err(InvError::Shape(format!("expected a three-qubit state, got dims {:?}", psi3.dims())));
    }
    let k = ket(psi3);
    let b = bra(psi3);
    let mut nb = NetworkBuilder::new();
    let n1 = nb.add_node(k.clone());
    let n2 = nb.add_node(b.clone());
    let n3 = nb.add_node(k.clone());
    let n4 = nb.add_node(b.clone());
    let n5 = nb.add_node(k);
    let n6 = nb.add_node(b);
    nb.bond(n1, 0, n2, 0) // i
        .bond(n1, 1, n4, 1) // j
        .bond(n1, 2, n6, 2) // k
        .bond(n3, 1, n2, 1) // l
        .bond(n5, 2, n2, 2) // m
        .bond(n3, 0, n6, 0) // n
        .bond(n3, 2, n4, 2) // o
        .bond(n5, 0, n4, 0) // p
        .bond(n5, 1, n6, 1); // q
    Ok(nb.build()?.contract()?.scalar_value().unwrap())
}

pub(crate) fn all_down(t: &Tensor) -> bool {
    t.legs().iter().all(|l| l.orient == Orientation::Down)
}
