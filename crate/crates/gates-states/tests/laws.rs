use proptest::prelude::*;
use tnq_gates::*;
use tnq_netgraph::NetworkBuilder;
use tnq_tensor::{apply, compose, dagger, equal_up_to_scalar, kron, Leg, Tensor, C64};
use tnq_testkit::{self as tk, Rng};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// COPY-spider network: `edges` between spiders (a self-edge is a loop),
/// open legs assigned by `outs`/`ins` (spider index per leg).
fn spider_network(spiders: usize, edges: &[(usize, usize)], outs: &[usize], ins: &[usize], d: usize) -> Tensor {
    let mut legs: Vec<Vec<Leg>> = vec![Vec::new(); spiders];
    let mut bonds = Vec::new();
    for &(a, b) in edges {
        legs[a].push(Leg::down(d));
        let la = legs[a].len() - 1;
        legs[b].push(Leg::up(d));
        bonds.push((a, la, b, legs[b].len() - 1));
    }
    let mut open = Vec::new();
    for &s in outs {
        legs[s].push(Leg::down(d));
        open.push((s, legs[s].len() - 1));
    }
    for &s in ins {
        legs[s].push(Leg::up(d));
        open.push((s, legs[s].len() - 1));
    }
    let mut nb = NetworkBuilder::new();
    for l in legs {
        let orients: Vec<_> = l.iter().map(|x| x.orient).collect();
        nb.add_node(copy(l.len(), d).unwrap().with_orientations(&orients).unwrap());
    }
    for (a, la, b, lb) in bonds {
        nb.bond(a, la, b, lb);
    }
    for (s, l) in open {
        nb.open(s, l);
    }
    nb.build().unwrap().contract().unwrap()
}

fn assignments(k: usize, spiders: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    for _ in 0..k {
        all = all.into_iter().flat_map(|v| (0..spiders).map(move |s| [v.clone(), vec![s]].concat())).collect();
    }
    all
}

#[test]
fn fusion_law_all_small_shapes() {
    let topologies: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (1, vec![]),
        (1, vec![(0, 0)]),
        (2, vec![(0, 1)]),
        (2, vec![(0, 1), (0, 1)]),
        (3, vec![(0, 1), (1, 2)]),
        (3, vec![(0, 1), (0, 1), (1, 2)]),
        (3, vec![(0, 1), (1, 2), (0, 2)]),
    ];
    let mut checked = 0;
    for d in [2, 3] {
        for total in 1..=5 {
            for m in 0..=total {
                let n = total - m;
                let want = copy_map(m, n, d).unwrap();
                for (s, edges) in &topologies {
                    for assign in assignments(total, *s) {
                        let got = spider_network(*s, edges, &assign[..n], &assign[n..], d);
                        assert!(got.approx_eq(&want, 0.0), "d={d} m={m} n={n} edges={edges:?} assign={assign:?}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn bialgebra_law() {
    let lhs = compose(&copy_map(1, 2, 2).unwrap(), &xor_map(2, 1).unwrap()).unwrap();
    let copies = kron(&copy_map(1, 2, 2).unwrap(), &copy_map(1, 2, 2).unwrap()).unwrap();
    let swapped = compose(&on_qubits(&swap(), &[1, 2], 4).unwrap(), &copies).unwrap();
    let rhs = compose(&kron(&xor_map(2, 1).unwrap(), &xor_map(2, 1).unwrap()).unwrap(), &swapped).unwrap();
    let lam = equal_up_to_scalar(&lhs, &rhs, 1e-12).unwrap();
    assert_eq!(lam, c(1.0, 0.0));
}

#[test]
fn hopf_law() {
    // merge after copy disconnects: |0> (<0| + <1|)
    let lhs = compose(&xor_map(2, 1).unwrap(), &copy_map(1, 2, 2).unwrap()).unwrap();
    let rhs = kron(&Tensor::ket(&[2], &[0]).unwrap(), &plus().with_orientations(&[tnq_tensor::Orientation::Up]).unwrap()).unwrap();
    let lam = equal_up_to_scalar(&lhs, &rhs, 1e-12).unwrap();
    assert_eq!(lam, c(1.0, 0.0));
}

/// Circuit of CNOTs, each built as a COPY node and an XOR node in one network.
fn cnot_circuit(n: usize, gates: &[(usize, usize)]) -> Tensor {
    let copy_node = tnq_tensor::bend_leg(&copy(3, 2).unwrap(), 2).unwrap();
    let xor_node = tnq_tensor::bend_leg(&tnq_tensor::bend_leg(&xor(3).unwrap(), 1).unwrap(), 2).unwrap();
    let mut nb = NetworkBuilder::new();
    let mut input: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut output: Vec<Option<(usize, usize)>> = vec![None; n];
    for &(ctl, tgt) in gates {
        let a = nb.add_node(copy_node.clone());
        let b = nb.add_node(xor_node.clone());
        nb.bond(a, 1, b, 1);
        for (wire, node) in [(ctl, a), (tgt, b)] {
            match output[wire] {
                Some((p, l)) => {
                    nb.bond(p, l, node, 2);
                }
                None => input[wire] = Some((node, 2)),
            }
            output[wire] = Some((node, 0));
        }
    }
    for w in output.iter().chain(&input) {
        let (p, l) = w.expect("every wire is touched");
        nb.open(p, l);
    }
    nb.build().unwrap().contract().unwrap()
}

#[test]
fn gate_copy_rewrite() {
    // gates listed in application order
    let lhs = cnot_circuit(3, &[(1, 2), (0, 1)]);
    let rhs = cnot_circuit(3, &[(0, 1), (0, 2), (1, 2)]);
    assert!(lhs.approx_eq(&rhs, 0.0));
    let lhs = cnot_circuit(3, &[(0, 1), (1, 2)]);
    let rhs = cnot_circuit(3, &[(1, 2), (0, 2), (0, 1)]);
    assert!(lhs.approx_eq(&rhs, 0.0));
    // and against the dense operators
    let dense = compose(&on_qubits(&cnot(), &[0, 1], 3).unwrap(), &on_qubits(&cnot(), &[1, 2], 3).unwrap()).unwrap();
    assert!(cnot_circuit(3, &[(1, 2), (0, 1)]).approx_eq(&dense, 0.0));
}

#[test]
fn cnot_squares_to_identity_and_builds_swap() {
    let cx = cnot_from_copy_xor().unwrap();
    let id2 = kron(&pauli_i(), &pauli_i()).unwrap();
    assert!(compose(&cx, &cx).unwrap().approx_eq(&id2, 0.0));
    let xc = on_qubits(&cx, &[1, 0], 2).unwrap();
    let three = compose(&compose(&cx, &xc).unwrap(), &cx).unwrap();
    assert!(three.approx_eq(&swap(), 0.0));
}

#[test]
fn de_morgan() {
    let xxx = kron(&kron(&pauli_x(), &pauli_x()).unwrap(), &pauli_x()).unwrap();
    let flipped = apply(&xxx, &gate_state(BoolGate::And)).unwrap();
    assert!(flipped.approx_eq(&gate_state(BoolGate::Or), 0.0));
    let flipped = apply(&xxx, &gate_state(BoolGate::Or)).unwrap();
    assert!(flipped.approx_eq(&gate_state(BoolGate::And), 0.0));
}

#[test]
fn copy_points() {
    for d in 1..=4 {
        let cp = copy_map(1, 2, d).unwrap();
        for x in 0..d {
            let out = apply(&cp, &Tensor::ket(&[d], &[x]).unwrap()).unwrap();
            assert!(out.approx_eq(&Tensor::ket(&[d, d], &[x, x]).unwrap(), 0.0));
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xm = xor_map(1, 2).unwrap().scale(c(s, 0.0));
    for v in [plus(), minus()] {
        let v = normalize(&v);
        let out = apply(&xm, &v).unwrap();
        let want = tnq_tensor::tensor_product(&v, &v).unwrap();
        assert!(out.approx_eq(&want, 1e-15));
    }
}

#[test]
fn pauli_geometric_product() {
    let sig = [pauli_x(), pauli_y(), pauli_z()];
    let eps = epsilon(3).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let prod = compose(&sig[i], &sig[j]).unwrap();
            let mut want = if i == j { pauli_i() } else { pauli_i().scale(c(0.0, 0.0)) };
            for (k, s) in sig.iter().enumerate() {
                want = want.add(&s.scale(c(0.0, 1.0) * eps.get(&[i, j, k]))).unwrap();
            }
            assert!(prod.approx_eq(&want, 0.0));
            let tr = tnq_tensor::trace(&prod).unwrap();
            assert_eq!(tr, c(if i == j { 2.0 } else { 0.0 }, 0.0));
        }
    }
}

#[test]
fn bell_and_ghz_stabilizer_groups() {
    let phi = bell(Bell::PhiPlus);
    for p in ["II", "XX", "-YY", "ZZ"] {
        assert!(is_stabilizer(&phi, &PauliString::parse(p).unwrap(), 1e-12).unwrap(), "{p}");
    }
    let ghz3 = ghz(3, 2).unwrap();
    let group = ["XXX", "-XYY", "-YXY", "-YYX", "IZZ", "ZIZ", "ZZI", "III"];
    for p in group {
        assert!(is_stabilizer(&ghz3, &PauliString::parse(p).unwrap(), 1e-12).unwrap(), "{p}");
    }
    // the group closes under multiplication
    let parsed: Vec<_> = group.iter().map(|s| PauliString::parse(s).unwrap()).collect();
    for a in &parsed {
        for b in &parsed {
            assert!(parsed.contains(&(a * b)));
        }
    }
    assert!(!is_stabilizer(&ghz3, &PauliString::parse("XXY").unwrap(), 1e-12).unwrap());
}

#[test]
fn clifford_conjugations() {
    let hzh = evolve_generator(&hadamard(), &PauliString::parse("Z").unwrap()).unwrap();
    assert!(hzh.approx_eq(&pauli_x(), 1e-15));
    let hxh = evolve_generator(&hadamard(), &PauliString::parse("X").unwrap()).unwrap();
    assert!(hxh.approx_eq(&pauli_z(), 1e-15));
    let pxp = evolve_generator(&phase_gate(), &PauliString::parse("X").unwrap()).unwrap();
    assert!(pxp.approx_eq(&pauli_y(), 1e-15));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolved_generators_stabilize(seed in any::<u64>()) {
        let mut rng = tk::rng(seed);
        let mut u = kron(&pauli_i(), &pauli_i()).unwrap();
        for _ in 0..rng.gen_range(1..8) {
            let g = match rng.gen_range(0..3) {
                0 => on_qubits(&hadamard(), &[rng.gen_range(0..2)], 2).unwrap(),
                1 => on_qubits(&phase_gate(), &[rng.gen_range(0..2)], 2).unwrap(),
                _ => if rng.gen_bool(0.5) { cnot() } else { on_qubits(&cnot(), &[1, 0], 2).unwrap() },
            };
            u = compose(&g, &u).unwrap();
        }
        let psi = apply(&u, &Tensor::ket(&[2, 2], &[0, 0]).unwrap()).unwrap();
        for z in ["ZI", "IZ"] {
            let g = evolve_generator(&u, &PauliString::parse(z).unwrap()).unwrap();
            prop_assert!(is_stabilizer(&psi, &g, 1e-12).unwrap());
        }
    }

    #[test]
    fn rotated_copy_copies_rotated_basis(seed in any::<u64>()) {
        let mut rng = tk::rng(seed);
        let u = Tensor::from_dmatrix(&tk::random_unitary(&mut rng, 2)).unwrap();
        let rc = rotated_copy(&u).unwrap();
        let ud = dagger(&u);
        for i in 0..2 {
            let b = apply(&ud, &Tensor::ket(&[2], &[i]).unwrap()).unwrap();
            let out = apply(&rc, &b).unwrap();
            let want = tnq_tensor::tensor_product(&b, &b).unwrap();
            prop_assert!(out.approx_eq(&want, 1e-12));
        }
    }

    #[test]
    fn pauli_multiplication_is_a_homomorphism(
        a in proptest::collection::vec(0u8..4, 1..4),
        b in proptest::collection::vec(0u8..4, 1..4),
        pa in 0u8..4,
        pb in 0u8..4,
    ) {
        let n = a.len().min(b.len());
        let letter = |k: u8| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize];
        let p = PauliString::new(pa, a[..n].iter().map(|&k| letter(k)).collect());
        let q = PauliString::new(pb, b[..n].iter().map(|&k| letter(k)).collect());
        let pq = &p * &q;
        let dense = compose(&p.to_tensor(), &q.to_tensor()).unwrap();
        prop_assert!(dense.approx_eq(&pq.to_tensor(), 1e-14));
        prop_assert_eq!((&p * &p).phase_power() % 2, 0);
        let qp = &q * &p;
        prop_assert_eq!(p.commutes_with(&q), qp == pq);
    }
}
