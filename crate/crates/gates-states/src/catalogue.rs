use tnq_tensor::{bend_leg, Leg, Tensor, C64};

use crate::{GateError, GateResult};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn bit(b: bool) -> C64 {
    c(if b { 1.0 } else { 0.0 }, 0.0)
}

fn qubit_op(entries: [C64; 4]) -> Tensor {
    Tensor::operator(&[2], &[2], entries.to_vec()).expect("2x2 operator")
}

/// Scales a nonzero tensor to unit Frobenius norm.
pub fn normalize(t: &Tensor) -> Tensor {
    let n = t.norm();
    if n == 0.0 {
        t.clone()
    } else {
        t.scale(c(1.0 / n, 0.0))
    }
}

pub fn pauli_i() -> Tensor {
    qubit_op([c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])
}

pub fn pauli_x() -> Tensor {
    qubit_op([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> Tensor {
    qubit_op([c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> Tensor {
    qubit_op([c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> Tensor {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    qubit_op([c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
}

/// Phase gate `diag(1, i)`.
pub fn phase_gate() -> Tensor {
    qubit_op([c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)])
}

fn qubit_legs(outs: usize, ins: usize) -> Vec<Leg> {
    let mut legs = vec![Leg::down(2); outs];
    legs.extend(vec![Leg::up(2); ins]);
    legs
}

/// Controlled NOT with the control on the first wire.
pub fn cnot() -> Tensor {
    Tensor::from_fn(qubit_legs(2, 2), |ix| bit(ix[0] == ix[2] && ix[1] == ix[2] ^ ix[3])).unwrap()
}

pub fn cz() -> Tensor {
    Tensor::from_fn(qubit_legs(2, 2), |ix| {
        if ix[0] != ix[2] || ix[1] != ix[3] {
            c(0., 0.)
        } else if ix[0] & ix[1] == 1 {
            c(-1., 0.)
        } else {
            c(1., 0.)
        }
    })
    .unwrap()
}

pub fn swap() -> Tensor {
    Tensor::from_fn(qubit_legs(2, 2), |ix| bit(ix[0] == ix[3] && ix[1] == ix[2])).unwrap()
}

/// Toffoli with controls on wires 0 and 1.
pub fn toffoli() -> Tensor {
    Tensor::from_fn(qubit_legs(3, 3), |ix| {
        bit(ix[0] == ix[3] && ix[1] == ix[4] && ix[2] == ix[5] ^ (ix[3] & ix[4]))
    })
    .unwrap()
}

/// The `n`-leg COPY (delta) tensor in dimension `d`, all legs `Down`.
pub fn copy(n: usize, d: usize) -> GateResult<Tensor> {
    Ok(Tensor::from_fn(vec![Leg::down(d); n], |ix| bit(ix.windows(2).all(|w| w[0] == w[1])))?)
}

/// COPY read as a map: `outputs` `Down` legs followed by `inputs` `Up` legs.
pub fn copy_map(inputs: usize, outputs: usize, d: usize) -> GateResult<Tensor> {
    let mut legs = vec![Leg::down(d); outputs];
    legs.extend(vec![Leg::up(d); inputs]);
    Ok(Tensor::from_fn(legs, |ix| bit(ix.windows(2).all(|w| w[0] == w[1])))?)
}

/// The `n`-leg XOR tensor: amplitude 1 on even-parity bit strings.
pub fn xor(n: usize) -> GateResult<Tensor> {
    Ok(Tensor::from_fn(vec![Leg::down(2); n], |ix| bit(ix.iter().sum::<usize>() % 2 == 0))?)
}

pub fn xor_map(inputs: usize, outputs: usize) -> GateResult<Tensor> {
    let mut legs = vec![Leg::down(2); outputs];
    legs.extend(vec![Leg::up(2); inputs]);
    Ok(Tensor::from_fn(legs, |ix| bit(ix.iter().sum::<usize>() % 2 == 0))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolGate {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
}

impl BoolGate {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolGate::And => a && b,
            BoolGate::Or => a || b,
            BoolGate::Nand => !(a && b),
            BoolGate::Nor => !(a || b),
            BoolGate::Xor => a ^ b,
            BoolGate::Xnor => !(a ^ b),
        }
    }
}

/// `sum |x1 x2 g(x1,x2)>` on three `Down` legs.
pub fn gate_state(g: BoolGate) -> Tensor {
    Tensor::from_fn(vec![Leg::down(2); 3], |ix| bit((ix[2] == 1) == g.eval(ix[0] == 1, ix[1] == 1))).unwrap()
}

/// The gate state with its output leg bent up: legs `(x1 Down, x2 Down, f Up)`.
/// For AND this is `(|00>+|01>+|10>)<0| + |11><1|`.
pub fn gate_map(g: BoolGate) -> Tensor {
    bend_leg(&gate_state(g), 2).unwrap()
}

/// The gate as a forward operator `|g(x1,x2)><x1 x2|`: legs `(f Down, x1 Up, x2 Up)`.
pub fn gate_forward(g: BoolGate) -> Tensor {
    Tensor::from_fn(vec![Leg::down(2), Leg::up(2), Leg::up(2)], |ix| {
        bit((ix[0] == 1) == g.eval(ix[1] == 1, ix[2] == 1))
    })
    .unwrap()
}

/// `sum_i |ii>`.
pub fn cup(d: usize) -> GateResult<Tensor> {
    copy(2, d)
}

/// `sum_i <ii|`.
pub fn cap(d: usize) -> GateResult<Tensor> {
    copy_map(2, 0, d)
}

fn perm_sign(ix: &[usize]) -> f64 {
    let n = ix.len();
    let mut seen = vec![false; n];
    let mut sign = 1.0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = ix[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Levi-Civita symbol of order `n`: `n` legs of dimension `n`.
pub fn epsilon(n: usize) -> GateResult<Tensor> {
    if n == 0 {
        return Err(GateError::BadParams { name: "EPSILON".into(), reason: "order must be positive".into() });
    }
    Ok(Tensor::from_fn(vec![Leg::down(n); n], |ix| {
        let mut seen = vec![false; n];
        for &i in ix {
            if std::mem::replace(&mut seen[i], true) {
                return c(0., 0.);
            }
        }
        c(perm_sign(ix), 0.)
    })?)
}

/// `|0...0> + ... + |d-1...d-1>`.
pub fn ghz(n: usize, d: usize) -> GateResult<Tensor> {
    copy(n, d)
}

/// Sum of all `n`-bit strings of Hamming weight `k`.
pub fn dicke(n: usize, k: usize) -> GateResult<Tensor> {
    if k > n {
        return Err(GateError::BadParams { name: "DICKE".into(), reason: format!("weight {k} exceeds {n} qubits") });
    }
    Ok(Tensor::from_fn(vec![Leg::down(2); n], |ix| bit(ix.iter().sum::<usize>() == k))?)
}

pub fn w_state(n: usize) -> GateResult<Tensor> {
    dicke(n, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Unnormalized Bell state, e.g. `|00> + |11>` for `PhiPlus`.
pub fn bell(kind: Bell) -> Tensor {
    let z = c(0., 0.);
    let (p, m) = (c(1., 0.), c(-1., 0.));
    let data = match kind {
        Bell::PhiPlus => vec![p, z, z, p],
        Bell::PhiMinus => vec![p, z, z, m],
        Bell::PsiPlus => vec![z, p, p, z],
        Bell::PsiMinus => vec![z, p, m, z],
    };
    Tensor::new(vec![Leg::down(2); 2], data).unwrap()
}

fn qubit_ket(a: C64, b: C64) -> Tensor {
    Tensor::vector(vec![a, b]).unwrap()
}

/// `|0> + |1>`, unnormalized.
pub fn plus() -> Tensor {
    qubit_ket(c(1., 0.), c(1., 0.))
}

pub fn minus() -> Tensor {
    qubit_ket(c(1., 0.), c(-1., 0.))
}

/// `|0> + i|1>`, unnormalized.
pub fn y_plus() -> Tensor {
    qubit_ket(c(1., 0.), c(0., 1.))
}

pub fn y_minus() -> Tensor {
    qubit_ket(c(1., 0.), c(0., -1.))
}

fn param(name: &str, params: &[usize], k: usize, default: Option<usize>) -> GateResult<usize> {
    params.get(k).copied().or(default).ok_or_else(|| GateError::BadParams {
        name: name.into(),
        reason: format!("missing parameter {}", k + 1),
    })
}

fn max_params(name: &str, params: &[usize], n: usize) -> GateResult<()> {
    if params.len() > n {
        return Err(GateError::BadParams { name: name.into(), reason: format!("expected at most {n} parameters") });
    }
    Ok(())
}

/// Looks a tensor up by name. Gates are returned as operators; states and
/// Boolean tensors are scaled to unit norm when `normalized` is set.
///
/// Parameters: `COPY n [d]`, `XOR n`, `CUP [d]`, `CAP [d]`,
/// `EPSILON n [d]`, `GHZ n [d]`, `W n`, `DICKE n k`, `BELL k` (0..3 for
/// Phi+, Phi-, Psi+, Psi-). Boolean gates accept a `_MAP` suffix.
pub fn standard_tensor(name: &str, params: &[usize], normalized: bool) -> GateResult<Tensor> {
    let key = name.to_ascii_uppercase();
    let bad = |reason: &str| GateError::BadParams { name: key.clone(), reason: reason.into() };
    let gate = |t: Tensor| -> GateResult<Tensor> {
        max_params(&key, params, 0)?;
        Ok(t)
    };
    let state: Tensor = match key.as_str() {
        "I" => return gate(pauli_i()),
        "X" => return gate(pauli_x()),
        "Y" => return gate(pauli_y()),
        "Z" => return gate(pauli_z()),
        "H" => return gate(hadamard()),
        "P" | "S" => return gate(phase_gate()),
        "CNOT" => return gate(cnot()),
        "CZ" => return gate(cz()),
        "SWAP" => return gate(swap()),
        "TOFFOLI" => return gate(toffoli()),
        "COPY" | "DELTA" => {
            max_params(&key, params, 2)?;
            copy(param(&key, params, 0, None)?, param(&key, params, 1, Some(2))?)?
        }
        "XOR" => {
            max_params(&key, params, 1)?;
            xor(param(&key, params, 0, None)?)?
        }
        "CUP" => {
            max_params(&key, params, 1)?;
            cup(param(&key, params, 0, Some(2))?)?
        }
        "CAP" => {
            max_params(&key, params, 1)?;
            cap(param(&key, params, 0, Some(2))?)?
        }
        "EPSILON" => {
            max_params(&key, params, 2)?;
            let n = param(&key, params, 0, None)?;
            let d = param(&key, params, 1, Some(n))?;
            if d != n {
                return Err(bad(&format!("leg dimension {d} must equal the order {n}")));
            }
            epsilon(n)?
        }
        "GHZ" => {
            max_params(&key, params, 2)?;
            ghz(param(&key, params, 0, None)?, param(&key, params, 1, Some(2))?)?
        }
        "W" => {
            max_params(&key, params, 1)?;
            w_state(param(&key, params, 0, None)?)?
        }
        "DICKE" => {
            max_params(&key, params, 2)?;
            dicke(param(&key, params, 0, None)?, param(&key, params, 1, None)?)?
        }
        "BELL" => {
            max_params(&key, params, 1)?;
            let kind = match param(&key, params, 0, None)? {
                0 => Bell::PhiPlus,
                1 => Bell::PhiMinus,
                2 => Bell::PsiPlus,
                3 => Bell::PsiMinus,
                _ => return Err(bad("Bell index must be 0..3")),
            };
            bell(kind)
        }
        "PHI+" => bell(Bell::PhiPlus),
        "PHI-" => bell(Bell::PhiMinus),
        "PSI+" => bell(Bell::PsiPlus),
        "PSI-" => bell(Bell::PsiMinus),
        "PLUS" | "+" => plus(),
        "MINUS" | "-" => minus(),
        "Y+" => y_plus(),
        "Y-" => y_minus(),
        other => {
            let (base, as_map) = match other.strip_suffix("_MAP") {
                Some(b) => (b, true),
                None => (other, false),
            };
            let g = match base {
                "AND" => BoolGate::And,
                "OR" => BoolGate::Or,
                "NAND" => BoolGate::Nand,
                "NOR" => BoolGate::Nor,
                "XNOR" => BoolGate::Xnor,
                _ => return Err(GateError::UnknownName(name.to_string())),
            };
            max_params(&key, params, 0)?;
            if as_map {
                gate_map(g)
            } else {
                gate_state(g)
            }
        }
    };
    if matches!(key.as_str(), "PHI+" | "PHI-" | "PSI+" | "PSI-" | "PLUS" | "+" | "MINUS" | "-" | "Y+" | "Y-") {
        max_params(&key, params, 0)?;
    }
    Ok(if normalized { normalize(&state) } else { state })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_map_entries() {
        let m = standard_tensor("AND_MAP", &[], false).unwrap();
        assert_eq!(m.legs(), &[Leg::down(2), Leg::down(2), Leg::up(2)]);
        for x1 in 0..2 {
            for x2 in 0..2 {
                for f in 0..2 {
                    let want = if f == (x1 & x2) { 1.0 } else { 0.0 };
                    assert_eq!(m.get(&[x1, x2, f]), c(want, 0.));
                }
            }
        }
    }

    #[test]
    fn epsilon_order_two_is_i_y() {
        let e = epsilon(2).unwrap();
        let iy = pauli_y().scale(c(0., 1.));
        assert_eq!(e.data(), iy.data());
        assert_eq!(e.data(), &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]);
    }

    #[test]
    fn epsilon_order_three_signs() {
        let e = epsilon(3).unwrap();
        assert_eq!(e.get(&[0, 1, 2]), c(1., 0.));
        assert_eq!(e.get(&[1, 2, 0]), c(1., 0.));
        assert_eq!(e.get(&[1, 0, 2]), c(-1., 0.));
        assert_eq!(e.get(&[0, 0, 2]), c(0., 0.));
    }

    #[test]
    fn dicke_three_one() {
        let d = standard_tensor("DICKE", &[3, 1], false).unwrap();
        let nonzero: Vec<usize> = (0..8).filter(|&i| d.data()[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![1, 2, 4]);
        let n = standard_tensor("dicke", &[3, 1], true).unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn catalogue_errors() {
        assert!(matches!(standard_tensor("FOO", &[], false), Err(GateError::UnknownName(_))));
        assert!(matches!(standard_tensor("EPSILON", &[3, 2], false), Err(GateError::BadParams { .. })));
        assert!(matches!(standard_tensor("COPY", &[], false), Err(GateError::BadParams { .. })));
        assert!(matches!(standard_tensor("BELL", &[7], false), Err(GateError::BadParams { .. })));
        assert!(matches!(standard_tensor("H", &[1], false), Err(GateError::BadParams { .. })));
    }

    #[test]
    fn ghz_is_unnormalized_by_default() {
        let g = standard_tensor("GHZ", &[3], false).unwrap();
        assert_eq!(g.get(&[0, 0, 0]), c(1., 0.));
        assert_eq!(g.get(&[1, 1, 1]), c(1., 0.));
        assert!((g.norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn boolean_gate_states() {
        let nand = gate_state(BoolGate::Nand);
        let nonzero: Vec<usize> = (0..8).filter(|&i| nand.data()[i].norm() > 0.0).collect();
        // |001> + |011> + |101> + |110>
        assert_eq!(nonzero, vec![1, 3, 5, 6]);
        let nor = gate_state(BoolGate::Nor);
        let nonzero: Vec<usize> = (0..8).filter(|&i| nor.data()[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![1, 2, 4, 6]);
    }
}
