//! A few standard channels.

use tnq_tensor::C64;

use crate::{Channel, Mat, OperatorBasis};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(d: usize) -> Channel {
    Channel::kraus(vec![Mat::identity(d, d)]).expect("square operator")
}

pub fn unitary(u: Mat) -> Channel {
    Channel::kraus(vec![u]).expect("single operator")
}

/// Complete dephasing in the computational basis.
pub fn dephasing(d: usize) -> Channel {
    let ops = (0..d)
        .map(|i| {
            let mut m = Mat::zeros(d, d);
            m[(i, i)] = c(1.0);
            m
        })
        .collect();
    Channel::kraus(ops).expect("consistent shapes")
}

/// `rho -> (1 - p) rho + p Tr(rho) I / d`, with clock-and-shift Kraus operators.
pub fn depolarizing(p: f64, d: usize) -> Channel {
    let basis = OperatorBasis::weyl(d);
    let dd = (d * d) as f64;
    let ops = basis
        .ops()
        .iter()
        .enumerate()
        .map(|(k, w)| {
            // the basis is normalized, so each unitary is sqrt(d) w
            let weight = if k == 0 { 1.0 - p + p / dd } else { p / dd };
            w * c((weight * d as f64).sqrt())
        })
        .collect();
    Channel::kraus(ops).expect("consistent shapes")
}

pub fn amplitude_damping(gamma: f64) -> Channel {
    let k0 = Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - gamma).sqrt())]);
    let k1 = Mat::from_row_slice(2, 2, &[c(0.0), c(gamma.sqrt()), c(0.0), c(0.0)]);
    Channel::kraus(vec![k0, k1]).expect("consistent shapes")
}

/// The transpose map, whose Choi matrix is SWAP. Positive but not CP.
pub fn transpose(d: usize) -> Channel {
    let swap = Mat::from_fn(d * d, d * d, |r, s| c(if r / d == s % d && r % d == s / d { 1.0 } else { 0.0 }));
    Channel::choi(swap, d, d).expect("square Choi")
}
