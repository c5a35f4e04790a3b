use tnq_tensor::linalg::{kron, vec_col};
use tnq_tensor::C64;

use crate::{ChanError, ChanResult, Mat};

/// Hilbert-Schmidt orthonormal basis of `rows x cols` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    ops: Vec<Mat>,
    rows: usize,
    cols: usize,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn pauli_matrices() -> [Mat; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0., 0.);
    [
        Mat::from_row_slice(2, 2, &[c(s, 0.), z, z, c(s, 0.)]),
        Mat::from_row_slice(2, 2, &[z, c(s, 0.), c(s, 0.), z]),
        Mat::from_row_slice(2, 2, &[z, c(0., -s), c(0., s), z]),
        Mat::from_row_slice(2, 2, &[c(s, 0.), z, z, c(-s, 0.)]),
    ]
}

impl OperatorBasis {
    pub fn new(ops: Vec<Mat>) -> ChanResult<Self> {
        let first = ops.first().ok_or_else(|| ChanError::Basis("empty basis".into()))?;
        let (rows, cols) = first.shape();
        if ops.iter().any(|o| o.shape() != (rows, cols)) {
            return Err(ChanError::Basis("operators of different shapes".into()));
        }
        if ops.len() != rows * cols {
            return Err(ChanError::Basis(format!("{} operators for a {rows}x{cols} space", ops.len())));
        }
        for (a, x) in ops.iter().enumerate() {
            for (b, y) in ops.iter().enumerate() {
                let ip = x.dotc(y);
                let want = if a == b { 1.0 } else { 0.0 };
                if (ip - c(want, 0.0)).norm() > 1e-10 {
                    return Err(ChanError::Basis(format!("<{a},{b}> = {ip}")));
                }
            }
        }
        Ok(OperatorBasis { ops, rows, cols })
    }

    /// `{I, X, Y, Z}/sqrt 2` and its n-fold tensor powers, lexicographic.
    pub fn pauli(n_qubits: usize) -> Self {
        let single = pauli_matrices();
        let mut ops = vec![Mat::from_element(1, 1, c(1., 0.))];
        for _ in 0..n_qubits {
            ops = ops.iter().flat_map(|a| single.iter().map(move |p| kron(a, p))).collect();
        }
        let d = 1 << n_qubits;
        OperatorBasis { ops, rows: d, cols: d }
    }

    /// `|y><x|` at index `x * rows + y`, so its transform is the identity.
    pub fn elementary(rows: usize, cols: usize) -> Self {
        let ops = (0..rows * cols)
            .map(|a| {
                let mut m = Mat::zeros(rows, cols);
                m[(a % rows, a / rows)] = c(1., 0.);
                m
            })
            .collect();
        OperatorBasis { ops, rows, cols }
    }

    /// Clock-and-shift basis `X^a Z^b / sqrt d` at index `a d + b`; the first
    /// element is `I / sqrt d`.
    pub fn weyl(d: usize) -> Self {
        let w = std::f64::consts::TAU / d as f64;
        let s = 1.0 / (d as f64).sqrt();
        let ops = (0..d * d)
            .map(|k| {
                let (a, b) = (k / d, k % d);
                let mut m = Mat::zeros(d, d);
                for j in 0..d {
                    m[((j + a) % d, j)] = C64::from_polar(s, w * (b * j) as f64);
                }
                m
            })
            .collect();
        OperatorBasis { ops, rows: d, cols: d }
    }

    /// Pauli basis for a qubit space, elementary basis otherwise.
    pub fn default_for(rows: usize, cols: usize) -> Self {
        if rows == cols && rows.is_power_of_two() && rows > 1 {
            OperatorBasis::pauli(rows.trailing_zeros() as usize)
        } else {
            OperatorBasis::elementary(rows, cols)
        }
    }

    pub fn ops(&self) -> &[Mat] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `T = sum_a |a><<sigma_a|`, mapping vectorized operators to coefficients.
    pub fn transform(&self) -> Mat {
        let d = self.ops.len();
        let mut t = Mat::zeros(d, d);
        for (a, op) in self.ops.iter().enumerate() {
            let v = vec_col(op);
            for k in 0..d {
                t[(a, k)] = v[k].conj();
            }
        }
        t
    }
}
