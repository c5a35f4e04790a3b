use tnq_tensor::{Leg, Tensor, C64};

use crate::local::all_down;
use crate::{InvError, InvResult};

/// `Q(x, y) = sum_k C(n,k) a_k x^k y^(n-k)`; for `n = 3` this is
/// `a3 x^3 + 3 a2 x^2 y + 3 a1 x y^2 + a0 y^3`.
///
/// On qubits `|0>` plays `x` and `|1>` plays `y`, so `a_k` is the amplitude
/// of every basis string with `k` zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    pub coeffs: Vec<C64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl BinaryForm {
    pub fn new(coeffs: Vec<C64>) -> InvResult<Self> {
        if coeffs.is_empty() {
            return Err(InvError::Shape("a binary form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Plain coefficients `c_k` of `x^k y^(n-k)`.
    pub fn monomial_coeffs(&self) -> Vec<C64> {
        let n = self.degree();
        self.coeffs.iter().enumerate().map(|(k, a)| a * binomial(n, k)).collect()
    }

    pub fn from_monomial_coeffs(c: &[C64]) -> InvResult<Self> {
        let n = c.len().saturating_sub(1);
        BinaryForm::new(c.iter().enumerate().map(|(k, v)| v / binomial(n, k)).collect())
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        let n = self.degree() as i32;
        self.monomial_coeffs().iter().enumerate().map(|(k, c)| c * x.powi(k as i32) * y.powi(n - k as i32)).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }
}

fn zeros_in(index: usize, n: usize) -> usize {
    n - index.count_ones() as usize
}

/// Reads the form off a permutation-symmetric `n`-qubit state.
pub fn form_from_state(psi: &Tensor, tol: f64) -> InvResult<BinaryForm> {
    let n = psi.order();
    if n == 0 || !all_down(psi) || psi.dims().iter().any(|&d| d != 2) {
        return Err(InvError::Shape(format!("expected a qubit ket, got dims {:?}", psi.dims())));
    }
    // representative of weight class k: zeros first, then ones
    let coeffs: Vec<C64> = (0..=n).map(|k| psi.data()[(1usize << (n - k)) - 1]).collect();
    let dev = psi
        .data()
        .iter()
        .enumerate()
        .map(|(i, z)| (z - coeffs[zeros_in(i, n)]).norm())
        .fold(0.0, f64::max);
    if dev > tol {
        return Err(InvError::NotSymmetric(dev));
    }
    BinaryForm::new(coeffs)
}

pub fn state_from_form(f: &BinaryForm) -> InvResult<Tensor> {
    let n = f.degree();
    if n == 0 {
        return Err(InvError::Shape("degree-0 form has no qubits".into()));
    }
    Ok(Tensor::from_fn(vec![Leg::down(2); n], |ix| f.coeffs[ix.iter().filter(|&&b| b == 0).count()])?)
}

/// Partial derivatives on plain coefficients, `c[k]` multiplying `x^k y^(m-k)`.
fn d_dx(c: &[C64]) -> Vec<C64> {
    (1..c.len()).map(|k| c[k] * k as f64).collect()
}

fn d_dy(c: &[C64]) -> Vec<C64> {
    let m = c.len() - 1;
    (0..m).map(|k| c[k] * (m - k) as f64).collect()
}

fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `H = Q_xx Q_yy - Q_xy^2` as a form of degree `2n - 4`.
pub fn hessian(f: &BinaryForm) -> InvResult<BinaryForm> {
    let n = f.degree();
    if !(2..=4).contains(&n) {
        return Err(InvError::Shape(format!("Hessian supported for degrees 2..4, got {n}")));
    }
    let q = f.monomial_coeffs();
    let qxx = d_dx(&d_dx(&q));
    let qyy = d_dy(&d_dy(&q));
    let qxy = d_dx(&d_dy(&q));
    let h: Vec<C64> = mul(&qxx, &qyy).iter().zip(mul(&qxy, &qxy)).map(|(a, b)| a - b).collect();
    BinaryForm::from_monomial_coeffs(&h)
}

/// `a0^2 a3^2 - 6 a0 a1 a2 a3 + 4 a0 a2^3 - 3 a1^2 a2^2 + 4 a1^3 a3`.
pub fn cubic_discriminant(f: &BinaryForm) -> InvResult<C64> {
    if f.degree() != 3 {
        return Err(InvError::Shape(format!("discriminant needs a cubic, got degree {}", f.degree())));
    }
    let [a0, a1, a2, a3] = [f.coeffs[0], f.coeffs[1], f.coeffs[2], f.coeffs[3]];
    Ok(a0 * a0 * a3 * a3 - 6.0 * a0 * a1 * a2 * a3 + 4.0 * a0 * a2.powi(3) - 3.0 * a1 * a1 * a2 * a2
        + 4.0 * a1.powi(3) * a3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn ghz_form() {
        let mut ghz = Tensor::zeros(vec![Leg::down(2); 3]).unwrap().into_data();
        ghz[0] = c(1.0);
        ghz[7] = c(1.0);
        let t = Tensor::new(vec![Leg::down(2); 3], ghz).unwrap();
        let f = form_from_state(&t, 1e-12).unwrap();
        assert_eq!(f.coeffs, vec![c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(cubic_discriminant(&f).unwrap(), c(1.0));
        assert!(state_from_form(&f).unwrap().approx_eq(&t, 0.0));
    }

    #[test]
    fn w_form_is_three_x2_y() {
        let w = Tensor::from_fn(vec![Leg::down(2); 3], |ix| c(if ix.iter().sum::<usize>() == 1 { 1.0 } else { 0.0 })).unwrap();
        let f = form_from_state(&w, 1e-12).unwrap();
        assert_eq!(f.monomial_coeffs(), vec![c(0.0), c(0.0), c(3.0), c(0.0)]);
    }

    #[test]
    fn rejects_non_symmetric() {
        let t = Tensor::ket(&[2, 2], &[0, 1]).unwrap();
        assert!(matches!(form_from_state(&t, 1e-12), Err(InvError::NotSymmetric(_))));
    }
}
