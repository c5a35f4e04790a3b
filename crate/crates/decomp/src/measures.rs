use nalgebra::DMatrix;
use tnq_tensor::{compose, kron, linalg, trace, Tensor, C64};

use crate::{DecompError, DecompResult, NORM_TOL};

/// Squared singular values, validated and optionally rescaled to sum 1.
fn spectrum(sigma: &[f64], normalize: bool) -> DecompResult<Vec<f64>> {
    if let Some(&s) = sigma.iter().find(|&&s| s < 0.0 || !s.is_finite()) {
        return Err(DecompError::Negative(s));
    }
    let lam: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    let total: f64 = lam.iter().sum();
    if (total - 1.0).abs() > NORM_TOL {
        if !normalize || total == 0.0 {
            return Err(DecompError::Unnormalized(total));
        }
        return Ok(lam.iter().map(|l| l / total).collect());
    }
    Ok(lam)
}

/// Von Neumann entropy `-sum l ln l` of `l = sigma^2` (natural log).
pub fn entropy(sigma: &[f64], normalize: bool) -> DecompResult<f64> {
    let lam = spectrum(sigma, normalize)?;
    // a spectrum of one entry slightly above 1 would give a tiny negative value
    Ok((-lam.iter().filter(|&&l| l > 0.0).map(|l| l * l.ln()).sum::<f64>()).max(0.0))
}

/// Renyi entropy `ln(sum l^alpha) / (1 - alpha)`.
pub fn renyi(sigma: &[f64], alpha: f64, normalize: bool) -> DecompResult<f64> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(DecompError::Param(format!("Renyi order must be positive and not 1, got {alpha}")));
    }
    let lam = spectrum(sigma, normalize)?;
    let s: f64 = lam.iter().filter(|&&l| l > 0.0).map(|l| l.powf(alpha)).sum();
    Ok(s.ln() / (1.0 - alpha))
}

/// Elementary symmetric polynomial `S_k` of `l = sigma^2`.
pub fn sym_poly(sigma: &[f64], k: usize) -> DecompResult<f64> {
    if k > sigma.len() {
        return Err(DecompError::Param(format!("k = {k} exceeds {} values", sigma.len())));
    }
    // e[j] holds S_j of the values seen so far
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for s in sigma {
        let l = s * s;
        for j in (1..=k).rev() {
            e[j] += l * e[j - 1];
        }
    }
    Ok(e[k])
}

/// Power sum `B_n = sum l^n` of `l = sigma^2`.
pub fn power_sum(sigma: &[f64], n: u32) -> f64 {
    sigma.iter().map(|s| (s * s).powi(n as i32)).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C_k = (S_k(l) / S_k(1/d, ..., 1/d))^(1/k)` where the spectrum is padded
/// with zeros up to the local dimension `d`.
pub fn d_concurrence(sigma: &[f64], k: usize, d: usize) -> DecompResult<f64> {
    if k == 0 || k > d {
        return Err(DecompError::Param(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    if sigma.len() > d {
        return Err(DecompError::Param(format!("{} Schmidt values exceed dimension {d}", sigma.len())));
    }
    let sk = sym_poly(sigma, k.min(sigma.len()))?;
    let sk = if k > sigma.len() { 0.0 } else { sk };
    let max = binomial(d, k) / (d as f64).powi(k as i32);
    Ok((sk / max).max(0.0).powf(1.0 / k as f64))
}

/// `sqrt(d/(d-1) (1 - Tr rho_A^2))` for a pure state on `d x d`.
pub fn concurrence_pure(state: &Tensor, d: usize, normalize: bool) -> DecompResult<f64> {
    if d < 2 || state.len() != d * d {
        return Err(DecompError::Shape(format!("state of size {} is not {d} x {d}", state.len())));
    }
    let m = DMatrix::from_row_slice(d, d, state.data());
    let sigma = linalg::singular_values(&m)?;
    let lam = spectrum(&sigma, normalize)?;
    let purity: f64 = lam.iter().map(|l| l * l).sum();
    Ok((d as f64 / (d as f64 - 1.0) * (1.0 - purity)).max(0.0).sqrt())
}

fn check_density(rho: &DMatrix<C64>, normalize: bool) -> DecompResult<DMatrix<C64>> {
    if !rho.is_square() {
        return Err(DecompError::Shape(format!("{}x{} is not square", rho.nrows(), rho.ncols())));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
        if !normalize || tr.norm() == 0.0 {
            return Err(DecompError::Unnormalized(tr.re));
        }
        return Ok(rho / tr);
    }
    Ok(rho.clone())
}

/// Two-qubit concurrence `max(l1 - l2 - l3 - l4, 0)` with `l_i` the
/// descending square roots of the eigenvalues of `rho (Y(x)Y) conj(rho) (Y(x)Y)`.
pub fn mixed_concurrence(rho: &DMatrix<C64>, normalize: bool) -> DecompResult<f64> {
    if rho.shape() != (4, 4) {
        return Err(DecompError::Shape("mixed concurrence needs a 4x4 density matrix".into()));
    }
    let rho = check_density(rho, normalize)?;
    let z = C64::new(0.0, 0.0);
    let y = DMatrix::from_row_slice(2, 2, &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]);
    let yy = linalg::kron(&y, &y);
    let tilde = &yy * rho.map(|c| c.conj()) * &yy;
    // same spectrum as rho * tilde, but Hermitian
    let sr = linalg::sqrt_psd(&rho)?;
    let (ev, _) = linalg::eigh(&(&sr * tilde * &sr))?;
    let mut l: Vec<f64> = ev.iter().map(|e| e.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// `Tr[(rho (x) rho) SWAP]`, contracted as a network rather than squared directly.
pub fn purity_swap(rho: &DMatrix<C64>) -> DecompResult<f64> {
    if !rho.is_square() {
        return Err(DecompError::Shape("density matrix must be square".into()));
    }
    let d = rho.nrows();
    let r = Tensor::from_dmatrix(rho)?;
    let swap = Tensor::from_fn(
        vec![tnq_tensor::Leg::down(d), tnq_tensor::Leg::down(d), tnq_tensor::Leg::up(d), tnq_tensor::Leg::up(d)],
        |ix| C64::new(if ix[0] == ix[3] && ix[1] == ix[2] { 1.0 } else { 0.0 }, 0.0),
    )?;
    Ok(trace(&compose(&kron(&r, &r)?, &swap)?)?.re)
}

/// `sum_i sqrt(p_i) |e_i> |i>` from the eigendecomposition `rho = sum p_i |e_i><e_i|`.
pub fn purify(rho: &DMatrix<C64>, tol: f64) -> DecompResult<Tensor> {
    if !rho.is_square() {
        return Err(DecompError::Shape("density matrix must be square".into()));
    }
    if linalg::max_abs_diff(rho, &rho.adjoint()) > tol {
        return Err(DecompError::Shape("density matrix is not Hermitian".into()));
    }
    let d = rho.nrows();
    let (p, e) = linalg::eigh(rho)?;
    if let Some(&neg) = p.iter().find(|&&x| x < -tol) {
        return Err(DecompError::NotPsd(neg));
    }
    // eigenvalues within tol of zero are roundoff
    let root: Vec<f64> = p.iter().map(|&x| if x <= tol { 0.0 } else { x.sqrt() }).collect();
    Ok(Tensor::from_fn(vec![tnq_tensor::Leg::down(d); 2], |ix| e[(ix[0], ix[1])] * root[ix[1]])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn entropies() {
        assert_eq!(entropy(&[1.0, 0.0], false).unwrap(), 0.0);
        assert!((entropy(&[H, H], false).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((renyi(&[H, H], 2.0, false).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(entropy(&[1.0, 1.0], false).is_err());
        assert!((entropy(&[1.0, 1.0], true).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(entropy(&[-0.1, 1.0], true).is_err());
        assert!(renyi(&[1.0], 1.0, false).is_err());
        assert!(renyi(&[1.0], 0.0, false).is_err());
    }

    #[test]
    fn renyi_tends_to_entropy() {
        let s = [0.8f64.sqrt(), 0.15f64.sqrt(), 0.05f64.sqrt()];
        let e = entropy(&s, false).unwrap();
        assert!((renyi(&s, 1.0 + 1e-7, false).unwrap() - e).abs() < 1e-6);
        assert!((renyi(&s, 1.0 - 1e-7, false).unwrap() - e).abs() < 1e-6);
    }

    #[test]
    fn symmetric_polynomials() {
        assert!((power_sum(&[H, H], 2) - 0.5).abs() < 1e-15);
        assert!((sym_poly(&[0.6, 0.8], 1).unwrap() - 1.0).abs() < 1e-15);
        // S_2(a,b,c) = ab + ac + bc on squares
        let s = [1.0, 2.0, 3.0];
        assert!((sym_poly(&s, 2).unwrap() - (4.0 + 9.0 + 36.0)).abs() < 1e-12);
        assert!((sym_poly(&s, 3).unwrap() - 36.0).abs() < 1e-12);
        assert!(sym_poly(&s, 4).is_err());
        assert!((d_concurrence(&[H, H], 2, 2).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(d_concurrence(&[1.0], 2, 2).unwrap(), 0.0);
        assert!(d_concurrence(&[1.0], 3, 2).is_err());
    }

    #[test]
    fn purity_of_mixed_qubit() {
        let half = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!((purity_swap(&half).unwrap() - 0.5).abs() < 1e-15);
        let psi = purify(&half, 1e-12).unwrap();
        let m = DMatrix::from_row_slice(2, 2, psi.data());
        assert!(linalg::max_abs_diff(&(&m * m.adjoint()), &half) < 1e-15);
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]));
        assert!(matches!(purify(&bad, 1e-12), Err(DecompError::NotPsd(_))));
    }
}
