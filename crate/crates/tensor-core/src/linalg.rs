//! Matrix helpers on `nalgebra::DMatrix<C64>`: sorted SVD, Hermitian
//! eigendecomposition, inverse with conditioning, Kronecker products,
//! partial traces and the col/row reshuffling maps.

use nalgebra::DMatrix;

use crate::{TensorError, TensorResult, C64, ZERO_THRESHOLD};

const SVD_MAX_ITER: usize = 100_000;

pub struct MatrixSvd {
    pub u: DMatrix<C64>,
    pub sigma: Vec<f64>,
    pub v_dagger: DMatrix<C64>,
}

impl MatrixSvd {
    /// Count of singular values above the zero threshold.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.sigma)
    }
}

pub fn numerical_rank(sigma: &[f64]) -> usize {
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s >= ZERO_THRESHOLD * smax).count()
}

/// Thin SVD with singular values descending, ties kept in original order.
pub fn svd(m: &DMatrix<C64>) -> TensorResult<MatrixSvd> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Err(TensorError::ZeroDim);
    }
    if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        // nalgebra handles this, but give the zero matrix a canonical basis
        let u = DMatrix::identity(r, k);
        let v = DMatrix::identity(k, c);
        return Ok(MatrixSvd { u, sigma: vec![0.0; k], v_dagger: v });
    }
    let dec = m
        .clone()
        .try_svd_unordered(true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(TensorError::NoConvergence("svd"))?;
    let u = dec.u.ok_or(TensorError::NoConvergence("svd"))?;
    let vt = dec.v_t.ok_or(TensorError::NoConvergence("svd"))?;
    let sv: Vec<f64> = dec.singular_values.iter().cloned().collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap().then(a.cmp(&b)));
    let u_sorted = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
    let vt_sorted = DMatrix::from_fn(k, c, |i, j| vt[(order[i], j)]);
    let sigma = order.iter().map(|&i| sv[i]).collect();
    Ok(MatrixSvd { u: u_sorted, sigma, v_dagger: vt_sorted })
}

pub fn singular_values(m: &DMatrix<C64>) -> TensorResult<Vec<f64>> {
    Ok(svd(m)?.sigma)
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues descending, each
/// eigenvector phased so its first non-negligible component is real positive.
pub fn eigh(m: &DMatrix<C64>) -> TensorResult<(Vec<f64>, DMatrix<C64>)> {
    let (r, c) = m.shape();
    if r != c {
        return Err(TensorError::Shape(format!("eigh of a {r}x{c} matrix")));
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let dec = h
        .try_symmetric_eigen(f64::EPSILON, SVD_MAX_ITER)
        .ok_or(TensorError::NoConvergence("eigh"))?;
    let ev: Vec<f64> = dec.eigenvalues.iter().cloned().collect();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| ev[b].partial_cmp(&ev[a]).unwrap().then(a.cmp(&b)));
    let mut vecs = DMatrix::from_fn(r, r, |i, j| dec.eigenvectors[(i, order[j])]);
    for j in 0..r {
        let col_max = (0..r).map(|i| vecs[(i, j)].norm()).fold(0.0, f64::max);
        if let Some(i0) = (0..r).find(|&i| vecs[(i, j)].norm() > 1e-8 * col_max) {
            let z = vecs[(i0, j)];
            let ph = z.conj() / z.norm();
            for i in 0..r {
                vecs[(i, j)] *= ph;
            }
        }
    }
    Ok((order.iter().map(|&i| ev[i]).collect(), vecs))
}

pub fn condition_number(m: &DMatrix<C64>) -> TensorResult<f64> {
    let s = singular_values(m)?;
    let smax = s[0];
    let smin = *s.last().unwrap();
    Ok(if smin == 0.0 { f64::INFINITY } else { smax / smin })
}

/// Inverse of a square matrix, refusing matrices whose smallest singular value
/// is below `ZERO_THRESHOLD * sigma_max`.
pub fn inverse(m: &DMatrix<C64>) -> TensorResult<DMatrix<C64>> {
    let (r, c) = m.shape();
    if r != c {
        return Err(TensorError::Shape(format!("inverse of a {r}x{c} matrix")));
    }
    let cond = condition_number(m)?;
    if !(cond < 1.0 / ZERO_THRESHOLD) {
        return Err(TensorError::Singular(cond));
    }
    m.clone().try_inverse().ok_or(TensorError::Singular(cond))
}

/// Square root of a positive semidefinite matrix; small negative eigenvalues are clipped.
pub fn sqrt_psd(m: &DMatrix<C64>) -> TensorResult<DMatrix<C64>> {
    let (ev, v) = eigh(m)?;
    let d = DMatrix::from_fn(ev.len(), ev.len(), |i, j| {
        if i == j {
            C64::new(ev[i].max(0.0).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(&v * d * v.adjoint())
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Trace over the first factor of `M` on `A (x) B`.
pub fn partial_trace_first(m: &DMatrix<C64>, da: usize, db: usize) -> TensorResult<DMatrix<C64>> {
    check_square(m, da * db)?;
    Ok(DMatrix::from_fn(db, db, |mu, nu| (0..da).map(|a| m[(a * db + mu, a * db + nu)]).sum()))
}

/// Trace over the second factor of `M` on `A (x) B`.
pub fn partial_trace_second(m: &DMatrix<C64>, da: usize, db: usize) -> TensorResult<DMatrix<C64>> {
    check_square(m, da * db)?;
    Ok(DMatrix::from_fn(da, da, |a, b| (0..db).map(|mu| m[(a * db + mu, b * db + mu)]).sum()))
}

fn check_square(m: &DMatrix<C64>, n: usize) -> TensorResult<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(TensorError::Shape(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Col-reshuffle with rows split as `(p,q)` and columns as `(r,s)`:
/// `R(M)[(s,q),(r,p)] = M[(p,q),(r,s)]`.
pub fn reshuffle_col_dims(m: &DMatrix<C64>, p: usize, q: usize, r: usize, s: usize) -> TensorResult<DMatrix<C64>> {
    if m.nrows() != p * q || m.ncols() != r * s {
        return Err(TensorError::Shape(format!(
            "cannot split a {}x{} matrix as ({p}*{q})x({r}*{s})",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut out = DMatrix::zeros(s * q, r * p);
    for a in 0..p {
        for b in 0..q {
            for c in 0..r {
                for d in 0..s {
                    out[(d * q + b, c * p + a)] = m[(a * q + b, c * s + d)];
                }
            }
        }
    }
    Ok(out)
}

/// Row-reshuffle with rows split as `(p,q)` and columns as `(r,s)`:
/// `R(M)[(p,r),(q,s)] = M[(p,q),(r,s)]`.
pub fn reshuffle_row_dims(m: &DMatrix<C64>, p: usize, q: usize, r: usize, s: usize) -> TensorResult<DMatrix<C64>> {
    if m.nrows() != p * q || m.ncols() != r * s {
        return Err(TensorError::Shape(format!(
            "cannot split a {}x{} matrix as ({p}*{q})x({r}*{s})",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut out = DMatrix::zeros(p * r, q * s);
    for a in 0..p {
        for b in 0..q {
            for c in 0..r {
                for d in 0..s {
                    out[(a * r + c, b * s + d)] = m[(a * q + b, c * s + d)];
                }
            }
        }
    }
    Ok(out)
}

/// Column-stacking vectorization: entry `j*rows + i` holds `A[i,j]`.
pub fn vec_col(a: &DMatrix<C64>) -> DMatrix<C64> {
    // nalgebra storage is column-major, which is exactly column stacking
    DMatrix::from_column_slice(a.len(), 1, a.as_slice())
}

pub fn unvec_col(v: &[C64], rows: usize, cols: usize) -> TensorResult<DMatrix<C64>> {
    if v.len() != rows * cols {
        return Err(TensorError::DataLength { expected: rows * cols, got: v.len() });
    }
    Ok(DMatrix::from_column_slice(rows, cols, v))
}

/// Row-stacking vectorization: entry `i*cols + j` holds `A[i,j]`.
pub fn vec_row(a: &DMatrix<C64>) -> DMatrix<C64> {
    vec_col(&a.transpose())
}

pub fn hs_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> DMatrix<C64> {
        DMatrix::from_row_iterator(rows, cols, v.iter().map(|&x| C64::new(x, 0.0)))
    }

    #[test]
    fn svd_sorted_descending() {
        let a = m(3, 3, &[1.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 3.0]);
        let s = svd(&a).unwrap();
        assert_eq!(s.sigma.len(), 3);
        assert!((s.sigma[0] - 5.0).abs() < 1e-12);
        assert!((s.sigma[1] - 3.0).abs() < 1e-12);
        assert!((s.sigma[2] - 1.0).abs() < 1e-12);
        let sig = DMatrix::from_fn(3, 3, |i, j| if i == j { C64::new(s.sigma[i], 0.0) } else { C64::new(0.0, 0.0) });
        assert!(max_abs_diff(&(&s.u * sig * &s.v_dagger), &a) < 1e-12);
    }

    #[test]
    fn zero_matrix_rank_zero() {
        let s = svd(&DMatrix::zeros(2, 3)).unwrap();
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn eigh_phase_and_order() {
        let a = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (ev, v) = eigh(&a).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] + 1.0).abs() < 1e-12);
        for j in 0..2 {
            assert!(v[(0, j)].im.abs() < 1e-12 && v[(0, j)].re > 0.0);
        }
    }

    #[test]
    fn singular_inverse_refused() {
        let a = m(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(inverse(&a), Err(TensorError::Singular(_))));
    }

    #[test]
    fn col_reshuffle_of_bell_projector_is_identity() {
        // |Phi+><Phi+| col-reshuffles to the identity on X (x) X (unnormalized)
        let mut phi = DMatrix::<C64>::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            phi[(i, j)] = C64::new(1.0, 0.0);
        }
        let r = reshuffle_col_dims(&phi, 2, 2, 2, 2).unwrap();
        assert!(max_abs_diff(&r, &DMatrix::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn partial_traces() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let ab = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace_first(&ab, 2, 3).unwrap(), &(b.clone() * C64::new(5.0, 0.0))) < 1e-12);
        assert!(max_abs_diff(&partial_trace_second(&ab, 2, 3).unwrap(), &(a * C64::new(6.0, 0.0))) < 1e-12);
    }
}
