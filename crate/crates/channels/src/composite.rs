use tnq_tensor::linalg::{kron, unvec_col, vec_col};
use tnq_tensor::{permute_legs, Leg, Tensor, C64};

use crate::{ChanError, ChanResult, Channel, Mat, OperatorBasis};

/// Reorders a column-stacked `vec(A_1 (x) .. (x) A_N)` into
/// `vec(A_1) (x) .. (x) vec(A_N)` by a ladder of adjacent SWAPs.
/// `dims[k]` is the `(rows, cols)` shape of `A_k`.
pub fn unravel(v: &[C64], dims: &[(usize, usize)]) -> ChanResult<Vec<C64>> {
    let (legs, _) = joint_legs(v.len(), dims)?;
    let mut t = Tensor::new(legs, v.to_vec())?;
    let n = dims.len();
    // joint leg order is (c_1 .. c_N, r_1 .. r_N); target is (c_1, r_1, c_2, r_2, ..)
    let mut labels: Vec<usize> = (0..2 * n).collect();
    let target: Vec<usize> = (0..n).flat_map(|k| [k, n + k]).collect();
    for (p, want) in target.iter().enumerate() {
        let mut q = labels.iter().position(|l| l == want).expect("label present");
        while q > p {
            t = swap_adjacent(&t, q - 1)?;
            labels.swap(q - 1, q);
            q -= 1;
        }
    }
    Ok(t.into_data())
}

/// Inverse of [`unravel`], running the ladder backwards.
pub fn unravel_inverse(v: &[C64], dims: &[(usize, usize)]) -> ChanResult<Vec<C64>> {
    let (_, total) = joint_legs(v.len(), dims)?;
    debug_assert_eq!(total, v.len());
    let n = dims.len();
    let legs: Vec<Leg> = dims.iter().flat_map(|&(r, c)| [Leg::down(c), Leg::down(r)]).collect();
    let mut t = Tensor::new(legs, v.to_vec())?;
    let mut labels: Vec<usize> = (0..n).flat_map(|k| [k, n + k]).collect();
    for p in 0..2 * n {
        let mut q = labels.iter().position(|&l| l == p).expect("label present");
        while q > p {
            t = swap_adjacent(&t, q - 1)?;
            labels.swap(q - 1, q);
            q -= 1;
        }
    }
    Ok(t.into_data())
}

fn joint_legs(len: usize, dims: &[(usize, usize)]) -> ChanResult<(Vec<Leg>, usize)> {
    if dims.is_empty() {
        return Err(ChanError::Dim("no subsystems".into()));
    }
    let total: usize = dims.iter().map(|&(r, c)| r * c).product();
    if total != len {
        return Err(ChanError::Dim(format!("vector of length {len} for subsystems {dims:?}")));
    }
    let mut legs: Vec<Leg> = dims.iter().map(|&(_, c)| Leg::down(c)).collect();
    legs.extend(dims.iter().map(|&(r, _)| Leg::down(r)));
    Ok((legs, total))
}

/// SWAP on legs `k` and `k + 1`.
fn swap_adjacent(t: &Tensor, k: usize) -> ChanResult<Tensor> {
    let mut perm: Vec<usize> = (0..t.order()).collect();
    perm.swap(k, k + 1);
    Ok(permute_legs(t, &perm)?)
}

/// The unravelling as a permutation matrix `V` with `V vec(A) = unravel(vec(A))`.
pub fn unravel_matrix(dims: &[(usize, usize)]) -> ChanResult<Mat> {
    let total: usize = dims.iter().map(|&(r, c)| r * c).product();
    // push index labels through the ladder to read off the permutation
    let labels: Vec<C64> = (0..total).map(|i| C64::new(i as f64, 0.0)).collect();
    let moved = unravel(&labels, dims)?;
    let mut v = Mat::zeros(total, total);
    for (new, old) in moved.iter().enumerate() {
        v[(new, old.re as usize)] = C64::new(1.0, 0.0);
    }
    Ok(v)
}

/// Joint superoperator `V_Y^dag (S_1 (x) .. (x) S_N) V_X` of independent channels.
pub fn compose_superops(parts: &[Channel]) -> ChanResult<Channel> {
    if parts.is_empty() {
        return Err(ChanError::Dim("no channels to compose".into()));
    }
    let mut s = Mat::from_element(1, 1, C64::new(1.0, 0.0));
    for p in parts {
        s = kron(&s, &p.to_superop()?);
    }
    let dx: Vec<(usize, usize)> = parts.iter().map(|p| (p.d_in(), p.d_in())).collect();
    let dy: Vec<(usize, usize)> = parts.iter().map(|p| (p.d_out(), p.d_out())).collect();
    let vx = unravel_matrix(&dx)?;
    let vy = unravel_matrix(&dy)?;
    let d_in = parts.iter().map(Channel::d_in).product();
    let d_out = parts.iter().map(Channel::d_out).product();
    Channel::superop(vy.adjoint() * s * vx, d_in, d_out)
}

/// `T^(N) = V_N^dag T^(x)N V_N` for an operator basis on one site.
pub fn basis_transform_n(basis: &OperatorBasis, n: usize) -> ChanResult<Mat> {
    let (r, c) = basis.shape();
    let t = basis.transform();
    let mut tn = Mat::from_element(1, 1, C64::new(1.0, 0.0));
    for _ in 0..n {
        tn = kron(&tn, &t);
    }
    let v = unravel_matrix(&vec![(r, c); n])?;
    Ok(v.adjoint() * tn * v)
}

/// Effective map on `X` of a channel `F` on `X (x) Y` with ancilla prepared in
/// `tau0` and read out against `tau1`:
/// `S'(rho) = Tr_Y[(I (x) tau1) F(rho (x) tau0)]`.
pub fn reduced_superop(f: &Channel, dx: usize, dy: usize, tau0: &Mat, tau1: &Mat) -> ChanResult<Channel> {
    if f.d_in() != dx * dy || f.d_out() != dx * dy {
        return Err(ChanError::Dim(format!("channel {}->{} on a {dx}x{dy} system", f.d_in(), f.d_out())));
    }
    if tau0.shape() != (dy, dy) || tau1.shape() != (dy, dy) {
        return Err(ChanError::Dim("ancilla operators have the wrong shape".into()));
    }
    let v2 = unravel_matrix(&[(dx, dx), (dy, dy)])?;
    let w = &v2 * f.to_superop()? * v2.adjoint();
    let (x2, y2) = (dx * dx, dy * dy);
    let t0 = vec_col(tau0);
    // <<tau1^dag| B>> = Tr(tau1 B)
    let t1 = vec_col(&tau1.transpose());
    let s = Mat::from_fn(x2, x2, |a, b| (0..y2).map(|u| (0..y2).map(|v| t1[u] * w[(a * y2 + u, b * y2 + v)] * t0[v]).sum::<C64>()).sum());
    Channel::superop(s, dx, dx)
}

/// Applies a superoperator matrix to a density matrix.
pub fn apply_superop(s: &Mat, rho: &Mat) -> ChanResult<Mat> {
    let d = (s.nrows() as f64).sqrt().round() as usize;
    if d * d != s.nrows() || s.ncols() != rho.len() {
        return Err(ChanError::Dim(format!("superoperator {:?} on {:?}", s.shape(), rho.shape())));
    }
    Ok(unvec_col((s * vec_col(rho)).as_slice(), d, d)?)
}
