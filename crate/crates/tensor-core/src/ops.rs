use nalgebra::DMatrix;

use crate::linalg;
use crate::tensor::{next_index, strides};
use crate::{checked_size, Leg, Orientation, Tensor, TensorError, TensorResult, C64};

fn check_legs(t: &Tensor, legs: &[usize]) -> TensorResult<()> {
    let mut seen = vec![false; t.order()];
    for &l in legs {
        if l >= t.order() {
            return Err(TensorError::LegOutOfRange { leg: l, order: t.order() });
        }
        if seen[l] {
            return Err(TensorError::DuplicateLeg(l));
        }
        seen[l] = true;
    }
    Ok(())
}

fn is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p)
}

/// Relays the data so that result leg `k` is input leg `perm[k]`.
pub fn permute_legs(t: &Tensor, perm: &[usize]) -> TensorResult<Tensor> {
    let n = t.order();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(TensorError::InvalidPermutation(perm.to_vec()));
    }
    if is_identity(perm) {
        return Ok(t.clone());
    }
    let dims = t.dims();
    let old_strides = strides(&dims);
    let new_legs: Vec<Leg> = perm.iter().map(|&p| t.legs()[p]).collect();
    let new_dims: Vec<usize> = new_legs.iter().map(|l| l.dim).collect();
    let step: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
    let src = t.data();
    let mut data = Vec::with_capacity(src.len());
    let mut idx = vec![0; n];
    let mut off = 0usize;
    loop {
        data.push(src[off]);
        // advance idx and keep the source offset in sync
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(Tensor::raw(new_legs, data));
            }
            k -= 1;
            idx[k] += 1;
            off += step[k];
            if idx[k] < new_dims[k] {
                break;
            }
            off -= step[k] * idx[k];
            idx[k] = 0;
        }
    }
}

/// Sums over paired legs of `a` and `b`. The result carries `a`'s free legs
/// followed by `b`'s free legs, each in original order.
pub fn contract(a: &Tensor, legs_a: &[usize], b: &Tensor, legs_b: &[usize]) -> TensorResult<Tensor> {
    if legs_a.len() != legs_b.len() {
        return Err(TensorError::LengthMismatch(legs_a.len(), legs_b.len()));
    }
    check_legs(a, legs_a)?;
    check_legs(b, legs_b)?;
    for (&la, &lb) in legs_a.iter().zip(legs_b) {
        let (x, y) = (a.legs()[la], b.legs()[lb]);
        if x.dim != y.dim {
            return Err(TensorError::DimMismatch(x.dim, y.dim));
        }
        if x.orient == y.orient {
            return Err(TensorError::SameOrientation(la, lb));
        }
    }
    let free_a: Vec<usize> = (0..a.order()).filter(|l| !legs_a.contains(l)).collect();
    let free_b: Vec<usize> = (0..b.order()).filter(|l| !legs_b.contains(l)).collect();
    let mut legs: Vec<Leg> = free_a.iter().map(|&l| a.legs()[l]).collect();
    legs.extend(free_b.iter().map(|&l| b.legs()[l]));
    let dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
    checked_size(&dims)?;

    let pa: Vec<usize> = free_a.iter().chain(legs_a).cloned().collect();
    let pb: Vec<usize> = legs_b.iter().chain(&free_b).cloned().collect();
    let ta = permute_legs(a, &pa)?;
    let tb = permute_legs(b, &pb)?;
    let m: usize = free_a.iter().map(|&l| a.legs()[l].dim).product();
    let k: usize = legs_a.iter().map(|&l| a.legs()[l].dim).product();
    let n: usize = free_b.iter().map(|&l| b.legs()[l].dim).product();
    let (da, db) = (ta.data(), tb.data());
    let mut out = vec![C64::new(0.0, 0.0); m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for kk in 0..k {
            let x = da[i * k + kk];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            let brow = &db[kk * n..(kk + 1) * n];
            for (o, y) in row.iter_mut().zip(brow) {
                *o += x * y;
            }
        }
    }
    Ok(Tensor::raw(legs, out))
}

/// Outer product: legs of `a` then legs of `b`.
pub fn tensor_product(a: &Tensor, b: &Tensor) -> TensorResult<Tensor> {
    let mut legs = a.legs().to_vec();
    legs.extend_from_slice(b.legs());
    let dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
    checked_size(&dims)?;
    let mut data = Vec::with_capacity(a.len() * b.len());
    for x in a.data() {
        data.extend(b.data().iter().map(|y| x * y));
    }
    Ok(Tensor::raw(legs, data))
}

/// Closes each pair of legs into a loop and sums over it.
pub fn trace_pairs(t: &Tensor, pairs: &[(usize, usize)]) -> TensorResult<Tensor> {
    let flat: Vec<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
    check_legs(t, &flat)?;
    for &(p, q) in pairs {
        let (x, y) = (t.legs()[p], t.legs()[q]);
        if x.dim != y.dim {
            return Err(TensorError::DimMismatch(x.dim, y.dim));
        }
        if x.orient == y.orient {
            return Err(TensorError::SameOrientation(p, q));
        }
    }
    let free: Vec<usize> = (0..t.order()).filter(|l| !flat.contains(l)).collect();
    let legs: Vec<Leg> = free.iter().map(|&l| t.legs()[l]).collect();
    let free_dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
    let pair_dims: Vec<usize> = pairs.iter().map(|&(p, _)| t.legs()[p].dim).collect();
    let st = strides(&t.dims());
    let free_step: Vec<usize> = free.iter().map(|&l| st[l]).collect();
    let pair_step: Vec<usize> = pairs.iter().map(|&(p, q)| st[p] + st[q]).collect();
    let src = t.data();
    let mut data = Vec::new();
    let mut fi = vec![0; free.len()];
    loop {
        let base: usize = fi.iter().zip(&free_step).map(|(i, s)| i * s).sum();
        let mut acc = C64::new(0.0, 0.0);
        let mut pi = vec![0; pairs.len()];
        loop {
            let off: usize = base + pi.iter().zip(&pair_step).map(|(i, s)| i * s).sum::<usize>();
            acc += src[off];
            if !next_index(&mut pi, &pair_dims) {
                break;
            }
        }
        data.push(acc);
        if !next_index(&mut fi, &free_dims) {
            break;
        }
    }
    Ok(Tensor::raw(legs, data))
}

/// Flips one leg's orientation; the data is untouched.
pub fn bend_leg(t: &Tensor, leg: usize) -> TensorResult<Tensor> {
    check_legs(t, &[leg])?;
    let mut out = t.clone();
    let l = &mut out.legs_mut()[leg];
    l.orient = l.orient.flip();
    Ok(out)
}

pub fn bend_all(t: &Tensor) -> Tensor {
    let mut out = t.clone();
    for l in out.legs_mut() {
        l.orient = l.orient.flip();
    }
    out
}

pub fn conj(t: &Tensor) -> Tensor {
    Tensor::raw(t.legs().to_vec(), t.data().iter().map(|z| z.conj()).collect())
}

/// Hermitian adjoint: conjugate, bend every leg, and move the new output
/// legs in front of the new input legs.
pub fn dagger(t: &Tensor) -> Tensor {
    let bent = bend_all(&conj(t));
    let mut perm: Vec<usize> = (0..t.order()).filter(|&l| bent.legs()[l].orient == Orientation::Down).collect();
    perm.extend((0..t.order()).filter(|&l| bent.legs()[l].orient == Orientation::Up));
    permute_legs(&bent, &perm).expect("valid permutation")
}

/// `op` (outputs then inputs) applied to `state` whose legs match the inputs in order.
pub fn apply(op: &Tensor, state: &Tensor) -> TensorResult<Tensor> {
    let inputs: Vec<usize> = (0..op.order()).filter(|&l| op.legs()[l].orient == Orientation::Up).collect();
    if inputs.len() != state.order() {
        return Err(TensorError::LengthMismatch(inputs.len(), state.order()));
    }
    let all: Vec<usize> = (0..state.order()).collect();
    contract(op, &inputs, state, &all)
}

/// Operator product `a * b` (apply `b` first).
pub fn compose(a: &Tensor, b: &Tensor) -> TensorResult<Tensor> {
    let a_in: Vec<usize> = (0..a.order()).filter(|&l| a.legs()[l].orient == Orientation::Up).collect();
    let b_out: Vec<usize> = (0..b.order()).filter(|&l| b.legs()[l].orient == Orientation::Down).collect();
    let r = contract(a, &a_in, b, &b_out)?;
    // contract leaves a's outputs, then b's inputs: already operator form
    Ok(r)
}

/// Kronecker product of operator-form tensors: outputs of `a`, outputs of
/// `b`, inputs of `a`, inputs of `b`.
pub fn kron(a: &Tensor, b: &Tensor) -> TensorResult<Tensor> {
    if !a.is_operator_form() || !b.is_operator_form() {
        return Err(TensorError::Shape("kron needs operator-form tensors".into()));
    }
    let outs = |t: &Tensor| t.legs().iter().filter(|l| l.orient == Orientation::Down).count();
    let (oa, ob) = (outs(a), outs(b));
    let (na, nb) = (a.order(), b.order());
    let mut perm: Vec<usize> = (0..oa).collect();
    perm.extend(na..na + ob);
    perm.extend(oa..na);
    perm.extend(na + ob..na + nb);
    permute_legs(&tensor_product(a, b)?, &perm)
}

/// Full trace of a square operator in operator form.
pub fn trace(t: &Tensor) -> TensorResult<C64> {
    let m = t.to_dmatrix()?;
    if m.nrows() != m.ncols() {
        return Err(TensorError::Shape("trace of a non-square operator".into()));
    }
    Ok(m.trace())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecConvention {
    /// column stacking, `|A>>_c = sum A_ij |j>|i>`
    Col,
    /// row stacking, `|A>>_r = sum A_ij |i>|j>`
    Row,
}

fn operator_legs(a: &Tensor) -> TensorResult<(usize, usize)> {
    if a.order() != 2 || a.legs()[0].orient == a.legs()[1].orient {
        return Err(TensorError::Shape("expected one output and one input leg".into()));
    }
    Ok(if a.legs()[0].orient == Orientation::Down { (0, 1) } else { (1, 0) })
}

/// Bends the input leg of a single-wire operator to produce a two-leg ket.
pub fn vectorize(a: &Tensor, conv: VecConvention) -> TensorResult<Tensor> {
    let (out, inp) = operator_legs(a)?;
    let perm = match conv {
        VecConvention::Col => [inp, out],
        VecConvention::Row => [out, inp],
    };
    Ok(permute_legs(a, &perm)?.as_ket())
}

/// Inverse of [`vectorize`]: returns a `rows x cols` operator.
pub fn unvectorize(v: &Tensor, rows: usize, cols: usize, conv: VecConvention) -> TensorResult<Tensor> {
    if v.len() != rows * cols {
        return Err(TensorError::DataLength { expected: rows * cols, got: v.len() });
    }
    match conv {
        VecConvention::Row => Tensor::matrix(rows, cols, v.data().to_vec()),
        VecConvention::Col => {
            let t = v.reshape(vec![Leg::up(cols), Leg::down(rows)])?;
            permute_legs(&t, &[1, 0])
        }
    }
}

/// Reshuffles a bipartite operator on `X (x) Y`.
///
/// Col convention maps `M[(m,mu),(n,nu)]` to `R[(nu,mu),(n,m)]`, sending a
/// `(dx dy) x (dx dy)` matrix to `dy^2 x dx^2`; applied to a `dy^2 x dx^2`
/// input it performs the inverse map. Row convention maps to
/// `R[(m,n),(mu,nu)]` with shape `dx^2 x dy^2`. Both are involutions.
pub fn reshuffle(m: &Tensor, dx: usize, dy: usize, conv: VecConvention) -> TensorResult<Tensor> {
    let mat = m.to_dmatrix()?;
    Tensor::from_dmatrix(&reshuffle_matrix(&mat, dx, dy, conv)?)
}

pub fn reshuffle_matrix(mat: &DMatrix<C64>, dx: usize, dy: usize, conv: VecConvention) -> TensorResult<DMatrix<C64>> {
    let shape = mat.shape();
    let bip = (dx * dy, dx * dy);
    match conv {
        VecConvention::Col => {
            if shape == bip {
                linalg::reshuffle_col_dims(mat, dx, dy, dx, dy)
            } else if shape == (dy * dy, dx * dx) {
                linalg::reshuffle_col_dims(mat, dy, dy, dx, dx)
            } else {
                Err(TensorError::Shape(format!("{shape:?} does not factor over dims ({dx}, {dy})")))
            }
        }
        VecConvention::Row => {
            if shape == bip {
                linalg::reshuffle_row_dims(mat, dx, dy, dx, dy)
            } else if shape == (dx * dx, dy * dy) {
                linalg::reshuffle_row_dims(mat, dx, dx, dy, dy)
            } else {
                Err(TensorError::Shape(format!("{shape:?} does not factor over dims ({dx}, {dy})")))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// output legs of the input followed by an `Up` bond leg
    pub u: Tensor,
    pub sigma: Vec<f64>,
    /// `Down` bond leg followed by the input legs of the input
    pub v_dagger: Tensor,
    pub rank: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> TensorResult<Tensor> {
        let k = self.sigma.len();
        let diag = Tensor::from_fn(vec![Leg::down(k), Leg::up(k)], |ix| {
            if ix[0] == ix[1] {
                C64::new(self.sigma[ix[0]], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })?;
        compose(&compose(&self.u, &diag)?, &self.v_dagger)
    }
}

/// Thin SVD of an operator-form tensor (rows over outputs, columns over inputs).
pub fn svd(m: &Tensor) -> TensorResult<SvdResult> {
    let mat = m.to_dmatrix()?;
    let dec = linalg::svd(&mat)?;
    let k = dec.sigma.len();
    let outs: Vec<usize> = m.legs().iter().filter(|l| l.orient == Orientation::Down).map(|l| l.dim).collect();
    let ins: Vec<usize> = m.legs().iter().filter(|l| l.orient == Orientation::Up).map(|l| l.dim).collect();
    let u = Tensor::operator_from_dmatrix(&dec.u, &outs, &[k])?;
    let v_dagger = Tensor::operator_from_dmatrix(&dec.v_dagger, &[k], &ins)?;
    let rank = dec.rank();
    Ok(SvdResult { u, sigma: dec.sigma, v_dagger, rank })
}

/// Returns `lambda` with `a = lambda * b` entrywise within `tol` (relative to
/// the scale of `a`), or `None`.
pub fn equal_up_to_scalar(a: &Tensor, b: &Tensor, tol: f64) -> Option<C64> {
    if a.legs() != b.legs() {
        return None;
    }
    let (k, bk) = b
        .data()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())?;
    if bk.norm() == 0.0 {
        return None;
    }
    let lambda = a.data()[k] / bk;
    let scale = a.max_abs().max(1.0);
    if lambda.norm() <= tol {
        return None;
    }
    let ok = a.data().iter().zip(b.data()).all(|(x, y)| (x - lambda * y).norm() <= tol * scale);
    ok.then_some(lambda)
}

/// `(n+m+1)!`, the number of distinct reshapes of a valence-(n,m) tensor.
pub fn count_rearrangements(n: u64, m: u64) -> TensorResult<u64> {
    let top = n
        .checked_add(m)
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| TensorError::Overflow(format!("({n}+{m}+1)!")))?;
    let mut acc: u64 = 1;
    for k in 2..=top {
        acc = acc.checked_mul(k).ok_or_else(|| TensorError::Overflow(format!("({n}+{m}+1)!")))?;
    }
    Ok(acc)
}
