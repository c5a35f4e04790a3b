use tnq_tensor::{tensor_product, trace_pairs, Leg, Tensor, C64};

use crate::{InvError, InvResult};

pub(crate) fn check_permutation(perm: &[usize]) -> InvResult<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(InvError::Permutation(perm.to_vec()));
        }
    }
    Ok(())
}

/// `Tr(P_sigma rho^{(x)n})`: output leg of copy `k` joined to the input leg of copy `perm[k]`.
pub fn trace_invariant(rho: &Tensor, perm: &[usize]) -> InvResult<C64> {
    let d = rho.dims()[0];
    if rho.legs() != [Leg::down(d), Leg::up(d)] {
        return Err(InvError::Shape(format!("expected a square operator, got dims {:?}", rho.dims())));
    }
    check_permutation(perm)?;
    if perm.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut big = rho.clone();
    for _ in 1..perm.len() {
        big = tensor_product(&big, rho)?;
    }
    let pairs: Vec<(usize, usize)> = perm.iter().enumerate().map(|(k, &p)| (2 * k, 2 * p + 1)).collect();
    Ok(trace_pairs(&big, &pairs)?.scalar_value().unwrap())
}

/// Cycle lengths of a permutation, in order of first appearance.
pub fn cycle_type(perm: &[usize]) -> InvResult<Vec<usize>> {
    check_permutation(perm)?;
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    Ok(out)
}
