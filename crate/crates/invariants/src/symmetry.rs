use tnq_tensor::{contract, permute_legs, Orientation, Tensor, C64};

use crate::local::all_down;
use crate::trace::{check_permutation, cycle_type};
use crate::{InvError, InvResult};

/// One group element acting on a tensor's legs.
#[derive(Debug, Clone)]
pub enum GroupAction {
    /// result leg `k` is input leg `perm[k]`
    Permute(Vec<usize>),
    /// operator `ops[k]` applied to leg `k`
    Local(Vec<Tensor>),
}

impl GroupAction {
    pub fn act(&self, t: &Tensor) -> InvResult<Tensor> {
        match self {
            GroupAction::Permute(p) => {
                check_permutation(p)?;
                if p.len() != t.order() {
                    return Err(InvError::Shape(format!("permutation of {} legs on an order-{} tensor", p.len(), t.order())));
                }
                Ok(permute_legs(t, p)?)
            }
            GroupAction::Local(ops) => {
                if ops.len() != t.order() || !all_down(t) {
                    return Err(InvError::Shape("local action needs one operator per ket leg".into()));
                }
                let mut out = t.clone();
                for (k, op) in ops.iter().enumerate() {
                    if op.order() != 2 || op.legs()[0].orient != Orientation::Down {
                        return Err(InvError::Shape(format!("operator {k} is not single-wire")));
                    }
                    // new leg lands in front; move it back to position k
                    let moved = contract(op, &[1], &out, &[k])?;
                    let mut perm: Vec<usize> = (1..=k).collect();
                    perm.push(0);
                    perm.extend(k + 1..t.order());
                    out = permute_legs(&moved, &perm)?;
                }
                Ok(out)
            }
        }
    }
}

/// `(1/|G|) sum_g g{t}`.
pub fn symmetrize(t: &Tensor, group: &[GroupAction]) -> InvResult<Tensor> {
    if group.is_empty() {
        return Err(InvError::Shape("empty group".into()));
    }
    let mut acc = Tensor::zeros(t.legs().to_vec())?;
    for g in group {
        let gt = g.act(t)?;
        if gt.legs() != t.legs() {
            return Err(InvError::Shape("group element changes the leg structure".into()));
        }
        acc = acc.add(&gt)?;
    }
    Ok(acc.scale(C64::new(1.0 / group.len() as f64, 0.0)))
}

/// All `n!` permutations in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

pub fn permutation_sign(perm: &[usize]) -> InvResult<f64> {
    let even = cycle_type(perm)?.iter().filter(|&&l| l % 2 == 0).count() % 2 == 0;
    Ok(if even { 1.0 } else { -1.0 })
}

/// The full symmetric group on `n` legs.
pub fn symmetric_group(n: usize) -> Vec<GroupAction> {
    permutations(n).into_iter().map(GroupAction::Permute).collect()
}

/// `(1/n!) sum_pi sign(pi) pi{t}` over all leg permutations.
pub fn antisymmetrize(t: &Tensor) -> InvResult<Tensor> {
    let first = t.legs().first().copied();
    if t.legs().iter().any(|l| Some(*l) != first) {
        return Err(InvError::Shape("antisymmetrizing needs identical legs".into()));
    }
    let perms = permutations(t.order());
    let mut acc = Tensor::zeros(t.legs().to_vec())?;
    for p in &perms {
        let s = permutation_sign(p)?;
        acc = acc.add(&permute_legs(t, p)?.scale(C64::new(s, 0.0)))?;
    }
    Ok(acc.scale(C64::new(1.0 / perms.len() as f64, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_enumeration() {
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        let signs: f64 = p.iter().map(|x| permutation_sign(x).unwrap()).sum();
        assert_eq!(signs, 0.0);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutation_sign(&[1, 0, 2]).unwrap(), -1.0);
        assert_eq!(permutation_sign(&[1, 2, 0]).unwrap(), 1.0);
    }
}
