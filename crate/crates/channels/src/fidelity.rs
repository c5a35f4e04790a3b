use tnq_tensor::linalg::{kron, vec_col};
use tnq_tensor::{permute_legs, Leg, Tensor, C64};

use crate::{ChanError, ChanResult, Channel, Mat, OperatorBasis};

/// Projector onto the symmetric subspace of `n` copies of `C^d`, as an
/// operator tensor (n outputs, then n inputs).
pub fn sym_projector(n: usize, d: usize) -> ChanResult<Tensor> {
    if !(2..=3).contains(&n) || d == 0 || d > 5 {
        return Err(ChanError::Unsupported(format!("symmetric projector for n = {n}, d = {d}")));
    }
    let mut legs = vec![Leg::down(d); n];
    legs.extend(vec![Leg::up(d); n]);
    let id = Tensor::from_fn(legs, |ix| {
        let on = ix[..n] == ix[n..];
        C64::new(if on { 1.0 } else { 0.0 }, 0.0)
    })?;
    let perms: Vec<Vec<usize>> = match n {
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]],
    };
    let mut acc: Option<Tensor> = None;
    for p in &perms {
        // permute only the output legs
        let mut full: Vec<usize> = p.clone();
        full.extend(n..2 * n);
        let term = permute_legs(&id, &full)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    // integer counts divided once, so every entry is the nearest double to k/n!
    let count = acc.expect("at least one permutation");
    let norm = perms.len() as f64;
    Ok(Tensor::new(count.legs().to_vec(), count.data().iter().map(|z| C64::new(z.re / norm, 0.0)).collect())?)
}

fn square(ch: &Channel) -> ChanResult<usize> {
    if ch.d_in() != ch.d_out() {
        return Err(ChanError::Dim(format!("fidelity of a {}->{} channel", ch.d_in(), ch.d_out())));
    }
    Ok(ch.d_in())
}

/// Average gate fidelity against the identity, `(d + <<I|Choi|I>>) / (d (d + 1))`.
pub fn avg_gate_fidelity(ch: &Channel) -> ChanResult<f64> {
    let d = square(ch)?;
    let i = vec_col(&Mat::identity(d, d));
    let v = (i.adjoint() * ch.to_choi()? * &i)[(0, 0)];
    Ok(from_overlap(d, v.re))
}

fn from_overlap(d: usize, overlap: f64) -> f64 {
    let d = d as f64;
    (d + overlap) / (d * (d + 1.0))
}

/// Average gate fidelity evaluated once per representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRoutes {
    pub choi: f64,
    pub superop: f64,
    pub kraus: f64,
    pub chi: f64,
    pub stinespring: f64,
}

impl FidelityRoutes {
    pub fn values(&self) -> [f64; 5] {
        [self.choi, self.superop, self.kraus, self.chi, self.stinespring]
    }
}

pub fn avg_gate_fidelity_routes(ch: &Channel) -> ChanResult<FidelityRoutes> {
    let d = square(ch)?;
    let choi = avg_gate_fidelity(ch)?;
    let superop = from_overlap(d, ch.to_superop()?.trace().re);
    let (ops, _) = ch.to_kraus()?;
    let kraus = from_overlap(d, ops.iter().map(|k| k.trace().norm_sqr()).sum());
    // any basis whose first element is I / sqrt d
    let basis = if d == 2 { OperatorBasis::pauli(1) } else { OperatorBasis::weyl(d) };
    let chi00 = ch.to_chi(&basis)?[(0, 0)].re;
    let chi = (d as f64 + d as f64 * chi00) / (d as f64 * (d as f64 + 1.0));
    let (a, d_env) = ch.to_stinespring()?;
    let overlap: f64 = (0..d_env).map(|e| (0..d).map(|i| a[(i * d_env + e, i)]).sum::<C64>().norm_sqr()).sum();
    let stinespring = from_overlap(d, overlap);
    Ok(FidelityRoutes { choi, superop, kraus, chi, stinespring })
}

/// Entanglement fidelity `<<rho|Choi|rho>>`.
pub fn entanglement_fidelity(ch: &Channel, rho: &Mat) -> ChanResult<f64> {
    let d = square(ch)?;
    if rho.shape() != (d, d) {
        return Err(ChanError::Dim(format!("state is {:?} for a {d}-dimensional channel", rho.shape())));
    }
    let v = vec_col(rho);
    Ok((v.adjoint() * ch.to_choi()? * &v)[(0, 0)].re)
}

/// Entanglement fidelity from the Choi, superoperator and Kraus formulas.
pub fn entanglement_fidelity_routes(ch: &Channel, rho: &Mat) -> ChanResult<[f64; 3]> {
    let choi = entanglement_fidelity(ch, rho)?;
    let superop = (kron(&rho.transpose(), rho) * ch.to_superop()?).trace().re;
    let (ops, _) = ch.to_kraus()?;
    let kraus = ops.iter().map(|k| (rho * k).trace().norm_sqr()).sum();
    Ok([choi, superop, kraus])
}
