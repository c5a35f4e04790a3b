use nalgebra::DMatrix;
use tnq_tensor::{linalg, permute_legs, Leg, Tensor, C64};

use crate::{truncation_error, DecompError, DecompResult, Truncation};

/// `psi = sum_k sigma_k u_k (x) v_k` across a bipartition of the legs.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// left legs followed by an `Up` index over Schmidt vectors
    pub u: Tensor,
    /// descending, strictly above the zero threshold
    pub sigma: Vec<f64>,
    /// right legs followed by an `Up` index over Schmidt vectors
    pub v: Tensor,
    pub left_legs: Vec<usize>,
    pub right_legs: Vec<usize>,
}

impl SchmidtDecomposition {
    pub fn chi(&self) -> usize {
        self.sigma.len()
    }

    /// Rebuilds the state with its original leg order.
    pub fn reconstruct(&self) -> DecompResult<Tensor> {
        let nl = self.left_legs.len();
        let mut legs: Vec<Leg> = self.u.legs()[..nl].to_vec();
        legs.extend_from_slice(&self.v.legs()[..self.right_legs.len()]);
        let chi = self.chi();
        let rows = self.u.len() / chi;
        let cols = self.v.len() / chi;
        let (ud, vd) = (self.u.data(), self.v.data());
        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                data[i * cols + j] = (0..chi).map(|k| ud[i * chi + k] * vd[j * chi + k] * self.sigma[k]).sum();
            }
        }
        let grouped = Tensor::new(legs, data)?;
        let order: Vec<usize> = self.left_legs.iter().chain(&self.right_legs).copied().collect();
        let mut inv = vec![0; order.len()];
        for (pos, &leg) in order.iter().enumerate() {
            inv[leg] = pos;
        }
        Ok(permute_legs(&grouped, &inv)?)
    }
}

/// Schmidt decomposition of `state` with `left_legs` on one side.
pub fn schmidt(state: &Tensor, left_legs: &[usize]) -> DecompResult<SchmidtDecomposition> {
    let n = state.order();
    if n < 2 {
        return Err(DecompError::Bipartition("state needs at least two legs".into()));
    }
    let mut seen = vec![false; n];
    for &l in left_legs {
        if l >= n || std::mem::replace(&mut seen[l], true) {
            return Err(DecompError::Bipartition(format!("bad left legs {left_legs:?}")));
        }
    }
    if left_legs.is_empty() || left_legs.len() == n {
        return Err(DecompError::Bipartition("left legs must be a proper nonempty subset".into()));
    }
    let right_legs: Vec<usize> = (0..n).filter(|l| !seen[*l]).collect();
    let perm: Vec<usize> = left_legs.iter().chain(&right_legs).copied().collect();
    let grouped = permute_legs(state, &perm)?;
    let rows: usize = left_legs.iter().map(|&l| state.legs()[l].dim).product();
    let cols = state.len() / rows;
    let mat = DMatrix::from_row_slice(rows, cols, grouped.data());
    let dec = linalg::svd(&mat)?;
    let chi = dec.rank().max(1);
    let mut u_legs: Vec<Leg> = left_legs.iter().map(|&l| state.legs()[l]).collect();
    u_legs.push(Leg::up(chi));
    let mut v_legs: Vec<Leg> = right_legs.iter().map(|&l| state.legs()[l]).collect();
    v_legs.push(Leg::up(chi));
    let u = Tensor::from_fn(u_legs, |ix| dec.u[(flat(&ix[..ix.len() - 1], state.legs(), left_legs), ix[ix.len() - 1])])?;
    let v = Tensor::from_fn(v_legs, |ix| {
        dec.v_dagger[(ix[ix.len() - 1], flat(&ix[..ix.len() - 1], state.legs(), &right_legs))]
    })?;
    Ok(SchmidtDecomposition { u, sigma: dec.sigma[..chi].to_vec(), v, left_legs: left_legs.to_vec(), right_legs })
}

fn flat(ix: &[usize], legs: &[Leg], which: &[usize]) -> usize {
    ix.iter().zip(which).fold(0, |acc, (&i, &l)| acc * legs[l].dim + i)
}

/// Keeps the `r` largest Schmidt terms.
pub fn truncate_schmidt(s: &SchmidtDecomposition, r: usize) -> DecompResult<(SchmidtDecomposition, Truncation)> {
    if r == 0 {
        return Err(DecompError::Param("truncation rank must be at least 1".into()));
    }
    let chi = s.chi();
    let kept = r.min(chi);
    let slice = |t: &Tensor| -> DecompResult<Tensor> {
        let mut legs = t.legs().to_vec();
        legs.last_mut().unwrap().dim = kept;
        let data: Vec<C64> = t.data().chunks(chi).flat_map(|row| row[..kept].to_vec()).collect();
        Ok(Tensor::new(legs, data)?)
    };
    let out = SchmidtDecomposition {
        u: slice(&s.u)?,
        sigma: s.sigma[..kept].to_vec(),
        v: slice(&s.v)?,
        left_legs: s.left_legs.clone(),
        right_legs: s.right_legs.clone(),
    };
    Ok((out, Truncation { error: truncation_error(&s.sigma, kept), kept, clamped: r > chi }))
}
