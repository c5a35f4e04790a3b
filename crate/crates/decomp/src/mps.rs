use nalgebra::DMatrix;
use tnq_tensor::tntx::{read_tensor, write_tntx, Tokens};
use tnq_tensor::{contract, linalg, Leg, Orientation, Tensor, C64};

use crate::{truncation_error, DecompError, DecompResult, Truncation};

/// Open-boundary matrix product state.
///
/// Site `k` has legs `[left bond (Down, if k > 0), physical (Down), right
/// bond (Up, if k < n-1)]`. Sites produced by [`mps_factor`] are left
/// isometries except the last, which carries the norm.
#[derive(Debug, Clone)]
pub struct Mps {
    pub sites: Vec<Tensor>,
    /// singular values at each cut, empty when the chain was not factored here
    pub bond_sigmas: Vec<Vec<f64>>,
    pub site_dims: Vec<usize>,
}

impl Mps {
    /// Validates the leg layout of hand-built sites.
    pub fn from_sites(sites: Vec<Tensor>) -> DecompResult<Mps> {
        let n = sites.len();
        if n == 0 {
            return Err(DecompError::Shape("an MPS needs at least one site".into()));
        }
        let mut site_dims = Vec::with_capacity(n);
        let mut prev_bond: Option<usize> = None;
        for (k, s) in sites.iter().enumerate() {
            let want = 1 + usize::from(k > 0) + usize::from(k + 1 < n);
            if s.order() != want {
                return Err(DecompError::Shape(format!("site {k} has {} legs, expected {want}", s.order())));
            }
            let legs = s.legs();
            let mut i = 0;
            if let Some(b) = prev_bond {
                if legs[0] != Leg::down(b) {
                    return Err(DecompError::Shape(format!("site {k}: left bond must be Down({b})")));
                }
                i = 1;
            }
            if legs[i].orient != Orientation::Down {
                return Err(DecompError::Shape(format!("site {k}: physical leg must be Down")));
            }
            site_dims.push(legs[i].dim);
            prev_bond = None;
            if k + 1 < n {
                if legs[i + 1].orient != Orientation::Up {
                    return Err(DecompError::Shape(format!("site {k}: right bond must be Up")));
                }
                prev_bond = Some(legs[i + 1].dim);
            }
        }
        Ok(Mps { sites, bond_sigmas: Vec::new(), site_dims })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.len() - 1].iter().map(|s| s.legs().last().unwrap().dim).collect()
    }
}

/// Left-to-right sweep of SVDs; singular values are pushed into the
/// remainder so every site but the last is a left isometry.
pub fn mps_factor(state: &Tensor) -> DecompResult<Mps> {
    let dims = state.dims();
    let n = dims.len();
    if n == 0 {
        return Err(DecompError::Shape("cannot factor a scalar".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(DecompError::Shape(format!("physical dimension {d} < 2")));
    }
    let mut sites = Vec::with_capacity(n);
    let mut sigmas = Vec::with_capacity(n.saturating_sub(1));
    let mut rem = DMatrix::from_row_slice(1, state.len(), state.data());
    let mut bond = 1usize;
    for (k, &d) in dims.iter().enumerate().take(n - 1) {
        let rest = rem.len() / (bond * d);
        // rows (bond, phys), columns over the remaining sites
        let m = DMatrix::from_row_slice(bond * d, rest, &row_major(&rem));
        let dec = linalg::svd(&m)?;
        let r = dec.rank().max(1);
        let mut legs = Vec::with_capacity(3);
        if k > 0 {
            legs.push(Leg::down(bond));
        }
        legs.push(Leg::down(d));
        legs.push(Leg::up(r));
        let data: Vec<C64> = (0..bond * d).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| dec.u[(i, j)]).collect();
        sites.push(Tensor::new(legs, data)?);
        sigmas.push(dec.sigma[..r].to_vec());
        let mut next = DMatrix::zeros(r, rest);
        for i in 0..r {
            for j in 0..rest {
                next[(i, j)] = dec.v_dagger[(i, j)] * dec.sigma[i];
            }
        }
        rem = next;
        bond = r;
    }
    let d = dims[n - 1];
    let legs = if n > 1 { vec![Leg::down(bond), Leg::down(d)] } else { vec![Leg::down(d)] };
    sites.push(Tensor::new(legs, row_major(&rem))?);
    Ok(Mps { sites, bond_sigmas: sigmas, site_dims: dims })
}

fn row_major(m: &DMatrix<C64>) -> Vec<C64> {
    m.transpose().as_slice().to_vec()
}

/// Contracts the chain left to right into a state with one leg per site.
pub fn mps_contract(m: &Mps) -> DecompResult<Tensor> {
    let mut acc = m.sites[0].clone();
    for s in &m.sites[1..] {
        let last = acc.order() - 1;
        acc = contract(&acc, &[last], s, &[0])?;
    }
    Ok(acc)
}

/// Keeps the `r` largest singular values at cut `cut` (between sites `cut`
/// and `cut + 1`). The error report is exact when the sites left of the cut
/// are isometries, as after [`mps_factor`].
pub fn truncate_bond(m: &Mps, cut: usize, r: usize) -> DecompResult<(Mps, Truncation)> {
    if r == 0 {
        return Err(DecompError::Param("truncation rank must be at least 1".into()));
    }
    if cut + 1 >= m.len() {
        return Err(DecompError::Param(format!("cut {cut} out of range for {} sites", m.len())));
    }
    let chi = m.sites[cut].legs().last().unwrap().dim;
    let kept = r.min(chi);
    let mut out = m.clone();
    // right bond of `cut` is its last leg, left bond of `cut + 1` its first
    let left = &m.sites[cut];
    let mut legs = left.legs().to_vec();
    legs.last_mut().unwrap().dim = kept;
    let data: Vec<C64> = left.data().chunks(chi).flat_map(|row| row[..kept].to_vec()).collect();
    out.sites[cut] = Tensor::new(legs, data)?;
    let right = &m.sites[cut + 1];
    let mut legs = right.legs().to_vec();
    legs[0].dim = kept;
    let stride = right.len() / chi;
    out.sites[cut + 1] = Tensor::new(legs, right.data()[..kept * stride].to_vec())?;
    let error = match m.bond_sigmas.get(cut) {
        Some(s) => {
            out.bond_sigmas[cut] = s[..kept.min(s.len())].to_vec();
            truncation_error(s, kept)
        }
        None => f64::NAN,
    };
    Ok((out, Truncation { error, kept, clamped: r > chi }))
}

/// `mps n` manifest line followed by one TNTX block per site.
pub fn write_mps(m: &Mps) -> String {
    let mut out = format!("mps {}\n", m.len());
    for s in &m.sites {
        out.push_str(&write_tntx(s));
    }
    out
}

pub fn read_mps(text: &str) -> DecompResult<Mps> {
    let mut tok = Tokens::new(text);
    tok.expect("mps")?;
    let n = tok.next_usize()?;
    if n == 0 {
        return Err(tok.error("an MPS needs at least one site").into());
    }
    let sites = (0..n).map(|_| read_tensor(&mut tok)).collect::<Result<Vec<_>, _>>()?;
    if !tok.is_done() {
        return Err(tok.error("trailing data after the last site").into());
    }
    Mps::from_sites(sites)
}
