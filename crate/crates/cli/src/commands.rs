use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use tnq_boolean::{count_sat, count_sat_bruteforce, parse_dimacs};
use tnq_channels::{
    avg_gate_fidelity, entanglement_fidelity, read_chx, write_chx, OperatorBasis, Property, RepKind,
};
use tnq_counting::{count_colorings_bruteforce, count_colorings_epsilon, parse_edgelist};
use tnq_decomp::{entropy, mps_contract, mps_factor, schmidt, truncate_bond, write_mps};
use tnq_invariants::{j1, j2, k1};
use tnq_tensor::tntx::read_tntx;
use tnq_tensor::{Leg, Tensor, C64};

use crate::error::CliError;
use crate::format::{complex, line, sig12};

pub type CliResult<T> = Result<T, CliError>;

/// File name written inside the `mps factor` output directory.
pub const MPS_FILE: &str = "chain.mps";

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn finish(mut file: File, path: &Path, text: &str) -> CliResult<()> {
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

pub fn sat_count(path: &Path, oracle: bool) -> CliResult<String> {
    let f = parse_dimacs(&read(path)?)?;
    let mut out = line("count", count_sat(&f)?);
    if oracle {
        out += &line("bruteforce", count_sat_bruteforce(&f));
    }
    Ok(out)
}

pub fn coloring(path: &Path, oracle: bool, planar: bool) -> CliResult<String> {
    let g = parse_edgelist(&read(path)?)?.with_planarity(planar);
    let k = count_colorings_epsilon(&g)?;
    if !g.planarity_asserted() {
        eprintln!("warning: planarity not asserted; K is a signed sum over colorings");
    }
    let mut out = line("K", k);
    if oracle {
        out += &line("bruteforce", count_colorings_bruteforce(&g)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BasisChoice {
    Pauli,
    Elem,
}

pub fn channel_convert(
    from: RepKind,
    to: RepKind,
    input: &Path,
    output: &Path,
    basis: Option<BasisChoice>,
) -> CliResult<String> {
    let ch = read_chx(&read(input)?)?;
    if ch.kind() != from {
        return Err(CliError::usage(format!("{} holds a {} channel, not {from}", input.display(), ch.kind())));
    }
    if basis.is_some() && to != RepKind::Chi {
        return Err(CliError::usage("--basis applies only with --to chi"));
    }
    let (d_in, d_out) = (ch.d_in(), ch.d_out());
    let basis = match basis {
        None => None,
        Some(BasisChoice::Elem) => Some(OperatorBasis::elementary(d_out, d_in)),
        Some(BasisChoice::Pauli) => {
            let n = d_in.trailing_zeros() as usize;
            if d_in != d_out || !d_in.is_power_of_two() || d_in == 1 {
                return Err(CliError::usage(format!("Pauli basis needs equal qubit dimensions, got {d_in} -> {d_out}")));
            }
            Some(OperatorBasis::pauli(n))
        }
    };
    let file = create(output)?;
    let converted = ch.convert(to, basis.as_ref())?;
    let mut out = line("rep", to);
    out += &line("d_in", d_in);
    out += &line("d_out", d_out);
    if to == RepKind::Kraus {
        let (ops, clipped) = ch.to_kraus()?;
        out += &line("kraus_ops", ops.len());
        out += &line("clipped", sig12(clipped));
    }
    finish(file, output, &write_chx(&converted))?;
    Ok(out)
}

pub fn channel_check(input: &Path, tol: f64) -> CliResult<String> {
    let ch = read_chx(&read(input)?)?;
    let mut out = String::new();
    for p in Property::ALL {
        out += &line(p.name(), ch.check_tol(p, tol)?.holds);
    }
    Ok(out)
}

fn read_state(path: &Path) -> CliResult<Tensor> {
    Ok(read_tntx(&read(path)?)?.as_ket())
}

pub fn mps_factor_cmd(input: &Path, out_dir: &Path, truncate: Option<usize>) -> CliResult<String> {
    let psi = read_state(input)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let target: PathBuf = out_dir.join(MPS_FILE);
    let file = create(&target)?;
    let mut m = mps_factor(&psi)?;
    let mut out = line("sites", m.len());
    if let Some(r) = truncate {
        if r == 0 {
            return Err(CliError::usage("--truncate needs a rank of at least 1"));
        }
        // refactor after each cut so the next one is cut on a canonical chain
        for cut in 0..m.len().saturating_sub(1) {
            let kept = truncate_bond(&m, cut, r)?.0;
            m = mps_factor(&mps_contract(&kept)?)?;
        }
    }
    for (k, d) in m.bond_dims().iter().enumerate() {
        out += &line(&format!("bond_{k}"), d);
    }
    if truncate.is_some() {
        let approx = mps_contract(&m)?;
        let err = psi.sub(&approx)?.norm();
        out += &line("truncation_error", sig12(err));
    }
    finish(file, &target, &write_mps(&m))?;
    Ok(out)
}

pub fn invariants_cmd(input: &Path, cut: usize, tol: f64) -> CliResult<String> {
    let psi = read_state(input)?;
    let n = psi.order();
    if cut == 0 || cut >= n {
        return Err(CliError::usage(format!("--cut must lie in 1..{n} for a {n}-leg state")));
    }
    let dims = psi.dims();
    let a: usize = dims[..cut].iter().product();
    let b: usize = dims[cut..].iter().product();
    let bip = Tensor::new(vec![Leg::down(a), Leg::down(b)], psi.data().to_vec())?;
    let mut out = line("J1", sig12(j1(&psi)));
    out += &line("J2", sig12(j2(&bip)?));
    if a == 2 && b == 2 {
        let k = k1(&bip)?;
        out += &line("K1", complex(k.re, k.im));
    } else {
        eprintln!("note: K1 is defined for two-qubit bipartitions only; skipped");
    }
    let left: Vec<usize> = (0..cut).collect();
    let s = schmidt(&psi, &left)?;
    out += &line("entropy", sig12(entropy(&s.sigma, true)?));
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    out += &line("chi", s.sigma.iter().filter(|&&x| x > tol * smax).count());
    Ok(out)
}

fn density_from(t: &Tensor) -> CliResult<DMatrix<C64>> {
    if t.is_operator_form() && t.legs().iter().any(|l| l.orient == tnq_tensor::Orientation::Up) {
        return Ok(t.to_dmatrix()?);
    }
    let v = DMatrix::from_column_slice(t.len(), 1, t.data());
    let norm2 = v.norm_squared();
    if norm2 == 0.0 {
        return Err(CliError::numeric("state vector is zero"));
    }
    Ok(&v * v.adjoint() / C64::new(norm2, 0.0))
}

pub fn fidelity_cmd(input: &Path, state: Option<&Path>) -> CliResult<String> {
    let ch = read_chx(&read(input)?)?;
    let rho = match state {
        Some(p) => Some(density_from(&read_tntx(&read(p)?)?)?),
        None => None,
    };
    let square = ch.d_in() == ch.d_out();
    if !square && rho.is_none() {
        return Err(CliError::usage("average gate fidelity needs d_in = d_out"));
    }
    let mut out = String::new();
    if square {
        out += &line("F_avg", sig12(avg_gate_fidelity(&ch)?));
    }
    if let Some(rho) = rho {
        out += &line("F_e", sig12(entanglement_fidelity(&ch, &rho)?));
    }
    Ok(out)
}
