use std::fmt;
use std::str::FromStr;

use tnq_tensor::linalg::{eigh, kron, partial_trace_first, partial_trace_second, reshuffle_col_dims, svd, unvec_col, vec_col};
use tnq_tensor::{C64, ZERO_THRESHOLD};

use crate::{ChanError, ChanResult, Mat, OperatorBasis, CHECK_TOL};

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    /// `d_out x d_in` operators.
    Kraus(Vec<Mat>),
    /// `d_out^2 x d_in^2`, acting on column-stacked matrices.
    Superop(Mat),
    /// `(d_in d_out)^2`, input factor first.
    Choi(Mat),
    /// Process matrix in an operator basis of `d_out x d_in` operators.
    Chi { chi: Mat, basis: OperatorBasis },
    /// `A = sum_a K_a (x) |a>`, shape `(d_out d_env) x d_in`.
    Stinespring { a: Mat, d_env: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Kraus,
    Superop,
    Choi,
    Chi,
    Stinespring,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [RepKind::Kraus, RepKind::Superop, RepKind::Choi, RepKind::Chi, RepKind::Stinespring];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Kraus => "kraus",
            RepKind::Superop => "superop",
            RepKind::Choi => "choi",
            RepKind::Chi => "chi",
            RepKind::Stinespring => "stinespring",
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepKind {
    type Err = ChanError;

    fn from_str(s: &str) -> ChanResult<Self> {
        RepKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ChanError::Unsupported(format!("representation `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    repr: Repr,
}

fn dim_err(msg: String) -> ChanError {
    ChanError::Dim(msg)
}

impl Channel {
    pub fn kraus(ops: Vec<Mat>) -> ChanResult<Self> {
        let (d_out, d_in) = ops.first().ok_or_else(|| dim_err("no Kraus operators".into()))?.shape();
        if ops.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(dim_err("Kraus operators of different shapes".into()));
        }
        Ok(Channel { d_in, d_out, repr: Repr::Kraus(ops) })
    }

    pub fn superop(s: Mat, d_in: usize, d_out: usize) -> ChanResult<Self> {
        if s.shape() != (d_out * d_out, d_in * d_in) {
            return Err(dim_err(format!("superoperator is {:?}, expected {}x{}", s.shape(), d_out * d_out, d_in * d_in)));
        }
        Ok(Channel { d_in, d_out, repr: Repr::Superop(s) })
    }

    pub fn choi(m: Mat, d_in: usize, d_out: usize) -> ChanResult<Self> {
        let d = d_in * d_out;
        if m.shape() != (d, d) {
            return Err(dim_err(format!("Choi matrix is {:?}, expected {d}x{d}", m.shape())));
        }
        Ok(Channel { d_in, d_out, repr: Repr::Choi(m) })
    }

    pub fn chi(chi: Mat, basis: OperatorBasis) -> ChanResult<Self> {
        let (d_out, d_in) = basis.shape();
        if chi.shape() != (basis.len(), basis.len()) {
            return Err(dim_err(format!("chi matrix is {:?} for a basis of {}", chi.shape(), basis.len())));
        }
        Ok(Channel { d_in, d_out, repr: Repr::Chi { chi, basis } })
    }

    pub fn stinespring(a: Mat, d_in: usize, d_out: usize, d_env: usize) -> ChanResult<Self> {
        if a.shape() != (d_out * d_env, d_in) {
            return Err(dim_err(format!("Stinespring operator is {:?}, expected {}x{d_in}", a.shape(), d_out * d_env)));
        }
        Ok(Channel { d_in, d_out, repr: Repr::Stinespring { a, d_env } })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn kind(&self) -> RepKind {
        match self.repr {
            Repr::Kraus(_) => RepKind::Kraus,
            Repr::Superop(_) => RepKind::Superop,
            Repr::Choi(_) => RepKind::Choi,
            Repr::Chi { .. } => RepKind::Chi,
            Repr::Stinespring { .. } => RepKind::Stinespring,
        }
    }

    /// Evolves `rho` with the formula native to the stored representation.
    pub fn apply(&self, rho: &Mat) -> ChanResult<Mat> {
        let (dx, dy) = (self.d_in, self.d_out);
        if rho.shape() != (dx, dx) {
            return Err(dim_err(format!("input is {:?}, channel expects {dx}x{dx}", rho.shape())));
        }
        Ok(match &self.repr {
            Repr::Kraus(ops) => ops.iter().fold(Mat::zeros(dy, dy), |acc, k| acc + k * rho * k.adjoint()),
            Repr::Superop(s) => unvec_col((s * vec_col(rho)).as_slice(), dy, dy)?,
            Repr::Choi(l) => {
                let lifted = kron(&rho.transpose(), &Mat::identity(dy, dy)) * l;
                partial_trace_first(&lifted, dx, dy)?
            }
            Repr::Chi { chi, basis } => {
                let ops = basis.ops();
                let mut out = Mat::zeros(dy, dy);
                for (a, sa) in ops.iter().enumerate() {
                    let left = sa * rho;
                    for (b, sb) in ops.iter().enumerate() {
                        if chi[(a, b)] != C64::new(0.0, 0.0) {
                            out += &left * sb.adjoint() * chi[(a, b)];
                        }
                    }
                }
                out
            }
            Repr::Stinespring { a, d_env } => partial_trace_second(&(a * rho * a.adjoint()), dy, *d_env)?,
        })
    }

    pub fn to_choi(&self) -> ChanResult<Mat> {
        let (dx, dy) = (self.d_in, self.d_out);
        Ok(match &self.repr {
            Repr::Choi(l) => l.clone(),
            Repr::Kraus(ops) => ops.iter().fold(Mat::zeros(dx * dy, dx * dy), |acc, k| {
                let v = vec_col(k);
                acc + &v * v.adjoint()
            }),
            Repr::Superop(s) => reshuffle_col_dims(s, dy, dy, dx, dx)?,
            Repr::Chi { chi, basis } => {
                let t = basis.transform();
                t.adjoint() * chi * t
            }
            Repr::Stinespring { .. } => {
                let ch = Channel::kraus(self.to_kraus()?.0)?;
                ch.to_choi()?
            }
        })
    }

    /// Kraus operators, plus the magnitude of any negative Choi eigenvalue that
    /// was clipped to zero on the way.
    pub fn to_kraus(&self) -> ChanResult<(Vec<Mat>, f64)> {
        let (dx, dy) = (self.d_in, self.d_out);
        Ok(match &self.repr {
            Repr::Kraus(ops) => (ops.clone(), 0.0),
            Repr::Stinespring { a, d_env } => {
                let ops = (0..*d_env).map(|e| Mat::from_fn(dy, dx, |y, x| a[(y * d_env + e, x)])).collect();
                (ops, 0.0)
            }
            _ => kraus_from_choi(&self.to_choi()?, dx, dy)?,
        })
    }

    pub fn to_superop(&self) -> ChanResult<Mat> {
        let (dx, dy) = (self.d_in, self.d_out);
        Ok(match &self.repr {
            Repr::Superop(s) => s.clone(),
            Repr::Kraus(ops) => ops.iter().fold(Mat::zeros(dy * dy, dx * dx), |acc, k| acc + kron(&k.conjugate(), k)),
            _ => reshuffle_col_dims(&self.to_choi()?, dx, dy, dx, dy)?,
        })
    }

    pub fn to_chi(&self, basis: &OperatorBasis) -> ChanResult<Mat> {
        if basis.shape() != (self.d_out, self.d_in) {
            return Err(ChanError::Basis(format!(
                "basis of {:?} operators for a {}->{} channel",
                basis.shape(),
                self.d_in,
                self.d_out
            )));
        }
        if let Repr::Chi { chi, basis: own } = &self.repr {
            if own == basis {
                return Ok(chi.clone());
            }
        }
        let t = basis.transform();
        Ok(&t * self.to_choi()? * t.adjoint())
    }

    /// `(A, d_env)` with `A = sum_a K_a (x) |a>`.
    pub fn to_stinespring(&self) -> ChanResult<(Mat, usize)> {
        if let Repr::Stinespring { a, d_env } = &self.repr {
            return Ok((a.clone(), *d_env));
        }
        let (ops, _) = self.to_kraus()?;
        let (dx, dy, k) = (self.d_in, self.d_out, ops.len());
        Ok((Mat::from_fn(dy * k, dx, |r, x| ops[r % k][(r / k, x)]), k))
    }

    /// Same channel in another representation. `basis` is used for the chi
    /// target and defaults to [`OperatorBasis::default_for`].
    pub fn convert(&self, target: RepKind, basis: Option<&OperatorBasis>) -> ChanResult<Channel> {
        let (dx, dy) = (self.d_in, self.d_out);
        match target {
            RepKind::Kraus => Channel::kraus(self.to_kraus()?.0),
            RepKind::Superop => Channel::superop(self.to_superop()?, dx, dy),
            RepKind::Choi => Channel::choi(self.to_choi()?, dx, dy),
            RepKind::Chi => {
                let basis = basis.cloned().unwrap_or_else(|| OperatorBasis::default_for(dy, dx));
                Channel::chi(self.to_chi(&basis)?, basis)
            }
            RepKind::Stinespring => {
                let (a, d_env) = self.to_stinespring()?;
                Channel::stinespring(a, dx, dy, d_env)
            }
        }
    }

    pub fn check(&self, property: Property) -> ChanResult<Check> {
        self.check_tol(property, CHECK_TOL)
    }

    pub fn check_tol(&self, property: Property, tol: f64) -> ChanResult<Check> {
        check_choi_tol(&self.to_choi()?, self.d_in, self.d_out, property, tol)
    }
}

/// Canonical Kraus operators from the eigendecomposition of a Choi matrix:
/// `K_k = sqrt(l_k) unvec(v_k)`, so `Tr(K_a^dag K_b) = l_a delta_ab`.
pub fn kraus_from_choi(l: &Mat, d_in: usize, d_out: usize) -> ChanResult<(Vec<Mat>, f64)> {
    let herm = (l + l.adjoint()) * C64::new(0.5, 0.0);
    if (l - &herm).norm() > CHECK_TOL * l.norm().max(1.0) {
        return Err(ChanError::NotCp(f64::NAN));
    }
    let (vals, vecs) = eigh(&herm)?;
    let scale = operator_norm(&herm)?;
    let min = vals.last().copied().unwrap_or(0.0);
    if min < -CHECK_TOL * scale.max(1.0) {
        return Err(ChanError::NotCp(min));
    }
    let clipped = vals.iter().filter(|&&v| v < 0.0).fold(0.0f64, |m, &v| m.max(-v));
    let keep = ZERO_THRESHOLD * vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut ops: Vec<Mat> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > keep && v > 0.0)
        .map(|(k, &v)| {
            let col: Vec<C64> = vecs.column(k).iter().map(|z| z * v.sqrt()).collect();
            unvec_col(&col, d_out, d_in)
        })
        .collect::<Result<_, _>>()?;
    if ops.is_empty() {
        ops.push(Mat::zeros(d_out, d_in));
    }
    Ok((ops, clipped))
}

fn operator_norm(m: &Mat) -> ChanResult<f64> {
    Ok(svd(m)?.sigma.first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Cp,
    Tp,
    Hp,
    Unital,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Cp, Property::Tp, Property::Hp, Property::Unital];

    pub fn name(self) -> &'static str {
        match self {
            Property::Cp => "CP",
            Property::Tp => "TP",
            Property::Hp => "HP",
            Property::Unital => "unital",
        }
    }
}

/// Outcome of a structural check. The witness is the smallest Choi eigenvalue
/// for CP and a Hilbert-Schmidt deviation norm otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub holds: bool,
    pub witness: f64,
}

pub fn check_choi(l: &Mat, d_in: usize, d_out: usize, property: Property) -> ChanResult<Check> {
    check_choi_tol(l, d_in, d_out, property, CHECK_TOL)
}

/// [`check_choi`] with an explicit tolerance.
pub fn check_choi_tol(l: &Mat, d_in: usize, d_out: usize, property: Property, tol: f64) -> ChanResult<Check> {
    Ok(match property {
        Property::Hp => {
            let w = (l - l.adjoint()).norm();
            Check { holds: w <= tol, witness: w }
        }
        Property::Cp => {
            let herm = (l + l.adjoint()) * C64::new(0.5, 0.0);
            let (vals, _) = eigh(&herm)?;
            let min = vals.last().copied().unwrap_or(0.0);
            let hermitian = (l - &herm).norm() <= tol;
            let floor = -tol * operator_norm(l)?.max(1.0);
            Check { holds: hermitian && min >= floor, witness: min }
        }
        Property::Tp => {
            let w = (partial_trace_second(l, d_in, d_out)? - Mat::identity(d_in, d_in)).norm();
            Check { holds: w <= tol, witness: w }
        }
        Property::Unital => {
            let w = (partial_trace_first(l, d_in, d_out)? - Mat::identity(d_out, d_out)).norm();
            Check { holds: w <= tol, witness: w }
        }
    })
}

/// `|| sum K^dag K - I ||`, the Kraus-side trace-preservation deviation.
pub fn kraus_completeness_deviation(ops: &[Mat]) -> f64 {
    let Some(first) = ops.first() else { return f64::INFINITY };
    let d = first.ncols();
    let sum = ops.iter().fold(Mat::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    (sum - Mat::identity(d, d)).norm()
}
