use tnq_tensor::linalg::{condition_number, inverse, reshuffle_col_dims, unvec_col, vec_col};
use tnq_tensor::ZERO_THRESHOLD;

use crate::{compose_superops, library, ChanError, ChanResult, Channel, Mat};

#[derive(Debug, Clone)]
pub struct AaptRecovery {
    /// Recovered Choi matrix of the unknown channel.
    pub choi: Mat,
    /// Recovery superoperator `(S_AS^T)^-1` acting on the ancilla.
    pub recovery: Mat,
    /// Condition number of `S_AS`.
    pub condition: f64,
}

/// `S_AS`, the input state `rho_AS` on `A (x) S` read as a superoperator.
pub fn aapt_state_superop(rho_as: &Mat, d: usize) -> ChanResult<Mat> {
    if rho_as.shape() != (d * d, d * d) {
        return Err(ChanError::Dim(format!("input state is {:?}, expected {0}x{0}", d * d)));
    }
    Ok(reshuffle_col_dims(rho_as, d, d, d, d)?)
}

/// Recovers the Choi matrix from `rho_out = (I (x) E)(rho_as)` by applying
/// the recovery map to the ancilla. Fails when `S_AS` is singular.
pub fn aapt_recover(rho_as: &Mat, rho_out: &Mat, d: usize) -> ChanResult<AaptRecovery> {
    let s_as = aapt_state_superop(rho_as, d)?;
    if rho_out.shape() != (d * d, d * d) {
        return Err(ChanError::Dim(format!("output state is {:?}, expected {0}x{0}", d * d)));
    }
    let condition = condition_number(&s_as)?;
    if !(condition.is_finite() && condition * ZERO_THRESHOLD < 1.0) {
        return Err(ChanError::Singular(condition));
    }
    let recovery = inverse(&s_as.transpose()).map_err(|_| ChanError::Singular(condition))?;
    let joint = compose_superops(&[Channel::superop(recovery.clone(), d, d)?, library::identity(d)])?;
    let out = joint.to_superop()? * vec_col(rho_out);
    let choi = unvec_col(out.as_slice(), d * d, d * d)?;
    Ok(AaptRecovery { choi, recovery, condition })
}
