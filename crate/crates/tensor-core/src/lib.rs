//! Dense complex tensors with oriented legs.
//!
//! A leg is either `Up` (a bra/input index) or `Down` (a ket/output index).
//! Data is row-major with the leftmost leg varying slowest. Operators keep
//! their output (`Down`) legs before their input (`Up`) legs, so the data of
//! an operator is exactly its matrix with rows = outputs.

mod error;
pub mod linalg;
mod ops;
mod tensor;
pub mod tntx;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use error::{TensorError, TensorResult};
pub use num_complex::Complex64 as C64;
pub use ops::*;
pub use tensor::{Leg, Orientation, Tensor};

/// Default absolute comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Singular values below `ZERO_THRESHOLD * sigma_max` count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;
pub const DEFAULT_SIZE_CAP: usize = 1 << 26;

static SIZE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_CAP);

/// Maximum number of entries any single tensor may hold.
pub fn size_cap() -> usize {
    SIZE_CAP.load(Ordering::Relaxed)
}

pub fn set_size_cap(cap: usize) {
    SIZE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Entry count for `dims`, or a size-cap error naming the shape.
pub fn checked_size(dims: &[usize]) -> TensorResult<usize> {
    let cap = size_cap();
    let mut n: usize = 1;
    for &d in dims {
        if d == 0 {
            return Err(TensorError::ZeroDim);
        }
        n = match n.checked_mul(d) {
            Some(v) if v <= cap => v,
            _ => {
                return Err(TensorError::SizeCap {
                    shape: dims.to_vec(),
                    cap,
                })
            }
        };
    }
    Ok(n)
}

#[cfg(test)]
pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
