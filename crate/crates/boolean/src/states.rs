use tnq_gates::{Pauli, PauliString};
use tnq_tensor::{Leg, Tensor, C64};

use crate::{var_bit, BoolError, BoolResult, BooleanFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateMode {
    /// `sum_x |x>|f(x)>`
    Appended,
    /// `sum_x f(x)|x>`
    Postselected,
}

fn one(b: bool) -> C64 {
    C64::new(if b { 1.0 } else { 0.0 }, 0.0)
}

fn ket_legs(n: usize) -> Vec<Leg> {
    vec![Leg::down(2); n]
}

pub fn boolean_state(f: &BooleanFunction, mode: StateMode) -> BoolResult<Tensor> {
    let n = f.n_vars();
    Ok(match mode {
        StateMode::Postselected => Tensor::new(ket_legs(n), f.truth().iter().map(|&b| one(b)).collect())?,
        StateMode::Appended => {
            let mut data = Vec::with_capacity(2 << n);
            for &b in f.truth() {
                data.push(one(!b));
                data.push(one(b));
            }
            Tensor::new(ket_legs(n + 1), data)?
        }
    })
}

/// `sum_x (c0 ^ c1 x1 ^ .. ^ cn xn)|x>`
pub fn linear_state(c0: bool, c: &[bool]) -> BoolResult<Tensor> {
    let f = linear_function(c0, c)?;
    boolean_state(&f, StateMode::Postselected)
}

pub fn linear_function(c0: bool, c: &[bool]) -> BoolResult<BooleanFunction> {
    BooleanFunction::from_fn(c.len(), |x| x.iter().zip(c).fold(c0, |acc, (&xi, &ci)| acc ^ (xi && ci)))
}

/// `sum_x (-1)^f(x) |x>`
pub fn polarity_state(f: &BooleanFunction) -> BoolResult<Tensor> {
    let data = f.truth().iter().map(|&b| C64::new(if b { -1.0 } else { 1.0 }, 0.0)).collect();
    Ok(Tensor::new(ket_legs(f.n_vars()), data)?)
}

/// `rho = sum f(x) f(y) |x><y|` with the n output legs first.
pub fn boolean_density(f: &BooleanFunction) -> BoolResult<Tensor> {
    let n = f.n_vars();
    let size = 1usize << n;
    let mut legs = ket_legs(n);
    legs.extend(vec![Leg::up(2); n]);
    tnq_tensor::checked_size(&vec![2; 2 * n])?;
    let t = f.truth();
    let data = (0..size * size).map(|k| one(t[k / size] && t[k % size])).collect();
    Ok(Tensor::new(legs, data)?)
}

/// Partial trace of [`boolean_density`] over variable `k` (0-based), summing
/// `f(x) f(y)` with `x_k = y_k` directly on the truth table.
pub fn boolean_partial_trace(f: &BooleanFunction, k: usize) -> BoolResult<Tensor> {
    let n = f.n_vars();
    if k >= n {
        return Err(BoolError::VarIndex { index: k, n_vars: n });
    }
    let m = n - 1;
    let size = 1usize << m;
    let bit = var_bit(k, n);
    let low = bit - 1;
    let widen = |r: usize| ((r & !low) << 1) | (r & low);
    let t = f.truth();
    let mut data = vec![C64::new(0.0, 0.0); size * size];
    for r in 0..size {
        for s in 0..size {
            let (x, y) = (widen(r), widen(s));
            let v = (t[x] && t[y]) as u8 + (t[x | bit] && t[y | bit]) as u8;
            data[r * size + s] = C64::new(v as f64, 0.0);
        }
    }
    let mut legs = ket_legs(m);
    legs.extend(vec![Leg::up(2); m]);
    Ok(Tensor::new(legs, data)?)
}

/// Diagonal operator `sum_x psi_x |x><x|` on the legs of a ket `psi`.
pub fn diagonal_map(psi: &Tensor) -> BoolResult<Tensor> {
    let dims = psi.dims();
    let size = psi.len();
    let mut legs: Vec<Leg> = dims.iter().map(|&d| Leg::down(d)).collect();
    legs.extend(dims.iter().map(|&d| Leg::up(d)));
    tnq_tensor::checked_size(&[size, size])?;
    let mut data = vec![C64::new(0.0, 0.0); size * size];
    for (i, &a) in psi.data().iter().enumerate() {
        data[i * size + i] = a;
    }
    Ok(Tensor::new(legs, data)?)
}

/// Substitutes `s_i = 1 - 2 x_i` into a sum of weighted Z-strings, returning
/// multilinear coefficients indexed like [`crate::multilinear`].
pub fn spin_to_pseudo_boolean(terms: &[(f64, PauliString)], n: usize) -> BoolResult<Vec<f64>> {
    let mut coeffs = vec![0.0; 1 << n];
    for (w, p) in terms {
        if p.len() != n {
            return Err(BoolError::Arity(format!("term `{p}` acts on {} qubits, expected {n}", p.len())));
        }
        if p.letters().iter().any(|l| !matches!(l, Pauli::I | Pauli::Z)) {
            return Err(BoolError::NonDiagonal(p.to_string()));
        }
        let phase = p.phase();
        if phase.im != 0.0 {
            return Err(BoolError::NonDiagonal(p.to_string()));
        }
        let w = w * phase.re;
        let support: usize = p
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Pauli::Z))
            .map(|(i, _)| var_bit(i, n))
            .sum();
        // prod_{i in S} (1 - 2 x_i) = sum_{T subset S} (-2)^|T| x_T
        let mut t = support;
        loop {
            coeffs[t] += w * (-2f64).powi(t.count_ones() as i32);
            if t == 0 {
                break;
            }
            t = (t - 1) & support;
        }
    }
    Ok(coeffs)
}

/// Pseudo-Boolean function on `{0,1}^n` with the given multilinear coefficients,
/// as the amplitudes of a ket.
pub fn pseudo_boolean_state(coeffs: &[f64], n: usize) -> BoolResult<Tensor> {
    if coeffs.len() != 1 << n {
        return Err(BoolError::Arity(format!("{} coefficients for {n} variables", coeffs.len())));
    }
    // the multilinear transform inverted: f(x) = sum_{m subset x} c_m
    let mut vals = coeffs.to_vec();
    let mut bit = 1;
    while bit < vals.len() {
        for idx in 0..vals.len() {
            if idx & bit != 0 {
                vals[idx] += vals[idx ^ bit];
            }
        }
        bit <<= 1;
    }
    Ok(Tensor::new(ket_legs(n), vals.into_iter().map(|v| C64::new(v, 0.0)).collect())?)
}

/// Multilinear coefficients of a real-valued ket, the inverse of [`pseudo_boolean_state`].
pub fn pseudo_boolean_coeffs(values: &[f64]) -> Vec<f64> {
    let mut a = values.to_vec();
    let mut bit = 1;
    while bit < a.len() {
        for idx in 0..a.len() {
            if idx & bit != 0 {
                a[idx] -= a[idx ^ bit];
            }
        }
        bit <<= 1;
    }
    a
}

/// `sum_x (-1)^f(x) i^g(x) k(x) |x>`
pub fn stabilizer_form_state(f: &BooleanFunction, g: &BooleanFunction, k: &BooleanFunction) -> BoolResult<Tensor> {
    let n = f.n_vars();
    if g.n_vars() != n || k.n_vars() != n {
        return Err(BoolError::Arity(format!(
            "functions of {n}, {} and {} variables",
            g.n_vars(),
            k.n_vars()
        )));
    }
    let data = (0..1usize << n)
        .map(|x| {
            if !k.at(x) {
                return C64::new(0.0, 0.0);
            }
            let s = if f.at(x) { -1.0 } else { 1.0 };
            if g.at(x) {
                C64::new(0.0, s)
            } else {
                C64::new(s, 0.0)
            }
        })
        .collect();
    Ok(Tensor::new(ket_legs(n), data)?)
}
