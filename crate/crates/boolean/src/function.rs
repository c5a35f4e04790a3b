use std::fmt::Write;

use crate::{BoolError, BoolResult};

/// Truth table of `f: {0,1}^n -> {0,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n_vars: usize,
    truth: Vec<bool>,
}

/// Bit of variable `i` (0-based, `x_{i+1}`) inside a basis index.
pub fn var_bit(i: usize, n: usize) -> usize {
    1 << (n - 1 - i)
}

/// Largest arity accepted by truth-table constructors.
pub const MAX_VARS: usize = 26;

impl BooleanFunction {
    pub fn new(n_vars: usize, truth: Vec<bool>) -> BoolResult<Self> {
        if n_vars > MAX_VARS {
            return Err(BoolError::Truth(format!("{n_vars} variables exceed the cap of {MAX_VARS}")));
        }
        if truth.len() != 1 << n_vars {
            return Err(BoolError::Truth(format!("{} entries for {n_vars} variables", truth.len())));
        }
        Ok(BooleanFunction { n_vars, truth })
    }

    /// Builds the table by evaluating `f` on every assignment `(x1, .., xn)`.
    pub fn from_fn(n_vars: usize, mut f: impl FnMut(&[bool]) -> bool) -> BoolResult<Self> {
        if n_vars > MAX_VARS {
            return Err(BoolError::Truth(format!("{n_vars} variables exceed the cap of {MAX_VARS}")));
        }
        let mut x = vec![false; n_vars];
        let truth = (0..1usize << n_vars)
            .map(|idx| {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = idx & var_bit(i, n_vars) != 0;
                }
                f(&x)
            })
            .collect();
        Ok(BooleanFunction { n_vars, truth })
    }

    pub fn constant(n_vars: usize, value: bool) -> BoolResult<Self> {
        BooleanFunction::new(n_vars, vec![value; 1 << n_vars])
    }

    /// Hex string read as an integer whose bit `idx` is `f(idx)`; the first
    /// character holds the most significant bits.
    pub fn from_hex(n_vars: usize, hex: &str) -> BoolResult<Self> {
        let size = 1usize << n_vars.min(MAX_VARS);
        let digits: Vec<u32> = hex
            .trim()
            .trim_start_matches("0x")
            .chars()
            .filter(|c| *c != '_')
            .map(|c| c.to_digit(16).ok_or_else(|| BoolError::Truth(format!("`{c}` is not a hex digit"))))
            .collect::<BoolResult<_>>()?;
        let mut truth = vec![false; size];
        for (pos, d) in digits.iter().rev().enumerate() {
            for b in 0..4 {
                if d >> b & 1 == 1 {
                    let idx = pos * 4 + b;
                    if idx >= size {
                        return Err(BoolError::Truth(format!("hex value has bits beyond {size} entries")));
                    }
                    truth[idx] = true;
                }
            }
        }
        BooleanFunction::new(n_vars, truth)
    }

    pub fn to_hex(&self) -> String {
        let digits = self.truth.len().div_ceil(4);
        let mut out = String::with_capacity(digits);
        for pos in (0..digits).rev() {
            let mut d = 0u32;
            for b in 0..4 {
                if self.truth.get(pos * 4 + b).copied().unwrap_or(false) {
                    d |= 1 << b;
                }
            }
            write!(out, "{d:x}").unwrap();
        }
        out
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    pub fn at(&self, idx: usize) -> bool {
        self.truth[idx]
    }

    pub fn eval(&self, x: &[bool]) -> BoolResult<bool> {
        if x.len() != self.n_vars {
            return Err(BoolError::Arity(format!("{} values for {} variables", x.len(), self.n_vars)));
        }
        let idx = x.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| var_bit(i, self.n_vars)).sum::<usize>();
        Ok(self.truth[idx])
    }

    pub fn popcount(&self) -> u64 {
        self.truth.iter().filter(|&&b| b).count() as u64
    }

    pub fn not(&self) -> Self {
        BooleanFunction { n_vars: self.n_vars, truth: self.truth.iter().map(|b| !b).collect() }
    }
}

/// Positive-polarity Reed-Muller coefficients: entry `m` is the coefficient
/// of the monomial whose variables are the set bits of `m`.
pub fn anf(f: &BooleanFunction) -> Vec<bool> {
    let mut a = f.truth.clone();
    let size = a.len();
    let mut bit = 1;
    while bit < size {
        for idx in 0..size {
            if idx & bit != 0 {
                a[idx] ^= a[idx ^ bit];
            }
        }
        bit <<= 1;
    }
    a
}

/// Evaluates ANF coefficients back into a truth table (the transform is an involution).
pub fn anf_to_function(n_vars: usize, coeffs: &[bool]) -> BoolResult<BooleanFunction> {
    let f = BooleanFunction::new(n_vars, coeffs.to_vec())?;
    BooleanFunction::new(n_vars, anf(&f))
}

fn monomial(m: usize, n: usize) -> String {
    if m == 0 {
        return "1".into();
    }
    (0..n).filter(|&i| m & var_bit(i, n) != 0).map(|i| format!("x{}", i + 1)).collect()
}

fn monomial_order(n: usize) -> Vec<usize> {
    // by degree, then by variable order
    let mut ms: Vec<usize> = (0..1usize << n).collect();
    ms.sort_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m)));
    ms
}

/// Renders ANF coefficients as `1 ^ x1 ^ x1x2`; the zero function prints `0`.
pub fn format_anf(n_vars: usize, coeffs: &[bool]) -> String {
    let terms: Vec<String> = monomial_order(n_vars).into_iter().filter(|&m| coeffs[m]).map(|m| monomial(m, n_vars)).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ^ ")
    }
}

/// Positive Davio split on variable `i` (0-based): returns `(f|x_i=0, f|x_i=0 ^ f|x_i=1)`
/// as functions of the remaining variables in their original order.
pub fn davio(f: &BooleanFunction, i: usize) -> BoolResult<(BooleanFunction, BooleanFunction)> {
    let n = f.n_vars;
    if i >= n {
        return Err(BoolError::VarIndex { index: i, n_vars: n });
    }
    let bit = var_bit(i, n);
    let low = bit - 1;
    let mut f0 = Vec::with_capacity(1 << (n - 1));
    let mut df = Vec::with_capacity(1 << (n - 1));
    for r in 0..1usize << (n - 1) {
        // re-insert a zero at the position of x_i
        let idx = ((r & !low) << 1) | (r & low);
        f0.push(f.truth[idx]);
        df.push(f.truth[idx] ^ f.truth[idx | bit]);
    }
    Ok((BooleanFunction::new(n - 1, f0)?, BooleanFunction::new(n - 1, df)?))
}

/// Inverse of [`davio`]: `f = f0 ^ x_i df`.
pub fn davio_combine(i: usize, f0: &BooleanFunction, df: &BooleanFunction) -> BoolResult<BooleanFunction> {
    let m = f0.n_vars;
    if df.n_vars != m {
        return Err(BoolError::Arity("cofactors of different arity".into()));
    }
    if i > m {
        return Err(BoolError::VarIndex { index: i, n_vars: m + 1 });
    }
    BooleanFunction::from_fn(m + 1, |x| {
        let rest: Vec<bool> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &b)| b).collect();
        f0.eval(&rest).unwrap() ^ (x[i] && df.eval(&rest).unwrap())
    })
}

/// Real multilinear polynomial agreeing with `f` on `{0,1}^n`, indexed like [`anf`].
pub fn multilinear(f: &BooleanFunction) -> Vec<f64> {
    let vals: Vec<f64> = f.truth.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    crate::pseudo_boolean_coeffs(&vals)
}

/// Evaluates multilinear coefficients at a real point.
pub fn eval_multilinear(coeffs: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| c * (0..n).filter(|&i| m & var_bit(i, n) != 0).map(|i| x[i]).product::<f64>())
        .sum()
}

pub fn format_multilinear(n_vars: usize, coeffs: &[f64]) -> String {
    let mut out = String::new();
    for m in monomial_order(n_vars) {
        let c = coeffs[m];
        if c == 0.0 {
            continue;
        }
        let mag = c.abs();
        let body = match (m, mag == 1.0) {
            (0, _) => format!("{mag}"),
            (_, true) => monomial(m, n_vars),
            _ => format!("{mag}{}", monomial(m, n_vars)),
        };
        match (out.is_empty(), c < 0.0) {
            (true, false) => out.push_str(&body),
            (true, true) => write!(out, "-{body}").unwrap(),
            (false, false) => write!(out, " + {body}").unwrap(),
            (false, true) => write!(out, " - {body}").unwrap(),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w3() -> BooleanFunction {
        BooleanFunction::from_fn(3, |x| x.iter().filter(|&&b| b).count() == 1).unwrap()
    }

    fn ghz3() -> BooleanFunction {
        BooleanFunction::from_fn(3, |x| x.iter().all(|&b| b) || x.iter().all(|&b| !b)).unwrap()
    }

    #[test]
    fn anf_of_w_and_ghz() {
        assert_eq!(format_anf(3, &anf(&w3())), "x1 ^ x2 ^ x3 ^ x1x2x3");
        assert_eq!(format_anf(3, &anf(&ghz3())), "1 ^ x1 ^ x2 ^ x3 ^ x1x2 ^ x1x3 ^ x2x3");
        let zero = BooleanFunction::constant(3, false).unwrap();
        assert!(anf(&zero).iter().all(|&b| !b));
        assert_eq!(format_anf(3, &anf(&zero)), "0");
    }

    #[test]
    fn multilinear_of_w_and_ghz() {
        assert_eq!(
            format_multilinear(3, &multilinear(&w3())),
            "x1 + x2 + x3 - 2x1x2 - 2x1x3 - 2x2x3 + 3x1x2x3"
        );
        assert_eq!(format_multilinear(3, &multilinear(&ghz3())), "1 - x1 - x2 - x3 + x1x2 + x1x3 + x2x3");
    }

    #[test]
    fn hex_round_trip() {
        let and = BooleanFunction::from_fn(2, |x| x[0] && x[1]).unwrap();
        assert_eq!(and.to_hex(), "8");
        assert_eq!(BooleanFunction::from_hex(2, "8").unwrap(), and);
        assert_eq!(w3().to_hex(), "16");
        assert_eq!(BooleanFunction::from_hex(3, "0x16").unwrap(), w3());
        assert!(BooleanFunction::from_hex(2, "1f").is_err());
        assert!(BooleanFunction::from_hex(2, "g").is_err());
    }

    #[test]
    fn davio_errors_and_shape() {
        assert!(davio(&w3(), 3).is_err());
        let (f0, df) = davio(&w3(), 0).unwrap();
        // W with x1 = 0 is XOR-like "exactly one of x2, x3"
        assert_eq!(f0.truth(), &[false, true, true, false]);
        assert_eq!(df.truth(), &[true, true, true, false]);
    }
}
