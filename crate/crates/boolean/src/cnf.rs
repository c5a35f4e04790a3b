use std::fmt::Write;

use crate::{BoolError, BoolResult, BooleanFunction};

/// Conjunction of clauses over signed 1-based literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i64>>) -> BoolResult<Self> {
        for c in &clauses {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > n_vars {
                    return Err(BoolError::Literal { line: 0, literal: lit, n_vars });
                }
            }
        }
        Ok(CnfFormula { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// `x[i]` is the value of variable `i + 1`.
    pub fn eval(&self, x: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| x[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Expands the formula into its full truth table.
    pub fn to_function(&self) -> BoolResult<BooleanFunction> {
        BooleanFunction::from_fn(self.n_vars, |x| self.eval(x))
    }
}

/// Reads DIMACS CNF. A `%` line ends the clause section, as in SATLIB files.
pub fn parse_dimacs(text: &str) -> BoolResult<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(BoolError::Header { line: line_no, msg: "second header".into() });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| BoolError::Header { line: line_no, msg: msg.into() };
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad("expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2].parse().map_err(|_| bad("variable count is not a number"))?;
            let m = parts[3].parse().map_err(|_| bad("clause count is not a number"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(BoolError::Header { line: line_no, msg: "clause before header".into() });
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| BoolError::Syntax { line: line_no, msg: format!("`{tok}` is not a literal") })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n {
                return Err(BoolError::Literal { line: line_no, literal: lit, n_vars: n });
            } else {
                current.push(lit);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(BoolError::Header { line: 0, msg: "missing `p cnf` header".into() });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(BoolError::ClauseCount { expected: m, found: clauses.len() });
    }
    Ok(CnfFormula { n_vars: n, clauses })
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.n_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Exhaustive model count, sharded over threads in fixed-size blocks.
pub fn count_sat_bruteforce(f: &CnfFormula) -> u64 {
    let n = f.n_vars;
    // clause masks over assignment bits: variable i+1 is bit n-1-i
    let masks: Vec<(u64, u64)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u64, 0u64), |(pos, neg), &l| {
                let bit = 1u64 << (n - l.unsigned_abs() as usize);
                if l > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    let total: u64 = 1u64.checked_shl(n as u32).expect("too many variables to enumerate");
    let sat = |x: u64| masks.iter().all(|&(pos, neg)| x & pos != 0 || !x & neg != 0);
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(16) as u64;
    if total < 1 << 16 || threads == 1 {
        return (0..total).filter(|&x| sat(x)).count() as u64;
    }
    let chunk = total.div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let sat = &sat;
                s.spawn(move || {
                    let lo = t * chunk;
                    let hi = (lo + chunk).min(total);
                    (lo..hi).filter(|&x| sat(x)).count() as u64
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    })
}
