//! TNTX v1 text format.
//!
//! ```text
//! tntx 1
//! legs 2
//! 2 2
//! d u
//! 1 0  0 0
//! 0 0  1 0
//! ```
//!
//! Entries are `re im` pairs in row-major order. `#` starts a comment that
//! runs to the end of the line.

use crate::{Leg, Orientation, Tensor, TensorError, TensorResult, C64};

/// Whitespace tokenizer that tracks line numbers and skips `#` comments.
pub struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            items.extend(body.split_whitespace().map(|w| (no + 1, w)));
        }
        Tokens { items, pos: 0 }
    }

    fn line(&self) -> usize {
        // line of the most recently consumed token
        self.items
            .get(self.pos.saturating_sub(1))
            .or_else(|| self.items.last())
            .map(|x| x.0)
            .unwrap_or(1)
    }

    pub fn error(&self, msg: impl Into<String>) -> TensorError {
        TensorError::Parse { line: self.line(), msg: msg.into() }
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.items.len()
    }

    pub fn next_token(&mut self) -> TensorResult<&'a str> {
        let tok = self.items.get(self.pos).ok_or_else(|| self.error("unexpected end of input"))?.1;
        self.pos += 1;
        Ok(tok)
    }

    pub fn expect(&mut self, word: &str) -> TensorResult<()> {
        let tok = self.next_token()?;
        if tok != word {
            return Err(self.error(format!("expected `{word}`, found `{tok}`")));
        }
        Ok(())
    }

    pub fn next_usize(&mut self) -> TensorResult<usize> {
        let tok = self.next_token()?;
        tok.parse()
            .map_err(|_| self.error(format!("expected a non-negative integer, found `{tok}`")))
    }

    pub fn next_f64(&mut self) -> TensorResult<f64> {
        let tok = self.next_token()?;
        match tok.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.error(format!("expected a finite number, found `{tok}`"))),
        }
    }

    pub fn next_complex_block(&mut self, n: usize) -> TensorResult<Vec<C64>> {
        (0..n)
            .map(|_| {
                let re = self.next_f64()?;
                let im = self.next_f64()?;
                Ok(C64::new(re, im))
            })
            .collect()
    }
}

/// Reads one tensor from the token stream (used by formats that embed TNTX blocks).
pub fn read_tensor(tok: &mut Tokens<'_>) -> TensorResult<Tensor> {
    tok.expect("tntx")?;
    tok.expect("1")?;
    tok.expect("legs")?;
    let r = tok.next_usize()?;
    let dims = (0..r).map(|_| tok.next_usize()).collect::<TensorResult<Vec<_>>>()?;
    if dims.contains(&0) {
        return Err(tok.error("leg dimension must be positive"));
    }
    let mut legs = Vec::with_capacity(r);
    for &d in &dims {
        let o = match tok.next_token()? {
            "u" => Orientation::Up,
            "d" => Orientation::Down,
            other => return Err(tok.error(format!("orientation must be `u` or `d`, found `{other}`"))),
        };
        legs.push(Leg { dim: d, orient: o });
    }
    let n = crate::checked_size(&dims)?;
    let data = tok.next_complex_block(n)?;
    Tensor::new(legs, data)
}

pub fn read_tntx(text: &str) -> TensorResult<Tensor> {
    let mut tok = Tokens::new(text);
    let t = read_tensor(&mut tok)?;
    if !tok.is_done() {
        return Err(tok.error("trailing data after tensor"));
    }
    Ok(t)
}

/// Shortest round-tripping decimal form.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn write_complex_block(out: &mut String, data: &[C64], per_line: usize) {
    for row in data.chunks(per_line.max(1)) {
        let line: Vec<String> = row.iter().map(|z| format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))).collect();
        out.push_str(&line.join("  "));
        out.push('\n');
    }
}

pub fn write_tntx(t: &Tensor) -> String {
    let mut out = String::from("tntx 1\n");
    out.push_str(&format!("legs {}\n", t.order()));
    let dims: Vec<String> = t.dims().iter().map(|d| d.to_string()).collect();
    out.push_str(&dims.join(" "));
    out.push('\n');
    let ors: Vec<&str> = t
        .legs()
        .iter()
        .map(|l| if l.orient == Orientation::Up { "u" } else { "d" })
        .collect();
    out.push_str(&ors.join(" "));
    out.push('\n');
    let per_line = t.legs().last().map(|l| l.dim).unwrap_or(1);
    write_complex_block(&mut out, t.data(), per_line);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exact() {
        let t = Tensor::operator(
            &[2],
            &[3],
            vec![
                C64::new(0.1, -2.5e-17),
                C64::new(1.0 / 3.0, 0.0),
                C64::new(-7.0, 1e300),
                C64::new(0.0, 0.0),
                C64::new(f64::MIN_POSITIVE, 4.0),
                C64::new(2f64.sqrt(), -0.0),
            ],
        )
        .unwrap();
        let back = read_tntx(&write_tntx(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn scalar_tensor() {
        let t = Tensor::scalar(C64::new(1.5, -1.0));
        assert_eq!(read_tntx(&write_tntx(&t)).unwrap(), t);
    }

    #[test]
    fn comments_are_skipped() {
        let txt = "# header\ntntx 1\nlegs 1 # one leg\n2\nd\n1 0\n# gap\n0 1\n";
        let t = read_tntx(txt).unwrap();
        assert_eq!(t.data()[1], C64::new(0.0, 1.0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let txt = "tntx 1\nlegs 1\n2\nx\n1 0 0 0\n";
        match read_tntx(txt) {
            Err(TensorError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_tntx("tntx 1\nlegs 1\n2\nd\n1 0\n"), Err(TensorError::Parse { .. })));
        assert!(matches!(read_tntx("tntx 2\n"), Err(TensorError::Parse { line: 1, .. })));
    }
}
