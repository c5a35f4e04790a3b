use tnq_tensor::tntx::{write_complex_block, Tokens};

use crate::{ChanError, ChanResult, Channel, Mat, OperatorBasis, RepKind, Repr};

fn write_mat(out: &mut String, m: &Mat) {
    let rows: Vec<_> = (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| (r, c))).map(|(r, c)| m[(r, c)]).collect();
    write_complex_block(out, &rows, m.ncols());
}

fn read_mat(tok: &mut Tokens<'_>, rows: usize, cols: usize) -> ChanResult<Mat> {
    let data = tok.next_complex_block(rows * cols)?;
    Ok(Mat::from_row_slice(rows, cols, &data))
}

/// Serializes a channel: a `chx 1 <rep> d_in d_out [k|D|d_env]` header, then
/// row-major complex blocks (Kraus operators; the matrix; chi then its basis;
/// the Stinespring operator).
pub fn write_chx(ch: &Channel) -> String {
    let (dx, dy) = (ch.d_in(), ch.d_out());
    let kind = ch.kind();
    let mut out = String::new();
    match ch.repr() {
        Repr::Kraus(ops) => {
            out.push_str(&format!("chx 1 {kind} {dx} {dy} {}\n", ops.len()));
            for (i, k) in ops.iter().enumerate() {
                out.push_str(&format!("# operator {i}\n"));
                write_mat(&mut out, k);
            }
        }
        Repr::Superop(m) | Repr::Choi(m) => {
            out.push_str(&format!("chx 1 {kind} {dx} {dy}\n"));
            write_mat(&mut out, m);
        }
        Repr::Chi { chi, basis } => {
            out.push_str(&format!("chx 1 {kind} {dx} {dy} {}\n", basis.len()));
            write_mat(&mut out, chi);
            for (i, op) in basis.ops().iter().enumerate() {
                out.push_str(&format!("# basis {i}\n"));
                write_mat(&mut out, op);
            }
        }
        Repr::Stinespring { a, d_env } => {
            out.push_str(&format!("chx 1 {kind} {dx} {dy} {d_env}\n"));
            write_mat(&mut out, a);
        }
    }
    out
}

pub fn read_chx(text: &str) -> ChanResult<Channel> {
    let mut tok = Tokens::new(text);
    tok.expect("chx")?;
    tok.expect("1")?;
    let rep = tok.next_token()?;
    let kind: RepKind = rep.parse().map_err(|_| tok.error(format!("unknown representation `{rep}`")))?;
    let dx = tok.next_usize()?;
    let dy = tok.next_usize()?;
    if dx == 0 || dy == 0 {
        return Err(tok.error("dimensions must be positive").into());
    }
    let ch = match kind {
        RepKind::Kraus => {
            let k = tok.next_usize()?;
            let ops = (0..k).map(|_| read_mat(&mut tok, dy, dx)).collect::<ChanResult<_>>()?;
            Channel::kraus(ops)?
        }
        RepKind::Superop => Channel::superop(read_mat(&mut tok, dy * dy, dx * dx)?, dx, dy)?,
        RepKind::Choi => Channel::choi(read_mat(&mut tok, dx * dy, dx * dy)?, dx, dy)?,
        RepKind::Chi => {
            let n = tok.next_usize()?;
            let chi = read_mat(&mut tok, n, n)?;
            let ops = (0..n).map(|_| read_mat(&mut tok, dy, dx)).collect::<ChanResult<_>>()?;
            Channel::chi(chi, OperatorBasis::new(ops)?)?
        }
        RepKind::Stinespring => {
            let de = tok.next_usize()?;
            Channel::stinespring(read_mat(&mut tok, dy * de, dx)?, dx, dy, de)?
        }
    };
    if !tok.is_done() {
        return Err(ChanError::Tensor(tok.error("trailing data after channel")));
    }
    Ok(ch)
}
