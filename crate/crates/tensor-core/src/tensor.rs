use nalgebra::DMatrix;

use crate::{checked_size, TensorError, TensorResult, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// bra / input index
    Up,
    /// ket / output index
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Leg {
    pub dim: usize,
    pub orient: Orientation,
}

impl Leg {
    pub fn up(dim: usize) -> Self {
        Leg { dim, orient: Orientation::Up }
    }

    pub fn down(dim: usize) -> Self {
        Leg { dim, orient: Orientation::Down }
    }
}

/// Dense complex tensor. Immutable once built; every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    legs: Vec<Leg>,
    data: Vec<C64>,
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Advance a row-major multi-index; returns false after the last index.
pub(crate) fn next_index(idx: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

impl Tensor {
    pub fn new(legs: Vec<Leg>, data: Vec<C64>) -> TensorResult<Self> {
        let dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
        let n = checked_size(&dims)?;
        if data.len() != n {
            return Err(TensorError::DataLength { expected: n, got: data.len() });
        }
        if let Some(p) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TensorError::NonFinite(p));
        }
        Ok(Tensor { legs, data })
    }

    /// Internal constructor for data already known to be consistent.
    pub(crate) fn raw(legs: Vec<Leg>, data: Vec<C64>) -> Self {
        debug_assert_eq!(legs.iter().map(|l| l.dim).product::<usize>(), data.len());
        Tensor { legs, data }
    }

    pub fn zeros(legs: Vec<Leg>) -> TensorResult<Self> {
        let dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
        let n = checked_size(&dims)?;
        Ok(Tensor { legs, data: vec![C64::new(0.0, 0.0); n] })
    }

    pub fn from_fn(legs: Vec<Leg>, mut f: impl FnMut(&[usize]) -> C64) -> TensorResult<Self> {
        let dims: Vec<usize> = legs.iter().map(|l| l.dim).collect();
        let n = checked_size(&dims)?;
        let mut data = Vec::with_capacity(n);
        let mut idx = vec![0; dims.len()];
        loop {
            data.push(f(&idx));
            if !next_index(&mut idx, &dims) {
                break;
            }
        }
        Tensor::new(legs, data)
    }

    pub fn scalar(z: C64) -> Self {
        Tensor { legs: Vec::new(), data: vec![z] }
    }

    /// Column vector with a single `Down` leg.
    pub fn vector(data: Vec<C64>) -> TensorResult<Self> {
        let n = data.len();
        Tensor::new(vec![Leg::down(n)], data)
    }

    /// Computational basis ket `|idx>` with all legs `Down`.
    pub fn ket(dims: &[usize], idx: &[usize]) -> TensorResult<Self> {
        if dims.len() != idx.len() {
            return Err(TensorError::LengthMismatch(dims.len(), idx.len()));
        }
        let mut t = Tensor::zeros(dims.iter().map(|&d| Leg::down(d)).collect())?;
        let mut off = 0;
        for (&d, &i) in dims.iter().zip(idx) {
            if i >= d {
                return Err(TensorError::Shape(format!("basis index {i} out of range for dimension {d}")));
            }
            off = off * d + i;
        }
        t.data[off] = C64::new(1.0, 0.0);
        Ok(t)
    }

    /// `rows x cols` matrix as a tensor with legs `[Down(rows), Up(cols)]`.
    pub fn matrix(rows: usize, cols: usize, data: Vec<C64>) -> TensorResult<Self> {
        Tensor::new(vec![Leg::down(rows), Leg::up(cols)], data)
    }

    /// Operator with the given output dims (`Down`) followed by input dims (`Up`).
    pub fn operator(out_dims: &[usize], in_dims: &[usize], data: Vec<C64>) -> TensorResult<Self> {
        let legs = out_dims
            .iter()
            .map(|&d| Leg::down(d))
            .chain(in_dims.iter().map(|&d| Leg::up(d)))
            .collect();
        Tensor::new(legs, data)
    }

    pub fn identity(d: usize) -> TensorResult<Self> {
        Tensor::from_fn(vec![Leg::down(d), Leg::up(d)], |ix| {
            if ix[0] == ix[1] {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> TensorResult<Self> {
        let (r, c) = m.shape();
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(m[(i, j)]);
            }
        }
        Tensor::matrix(r, c, data)
    }

    /// Operator with the given leg structure built from a matrix whose rows
    /// run over the output legs and columns over the input legs.
    pub fn operator_from_dmatrix(m: &DMatrix<C64>, out_dims: &[usize], in_dims: &[usize]) -> TensorResult<Self> {
        Tensor::from_dmatrix(m)?.reshape_operator(out_dims, in_dims)
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn dims(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.dim).collect()
    }

    pub fn order(&self) -> usize {
        self.legs.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        let mut off = 0;
        for (l, &i) in self.legs.iter().zip(idx) {
            off = off * l.dim + i;
        }
        self.data[off]
    }

    /// Value of a rank-0 tensor (or the single entry of any one-entry tensor).
    pub fn scalar_value(&self) -> Option<C64> {
        (self.data.len() == 1).then(|| self.data[0])
    }

    /// Same data, new legs. Total size must agree.
    pub fn reshape(&self, legs: Vec<Leg>) -> TensorResult<Tensor> {
        let n: usize = legs.iter().map(|l| l.dim).product();
        if n != self.data.len() {
            return Err(TensorError::DataLength { expected: self.data.len(), got: n });
        }
        Ok(Tensor { legs, data: self.data.clone() })
    }

    pub fn reshape_operator(&self, out_dims: &[usize], in_dims: &[usize]) -> TensorResult<Tensor> {
        let legs = out_dims
            .iter()
            .map(|&d| Leg::down(d))
            .chain(in_dims.iter().map(|&d| Leg::up(d)))
            .collect();
        self.reshape(legs)
    }

    /// Reinterpret as a ket: every leg `Down`, dims unchanged.
    pub fn as_ket(&self) -> Tensor {
        Tensor {
            legs: self.legs.iter().map(|l| Leg::down(l.dim)).collect(),
            data: self.data.clone(),
        }
    }

    pub fn with_orientations(&self, orients: &[Orientation]) -> TensorResult<Tensor> {
        if orients.len() != self.legs.len() {
            return Err(TensorError::LengthMismatch(orients.len(), self.legs.len()));
        }
        Ok(Tensor {
            legs: self.legs.iter().zip(orients).map(|(l, &o)| Leg { dim: l.dim, orient: o }).collect(),
            data: self.data.clone(),
        })
    }

    /// True when every `Down` leg precedes every `Up` leg.
    pub fn is_operator_form(&self) -> bool {
        let first_up = self.legs.iter().position(|l| l.orient == Orientation::Up).unwrap_or(self.legs.len());
        self.legs[first_up..].iter().all(|l| l.orient == Orientation::Up)
    }

    /// Matrix view: rows over the `Down` legs, columns over the `Up` legs.
    pub fn to_dmatrix(&self) -> TensorResult<DMatrix<C64>> {
        if !self.is_operator_form() {
            return Err(TensorError::Shape("output legs must precede input legs".into()));
        }
        let rows: usize = self
            .legs
            .iter()
            .filter(|l| l.orient == Orientation::Down)
            .map(|l| l.dim)
            .product();
        let cols = self.data.len() / rows;
        Ok(DMatrix::from_row_slice(rows, cols, &self.data))
    }

    pub fn scale(&self, z: C64) -> Tensor {
        Tensor { legs: self.legs.clone(), data: self.data.iter().map(|x| x * z).collect() }
    }

    fn same_shape(&self, other: &Tensor) -> TensorResult<()> {
        if self.legs != other.legs {
            return Err(TensorError::Shape(format!(
                "legs differ: {:?} vs {:?}",
                self.legs, other.legs
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> TensorResult<Tensor> {
        self.same_shape(other)?;
        Ok(Tensor {
            legs: self.legs.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Tensor) -> TensorResult<Tensor> {
        self.same_shape(other)?;
        Ok(Tensor {
            legs: self.legs.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation; shapes must agree in dims (orientations ignored).
    pub fn max_abs_diff(&self, other: &Tensor) -> TensorResult<f64> {
        if self.dims() != other.dims() {
            return Err(TensorError::Shape(format!(
                "dims differ: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise comparison with identical legs (dims and orientations).
    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        self.legs == other.legs && self.max_abs_diff(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// `<self|other>` over flattened data.
    pub fn inner(&self, other: &Tensor) -> TensorResult<C64> {
        if self.dims() != other.dims() {
            return Err(TensorError::Shape("inner product of differently shaped tensors".into()));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub(crate) fn legs_mut(&mut self) -> &mut Vec<Leg> {
        &mut self.legs
    }
}
