use std::fmt;
use std::ops::Mul;

use tnq_tensor::{kron, Tensor, C64};

use crate::catalogue::{pauli_i, pauli_x, pauli_y, pauli_z};
use crate::{GateError, GateResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Tensor {
        match self {
            Pauli::I => pauli_i(),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }

    fn index(self) -> u8 {
        self as u8
    }

    /// `self * other = i^k * letter`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// `i^phase` times a tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    letters: Vec<Pauli>,
}

impl PauliString {
    /// `phase` counts powers of `i`, taken mod 4.
    pub fn new(phase: u8, letters: Vec<Pauli>) -> Self {
        PauliString { phase: phase % 4, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(0, vec![Pauli::I; n])
    }

    /// Parses strings like `XZ`, `-YY`, `+iXI`, `-iZ`.
    pub fn parse(s: &str) -> GateResult<Self> {
        let err = || GateError::PauliParse(s.to_string());
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase += 1;
            rest = r;
        }
        let letters = rest
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(err()),
            })
            .collect::<GateResult<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(err());
        }
        Ok(PauliString::new(phase, letters))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn phase(&self) -> C64 {
        [C64::new(1., 0.), C64::new(0., 1.), C64::new(-1., 0.), C64::new(0., -1.)][self.phase as usize]
    }

    pub fn negate(&self) -> Self {
        PauliString::new(self.phase + 2, self.letters.clone())
    }

    pub fn try_mul(&self, other: &PauliString) -> GateResult<PauliString> {
        if self.len() != other.len() {
            return Err(GateError::Shape(format!("Pauli strings of length {} and {}", self.len(), other.len())));
        }
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase += k;
                p
            })
            .collect();
        Ok(PauliString::new(phase, letters))
    }

    /// Whether the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Operator on `n` qubits, first letter on the slowest index.
    pub fn to_tensor(&self) -> Tensor {
        let mut it = self.letters.iter();
        let first = it.next().map(|p| p.matrix()).unwrap_or_else(|| Tensor::scalar(C64::new(1., 0.)));
        let t = it.fold(first, |acc, p| kron(&acc, &p.matrix()).expect("qubit operators"));
        t.scale(self.phase())
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    /// Panics on length mismatch; see [`PauliString::try_mul`].
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("Pauli strings of equal length")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for p in &self.letters {
            write!(f, "{}", ["I", "X", "Y", "Z"][p.index() as usize])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tnq_tensor::compose;

    #[test]
    fn parse_and_display() {
        for s in ["+XZ", "-YY", "+iXI", "-iZ"] {
            assert_eq!(PauliString::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(PauliString::parse("XX").unwrap().to_string(), "+XX");
        assert!(PauliString::parse("XQ").is_err());
        assert!(PauliString::parse("-").is_err());
    }

    #[test]
    fn single_letter_products() {
        let p = |s| PauliString::parse(s).unwrap();
        assert_eq!(&p("X") * &p("Y"), p("iZ"));
        assert_eq!(&p("Y") * &p("X"), p("-iZ"));
        assert_eq!(&p("Z") * &p("X"), p("iY"));
        assert_eq!(&p("iX") * &p("iX"), p("-I"));
    }

    #[test]
    fn tensor_homomorphism_exhaustive_two_qubits() {
        let all: Vec<PauliString> = (0..16)
            .map(|k| {
                let l = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
                PauliString::new(k as u8 % 4, vec![l[k % 4], l[k / 4]])
            })
            .collect();
        for a in &all {
            for b in &all {
                let lhs = compose(&a.to_tensor(), &b.to_tensor()).unwrap();
                assert!(lhs.approx_eq(&(a * b).to_tensor(), 1e-14));
                let sq = a * a;
                assert!(sq.phase_power() % 2 == 0);
            }
        }
    }
}
