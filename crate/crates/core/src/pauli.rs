//! Exact n-qubit Pauli group arithmetic in the symplectic representation.
//!
//! An operator is `i^k · P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}` where each `P_j` is one
//! of the Hermitian matrices I, X, Y, Z encoded by a bit pair `(x_j, z_j)`:
//! I = (0,0), X = (1,0), Z = (0,1), Y = (1,1). Qubit 0 is the leftmost
//! tensor factor and the most significant bit of a basis index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::sign::Sign;

/// Largest qubit count accepted by [`PauliOperator::dense_matrix`].
pub const MAX_DENSE_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{n} qubits exceeds the dense-matrix limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("cannot parse Pauli string `{0}`")]
    Parse(String),
}

/// A power of `i`: 0 → +1, 1 → +i, 2 → -1, 3 → -i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn as_sign(self) -> Option<Sign> {
        match self.0 {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex<i32> {
        match self.0 {
            0 => Complex::new(1, 0),
            1 => Complex::new(0, 1),
            2 => Complex::new(-1, 0),
            _ => Complex::new(0, -1),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl From<Sign> for Phase {
    fn from(s: Sign) -> Phase {
        if s.is_negative() {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    phase: Phase,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { n, phase: Phase::ONE, x: vec![0; words(n)], z: vec![0; words(n)] }
    }

    /// `phase · letters[0] ⊗ letters[1] ⊗ ...`
    pub fn from_letters(phase: Phase, letters: &[Pauli]) -> Self {
        let mut p = PauliOperator::identity(letters.len());
        p.phase = phase;
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, letter: Pauli) {
        let (x, z) = letter.bits();
        let mask = 1u64 << (q % 64);
        self.x[q / 64] = (self.x[q / 64] & !mask) | if x { mask } else { 0 };
        self.z[q / 64] = (self.z[q / 64] & !mask) | if z { mask } else { 0 };
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Hermitian elements: exactly those with a real phase.
    pub fn is_observable(&self) -> bool {
        self.phase.is_real()
    }

    /// `Some(sign)` when the operator is `±I`.
    pub fn scalar_sign(&self) -> Option<Sign> {
        if self.x.iter().chain(&self.z).all(|&w| w == 0) {
            self.phase.as_sign()
        } else {
            None
        }
    }

    pub fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(x, z)| (x & z).count_ones()).sum()
    }

    pub fn weight(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones()).sum()
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = p.phase * Phase::MINUS_ONE;
        p
    }

    /// Matrix transpose: `Yᵀ = -Y`, the other letters are symmetric.
    pub fn transpose(&self) -> Self {
        if self.y_count() % 2 == 1 {
            self.negated()
        } else {
            self.clone()
        }
    }

    fn check_dim(&self, other: &PauliOperator) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Group product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        self.check_dim(other)?;
        // Phase contribution of each single-qubit product P(x1,z1)·P(x2,z2).
        let mut exponent: i64 = self.phase.0 as i64 + other.phase.0 as i64;
        for q in 0..self.n {
            let (x1, z1) = (self.x_bit(q) as i64, self.z_bit(q) as i64);
            let (x2, z2) = (other.x_bit(q) as i64, other.z_bit(q) as i64);
            exponent += match (x1, z1) {
                (0, 0) => 0,
                (1, 1) => z2 - x2,
                (1, 0) => z2 * (2 * x2 - 1),
                _ => x2 * (1 - 2 * z2),
            };
        }
        Ok(PauliOperator {
            n: self.n,
            phase: Phase(exponent.rem_euclid(4) as u8),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Symplectic form: commute iff the number of anticommuting tensor
    /// factors is even.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        self.check_dim(other)?;
        let anti: u32 = (0..self.x.len())
            .map(|w| ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones())
            .sum();
        Ok(anti.is_multiple_of(2))
    }

    /// Action on a computational basis state: `P|k⟩ = phase · |target⟩`.
    pub fn apply_to_basis(&self, k: usize) -> (usize, Phase) {
        let mut target = k;
        let mut exponent = self.phase.0 as u32 + self.y_count();
        for q in 0..self.n {
            let bit = self.n - 1 - q;
            if self.x_bit(q) {
                target ^= 1 << bit;
            }
            if self.z_bit(q) && (k >> bit) & 1 == 1 {
                exponent += 2;
            }
        }
        (target, Phase::from_exponent(exponent))
    }

    /// Exact `2^n × 2^n` matrix with Gaussian-integer entries.
    pub fn dense_matrix(&self) -> Result<DenseMatrix, PauliError> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(PauliError::TooManyQubits { n: self.n, max: MAX_DENSE_QUBITS });
        }
        let mut m = DenseMatrix::scalar(self.phase.to_complex());
        for q in 0..self.n {
            m = m.kron(&DenseMatrix::letter(self.letter(q)));
        }
        Ok(DenseMatrix { dim: m.dim, entries: m.entries })
    }
}

/// Left-to-right product of a sequence of `n`-qubit operators. The empty
/// product is `+I`.
pub fn product_of<'a, I>(n: usize, seq: I) -> Result<PauliOperator, PauliError>
where
    I: IntoIterator<Item = &'a PauliOperator>,
{
    seq.into_iter().try_fold(PauliOperator::identity(n), |acc, p| acc.multiply(p))
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    /// Optional sign, optional `i`, then letters over `IXYZ`: `"-XZY"`,
    /// `"XX"`, `"+iZ"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PauliError::Parse(s.to_string());
        let (negative, rest) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => (false, s),
        };
        let (imaginary, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let letters: Vec<Pauli> = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        let phase = Phase::from_exponent(2 * negative as u32 + imaginary as u32);
        Ok(PauliOperator::from_letters(phase, &letters))
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Square matrix over the Gaussian integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex<i32>>,
}

impl DenseMatrix {
    fn scalar(c: Complex<i32>) -> Self {
        DenseMatrix { dim: 1, entries: vec![c] }
    }

    fn letter(p: Pauli) -> Self {
        let (o, l, i) = (Complex::new(0, 0), Complex::new(1, 0), Complex::new(0, 1));
        let entries = match p {
            Pauli::I => vec![l, o, o, l],
            Pauli::X => vec![o, l, l, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![l, o, o, -l],
        };
        DenseMatrix { dim: 2, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex::new(0, 0); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = Complex::new(1, 0);
        }
        DenseMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<i32> {
        self.entries[row * self.dim + col]
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * other.dim;
        let mut entries = vec![Complex::new(0, 0); dim * dim];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        entries[(r1 * other.dim + r2) * dim + c1 * other.dim + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        DenseMatrix { dim, entries }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![Complex::new(0, 0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == Complex::new(0, 0) {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * other.get(k, c);
                }
            }
        }
        DenseMatrix { dim: d, entries }
    }

    pub fn conjugate_transpose(&self) -> DenseMatrix {
        let d = self.dim;
        let mut entries = vec![Complex::new(0, 0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.get(r, c).conj();
            }
        }
        DenseMatrix { dim: d, entries }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let d = self.dim;
        let mut entries = vec![Complex::new(0, 0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.get(r, c);
            }
        }
        DenseMatrix { dim: d, entries }
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|c| c.im == 0)
    }
}
