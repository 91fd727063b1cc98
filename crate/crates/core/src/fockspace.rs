//! Truncated chiral Fock space ⊗ spinor.
//!
//! Basis vectors are `|n_r, n_l⟩ ⊗ |χ⟩` with `n_r ≤ cutoff_r`, `n_l ≤ cutoff_l`
//! and `χ ∈ {↑, ↓}`. The flat index runs spin fastest, then `n_l`, then `n_r`:
//!
//! ```text
//! index = ((n_r * (cutoff_l + 1)) + n_l) * 2 + spin
//! ```
//!
//! Creation operators are hard-truncated: `a†|cutoff⟩ = 0`. Natural units
//! (ħ = 1, mc² = 1, Δ = 1) are used everywhere.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance for operators flagged as observables.
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Coherent-state truncation tail mass that is accepted.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    /// Eigenvalue of σ_z.
    pub fn sigma_z(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub n_r: usize,
    pub n_l: usize,
    pub spin: Spin,
}

impl BasisLabel {
    pub fn new(n_r: usize, n_l: usize, spin: Spin) -> Self {
        Self { n_r, n_l, spin }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Annihilate,
    Create,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOperator {
    SigmaX,
    SigmaY,
    SigmaZ,
    /// σ⁺ = |↑⟩⟨↓|
    Raise,
    /// σ⁻ = |↓⟩⟨↑|
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularMomentum {
    Lz,
    Jz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Indexing for the truncated two-mode Fock ⊗ spinor space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    cutoff_r: usize,
    cutoff_l: usize,
    dim: usize,
}

impl FockSpace {
    pub fn new(cutoff_r: usize, cutoff_l: usize) -> Result<Self> {
        if cutoff_l < 1 {
            return Err(Error::InvalidCutoff(
                "cutoff_l must be at least 1 so that a_l has a nonzero action".into(),
            ));
        }
        let overflow = || Error::DimensionOverflow { cutoff_r, cutoff_l };
        let dim = cutoff_r
            .checked_add(1)
            .and_then(|r| cutoff_l.checked_add(1).and_then(|l| r.checked_mul(l)))
            .and_then(|modes| modes.checked_mul(2))
            .ok_or_else(overflow)?;
        Ok(Self {
            cutoff_r,
            cutoff_l,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff_r(&self) -> usize {
        self.cutoff_r
    }

    pub fn cutoff_l(&self) -> usize {
        self.cutoff_l
    }

    pub fn contains(&self, label: BasisLabel) -> bool {
        label.n_r <= self.cutoff_r && label.n_l <= self.cutoff_l
    }

    pub fn index(&self, label: BasisLabel) -> Option<usize> {
        self.contains(label)
            .then(|| (label.n_r * (self.cutoff_l + 1) + label.n_l) * 2 + label.spin.offset())
    }

    pub fn label(&self, index: usize) -> Option<BasisLabel> {
        if index >= self.dim {
            return None;
        }
        let spin = if index.is_multiple_of(2) { Spin::Up } else { Spin::Down };
        let mode = index / 2;
        Some(BasisLabel {
            n_r: mode / (self.cutoff_l + 1),
            n_l: mode % (self.cutoff_l + 1),
            spin,
        })
    }

    /// Labels in flat-index order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.dim).map(move |i| self.label(i).expect("index in range"))
    }

    pub fn basis_state(&self, label: BasisLabel) -> Result<StateVector> {
        let idx = self.index(label).ok_or_else(|| {
            Error::InvalidParameter(format!("{label:?} lies outside the truncated basis"))
        })?;
        let mut amplitudes = DVector::zeros(self.dim);
        amplitudes[idx] = ONE;
        StateVector::new(*self, amplitudes)
    }

    /// Builds an operator from its action on basis vectors. `action` returns
    /// the image of a basis vector as a list of (label, amplitude); labels
    /// outside the truncation are dropped.
    pub(crate) fn build_operator<F>(&self, hermitian: bool, action: F) -> OperatorMatrix
    where
        F: Fn(BasisLabel) -> Vec<(BasisLabel, C64)>,
    {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (col, label) in self.labels().enumerate() {
            for (target, amp) in action(label) {
                if let Some(row) = self.index(target) {
                    m[(row, col)] += amp;
                }
            }
        }
        OperatorMatrix {
            matrix: m,
            hermitian,
        }
    }

    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix {
            matrix: DMatrix::identity(self.dim, self.dim),
            hermitian: true,
        }
    }

    /// `a_l` or `a_l†`.
    pub fn ladder_left(&self, kind: Ladder) -> OperatorMatrix {
        self.build_operator(false, |b| match kind {
            Ladder::Annihilate if b.n_l > 0 => vec![(
                BasisLabel { n_l: b.n_l - 1, ..b },
                C64::from((b.n_l as f64).sqrt()),
            )],
            Ladder::Annihilate => vec![],
            Ladder::Create => vec![(
                BasisLabel { n_l: b.n_l + 1, ..b },
                C64::from(((b.n_l + 1) as f64).sqrt()),
            )],
        })
    }

    /// `a_r` or `a_r†`.
    pub fn ladder_right(&self, kind: Ladder) -> OperatorMatrix {
        self.build_operator(false, |b| match kind {
            Ladder::Annihilate if b.n_r > 0 => vec![(
                BasisLabel { n_r: b.n_r - 1, ..b },
                C64::from((b.n_r as f64).sqrt()),
            )],
            Ladder::Annihilate => vec![],
            Ladder::Create => vec![(
                BasisLabel { n_r: b.n_r + 1, ..b },
                C64::from(((b.n_r + 1) as f64).sqrt()),
            )],
        })
    }

    /// `a_l† a_l`, diagonal.
    pub fn number_left(&self) -> OperatorMatrix {
        self.build_operator(true, |b| vec![(b, C64::from(b.n_l as f64))])
    }

    /// `a_r† a_r`, diagonal.
    pub fn number_right(&self) -> OperatorMatrix {
        self.build_operator(true, |b| vec![(b, C64::from(b.n_r as f64))])
    }

    /// Pauli operator tensored with the identity on both modes.
    pub fn spin_operator(&self, kind: SpinOperator) -> OperatorMatrix {
        let hermitian = matches!(
            kind,
            SpinOperator::SigmaX | SpinOperator::SigmaY | SpinOperator::SigmaZ
        );
        self.build_operator(hermitian, |b| {
            let flip = BasisLabel {
                spin: b.spin.flipped(),
                ..b
            };
            match (kind, b.spin) {
                (SpinOperator::SigmaX, _) => vec![(flip, ONE)],
                // σ_y|↑⟩ = i|↓⟩, σ_y|↓⟩ = -i|↑⟩
                (SpinOperator::SigmaY, Spin::Up) => vec![(flip, I)],
                (SpinOperator::SigmaY, Spin::Down) => vec![(flip, -I)],
                (SpinOperator::SigmaZ, s) => vec![(b, C64::from(s.sigma_z()))],
                (SpinOperator::Raise, Spin::Down) => vec![(flip, ONE)],
                (SpinOperator::Lower, Spin::Up) => vec![(flip, ONE)],
                (SpinOperator::Raise | SpinOperator::Lower, _) => vec![],
            }
        })
    }

    /// Spin angular momentum `S_i = σ_i / 2` (ħ = 1).
    pub fn spin_component(&self, axis: SpinOperator) -> OperatorMatrix {
        self.spin_operator(axis).scaled(0.5)
    }

    /// `L_z = a_r†a_r − a_l†a_l` or `J_z = L_z + S_z`, both diagonal.
    pub fn angular_momentum(&self, kind: AngularMomentum) -> OperatorMatrix {
        self.build_operator(true, |b| {
            let lz = b.n_r as f64 - b.n_l as f64;
            let value = match kind {
                AngularMomentum::Lz => lz,
                AngularMomentum::Jz => lz + 0.5 * b.spin.sigma_z(),
            };
            vec![(b, C64::from(value))]
        })
    }

    /// `x = (a_r + a_r† + a_l + a_l†)/2`, `y = i(a_r − a_r† − a_l + a_l†)/2`.
    pub fn position(&self, axis: Axis) -> OperatorMatrix {
        let ar = self.ladder_right(Ladder::Annihilate);
        let ar_dag = self.ladder_right(Ladder::Create);
        let al = self.ladder_left(Ladder::Annihilate);
        let al_dag = self.ladder_left(Ladder::Create);
        let m = match axis {
            Axis::X => (ar.matrix + ar_dag.matrix + al.matrix + al_dag.matrix) * C64::from(0.5),
            Axis::Y => (ar.matrix - ar_dag.matrix - al.matrix + al_dag.matrix) * C64::new(0.0, 0.5),
        };
        OperatorMatrix {
            matrix: m,
            hermitian: true,
        }
    }

    /// Left-handed coherent state `|z⟩_l ⊗ |n_r = 0⟩ ⊗ |↑⟩`, truncated at
    /// `cutoff_l` and renormalized.
    pub fn coherent_left(&self, z: C64) -> Result<StateVector> {
        self.coherent_left_spinor(z, ONE, ZERO)
    }

    /// `|z⟩_l ⊗ |n_r = 0⟩ ⊗ (α|↑⟩ + β|↓⟩)`.
    pub fn coherent_left_spinor(&self, z: C64, alpha: C64, beta: C64) -> Result<StateVector> {
        let amps = coherent_amplitudes(z, self.cutoff_l)?;
        let mut amplitudes = DVector::zeros(self.dim);
        for (n, c) in amps.iter().enumerate() {
            amplitudes[self.index(BasisLabel::new(0, n, Spin::Up)).unwrap()] = c * alpha;
            amplitudes[self.index(BasisLabel::new(0, n, Spin::Down)).unwrap()] = c * beta;
        }
        let mut psi = StateVector::new(*self, amplitudes)?;
        psi.normalize()?;
        Ok(psi)
    }
}

/// Poisson tail mass `P(N > cutoff)` for mean `mean`.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    // ln p_n accumulated from n = 0
    let mut ln_p = -mean;
    for k in 1..=cutoff + 1 {
        ln_p += ln_mean - (k as f64).ln();
    }
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let p = ln_p.exp();
        tail += p;
        // terms decrease monotonically once n > mean
        if (n as f64) > mean && p < tail * 1e-17 {
            break;
        }
        n += 1;
        ln_p += ln_mean - (n as f64).ln();
        if n > cutoff + 100_000 {
            break;
        }
    }
    tail
}

/// Smallest left cutoff admitting a coherent state with mean number `mean`.
pub fn required_coherent_cutoff(mean: f64) -> usize {
    let mut c = ((4.0 * mean).ceil() as usize).max(1);
    while poisson_tail(mean, c) >= COHERENT_TAIL_TOL {
        c += 1;
    }
    c
}

/// Unnormalized truncated amplitudes `e^{-|z|²/2} z^n / √n!` for
/// `n = 0..=cutoff`. Enforces `|z|² ≤ cutoff/4` and a tail mass below
/// [`COHERENT_TAIL_TOL`].
pub fn coherent_amplitudes(z: C64, cutoff: usize) -> Result<Vec<C64>> {
    let mean = z.norm_sqr();
    if !mean.is_finite() {
        return Err(Error::InvalidParameter("coherent amplitude must be finite".into()));
    }
    if mean > cutoff as f64 / 4.0 || poisson_tail(mean, cutoff) >= COHERENT_TAIL_TOL {
        return Err(Error::CoherentTail {
            mean_number: mean,
            cutoff_l: cutoff,
            required_cutoff: required_coherent_cutoff(mean),
        });
    }
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = C64::from((-mean / 2.0).exp());
    amps.push(c);
    for n in 1..=cutoff {
        c = c * z / (n as f64).sqrt();
        amps.push(c);
    }
    Ok(amps)
}

/// Dense complex operator on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wraps a square matrix. With `hermitian = true` the matrix must satisfy
    /// `max|A − A†| < 1e-13`.
    pub fn new(matrix: DMatrix<C64>, hermitian: bool) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let op = Self { matrix, hermitian };
        if hermitian {
            let deviation = op.hermitian_deviation();
            if deviation >= HERMITIAN_TOL {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(op)
    }

    /// Wraps a matrix without a hermiticity claim.
    pub fn general(matrix: DMatrix<C64>) -> Self {
        Self {
            matrix,
            hermitian: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::from(factor),
            hermitian: self.hermitian,
        }
    }

    pub fn scaled_complex(&self, factor: C64) -> Self {
        Self {
            matrix: &self.matrix * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self::general(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }

    /// Elementwise `max|A − B|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_dim(psi.dim())?;
        Ok(StateVector {
            space: psi.space,
            amplitudes: &self.matrix * &psi.amplitudes,
        })
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            matrix: &self.matrix + &rhs.matrix,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            matrix: &self.matrix - &rhs.matrix,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::general(&self.matrix * &rhs.matrix)
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Amplitude vector over a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: FockSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(space: FockSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("state amplitudes must be finite".into()));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: BasisLabel) -> C64 {
        self.space
            .index(label)
            .map(|i| self.amplitudes[i])
            .unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        self.amplitudes /= C64::from(n);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    pub(crate) fn from_parts(space: FockSpace, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(space.dim(), amplitudes.len());
        Self { space, amplitudes }
    }
}

/// `⟨ψ|A|ψ⟩`. For hermitian-flagged operators the imaginary residue is
/// dropped.
pub fn expectation(op: &OperatorMatrix, psi: &StateVector) -> Result<C64> {
    op.check_dim(psi.dim())?;
    let value = psi.amplitudes.dotc(&(&op.matrix * &psi.amplitudes));
    if op.hermitian {
        Ok(C64::from(value.re))
    } else {
        Ok(value)
    }
}
