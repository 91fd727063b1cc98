//! Hamiltonians of the 2+1 Dirac oscillator in natural units (ħ = mc² = 1,
//! ω = ξ) and their exact spectra.
//!
//! The relativistic Hamiltonian is the anti-Jaynes-Cummings form
//!
//! ```text
//! H = g σ⁺ a_l† + g* σ⁻ a_l + δ σ_z,    g = 2i√ξ,  δ = 1
//! ```
//!
//! It closes on the two-dimensional subspaces
//! `span{|n_l⟩|↑⟩, |n_l − 1⟩|↓⟩}` (with `|0⟩|↑⟩` an uncoupled singlet), where
//! it reads `σ_z − η σ_y` with `η = 2√(ξ n_l)`.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::fockspace::{
    AngularMomentum, BasisLabel, FockSpace, Ladder, OperatorMatrix, Spin, StateVector, C64,
};
use crate::linalg::{sigma_y, sigma_z, HermitianEigen};

/// Relativistic parameter ξ = ħω/mc² together with the basis cutoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    xi: f64,
    space: FockSpace,
}

impl ModelParams {
    /// `xi` must be finite and non-negative; `xi = 0` switches the coupling off.
    pub fn new(xi: f64, cutoff_r: usize, cutoff_l: usize) -> Result<Self> {
        if !xi.is_finite() || xi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "xi must be finite and non-negative, got {xi}"
            )));
        }
        Ok(Self {
            xi,
            space: FockSpace::new(cutoff_r, cutoff_l)?,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    /// Oscillator frequency ω; equals ξ in units of mc²/ħ.
    pub fn omega(&self) -> f64 {
        self.xi
    }

    /// Detuning δ = mc².
    pub fn detuning(&self) -> f64 {
        1.0
    }

    /// Spin-orbit coupling g = 2i√ξ.
    pub fn coupling(&self) -> C64 {
        C64::new(0.0, 2.0 * self.xi.sqrt())
    }

    /// `|g|² = 4ξ`, formed without the square root.
    pub fn coupling_sqr(&self) -> f64 {
        4.0 * self.xi
    }
}

/// `E_{n_l} = √(1 + 4ξn_l)`.
pub fn level_energy(xi: f64, n_l: usize) -> f64 {
    (1.0 + 4.0 * xi * n_l as f64).sqrt()
}

/// `η_{n_l} = 2√(ξ n_l)`, formed as `|g|√n_l` like the matrix elements of
/// [`ajc_hamiltonian`].
pub fn eta(xi: f64, n_l: usize) -> f64 {
    2.0 * xi.sqrt() * (n_l as f64).sqrt()
}

/// Anti-Jaynes-Cummings Hamiltonian on the truncated space.
pub fn ajc_hamiltonian(p: &ModelParams) -> OperatorMatrix {
    let g = p.coupling();
    let delta = p.detuning();
    p.space.build_operator(true, |b| {
        let mut out = vec![(b, C64::from(delta * b.spin.sigma_z()))];
        match b.spin {
            // g σ⁺ a_l† : |n⟩|↓⟩ → g√(n+1) |n+1⟩|↑⟩
            Spin::Down => out.push((
                BasisLabel::new(b.n_r, b.n_l + 1, Spin::Up),
                g * ((b.n_l + 1) as f64).sqrt(),
            )),
            // g* σ⁻ a_l : |n⟩|↑⟩ → g*√n |n−1⟩|↓⟩
            Spin::Up if b.n_l > 0 => out.push((
                BasisLabel::new(b.n_r, b.n_l - 1, Spin::Down),
                g.conj() * (b.n_l as f64).sqrt(),
            )),
            Spin::Up => {}
        }
        out
    })
}

/// `i^k`, exact.
fn quarter_turn(k: i32) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::ONE,
        1 => C64::I,
        2 => -C64::ONE,
        _ => -C64::I,
    }
}

/// Single-mode product `A A'` (`A'` acts first) on `levels` Fock states.
/// Entries are evaluated as `√(c·c')` from the integer ladder counts, so
/// diagonal strings such as `a†a` come out as exact integers.
fn boson_product(levels: usize, first: Ladder, second: Ladder) -> DMatrix<C64> {
    let step = |kind: Ladder, n: usize| -> Option<(usize, usize)> {
        match kind {
            Ladder::Annihilate => n.checked_sub(1).map(|m| (m, n)),
            Ladder::Create => (n + 1 < levels).then_some((n + 1, n + 1)),
        }
    };
    let mut m = DMatrix::zeros(levels, levels);
    for n in 0..levels {
        if let Some((mid, c1)) = step(second, n) {
            if let Some((out, c2)) = step(first, mid) {
                m[(out, n)] = C64::from(((c1 * c2) as f64).sqrt());
            }
        }
    }
    m
}

/// Second-order quasi-degenerate effective Hamiltonian.
///
/// For each spin sector σ with bare energy `E_σ = δσ_z`,
///
/// ```text
/// H_eff^σ = E_σ + Σ_{μμ'} ⟨χ_σ| λ_μ B_μ R_σ λ_μ' B_μ' |χ_σ⟩ A_μ A_μ'
/// R_σ     = Σ_{χ ≠ σ} |χ⟩⟨χ| / (E_σ − E_χ)
/// ```
///
/// with the perturbation split as `(λ, B, A) ∈ {(g, σ⁺, a_l†), (g*, σ⁻, a_l)}`.
/// The spin matrix elements are evaluated on the two-dimensional spinor space
/// and the boson products on a mode space padded by one level, so that
/// `a_l a_l†` keeps its value `n_l + 1` at the cutoff. Both couplings have
/// modulus `|g|` and phase `i^{±1}`, so `λ_μ λ_μ'` is formed as `|g|² i^{k+k'}`.
pub fn effective_nr_hamiltonian(p: &ModelParams) -> OperatorMatrix {
    let cutoff = p.space.cutoff_l();
    let padded = cutoff + 2;
    let g_sq = p.coupling_sqr();
    debug_assert!((p.coupling() - C64::I * g_sq.sqrt()).norm() <= 1e-15 * (1.0 + g_sq));
    let delta = p.detuning();

    let raise = Matrix2::new(C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO);
    let lower = raise.adjoint();
    let terms: [(i32, Matrix2<C64>, Ladder); 2] =
        [(1, raise, Ladder::Create), (-1, lower, Ladder::Annihilate)];

    let bare = |s: Spin| delta * s.sigma_z();
    let spinor = |s: Spin| match s {
        Spin::Up => nalgebra::Vector2::new(C64::ONE, C64::ZERO),
        Spin::Down => nalgebra::Vector2::new(C64::ZERO, C64::ONE),
    };

    let mut sector_modes = Vec::with_capacity(2);
    for s in [Spin::Up, Spin::Down] {
        let other = s.flipped();
        let other_vec = spinor(other);
        let resolvent = other_vec * other_vec.adjoint() / C64::from(bare(s) - bare(other));
        let chi = spinor(s);
        let mut mode = DMatrix::<C64>::identity(padded, padded) * C64::from(bare(s));
        for (k, b, a_mu) in &terms {
            for (k_p, b_p, a_mu_p) in &terms {
                let spin_elem = (chi.adjoint() * (b * resolvent * b_p) * chi)[(0, 0)];
                let weight = quarter_turn(k + k_p) * g_sq * spin_elem;
                if weight != C64::ZERO {
                    mode += boson_product(padded, *a_mu, *a_mu_p) * weight;
                }
            }
        }
        sector_modes.push(mode);
    }

    p.space.build_operator(true, |b| {
        let mode = match b.spin {
            Spin::Up => &sector_modes[0],
            Spin::Down => &sector_modes[1],
        };
        (0..=cutoff)
            .filter_map(|row| {
                let v = mode[(row, b.n_l)];
                (v != C64::ZERO).then_some((BasisLabel { n_l: row, ..b }, v))
            })
            .collect()
    })
}

/// Two-dimensional isotropic oscillator `ω(a_r†a_r + a_l†a_l + 1)`.
pub fn harmonic_oscillator_2d(p: &ModelParams) -> OperatorMatrix {
    let s = p.space;
    (&(&s.number_right() + &s.number_left()) + &s.identity()).scaled(p.omega())
}

fn spin_projected(op: &OperatorMatrix, space: FockSpace, spin: Spin) -> OperatorMatrix {
    let mut m = op.matrix().clone();
    for (i, label) in space.labels().enumerate() {
        if label.spin != spin {
            m.row_mut(i).fill(C64::ZERO);
            m.column_mut(i).fill(C64::ZERO);
        }
    }
    OperatorMatrix::general(m)
}

/// Non-relativistic Hamiltonian from the Klein-Gordon reduction:
///
/// ```text
/// H↑ =  mc² + H_ho − ħω − ωL_z
/// H↓ = −mc² − (H_ho + ħω − ωL_z)
/// ```
///
/// The oscillator terms are combined in units of ħω, where every operator is
/// integer-valued, and scaled by ω once.
pub fn appendix_a_hamiltonian(p: &ModelParams) -> OperatorMatrix {
    let s = p.space;
    let w = p.omega();
    let h_ho_units = &(&s.number_right() + &s.number_left()) + &s.identity();
    let lz = s.angular_momentum(AngularMomentum::Lz);
    let id = s.identity();
    let rest = id.scaled(p.detuning());

    let upper = &rest + &(&(&h_ho_units - &id) - &lz).scaled(w);
    let lower = (&rest + &(&(&h_ho_units + &id) - &lz).scaled(w)).scaled(-1.0);
    let m = spin_projected(&upper, s, Spin::Up).into_matrix()
        + spin_projected(&lower, s, Spin::Down).into_matrix();
    OperatorMatrix::new(m, true).expect("diagonal construction is hermitian")
}

/// One row of [`exact_spectrum`]: the analytic level `±E_{n_l}` and the
/// closest eigenvalues of the truncated AJC matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    pub n_l: usize,
    pub analytic: f64,
    pub numeric_pos: f64,
    pub numeric_neg: f64,
    /// `max(|E⁺_num − E|, |E⁻_num + E|) / E`
    pub rel_gap: f64,
}

/// Diagonalizes the truncated AJC Hamiltonian and matches `±√(1 + 4ξn_l)` for
/// `n_l = 0..=n_max`.
pub fn exact_spectrum(p: &ModelParams, n_max: usize) -> Result<Vec<SpectrumLine>> {
    if n_max > p.space.cutoff_l() {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} exceeds cutoff_l = {}",
            p.space.cutoff_l()
        )));
    }
    let h = ajc_hamiltonian(p);
    let eig = HermitianEigen::new(h.matrix());
    let values: Vec<f64> = eig.values.iter().copied().collect();
    let nearest = |target: f64| {
        values
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .expect("non-empty spectrum")
    };
    Ok((0..=n_max)
        .map(|n_l| {
            let e = level_energy(p.xi, n_l);
            let numeric_pos = nearest(e);
            let numeric_neg = nearest(-e);
            let rel_gap = (numeric_pos - e).abs().max((numeric_neg + e).abs()) / e;
            SpectrumLine {
                n_l,
                analytic: e,
                numeric_pos,
                numeric_neg,
                rel_gap,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub state: StateVector,
}

/// Exact eigenstates for a given number of left quanta.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenstates {
    /// `|0⟩|↑⟩`, energy +mc², uncoupled.
    Singlet(EigenPair),
    /// `(|+E⟩, |−E⟩)` on `span{|n_l⟩|↑⟩, |n_l−1⟩|↓⟩}`.
    Pair(EigenPair, EigenPair),
}

/// `α = √((E+1)/2E)`, `β = √((E−1)/2E)`.
pub fn normalization_constants(energy: f64) -> (f64, f64) {
    (
        ((energy + 1.0) / (2.0 * energy)).sqrt(),
        ((energy - 1.0) / (2.0 * energy)).sqrt(),
    )
}

/// `|+E⟩ = α|n⟩|↑⟩ − iβ|n−1⟩|↓⟩`, `|−E⟩ = β|n⟩|↑⟩ + iα|n−1⟩|↓⟩` in the
/// `n_r = 0` sector.
pub fn exact_eigenstates(p: &ModelParams, n_l: usize) -> Result<Eigenstates> {
    let s = p.space;
    if n_l > s.cutoff_l() {
        return Err(Error::InvalidParameter(format!(
            "n_l = {n_l} exceeds cutoff_l = {}",
            s.cutoff_l()
        )));
    }
    if n_l == 0 {
        return Ok(Eigenstates::Singlet(EigenPair {
            energy: p.detuning(),
            alpha: 1.0,
            beta: 0.0,
            state: s.basis_state(BasisLabel::new(0, 0, Spin::Up))?,
        }));
    }
    let e = level_energy(p.xi, n_l);
    let (alpha, beta) = normalization_constants(e);
    let up = s.index(BasisLabel::new(0, n_l, Spin::Up)).unwrap();
    let down = s.index(BasisLabel::new(0, n_l - 1, Spin::Down)).unwrap();
    let build = |cu: C64, cd: C64| {
        let mut v = nalgebra::DVector::zeros(s.dim());
        v[up] = cu;
        v[down] = cd;
        StateVector::new(s, v)
    };
    let plus = build(C64::from(alpha), C64::new(0.0, -beta))?;
    let minus = build(C64::from(beta), C64::new(0.0, alpha))?;
    Ok(Eigenstates::Pair(
        EigenPair {
            energy: e,
            alpha,
            beta,
            state: plus,
        },
        EigenPair {
            energy: -e,
            alpha,
            beta,
            state: minus,
        },
    ))
}

/// Two-dimensional Hamiltonian on `span{|n_l⟩|↑⟩, |n_l−1⟩|↓⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceBlock {
    pub n_l: usize,
    pub eta: f64,
    pub h: Matrix2<C64>,
}

impl SubspaceBlock {
    /// `√(1 + η²)`, the positive eigenvalue.
    pub fn energy(&self) -> f64 {
        (1.0 + self.eta * self.eta).sqrt()
    }
}

/// `h = mc²(σ_z − η σ_y)`.
pub fn subspace_block(p: &ModelParams, n_l: usize) -> Result<SubspaceBlock> {
    block_for(p.xi, n_l)
}

pub(crate) fn block_for(xi: f64, n_l: usize) -> Result<SubspaceBlock> {
    if n_l == 0 {
        return Err(Error::Singlet);
    }
    let eta = eta(xi, n_l);
    Ok(SubspaceBlock {
        n_l,
        eta,
        h: sigma_z() - sigma_y() * C64::from(eta),
    })
}

/// Restriction of a full-space operator to `span{|n_r, n_l⟩|↑⟩, |n_r, n_l−1⟩|↓⟩}`.
pub fn restrict_to_block(op: &OperatorMatrix, space: FockSpace, n_r: usize, n_l: usize) -> Result<Matrix2<C64>> {
    if n_l == 0 {
        return Err(Error::Singlet);
    }
    let idx = |l: BasisLabel| {
        space
            .index(l)
            .ok_or_else(|| Error::InvalidParameter(format!("{l:?} lies outside the truncated basis")))
    };
    let up = idx(BasisLabel::new(n_r, n_l, Spin::Up))?;
    let down = idx(BasisLabel::new(n_r, n_l - 1, Spin::Down))?;
    let m = op.matrix();
    Ok(Matrix2::new(m[(up, up)], m[(up, down)], m[(down, up)], m[(down, down)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{expectation, max_abs, Ladder, SpinOperator};

    fn params(xi: f64, cr: usize, cl: usize) -> ModelParams {
        ModelParams::new(xi, cr, cl).unwrap()
    }

    #[test]
    fn rejects_bad_xi() {
        assert!(ModelParams::new(-0.1, 0, 4).is_err());
        assert!(ModelParams::new(f64::NAN, 0, 4).is_err());
    }

    #[test]
    fn decoupled_limit_is_sigma_z() {
        let p = params(0.0, 1, 4);
        let h = ajc_hamiltonian(&p);
        let sz = p.space().spin_operator(SpinOperator::SigmaZ);
        assert_eq!(h.max_abs_diff(&sz), 0.0);
    }

    #[test]
    fn ajc_matches_operator_products() {
        let p = params(0.13, 1, 5);
        let s = p.space();
        let g = p.coupling();
        let raise = s.spin_operator(SpinOperator::Raise);
        let lower = s.spin_operator(SpinOperator::Lower);
        let a = s.ladder_left(Ladder::Annihilate);
        let a_dag = s.ladder_left(Ladder::Create);
        let oracle = &(&(&raise * &a_dag).scaled_complex(g) + &(&lower * &a).scaled_complex(g.conj()))
            + &s.spin_operator(SpinOperator::SigmaZ);
        assert!(ajc_hamiltonian(&p).max_abs_diff(&oracle) < 1e-15);
    }

    #[test]
    fn coupling_matrix_element() {
        let xi = 0.2;
        let p = params(xi, 0, 3);
        let s = p.space();
        let h = ajc_hamiltonian(&p);
        let row = s.index(BasisLabel::new(0, 1, Spin::Up)).unwrap();
        let col = s.index(BasisLabel::new(0, 0, Spin::Down)).unwrap();
        let expected = C64::new(0.0, 2.0 * xi.sqrt());
        assert!((h.matrix()[(row, col)] - expected).norm() < 1e-15);
    }

    #[test]
    fn ajc_commutes_with_jz() {
        let p = params(0.3, 2, 6);
        let jz = p.space().angular_momentum(AngularMomentum::Jz);
        let c = ajc_hamiltonian(&p).commutator(&jz);
        assert_eq!(max_abs(c.matrix()), 0.0);
    }

    #[test]
    fn effective_hamiltonian_levels() {
        let p = params(0.1, 0, 6);
        let s = p.space();
        let h = effective_nr_hamiltonian(&p);
        let diag = |l: BasisLabel| {
            let i = s.index(l).unwrap();
            h.matrix()[(i, i)].re
        };
        assert!((diag(BasisLabel::new(0, 0, Spin::Up)) - 1.0).abs() < 1e-15);
        assert!((diag(BasisLabel::new(0, 2, Spin::Up)) - 1.4).abs() < 1e-14);
        assert!((diag(BasisLabel::new(0, 1, Spin::Down)) + 1.4).abs() < 1e-14);
        // a_l a_l† keeps n + 1 at the cutoff
        assert!((diag(BasisLabel::new(0, 6, Spin::Down)) + 1.0 + 2.0 * 0.1 * 7.0).abs() < 1e-14);
        // diagonal
        let mut off = h.matrix().clone();
        off.fill_diagonal(C64::ZERO);
        assert_eq!(max_abs(&off), 0.0);
    }

    #[test]
    fn oscillator_levels() {
        let p = params(0.25, 2, 3);
        let s = p.space();
        let h = harmonic_oscillator_2d(&p);
        let psi = s.basis_state(BasisLabel::new(1, 1, Spin::Down)).unwrap();
        assert!((expectation(&h, &psi).unwrap().re - 3.0 * 0.25).abs() < 1e-15);
    }

    #[test]
    fn appendix_a_ground_level() {
        let p = params(0.1, 0, 3);
        let s = p.space();
        let h = appendix_a_hamiltonian(&p);
        let psi = s.basis_state(BasisLabel::new(0, 0, Spin::Up)).unwrap();
        assert!((expectation(&h, &psi).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let lines = exact_spectrum(&params(0.5, 0, 6), 4).unwrap();
        assert!((lines[4].analytic - 3.0).abs() < 1e-15);
        assert!((lines[0].analytic - 1.0).abs() < 1e-15);
        let lines = exact_spectrum(&params(0.1, 0, 6), 2).unwrap();
        assert!((lines[2].analytic - 1.3416407865).abs() < 1e-10);
        assert!(lines.iter().all(|l| l.rel_gap < 1e-12));
        assert!(exact_spectrum(&params(0.1, 0, 6), 7).is_err());
    }

    #[test]
    fn eigenstates_examples() {
        let p = params(0.1, 0, 4);
        let Eigenstates::Pair(plus, minus) = exact_eigenstates(&p, 2).unwrap() else {
            panic!("expected a pair");
        };
        assert!((plus.alpha - 0.9341724).abs() < 5e-8);
        assert!((plus.beta - 0.3568221).abs() < 5e-8);
        assert!(plus.state.inner(&minus.state).unwrap().norm() < 1e-15);
        assert!(matches!(exact_eigenstates(&p, 0).unwrap(), Eigenstates::Singlet(_)));
        assert!(exact_eigenstates(&p, 5).is_err());

        let tiny = params(1e-12, 0, 4);
        let Eigenstates::Pair(plus, _) = exact_eigenstates(&tiny, 1).unwrap() else {
            panic!("expected a pair");
        };
        assert!((plus.alpha - 1.0).abs() < 1e-11 && plus.beta < 1e-5);
    }

    #[test]
    fn block_examples() {
        let b = subspace_block(&params(0.25, 0, 2), 1).unwrap();
        assert!((b.eta - 1.0).abs() < 1e-15);
        let expected = Matrix2::new(C64::ONE, C64::I, -C64::I, -C64::ONE);
        assert!((b.h - expected).norm() < 1e-15);
        assert!((b.energy() - 2f64.sqrt()).abs() < 1e-15);
        let b0 = subspace_block(&params(0.0, 0, 2), 3).unwrap();
        assert_eq!(b0.h, sigma_z());
        assert_eq!(subspace_block(&params(0.1, 0, 2), 0), Err(Error::Singlet));
    }

    #[test]
    fn nr_energy_gap_is_second_order() {
        for x in [1e-2, 1e-3, 1e-4] {
            let exact = (1.0 + 4.0 * x as f64).sqrt();
            let ratio = (exact - (1.0 + 2.0 * x)).abs() / (2.0 * x * x);
            assert!((ratio - 1.0).abs() < 0.05, "x = {x}: ratio {ratio}");
        }
    }
}
