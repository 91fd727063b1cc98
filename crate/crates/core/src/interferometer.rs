//! Mach-Zehnder factorization of the two-level propagators and the
//! perturbative expansion in `x = ξn_l`.
//!
//! On the block `span{|n_l⟩|↑⟩, |n_l−1⟩|↓⟩}` the propagator is
//!
//! ```text
//! U(t) = e^{−iθσ_x} e^{−iφ(t)σ_z} e^{iθσ_x},   tan 2θ = η,   φ(t) = √(1+η²) t
//!      = cos φ + 2i sin φ [(sin²θ − ½) σ_z + sinθ cosθ σ_y]
//! ```
//!
//! Expanding `sin²θ = (1 − (1+4x)^{−1/2})/2` and `sinθ cosθ = √x (1+4x)^{−1/2}`
//! gives a series in `x^{1/2}`. The coefficients are generated with exact
//! rational arithmetic and stored in the convention of the bracket
//! `sin²θ σ_z − sinθ cosθ σ_y`, so the order-`m` coefficient `c_m` reads
//! `−½, −1, +1, +2, −3, −6, +10, …`. Because the Hamiltonian is
//! `σ_z − ησ_y`, odd terms enter the propagator as `−c_m x^{m/2} σ_y`.

use nalgebra::Matrix2;
use num_rational::Ratio;
use serde::Serialize;

use crate::analytic::AngularMomenta;
use crate::error::{Error, Result};
use crate::fockspace::{BasisLabel, FockSpace, Ladder, OperatorMatrix, Spin, SpinOperator, C64};
use crate::linalg::{sigma_x, sigma_y, sigma_z};
use crate::model::block_for;

pub const MAX_SERIES_ORDER: u32 = 12;

/// `e^{iθσ_x} = [[cos θ, i sin θ], [i sin θ, cos θ]]`.
pub fn beam_splitter(theta: f64) -> Matrix2<C64> {
    let (s, c) = theta.sin_cos();
    Matrix2::identity() * C64::from(c) + sigma_x() * C64::new(0.0, s)
}

/// Beam splitters and dephaser of one two-level block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzFactors {
    pub n_l: usize,
    pub theta: f64,
    /// `√(1 + η²)`.
    pub energy: f64,
    pub bs_in: Matrix2<C64>,
    pub bs_out: Matrix2<C64>,
}

impl MzFactors {
    pub fn phi(&self, t: f64) -> f64 {
        self.energy * t
    }

    /// `e^{−iφ(t)σ_z}`.
    pub fn dephaser(&self, t: f64) -> Matrix2<C64> {
        let phase = C64::from_polar(1.0, -self.phi(t));
        Matrix2::new(phase, C64::ZERO, C64::ZERO, phase.conj())
    }

    /// `bs_out · dephaser(t) · bs_in`.
    pub fn product(&self, t: f64) -> Matrix2<C64> {
        self.bs_out * self.dephaser(t) * self.bs_in
    }
}

pub fn mz_factorize(xi: f64, n_l: usize) -> Result<MzFactors> {
    let block = block_for(xi, n_l)?;
    let theta = 0.5 * block.eta.atan();
    let bs_in = beam_splitter(theta);
    Ok(MzFactors {
        n_l,
        theta,
        energy: block.energy(),
        bs_in,
        bs_out: bs_in.adjoint(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    /// Even order, `σ_z`.
    Stark,
    /// Odd order, `σ_y`.
    Ramsey,
}

/// Order `m` of the expansion: `c_m x^{m/2}` times `σ_z` or `σ_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesTerm {
    pub order: u32,
    pub kind: TermKind,
    pub coefficient: Ratio<i64>,
}

impl SeriesTerm {
    pub fn coefficient_f64(&self) -> f64 {
        *self.coefficient.numer() as f64 / *self.coefficient.denom() as f64
    }

    /// `c_m x^{m/2}`.
    pub fn weight(&self, xi_n: f64) -> f64 {
        self.coefficient_f64() * xi_n.powf(0.5 * self.order as f64)
    }

    /// `σ_z` for even orders, `−σ_y` for odd ones.
    pub fn pauli(&self) -> Matrix2<C64> {
        match self.kind {
            TermKind::Stark => sigma_z(),
            TermKind::Ramsey => -sigma_y(),
        }
    }

    /// `λ_m`: `2i c_{2k} ξ^k` for even orders, `2 c_{2k+1} ξ^{k+½}` for odd ones.
    pub fn coupling(&self, xi: f64) -> C64 {
        let c = self.coefficient_f64() * xi.powf(0.5 * self.order as f64);
        match self.kind {
            TermKind::Stark => C64::new(0.0, 2.0 * c),
            TermKind::Ramsey => C64::from(2.0 * c),
        }
    }

    /// Contribution `2i sin φ · c_m x^{m/2} · pauli()` to the block propagator.
    pub fn block_matrix(&self, xi: f64, n_l: usize, t: f64) -> Matrix2<C64> {
        let phi = (1.0 + 4.0 * xi * n_l as f64).sqrt() * t;
        self.pauli() * C64::new(0.0, 2.0 * phi.sin() * self.weight(xi * n_l as f64))
    }
}

/// Terms of orders `0..=max_order`, from the binomial series of
/// `(1+4x)^{−1/2} = Σ b_k x^k`: `c_{2k} = −b_k/2`, `c_{2k+1} = −b_k`.
pub fn series_coefficients(max_order: u32) -> Result<Vec<SeriesTerm>> {
    if max_order > MAX_SERIES_ORDER {
        return Err(Error::OrderTooLarge(max_order));
    }
    let mut b = Ratio::from_integer(1i64);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for k in 0..=(max_order / 2) {
        let order = 2 * k;
        terms.push(SeriesTerm {
            order,
            kind: TermKind::Stark,
            coefficient: -b / 2,
        });
        if order < max_order {
            terms.push(SeriesTerm {
                order: order + 1,
                kind: TermKind::Ramsey,
                coefficient: -b,
            });
        }
        let k = i64::from(k);
        b = b * Ratio::new(-(2 * k + 1), 2 * (k + 1)) * 4;
    }
    Ok(terms)
}

fn check_convergence(xi: f64, n_l: usize) -> Result<()> {
    if n_l == 0 {
        return Err(Error::Singlet);
    }
    let xi_n = xi * n_l as f64;
    if !(xi_n < 0.25) {
        return Err(Error::OutsideConvergence { xi_n });
    }
    Ok(())
}

/// Partial sum of the block propagator through `x^{max_order/2}`, with the
/// exact phase `φ(t)`.
pub fn perturbative_u(xi: f64, n_l: usize, t: f64, max_order: u32) -> Result<Matrix2<C64>> {
    check_convergence(xi, n_l)?;
    let terms = series_coefficients(max_order)?;
    let phi = (1.0 + 4.0 * xi * n_l as f64).sqrt() * t;
    Ok(terms
        .iter()
        .fold(Matrix2::identity() * C64::from(phi.cos()), |acc, term| {
            acc + term.block_matrix(xi, n_l, t)
        }))
}

/// Angular momenta of `|n_l−1⟩|↓⟩` evolved with [`perturbative_u`] and
/// renormalized (truncated series are not unitary).
pub fn perturbative_zb(xi: f64, n_l: usize, t: f64, max_order: u32) -> Result<AngularMomenta> {
    let u = perturbative_u(xi, n_l, t, max_order)?;
    let up = u[(0, 1)].norm_sqr();
    let down = u[(1, 1)].norm_sqr();
    let norm = up + down;
    let (p_up, p_down) = (up / norm, down / norm);
    let n = n_l as f64;
    let lz = -(n * p_up + (n - 1.0) * p_down);
    let sz = 0.5 * (p_up - p_down);
    Ok(AngularMomenta { lz, sz, jz: lz + sz })
}

/// `|(max − min)/(max + min)|` of a sampled signal.
pub fn visibility(signal: &[f64]) -> f64 {
    let max = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = signal.iter().copied().fold(f64::INFINITY, f64::min);
    ((max - min) / (max + min)).abs()
}

/// `A_k = a_l (a_l†a_l)^k`: `A_k|n_l⟩ = n_l^k √n_l |n_l−1⟩`.
pub fn generalized_ajc_operator(space: FockSpace, k: u32) -> OperatorMatrix {
    if k == 0 {
        return space.ladder_left(Ladder::Annihilate);
    }
    space.build_operator(false, |b| {
        if b.n_l == 0 {
            return vec![];
        }
        let n = b.n_l as f64;
        vec![(
            BasisLabel { n_l: b.n_l - 1, ..b },
            C64::from(n.powi(k as i32) * n.sqrt()),
        )]
    })
}

/// Block index `n` a basis vector belongs to: `n_l` for ↑, `n_l + 1` for ↓.
fn block_of(label: BasisLabel) -> usize {
    match label.spin {
        Spin::Up => label.n_l,
        Spin::Down => label.n_l + 1,
    }
}

/// Order-`order` term of the propagator on the whole truncated space.
///
/// Even `2k`: `λ_{2k} sin φ · diag((a_l†a_l)^k on ↑, −(a_la_l†)^k on ↓)`.
/// Odd `2k+1`: `λ_{2k+1} (σ⁻A_k − σ⁺A_k†) sin φ`.
/// `sin φ` is evaluated on the block of each basis vector.
pub fn full_space_term(space: FockSpace, order: u32, xi: f64, t: f64) -> Result<OperatorMatrix> {
    let term = *series_coefficients(order)?
        .last()
        .expect("series has at least the order-0 term");
    let lambda = term.coupling(xi);
    let sin_phi = space.build_operator(true, |b| {
        let n = block_of(b) as f64;
        vec![(b, C64::from(((1.0 + 4.0 * xi * n).sqrt() * t).sin()))]
    });
    let k = order / 2;
    let structure = match term.kind {
        TermKind::Stark => space.build_operator(true, |b| {
            let w = (block_of(b) as f64).powi(k as i32);
            let sign = b.spin.sigma_z();
            vec![(b, C64::from(sign * w))]
        }),
        TermKind::Ramsey => {
            let a = generalized_ajc_operator(space, k);
            let lower = space.spin_operator(SpinOperator::Lower);
            let raise = space.spin_operator(SpinOperator::Raise);
            &(&lower * &a) - &(&raise * &a.adjoint())
        }
    };
    Ok((&structure * &sin_phi).scaled_complex(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{spectral_norm2, unitarity_defect2};
    use crate::model::{eta, restrict_to_block};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

    /// exp(−iht) by scaling and squaring a Taylor series; independent of any
    /// eigen-decomposition.
    fn expm_series(h: Matrix2<C64>, t: f64) -> Matrix2<C64> {
        let a = h * C64::new(0.0, -t / 1024.0);
        let mut term = Matrix2::<C64>::identity();
        let mut sum = term;
        for k in 1..30 {
            term = term * a / C64::from(k as f64);
            sum += term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn beam_splitter_properties() {
        assert_eq!(beam_splitter(0.0), Matrix2::identity());
        let b = beam_splitter(FRAC_PI_4);
        for z in b.iter() {
            assert!((z.norm_sqr() - 0.5).abs() < 1e-15);
        }
        for th in [-1.3, 0.2, 0.7] {
            let b = beam_splitter(th);
            assert!(unitarity_defect2(&b) < 1e-15);
            assert_eq!(b, b.transpose());
            assert!((b.determinant() - C64::ONE).norm() < 1e-15);
            assert!(spectral_norm2(&(b * beam_splitter(-th) - Matrix2::identity())) < 1e-15);
            let oracle = expm_series(sigma_x(), -th);
            assert!(spectral_norm2(&(b - oracle)) < 1e-12);
        }
    }

    #[test]
    fn factorization_matches_exponential() {
        let f = mz_factorize(0.25, 1).unwrap();
        assert!((f.theta - FRAC_PI_8).abs() < 1e-15);
        assert!((f.phi(1.0) - SQRT_2).abs() < 1e-15);
        assert!(spectral_norm2(&(f.product(0.0) - Matrix2::identity())) < 1e-15);
        for (xi, n, t) in [(0.25, 1, 0.7), (0.1, 3, 5.0), (0.02, 7, 12.3)] {
            let f = mz_factorize(xi, n).unwrap();
            let h = block_for(xi, n).unwrap().h;
            assert!(spectral_norm2(&(f.product(t) - expm_series(h, t))) < 1e-12);
            assert_eq!(f.bs_out, f.bs_in.adjoint());
        }
        let f = mz_factorize(0.0, 4).unwrap();
        assert_eq!(f.theta, 0.0);
        assert_eq!(f.bs_in, Matrix2::identity());
        assert!(spectral_norm2(&(f.product(2.0) - expm_series(sigma_z(), 2.0))) < 1e-14);
        assert_eq!(mz_factorize(0.1, 0), Err(Error::Singlet));
    }

    #[test]
    fn coefficients_are_binomial() {
        let terms = series_coefficients(8).unwrap();
        assert_eq!(terms.len(), 9);
        let expected = [-1i64, 1, 2, -3, -6, 10, 20, -35];
        for (term, &p) in terms[1..].iter().zip(&expected) {
            assert_eq!(term.coefficient, Ratio::from_integer(p));
        }
        assert_eq!(terms[0].coefficient, Ratio::new(-1, 2));
        for t in &terms {
            let expected = if t.order % 2 == 0 { TermKind::Stark } else { TermKind::Ramsey };
            assert_eq!(t.kind, expected);
        }
        // (1+4x)^{-1/2} = Σ (-1)^k C(2k,k) x^k
        let last = series_coefficients(12).unwrap();
        assert_eq!(last[12].coefficient, Ratio::from_integer(-462));
        assert_eq!(last[11].coefficient, Ratio::from_integer(252));
        assert_eq!(series_coefficients(13), Err(Error::OrderTooLarge(13)));
    }

    #[test]
    fn sin_squared_partial_sum() {
        let x = 0.01;
        let terms = series_coefficients(6).unwrap();
        // sin²θ = ½ + Σ_{even m} c_m x^{m/2}
        let through_3: f64 = 0.5 + terms.iter().filter(|t| t.order % 2 == 0 && t.order <= 6)
            .take(4)
            .map(|t| t.weight(x))
            .sum::<f64>();
        let exact = 0.5 * (1.0 - 1.04f64.powf(-0.5));
        assert!((exact - 0.0097097).abs() < 1e-7);
        assert!((through_3 - exact).abs() < 5e-7);
        assert!((through_3 - 0.00971).abs() < 1e-5);
    }

    #[test]
    fn order_zero_is_dephaser() {
        let (xi, n, t) = (0.01, 2, 3.1);
        let u = perturbative_u(xi, n, t, 0).unwrap();
        let f = mz_factorize(xi, n).unwrap();
        assert!(spectral_norm2(&(u - f.dephaser(t))) < 1e-15);
    }

    #[test]
    fn order_one_off_diagonal() {
        let (xi, n, t) = (0.004, 2, 0.9);
        let u = perturbative_u(xi, n, t, 1).unwrap();
        let phi = (1.0 + 4.0 * xi * n as f64).sqrt() * t;
        let e = eta(xi, n) * phi.sin();
        assert!((u[(0, 1)] - C64::from(e)).norm() < 1e-15);
        assert!((u[(1, 0)] + C64::from(e)).norm() < 1e-15);
        let exact = mz_factorize(xi, n).unwrap().product(t);
        assert!(((u[(0, 1)] - exact[(0, 1)]).norm()) < 5.0 * (xi * n as f64).powf(1.5));
    }

    #[test]
    fn series_converges_to_exact() {
        let (xi, n, t) = (0.002, 5, 1.7);
        let exact = mz_factorize(xi, n).unwrap().product(t);
        let mut last = f64::INFINITY;
        for order in 0..=12 {
            let gap = spectral_norm2(&(perturbative_u(xi, n, t, order).unwrap() - exact));
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-9);
    }

    #[test]
    fn convergence_guard() {
        assert!(matches!(perturbative_u(0.05, 5, 1.0, 2), Err(Error::OutsideConvergence { .. })));
        assert!(perturbative_u(0.05, 4, 1.0, 2).is_ok());
        assert_eq!(perturbative_u(0.01, 0, 1.0, 2), Err(Error::Singlet));
    }

    #[test]
    fn generalized_operator_actions() {
        let space = FockSpace::new(1, 5).unwrap();
        let a0 = generalized_ajc_operator(space, 0);
        assert_eq!(a0.max_abs_diff(&space.ladder_left(Ladder::Annihilate)), 0.0);
        // dense product oracle
        let a = space.ladder_left(Ladder::Annihilate);
        let num = space.number_left();
        let mut oracle = a.clone();
        for k in 1..4 {
            oracle = &oracle * &num;
            assert!(generalized_ajc_operator(space, k).max_abs_diff(&oracle) < 1e-12);
        }
        let a1 = generalized_ajc_operator(space, 1);
        let psi = space.basis_state(BasisLabel::new(0, 3, Spin::Up)).unwrap();
        let out = a1.apply(&psi).unwrap();
        let amp = out.amplitude(BasisLabel::new(0, 2, Spin::Up));
        assert!((amp.re - 3.0f64.sqrt() * 3.0).abs() < 1e-14);
        for k in 0..4 {
            let vac = space.basis_state(BasisLabel::new(1, 0, Spin::Down)).unwrap();
            assert_eq!(generalized_ajc_operator(space, k).apply(&vac).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn full_space_terms_restrict_to_blocks() {
        let space = FockSpace::new(1, 6).unwrap();
        let (xi, t) = (0.05, 1.3);
        for order in 0..=5 {
            let op = full_space_term(space, order, xi, t).unwrap();
            let term = series_coefficients(order).unwrap()[order as usize];
            for n_r in 0..=1 {
                for n in 1..=6 {
                    let r = restrict_to_block(&op, space, n_r, n).unwrap();
                    assert!(spectral_norm2(&(r - term.block_matrix(xi, n, t))) < 1e-13);
                }
            }
        }
        // order-0 term on the singlet |0⟩|↑⟩ reproduces −i sin t
        let op = full_space_term(space, 0, xi, t).unwrap();
        let i = space.index(BasisLabel::new(0, 0, Spin::Up)).unwrap();
        assert!((op.matrix()[(i, i)] - C64::new(0.0, -t.sin())).norm() < 1e-15);
    }

    #[test]
    fn odd_term_is_ajc_form() {
        let space = FockSpace::new(0, 4).unwrap();
        let (xi, t) = (0.03, 0.8);
        let op = full_space_term(space, 1, xi, t).unwrap();
        // λ₁ = 2 c₁ √ξ with c₁ = −1; A_0 = a_l
        let lambda = -2.0 * xi.sqrt();
        for n in 1..=4 {
            let up = space.index(BasisLabel::new(0, n, Spin::Up)).unwrap();
            let down = space.index(BasisLabel::new(0, n - 1, Spin::Down)).unwrap();
            let s = ((1.0 + 4.0 * xi * n as f64).sqrt() * t).sin();
            let w = lambda * (n as f64).sqrt() * s;
            assert!((op.matrix()[(down, up)] - C64::from(w)).norm() < 1e-15);
            assert!((op.matrix()[(up, down)] + C64::from(w)).norm() < 1e-15);
        }
    }

    #[test]
    fn first_order_dynamics_and_visibility() {
        let (xi, n) = (0.005, 2);
        let x = xi * n as f64;
        let period = std::f64::consts::PI / (1.0 + 2.0 * x);
        let mut sz = Vec::new();
        for i in 0..=400 {
            let t = period * i as f64 / 400.0;
            let p = perturbative_zb(xi, n, t, 1).unwrap();
            let a = crate::analytic::zb_first_order(xi, n, t).unwrap();
            assert!((p.sz - a.sz).abs() < 20.0 * x * x);
            assert!((p.jz - (0.5 - n as f64)).abs() < 1e-14);
            sz.push(p.sz);
        }
        let v = visibility(&sz);
        assert!((v / 0.04 - 1.0).abs() < 0.1);
    }

    #[test]
    fn visibility_formula() {
        assert_eq!(visibility(&[1.0, 3.0, 2.0]), 0.5);
        assert!((visibility(&[-0.5, -0.46]) - 0.04 / 0.96).abs() < 1e-15);
    }
}
