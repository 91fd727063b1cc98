//! Exact unitary evolution and observable time series.
//!
//! Two propagators are provided. [`SpectralPropagator`] diagonalizes any
//! hermitian matrix once and evolves by phases in the eigenbasis.
//! [`AjcPropagator`] exploits the block structure of the anti-Jaynes-Cummings
//! Hamiltonian and applies the closed-form rotation
//! `e^{-iht} = cos(Et) − i sin(Et) h/E` on every two-dimensional subspace,
//! which costs O(dim) per time point.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::{
    coherent_amplitudes, BasisLabel, FockSpace, OperatorMatrix, Spin, StateVector, C64,
    HERMITIAN_TOL,
};
use crate::linalg::HermitianEigen;
use crate::model::{ajc_hamiltonian, block_for, effective_nr_hamiltonian, ModelParams};

/// Allowed deviation of `|ψ0|²` from one on entry.
pub const NORM_TOL: f64 = 1e-10;

/// Uniform sampling `t0, …, t1` with `samples` points (endpoints included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    samples: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, samples: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs finite t1 > t0, got [{t0}, {t1}]"
            )));
        }
        if samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs at least 2 samples, got {samples}"
            )));
        }
        Ok(Self { t0, t1, samples })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        (self.t1 - self.t0) / (self.samples - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.t1
        } else {
            self.t0 + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.time(i)).collect()
    }
}

/// Expectation values at one instant. Angular momenta in units of ħ,
/// positions in units of Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub lz: f64,
    pub sz: f64,
    pub jz: f64,
    pub sx: f64,
    pub x: f64,
    pub y: f64,
    pub norm: f64,
}

/// Computes every tracked observable directly from the amplitudes.
pub fn measure(psi: &StateVector, t: f64) -> ObservableRecord {
    let space = psi.space();
    let amps = psi.amplitudes();
    let mut norm = 0.0;
    let mut lz = 0.0;
    let mut sz = 0.0;
    let mut jz = 0.0;
    let mut spin_coherence = C64::ZERO;
    let mut a_l = C64::ZERO;
    let mut a_r = C64::ZERO;
    for (i, label) in space.labels().enumerate() {
        let c = amps[i];
        let p = c.norm_sqr();
        let l = label.n_r as f64 - label.n_l as f64;
        let s = 0.5 * label.spin.sigma_z();
        norm += p;
        lz += p * l;
        sz += p * s;
        jz += p * (l + s);
        if label.spin == Spin::Up {
            spin_coherence += c.conj() * amps[i + 1];
        }
        if label.n_l > 0 {
            let j = space.index(BasisLabel { n_l: label.n_l - 1, ..label }).unwrap();
            a_l += amps[j].conj() * c * (label.n_l as f64).sqrt();
        }
        if label.n_r > 0 {
            let j = space.index(BasisLabel { n_r: label.n_r - 1, ..label }).unwrap();
            a_r += amps[j].conj() * c * (label.n_r as f64).sqrt();
        }
    }
    ObservableRecord {
        t,
        lz,
        sz,
        jz,
        sx: spin_coherence.re,
        x: a_l.re + a_r.re,
        y: a_l.im - a_r.im,
        norm,
    }
}

/// A time-evolution rule `ψ0 ↦ ψ(t)`.
pub trait Evolution: Sync {
    fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector>;
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Eigendecomposition-based propagator for any hermitian Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eig: HermitianEigen,
}

impl SpectralPropagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        let deviation = h.hermitian_deviation();
        if !h.is_hermitian() || deviation >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            eig: HermitianEigen::new(h.matrix()),
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eig.values
    }
}

impl Evolution for SpectralPropagator {
    fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.dim() != self.eig.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.eig.values.len(),
                found: psi0.dim(),
            });
        }
        check_normalized(psi0)?;
        Ok(StateVector::from_parts(
            psi0.space(),
            self.eig.evolve(psi0.amplitudes(), t),
        ))
    }
}

/// Block-wise closed-form propagator for [`ajc_hamiltonian`].
#[derive(Debug, Clone)]
pub struct AjcPropagator {
    params: ModelParams,
    blocks: Vec<(f64, nalgebra::Matrix2<C64>)>,
}

impl AjcPropagator {
    pub fn new(params: ModelParams) -> Self {
        let blocks = (1..=params.space().cutoff_l())
            .map(|n| {
                let b = block_for(params.xi(), n).expect("n_l >= 1");
                (b.energy(), b.h)
            })
            .collect();
        Self { params, blocks }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }
}

impl Evolution for AjcPropagator {
    fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        let space = self.params.space();
        if psi0.space() != space {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: psi0.dim(),
            });
        }
        check_normalized(psi0)?;
        let cutoff = space.cutoff_l();
        let src = psi0.amplitudes();
        let mut out = DVector::zeros(space.dim());
        let idx = |n_r, n_l, s| space.index(BasisLabel::new(n_r, n_l, s)).unwrap();
        for n_r in 0..=space.cutoff_r() {
            // uncoupled states: |0⟩|↑⟩ at +mc², |cutoff⟩|↓⟩ at −mc²
            let singlet = idx(n_r, 0, Spin::Up);
            out[singlet] = src[singlet] * C64::from_polar(1.0, -t);
            let edge = idx(n_r, cutoff, Spin::Down);
            out[edge] = src[edge] * C64::from_polar(1.0, t);
            for (k, (e, h)) in self.blocks.iter().enumerate() {
                let n = k + 1;
                let up = idx(n_r, n, Spin::Up);
                let down = idx(n_r, n - 1, Spin::Down);
                let (sin, cos) = (e * t).sin_cos();
                let u = nalgebra::Matrix2::identity() * C64::from(cos)
                    - h * C64::new(0.0, sin / e);
                out[up] = u[(0, 0)] * src[up] + u[(0, 1)] * src[down];
                out[down] = u[(1, 0)] * src[up] + u[(1, 1)] * src[down];
            }
        }
        Ok(StateVector::from_parts(space, out))
    }
}

/// `e^{-iHt} ψ0` by eigendecomposition.
pub fn propagate(psi0: &StateVector, h: &OperatorMatrix, t: f64) -> Result<StateVector> {
    SpectralPropagator::new(h)?.evolve(psi0, t)
}

/// Observables of `ψ(t)` on every grid point, in grid order.
pub fn observable_series<E: Evolution + ?Sized>(
    psi0: &StateVector,
    evolution: &E,
    grid: &TimeGrid,
) -> Result<Vec<ObservableRecord>> {
    (0..grid.samples())
        .into_par_iter()
        .map(|i| {
            let t = grid.time(i);
            evolution.evolve(psi0, t).map(|psi| measure(&psi, t))
        })
        .collect()
}

/// Observables under a dense hermitian Hamiltonian.
pub fn observable_series_dense(
    psi0: &StateVector,
    h: &OperatorMatrix,
    grid: &TimeGrid,
) -> Result<Vec<ObservableRecord>> {
    observable_series(psi0, &SpectralPropagator::new(h)?, grid)
}

/// Column-wise arithmetic mean. The series must span at least ten periods of
/// the slowest frequency, `slowest_period`.
pub fn time_average(series: &[ObservableRecord], slowest_period: f64) -> Result<ObservableRecord> {
    let required = 10.0 * slowest_period;
    let span = match (series.first(), series.last()) {
        (Some(a), Some(b)) => b.t - a.t,
        _ => 0.0,
    };
    if series.len() < 2 || span < required {
        return Err(Error::SeriesTooShort {
            span,
            required,
            period: slowest_period,
        });
    }
    let n = series.len() as f64;
    let mean = |f: fn(&ObservableRecord) -> f64| series.iter().map(f).sum::<f64>() / n;
    Ok(ObservableRecord {
        t: mean(|r| r.t),
        lz: mean(|r| r.lz),
        sz: mean(|r| r.sz),
        jz: mean(|r| r.jz),
        sx: mean(|r| r.sx),
        x: mean(|r| r.x),
        y: mean(|r| r.y),
        norm: mean(|r| r.norm),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    /// Relativistic anti-Jaynes-Cummings Hamiltonian.
    Exact,
    /// Dispersive non-relativistic Hamiltonian.
    Effective,
}

/// Initial state `|z⟩_l ⊗ (α|↑⟩ + β|↓⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyInput {
    pub z: C64,
    pub alpha: C64,
    pub beta: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamseyRun {
    pub records: Vec<ObservableRecord>,
    /// Smallest fidelity against the spin-conditioned coherent-state product;
    /// only defined for the effective Hamiltonian.
    pub min_reference_fidelity: Option<f64>,
}

/// `α e^{-iΩ₀t}|z e^{-2iωt}⟩|↑⟩ + β e^{+iΩ₁t}|z e^{+2iωt}⟩|↓⟩` with
/// `Ω₀ = 1`, `Ω₁ = 1 + 2ξ`.
pub fn ramsey_reference_state(space: FockSpace, input: &RamseyInput, xi: f64, t: f64) -> Result<StateVector> {
    let up = coherent_amplitudes(input.z * C64::from_polar(1.0, -2.0 * xi * t), space.cutoff_l())?;
    let down = coherent_amplitudes(input.z * C64::from_polar(1.0, 2.0 * xi * t), space.cutoff_l())?;
    let renorm = |v: &[C64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let (nu, nd) = (renorm(&up), renorm(&down));
    let phase_up = input.alpha * C64::from_polar(1.0, -t) / nu;
    let phase_down = input.beta * C64::from_polar(1.0, (1.0 + 2.0 * xi) * t) / nd;
    let mut amps = DVector::zeros(space.dim());
    for n in 0..=space.cutoff_l() {
        amps[space.index(BasisLabel::new(0, n, Spin::Up)).unwrap()] = up[n] * phase_up;
        amps[space.index(BasisLabel::new(0, n, Spin::Down)).unwrap()] = down[n] * phase_down;
    }
    StateVector::new(space, amps)
}

/// Evolves `|z⟩_l(α|↑⟩ + β|↓⟩)` and records all observables.
pub fn ramsey_run(
    input: &RamseyInput,
    params: &ModelParams,
    grid: &TimeGrid,
    kind: HamiltonianKind,
) -> Result<RamseyRun> {
    let weight = input.alpha.norm_sqr() + input.beta.norm_sqr();
    if (weight - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm_sqr: weight });
    }
    let space = params.space();
    let psi0 = space.coherent_left_spinor(input.z, input.alpha, input.beta)?;
    match kind {
        HamiltonianKind::Exact => Ok(RamseyRun {
            records: observable_series(&psi0, &AjcPropagator::new(*params), grid)?,
            min_reference_fidelity: None,
        }),
        HamiltonianKind::Effective => {
            let evo = SpectralPropagator::new(&effective_nr_hamiltonian(params))?;
            let pairs: Vec<(ObservableRecord, f64)> = (0..grid.samples())
                .into_par_iter()
                .map(|i| {
                    let t = grid.time(i);
                    let psi = evo.evolve(&psi0, t)?;
                    let reference = ramsey_reference_state(space, input, params.xi(), t)?;
                    Ok((measure(&psi, t), psi.fidelity(&reference)?))
                })
                .collect::<Result<_>>()?;
            let min_fid = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            Ok(RamseyRun {
                records: pairs.into_iter().map(|p| p.0).collect(),
                min_reference_fidelity: Some(min_fid),
            })
        }
    }
}

/// Relativistic evolution of `ψ0` under the full AJC Hamiltonian built as a
/// dense matrix; used to cross-check [`AjcPropagator`].
pub fn dense_ajc_propagator(params: &ModelParams) -> Result<SpectralPropagator> {
    SpectralPropagator::new(&ajc_hamiltonian(params))
}

/// `⟨ψ|H|ψ⟩`, real part.
pub fn energy(psi: &StateVector, h: &OperatorMatrix) -> Result<f64> {
    Ok(crate::fockspace::expectation(h, psi)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exact_eigenstates, Eigenstates};
    use std::f64::consts::PI;

    fn params(xi: f64, cr: usize, cl: usize) -> ModelParams {
        ModelParams::new(xi, cr, cl).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        let g = TimeGrid::new(0.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn zero_time_is_identity() {
        let p = params(0.2, 1, 12);
        let psi = p.space().coherent_left_spinor(C64::new(0.5, 0.3), C64::from(0.6), C64::from(0.8)).unwrap();
        let out = AjcPropagator::new(p).evolve(&psi, 0.0).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-15);
        let out = propagate(&psi, &ajc_hamiltonian(&p), 0.0).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-13);
    }

    #[test]
    fn eigenstate_is_stationary() {
        let p = params(0.3, 0, 5);
        let Eigenstates::Pair(plus, _) = exact_eigenstates(&p, 3).unwrap() else {
            panic!()
        };
        let evo = AjcPropagator::new(p);
        let r0 = measure(&plus.state, 0.0);
        for t in [0.3, 1.7, 12.0] {
            let psi = evo.evolve(&plus.state, t).unwrap();
            let overlap = plus.state.inner(&psi).unwrap();
            assert!((overlap - C64::from_polar(1.0, -plus.energy * t)).norm() < 1e-13);
            let r = measure(&psi, t);
            assert!((r.lz - r0.lz).abs() < 1e-13 && (r.sz - r0.sz).abs() < 1e-13);
        }
    }

    #[test]
    fn sz_at_quarter_period() {
        let (xi, n) = (0.2, 3);
        let p = params(xi, 0, 6);
        let psi0 = p.space().basis_state(BasisLabel::new(0, n - 1, Spin::Down)).unwrap();
        let e = (1.0 + 4.0 * xi * n as f64).sqrt();
        let t = PI / (2.0 * e);
        let psi = propagate(&psi0, &ajc_hamiltonian(&p), t).unwrap();
        let sz = measure(&psi, t).sz;
        assert!((sz - (-0.5 + 2.4 / 3.4)).abs() < 1e-12);
        assert!((sz - 0.205882).abs() < 1e-6);
    }

    #[test]
    fn fast_path_matches_dense() {
        let p = params(0.17, 2, 14);
        let dense = dense_ajc_propagator(&p).unwrap();
        let fast = AjcPropagator::new(p);
        let psi0 = p.space().coherent_left_spinor(C64::new(0.7, -0.4), C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        for t in [0.1, 2.5, 40.0] {
            let a = dense.evolve(&psi0, t).unwrap();
            let b = fast.evolve(&psi0, t).unwrap();
            assert!(a.distance(&b).unwrap() < 1e-12);
            assert!((b.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_unnormalized() {
        let p = params(0.1, 0, 3);
        let s = p.space();
        let a = s.ladder_left(crate::fockspace::Ladder::Annihilate);
        let psi = s.basis_state(BasisLabel::new(0, 1, Spin::Up)).unwrap();
        assert!(matches!(propagate(&psi, &a, 1.0), Err(Error::NotHermitian { .. })));
        let doubled = StateVector::new(s, psi.amplitudes() * C64::from(2.0)).unwrap();
        assert!(matches!(
            propagate(&doubled, &ajc_hamiltonian(&p), 1.0),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn singlet_series_is_constant() {
        let p = params(0.4, 0, 4);
        let psi0 = p.space().basis_state(BasisLabel::new(0, 0, Spin::Up)).unwrap();
        let grid = TimeGrid::new(0.0, 20.0, 50).unwrap();
        let series = observable_series(&psi0, &AjcPropagator::new(p), &grid).unwrap();
        for r in &series {
            assert_eq!((r.lz, r.sx, r.x, r.y), (0.0, 0.0, 0.0, 0.0));
            assert!((r.sz - 0.5).abs() < 1e-15 && (r.jz - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn time_average_rules() {
        let rec = |t| ObservableRecord { t, lz: -1.0, sz: 0.5, jz: -0.5, sx: 0.1, x: 0.2, y: 0.3, norm: 1.0 };
        let series: Vec<_> = (0..=100).map(|i| rec(i as f64)).collect();
        let avg = time_average(&series, 10.0).unwrap();
        let got = [avg.lz, avg.sz, avg.jz, avg.sx, avg.x, avg.y, avg.norm];
        for (g, e) in got.iter().zip([-1.0, 0.5, -0.5, 0.1, 0.2, 0.3, 1.0]) {
            assert!((g - e).abs() < 1e-14);
        }
        assert!(matches!(time_average(&series, 10.5), Err(Error::SeriesTooShort { .. })));
        assert!(time_average(&[], 1.0).is_err());
    }

    #[test]
    fn ramsey_rejects_bad_weights() {
        let p = params(0.01, 0, 32);
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let input = RamseyInput { z: C64::ONE, alpha: C64::ONE, beta: C64::ONE };
        assert!(matches!(
            ramsey_run(&input, &p, &grid, HamiltonianKind::Effective),
            Err(Error::NotNormalized { .. })
        ));
    }
}
