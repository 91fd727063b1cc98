//! Closed-form reference curves (ħ = mc² = Δ = 1, ω = ξ).
//!
//! Nothing here touches the numerical stack: every function evaluates a
//! formula directly, so the results can serve as oracles for [`crate::dynamics`]
//! and [`crate::interferometer`].
//!
//! Two forms worth noting:
//!
//! - The Ramsey visibility factor uses `exp(−2|z|² sin²(2ωt))`. This is the
//!   modulus of the coherent-state overlap `⟨z e^{−2iωt}|z e^{2iωt}⟩`; an
//!   exponent linear in `sin(2ωt)` would grow without bound for half of every
//!   period.
//! - The static angular momenta of `α|n⟩|↑⟩ + β|n−1⟩|↓⟩` are
//!   `L_z = −(n − |β|²)`, `S_z = (|α|² − |β|²)/2` and `J_z = 1/2 − n`, which
//!   keeps `J_z` at its conserved value for every weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularMomenta {
    pub lz: f64,
    pub sz: f64,
    pub jz: f64,
}

/// Coherent amplitude, spinor weights and ξ of a Ramsey preparation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyParams {
    z: C64,
    alpha: C64,
    beta: C64,
    xi: f64,
}

impl RamseyParams {
    pub fn new(z: C64, alpha: C64, beta: C64, xi: f64) -> Result<Self> {
        let weight = alpha.norm_sqr() + beta.norm_sqr();
        if (weight - 1.0).abs() > 1e-14 {
            return Err(Error::NotNormalized { norm_sqr: weight });
        }
        if !xi.is_finite() || xi < 0.0 {
            return Err(Error::InvalidParameter(format!("xi must be non-negative, got {xi}")));
        }
        Ok(Self { z, alpha, beta, xi })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Ω₀ = mc²/ħ.
    pub fn omega0(&self) -> f64 {
        1.0
    }

    /// Ω₁ = (mc² + 2ħω)/ħ.
    pub fn omega1(&self) -> f64 {
        1.0 + 2.0 * self.xi
    }
}

fn require_coupled(n_l: usize) -> Result<f64> {
    if n_l == 0 {
        Err(Error::Singlet)
    } else {
        Ok(n_l as f64)
    }
}

/// Spin-orbit oscillations from `|n_l − 1⟩|↓⟩` under the exact Hamiltonian,
/// oscillating at `E_{n_l} = √(1 + 4ξn_l)`.
pub fn zb_exact(xi: f64, n_l: usize, t: f64) -> Result<AngularMomenta> {
    let n = require_coupled(n_l)?;
    let amplitude = 4.0 * xi * n / (1.0 + 4.0 * xi * n);
    let s2 = ((1.0 + 4.0 * xi * n).sqrt() * t).sin().powi(2);
    Ok(AngularMomenta {
        lz: -amplitude * s2 - (n - 1.0),
        sz: amplitude * s2 - 0.5,
        jz: 0.5 - n,
    })
}

/// First-order relativistic correction: amplitude `4ξn_l` at the Stark
/// frequency `Ω_{n_l} = 1 + 2ξn_l`.
pub fn zb_first_order(xi: f64, n_l: usize, t: f64) -> Result<AngularMomenta> {
    let n = require_coupled(n_l)?;
    let amplitude = 4.0 * xi * n;
    let s2 = ((1.0 + 2.0 * xi * n) * t).sin().powi(2);
    Ok(AngularMomenta {
        lz: -amplitude * s2 - (n - 1.0),
        sz: amplitude * s2 - 0.5,
        jz: 0.5 - n,
    })
}

/// Time average of [`zb_first_order`].
pub fn zb_time_avg(xi: f64, n_l: usize) -> Result<AngularMomenta> {
    let n = require_coupled(n_l)?;
    Ok(AngularMomenta {
        lz: -2.0 * xi * n - (n - 1.0),
        sz: 2.0 * xi * n - 0.5,
        jz: 0.5 - n,
    })
}

/// First-order visibility `4ξn_l` of the ⟨S_z⟩ fringes.
pub fn zb_visibility_first_order(xi: f64, n_l: usize) -> f64 {
    4.0 * xi * n_l as f64
}

/// `|α*β| exp(−2|z|² sin²(2ωt))`.
pub fn ramsey_envelope(rp: &RamseyParams, t: f64) -> f64 {
    let s = (2.0 * rp.xi * t).sin();
    (rp.alpha.conj() * rp.beta).norm() * (-2.0 * rp.z.norm_sqr() * s * s).exp()
}

/// `⟨S_x⟩ = 𝒱(t) cos[(Ω₀ + Ω₁)t + |z|² sin(4ωt) + arg(α*β)]`.
pub fn ramsey_sx(rp: &RamseyParams, t: f64) -> f64 {
    let phase = (rp.omega0() + rp.omega1()) * t
        + rp.z.norm_sqr() * (4.0 * rp.xi * t).sin()
        + (rp.alpha.conj() * rp.beta).arg();
    ramsey_envelope(rp, t) * phase.cos()
}

/// Mean position `(⟨x⟩, ⟨y⟩)` of the Ramsey state.
pub fn orbit(rp: &RamseyParams, t: f64) -> (f64, f64) {
    let r = rp.z.norm();
    let phi = rp.z.arg();
    let wa = rp.alpha.norm_sqr();
    let wb = rp.beta.norm_sqr();
    let arg = 2.0 * rp.xi * t;
    (
        r * (wa * (arg - phi).cos() + wb * (arg + phi).cos()),
        r * (wb * (arg + phi).sin() - wa * (arg - phi).sin()),
    )
}

/// Circular orbit of `|z⟩|↑⟩`.
pub fn circular_orbit(z: C64, xi: f64, t: f64) -> (f64, f64) {
    let arg = 2.0 * xi * t - z.arg();
    (z.norm() * arg.cos(), -z.norm() * arg.sin())
}

/// Time-independent angular momenta of `α|n_l⟩|↑⟩ + β|n_l − 1⟩|↓⟩` under the
/// effective Hamiltonian.
pub fn mixed_state_statics(n_l: usize, alpha: C64, beta: C64) -> Result<AngularMomenta> {
    let n = require_coupled(n_l)?;
    let wa = alpha.norm_sqr();
    let wb = beta.norm_sqr();
    if (wa + wb - 1.0).abs() > 1e-14 {
        return Err(Error::NotNormalized { norm_sqr: wa + wb });
    }
    Ok(AngularMomenta {
        lz: -(n - wb),
        sz: 0.5 * (wa - wb),
        jz: 0.5 - n,
    })
}
