//! Physical constants, free-space propagation and substrate description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Conductivity used when none is given: copper (S/m).
pub const DEFAULT_SIGMA: f64 = 5.8e7;

/// Loss tangent used when none is given.
pub const DEFAULT_TAN_DELTA: f64 = 0.001;

/// Vacuum constants. `eta0` is the `120π` vacuum resistance the cavity-model
/// formulas are written with, not `sqrt(mu0/eps0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants<T> {
    pub c: T,
    pub mu0: T,
    pub eps0: T,
    pub eta0: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new() -> Self {
        let c: T = lit(SPEED_OF_LIGHT);
        let mu0 = lit::<T>(4e-7) * T::PI();
        Self {
            c,
            mu0,
            eps0: (mu0 * c * c).recip(),
            eta0: lit::<T>(120.0) * T::PI(),
        }
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Dielectric slab under the patch plus the patch metal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubstrateSpec<T> {
    pub eps_r: T,
    /// Thickness (m).
    pub h: T,
    pub tan_delta: T,
    /// Patch-metal conductivity (S/m).
    pub sigma: T,
}

impl<T: Real> SubstrateSpec<T> {
    pub fn new(eps_r: T, h: T, tan_delta: T, sigma: T) -> Result<Self> {
        let sub = Self {
            eps_r,
            h,
            tan_delta,
            sigma,
        };
        sub.validate()?;
        Ok(sub)
    }

    /// Substrate with the default copper conductivity and loss tangent.
    pub fn with_defaults(eps_r: T, h: T) -> Result<Self> {
        Self::new(eps_r, h, lit(DEFAULT_TAN_DELTA), lit(DEFAULT_SIGMA))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_r >= T::one()) || !self.eps_r.is_finite() {
            return Err(Error::Domain(format!(
                "substrate requires eps_r >= 1, got {}",
                self.eps_r
            )));
        }
        if !(self.h > T::zero()) || !self.h.is_finite() {
            return Err(Error::Domain(format!(
                "substrate requires h > 0, got {}",
                self.h
            )));
        }
        if !(self.tan_delta >= T::zero()) || !self.tan_delta.is_finite() {
            return Err(Error::Domain(format!(
                "substrate requires tan_delta >= 0, got {}",
                self.tan_delta
            )));
        }
        // sigma = +inf is accepted as a perfect conductor
        if !(self.sigma > T::zero()) {
            return Err(Error::Domain(format!(
                "substrate requires sigma > 0, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

fn check_frequency<T: Real>(f: T) -> Result<()> {
    if f > T::zero() && f.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "frequency must be positive, got {} Hz",
            f
        )))
    }
}

/// `λ0 = c / f` in metres.
pub fn free_space_wavelength<T: Real>(f: T) -> Result<T> {
    check_frequency(f)?;
    Ok(lit::<T>(SPEED_OF_LIGHT) / f)
}

/// `k0 = 2π f / c` in rad/m.
pub fn wavenumber<T: Real>(f: T) -> Result<T> {
    check_frequency(f)?;
    Ok(T::TAU() * f / lit(SPEED_OF_LIGHT))
}

/// Angular frequency `ω = 2π f`.
pub fn angular_frequency<T: Real>(f: T) -> Result<T> {
    check_frequency(f)?;
    Ok(T::TAU() * f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Thick,
    Thin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport<T> {
    /// `h / λ0`.
    pub ratio: T,
    pub threshold: T,
    pub regime: Regime,
}

// (1/sqrt(eps_r), h/λ0 threshold) anchors: eps_r = 2.32 and eps_r = 10.
const THIN_ANCHOR: (f64, f64) = (2.32, 0.09);
const THICK_ANCHOR: (f64, f64) = (10.0, 0.03);

/// `h/λ0` above which a substrate of the given permittivity counts as thick.
///
/// Linear in `1/sqrt(eps_r)` through the two anchors, clamped to
/// `[0.03, 0.09]`.
pub fn thickness_threshold<T: Real>(eps_r: T) -> T {
    let x0 = (THIN_ANCHOR.0).sqrt().recip();
    let x1 = (THICK_ANCHOR.0).sqrt().recip();
    let slope = (THIN_ANCHOR.1 - THICK_ANCHOR.1) / (x0 - x1);
    let x = eps_r.sqrt().recip();
    let t = lit::<T>(THICK_ANCHOR.1) + lit::<T>(slope) * (x - lit(x1));
    t.max(lit(THICK_ANCHOR.1)).min(lit(THIN_ANCHOR.1))
}

/// Classifies the substrate electrical thickness at `f`. Advisory only: the
/// models run in either regime.
pub fn thickness_regime<T: Real>(sub: &SubstrateSpec<T>, f: T) -> Result<RegimeReport<T>> {
    sub.validate()?;
    let ratio = sub.h / free_space_wavelength(f)?;
    let threshold = thickness_threshold(sub.eps_r);
    let regime = if ratio > threshold {
        Regime::Thick
    } else {
        Regime::Thin
    };
    Ok(RegimeReport {
        ratio,
        threshold,
        regime,
    })
}
