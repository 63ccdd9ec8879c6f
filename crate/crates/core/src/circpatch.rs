//! Circular patch in the TM11 cavity mode.
//!
//! Radius synthesis from the `J1'` resonance with a fringing-corrected
//! effective radius, the power budget (radiated, surface-wave, conductor,
//! dielectric), the series resistances derived from it, feed placement on the
//! `J1²` taper, and the far fields behind directivity and gain.
//!
//! Every power is proportional to `E0²`, so resistances, efficiency,
//! directivity and gain do not depend on the field normalisation.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{
    angular_frequency, free_space_wavelength, wavenumber, PhysicalConstants, SubstrateSpec,
    SPEED_OF_LIGHT,
};
use crate::rectpatch::{surface_wave_factor, ResistanceBreakdown, T1Form};
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::{bessel_j, find_root_bracketed, simpson, Bracket, J1_PRIME_FIRST_ROOT};

/// Fringing constant in the effective-radius correction.
const FRINGE_CONST: f64 = 1.7726;

/// `k0 a_eff` beyond which the quartic radiation series is unreliable.
pub const SERIES_WARN_KA: f64 = 1.8;

const ENERGY_INTERVALS: usize = 2000;
const POWER_INTERVALS: usize = 720;

/// Which resistance the `J1²` feed taper is matched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedRule {
    /// `R_r J1²(k11 ρ0)/J1²(k11 a)` equals the target, as in the published
    /// placement. The resulting input resistance is `R_T/R_r` times higher.
    #[default]
    Radiation,
    /// `R_T J1²(k11 ρ0)/J1²(k11 a)` equals the target.
    Total,
}

impl FeedRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeedRule::Radiation => "radiation",
            FeedRule::Total => "total",
        }
    }
}

/// Model switches for the circular patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircOptions {
    pub fringing: bool,
    pub t1_form: T1Form,
    pub feed_rule: FeedRule,
}

impl Default for CircOptions {
    fn default() -> Self {
        Self {
            fringing: true,
            t1_form: T1Form::Printed,
            feed_rule: FeedRule::Radiation,
        }
    }
}

impl CircOptions {
    /// Applies one variant token (`fringing`, `no-fringing`, `t1-printed`,
    /// `t1-corrected`, `feed-radiation`, `feed-total`).
    pub fn apply(&mut self, token: &str) -> Result<()> {
        match token {
            "fringing" => self.fringing = true,
            "no-fringing" => self.fringing = false,
            "t1-printed" => self.t1_form = T1Form::Printed,
            "t1-corrected" => self.t1_form = T1Form::Corrected,
            "feed-radiation" => self.feed_rule = FeedRule::Radiation,
            "feed-total" => self.feed_rule = FeedRule::Total,
            other => return Err(Error::UnknownVariant(other.to_string())),
        }
        Ok(())
    }

    /// Canonical comma-separated variant name.
    pub fn variant_name(&self) -> String {
        format!(
            "{},t1-{},feed-{}",
            if self.fringing {
                "fringing"
            } else {
                "no-fringing"
            },
            self.t1_form.as_str(),
            self.feed_rule.as_str()
        )
    }
}

impl FromStr for CircOptions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut opts = CircOptions::default();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            opts.apply(token)?;
        }
        Ok(opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircPatchDesign<T> {
    #[serde(rename = "a")]
    pub radius: T,
    #[serde(rename = "a_eff")]
    pub effective_radius: T,
    #[serde(rename = "rho0")]
    pub feed_radius: T,
    pub substrate: SubstrateSpec<T>,
    pub f_design: T,
    pub mode_n: u32,
}

impl<T: Real> CircPatchDesign<T> {
    /// Edge-fed design of physical radius `a`.
    pub fn new(
        radius: T,
        substrate: SubstrateSpec<T>,
        f_design: T,
        fringing: bool,
    ) -> Result<Self> {
        substrate.validate()?;
        let effective_radius = if fringing {
            effective_radius(radius, &substrate)?
        } else {
            check_radius(radius)?;
            radius
        };
        if !(f_design > T::zero()) {
            return Err(Error::Domain(format!(
                "design frequency must be positive, got {}",
                f_design
            )));
        }
        Ok(Self {
            radius,
            effective_radius,
            feed_radius: radius,
            substrate,
            f_design,
            mode_n: 1,
        })
    }

    pub fn with_feed_radius(&self, feed_radius: T) -> Result<Self> {
        if !(feed_radius >= T::zero()) || feed_radius > self.radius {
            return Err(Error::Domain(format!(
                "feed radius must lie in [0, a], got {} with a = {}",
                feed_radius, self.radius
            )));
        }
        Ok(Self {
            feed_radius,
            ..*self
        })
    }

    /// Mode wavenumber `k11 = 1.84118 / a_eff`.
    pub fn k11(&self) -> T {
        lit::<T>(J1_PRIME_FIRST_ROOT) / self.effective_radius
    }
}

fn check_radius<T: Real>(a: T) -> Result<()> {
    if a > T::zero() && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "patch radius must be positive, got {}",
            a
        )))
    }
}

/// Fringing-corrected radius
/// `a sqrt(1 + 2h/(π a εr) (ln(π a / 2h) + 1.7726))`.
pub fn effective_radius<T: Real>(a: T, sub: &SubstrateSpec<T>) -> Result<T> {
    check_radius(a)?;
    let two: T = lit(2.0);
    let arg = T::one()
        + two * sub.h / (T::PI() * a * sub.eps_r)
            * ((T::PI() * a / (two * sub.h)).ln() + lit(FRINGE_CONST));
    if !(arg > T::zero()) {
        return Err(Error::ModelRange(format!(
            "fringing correction undefined for a = {} m, h = {} m",
            a, sub.h
        )));
    }
    Ok(a * arg.sqrt())
}

/// TM11 resonance `1.84118 c / (2π a_eff sqrt(εr))`.
pub fn resonant_frequency<T: Real>(a: T, sub: &SubstrateSpec<T>, fringing: bool) -> Result<T> {
    let a_eff = if fringing {
        effective_radius(a, sub)?
    } else {
        check_radius(a)?;
        a
    };
    Ok(lit::<T>(J1_PRIME_FIRST_ROOT) * lit::<T>(SPEED_OF_LIGHT)
        / (T::TAU() * a_eff * sub.eps_r.sqrt()))
}

/// Physical radius resonating at `f0`.
pub fn resonant_radius<T: Real>(
    f0: T,
    sub: &SubstrateSpec<T>,
    fringing: bool,
    tol: T,
) -> Result<T> {
    sub.validate()?;
    let a0 =
        lit::<T>(J1_PRIME_FIRST_ROOT) * free_space_wavelength(f0)? / (T::TAU() * sub.eps_r.sqrt());
    if !fringing {
        return Ok(a0);
    }
    let mut lo = a0 * lit(0.1);
    while effective_radius(lo, sub).is_err() {
        lo = lo * lit(1.25);
        if lo >= a0 {
            return Err(Error::Synthesis(format!(
                "fringing model undefined below the unfringed radius {} m",
                a0
            )));
        }
    }
    let bracket = Bracket::new(lo, a0 * lit(10.0))?;
    find_root_bracketed(|a| Ok(resonant_frequency(a, sub, true)? - f0), bracket, tol).map_err(|e| {
        match e {
            Error::Bracket { .. } => Error::Synthesis(format!(
                "no radius in [{}, {}] m resonates at {} Hz",
                to_f64(bracket.lo),
                to_f64(bracket.hi),
                to_f64(f0)
            )),
            other => other,
        }
    })
}

/// Normalisation of the cavity field under the patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityField<T> {
    #[serde(rename = "E0")]
    pub e0: T,
    pub k: T,
    pub k11: T,
}

impl<T: Real> CavityField<T> {
    pub fn new(design: &CircPatchDesign<T>, e0: T) -> Self {
        let k11 = design.k11();
        Self { e0, k: k11, k11 }
    }
}

/// `4/3 - (8/15)(k0a)² + (11/105)(k0a)⁴`.
pub fn radiation_series<T: Real>(ka: T) -> T {
    let x2 = ka * ka;
    lit::<T>(4.0 / 3.0) - lit::<T>(8.0 / 15.0) * x2 + lit::<T>(11.0 / 105.0) * x2 * x2
}

/// Advisory messages about the validity of the closed forms at `f`.
pub fn circ_warnings<T: Real>(design: &CircPatchDesign<T>, f: T) -> Result<Vec<String>> {
    let ka = wavenumber(f)? * design.effective_radius;
    let mut out = Vec::new();
    if ka > lit(SERIES_WARN_KA) {
        out.push(format!(
            "k0 a_eff = {:.3} exceeds {}; the quartic radiation series is degraded",
            to_f64(ka),
            SERIES_WARN_KA
        ));
    }
    Ok(out)
}

/// Radiated power `π³ a² (E0 h)² / (2 λ0² η0) · series(k0 a)` with `a = a_eff`.
pub fn p_radiated<T: Real>(design: &CircPatchDesign<T>, f: T, e0: T) -> Result<T> {
    let lambda0 = free_space_wavelength(f)?;
    let a = design.effective_radius;
    let series = radiation_series(wavenumber(f)? * a);
    if !(series > T::zero()) {
        return Err(Error::ModelRange(format!("radiation series is {}", series)));
    }
    let eta0 = PhysicalConstants::<T>::new().eta0;
    let eh = e0 * design.substrate.h;
    Ok(T::PI().powi(3) * a * a * eh * eh / (lit::<T>(2.0) * lambda0 * lambda0 * eta0) * series)
}

/// Radiation resistance `(E0 h)² / (2 P_r)`.
pub fn r_radiation_circ<T: Real>(design: &CircPatchDesign<T>, f: T) -> Result<T> {
    let h = design.substrate.h;
    Ok(h * h / (lit::<T>(2.0) * p_radiated(design, f, T::one())?))
}

/// Stored energy `(ε0 εr h π E0² / 2) ∫_0^{a_eff} J1²(kρ) ρ dρ` by
/// composite Simpson quadrature.
pub fn stored_energy<T: Real>(design: &CircPatchDesign<T>, e0: T) -> Result<T> {
    let k = design.k11();
    let integral = simpson(
        |rho| {
            let j = bessel_j(design.mode_n, k * rho)?;
            Ok(j * j * rho)
        },
        T::zero(),
        design.effective_radius,
        ENERGY_INTERVALS,
    )?;
    let consts = PhysicalConstants::<T>::new();
    let sub = &design.substrate;
    Ok(consts.eps0 * sub.eps_r * sub.h * T::PI() * e0 * e0 / lit(2.0) * integral)
}

/// `J1²(x11)(x11² - 1)` evaluated at the disk edge.
fn edge_mode_factor<T: Real>() -> Result<T> {
    let x: T = lit(J1_PRIME_FIRST_ROOT);
    let j = bessel_j(1, x)?;
    Ok(j * j * (x * x - T::one()))
}

/// Closed form `E0² h / (8 ω f μ0) · J1²(kρ)((kρ)² - 1)` at `kρ = 1.84118`.
/// Agrees with [`stored_energy`] when `f` is the resonant frequency.
pub fn stored_energy_closed_form<T: Real>(design: &CircPatchDesign<T>, f: T, e0: T) -> Result<T> {
    let w = angular_frequency(f)?;
    let mu0 = PhysicalConstants::<T>::new().mu0;
    Ok(e0 * e0 * design.substrate.h / (lit::<T>(8.0) * w * f * mu0) * edge_mode_factor::<T>()?)
}

/// Dielectric loss `ω tanδ W_T`.
pub fn p_dielectric<T: Real>(design: &CircPatchDesign<T>, f: T, e0: T) -> Result<T> {
    Ok(angular_frequency(f)? * design.substrate.tan_delta * stored_energy(design, e0)?)
}

/// Conductor loss `ω W_T / (h sqrt(π f μ0 σ))`.
pub fn p_conductor<T: Real>(design: &CircPatchDesign<T>, f: T, e0: T) -> Result<T> {
    let w_t = stored_energy(design, e0)?;
    conductor_from(design, f, w_t)
}

fn conductor_from<T: Real>(design: &CircPatchDesign<T>, f: T, w_t: T) -> Result<T> {
    let mu0 = PhysicalConstants::<T>::new().mu0;
    let sub = &design.substrate;
    let skin = sub.h * (T::PI() * f * mu0 * sub.sigma).sqrt();
    Ok(angular_frequency(f)? * w_t / skin)
}

/// Power budget, series resistances and radiation figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircLossReport<T> {
    #[serde(rename = "P_r")]
    pub p_r: T,
    #[serde(rename = "P_s")]
    pub p_s: T,
    #[serde(rename = "P_c")]
    pub p_c: T,
    #[serde(rename = "P_d")]
    pub p_d: T,
    #[serde(rename = "W_T")]
    pub w_t: T,
    /// Closed-form stored energy, reported against the quadrature value.
    #[serde(rename = "W_T_closed_form")]
    pub w_t_closed_form: T,
    pub breakdown: ResistanceBreakdown<T>,
    pub e_r: T,
    #[serde(rename = "D")]
    pub d: T,
    #[serde(rename = "G")]
    pub g: T,
    #[serde(rename = "T1")]
    pub t1: T,
    pub k0a: T,
    /// Resonator quality factor `ω W_T / (P_r + P_s + P_c + P_d)`.
    pub q_total: T,
    /// `(E0 h)² / (2 P_d)` from the printed closed form; parallel-type, not
    /// part of the series sum.
    #[serde(rename = "R_d_printed")]
    pub printed_r_d: T,
    #[serde(rename = "R_c_printed")]
    pub printed_r_c: T,
}

/// Losses at `f` for a reference field `e0 > 0`.
///
/// Loss terms map to series resistances in proportion to power,
/// `R_x = R_r P_x / P_r`, the same rule that gives `R_s = T1 R_r`; hence
/// `e_r = R_r / R_T = P_r / ΣP`.
pub fn circ_losses<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    e0: T,
    opts: &CircOptions,
) -> Result<CircLossReport<T>> {
    if !(e0 > T::zero()) || !e0.is_finite() {
        return Err(Error::Domain(format!(
            "reference field must be positive, got {}",
            e0
        )));
    }
    let sub = &design.substrate;
    let t1 = surface_wave_factor(sub, f, opts.t1_form)?.t1;
    let p_r = p_radiated(design, f, e0)?;
    let p_s = t1 * p_r;
    let w_t = stored_energy(design, e0)?;
    let w = angular_frequency(f)?;
    let p_d = w * sub.tan_delta * w_t;
    let p_c = conductor_from(design, f, w_t)?;

    let eh = e0 * sub.h;
    let r_r = eh * eh / (lit::<T>(2.0) * p_r);
    let breakdown =
        ResistanceBreakdown::from_parts(r_r, t1 * r_r, r_r * (p_c / p_r), r_r * (p_d / p_r));
    let e_r = r_r / breakdown.r_total;
    let d = directivity(design, f)?;

    let mu0 = PhysicalConstants::<T>::new().mu0;
    let mode = edge_mode_factor::<T>()?;
    let four: T = lit(4.0);
    let printed_r_d = if sub.tan_delta == T::zero() {
        T::infinity()
    } else {
        four * mu0 * f * sub.h / (sub.tan_delta * mode)
    };
    let printed_r_c =
        four * mu0 * f * sub.h * sub.h * (T::PI() * f * mu0 * sub.sigma).sqrt() / mode;

    Ok(CircLossReport {
        p_r,
        p_s,
        p_c,
        p_d,
        w_t,
        w_t_closed_form: stored_energy_closed_form(design, f, e0)?,
        breakdown,
        e_r,
        d,
        g: e_r * d,
        t1,
        k0a: wavenumber(f)? * design.effective_radius,
        q_total: w * w_t / (p_r + p_s + p_c + p_d),
        printed_r_d,
        printed_r_c,
    })
}

pub fn r_total_circ<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    opts: &CircOptions,
) -> Result<ResistanceBreakdown<T>> {
    Ok(circ_losses(design, f, T::one(), opts)?.breakdown)
}

pub fn r_surface_circ<T: Real>(design: &CircPatchDesign<T>, f: T, opts: &CircOptions) -> Result<T> {
    Ok(r_total_circ(design, f, opts)?.r_s)
}

pub fn r_conductor_circ<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    opts: &CircOptions,
) -> Result<T> {
    Ok(r_total_circ(design, f, opts)?.r_c)
}

pub fn r_dielectric_circ<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    opts: &CircOptions,
) -> Result<T> {
    Ok(r_total_circ(design, f, opts)?.r_d)
}

pub fn efficiency<T: Real>(design: &CircPatchDesign<T>, f: T, opts: &CircOptions) -> Result<T> {
    Ok(circ_losses(design, f, T::one(), opts)?.e_r)
}

pub fn gain<T: Real>(design: &CircPatchDesign<T>, f: T, opts: &CircOptions) -> Result<T> {
    Ok(circ_losses(design, f, T::one(), opts)?.g)
}

/// `J1²(k11 ρ) / J1²(k11 a_eff)`.
pub fn feed_taper<T: Real>(design: &CircPatchDesign<T>, rho: T) -> Result<T> {
    let k11 = design.k11();
    let num = bessel_j(1, k11 * rho)?;
    let den = bessel_j(1, k11 * design.effective_radius)?;
    Ok((num * num) / (den * den))
}

/// Input resistance at the feed, `R_T · J1²(k11 ρ0)/J1²(k11 a_eff)`.
pub fn input_resistance_circ<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    opts: &CircOptions,
) -> Result<T> {
    Ok(r_total_circ(design, f, opts)?.r_total * feed_taper(design, design.feed_radius)?)
}

/// Feed radius in `[0, a]` whose tapered resistance (per `opts.feed_rule`)
/// equals `target`.
pub fn feed_radius_for_match<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    target: T,
    opts: &CircOptions,
    tol: T,
) -> Result<T> {
    if !(target > T::zero()) {
        return Err(Error::Domain(format!(
            "target resistance must be positive, got {}",
            target
        )));
    }
    let b = r_total_circ(design, f, opts)?;
    let base = match opts.feed_rule {
        FeedRule::Radiation => b.r_r,
        FeedRule::Total => b.r_total,
    };
    let edge = base * feed_taper(design, design.radius)?;
    if target > edge {
        return Err(Error::NoSolution {
            target: to_f64(target),
            edge: to_f64(edge),
        });
    }
    find_root_bracketed(
        |rho| Ok(base * feed_taper(design, rho)? - target),
        Bracket::new(T::zero(), design.radius)?,
        tol,
    )
}

/// Synthesises radius and feed radius for resonance at `f0` and a `target`
/// input resistance.
pub fn synth_circ<T: Real>(
    f0: T,
    sub: &SubstrateSpec<T>,
    target: T,
    opts: &CircOptions,
    tol: T,
) -> Result<CircPatchDesign<T>> {
    let a = resonant_radius(f0, sub, opts.fringing, tol)?;
    let design = CircPatchDesign::new(a, *sub, f0, opts.fringing)?;
    let rho0 = feed_radius_for_match(&design, f0, target, opts, tol)?;
    design.with_feed_radius(rho0)
}

/// Far-field magnitudes at 1 m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarField<T> {
    pub e_theta: T,
    pub e_phi: T,
}

/// TM11 far fields
/// `|E_θ| = A |cos φ (J0(u) - J2(u))|`, `|E_φ| = A |cos θ sin φ (J0(u) + J2(u))|`
/// with `u = k0 a_eff sin θ` and `A = k0 a_eff h E0 / 2`, upper hemisphere only.
pub fn far_fields<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    e0: T,
    theta: T,
    phi: T,
) -> Result<FarField<T>> {
    let slack = T::epsilon() * lit(16.0);
    if !(theta >= -slack) || theta > T::FRAC_PI_2() + slack {
        return Err(Error::Domain(format!(
            "theta must lie in [0, π/2], got {}",
            theta
        )));
    }
    let theta = theta.max(T::zero()).min(T::FRAC_PI_2());
    let k0a = wavenumber(f)? * design.effective_radius;
    let amp = k0a * design.substrate.h * e0 / lit(2.0);
    let u = k0a * theta.sin();
    let j0 = bessel_j(0, u)?;
    let j2 = bessel_j(2, u)?;
    Ok(FarField {
        e_theta: (amp * phi.cos() * (j0 - j2)).abs(),
        e_phi: (amp * theta.cos() * phi.sin() * (j0 + j2)).abs(),
    })
}

/// Radiated power by integrating the far-field Poynting flux over the upper
/// hemisphere. The azimuthal integrals are done analytically.
pub fn radiated_power_quadrature<T: Real>(design: &CircPatchDesign<T>, f: T, e0: T) -> Result<T> {
    let eta0 = PhysicalConstants::<T>::new().eta0;
    let radial = simpson(
        |theta| {
            let on_e = far_fields(design, f, e0, theta, T::zero())?;
            let on_h = far_fields(design, f, e0, theta, T::FRAC_PI_2())?;
            // ∫cos²φ dφ = ∫sin²φ dφ = π over a full turn
            Ok(T::PI() * (on_e.e_theta * on_e.e_theta + on_h.e_phi * on_h.e_phi) * theta.sin())
        },
        T::zero(),
        T::FRAC_PI_2(),
        POWER_INTERVALS,
    )?;
    Ok(radial / (lit::<T>(2.0) * eta0))
}

/// Broadside directivity `4π r² |E(θ=0)|² / (2 η0 P_r)`, with `P_r` from the
/// closed-form series.
pub fn directivity<T: Real>(design: &CircPatchDesign<T>, f: T) -> Result<T> {
    let eta0 = PhysicalConstants::<T>::new().eta0;
    let e0 = T::one();
    let ff = far_fields(design, f, e0, T::zero(), T::zero())?;
    let intensity = ff.e_theta * ff.e_theta + ff.e_phi * ff.e_phi;
    let p_r = p_radiated(design, f, e0)?;
    Ok(lit::<T>(4.0) * T::PI() * intensity / (lit::<T>(2.0) * eta0 * p_r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternPlane {
    /// `φ = 0` cut of `|E_θ|`.
    E,
    /// `φ = π/2` cut of `|E_φ|`.
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternPoint<T> {
    pub theta: T,
    pub level_db: T,
}

/// Principal-plane cut from `θ = -π/2` to `π/2`, normalised to 0 dB at
/// broadside. The step is shrunk so the grid lands exactly on `±π/2`.
pub fn pattern_cut<T: Real>(
    design: &CircPatchDesign<T>,
    f: T,
    plane: PatternPlane,
    step: T,
) -> Result<Vec<PatternPoint<T>>> {
    if !(step > T::zero()) || step > T::FRAC_PI_2() {
        return Err(Error::Domain(format!(
            "pattern step must lie in (0, π/2], got {}",
            step
        )));
    }
    let n = (T::FRAC_PI_2() / step).ceil().to_i64().unwrap_or(1).max(1);
    let dtheta = T::FRAC_PI_2() / lit(n as f64);
    let level = |theta: T| -> Result<T> {
        let ff = match plane {
            PatternPlane::E => far_fields(design, f, T::one(), theta, T::zero())?.e_theta,
            PatternPlane::H => far_fields(design, f, T::one(), theta, T::FRAC_PI_2())?.e_phi,
        };
        Ok(ff)
    };
    let reference = level(T::zero())?;
    let twenty: T = lit(20.0);
    (-n..=n)
        .map(|i| {
            let theta = if i == n {
                T::FRAC_PI_2()
            } else if i == -n {
                -T::FRAC_PI_2()
            } else {
                dtheta * lit(i as f64)
            };
            // |E| is even in θ on both principal planes
            let v = level(theta.abs())?;
            Ok(PatternPoint {
                theta,
                level_db: twenty * (v / reference).log10(),
            })
        })
        .collect()
}
