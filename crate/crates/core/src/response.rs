//! Single-resonator frequency response: input impedance, reflection, return
//! loss, VSWR, sweeps and resonance extraction.
//!
//! Off resonance the patch is a parallel RLC,
//! `Z(f) = R_res / (1 + j Q ν)` with `ν = f/f_r - f_r/f`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circpatch::{circ_losses, feed_taper, resonant_frequency, CircOptions, CircPatchDesign};
use crate::error::{Error, Result};
use crate::rectpatch::{analyze_rect, RectModel, RectPatchDesign};
use crate::scalar::{lit, to_f64, Real};

/// Floor applied to reported return loss so a perfect match stays finite.
pub const RL_FLOOR_DB: f64 = -100.0;

/// Return-loss level that delimits the bandwidth.
pub const BANDWIDTH_RL_DB: f64 = -10.0;

pub const DEFAULT_REFERENCE_IMPEDANCE: f64 = 50.0;

pub const CSV_HEADER: &str = "f_hz,r_in_ohm,x_in_ohm,gamma_mag,rl_db,vswr";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "lowercase")]
pub enum PatchModel<T> {
    Rect {
        design: RectPatchDesign<T>,
        model: RectModel,
    },
    Circ {
        design: CircPatchDesign<T>,
        options: CircOptions,
    },
}

/// Lumped resonator standing in for the patch near its resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonator<T> {
    pub f_r: T,
    #[serde(rename = "R_res")]
    pub r_res: T,
    #[serde(rename = "Q")]
    pub q: T,
}

impl<T: Real> Resonator<T> {
    pub fn new(f_r: T, r_res: T, q: T) -> Result<Self> {
        if !(f_r > T::zero()) || !(r_res >= T::zero()) || !(q > T::zero()) {
            return Err(Error::Domain(format!(
                "resonator needs f_r > 0, R_res >= 0, Q > 0; got {}, {}, {}",
                f_r, r_res, q
            )));
        }
        Ok(Self { f_r, r_res, q })
    }

    pub fn impedance(&self, f: T) -> Result<Complex<T>> {
        if !(f > T::zero()) || !f.is_finite() {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {} Hz",
                f
            )));
        }
        let nu = f / self.f_r - self.f_r / f;
        Ok(Complex::new(self.r_res, T::zero()) / Complex::new(T::one(), self.q * nu))
    }
}

impl<T: Real> PatchModel<T> {
    /// Rectangular: `f_r = f_design`, `Q = Q_r`, `R_res` the input resistance
    /// at the feed inset. Circular: `f_r` from the TM11 condition,
    /// `Q = ω W_T / ΣP` and `R_res` the tapered total resistance, both at `f_r`.
    pub fn resonator(&self) -> Result<Resonator<T>> {
        match self {
            PatchModel::Rect { design, model } => {
                let a = analyze_rect(design, design.f_design, *model)?;
                Resonator::new(design.f_design, a.r_in, a.derived.q_r)
            }
            PatchModel::Circ { design, options } => {
                let f_r = resonant_frequency(design.radius, &design.substrate, options.fringing)?;
                let rep = circ_losses(design, f_r, T::one(), options)?;
                let r_res = rep.breakdown.r_total * feed_taper(design, design.feed_radius)?;
                Resonator::new(f_r, r_res, rep.q_total)
            }
        }
    }

    pub fn variant_name(&self) -> String {
        match self {
            PatchModel::Rect { model, .. } => model.as_str().to_string(),
            PatchModel::Circ { options, .. } => options.variant_name(),
        }
    }
}

/// Complex input impedance of `model` at `f`.
pub fn input_impedance_vs_freq<T: Real>(model: &PatchModel<T>, f: T) -> Result<Complex<T>> {
    model.resonator()?.impedance(f)
}

/// `Γ = (Z - Z_ref) / (Z + Z_ref)`.
pub fn reflection<T: Real>(z: Complex<T>, z_ref: T) -> Result<Complex<T>> {
    if !(z_ref > T::zero()) {
        return Err(Error::Domain(format!(
            "reference impedance must be positive, got {}",
            z_ref
        )));
    }
    let zr = Complex::new(z_ref, T::zero());
    Ok((z - zr) / (z + zr))
}

/// `20 log10 |Γ|`, floored at -100 dB.
pub fn return_loss_db<T: Real>(gamma: Complex<T>) -> T {
    let rl = lit::<T>(20.0) * gamma.norm().log10();
    if rl.is_nan() {
        return rl;
    }
    rl.max(lit(RL_FLOOR_DB))
}

/// `(1 + |Γ|) / (1 - |Γ|)`; `+inf` once `|Γ|` reaches 1.
pub fn vswr<T: Real>(gamma: Complex<T>) -> T {
    let g = gamma.norm();
    if g >= T::one() {
        T::infinity()
    } else {
        (T::one() + g) / (T::one() - g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec<T> {
    pub f_start: T,
    pub f_stop: T,
    pub points: usize,
    pub reference_impedance: T,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(f_start: T, f_stop: T, points: usize, reference_impedance: T) -> Result<Self> {
        let s = Self {
            f_start,
            f_stop,
            points,
            reference_impedance,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_start > T::zero()) || !(self.f_start < self.f_stop) || !self.f_stop.is_finite()
        {
            return Err(Error::Domain(format!(
                "sweep needs 0 < f_start < f_stop, got [{}, {}]",
                self.f_start, self.f_stop
            )));
        }
        if self.points < 2 {
            return Err(Error::Domain(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.reference_impedance > T::zero()) {
            return Err(Error::Domain(format!(
                "reference impedance must be positive, got {}",
                self.reference_impedance
            )));
        }
        Ok(())
    }

    /// Uniform grid; the last point is `f_stop` exactly.
    pub fn frequencies(&self) -> Vec<T> {
        let last = self.points - 1;
        let step = (self.f_stop - self.f_start) / lit(last as f64);
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.f_stop
                } else {
                    self.f_start + step * lit(i as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseSample<T> {
    pub f_hz: T,
    pub r_in_ohm: T,
    pub x_in_ohm: T,
    pub gamma_mag: T,
    pub rl_db: T,
    pub vswr: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResponse<T> {
    pub reference_impedance: T,
    pub samples: Vec<ResponseSample<T>>,
}

impl<T: Real> FrequencyResponse<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                to_f64(s.f_hz),
                to_f64(s.r_in_ohm),
                to_f64(s.x_in_ohm),
                to_f64(s.gamma_mag),
                to_f64(s.rl_db),
                to_f64(s.vswr)
            ));
        }
        out
    }
}

/// Evaluates `model` on the sweep grid. Samples are computed in parallel and
/// returned in grid order.
pub fn sweep<T: Real>(model: &PatchModel<T>, spec: &SweepSpec<T>) -> Result<FrequencyResponse<T>> {
    spec.validate()?;
    let res = model.resonator()?;
    let z_ref = spec.reference_impedance;
    let samples = spec
        .frequencies()
        .into_par_iter()
        .map(|f| {
            let z = res.impedance(f)?;
            let gamma = reflection(z, z_ref)?;
            Ok(ResponseSample {
                f_hz: f,
                r_in_ohm: z.re,
                x_in_ohm: z.im,
                gamma_mag: gamma.norm(),
                rl_db: return_loss_db(gamma),
                vswr: vswr(gamma),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyResponse {
        reference_impedance: z_ref,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport<T> {
    pub f_res: T,
    pub rl_min_db: T,
    pub vswr_at_res: T,
    /// Width of the contiguous band around `f_res` with RL at or below -10 dB.
    pub bandwidth_hz: T,
    pub q_loaded: Option<T>,
    /// The RL minimum sits on the first or last sample.
    pub edge_of_sweep: bool,
    /// The -10 dB band runs past an end of the sweep.
    pub bandwidth_truncated: bool,
    /// No sample reaches -10 dB.
    pub no_bandwidth: bool,
    pub warnings: Vec<String>,
}

/// Locates the return-loss minimum and the -10 dB band around it.
pub fn extract_resonance<T: Real>(resp: &FrequencyResponse<T>) -> Result<ResonanceReport<T>> {
    let s = &resp.samples;
    if s.len() < 2 {
        return Err(Error::Domain(
            "resonance extraction needs at least 2 samples".into(),
        ));
    }
    let mut i_min = 0;
    for (i, p) in s.iter().enumerate() {
        if p.rl_db < s[i_min].rl_db {
            i_min = i;
        }
    }
    let last = s.len() - 1;
    let mut warnings = Vec::new();
    let edge_of_sweep = i_min == 0 || i_min == last;
    let f_res = if edge_of_sweep {
        warnings.push("return-loss minimum lies on the sweep boundary".to_string());
        s[i_min].f_hz
    } else {
        let (y0, y1, y2) = (s[i_min - 1].rl_db, s[i_min].rl_db, s[i_min + 1].rl_db);
        let (f0, f1, f2) = (s[i_min - 1].f_hz, s[i_min].f_hz, s[i_min + 1].f_hz);
        let denom = y0 - lit::<T>(2.0) * y1 + y2;
        if denom > T::zero() && (f2 - f1 - (f1 - f0)).abs() <= (f2 - f0) * lit(1e-9) {
            let delta = lit::<T>(0.5) * (y0 - y2) / denom;
            f1 + delta * (f2 - f0) / lit(2.0)
        } else {
            f1
        }
    };

    let threshold: T = lit(BANDWIDTH_RL_DB);
    let inside = |p: &ResponseSample<T>| p.rl_db <= threshold;
    let crossing = |a: &ResponseSample<T>, b: &ResponseSample<T>| {
        let t = (threshold - a.rl_db) / (b.rl_db - a.rl_db);
        a.f_hz + t * (b.f_hz - a.f_hz)
    };
    let mut bandwidth_truncated = false;
    let no_bandwidth = !inside(&s[i_min]);
    let bandwidth_hz = if no_bandwidth {
        warnings.push("no sample reaches -10 dB return loss".to_string());
        T::zero()
    } else {
        let mut lo = i_min;
        while lo > 0 && inside(&s[lo - 1]) {
            lo -= 1;
        }
        let f_lo = if lo == 0 {
            bandwidth_truncated = true;
            s[0].f_hz
        } else {
            crossing(&s[lo - 1], &s[lo])
        };
        let mut hi = i_min;
        while hi < last && inside(&s[hi + 1]) {
            hi += 1;
        }
        let f_hi = if hi == last {
            bandwidth_truncated = true;
            s[last].f_hz
        } else {
            crossing(&s[hi], &s[hi + 1])
        };
        if bandwidth_truncated {
            warnings
                .push("-10 dB band extends past the sweep; bandwidth is a lower bound".to_string());
        }
        f_hi - f_lo
    };
    Ok(ResonanceReport {
        f_res,
        rl_min_db: s[i_min].rl_db,
        vswr_at_res: s[i_min].vswr,
        bandwidth_hz,
        q_loaded: if bandwidth_hz > T::zero() {
            Some(f_res / bandwidth_hz)
        } else {
            None
        },
        edge_of_sweep,
        bandwidth_truncated,
        no_bandwidth,
        warnings,
    })
}
