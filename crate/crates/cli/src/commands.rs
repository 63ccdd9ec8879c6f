use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use mmpatch::circpatch::{
    circ_losses, circ_warnings, feed_radius_for_match, feed_taper, pattern_cut, resonant_frequency,
    resonant_radius,
};
use mmpatch::media::thickness_regime;
use mmpatch::rectpatch::{
    analyze_rect, feed_offset_for_match, synth_rect_with, RECT_CALIBRATION_SCALE,
};
use mmpatch::response::{
    extract_resonance, reflection, return_loss_db, sweep, vswr, BANDWIDTH_RL_DB, RL_FLOOR_DB,
};
use mmpatch::specfun::DEFAULT_ROOT_TOL;
use mmpatch::{
    CircOptions, CircPatchDesign64, Error, PatchModel64, PatternPlane, RectModel,
    RectPatchDesign64, Regime, SubstrateSpec64, SweepSpec64, WidthRule,
};
use num_complex::Complex64;

use crate::config::{Geometry, Job};
use crate::error::CliError;

/// Floor for pattern levels so nulls stay finite in CSV and JSON.
pub const PATTERN_FLOOR_DB: f64 = -100.0;

pub const PATTERN_CSV_HEADER: &str = "theta_deg,e_plane_db,h_plane_db";

/// What a command produces: a JSON object, optionally with a dedicated CSV
/// table. Commands without one flatten the object to `key,value` rows.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
}

enum Variant {
    Rect(RectModel),
    Circ(CircOptions),
}

fn variant(job: &Job) -> Result<Variant, CliError> {
    let name = job.variant.trim();
    Ok(match job.geometry {
        Geometry::Rect if name.is_empty() => Variant::Rect(RectModel::Calibrated),
        Geometry::Rect => Variant::Rect(name.parse()?),
        Geometry::Circ => Variant::Circ(name.parse()?),
    })
}

fn substrate(job: &Job) -> Result<SubstrateSpec64, CliError> {
    Ok(SubstrateSpec64::new(
        job.eps_r,
        job.h,
        job.tan_delta,
        job.sigma,
    )?)
}

#[derive(Serialize)]
struct JobEcho<'a> {
    command: &'a str,
    geometry: &'a str,
    model_variant: String,
    substrate: SubstrateSpec64,
    f_design: f64,
    target_ohm: f64,
    reference_impedance: f64,
    decisions: BTreeMap<&'static str, String>,
    defaults: BTreeMap<&'static str, f64>,
    defaults_applied: &'a [&'static str],
}

fn echo<'a>(command: &'a str, job: &'a Job, v: &Variant) -> Result<JobEcho<'a>, CliError> {
    let mut decisions = BTreeMap::new();
    decisions.insert("off_resonance_model", "parallel-rlc".to_string());
    decisions.insert("bandwidth_criterion_db", BANDWIDTH_RL_DB.to_string());
    decisions.insert("rl_floor_db", RL_FLOOR_DB.to_string());
    decisions.insert("pattern_floor_db", PATTERN_FLOOR_DB.to_string());
    decisions.insert(
        "regime_threshold",
        "linear-in-inverse-sqrt-eps_r".to_string(),
    );
    decisions.insert("root_tolerance_m", DEFAULT_ROOT_TOL.to_string());
    let model_variant = match v {
        Variant::Rect(m) => {
            decisions.insert(
                "width_rule",
                match job.width_rule {
                    WidthRule::InverseSqrt => "inverse-sqrt",
                    WidthRule::Printed => "printed",
                }
                .to_string(),
            );
            decisions.insert("t1_form", "printed".to_string());
            decisions.insert(
                "wide_strip_form",
                "u=W/(2h),coef=(eps_r+1)/eps_r".to_string(),
            );
            decisions.insert(
                "r_dielectric",
                "R_c*tan_delta*h*sqrt(pi*f*mu0*sigma)".to_string(),
            );
            decisions.insert("feed_model", "edge-normalized-taper".to_string());
            decisions.insert("resonance", "f_design".to_string());
            decisions.insert("q_factor", "Q_r".to_string());
            decisions.insert("calibration_scale", RECT_CALIBRATION_SCALE.to_string());
            m.as_str().to_string()
        }
        Variant::Circ(o) => {
            decisions.insert("fringing", o.fringing.to_string());
            decisions.insert("t1_form", o.t1_form.as_str().to_string());
            decisions.insert("feed_rule", o.feed_rule.as_str().to_string());
            decisions.insert("loss_resistances", "series:R_x=R_r*P_x/P_r".to_string());
            decisions.insert("q_factor", "omega*W_T/sum(P)".to_string());
            decisions.insert("radius_in_closed_forms", "a_eff".to_string());
            o.variant_name()
        }
    };
    let mut defaults = BTreeMap::new();
    defaults.insert("sigma", mmpatch::media::DEFAULT_SIGMA);
    defaults.insert("tan_delta", mmpatch::media::DEFAULT_TAN_DELTA);
    defaults.insert(
        "reference_impedance",
        mmpatch::response::DEFAULT_REFERENCE_IMPEDANCE,
    );
    Ok(JobEcho {
        command,
        geometry: job.geometry.as_str(),
        model_variant,
        substrate: substrate(job)?,
        f_design: job.f_design,
        target_ohm: job.target,
        reference_impedance: job.zref,
        decisions,
        defaults,
        defaults_applied: &job.defaults_applied,
    })
}

fn rect_design(job: &Job, model: RectModel) -> Result<RectPatchDesign64, CliError> {
    let sub = substrate(job)?;
    let base = match (job.rect_length, job.rect_width) {
        (Some(l), Some(w)) => RectPatchDesign64::new(l, w, 0.0, sub, job.f_design)?,
        (l, w) => {
            let s = synth_rect_with(job.f_design, &sub, job.width_rule)?;
            RectPatchDesign64::new(
                l.unwrap_or(s.length),
                w.unwrap_or(s.width),
                0.0,
                sub,
                job.f_design,
            )?
        }
    };
    let offset = match job.rect_feed_offset {
        Some(a) => a,
        None => feed_offset_for_match(&base, job.f_design, model, job.target, DEFAULT_ROOT_TOL)?,
    };
    Ok(base.with_feed_offset(offset)?)
}

fn circ_design(job: &Job, opts: &CircOptions) -> Result<CircPatchDesign64, CliError> {
    let sub = substrate(job)?;
    let a = match job.circ_radius {
        Some(a) => a,
        None => resonant_radius(job.f_design, &sub, opts.fringing, DEFAULT_ROOT_TOL)?,
    };
    let design = CircPatchDesign64::new(a, sub, job.f_design, opts.fringing)?;
    let rho0 = match job.circ_feed_radius {
        Some(r) => r,
        None => feed_radius_for_match(&design, job.f_design, job.target, opts, DEFAULT_ROOT_TOL)?,
    };
    Ok(design.with_feed_radius(rho0)?)
}

fn regime_block(job: &Job, warnings: &mut Vec<String>) -> Result<Value, CliError> {
    let r = thickness_regime(&substrate(job)?, job.f_design)?;
    if r.regime == Regime::Thin {
        warnings.push(format!(
            "h/lambda0 = {:.4} is below the thick-substrate threshold {:.4}",
            r.ratio, r.threshold
        ));
    }
    Ok(serde_json::to_value(r).expect("regime serialises"))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialise")
}

fn match_block(r_in: f64, zref: f64) -> Result<Value, CliError> {
    let g = reflection(Complex64::new(r_in, 0.0), zref)?;
    Ok(json!({
        "gamma_mag": g.norm(),
        "rl_db": return_loss_db(g),
        "vswr": vswr(g),
    }))
}

pub fn design(job: &Job) -> Result<Output, CliError> {
    let v = variant(job)?;
    let mut warnings = Vec::new();
    let regime = regime_block(job, &mut warnings)?;
    let body = match &v {
        Variant::Rect(model) => {
            let d = rect_design(job, *model)?;
            let a = analyze_rect(&d, job.f_design, *model)?;
            json!({ "design": to_json(&d), "derived": to_json(&a.derived) })
        }
        Variant::Circ(opts) => {
            let d = circ_design(job, opts)?;
            warnings.extend(circ_warnings(&d, job.f_design)?);
            let f_r = resonant_frequency(d.radius, &d.substrate, opts.fringing)?;
            json!({ "design": to_json(&d), "f_r": f_r })
        }
    };
    finish("design", job, &v, body, regime, warnings)
}

pub fn analyze(job: &Job) -> Result<Output, CliError> {
    let v = variant(job)?;
    let mut warnings = Vec::new();
    let regime = regime_block(job, &mut warnings)?;
    let body = match &v {
        Variant::Rect(model) => {
            let d = rect_design(job, *model)?;
            let a = analyze_rect(&d, job.f_design, *model)?;
            let b = a.breakdown;
            json!({
                "design": to_json(&d),
                "analysis": to_json(&a),
                "sum_check": {
                    "R_total": b.r_total,
                    "sum_of_parts": b.r_r + b.r_s + b.r_c + b.r_d,
                    "R_s_over_R_r": b.r_s / b.r_r,
                },
                "match": match_block(a.r_in, job.zref)?,
            })
        }
        Variant::Circ(opts) => {
            let d = circ_design(job, opts)?;
            warnings.extend(circ_warnings(&d, job.f_design)?);
            let rep = circ_losses(&d, job.f_design, 1.0, opts)?;
            let b = rep.breakdown;
            let r_in = b.r_total * feed_taper(&d, d.feed_radius)?;
            json!({
                "design": to_json(&d),
                "f_r": resonant_frequency(d.radius, &d.substrate, opts.fringing)?,
                "losses": to_json(&rep),
                "G_dB": 10.0 * rep.g.log10(),
                "D_dB": 10.0 * rep.d.log10(),
                "R_in": r_in,
                "sum_check": {
                    "R_total": b.r_total,
                    "sum_of_parts": b.r_r + b.r_s + b.r_c + b.r_d,
                    "R_s_over_R_r": b.r_s / b.r_r,
                },
                "match": match_block(r_in, job.zref)?,
            })
        }
    };
    finish("analyze", job, &v, body, regime, warnings)
}

fn patch_model(job: &Job, v: &Variant) -> Result<PatchModel64, CliError> {
    Ok(match v {
        Variant::Rect(model) => PatchModel64::Rect {
            design: rect_design(job, *model)?,
            model: *model,
        },
        Variant::Circ(opts) => PatchModel64::Circ {
            design: circ_design(job, opts)?,
            options: *opts,
        },
    })
}

pub fn sweep_cmd(job: &Job) -> Result<Output, CliError> {
    let v = variant(job)?;
    let mut warnings = Vec::new();
    let regime = regime_block(job, &mut warnings)?;
    let model = patch_model(job, &v)?;
    let spec = SweepSpec64::new(job.f_start, job.f_stop, job.points, job.zref)?;
    let resp = sweep(&model, &spec)?;
    let res = extract_resonance(&resp)?;
    warnings.extend(res.warnings.iter().cloned());
    let csv = resp.to_csv();
    let body = json!({
        "sweep": to_json(&spec),
        "resonator": to_json(&model.resonator()?),
        "resonance": to_json(&res),
        "response": to_json(&resp),
    });
    let mut out = finish("sweep", job, &v, body, regime, warnings)?;
    out.csv = Some(csv);
    Ok(out)
}

pub fn pattern_cmd(job: &Job) -> Result<Output, CliError> {
    let v = variant(job)?;
    let opts = match &v {
        Variant::Circ(o) => *o,
        Variant::Rect(_) => {
            return Err(Error::Unsupported(
                "pattern cuts are only modelled for the circular patch".into(),
            )
            .into())
        }
    };
    let mut warnings = Vec::new();
    let regime = regime_block(job, &mut warnings)?;
    let d = circ_design(job, &opts)?;
    let f = job.f_design;
    let e = pattern_cut(&d, f, PatternPlane::E, job.pattern_step)?;
    let h = pattern_cut(&d, f, PatternPlane::H, job.pattern_step)?;
    let floor = |x: f64| x.max(PATTERN_FLOOR_DB);
    let mut csv = String::from(PATTERN_CSV_HEADER);
    csv.push('\n');
    let mut rows = Vec::with_capacity(e.len());
    for (pe, ph) in e.iter().zip(&h) {
        let theta_deg = pe.theta.to_degrees();
        csv.push_str(&format!(
            "{},{},{}\n",
            theta_deg,
            floor(pe.level_db),
            floor(ph.level_db)
        ));
        rows.push(json!({
            "theta_deg": theta_deg,
            "e_plane_db": floor(pe.level_db),
            "h_plane_db": floor(ph.level_db),
        }));
    }
    let body = json!({ "design": to_json(&d), "pattern": rows });
    let mut out = finish("pattern", job, &v, body, regime, warnings)?;
    out.csv = Some(csv);
    Ok(out)
}

fn finish(
    command: &str,
    job: &Job,
    v: &Variant,
    body: Value,
    regime: Value,
    warnings: Vec<String>,
) -> Result<Output, CliError> {
    let mut obj = match body {
        Value::Object(m) => m,
        _ => unreachable!("command bodies are objects"),
    };
    obj.insert("job".into(), to_json(&echo(command, job, v)?));
    obj.insert("regime".into(), regime);
    obj.insert("warnings".into(), json!(warnings));
    Ok(Output {
        json: Value::Object(obj),
        csv: None,
    })
}

/// `key,value` rows from a JSON object, keys dotted by path.
pub fn flatten_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{}.{}", prefix, k)
                    };
                    walk(&key, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{}.{}", prefix, i), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{},{}\n", prefix, quote(s))),
            other => out.push_str(&format!("{},{}\n", prefix, other)),
        }
    }
    fn quote(s: &str) -> String {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    }
    let mut out = String::from("key,value\n");
    walk("", v, &mut out);
    out
}
