use atomkit::atomic::{
    build_atomic_system, lframe_bounds, verify_theorem5, LFrameCertificate, SCOPE_NOTE,
};
use atomkit::frames::{canonical_dual, frame_bounds, reconstruct, reconstruct_swapped, FrameFamily, Residual};
use atomkit::kernels::{
    bekolle_ratio, kernel_eval, kernel_norm, normalized_kernel_eval, BekolleReport, KernelSpec, NormKind,
};
use atomkit::numeric::{norm, Tolerances};
use atomkit::sampling::{
    adjoint_sample_expansion, build_basis, default_degree, operator_sample_reconstruct,
    sampling_audit, NormMode, SamplingAudit,
};
use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::canonical::float;
use crate::doc::{ProblemDocument, DEFAULT_RESOLUTION, DEFAULT_SAMPLES};
use crate::{CliError, Flags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    FrameBounds,
    Dual,
    Reconstruct,
    LframeAudit,
    AtomicBuild,
    VerifyTheorem5,
    KernelEval,
    BekolleRatio,
    SamplingAudit,
    SampleReconstruct,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FrameBounds => "frame-bounds",
            Command::Dual => "dual",
            Command::Reconstruct => "reconstruct",
            Command::LframeAudit => "lframe-audit",
            Command::AtomicBuild => "atomic-build",
            Command::VerifyTheorem5 => "verify-theorem5",
            Command::KernelEval => "kernel-eval",
            Command::BekolleRatio => "bekolle-ratio",
            Command::SamplingAudit => "sampling-audit",
            Command::SampleReconstruct => "sample-reconstruct",
        }
    }
}

/// Command-specific part of a report and whether its certificate passes.
pub struct Outcome {
    pub body: Map<String, Value>,
    pub pass: bool,
}

fn cx(z: Complex64) -> Value {
    json!([float(z.re), float(z.im)])
}

fn cvec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().copied().map(cx).collect())
}

fn family_json(f: &FrameFamily) -> Value {
    Value::Array(f.vectors().iter().map(|v| cvec(v)).collect())
}

fn residuals_json(rs: &[Residual]) -> Value {
    let mut m = Map::new();
    for r in rs {
        m.insert(r.label.clone(), float(r.value));
    }
    Value::Object(m)
}

fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().copied().map(float).collect())
}

fn rel_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    let d: Vec<Complex64> = got.iter().zip(want).map(|(a, b)| a - b).collect();
    let scale = norm(want);
    if scale > 0.0 {
        norm(&d) / scale
    } else {
        norm(&d)
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Optimal lower constant as reported: 0 when the inequality fails, absent
/// (`null`) when it is vacuous.
fn lframe_json(c: &LFrameCertificate) -> Value {
    let lower = if c.vacuous { Value::Null } else { float(c.lower_a.unwrap_or(0.0)) };
    json!({
        "lower_a": lower,
        "upper_b": float(c.upper_b),
        "coeff_norm_c": float(c.coeff_norm_c),
        "vacuous": c.vacuous,
        "range_condition_ok": c.range_condition_ok,
        "passes": c.passes(),
        "witness": c.witness.as_ref().map_or(Value::Null, |w| cvec(w)),
        "residuals": residuals_json(&c.residuals),
    })
}

pub fn run(cmd: Command, doc: &ProblemDocument, flags: &Flags, tol: &Tolerances) -> Result<Outcome, CliError> {
    match cmd {
        Command::FrameBounds => {
            let f = doc.family()?;
            let c = frame_bounds(&f, tol)?;
            let body = obj(vec![
                ("dim", json!(f.dim())),
                ("len", json!(f.len())),
                ("lower_a", float(c.lower_a.unwrap_or(0.0))),
                ("upper_b", float(c.upper_b)),
                ("is_frame", json!(c.is_frame)),
                ("residuals", residuals_json(&c.residuals)),
            ]);
            Ok(Outcome { body, pass: c.is_frame })
        }
        Command::Dual => {
            let f = doc.family()?;
            let d = canonical_dual(&f, tol)?;
            Ok(Outcome { body: obj(vec![("dual", family_json(&d))]), pass: true })
        }
        Command::Reconstruct => {
            let f = doc.family()?;
            let x = doc.vector()?;
            let a = reconstruct(&f, &x, tol)?;
            let b = reconstruct_swapped(&f, &x, tol)?;
            let (ea, eb) = (rel_error(&a, &x), rel_error(&b, &x));
            let body = obj(vec![
                ("reconstruction", cvec(&a)),
                ("reconstruction_swapped", cvec(&b)),
                ("relative_error", float(ea)),
                ("relative_error_swapped", float(eb)),
            ]);
            Ok(Outcome { body, pass: ea <= tol.residual_tol && eb <= tol.residual_tol })
        }
        Command::LframeAudit => {
            let f = doc.family()?;
            let l = doc.operator_or_identity(f.dim())?;
            let c = lframe_bounds(&f, &l, tol)?;
            Ok(Outcome { body: obj(vec![("certificate", lframe_json(&c))]), pass: c.passes() })
        }
        Command::AtomicBuild => {
            let l = doc.operator()?;
            let f = build_atomic_system(&l);
            let c = lframe_bounds(&f, &l, tol)?;
            let body = obj(vec![("family", family_json(&f)), ("certificate", lframe_json(&c))]);
            Ok(Outcome { body, pass: c.passes() })
        }
        Command::VerifyTheorem5 => {
            let f = doc.family()?;
            let l = doc.operator_or_identity(f.dim())?;
            let n = flags.samples.or(doc.samples).unwrap_or(DEFAULT_SAMPLES);
            let r = verify_theorem5(&f, &l, n, tol)?;
            let body = obj(vec![
                ("certificate", lframe_json(&r.certificate)),
                ("atomic_ok", json!(r.atomic_ok)),
                ("bounds_ok", json!(r.bounds_ok)),
                ("dual_ok", json!(r.dual_ok)),
                ("adjoint_ok", json!(r.adjoint_ok)),
                ("link_ok", json!(r.link_ok)),
                ("consistent", json!(r.consistent())),
                ("samples", json!(r.n_samples)),
                ("residuals", residuals_json(&r.residuals)),
            ]);
            Ok(Outcome { body, pass: r.all_pass() })
        }
        Command::KernelEval => kernel_eval_cmd(doc),
        Command::BekolleRatio => {
            let w = doc.weight()?;
            let eta = doc.eta()?;
            let resolution = doc.resolution.unwrap_or(DEFAULT_RESOLUTION);
            let rep = bekolle_ratio(&w, eta, &doc.grid()?, resolution)?;
            Ok(Outcome { body: bekolle_json(&rep, w.label(), eta), pass: true })
        }
        Command::SamplingAudit => {
            let (spec, degree, mode) = sampling_setup(doc, flags)?;
            let b = build_basis(&spec, degree)?;
            let pts = doc.points()?;
            let l = doc.operator_or_identity(b.dim())?;
            let a = sampling_audit(&b, &pts, &l, mode, tol)?;
            let mut body = audit_json(&a, &spec);
            body.insert("points".into(), json!(pts.len()));
            Ok(Outcome { body, pass: a.certificate.passes() })
        }
        Command::SampleReconstruct => {
            let (spec, degree, mode) = sampling_setup(doc, flags)?;
            let b = build_basis(&spec, degree)?;
            let pts = doc.points()?;
            let l = doc.operator_or_identity(b.dim())?;
            let f = doc.vector()?;
            let r = operator_sample_reconstruct(&b, &pts, &l, &f, mode, tol)?;
            let adj = adjoint_sample_expansion(&b, &pts, &l, &f, mode, tol)?;
            let body = obj(vec![
                ("kernel", json!(spec.name())),
                ("truncation_degree", json!(degree)),
                ("norm_mode", json!(mode_name(mode))),
                ("coefficients", cvec(&r.coefficients.values)),
                ("coefficient_norm", float(r.coefficients.norm())),
                ("reconstruction", cvec(&r.reconstruction)),
                ("relative_error", float(r.relative_error)),
                ("adjoint_expansion", cvec(&adj.result)),
                ("adjoint_relative_error", float(adj.relative_error)),
                ("samples", cvec(&adj.samples)),
                ("scale_factors", floats(&adj.scale_factors)),
            ]);
            let pass = r.relative_error <= tol.residual_tol && adj.relative_error <= tol.residual_tol;
            Ok(Outcome { body, pass })
        }
    }
}

fn mode_name(m: NormMode) -> &'static str {
    match m {
        NormMode::Truncated => "truncated",
        NormMode::ClosedForm => "closed_form",
    }
}

fn sampling_setup(doc: &ProblemDocument, flags: &Flags) -> Result<(KernelSpec, usize, NormMode), CliError> {
    let spec = doc.kernel()?;
    let degree = flags.degree.or(doc.degree).unwrap_or_else(|| default_degree(&spec));
    let mode = flags
        .norm_mode
        .map(NormMode::from)
        .or(doc.norm_mode.map(NormMode::from))
        .unwrap_or(NormMode::Truncated);
    Ok((spec, degree, mode))
}

fn audit_json(a: &SamplingAudit, spec: &KernelSpec) -> Map<String, Value> {
    let worst = a.truncation_diagnostics.iter().copied().fold(f64::INFINITY, f64::min);
    obj(vec![
        ("kernel", json!(spec.name())),
        ("certificate", lframe_json(&a.certificate)),
        ("truncation_degree", json!(a.truncation_degree)),
        ("truncation_diagnostics", floats(&a.truncation_diagnostics)),
        ("truncation_ratio_min", float(worst)),
        ("estimate_flag", json!(a.estimate_flag)),
        ("norm_mode", json!(mode_name(a.norm_mode))),
        ("note", json!(SamplingAudit::NOTE)),
    ])
}

fn bekolle_json(rep: &BekolleReport, label: &str, eta: f64) -> Map<String, Value> {
    let ratios: Vec<Value> = rep
        .ratios
        .iter()
        .map(|(sq, r)| json!({"theta": float(sq.theta), "h": float(sq.h), "ratio": float(*r)}))
        .collect();
    obj(vec![
        ("weight", json!(label)),
        ("eta", float(eta)),
        ("sup_ratio", float(rep.sup_ratio)),
        ("argmax", json!({"theta": float(rep.argmax.theta), "h": float(rep.argmax.h)})),
        ("ratios", Value::Array(ratios)),
        ("resolution", json!(rep.resolution)),
        ("note", json!(BekolleReport::NOTE)),
    ])
}

fn kernel_eval_cmd(doc: &ProblemDocument) -> Result<Outcome, CliError> {
    let spec = doc.kernel()?;
    let lambda = doc.lambda()?;
    let n = kernel_norm(&spec, lambda)?;
    let kind = match n.kind {
        NormKind::Exact => "exact",
        NormKind::Estimate => "estimate",
    };
    let mut body = obj(vec![
        ("kernel", json!(spec.name())),
        ("lambda", cx(lambda)),
        ("norm", float(n.value)),
        ("norm_kind", json!(kind)),
    ]);
    // The weighted kernel has no closed form; only its norm estimate is reported.
    if !matches!(spec, KernelSpec::RadialWeightedBergman { .. }) {
        let z = doc.z()?;
        body.insert("z".into(), cx(z));
        body.insert("value".into(), cx(kernel_eval(&spec, z, lambda)?));
        body.insert("normalized_value".into(), cx(normalized_kernel_eval(&spec, z, lambda)?));
    }
    Ok(Outcome { body, pass: true })
}

pub fn scope_note(cmd: Command) -> &'static str {
    match cmd {
        Command::KernelEval => "closed-form kernel values; weighted norms are estimates up to constants",
        Command::BekolleRatio => BekolleReport::NOTE,
        _ => SCOPE_NOTE,
    }
}
