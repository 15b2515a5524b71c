//! Reproduction commands behind the `qcap` binary.
//!
//! Every command returns a list of [`ReproReport`]s. A report pairs a
//! computed number with the relation it must satisfy; the process exits 0
//! only when every report passes.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::value::RawValue;
use thiserror::Error;

use qcap_core::channels::{
    channel_from_json, completely_depolarizing, erasure_channel, flagged_mixture, horodecki_channel_4, horodecki_q,
    identity_channel, is_ppt, switch_channel, ChannelJsonError,
};
use qcap_core::constructions::{gap_analysis, horodecki_ensemble_h4, nonconvexity_analysis, verify_halving_identity};
use qcap_core::information::{binary_entropy, private_information_value};
use qcap_core::optimizer::{maximize_coherent_information, OptimizerConfig};
use qcap_core::selftest::{run_selftest, SelftestOptions, SelftestReport};
use qcap_core::KrausChannel64;

/// Probabilities evaluated by `nonconvexity` when none are given.
pub const DEFAULT_P_SAMPLES: [f64; 5] = [0.001, 0.002, 0.004, 0.0041, 0.008];

/// Tolerance for equality against values recomputed from closed forms.
pub const EXACT_TOL: f64 = 1e-8;
/// Halving identity: both sides are computed independently.
pub const HALVING_TOL: f64 = 1e-9;
/// Threshold probability against its rounded published value.
pub const P_STAR_TOL: f64 = 5e-5;
/// Default bound for certifying a zero single-letter capacity.
pub const ZERO_CERT_TOL: f64 = 1e-6;
/// Partial-transpose eigenvalues above this count as non-negative.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read channel file {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    ChannelJson(#[from] ChannelJsonError),

    #[error("bad channel spec `{0}`: expected a file path, builtin:horodecki4, builtin:erasure:D:P, builtin:identity:D, builtin:depolarizing:D, builtin:flagged:P or builtin:switch")]
    ChannelSpec(String),

    #[error(transparent)]
    Core(#[from] qcap_core::Error),
}

impl CliError {
    /// 2 for unusable input, 1 for failures during computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "=")]
    Equal,
    /// Reported for information; always passes.
    #[serde(rename = "info")]
    Info,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Greater => ">",
            Relation::AtLeast => ">=",
            Relation::Less => "<",
            Relation::AtMost => "<=",
            Relation::Equal => "=",
            Relation::Info => "info",
        })
    }
}

impl Relation {
    /// Inequalities are strict comparisons against the bound; equality
    /// passes within `tolerance`.
    pub fn holds(self, value: f64, bound: f64, tolerance: f64) -> bool {
        match self {
            Relation::Greater => value > bound,
            Relation::AtLeast => value >= bound,
            Relation::Less => value < bound,
            Relation::AtMost => value <= bound,
            Relation::Equal => (value - bound).abs() <= tolerance,
            Relation::Info => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub quantity: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u64,
    pub note: Option<String>,
}

impl ReproReport {
    pub fn new(quantity: impl Into<String>, value: f64, relation: Relation, bound: f64, tolerance: f64) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            relation,
            bound,
            tolerance,
            passed: value.is_finite() && relation.holds(value, bound, tolerance),
            runtime_ms: 0,
            note: None,
        }
    }

    pub fn info(quantity: impl Into<String>, value: f64) -> Self {
        Self::new(quantity, value, Relation::Info, f64::NAN, 0.0)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn timed(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }
}

fn short(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

impl fmt::Display for ReproReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:<44} {:>24.17e}", self.quantity, self.value)?;
        if self.relation != Relation::Info {
            write!(f, "  {} {}", self.relation, short(self.bound))?;
            if self.relation == Relation::Equal {
                write!(f, " ± {:e}", self.tolerance)?;
            }
        }
        write!(f, "  [{} ms]", self.runtime_ms)?;
        if let Some(note) = &self.note {
            write!(f, "  ({note})")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    quantity: &'a str,
    value: Box<RawValue>,
    relation: Relation,
    bound: Box<RawValue>,
    tolerance: Box<RawValue>,
    passed: bool,
    runtime_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

/// JSON number with 17 significant digits, or `null` when not finite.
fn json_number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("valid JSON number")
}

/// Machine-readable array of reports.
pub fn reports_to_json(reports: &[ReproReport]) -> String {
    let rows: Vec<ReportJson> = reports
        .iter()
        .map(|r| ReportJson {
            quantity: &r.quantity,
            value: json_number(r.value),
            relation: r.relation,
            bound: json_number(r.bound),
            tolerance: json_number(r.tolerance),
            passed: r.passed,
            runtime_ms: r.runtime_ms,
            note: r.note.as_deref(),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("reports serialize")
}

pub fn all_passed(reports: &[ReproReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// 1 − h₂(q) with q = √2/(1+√2): the key rate of the Horodecki channel on
/// its two-state ensemble, from the closed form.
pub fn closed_form_private_value() -> f64 {
    1.0 - binary_entropy(horodecki_q::<f64>())
}

/// Private value of the Horodecki channel, both sides of the halving
/// identity with 50% erasure, and the PPT test of the Horodecki Choi matrix.
pub fn cmd_superactivation() -> Result<Vec<ReproReport>, CliError> {
    let nh = horodecki_channel_4::<f64>();
    let ensemble = horodecki_ensemble_h4::<f64>();
    let closed = closed_form_private_value();
    let mut out = Vec::new();

    let t = Instant::now();
    let private = private_information_value(&nh, &ensemble)?;
    let ms = elapsed_ms(t);
    out.push(ReproReport::new("private_information_value", private, Relation::Greater, 0.02, 0.0).timed(ms));
    out.push(
        ReproReport::new("private_information_value vs 1 - h2(q)", private, Relation::Equal, closed, EXACT_TOL)
            .timed(ms),
    );

    let t = Instant::now();
    let halving = verify_halving_identity(&nh, &ensemble)?;
    let ms = elapsed_ms(t);
    out.push(
        ReproReport::new("coherent_information(N_H x A_e, rho_AC)", halving.lhs, Relation::Greater, 0.01, 0.0)
            .timed(ms),
    );
    out.push(
        ReproReport::new(
            "coherent_information vs (1 - h2(q))/2",
            halving.lhs,
            Relation::Equal,
            closed / 2.0,
            EXACT_TOL,
        )
        .timed(ms),
    );
    out.push(ReproReport::info("halving_identity_rhs", halving.rhs).timed(ms));
    out.push(
        ReproReport::new("halving_identity_abs_diff", halving.abs_diff, Relation::AtMost, HALVING_TOL, 0.0)
            .timed(ms)
            .with_note(format!("erasure input dimension {}", halving.erasure_input_dim)),
    );

    let t = Instant::now();
    let (_, min) = is_ppt(&nh.choi_matrix(), &["R"])?;
    out.push(
        ReproReport::new("horodecki_choi_min_pt_eigenvalue", min, Relation::AtLeast, -PPT_TOL, 0.0)
            .timed(elapsed_ms(t)),
    );
    Ok(out)
}

/// Threshold probability and flagged-mixture coherent information at each
/// `p`, computed directly and from the branch decomposition.
pub fn cmd_nonconvexity(p_list: &[f64]) -> Result<Vec<ReproReport>, CliError> {
    let p_list = if p_list.is_empty() { &DEFAULT_P_SAMPLES[..] } else { p_list };
    let t = Instant::now();
    let r = nonconvexity_analysis::<f64>(p_list)?;
    let ms = elapsed_ms(t);
    let mut out = vec![
        ReproReport::new("p_star", r.p_star, Relation::Equal, 0.0041, P_STAR_TOL).timed(ms).with_note("0.0041 rounded"),
        ReproReport::new("c_bound", r.c_bound, Relation::Equal, 6f64.log2(), 1e-12).timed(ms).with_note("log2 6"),
        ReproReport::new("i1 = coherent_information(N_H x A_e)", r.i1, Relation::Greater, 0.0, 0.0).timed(ms),
        ReproReport::new("coherent_information(N_H x N_H)", r.i_hh, Relation::AtMost, 0.0, 0.0).timed(ms),
    ];
    for s in &r.samples {
        let diff = (s.direct - s.decomposition).abs();
        out.push(
            ReproReport::new(format!("decomposition_abs_diff(p={})", s.p), diff, Relation::AtMost, EXACT_TOL, 0.0)
                .timed(ms),
        );
        let name = format!("coherent_information(M_p x M_p, p={})", s.p);
        let report = if s.p == 0.0 {
            ReproReport::new(name, s.direct, Relation::Equal, 0.0, HALVING_TOL).with_note("pure erasure branch")
        } else if s.p < r.p_star {
            ReproReport::new(name, s.direct, Relation::Greater, 0.0, 0.0)
        } else {
            ReproReport::info(name, s.direct).with_note("outside guaranteed region")
        };
        out.push(report.timed(ms));
    }
    Ok(out)
}

/// Switch channel: optimizer bound on its own I_c, and I_c of two uses at
/// the routed input.
pub fn cmd_gap(cfg: &OptimizerConfig, zero_tol: f64) -> Result<Vec<ReproReport>, CliError> {
    let t = Instant::now();
    let g = gap_analysis::<f64>(cfg)?;
    let ms = elapsed_ms(t);
    let closed = closed_form_private_value() / 2.0;
    Ok(vec![
        ReproReport::new("switch_din", g.din as f64, Relation::Equal, 8.0, 0.0).timed(ms),
        ReproReport::new("switch_dout", g.dout as f64, Relation::Equal, 10.0, 0.0).timed(ms),
        ReproReport::new("switch_denv", g.denv as f64, Relation::Equal, 11.0, 0.0).timed(ms),
        ReproReport::new("q1_single_bound", g.q1_single_bound, Relation::AtMost, zero_tol, 0.0).timed(ms).with_note(
            format!(
                "numerical certification: {} restarts, {} iterations in the best, converged = {}",
                cfg.restarts, g.iterations_used, g.converged
            ),
        ),
        ReproReport::new("q1_pair_value", g.q1_pair_value, Relation::Greater, 0.0, 0.0).timed(ms),
        ReproReport::new("q1_pair_value vs (1 - h2(q))/2", g.q1_pair_value, Relation::Equal, closed, EXACT_TOL)
            .timed(ms),
    ])
}

/// Resolves `builtin:...` names or reads a channel JSON file.
pub fn load_channel(spec: &str) -> Result<KrausChannel64, CliError> {
    let Some(rest) = spec.strip_prefix("builtin:") else {
        let text = std::fs::read_to_string(Path::new(spec))
            .map_err(|source| CliError::Io { path: spec.to_string(), source })?;
        return Ok(channel_from_json(&text)?);
    };
    let bad = || CliError::ChannelSpec(spec.to_string());
    let parts: Vec<&str> = rest.split(':').collect();
    let dim = |s: &str| s.parse::<usize>().ok().filter(|&d| d > 0).ok_or_else(bad);
    let prob = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let erasure_half = || erasure_channel::<f64>(4, 0.5);
    Ok(match parts.as_slice() {
        ["horodecki4"] => horodecki_channel_4(),
        ["erasure", d, p] => erasure_channel(dim(d)?, prob(p)?)?,
        ["identity", d] => identity_channel(dim(d)?),
        ["depolarizing", d] => completely_depolarizing(dim(d)?),
        ["flagged", p] => flagged_mixture(&horodecki_channel_4(), &erasure_half()?, prob(p)?)?,
        ["switch"] => switch_channel(&horodecki_channel_4(), &erasure_half()?)?,
        _ => return Err(bad()),
    })
}

/// Maximizes coherent information of one channel.
pub fn cmd_maximize(spec: &str, cfg: &OptimizerConfig, zero_tol: f64) -> Result<Vec<ReproReport>, CliError> {
    let channel = load_channel(spec)?;
    let t = Instant::now();
    let r = maximize_coherent_information(&channel, cfg)?;
    let ms = elapsed_ms(t);
    let eigenvalues = r.best_state.eigenvalues()?;
    let spectrum: Vec<String> = eigenvalues.iter().rev().map(|l| format!("{l:.6}")).collect();
    Ok(vec![
        ReproReport::info("best_value", r.best_value).timed(ms).with_note(format!(
            "din {}, dout {}, denv {}; restart {} won after {} iterations, converged = {}; zero within {zero_tol:e}: {}",
            channel.din(),
            channel.dout(),
            channel.denv(),
            r.best_restart,
            r.iterations_used,
            r.converged,
            r.best_value <= zero_tol
        )),
        ReproReport::info("best_state_max_eigenvalue", eigenvalues.last().copied().unwrap_or(f64::NAN))
            .timed(ms)
            .with_note(format!("spectrum [{}]", spectrum.join(", "))),
    ])
}

pub fn cmd_selftest(opts: &SelftestOptions) -> (SelftestReport, Vec<ReproReport>) {
    let t = Instant::now();
    let report = run_selftest(opts);
    let ms = elapsed_ms(t);
    let rows = report
        .suites
        .iter()
        .map(|s| {
            let failed = s.failures.len() as f64;
            let mut row = ReproReport::new(format!("selftest: {}", s.name), failed, Relation::Equal, 0.0, 0.0)
                .timed(ms)
                .with_note(format!("{} checks", s.checks));
            if let Some(first) = s.failures.first() {
                row = row.with_note(format!("{} checks; first failure: {first}", s.checks));
            }
            row
        })
        .collect();
    (report, rows)
}
