//! Check reports: the JSON envelope written with `--json` and the
//! human-readable rendering printed to stdout.

use std::time::Duration;

use serde::Serialize;
use wpcert_core::certificates::{Certificate, CertConfig, ConditionStatus};

/// Versioned JSON envelope around a [`Certificate`].
#[derive(Serialize)]
pub struct Report<'a> {
    /// Bumped when the report shape changes incompatibly.
    pub schema_version: &'static str,
    pub tool: Tool,
    pub wall_clock_ms: u64,
    /// Master seed used for every simulation-based condition.
    pub seed: u64,
    pub config: ConfigEcho,
    pub certificate: &'a Certificate,
}

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

/// The effective numeric configuration, echoed for reproducibility.
#[derive(Serialize)]
pub struct ConfigEcho {
    pub tol: f64,
    pub float_tol: f64,
    pub fixpoint_tol: f64,
    pub evidence_samples: u64,
    pub step_cap: u64,
    pub threads: usize,
}

impl<'a> Report<'a> {
    pub fn new(cert: &'a Certificate, cfg: &CertConfig, wall: Duration) -> Self {
        Report {
            schema_version: "1",
            tool: Tool { name: "wpcert", version: env!("CARGO_PKG_VERSION") },
            wall_clock_ms: wall.as_millis() as u64,
            seed: cfg.sim.seed,
            config: ConfigEcho {
                tol: cfg.tol,
                float_tol: cfg.float_tol,
                fixpoint_tol: cfg.fixpoint.abs_tol,
                evidence_samples: cfg.evidence_samples,
                step_cap: cfg.sim.step_cap,
                threads: cfg.sim.threads,
            },
            certificate: cert,
        }
    }
}

fn status_tag(status: ConditionStatus) -> &'static str {
    match status {
        ConditionStatus::Passed => "PASS",
        ConditionStatus::Failed => "FAIL",
        ConditionStatus::Inconclusive => "UNDECIDED",
    }
}

/// Render a certificate for terminal consumption. The first line carries the
/// verdict so scripts can grep it without parsing JSON.
pub fn render_human(cert: &Certificate) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "verdict    {}", cert.verdict);
    let _ = writeln!(out, "rule       {} ({})", cert.rule, cert.kind.name());
    let _ = writeln!(out, "certifies  {}", cert.certified);
    if let Some(w) = &cert.witness {
        let _ = writeln!(out, "witness    {w}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "conditions");
    for c in &cert.conditions {
        let sim = if c.simulation_based { " (simulation-based)" } else { "" };
        let _ = writeln!(out, "  [{}] {}{} — {}", status_tag(c.status), c.name, sim, c.detail);
        if let Some(w) = &c.witness {
            let _ = writeln!(out, "         witness: {w}");
        }
    }
    if let Some(o) = &cert.oracle {
        let _ = writeln!(out);
        if o.agreed {
            let _ = writeln!(
                out,
                "oracle     agreed ({}/{} states converged): {}",
                o.converged_states, o.checked_states, o.note
            );
        } else {
            let _ = writeln!(
                out,
                "oracle     DISAGREED by {:.3e} at {} ({}/{} states converged): {}",
                o.max_violation,
                o.worst_state.as_deref().unwrap_or("?"),
                o.converged_states,
                o.checked_states,
                o.note
            );
        }
    }
    if !cert.caveats.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "caveats");
        for c in &cert.caveats {
            let _ = writeln!(out, "  - {c}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use wpcert_core::certificates::{ConditionResult, Verdict};
    use wpcert_core::transformers::TransformerKind;

    fn sample_cert() -> Certificate {
        Certificate {
            rule: "park-upper".into(),
            kind: TransformerKind::Wp,
            verdict: Verdict::Rejected,
            certified: "wp(loop, post) <= invariant at every domain state".into(),
            conditions: vec![ConditionResult {
                name: "superinvariance".into(),
                status: ConditionStatus::Failed,
                detail: "gap 1 at a=1".into(),
                witness: Some("a=1".into()),
                simulation_based: false,
            }],
            caveats: vec!["all side conditions are checked over the domain only".into()],
            oracle: None,
            witness: Some("a=1".into()),
        }
    }

    #[test]
    fn human_rendering_leads_with_the_verdict() {
        let text = render_human(&sample_cert());
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("verdict"), "got: {first}");
        assert!(first.contains("REJECTED"));
        assert!(text.contains("[FAIL] superinvariance"));
        assert!(text.contains("witness: a=1"));
        assert!(text.contains("caveats"));
    }

    #[test]
    fn json_report_has_the_envelope_fields() {
        let cert = sample_cert();
        let cfg = CertConfig::default();
        let rep = Report::new(&cert, &cfg, Duration::from_millis(12));
        let json: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(json["schema_version"], "1");
        assert_eq!(json["tool"]["name"], "wpcert");
        assert_eq!(json["seed"], 0xC0FFEE);
        assert_eq!(json["certificate"]["verdict"], "REJECTED");
        assert_eq!(json["certificate"]["kind"], "wp");
        assert_eq!(json["certificate"]["conditions"][0]["status"], "FAILED");
    }
}
