//! Margin-bearing pass/fail records.

use serde::{Deserialize, Serialize};

/// Absolute float slack applied to every inequality verdict.
pub const FLOAT_SLACK: f64 = 1e-9;

/// An extremal value attached to a report: a vertex, a threshold `k`, or a
/// grid point `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Int(u64),
    Real(f64),
}

impl From<u64> for Witness {
    fn from(v: u64) -> Self {
        Witness::Int(v)
    }
}

impl From<f64> for Witness {
    fn from(v: f64) -> Self {
        Witness::Real(v)
    }
}

/// Outcome of checking one inequality (or one family of inequalities) at
/// one `n`.
///
/// `margin` is `bound − measured`, or the smallest such slack over a sweep;
/// `pass` holds exactly when `margin ≥ −FLOAT_SLACK`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub n: Option<u64>,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, n: Option<u64>, measured: f64, bound: f64) -> Self {
        Self::with_margin(subject, n, measured, bound, bound - measured)
    }

    pub fn with_margin(
        subject: impl Into<String>,
        n: Option<u64>,
        measured: f64,
        bound: f64,
        margin: f64,
    ) -> Self {
        Self {
            subject: subject.into(),
            n,
            measured,
            bound,
            margin,
            pass: margin_passes(margin),
            witnesses: Vec::new(),
            detail: None,
        }
    }

    pub fn witness(mut self, w: impl Into<Witness>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn witnesses<W: Into<Witness>>(mut self, ws: impl IntoIterator<Item = W>) -> Self {
        self.witnesses.extend(ws.into_iter().map(Into::into));
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// Forces a failing verdict regardless of the margin.
    pub fn fail(mut self) -> Self {
        self.pass = false;
        self
    }

    /// Single-line summary for logs and test output.
    pub fn summary(&self) -> String {
        let n = self.n.map(|n| format!(" n={n}")).unwrap_or_default();
        format!(
            "[{}] {}{}: measured={:.6e} bound={:.6e} margin={:.6e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.subject,
            n,
            self.measured,
            self.bound,
            self.margin
        )
    }
}

pub fn margin_passes(margin: f64) -> bool {
    margin >= -FLOAT_SLACK
}

/// Writes reports as CSV with header
/// `subject,n,measured,bound,margin,pass`.
pub fn write_summary_csv<W: std::io::Write>(
    mut w: W,
    reports: &[VerificationReport],
) -> std::io::Result<()> {
    writeln!(w, "subject,n,measured,bound,margin,pass")?;
    for r in reports {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{:e},{:e},{:e},{}",
            r.subject, n, r.measured, r.bound, r.margin, r.pass
        )?;
    }
    Ok(())
}
