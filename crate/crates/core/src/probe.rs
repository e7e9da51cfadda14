//! Sampled evidence for asymptotic conditions.

use serde::Serialize;

/// Grid points used by a decision rule, counted from the small end.
pub const TAIL_POINTS: usize = 8;

/// Relative margin of every sampled decision rule.
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsEvidence,
    FailsEvidence,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::HoldsEvidence => "holds-evidence",
            Verdict::FailsEvidence => "fails-evidence",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `f(x) / x -> infinity` as `x -> 0`.
    Superlinear,
    /// `f(x2)/x2 <= C f(x1)/x1` for `x1 < x2` small.
    QuasiMonotone,
    /// Essentially sub-linear; a failing verdict is evidence of NESL.
    EssentiallySublinear,
    /// `Psi(Q^x)` comparable to `Psi(Q)`.
    SlowGrowth,
}

/// One sampled statistic along the grid. `parameter` is `B` for ESL probes
/// and the exponent `x` for slow-growth probes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub parameter: Option<f64>,
    pub values: Vec<f64>,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub condition: Condition,
    pub rule: &'static str,
    /// `log2` of the grid points, in sampling order.
    pub grid_log2: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
    pub verdict: Verdict,
    /// `C` for quasi-monotonicity, the witnessing `B` for ESL.
    pub constant: Option<f64>,
}

/// The dyadic grid `x = 2^-m` for `m = start, start + step, ..., <= end`.
pub fn dyadic_exponents(start: u32, end: u32, step: u32) -> Vec<u32> {
    (start..=end).step_by(step.max(1) as usize).collect()
}

/// Default `x`-grid exponents: `m = 8..=160` in steps of 8.
pub fn default_x_exponents() -> Vec<u32> {
    dyadic_exponents(8, 160, 8)
}

pub(crate) fn tail(values: &[f64], k: usize) -> &[f64] {
    &values[values.len().saturating_sub(k)..]
}

pub(crate) fn is_nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0])
}

pub(crate) fn band(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}
