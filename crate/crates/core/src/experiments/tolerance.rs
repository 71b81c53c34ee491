use serde::{Deserialize, Serialize};

/// How strictly computed values must match printed golden values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TolPolicy {
    /// Within 0.6 units of the last printed digit.
    #[default]
    Default,
    /// Within 0.5 units of the last printed digit, i.e. the value rounds to
    /// the printed one.
    Strict,
}

impl TolPolicy {
    pub fn digit_fraction(self) -> f64 {
        match self {
            TolPolicy::Default => 0.6,
            TolPolicy::Strict => 0.5,
        }
    }

    /// Absolute tolerances are scaled by the same ratio as digit tolerances.
    pub fn scale_absolute(self, tol: f64) -> f64 {
        tol * self.digit_fraction() / 0.6
    }
}

/// Significant figures of a printed number such as `3.66e-1`, `2.30` or
/// `0.00865`. Returns `None` for an exact zero.
pub fn sig_figs(printed: &str) -> Option<usize> {
    let mantissa = printed
        .trim()
        .trim_start_matches(['-', '+'])
        .split(['e', 'E'])
        .next()
        .unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let significant = digits.trim_start_matches('0');
    if significant.is_empty() {
        None
    } else {
        Some(significant.len())
    }
}

/// Comparison rule for one golden cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tolerance {
    /// Printed zero: the state must be exactly separable / the value exactly 0.
    ExactZero,
    SigFigs {
        digits: usize,
        bound: f64,
    },
    Absolute {
        bound: f64,
    },
}

impl Tolerance {
    /// `0.6 × 10^{⌊log₁₀|g|⌋ − s + 1}` (0.5 under the strict policy).
    pub fn sig_figs(golden: f64, digits: usize, policy: TolPolicy) -> Self {
        let exponent = golden.abs().log10().floor() as i32 - digits as i32 + 1;
        Tolerance::SigFigs {
            digits,
            bound: policy.digit_fraction() * 10f64.powi(exponent),
        }
    }

    /// Sig-fig rule from the printed string, or [`Tolerance::ExactZero`].
    pub fn from_printed(printed: &str, golden: f64, policy: TolPolicy) -> Self {
        match sig_figs(printed) {
            None => Tolerance::ExactZero,
            Some(s) => Self::sig_figs(golden, s, policy),
        }
    }

    pub fn bound(&self) -> f64 {
        match *self {
            Tolerance::ExactZero => 0.0,
            Tolerance::SigFigs { bound, .. } | Tolerance::Absolute { bound } => bound,
        }
    }

    pub fn accepts(&self, computed: f64, golden: f64) -> bool {
        computed.is_finite() && (computed - golden).abs() <= self.bound()
    }
}
