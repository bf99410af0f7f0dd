//! Sample-size threshold `n*(δ)` above which population q-dominance carries
//! over to the empirical maps with probability at least `1 − δ`.
//!
//! `n* = max(n1*, n2*)` where, with `h_n` the grid mesh size and `κ_n` the
//! mean-square transport error rate,
//!
//! ```text
//! n1* = min{ n : L̄² h_n²      <= R }
//! n2* = min{ n : C n h_n^d κ_n <= R },   R = δ² Δ^(d+2) / (512 c_d (4(L + L̄))^d)
//! ```
//!
//! `h_n = n^-θ` for `θ <= 1/d` and `n^-(1-θ)/(d-1)` otherwise;
//! `κ_n = n^-1/2` (d <= 3), `n^-1/2 ln n` (d = 4), `n^-2/d` (d >= 5).
//! Everything is evaluated in log space because the results are routinely
//! far beyond `u64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{theta_interval, theta_is_admissible};
use crate::special::lambert_w_m1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdInputs {
    pub d: usize,
    /// Type-I error level δ in (0, 1).
    pub delta: f64,
    /// Dominance margin Δ between the true quantile maps.
    pub margin: f64,
    /// Bi-Lipschitz constant of the true quantile maps, max(L1, L2).
    pub lipschitz: f64,
    /// Lipschitz constant L̄ of the interpolated empirical maps.
    pub interp_lipschitz: f64,
    /// Constant C of the transport error rate.
    pub moment_constant: f64,
    /// Covering constant c_d.
    pub covering_constant: f64,
    pub theta: f64,
}

impl ThresholdInputs {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid(format!("d must be >= 2, got {}", self.d)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return Err(Error::invalid(format!(
                "margin must be positive (no finite threshold without a dominance margin), got {}",
                self.margin
            )));
        }
        for (name, v) in [
            ("lipschitz", self.lipschitz),
            ("interp_lipschitz", self.interp_lipschitz),
            ("moment_constant", self.moment_constant),
            ("covering_constant", self.covering_constant),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !theta_is_admissible(self.d, self.theta) {
            let (lo, hi) = theta_interval(self.d);
            return Err(Error::invalid(format!(
                "theta={} outside ({lo}, {hi}) for d={}",
                self.theta, self.d
            )));
        }
        Ok(())
    }

    fn fine_mesh(&self) -> bool {
        self.theta > 1.0 / self.d as f64
    }

    /// ln of the right-hand side R shared by both defining inequalities.
    fn ln_budget(&self) -> f64 {
        let d = self.d as f64;
        2.0 * self.delta.ln() + (d + 2.0) * self.margin.ln()
            - (512.0 * self.covering_constant).ln()
            - d * (4.0 * (self.lipschitz + self.interp_lipschitz)).ln()
    }

    /// ln h_n at `ln n`.
    fn ln_mesh(&self, ln_n: f64) -> f64 {
        let d = self.d as f64;
        if self.fine_mesh() {
            -(1.0 - self.theta) / (d - 1.0) * ln_n
        } else {
            -self.theta * ln_n
        }
    }

    /// ln κ_n at `ln n` (requires n > 1 when d = 4).
    fn ln_rate(&self, ln_n: f64) -> f64 {
        match self.d {
            2 | 3 => -0.5 * ln_n,
            4 => -0.5 * ln_n + ln_n.ln(),
            d => -2.0 / d as f64 * ln_n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    LowDimCoarse,
    LowDimFine,
    FourDimCoarse,
    FourDimFine,
    HighDimCoarse,
    HighDimFine,
}

impl Branch {
    pub fn of(inputs: &ThresholdInputs) -> Branch {
        match (inputs.d, inputs.fine_mesh()) {
            (0..=3, false) => Branch::LowDimCoarse,
            (0..=3, true) => Branch::LowDimFine,
            (4, false) => Branch::FourDimCoarse,
            (4, true) => Branch::FourDimFine,
            (_, false) => Branch::HighDimCoarse,
            (_, true) => Branch::HighDimFine,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Branch::LowDimCoarse => "d <= 3, theta <= 1/d",
            Branch::LowDimFine => "d <= 3, theta > 1/d",
            Branch::FourDimCoarse => "d = 4, theta <= 1/d (Lambert W)",
            Branch::FourDimFine => "d = 4, theta > 1/d (Lambert W)",
            Branch::HighDimCoarse => "d >= 5, theta <= 1/d",
            Branch::HighDimFine => "d >= 5, theta > 1/d",
        };
        f.write_str(s)
    }
}

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Solves the two defining inequalities exactly.
    #[default]
    Exact,
    /// The widely circulated closed form, which uses `(4(L+L̄))²` instead of
    /// `(4(L+L̄))^d` in the n2* base and `(d−1)/(1−θ)` instead of
    /// `(d−1)/(2(1−θ))` as the fine-mesh n1* exponent. Agrees with
    /// [`Formula::Exact`] for `d = 2`, `θ <= 1/2`.
    Published,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub branch: Branch,
    /// ln of the real-valued solutions before rounding.
    pub ln_n1: f64,
    pub ln_n2: f64,
    /// `max(ceil(n1*), ceil(n2*), 1)`; `+∞` when it overflows `f64`.
    pub n_star: f64,
}

impl Threshold {
    pub fn is_finite(&self) -> bool {
        self.n_star.is_finite()
    }

    /// `n*` as an integer when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n_star.is_finite() && self.n_star <= u64::MAX as f64).then_some(self.n_star as u64)
    }
}

pub fn sample_threshold(inputs: &ThresholdInputs) -> Result<Threshold> {
    sample_threshold_with(inputs, Formula::Exact)
}

pub fn sample_threshold_with(inputs: &ThresholdInputs, formula: Formula) -> Result<Threshold> {
    inputs.validate()?;
    let d = inputs.d as f64;
    let theta = inputs.theta;
    let branch = Branch::of(inputs);
    let fine = inputs.fine_mesh();
    let ln_lipschitz_sum = (4.0 * (inputs.lipschitz + inputs.interp_lipschitz)).ln();

    let ln_budget = inputs.ln_budget();
    // n1*: L̄² n^(2·mesh_exponent) <= R
    let ln_a = 2.0 * inputs.interp_lipschitz.ln() - ln_budget;
    let ln_n1 = match (fine, formula) {
        (false, _) => ln_a / (2.0 * theta),
        (true, Formula::Exact) => ln_a * (d - 1.0) / (2.0 * (1.0 - theta)),
        (true, Formula::Published) => ln_a * (d - 1.0) / (1.0 - theta),
    };

    // n2*: n^e (· ln n when d = 4) <= B, e < 0
    let ln_b = match formula {
        Formula::Exact => ln_budget - inputs.moment_constant.ln(),
        Formula::Published => ln_budget + d * ln_lipschitz_sum - 2.0 * ln_lipschitz_sum - inputs.moment_constant.ln(),
    };
    let mesh_power = if fine { d * (1.0 - theta) / (d - 1.0) } else { theta * d };
    let exponent = match inputs.d {
        2..=4 => 0.5 - mesh_power,
        _ => 1.0 - mesh_power - 2.0 / d,
    };
    debug_assert!(exponent < 0.0);
    let ln_n2 = if inputs.d == 4 {
        let arg = exponent * ln_b.exp();
        let w = lambert_w_m1(arg).ok_or_else(|| {
            Error::invalid(format!(
                "Lambert W argument {arg} outside [-1/e, 0): the d = 4 inequality holds for every n"
            ))
        })?;
        w / exponent
    } else {
        ln_b / exponent
    };

    let n_star = [ln_n1, ln_n2].iter().map(|&l| l.exp().ceil()).fold(1.0f64, f64::max);
    Ok(Threshold { branch, ln_n1, ln_n2, n_star })
}

/// Direct substitution of `n` into the two defining inequalities
/// (`n1` part, `n2` part). `ln_n` lets astronomically large `n` be checked.
pub fn defining_inequalities_hold(inputs: &ThresholdInputs, ln_n: f64) -> (bool, bool) {
    let rhs = inputs.ln_budget();
    let slack = 1e-9 * rhs.abs().max(1.0);
    let ln_h = inputs.ln_mesh(ln_n);
    let lhs1 = 2.0 * inputs.interp_lipschitz.ln() + 2.0 * ln_h;
    let lhs2 = inputs.moment_constant.ln() + ln_n + inputs.d as f64 * ln_h + inputs.ln_rate(ln_n);
    (lhs1 <= rhs + slack, lhs2 <= rhs + slack)
}
