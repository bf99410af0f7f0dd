//! ZDT bi-objective test problems (1, 2, 3, 4 and 6) with truncated-normal
//! input noise.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::truncnorm::truncnorm_sample;
use crate::error::{Error, Result};

/// ZDT3's Pareto-optimal `f1` intervals. Each right end is a local minimum
/// of `1 − √f1 − f1·sin(10π f1)`, each left end the point where that curve
/// returns to the previous piece's final value.
const ZDT3_SEGMENTS: [(f64, f64); 5] = [
    (0.0, 0.08300153492691163),
    (0.1822287280293998, 0.25776236338783026),
    (0.4093136748086568, 0.45388210408883023),
    (0.6183967944392659, 0.6525117038046625),
    (0.8233317983266328, 0.851832865436414),
];

/// Minimum of `1 − exp(−4x)·sin⁶(6πx)` on `[0, 1]`.
const ZDT6_F1_MIN: f64 = 0.28077531881536977;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZdtVariant {
    #[serde(rename = "zdt1")]
    Zdt1,
    #[serde(rename = "zdt2")]
    Zdt2,
    #[serde(rename = "zdt3")]
    Zdt3,
    #[serde(rename = "zdt4")]
    Zdt4,
    #[serde(rename = "zdt6")]
    Zdt6,
}

impl ZdtVariant {
    pub const ALL: [ZdtVariant; 5] =
        [ZdtVariant::Zdt1, ZdtVariant::Zdt2, ZdtVariant::Zdt3, ZdtVariant::Zdt4, ZdtVariant::Zdt6];

    pub fn name(self) -> &'static str {
        match self {
            ZdtVariant::Zdt1 => "zdt1",
            ZdtVariant::Zdt2 => "zdt2",
            ZdtVariant::Zdt3 => "zdt3",
            ZdtVariant::Zdt4 => "zdt4",
            ZdtVariant::Zdt6 => "zdt6",
        }
    }
}

impl FromStr for ZdtVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zdt1" => Ok(ZdtVariant::Zdt1),
            "zdt2" => Ok(ZdtVariant::Zdt2),
            "zdt3" => Ok(ZdtVariant::Zdt3),
            "zdt4" => Ok(ZdtVariant::Zdt4),
            "zdt6" => Ok(ZdtVariant::Zdt6),
            "zdt5" => Err(Error::invalid("ZDT5 is a binary problem and is not supported")),
            other => Err(Error::invalid(format!("unknown problem `{other}`"))),
        }
    }
}

impl std::fmt::Display for ZdtVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZdtSpec {
    pub variant: ZdtVariant,
    /// Number of decision variables.
    pub n_vars: usize,
}

impl ZdtSpec {
    pub const DEFAULT_VARS: usize = 30;

    pub fn new(variant: ZdtVariant, n_vars: usize) -> Result<Self> {
        if n_vars < 2 {
            return Err(Error::invalid(format!("ZDT needs at least 2 variables, got {n_vars}")));
        }
        Ok(ZdtSpec { variant, n_vars })
    }

    pub fn standard(variant: ZdtVariant) -> Self {
        ZdtSpec { variant, n_vars: Self::DEFAULT_VARS }
    }

    /// Box of variable `i`.
    pub fn bounds(&self, i: usize) -> (f64, f64) {
        match (self.variant, i) {
            (ZdtVariant::Zdt4, 0) => (0.0, 1.0),
            (ZdtVariant::Zdt4, _) => (-5.0, 5.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn all_bounds(&self) -> Vec<(f64, f64)> {
        (0..self.n_vars).map(|i| self.bounds(i)).collect()
    }

    /// Deterministic objectives `(f1, f2)`, both minimized.
    pub fn evaluate(&self, z: &[f64]) -> Result<[f64; 2]> {
        if z.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: z.len() });
        }
        for (i, &v) in z.iter().enumerate() {
            let (lo, hi) = self.bounds(i);
            if !(lo..=hi).contains(&v) {
                return Err(Error::invalid(format!("x[{i}]={v} outside [{lo}, {hi}] for {}", self.variant)));
            }
        }
        Ok(self.evaluate_unchecked(z))
    }

    pub(crate) fn evaluate_unchecked(&self, z: &[f64]) -> [f64; 2] {
        let x1 = z[0];
        let rest = &z[1..];
        let tail = rest.len() as f64;
        match self.variant {
            ZdtVariant::Zdt1 | ZdtVariant::Zdt2 | ZdtVariant::Zdt3 => {
                let g = 1.0 + 9.0 * rest.iter().sum::<f64>() / tail;
                let ratio = x1 / g;
                let h = match self.variant {
                    ZdtVariant::Zdt1 => 1.0 - ratio.sqrt(),
                    ZdtVariant::Zdt2 => 1.0 - ratio * ratio,
                    _ => 1.0 - ratio.sqrt() - ratio * (10.0 * PI * x1).sin(),
                };
                [x1, g * h]
            }
            ZdtVariant::Zdt4 => {
                let g = 1.0 + 10.0 * tail + rest.iter().map(|x| x * x - 10.0 * (4.0 * PI * x).cos()).sum::<f64>();
                [x1, g * (1.0 - (x1 / g).sqrt())]
            }
            ZdtVariant::Zdt6 => {
                let f1 = 1.0 - (-4.0 * x1).exp() * (6.0 * PI * x1).sin().powi(6);
                let g = 1.0 + 9.0 * (rest.iter().sum::<f64>() / tail).powf(0.25);
                let ratio = f1 / g;
                [f1, g * (1.0 - ratio * ratio)]
            }
        }
    }

    /// Objectives at inputs perturbed coordinatewise by the truncated normal
    /// `N_[a_i, b_i](x_i, sigma²)`.
    pub fn evaluate_noisy<R: Rng + ?Sized>(&self, x: &[f64], sigma: f64, rng: &mut R) -> Result<[f64; 2]> {
        if x.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: x.len() });
        }
        let z: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| {
                let (lo, hi) = self.bounds(i);
                truncnorm_sample(xi, sigma, lo, hi, rng)
            })
            .collect();
        self.evaluate(&z)
    }

    /// A Pareto-optimal decision vector with the given first coordinate.
    pub fn optimum(&self, x1: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.n_vars];
        x[0] = x1;
        x
    }

    /// `f1` intervals of the true Pareto front.
    pub fn front_segments(&self) -> Vec<(f64, f64)> {
        match self.variant {
            ZdtVariant::Zdt3 => ZDT3_SEGMENTS.to_vec(),
            ZdtVariant::Zdt6 => vec![(ZDT6_F1_MIN, 1.0)],
            _ => vec![(0.0, 1.0)],
        }
    }

    /// `f2` on the true Pareto front.
    pub fn front_f2(&self, f1: f64) -> f64 {
        match self.variant {
            ZdtVariant::Zdt1 | ZdtVariant::Zdt4 => 1.0 - f1.sqrt(),
            ZdtVariant::Zdt2 | ZdtVariant::Zdt6 => 1.0 - f1 * f1,
            ZdtVariant::Zdt3 => 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin(),
        }
    }

    /// Antiderivative of [`Self::front_f2`].
    fn front_f2_integral(&self, x: f64) -> f64 {
        match self.variant {
            ZdtVariant::Zdt1 | ZdtVariant::Zdt4 => x - 2.0 / 3.0 * x.powf(1.5),
            ZdtVariant::Zdt2 | ZdtVariant::Zdt6 => x - x * x * x / 3.0,
            ZdtVariant::Zdt3 => {
                let a = 10.0 * PI;
                // ∫ x sin(ax) dx = sin(ax)/a² − x cos(ax)/a
                x - 2.0 / 3.0 * x.powf(1.5) - ((a * x).sin() / (a * a) - x * (a * x).cos() / a)
            }
        }
    }

    /// `count` front points, spread over the segments in proportion to
    /// their length with uniform `f1` spacing inside each.
    pub fn analytic_front(&self, count: usize) -> Vec<[f64; 2]> {
        let segments = self.front_segments();
        let total: f64 = segments.iter().map(|(a, b)| b - a).sum();
        let mut out = Vec::with_capacity(count);
        let mut assigned = 0usize;
        for (idx, &(a, b)) in segments.iter().enumerate() {
            let share = if idx + 1 == segments.len() {
                count - assigned
            } else {
                ((b - a) / total * count as f64).round() as usize
            };
            assigned += share;
            for i in 0..share {
                let f1 = if share == 1 { a } else { a + (b - a) * i as f64 / (share - 1) as f64 };
                out.push([f1, self.front_f2(f1)]);
            }
        }
        out
    }

    /// Exact hypervolume of the continuous Pareto front w.r.t. `reference`,
    /// which must weakly dominate-bound the front (`r1 >= 1`, `r2 >= 1`).
    pub fn front_hypervolume(&self, reference: [f64; 2]) -> f64 {
        let [r1, r2] = reference;
        let segments = self.front_segments();
        let mut hv = 0.0;
        for (i, &(a, b)) in segments.iter().enumerate() {
            hv += r2 * (b - a) - (self.front_f2_integral(b) - self.front_f2_integral(a));
            let next = segments.get(i + 1).map_or(r1, |s| s.0);
            hv += (next - b) * (r2 - self.front_f2(b));
        }
        hv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    /// Straight transcription of the published definitions.
    fn reference_zdt(variant: ZdtVariant, x: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        match variant {
            ZdtVariant::Zdt1 => {
                let mut s = 0.0;
                for v in &x[1..] {
                    s += v;
                }
                let g = 1.0 + 9.0 * s / (n - 1.0);
                (x[0], g * (1.0 - (x[0] / g).powf(0.5)))
            }
            ZdtVariant::Zdt2 => {
                let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (n - 1.0);
                (x[0], g * (1.0 - (x[0] / g).powi(2)))
            }
            ZdtVariant::Zdt3 => {
                let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (n - 1.0);
                let f1 = x[0];
                (f1, g * (1.0 - (f1 / g).powf(0.5) - f1 / g * (10.0 * PI * f1).sin()))
            }
            ZdtVariant::Zdt4 => {
                let mut g = 1.0 + 10.0 * (n - 1.0);
                for v in &x[1..] {
                    g += v.powi(2) - 10.0 * (4.0 * PI * v).cos();
                }
                (x[0], g * (1.0 - (x[0] / g).powf(0.5)))
            }
            ZdtVariant::Zdt6 => {
                let f1 = 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powf(6.0);
                let g = 1.0 + 9.0 * (x[1..].iter().sum::<f64>() / (n - 1.0)).powf(0.25);
                (f1, g * (1.0 - (f1 / g).powi(2)))
            }
        }
    }

    #[test]
    fn optimum_set_values() {
        let zdt1 = ZdtSpec::standard(ZdtVariant::Zdt1);
        let zdt2 = ZdtSpec::standard(ZdtVariant::Zdt2);
        for x1 in [0.0, 0.25, 0.5, 1.0] {
            assert_eq!(zdt1.evaluate(&zdt1.optimum(x1)).unwrap(), [x1, 1.0 - x1.sqrt()]);
            assert_eq!(zdt2.evaluate(&zdt2.optimum(x1)).unwrap(), [x1, 1.0 - x1 * x1]);
        }
    }

    #[test]
    fn matches_reference_transcription() {
        let mut rng = stream(5, &[]);
        for variant in ZdtVariant::ALL {
            let spec = ZdtSpec::standard(variant);
            for _ in 0..200 {
                let x: Vec<f64> = spec.all_bounds().iter().map(|&(a, b)| rng.random_range(a..=b)).collect();
                let [f1, f2] = spec.evaluate(&x).unwrap();
                let (r1, r2) = reference_zdt(variant, &x);
                assert!((f1 - r1).abs() <= 1e-12 * r1.abs().max(1.0), "{variant}");
                assert!((f2 - r2).abs() <= 1e-12 * r2.abs().max(1.0), "{variant}");
            }
        }
    }

    #[test]
    fn out_of_box_is_rejected() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt1);
        let mut x = spec.optimum(0.5);
        x[3] = -0.1;
        assert!(spec.evaluate(&x).is_err());
        let zdt4 = ZdtSpec::standard(ZdtVariant::Zdt4);
        let mut y = zdt4.optimum(0.5);
        y[3] = -4.0;
        assert!(zdt4.evaluate(&y).is_ok());
        y[0] = -0.5;
        assert!(zdt4.evaluate(&y).is_err());
        assert!(spec.evaluate(&[0.5]).is_err());
        assert!("zdt5".parse::<ZdtVariant>().is_err());
        assert_eq!("ZDT6".parse::<ZdtVariant>().unwrap(), ZdtVariant::Zdt6);
    }

    #[test]
    fn noiseless_evaluation_is_deterministic() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt3);
        let x = spec.optimum(0.3);
        let mut rng = stream(0, &[]);
        assert_eq!(spec.evaluate_noisy(&x, 0.0, &mut rng).unwrap(), spec.evaluate(&x).unwrap());
    }

    #[test]
    fn noisy_optimum_sits_above_front() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt1);
        let mut rng = stream(9, &[]);
        for i in 0..200 {
            let x = spec.optimum(i as f64 / 199.0);
            let [f1, f2] = spec.evaluate_noisy(&x, 0.1, &mut rng).unwrap();
            assert!(f2 > spec.front_f2(f1), "sample ({f1}, {f2}) not above front");
        }
    }

    #[test]
    fn noise_raises_mean_f2_on_optimum_ray() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt1);
        let x = spec.optimum(0.5);
        let mean_f2 = |sigma: f64| {
            let mut rng = stream(21, &[]);
            (0..20_000).map(|_| spec.evaluate_noisy(&x, sigma, &mut rng).unwrap()[1]).sum::<f64>() / 20_000.0
        };
        let (a, b, c) = (mean_f2(0.01), mean_f2(0.05), mean_f2(0.1));
        assert!(a < b && b < c, "{a} {b} {c}");
    }

    #[test]
    fn zdt3_segment_ends_are_front_pieces() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt3);
        for w in ZDT3_SEGMENTS.windows(2) {
            let end = spec.front_f2(w[0].1);
            assert!((spec.front_f2(w[1].0) - end).abs() < 1e-12);
        }
        let f6 = ZdtSpec::standard(ZdtVariant::Zdt6);
        let x = f6.optimum(0.08145779687998357);
        assert!((f6.evaluate(&x).unwrap()[0] - ZDT6_F1_MIN).abs() < 1e-15);
    }

    #[test]
    fn front_hypervolume_closed_forms() {
        // ZDT1: 10·11 + ∫₀¹ (10 + √x) dx = 110 + 10 + 2/3
        let zdt1 = ZdtSpec::standard(ZdtVariant::Zdt1);
        assert!((zdt1.front_hypervolume([11.0, 11.0]) - (120.0 + 2.0 / 3.0)).abs() < 1e-12);
        // ZDT2: 110 + ∫₀¹ (10 + x²) dx
        let zdt2 = ZdtSpec::standard(ZdtVariant::Zdt2);
        assert!((zdt2.front_hypervolume([11.0, 11.0]) - (120.0 + 1.0 / 3.0)).abs() < 1e-12);
        // a unit reference box minus the area under the curve
        assert!((zdt1.front_hypervolume([1.0, 1.0]) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_front_point_counts() {
        for variant in ZdtVariant::ALL {
            let spec = ZdtSpec::standard(variant);
            let front = spec.analytic_front(1000);
            assert_eq!(front.len(), 1000);
            for p in &front {
                assert!((p[1] - spec.front_f2(p[0])).abs() < 1e-15);
            }
        }
    }
}
