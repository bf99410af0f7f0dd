use rand::Rng;

use crate::special::{normal_cdf, normal_quantile};

/// Draw from the normal law `N(mean, sigma²)` conditioned on `[a, b]`, by
/// inverting the CDF on the uniform interval `[Φ(α), Φ(β)]`.
///
/// Intervals lying entirely in the upper tail are reflected to the lower
/// tail first, where `Φ` keeps full relative precision. `sigma = 0` returns
/// `mean` clamped into the interval.
pub fn truncnorm_sample<R: Rng + ?Sized>(mean: f64, sigma: f64, a: f64, b: f64, rng: &mut R) -> f64 {
    debug_assert!(a < b && sigma >= 0.0);
    if sigma == 0.0 {
        return mean.clamp(a, b);
    }
    let alpha = (a - mean) / sigma;
    let beta = (b - mean) / sigma;
    let z = if alpha > 0.0 {
        -standard_truncated(-beta, -alpha, rng)
    } else {
        standard_truncated(alpha, beta, rng)
    };
    (mean + sigma * z).clamp(a, b)
}

fn standard_truncated<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    let p_lo = normal_cdf(lo);
    let p_hi = normal_cdf(hi);
    let u: f64 = rng.random();
    if p_hi <= p_lo {
        // both bounds beyond the representable tail
        return hi;
    }
    normal_quantile(p_lo + (p_hi - p_lo) * u).clamp(lo, hi)
}
