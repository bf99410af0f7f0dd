//! Deb's bounded simulated binary crossover and polynomial mutation.

use rand::Rng;

/// Per-variable probability of recombining a coordinate once crossover fires.
const VAR_PROB: f64 = 0.5;

/// SBX on one pair of parents. With probability `1 − p_c` the parents are
/// returned unchanged.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &[(f64, f64)],
    eta_c: f64,
    p_c: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if p_c <= 0.0 || rng.random::<f64>() >= p_c {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.random::<f64>() > VAR_PROB || (p1[i] - p2[i]).abs() <= 1e-14 {
            continue;
        }
        let (lo, hi) = bounds[i];
        let y1 = p1[i].min(p2[i]);
        let y2 = p1[i].max(p2[i]);
        let span = y2 - y1;
        let u: f64 = rng.random();

        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta_c + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta_c + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta_c + 1.0))
            }
        };
        let bq_low = spread(1.0 + 2.0 * (y1 - lo) / span);
        let bq_high = spread(1.0 + 2.0 * (hi - y2) / span);
        let mut a = (0.5 * (y1 + y2 - bq_low * span)).clamp(lo, hi);
        let mut b = (0.5 * (y1 + y2 + bq_high * span)).clamp(lo, hi);
        if rng.random::<f64>() <= 0.5 {
            std::mem::swap(&mut a, &mut b);
        }
        c1[i] = a;
        c2[i] = b;
    }
    (c1, c2)
}

/// Polynomial mutation applied in place, each coordinate with probability
/// `p_m`.
pub fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], bounds: &[(f64, f64)], eta_m: f64, p_m: f64, rng: &mut R) {
    if p_m <= 0.0 {
        return;
    }
    let power = 1.0 / (eta_m + 1.0);
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        if rng.random::<f64>() >= p_m {
            continue;
        }
        let width = hi - lo;
        let d1 = (*xi - lo) / width;
        let d2 = (hi - *xi) / width;
        let u: f64 = rng.random();
        let dq = if u < 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta_m + 1.0);
            v.powf(power) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta_m + 1.0);
            1.0 - v.powf(power)
        };
        *xi = (*xi + dq * width).clamp(lo, hi);
    }
}
