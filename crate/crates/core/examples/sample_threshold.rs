//! Sample-size threshold n* across dimensions and error levels, for the
//! exact solution and the commonly printed closed form.

use qdom::grid::default_theta;
use qdom::threshold::{sample_threshold_with, Formula, ThresholdInputs};

fn main() -> qdom::Result<()> {
    for d in 2..=6 {
        for delta in [0.1, 0.05, 0.01] {
            let inputs = ThresholdInputs {
                d,
                delta,
                margin: 0.5,
                lipschitz: 1.0,
                interp_lipschitz: 1.0,
                moment_constant: 1.0,
                covering_constant: 1.0,
                theta: default_theta(d),
            };
            let exact = sample_threshold_with(&inputs, Formula::Exact)?;
            let printed = sample_threshold_with(&inputs, Formula::Published)?;
            let log10 = |t: &qdom::Threshold| t.ln_n1.max(t.ln_n2).max(0.0) / std::f64::consts::LN_10;
            println!(
                "d={d} theta={:.3} delta={delta:<5} log10 n*: exact {:>8.2}  printed {:>8.2}  [{}]",
                inputs.theta,
                log10(&exact),
                log10(&printed),
                exact.branch
            );
        }
    }
    Ok(())
}
