//! Compare q-dominance, mean and single-sample survival on a noisy ZDT
//! problem under equal evaluation budgets.
//!
//! cargo run --release --example noisy_zdt -- [zdt1|zdt2|zdt3|zdt4|zdt6] [generations] [replications]

use qdom::bench::{ZdtSpec, ZdtVariant};
use qdom::smoo::{run_replications, NoisyZdt, OptimizerConfig, SelectionMode};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn main() -> qdom::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let variant: ZdtVariant = args.get(1).map_or("zdt1", String::as_str).parse()?;
    let generations = args.get(2).map_or(Ok(20), |s| s.parse()).expect("generations");
    let reps = args.get(3).map_or(Ok(4), |s| s.parse()).expect("replications");

    let problem = NoisyZdt::new(ZdtSpec::standard(variant), 0.1)?;
    println!("{variant}, sigma 0.1, {generations} generations, {reps} replications");
    for mode in SelectionMode::ALL {
        let config = OptimizerConfig { generations, mode, seed: 1, ..OptimizerConfig::default() };
        let runs = run_replications(&problem, &config, reps)?;
        let last = &runs[0].checkpoints.last().expect("checkpoint");
        let finals: Vec<f64> = runs.iter().map(|h| h.final_delta_hv()).collect();
        println!(
            "{:>6}: median final dHV {:.4}  (evaluations {}, first run {:.4})",
            mode.name(),
            median(finals),
            last.evaluations,
            runs[0].final_delta_hv()
        );
    }
    Ok(())
}
