//! ΔHV of noiseless ZDT fronts approximated by k evenly spaced optimal
//! points, against the closed-form front hypervolume.

use qdom::bench::{delta_hv, HvConfig, ZdtSpec, ZdtVariant};

fn main() {
    let cfg = HvConfig::default();
    for variant in ZdtVariant::ALL {
        let spec = ZdtSpec::standard(variant);
        let front = spec.front_hypervolume(cfg.reference);
        let row: Vec<String> = [5, 20, 100, 1000]
            .iter()
            .map(|&k| {
                let pts: Vec<[f64; 2]> = (0..k)
                    .map(|i| {
                        let f = spec.evaluate(&spec.optimum(i as f64 / (k - 1) as f64)).expect("optimum lies in the box");
                        [f[0], f[1]]
                    })
                    .collect();
                format!("k={k}: {:.4}", delta_hv(&spec, &pts, &cfg))
            })
            .collect();
        println!("{variant}  HV(front) {front:.4}  {}", row.join("  "));
    }
}
