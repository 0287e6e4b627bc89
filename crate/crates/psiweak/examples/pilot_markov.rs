//! Pilot calibration for the Markov consistency check.
//!
//! Runs the 2-state chain [[0.7,0.3],[0.4,0.6]] with gauge ψ(x) = 1 + x
//! over an independent master seed (different from the verification
//! suite's) and prints per-n medians of d_ψ(m_n, υ). The verification
//! threshold is frozen from this output; rerun with
//! `cargo run -p psiweak --example pilot_markov --release` to recalibrate.

use psiweak::harness::consistency_experiment;
use psiweak::measure::{Gauge, GroundSpace, MetricMode};
use psiweak::process::PathGenerator;

fn main() {
    let space = GroundSpace::<f64>::finite(
        vec!["0".into(), "1".into()],
        vec![0.0, 1.0],
        MetricMode::Bounded,
    )
    .unwrap();
    let gen = PathGenerator::markov(
        space,
        vec![vec![0.7, 0.3], vec![0.4, 0.6]],
        None,
    )
    .unwrap();
    let psi = Gauge::polynomial(1.0, 1.0).unwrap();
    const PILOT_SEED: u64 = 990_017;
    let run = consistency_experiment(&gen, &psi, &[100, 1_000, 10_000], 100, PILOT_SEED).unwrap();
    println!("pilot master seed: {PILOT_SEED}, 100 replications");
    println!("n,median_prohorov,median_psi_gap,median_d_psi");
    for s in &run.summary {
        println!(
            "{},{},{},{}",
            s.n, s.median_prohorov, s.median_psi_gap, s.median_d_psi
        );
    }
}
