//! Simulating the gap between an expert-like labeler and a coin flip.
//!
//! Draws synthetic annotator panels at several agreement levels and
//! positive ratios, scores a distribution-following candidate and a
//! random one against each panel's majority label, and writes the
//! plottable sweep to `labeler_sweep.csv`.
//!
//! ```bash
//! cargo run --example simulate_labelers
//! ```
//!
//! Plotting the CSV (pandas):
//!
//! ```python
//! import pandas as pd
//! df = pd.read_csv("labeler_sweep.csv")
//! f1 = df[df.metric == "f1"].pivot_table(index="p_d", columns=["candidate", "m"], values="mean")
//! f1.plot(marker="o")
//! ```

use std::fs::File;

use strateval::sim::{sweep, write_sweep_csv, SimulationConfig};

fn main() -> strateval::Result<()> {
    let base = SimulationConfig {
        items_per_run: 500,
        annotators_per_item: 10,
        runs: 20,
        seed: 42,
        ..Default::default()
    };
    let p_d_grid = [0.55, 0.6, 0.7, 0.8, 0.9, 1.0];
    let m_grid = [0.1, 0.3, 0.5];

    let points = sweep(&p_d_grid, &m_grid, &base)?;
    write_sweep_csv(&points, File::create("labeler_sweep.csv")?)?;
    println!("wrote labeler_sweep.csv ({} grid points)\n", points.len());

    println!(
        "{:>5} {:>5} | {:>17} | {:>17}",
        "p_d", "m", "expert-like acc", "random acc"
    );
    for point in &points {
        let human = point.result.sim_human.accuracy.unwrap();
        let random = point.result.random.accuracy.unwrap();
        println!(
            "{:>5.2} {:>5.1} | {:>8.3} ± {:>6.3} | {:>8.3} ± {:>6.3}",
            point.p_d, point.m, human.mean, human.std, random.mean, random.std
        );
    }

    println!(
        "\nat low agreement the two candidates are hard to tell apart; \
         the gap only opens as p_d rises"
    );
    Ok(())
}
