//! How likely is a given score under agreement probability p_d?
//!
//! Treating each item as a biased coin with success probability `p_d`,
//! the chance of scoring at least `r_c` of `N` follows the binomial
//! survival function. Two lessons fall out of the grid below: high
//! scores require high agreement, and small samples let even a random
//! labeler look strong.
//!
//! ```bash
//! cargo run --example tail_probabilities
//! ```

use strateval::prob::{score_tail_probability, TailQuery};

fn tail(p_d: f64, n: u64, r_c: u64) -> strateval::Result<f64> {
    score_tail_probability(&TailQuery::new(n, r_c, p_d)?)
}

fn main() -> strateval::Result<()> {
    println!("P(score >= threshold) for a labeler matching the majority w.p. p_d\n");
    println!(
        "{:>5} | {:>12} {:>12} | {:>12} {:>12}",
        "p_d", "N=100,>=50%", "N=100,>=80%", "N=10,>=50%", "N=10,>=80%"
    );
    for p_d in [0.5, 0.6, 0.9] {
        println!(
            "{:>5.1} | {:>12.2e} {:>12.2e} | {:>12.2e} {:>12.2e}",
            p_d,
            tail(p_d, 100, 50)?,
            tail(p_d, 100, 80)?,
            tail(p_d, 10, 5)?,
            tail(p_d, 10, 8)?,
        );
    }

    println!("\nsmall samples flatter everyone: chance a fair coin reaches 80%");
    for n in [10u64, 30, 100, 500] {
        let threshold = (0.8 * n as f64).ceil() as u64;
        println!(
            "  N = {n:>4}: P(score >= {threshold:>4}) = {:.3e}",
            tail(0.5, n, threshold)?
        );
    }

    // Stays stable at screening-programme scale.
    let large = tail(0.6, 201_079, 125_000)?;
    println!("\nlarge-sample tail (N = 201079, threshold 125000, p_d = 0.6): {large:.3e}");
    Ok(())
}
