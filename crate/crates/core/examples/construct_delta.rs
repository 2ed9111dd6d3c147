// Builds quotients for a few target exponents in `[0, ½ log q]` and compares
// the exact exponent with a growth estimate from the closed-form counts.

use critex::growth::{closed_form_cumulative_counts, construct, estimate_delta, target_partition};
use critex::Guard;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = 3;
    for fraction in [0.0, 0.2, 0.37, 0.5] {
        let delta = fraction * (q as f64).ln();
        let partition = target_partition(delta, q)?;
        let c = construct(q, &partition, 6, Guard::DEFAULT)?;
        let counts = closed_form_cumulative_counts(q, &partition, 2000);
        let estimate = estimate_delta(&counts);
        println!(
            "target {delta:.4}: partition {partition}, exact {:.4}, estimate {:.4}, {} vertices, regular {}",
            c.exponent.value(),
            estimate.value,
            c.quotient.graph.vertex_count(),
            c.quotient.graph.is_regular_cover(q),
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
