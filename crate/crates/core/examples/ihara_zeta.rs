// Ihara zeta function of K4: both determinants, the radius of convergence and
// the first few cycle and prime counts.

use critex::graph::complete_graph;
use critex::zeta::ihara_zeta;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = ihara_zeta(&complete_graph(4), 8)?;
    println!("det(I - uW)          = {}", report.w_poly);
    println!("det(I - Au + Qu^2)   = {}", report.det_poly);
    println!("Bass identity holds: {}", report.bass_identity);
    let radius = report.radius.exact().map_or_else(|| format!("{:.12}", report.radius.approx()), ToString::to_string);
    println!("R = {radius}, lambda_max = {}", report.lambda_max);
    println!("N(m) = {:?}", report.cycle_counts.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("pi(m) = {:?}", report.prime_counts.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
