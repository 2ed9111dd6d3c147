// Sphere counts at the root of a ray quotient against `(q-1) q^(s_n - 1) [n ∈ I]`.

use critex::growth::{build_ray_quotient, predicted_orbit_count, sphere_counts, PartitionSpec};
use critex::Guard;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = 2;
    let partition: PartitionSpec = "1(0110)".parse()?;
    let depth = 12;
    let rq = build_ray_quotient(q, &partition, depth, Guard::DEFAULT)?;
    let s = sphere_counts(&rq.graph, rq.ray[0], depth)?;
    println!("{} vertices, partition {partition}", rq.graph.vertex_count());
    for n in 1..=depth / 2 {
        println!(
            "n = {n}: S_2n = {}, predicted {}, S_2n-1 = {}",
            s.get(2 * n, rq.ray[0]),
            predicted_orbit_count(q, &partition, n as u64),
            s.get(2 * n - 1, rq.ray[0]),
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
