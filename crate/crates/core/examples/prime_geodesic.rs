// `n π(n) / λ^n` against the period: close to 1 on K4 by `n = 30`, still
// oscillating on a dumbbell whose subdominant eigenvalues are nearly as large.

use critex::graph::complete_graph;
use critex::zeta::{dumbbell, pgt_check};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (name, g) in [("K4", complete_graph(4)), ("D(3,4,2)", dumbbell(3, 4, 2)?)] {
        let table = pgt_check(&g, 30)?;
        let tail: Vec<String> = table.rows.iter().rev().take(4).rev().map(|(n, r)| format!("{n}:{r:.4}")).collect();
        println!("{name}: period {}, last rows {}", table.period, tail.join(" "));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
