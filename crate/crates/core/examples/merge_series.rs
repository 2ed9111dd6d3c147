// Generating function of a merged graph from its two halves, and the smallest
// unit of `F_X F_Y = 1` for two ray series.

use critex::graph::{merge, parse_graph};
use critex::growth::based_closed_walk_counts;
use critex::series::{genfun_from_counts, merge_genfun, ray_series, solve_unit_product, UnitProductOutcome};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let x = parse_graph("v x\nv a\ne x a 1 1\ne a x 1 1")?;
    let y = parse_graph("v y\ne y y 1 2")?;
    let degree = 8;
    let fx = genfun_from_counts(&based_closed_walk_counts(&x, x.require_vertex("x")?, degree)?);
    let fy = genfun_from_counts(&based_closed_walk_counts(&y, y.require_vertex("y")?, degree)?);
    let merged = merge(&x, "x", &y, "y")?;
    let direct = genfun_from_counts(&based_closed_walk_counts(&merged, merged.require_vertex("x")?, degree)?);
    println!("formula: {}", merge_genfun(&fx, &fy)?);
    println!("direct:  {direct}");

    let q = 2;
    let (px, py) = ("(10)".parse()?, "(100)".parse()?);
    match solve_unit_product(&ray_series(q, &px, 200), &ray_series(q, &py, 200), 1e-12)? {
        UnitProductOutcome::Root(r) => println!("u* = {:.10}, candidate exponent {:.10}", r.u, r.candidate_exponent),
        UnitProductOutcome::NoRoot => println!("no root in (0, 1]"),
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
