// Integral vertex ordering of the seven-vertex ray with `I = {1, 4, 5}`,
// and a graph whose index ratios around a cycle forbid any finite grouping.

use critex::graph::parse_graph;
use critex::grouping::{find_vertex_ordering, GroupingOutcome};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ray = parse_graph(
        "v x0\nv x1\nv x2\nv x3\nv x4\nv x5\nv x6\n\
         e x0 x1 1 3\ne x1 x2 1 1\ne x2 x3 1 1\ne x3 x4 1 3\ne x4 x5 1 3\ne x5 x6 1 1",
    )?;
    let outcome = find_vertex_ordering(&ray)?;
    let ordering = outcome.ordering().ok_or("ray should admit a grouping")?;
    for v in ray.vertices() {
        println!("N({}) = {}", ray.name(v), ordering.get(v));
    }

    let unbalanced = parse_graph("v a\nv b\ne a b 2 1\ne b a 1 1")?;
    if let GroupingOutcome::NoGrouping(ng) = find_vertex_ordering(&unbalanced)? {
        println!("no grouping: {} has ratio {}", unbalanced.describe_edges(&ng.witness), ng.ratio);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
