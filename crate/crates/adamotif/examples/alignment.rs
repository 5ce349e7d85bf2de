//! Align two structurally similar graphs and extract a one-to-one node
//! matching.
//!
//! Run with: cargo run --example alignment

use adamotif::{align, match_nodes, Graph};

fn main() -> adamotif::Result<()> {
    // Two star-shaped graphs with tails of different lengths.
    let a = Graph::from_edges([
        ("hub", "s1"),
        ("hub", "s2"),
        ("hub", "s3"),
        ("hub", "s4"),
        ("s4", "t1"),
        ("t1", "t2"),
    ]);
    let b = Graph::from_edges([
        ("core", "p1"),
        ("core", "p2"),
        ("core", "p3"),
        ("p3", "q1"),
    ]);

    let sim = align(&a, &b, 8)?;
    println!("similarity matrix is {}x{}", sim.rows(), sim.cols());

    let matching = match_nodes(&sim, &a, &b, 0.5)?;
    println!("{} matched pairs:", matching.len());
    for (u, v) in matching.pairs() {
        println!(
            "  {u} <-> {v}   (sim {:.4}, degrees {} and {})",
            sim.value(u, v).unwrap(),
            a.degree(u)?,
            b.degree(v)?
        );
    }
    let unmatched_a: Vec<&str> = matching.unmatched_a().iter().map(|v| v.as_str()).collect();
    let unmatched_b: Vec<&str> = matching.unmatched_b().iter().map(|v| v.as_str()).collect();
    println!("unmatched in the first graph:  {unmatched_a:?}");
    println!("unmatched in the second graph: {unmatched_b:?}");
    Ok(())
}
