//! Merge a cluster of representative subgraphs into a super-graph and
//! copy its layout back onto every member, so aligned nodes share
//! coordinates.
//!
//! Run with: cargo run --example supergraph

use adamotif::{representative_layouts, synthesize_supergraph, AlignParams, Graph, LayoutParams};

fn main() -> adamotif::Result<()> {
    let members = vec![
        Graph::from_edges([
            ("a0", "a1"),
            ("a0", "a2"),
            ("a0", "a3"),
            ("a0", "a4"),
            ("a4", "a5"),
        ]),
        Graph::from_edges([("b0", "b1"), ("b0", "b2"), ("b0", "b3"), ("b3", "b4")]),
        Graph::from_edges([("c0", "c1"), ("c0", "c2"), ("c0", "c3")]),
    ];

    let sg = synthesize_supergraph(&members, &AlignParams::default())?;
    println!(
        "super-graph: {} nodes, {} edges (basis = member {})",
        sg.graph().node_count(),
        sg.graph().edge_count(),
        sg.basis()
    );
    for w in sg.warnings() {
        println!("  warning: {w}");
    }
    for m in 0..sg.member_count() {
        let identity = sg.provenance(m).iter().filter(|(s, d)| s == d).count();
        println!(
            "  member {m}: {} nodes, {} kept their own identity, {} mapped onto partners",
            members[m].node_count(),
            identity,
            members[m].node_count() - identity
        );
    }

    let layouts = representative_layouts(&sg, &LayoutParams::default());
    // Aligned nodes land on identical coordinates across members.
    for (m, layout) in layouts.iter().enumerate() {
        println!("member {m} layout:");
        for (node, (x, y)) in layout.iter() {
            println!("  {node}: ({x:8.2}, {y:8.2}) -> super-node {}", sg.provenance(m)[node]);
        }
    }
    Ok(())
}
