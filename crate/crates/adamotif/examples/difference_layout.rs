//! Decorate an individual community against its representative: absent
//! nodes, ringed nodes and dashed edges.
//!
//! Run with: cargo run --example difference_layout

use adamotif::{
    align, difference_layout, force_layout, match_nodes, Graph, LayoutParams, NodeEncoding,
};

fn main() -> adamotif::Result<()> {
    // The representative has a spur node the individual lacks; the
    // individual hides two extra nodes behind one matched node.
    let representative = Graph::from_edges([
        ("r0", "r1"),
        ("r0", "r2"),
        ("r0", "r3"),
        ("r3", "r4"),
        ("r2", "r5"),
    ]);
    let individual = Graph::from_edges([
        ("i0", "i1"),
        ("i0", "i2"),
        ("i0", "i3"),
        ("i3", "i4"),
        ("i3", "x1"),
        ("i3", "x2"),
    ]);

    let sim = align(&representative, &individual, 8)?;
    let matching = match_nodes(&sim, &representative, &individual, 0.5)?;
    let rep_positions = force_layout(&representative, &LayoutParams::default());
    let layout = difference_layout(&individual, &representative, &rep_positions, &matching)?;

    println!("node encodings over the representative's silhouette:");
    for (node, encoding) in &layout.encodings {
        match encoding {
            NodeEncoding::Plain => println!("  {node}: plain (matched, nothing hidden)"),
            NodeEncoding::Absent => {
                println!("  {node}: absent (white, dashed boundary; no counterpart)")
            }
            NodeEncoding::Ringed {
                level,
                hidden_count,
            } => println!("  {node}: ringed {level:?}, hiding {hidden_count} unmatched neighbor(s)"),
        }
    }
    println!("dashed representative edges:");
    for (a, b) in &layout.dashed_edges {
        println!("  {a} - {b}");
    }
    Ok(())
}
