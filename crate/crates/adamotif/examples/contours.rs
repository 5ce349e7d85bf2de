//! Contour geometry on a laid-out community: concave alpha shape, buffered
//! outline and the area-proportional motif.
//!
//! Run with: cargo run --example contours

use adamotif::{
    alpha_shape, buffer_polygon, build_motif, default_alpha, force_layout, DecoratedLayout,
    Graph, LayoutParams, MotifConfig,
};

fn main() -> adamotif::Result<()> {
    let g = Graph::from_edges([
        ("a", "b"),
        ("b", "c"),
        ("c", "d"),
        ("d", "e"),
        ("e", "f"),
        ("f", "g"),
        ("g", "a"),
        ("a", "d"),
        ("b", "e"),
    ]);
    let positions = force_layout(&g, &LayoutParams::default());
    let points: Vec<(f64, f64)> = positions.coords();

    let alpha = default_alpha(&points);
    let contour = alpha_shape(&points, alpha);
    println!(
        "alpha = {alpha:.2}: contour with {} vertices, area {:.1} px^2 (degenerate: {})",
        contour.polygon.len(),
        contour.polygon.area(),
        contour.degenerate
    );

    let hull_like = alpha_shape(&points, 1e6);
    println!(
        "alpha = 1e6 (convex hull): {} vertices, area {:.1} px^2",
        hull_like.polygon.len(),
        hull_like.polygon.area()
    );

    let buffered = buffer_polygon(&contour.polygon, 12.5);
    println!(
        "buffered by 12.5 px: area {:.1} px^2, still contains every node: {}",
        buffered.area(),
        points.iter().all(|&p| buffered.contains(p))
    );

    let motif = build_motif(
        0,
        &g,
        &DecoratedLayout::plain(positions),
        0,
        &MotifConfig::default(),
        g.node_count(),
    )?;
    println!(
        "motif: color {}, contour area {:.1} px^2 = base_area x {} nodes, anchor ({:.1}, {:.1})",
        motif.color,
        motif.contour.area(),
        motif.node_count,
        motif.anchor.0,
        motif.anchor.1
    );
    Ok(())
}
