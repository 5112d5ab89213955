//! Inspect the orbital geometry for a small graph: the per-edge close
//! pairs, the far grid, and the XYZ listing.

use spinchem::instances::WeightedGraph;
use spinchem::integrals::dist;
use spinchem::layout::{place_centers_uniform, verify_layout, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = WeightedGraph::path(3, 1.0)?;
    let layout =
        place_centers_uniform(&graph, 2.0, LayoutParams { alpha: 1.0, beta: 4.0, big_gamma: 50.0 })?;

    println!("{}", layout.to_xyz());
    for (edge, ((i, p), (j, q))) in &layout.pair_map {
        let a = layout.center(*i, *p);
        let b = layout.center(*j, *q);
        println!(
            "edge {edge:?}: primitives ({i},{p}) and ({j},{q}) at distance {:.12}",
            dist(a, b)
        );
    }
    let dummies = layout.num_primitives() - 2 * layout.pair_map.len();
    println!("{} dummy centers on their own cells", dummies);

    let violations = verify_layout(&layout);
    println!("violations: {}", violations.len());
    Ok(())
}
