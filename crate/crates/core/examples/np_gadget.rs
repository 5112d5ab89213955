//! Independent set through the diagonal gadget: a large onsite penalty
//! forbids double occupancy, edge repulsion charges each edge inside the
//! chosen vertex set, and the k-electron ground energy is zero exactly when
//! a size-k independent set exists.

use spinchem::instances::WeightedGraph;
use spinchem::slater::np_gadget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("C5 cycle", WeightedGraph::cycle(5, 1.0)?),
        ("K4 complete", WeightedGraph::complete(4, 1.0)?),
        ("P6 path", WeightedGraph::path(6, 1.0)?),
        ("Petersen-ish prism", WeightedGraph::new(
            6,
            vec![
                (1, 2, 1.0),
                (2, 3, 1.0),
                (1, 3, 1.0),
                (4, 5, 1.0),
                (5, 6, 1.0),
                (4, 6, 1.0),
                (1, 4, 1.0),
                (2, 5, 1.0),
                (3, 6, 1.0),
            ],
            3,
        )?),
    ];

    for (name, graph) in &cases {
        println!("{name} (n = {}, m = {}):", graph.n, graph.edges.len());
        for k in 0..=graph.n {
            let result = np_gadget(graph, k)?;
            let verdict = if result.is_independent_set { "yes" } else { "no " };
            let sites: Vec<usize> = result.occupation.iter().map(|m| m / 2 + 1).collect();
            println!(
                "  k = {k}: independent set {verdict} (energy {:.3e}, witness sites {:?})",
                result.energy, sites
            );
        }
        println!();
    }
    Ok(())
}
