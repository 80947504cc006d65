//! Chordality, perfect clique sequences, clique separators and treewidth on
//! the six-vertex fish graph and on a chordless five-cycle.

use hrgm::graphs::{self, UndirectedGraph};

fn describe(name: &str, g: &UndirectedGraph) -> Result<(), hrgm::graphs::GraphError> {
    println!("{name}: {} vertices, {} edges", g.num_vertices(), g.num_edges());
    println!("  chordal {}, clique number {}, treewidth {:?}", graphs::is_chordal(g), graphs::clique_number(g), graphs::treewidth_report(g));
    if let Ok(dec) = graphs::chordal_decomposition(g) {
        let cliques: Vec<String> = dec.cliques.iter().map(|c| c.to_string()).collect();
        println!("  perfect clique sequence {}", cliques.join(" "));
        for s in &dec.separators {
            println!("  separator {} with multiplicity {}", s.set, s.multiplicity);
        }
    }
    match graphs::separate_decompose(g)? {
        Some(split) => println!("  split {} | {} along {}", split.left, split.right, split.separator),
        None => println!("  prime: no clique separator"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    describe("fish", &UndirectedGraph::fish())?;
    describe("C5", &UndirectedGraph::cycle(5))?;
    Ok(())
}
