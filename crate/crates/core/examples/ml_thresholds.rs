//! ML-threshold bounds, the numeric elimination surrogate, and the rank-one
//! four-cycle existence experiment.

use hrgm::graphs::UndirectedGraph;
use hrgm::threshold::{cycle4_rank1_experiment, elimination_surrogate, emlt_bounds, emlt_bounds_with_evidence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c4 = UndirectedGraph::cycle(4);
    let plain = emlt_bounds(&c4)?;
    println!("C4 bounds without evidence: [{}, {}]", plain.lower, plain.upper);
    let refined = emlt_bounds_with_evidence(&c4, Some((2, 100, 0)))?;
    println!("C4 bounds with evidence: [{}, {}], exact {:?}", refined.lower, refined.upper, refined.exact);

    for r in 1..=2 {
        let rep = elimination_surrogate(&c4, r, 20, 1)?;
        println!("elimination surrogate at rank {r}: {:?}", rep.verdict);
    }

    for (x2, x3) in [(0.0, 2.0), (0.0, 0.5)] {
        let e = cycle4_rank1_experiment(x2, x3)?;
        println!("sample {:?}: {:?}", e.sample, e.outcome);
        for c in &e.candidates {
            println!("  Γ12 = {:.4} Γ34 = {:.4}  {:?}", c.gamma12[0], c.gamma34[0], c.class);
        }
    }

    let fish = emlt_bounds(&UndirectedGraph::fish())?;
    println!("fish: exact threshold {:?}", fish.exact);
    Ok(())
}
