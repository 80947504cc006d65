//! Extremal ML degrees: closed forms for cycles, multiplicativity over clique
//! separators, and numeric root counting for K_{2,n}.

use hrgm::degree::{emld, emld_k2n_numeric, mld_relations_check, NumericOptions};
use hrgm::graphs::UndirectedGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(" n  eMLD(C_n)  MLD(C_n)  identities");
    for n in 3..=12 {
        let r = mld_relations_check(n)?;
        println!("{n:>2} {:>10} {:>9}  {} {}", r.emld, r.mld, r.difference_identity, r.three_term_identity);
    }

    for (name, g) in [("fish", UndirectedGraph::fish()), ("C4", UndirectedGraph::cycle(4)), ("K2,3", UndirectedGraph::complete_bipartite(2, 3))] {
        let r = emld(&g)?;
        println!("{name}: eMLD {} MLD {} via {:?}", r.emld, r.mld, r.method);
    }

    for n in 2..=5 {
        let r = emld_k2n_numeric(n, 0, &NumericOptions::default())?;
        let cert = r.numeric.expect("numeric run");
        println!(
            "K2,{n}: {} complex solutions, {} real, {} strictly CND",
            r.emld, cert.real_roots, cert.strictly_cnd_roots
        );
    }
    Ok(())
}
