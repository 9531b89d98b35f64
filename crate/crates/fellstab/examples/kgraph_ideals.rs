//! Saturated hereditary vertex sets, maximal tails, and the gauge-invariant
//! ideal lattice of a k-graph, with the "all ideals" label exactly when
//! strong aperiodicity is certified.
//!
//! ```bash
//! cargo run --example kgraph_ideals
//! ```

use fellstab::kgraph::{maximal_tails, saturated_hereditary_sets, Skeleton};
use fellstab::prim::{gauge_invariant_ideals, IdealLatticeLabel};
use fellstab::zoo;

fn show(name: &str, sk: &Skeleton) {
    let sets = saturated_hereditary_sets(sk).unwrap();
    let tails = maximal_tails(sk).unwrap();
    let gauge = gauge_invariant_ideals(sk, 6).unwrap();
    println!("{name}:");
    let fmt = |s: &std::collections::BTreeSet<usize>| {
        let labels: Vec<&str> = s.iter().map(|&v| sk.vertex_label(v)).collect();
        format!("{{{}}}", labels.join(", "))
    };
    println!(
        "  saturated hereditary sets: {}",
        sets.iter().map(&fmt).collect::<Vec<_>>().join(" ")
    );
    println!(
        "  maximal tails:             {}",
        tails.iter().map(&fmt).collect::<Vec<_>>().join(" ")
    );
    println!(
        "  the lattice lists {}",
        match gauge.label {
            IdealLatticeLabel::AllIdeals => "ALL ideals (strongly aperiodic)",
            IdealLatticeLabel::GaugeInvariantOnly => "the gauge-invariant ideals only",
        }
    );
}

fn main() {
    show("two loops at one vertex", &zoo::loops_skeleton(2));
    show("single loop", &zoo::loops_skeleton(1));
    show("chain v -> w with loops", &zoo::chain_skeleton(1, 2));
    show(
        "two strongly connected components",
        &zoo::two_component_skeleton(2, 2),
    );
}
