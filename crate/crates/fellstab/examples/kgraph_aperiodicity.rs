//! Bounded aperiodicity verdicts for k-graph skeletons, and the
//! strong-aperiodicity check computed along two independent routes
//! (saturated hereditary complements vs maximal tails).
//!
//! ```bash
//! cargo run --example kgraph_aperiodicity
//! ```

use fellstab::kgraph::{aperiodicity, strong_aperiodicity, AperiodicityVerdict, Skeleton};
use fellstab::zoo;

fn show(name: &str, sk: &Skeleton, depth: usize) {
    let plain = match aperiodicity(sk, depth).unwrap() {
        AperiodicityVerdict::Aperiodic(_) => "aperiodic".to_string(),
        AperiodicityVerdict::Periodic(c) => format!(
            "periodic at {} with (p, q) = ({:?}, {:?})",
            sk.vertex_label(c.vertex),
            c.p,
            c.q
        ),
        AperiodicityVerdict::Unknown => "unknown".to_string(),
    };
    let strong = strong_aperiodicity(sk, depth).unwrap();
    println!("{name}:");
    println!("  aperiodicity:        {plain}");
    println!(
        "  strong aperiodicity: {:?} (hereditary route {:?}, tail route {:?})",
        strong.verdict, strong.via_hereditary, strong.via_tails
    );
}

fn main() {
    let depth = 6;
    show("single loop", &zoo::loops_skeleton(1), depth);
    show("two loops", &zoo::loops_skeleton(2), depth);
    show(
        "product of single loops (k = 2)",
        &zoo::product_loops_skeleton(1, 1),
        depth,
    );
    show(
        "two blue loops x two red loops",
        &zoo::product_loops_skeleton(2, 2),
        depth,
    );
    // one aperiodic color does not make a 2-graph aperiodic: shifts along
    // the single red loop fix every infinite path
    show(
        "two blue loops x one red loop",
        &zoo::product_loops_skeleton(2, 1),
        depth,
    );
    // aperiodic as a graph, but a hereditary complement is a single loop,
    // so strong aperiodicity fails
    show(
        "chain v -> w, one loop at v, two at w",
        &zoo::chain_skeleton(1, 2),
        depth,
    );
    show(
        "two-loop component + one-loop component",
        &zoo::two_component_skeleton(2, 1),
        depth,
    );
}
