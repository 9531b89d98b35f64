//! The primitive-ideal pipeline for pullback k-graphs: from a P-graph
//! presentation and rational cocycle data to the stratification by
//! bicharacters, symmetrizer subgroups, and dual-group shapes.
//!
//! ```bash
//! cargo run --example pullback_prim
//! ```

use fellstab::kgraph::{pullback, PGraphPresentation, Skeleton};
use fellstab::lattice::RationalCocycle;
use fellstab::prim::{prim_pipeline, CocycleAssignment};
use fellstab::zoo;
use num_rational::Rational64;

fn main() {
    // a single vertex with H = Z^2: the pullback is the rank-2 graph with
    // one loop per color; a twist theta_12 = 1/3 stratifies Prim into a
    // 2-torus over the symmetrizer 3Z x 3Z
    let pres = PGraphPresentation {
        skeleton: Skeleton::new(0, vec!["v".into()], Vec::new(), Vec::new()).unwrap(),
        ambient_rank: 2,
        h_basis: vec![vec![1, 0], vec![0, 1]],
        color_degrees: Vec::new(),
    };
    let theta = RationalCocycle::new(vec![
        vec![Rational64::new(0, 1), Rational64::new(1, 3)],
        vec![Rational64::new(0, 1), Rational64::new(0, 1)],
    ])
    .unwrap();
    let assignment = CocycleAssignment::constant(&pres.skeleton, theta);
    let report = prim_pipeline(&pres, &assignment, 6).unwrap();
    println!("single vertex, H = Z^2, theta_12 = 1/3:");
    print!("{}", report.render_text(&pres));

    // the principal case: two loops with H = Z(1,-1); the pullback is a
    // 2-graph whose two colors carry the same loops
    let pres = PGraphPresentation {
        skeleton: zoo::loops_skeleton(2),
        ambient_rank: 2,
        h_basis: vec![vec![1, -1]],
        color_degrees: vec![vec![1, 0]],
    };
    let pb = pullback(&pres).unwrap();
    println!(
        "\ntwo loops, H = Z(1,-1): pullback is a valid 2-graph: {}",
        pb.validate().is_valid()
    );
    for c in 0..pb.rank() {
        let ids: Vec<&str> = pb.color_edges(c).iter().map(|e| e.id.as_str()).collect();
        println!("  color {}: {:?}", c + 1, ids);
    }
    let assignment = CocycleAssignment::constant(&pres.skeleton, RationalCocycle::zero(1));
    let report = prim_pipeline(&pres, &assignment, 6).unwrap();
    print!("{}", report.render_text(&pres));
}
