//! Build and validate finite groupoids; inspect orbits and isotropy.
//!
//! ```bash
//! cargo run --example groupoid_basics
//! ```

use fellstab::zoo;

fn main() {
    // the pair groupoid on three units: arrows are ordered pairs (i, j)
    let pair = zoo::pair_groupoid(3);
    println!("pair groupoid on 3 units:");
    println!("  arrows: {}", pair.arrow_count());
    println!("  valid:  {}", pair.validate().is_valid());
    println!("  orbits: {:?}", pair.orbits());
    println!("  isotropy at x0: order {}", pair.isotropy(0).order());

    // a cyclic group viewed as a one-unit groupoid
    let z4 = zoo::cyclic_group_groupoid(4);
    println!("\nZ/4 as a groupoid:");
    println!("  valid:  {}", z4.validate().is_valid());
    println!("  isotropy at the unit: order {}", z4.isotropy(0).order());

    // an action groupoid: Z/2 swapping two points (a free action)
    let swap = zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![1, 0]]);
    println!("\nZ/2 swapping two points:");
    println!("  orbits: {:?}", swap.orbits());
    println!(
        "  isotropy orders: {:?}",
        (0..swap.unit_count())
            .map(|x| swap.isotropy(x).order())
            .collect::<Vec<_>>()
    );

    // the same group acting trivially: isotropy everywhere
    let trivial = zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![0, 1]]);
    println!("\nZ/2 acting trivially on two points:");
    println!("  orbits: {:?}", trivial.orbits());
    println!(
        "  isotropy orders: {:?}",
        (0..trivial.unit_count())
            .map(|x| trivial.isotropy(x).order())
            .collect::<Vec<_>>()
    );

    // validation catches corrupted tables; here we check a healthy one
    let union = zoo::disjoint_union(&zoo::pair_groupoid(2), &zoo::cyclic_group_groupoid(3));
    let report = union.validate();
    println!("\ndisjoint union of a pair groupoid and Z/3:");
    println!("  orbits: {}", union.orbits().len());
    print!("  validation: {}", report.render_text());
}
