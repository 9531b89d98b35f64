//! Section (convolution) algebras of line bundles and their Morita
//! invariants: matrix-block decomposition, center, ideal lattice.
//!
//! ```bash
//! cargo run --example convolution_algebras
//! ```

use fellstab::zoo;
use fellstab::DEFAULT_TOLERANCE as TOL;

fn main() {
    // the convolution algebra of the pair groupoid on n units is the full
    // n x n matrix algebra
    for n in [2usize, 3] {
        let bundle = zoo::trivial_line_bundle(&zoo::pair_groupoid(n));
        let s = bundle.section_algebra();
        let dec = s.algebra.block_decompose(TOL).unwrap();
        println!(
            "pair groupoid on {n}: dim {}, blocks {:?}, center {}, ideals {}",
            s.dim(),
            dec.sizes(),
            s.algebra.center_dimension(TOL),
            s.algebra.ideal_lattice(TOL).unwrap().len()
        );
    }

    // group algebras split by characters
    for m in [2usize, 3, 4] {
        let bundle = zoo::trivial_line_bundle(&zoo::cyclic_group_groupoid(m));
        let s = bundle.section_algebra();
        println!(
            "C[Z/{m}]: blocks {:?}",
            s.algebra.block_decompose(TOL).unwrap().sizes()
        );
    }

    // a disjoint union contributes one block per orbit and a Boolean ideal
    // lattice on the orbit set
    let g = zoo::disjoint_union(&zoo::pair_groupoid(2), &zoo::pair_groupoid(3));
    let s = zoo::trivial_line_bundle(&g).section_algebra();
    let lat = s.algebra.ideal_lattice(TOL).unwrap();
    println!(
        "pair(2) + pair(3): blocks {:?}, {} ideals (orbits: {})",
        s.algebra.block_decompose(TOL).unwrap().sizes(),
        lat.len(),
        g.orbits().len()
    );
    for ideal in &lat.ideals {
        println!("  ideal mask {:02b}: dim {}", ideal.mask, ideal.dim);
    }
}
