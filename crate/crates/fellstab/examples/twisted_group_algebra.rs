//! Twisted group algebras from 2-cocycles: the (Z/2)^2 example where a
//! nontrivial twist collapses four characters into one 2x2 block, with the
//! symmetrizer subgroup controlling the block structure.
//!
//! ```bash
//! cargo run --example twisted_group_algebra
//! ```

use fellstab::zoo;
use fellstab::DEFAULT_TOLERANCE as TOL;

fn main() {
    // untwisted: four one-dimensional characters
    let plain = zoo::klein_trivial_bundle();
    println!(
        "(Z/2)^2 untwisted: blocks {:?}",
        plain
            .section_algebra()
            .algebra
            .block_decompose(TOL)
            .unwrap()
            .sizes()
    );

    // twisted by sigma((a,b),(c,d)) = (-1)^(bc): a single 2x2 block, the
    // Pauli matrices X and Z realizing the two generators
    let twisted = zoo::klein_twisted_bundle();
    println!(
        "(Z/2)^2 twisted:   blocks {:?}",
        twisted
            .section_algebra()
            .algebra
            .block_decompose(TOL)
            .unwrap()
            .sizes()
    );

    // the symmetrizer subgroup of the twist: elements t with
    // sigma(t, s) = sigma(s, t) for every s; only the identity here
    let sigma = |i: usize, j: usize| -> f64 {
        let (_, b) = zoo::klein_vector(i);
        let (c, _) = zoo::klein_vector(j);
        if b * c % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    };
    let symmetric: Vec<usize> = (0..4)
        .filter(|&t| (0..4).all(|s| (sigma(t, s) - sigma(s, t)).abs() < 1e-12))
        .collect();
    println!("symmetrizer of the twist: {} element(s)", symmetric.len());
    println!("  trivial symmetrizer <-> one block of size sqrt(|G|) = 2");

    // cohomologous cocycles give the same block structure: perturb the
    // trivial cocycle on Z/3 by a coboundary
    let g = zoo::cyclic_group_groupoid(3);
    let phases = [
        fellstab::linalg::ONE,
        fellstab::linalg::C64::new(0.0, 1.0),
        fellstab::linalg::C64::new(-0.5, 0.5 * 3f64.sqrt()),
    ];
    let coboundary = move |x: usize, y: usize| phases[x] * phases[y] / phases[(x + y) % 3];
    let twisted_z3 = fellstab::bundle::FellBundle::from_cocycle(&g, coboundary).unwrap();
    println!(
        "\nZ/3 with a coboundary twist: blocks {:?} (same as untwisted)",
        twisted_z3
            .section_algebra()
            .algebra
            .block_decompose(TOL)
            .unwrap()
            .sizes()
    );
}
