//! Bundles from groupoid dynamical systems, and Morita comparison after
//! stabilization: the flip action of Z/2 on C + C has crossed product M_2.
//!
//! ```bash
//! cargo run --example dynamical_system
//! ```

use fellstab::stabilize::{stabilize, StabilizationOptions};
use fellstab::zoo;
use fellstab::DEFAULT_TOLERANCE as TOL;

fn main() {
    // Z/2 flipping the two coordinates of C + C
    let flip = zoo::flip_dynamical_bundle();
    println!("flip action of Z/2 on C + C:");
    println!("  bundle valid: {}", flip.validate(TOL).is_valid());
    let s = flip.section_algebra();
    println!(
        "  section algebra: dim {}, blocks {:?}",
        s.dim(),
        s.algebra.block_decompose(TOL).unwrap().sizes()
    );

    let st = stabilize(&flip, &StabilizationOptions::default()).unwrap();
    println!(
        "  verification: {}",
        if st.report().ok() {
            "all identities pass"
        } else {
            "FAILED"
        }
    );
    println!("\n{}", st.morita_report().unwrap().render_text());

    // the pair groupoid with 2-dimensional unit fibers and the
    // swap-conjugation action
    let pair = zoo::pair_dynamical_bundle();
    println!("pair groupoid with C^2 fibers and the swap action:");
    let s = pair.section_algebra();
    println!(
        "  section algebra: dim {}, blocks {:?}",
        s.dim(),
        s.algebra.block_decompose(TOL).unwrap().sizes()
    );
    let st = stabilize(&pair, &StabilizationOptions::default()).unwrap();
    println!(
        "  max residual over all identities: {:.3e}",
        st.report().max_residual()
    );
    println!("\n{}", st.morita_report().unwrap().render_text());
}
