//! Exact integer-lattice algebra: Smith normal form, subgroup membership,
//! quotient monoids, and Pontryagin dual shapes.
//!
//! ```bash
//! cargo run --example smith_normal_form
//! ```

use fellstab::lattice::{mat_mul, smith_normal_form, DualShape, QuotientMonoid, Subgroup};

fn main() {
    let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
    let snf = smith_normal_form(&a);
    println!("A = {a:?}");
    println!("D = diag{:?}", snf.diagonal());
    println!("U = {:?}", snf.u);
    println!("V = {:?}", snf.v);
    println!(
        "U A V = D: {}",
        mat_mul(&mat_mul(&snf.u, &a), &snf.v) == snf.d
    );

    // subgroup membership through integer solving
    let h = Subgroup::new(2, vec![vec![1, -1]]);
    println!("\nH = Z(1,-1) inside Z^2:");
    println!("  (3,-3) in H: {}", h.contains(&[3, -3]));
    println!("  (1, 1) in H: {}", h.contains(&[1, 1]));

    // the quotient monoid P = image of N^2 in Z^2/H identifies the two
    // generators
    let p = QuotientMonoid::new(h);
    println!("  q(1,0) = q(0,1): {}", p.classes_equal(&[1, 0], &[0, 1]));
    println!("  q(0,0) <= q(1,0): {:?}", p.le(&[0, 0], &[1, 0], 16));

    // dual shapes from presentations
    println!("\ndual shapes:");
    println!("  dual of Z^2          = {}", DualShape::of_free(2));
    println!(
        "  dual of Z^2/<(2,0)>  = {}",
        DualShape::of_quotient(2, &[vec![2, 0]])
    );
    println!(
        "  dual of Z^2/<(2,0),(0,4)> = {}",
        DualShape::of_quotient(2, &[vec![2, 0], vec![0, 4]])
    );
}
