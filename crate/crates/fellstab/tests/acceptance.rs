//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them). Every tolerance
//! and threshold is pinned here.
//!
//! 1. stabilization identity suite on six bundles, residuals <= 1e-9, <= 10 s
//! 2. Morita invariance of blocks, centers, and ideal lattices (exact)
//! 3. ideal count = 2^(orbit count) for free groupoids (exact)
//! 4. twisted Klein group algebra facts + symmetrizer cross-check (exact)
//! 5. single-vertex pullback strata for theta in {1/2, 1/3, 2/5} (exact)
//! 6. strong-aperiodicity routes agree on >= 8 skeletons, depth 6, <= 5 s
//! 7. pullback path-counting invariant for |n| <= 4 on three fixtures
//! 8. Smith normal form properties on 200 random matrices (exact)

use std::time::Instant;

use fellstab::bundle::FellBundle;
use fellstab::kgraph::{self, PGraphPresentation, Skeleton, Verdict3};
use fellstab::lattice::{self, smith_normal_form, RationalCocycle};
use fellstab::prim::{self, CocycleAssignment};
use fellstab::stabilize::{stabilize, StabilizationOptions};
use fellstab::zoo;
use num_rational::Rational64;

const TOLERANCE: f64 = 1e-9;
const DEPTH: usize = 6;
const STABILIZATION_BUDGET_SECS: f64 = 10.0;
const APERIODICITY_BUDGET_SECS: f64 = 5.0;

fn verdict(id: &str, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {}: {} — {}",
        id,
        if ok { "PASS" } else { "FAIL" },
        detail
    );
}

/// The bundle fixture set shared by criteria 1-3.
fn bundle_fixtures() -> Vec<(&'static str, FellBundle)> {
    vec![
        (
            "pair2-trivial",
            zoo::trivial_line_bundle(&zoo::pair_groupoid(2)),
        ),
        (
            "pair3-trivial",
            zoo::trivial_line_bundle(&zoo::pair_groupoid(3)),
        ),
        (
            "z2-line",
            zoo::trivial_line_bundle(&zoo::cyclic_group_groupoid(2)),
        ),
        (
            "z3-line",
            zoo::trivial_line_bundle(&zoo::cyclic_group_groupoid(3)),
        ),
        ("klein-twisted", zoo::klein_twisted_bundle()),
        ("pair2-dynamical", zoo::pair_dynamical_bundle()),
        ("flip-dynamical", zoo::flip_dynamical_bundle()),
        (
            "two-pairs",
            zoo::trivial_line_bundle(&zoo::disjoint_union(
                &zoo::pair_groupoid(2),
                &zoo::pair_groupoid(2),
            )),
        ),
    ]
}

#[test]
fn criterion_1_stabilization_identity_suite() {
    let start = Instant::now();
    let opts = StabilizationOptions {
        tolerance: TOLERANCE,
        corrupt_action: None,
    };
    let mut worst: f64 = 0.0;
    let mut all_ok = true;
    let mut count = 0usize;
    for (name, bundle) in bundle_fixtures() {
        assert!(
            bundle.validate(TOLERANCE).is_valid(),
            "{name} must be a valid bundle"
        );
        let st = stabilize(&bundle, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let rep = st.report();
        if !rep.ok() {
            all_ok = false;
            eprintln!("{name} failed:\n{}", rep.render_text());
        }
        worst = worst.max(rep.max_residual());
        count += rep.lines.len();
        // the crossed-product bundle is itself a valid Fell bundle
        let crossed_rep = st.crossed_bundle().validate(TOLERANCE);
        if !crossed_rep.is_valid() {
            all_ok = false;
            eprintln!(
                "{name}: crossed bundle invalid\n{}",
                crossed_rep.render_text()
            );
        }
        assert!(
            crossed_rep.is_valid(),
            "{name}: crossed-product bundle must validate"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = all_ok && worst <= TOLERANCE && elapsed <= STABILIZATION_BUDGET_SECS;
    verdict(
        "1 stabilization-identities",
        ok,
        &format!("{count} checks over 8 bundles, max residual {worst:.3e}, {elapsed:.2} s"),
    );
    assert!(all_ok, "every identity must pass");
    assert!(
        worst <= TOLERANCE,
        "max residual {worst:.3e} exceeds {TOLERANCE:.1e}"
    );
    assert!(
        elapsed <= STABILIZATION_BUDGET_SECS,
        "suite took {elapsed:.2} s, budget {STABILIZATION_BUDGET_SECS} s"
    );
}

#[test]
fn criterion_2_morita_invariance() {
    let opts = StabilizationOptions {
        tolerance: TOLERANCE,
        corrupt_action: None,
    };
    let mut ok = true;
    let mut details = Vec::new();
    for (name, bundle) in bundle_fixtures() {
        let st = stabilize(&bundle, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let m = st.morita_report().unwrap_or_else(|e| panic!("{name}: {e}"));
        let here = m.original.center_dim == m.stabilized.center_dim
            && m.original.blocks.len() == m.stabilized.blocks.len()
            && m.original.ideal_count == m.stabilized.ideal_count;
        if !here {
            ok = false;
            eprintln!("{name}:\n{}", m.render_text());
        }
        details.push(format!("{name}={}", m.original.blocks.len()));
        assert!(here, "{name}: Morita invariants must match exactly");
    }
    verdict(
        "2 morita-invariance",
        ok,
        &format!("block counts: {}", details.join(" ")),
    );
}

#[test]
fn criterion_3_ideal_lattice_counts_free_groupoids() {
    // free groupoids from the fixture family: pair groupoids, a free
    // action groupoid, and a disjoint union
    let free: Vec<(&str, fellstab::groupoid::FiniteGroupoid)> = vec![
        ("pair2", zoo::pair_groupoid(2)),
        ("pair3", zoo::pair_groupoid(3)),
        (
            "z2-free-action",
            zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![1, 0]]),
        ),
        (
            "two-pairs",
            zoo::disjoint_union(&zoo::pair_groupoid(2), &zoo::pair_groupoid(2)),
        ),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g) in free {
        // freeness: trivial isotropy everywhere
        for x in 0..g.unit_count() {
            assert_eq!(g.isotropy(x).order(), 1, "{name} must act freely");
        }
        let orbits = g.orbits().len();
        let b = zoo::trivial_line_bundle(&g);
        let lattice = b
            .section_algebra()
            .algebra
            .ideal_lattice(TOLERANCE)
            .unwrap();
        let expected = 1usize << orbits;
        if lattice.len() != expected {
            ok = false;
        }
        details.push(format!("{name}: {} = 2^{orbits}", lattice.len()));
        assert_eq!(lattice.len(), expected, "{name}: ideal count");
    }
    verdict("3 ideal-lattice-correspondence", ok, &details.join(", "));
}

#[test]
fn criterion_4_twisted_group_algebra_facts() {
    let twisted = zoo::klein_twisted_bundle();
    let plain = zoo::klein_trivial_bundle();
    let twisted_blocks = twisted
        .section_algebra()
        .algebra
        .block_decompose(TOLERANCE)
        .unwrap()
        .sizes();
    let plain_blocks = plain
        .section_algebra()
        .algebra
        .block_decompose(TOLERANCE)
        .unwrap()
        .sizes();

    // brute-force symmetrizer of the Klein cocycle: elements commuting with
    // everything under sigma(s, t) = (-1)^(s2 t1)
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
    let untwisted_symmetric: Vec<usize> = (0..4).collect();

    let ok = twisted_blocks == vec![2]
        && plain_blocks == vec![1, 1, 1, 1]
        && symmetric.len() == 1
        && twisted_blocks.len() == 1
        && twisted_blocks[0] * twisted_blocks[0] == 4
        && untwisted_symmetric.len() == plain_blocks.len();
    verdict(
        "4 twisted-group-algebra",
        ok,
        &format!(
            "twisted blocks {twisted_blocks:?} (symmetrizer order {}), untwisted {plain_blocks:?}",
            symmetric.len()
        ),
    );
    assert_eq!(twisted_blocks, vec![2]);
    assert_eq!(plain_blocks, vec![1, 1, 1, 1]);
    // trivial symmetrizer <-> single block of size sqrt|G|
    assert_eq!(symmetric, vec![0], "only the identity is symmetric");
    assert_eq!(twisted_blocks, vec![2], "single block of size sqrt(4)");
}

#[test]
fn criterion_5_symmetrizer_prim_reproduction() {
    let pres = PGraphPresentation {
        skeleton: Skeleton::new(0, vec!["v".into()], Vec::new(), Vec::new()).unwrap(),
        ambient_rank: 2,
        h_basis: vec![vec![1, 0], vec![0, 1]],
        color_degrees: Vec::new(),
    };
    let mut ok = true;
    let mut details = Vec::new();
    for (p, q) in [(1i64, 2i64), (1, 3), (2, 5)] {
        let theta = RationalCocycle::new(vec![
            vec![Rational64::new(0, 1), Rational64::new(p, q)],
            vec![Rational64::new(0, 1), Rational64::new(0, 1)],
        ])
        .unwrap();
        let assignment = CocycleAssignment::constant(&pres.skeleton, theta);
        let report = prim::prim_pipeline(&pres, &assignment, DEPTH).unwrap();
        let strata = &report.stratification.strata;
        let one_stratum = strata.len() == 1;
        let s = &strata[0];
        // Z(omega) = qZ x qZ: index q^2, free of rank 2, no finite factors
        let index_ok = s.symmetrizer.index_in_ambient() == Some((q * q) as i128);
        let members_ok = s.symmetrizer.contains(&[q, 0])
            && s.symmetrizer.contains(&[0, q])
            && !s.symmetrizer.contains(&[1, 0]);
        let dual_ok = s.dual.torus_rank == 2 && s.dual.invariant_factors.is_empty();
        if !(one_stratum && index_ok && members_ok && dual_ok) {
            ok = false;
        }
        details.push(format!(
            "{p}/{q}: index {:?}",
            s.symmetrizer.index_in_ambient()
        ));
        assert!(
            one_stratum && index_ok && members_ok && dual_ok,
            "theta12 = {p}/{q}"
        );
    }
    verdict("5 symmetrizer-prim", ok, &details.join(", "));
}

#[test]
fn criterion_6_strong_aperiodicity_equivalence() {
    let start = Instant::now();
    let skeletons: Vec<(&str, Skeleton)> = vec![
        ("single-loop", zoo::loops_skeleton(1)),
        ("two-loops", zoo::loops_skeleton(2)),
        ("three-loops", zoo::loops_skeleton(3)),
        ("two-cycle", zoo::cycle_skeleton(2)),
        ("product-1x1", zoo::product_loops_skeleton(1, 1)),
        ("product-2x2", zoo::product_loops_skeleton(2, 2)),
        ("product-2x1", zoo::product_loops_skeleton(2, 1)),
        ("chain-1-1", zoo::chain_skeleton(1, 1)),
        ("chain-1-2", zoo::chain_skeleton(1, 2)),
        ("two-components-2-1", zoo::two_component_skeleton(2, 1)),
        ("two-components-2-2", zoo::two_component_skeleton(2, 2)),
    ];
    let mut ok = true;
    let mut decided = 0usize;
    let mut details = Vec::new();
    for (name, sk) in &skeletons {
        assert!(sk.validate().is_valid(), "{name} must validate");
        let r = kgraph::strong_aperiodicity(sk, DEPTH).unwrap();
        if r.conflict() {
            ok = false;
            eprintln!(
                "{name}: hereditary route {:?} vs tail route {:?}",
                r.via_hereditary, r.via_tails
            );
        }
        assert!(!r.conflict(), "{name}: the two routes must not contradict");
        if r.via_hereditary != Verdict3::Unknown && r.via_tails != Verdict3::Unknown {
            decided += 1;
            assert_eq!(
                r.via_hereditary, r.via_tails,
                "{name}: decided routes agree"
            );
        }
        details.push(format!("{name}={:?}", r.verdict));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > APERIODICITY_BUDGET_SECS {
        ok = false;
    }
    verdict(
        "6 strong-aperiodicity-equivalence",
        ok,
        &format!(
            "{} skeletons, {decided} decided both ways, {elapsed:.2} s: {}",
            skeletons.len(),
            details.join(" ")
        ),
    );
    assert!(decided >= 8, "at least eight fixtures must be decided");
    assert!(
        elapsed <= APERIODICITY_BUDGET_SECS,
        "took {elapsed:.2} s, budget {APERIODICITY_BUDGET_SECS} s"
    );
    assert!(ok);
}

#[test]
fn criterion_7_pullback_counting_invariant() {
    let fixtures: Vec<(&str, PGraphPresentation)> = vec![
        (
            "two-loops-H(1,-1)",
            PGraphPresentation {
                skeleton: zoo::loops_skeleton(2),
                ambient_rank: 2,
                h_basis: vec![vec![1, -1]],
                color_degrees: vec![vec![1, 0]],
            },
        ),
        (
            "product-2x2-H0",
            PGraphPresentation::plain_kgraph(zoo::product_loops_skeleton(2, 2)),
        ),
        (
            "single-vertex-HZ2",
            PGraphPresentation {
                skeleton: Skeleton::new(0, vec!["v".into()], Vec::new(), Vec::new()).unwrap(),
                ambient_rank: 2,
                h_basis: vec![vec![1, 0], vec![0, 1]],
                color_degrees: Vec::new(),
            },
        ),
        (
            "chain-H(1,-1)",
            PGraphPresentation {
                skeleton: zoo::chain_skeleton(1, 2),
                ambient_rank: 2,
                h_basis: vec![vec![1, -1]],
                color_degrees: vec![vec![1, 0]],
            },
        ),
    ];
    let mut ok = true;
    let mut checked = 0usize;
    for (name, pres) in &fixtures {
        pres.validate().unwrap();
        let pb = kgraph::pullback(pres).unwrap();
        assert!(pb.validate().is_valid(), "{name}: pullback must validate");
        let k = pres.ambient_rank;
        // all n in N^k with |n| <= 4
        let mut degrees = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for d in &degrees {
                for x in 0..=4i64 {
                    let mut v: Vec<i64> = d.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            degrees = next;
        }
        for n in degrees.iter().filter(|n| n.iter().sum::<i64>() <= 4) {
            for v in 0..pres.skeleton.vertex_count() {
                let nn: Vec<usize> = n.iter().map(|&x| x as usize).collect();
                let lhs = pb.count_paths(v, &nn).unwrap();
                let rhs = pres.count_morphisms(v, n).unwrap();
                if lhs != rhs {
                    ok = false;
                }
                assert_eq!(lhs, rhs, "{name}: count mismatch at v={v}, n={n:?}");
                checked += 1;
            }
        }
    }
    verdict(
        "7 pullback-counting",
        ok,
        &format!("{checked} exact comparisons on 4 fixtures"),
    );
}

#[test]
fn criterion_8_smith_normal_form_properties() {
    // deterministic xorshift so the 200 cases are reproducible
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut ok = true;
    let mut twos = 0usize;
    for case in 0..200 {
        let rows = 1 + (next() % 5) as usize;
        let cols = 1 + (next() % 5) as usize;
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| (next() % 19) as i64 - 9).collect())
            .collect();
        let snf = smith_normal_form(&a);
        // U A V = D exactly
        let uav = lattice::mat_mul(&lattice::mat_mul(&snf.u, &a), &snf.v);
        if uav != snf.d {
            ok = false;
        }
        assert_eq!(uav, snf.d, "case {case}: U A V = D");
        // unimodular
        assert_eq!(lattice::det_i64(&snf.u).abs(), 1, "case {case}: det U");
        assert_eq!(lattice::det_i64(&snf.v).abs(), 1, "case {case}: det V");
        // diagonal, nonnegative, divisibility chain
        let diag = snf.diagonal();
        for (i, row) in snf.d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(x, 0, "case {case}: off-diagonal");
                }
            }
            if i < diag.len() {
                assert!(diag[i] >= 0, "case {case}: sign convention");
            }
        }
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert_eq!(w[1] % w[0], 0, "case {case}: divisibility");
        }
        // 2x2 oracle: first factor is the entry gcd; the product of the
        // factors is |det|
        if rows == 2 && cols == 2 {
            twos += 1;
            use num_integer::Integer;
            let g = a[0][0]
                .abs()
                .gcd(&a[0][1].abs())
                .gcd(&a[1][0].abs())
                .gcd(&a[1][1].abs());
            let det = lattice::det_i64(&a).unsigned_abs() as i64;
            if g == 0 {
                assert_eq!(diag, vec![0, 0], "case {case}: zero matrix");
            } else {
                assert_eq!(diag[0], g, "case {case}: first invariant factor");
                if det == 0 {
                    assert_eq!(diag[1], 0, "case {case}: rank one");
                } else {
                    assert_eq!(diag[0] * diag[1], det, "case {case}: factor product");
                }
            }
        }
    }
    verdict(
        "8 snf-properties",
        ok,
        &format!("200 random matrices, {twos} 2x2 oracle checks"),
    );
    assert!(ok);
}

/// Sanity for the whole suite: the acceptance bundles exercise both line
/// bundles and dynamical-system bundles with nonabelian crossed products.
#[test]
fn fixture_set_shape() {
    let fixtures = bundle_fixtures();
    assert!(fixtures.len() >= 6);
    let has_dynamical = fixtures
        .iter()
        .any(|(n, b)| n.contains("dynamical") && b.fiber_dims().iter().any(|&d| d >= 2));
    assert!(
        has_dynamical,
        "a dynamical-system bundle with 2-dimensional fibers is included"
    );
}
