//! Standard constructors: the small groupoids, bundles, and skeletons used
//! throughout the examples, fixtures, and tests.

use num_complex::Complex64;

use crate::bundle::FellBundle;
use crate::groupoid::FiniteGroupoid;
use crate::kgraph::Skeleton;

/// Multiplication table of a finite group; table[i][j] = index of g_i g_j.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order())
            .find(|&j| self.table[i][j] == self.identity)
            .expect("group table has no inverse")
    }
}

/// The cyclic group Z/m as a multiplication table.
pub fn cyclic_table(m: usize) -> GroupTable {
    assert!(m >= 1);
    GroupTable {
        labels: (0..m).map(|i| format!("g{i}")).collect(),
        table: (0..m)
            .map(|i| (0..m).map(|j| (i + j) % m).collect())
            .collect(),
        identity: 0,
    }
}

/// (Z/2)^2, elements ordered 00, 10, 01, 11.
pub fn klein_table() -> GroupTable {
    let elems = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let idx = |a: usize, b: usize| elems.iter().position(|&e| e == (a % 2, b % 2)).unwrap();
    GroupTable {
        labels: elems.iter().map(|(a, b)| format!("({a},{b})")).collect(),
        table: elems
            .iter()
            .map(|&(a, b)| elems.iter().map(|&(c, d)| idx(a + c, b + d)).collect())
            .collect(),
        identity: 0,
    }
}

/// Klein group element as an exponent vector (for bilinear cocycles).
pub fn klein_vector(i: usize) -> (usize, usize) {
    [(0, 0), (1, 0), (0, 1), (1, 1)][i]
}

/// The pair groupoid on n units: arrows are ordered pairs (i,j) with
/// r(i,j) = i, s(i,j) = j and (i,j).(j,k) = (i,k).
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    let units: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut arrows = Vec::new();
    let mut range = Vec::new();
    let mut source = Vec::new();
    let aid = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        for j in 0..n {
            arrows.push(format!("({i},{j})"));
            range.push(i);
            source.push(j);
        }
    }
    let mut compose = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                compose.push((aid(i, j), aid(j, k), aid(i, k)));
            }
        }
    }
    let inverse = (0..n * n).map(|a| aid(a % n, a / n)).collect();
    let unit_arrow = (0..n).map(|i| aid(i, i)).collect();
    FiniteGroupoid::new(units, arrows, range, source, compose, inverse, unit_arrow).unwrap()
}

/// A finite group viewed as a one-unit groupoid.
pub fn group_groupoid(t: &GroupTable) -> FiniteGroupoid {
    let n = t.order();
    let mut compose = Vec::new();
    for i in 0..n {
        for j in 0..n {
            compose.push((i, j, t.table[i][j]));
        }
    }
    let inverse = (0..n).map(|i| t.inverse(i)).collect();
    FiniteGroupoid::new(
        vec!["x".to_string()],
        t.labels.clone(),
        vec![0; n],
        vec![0; n],
        compose,
        inverse,
        vec![t.identity],
    )
    .unwrap()
}

pub fn cyclic_group_groupoid(m: usize) -> FiniteGroupoid {
    group_groupoid(&cyclic_table(m))
}

/// Action groupoid of a finite group acting on a finite set by the given
/// permutations (action[g][p] = g . p). Arrows are pairs (g, p) with
/// source p and range g . p; (g, h.p)(h, p) = (gh, p).
pub fn action_groupoid(t: &GroupTable, action: &[Vec<usize>]) -> FiniteGroupoid {
    let n = t.order();
    assert_eq!(action.len(), n);
    let npts = action[0].len();
    let units: Vec<String> = (0..npts).map(|p| format!("p{p}")).collect();
    let aid = |g: usize, p: usize| g * npts + p;
    let mut arrows = Vec::new();
    let mut range = Vec::new();
    let mut source = Vec::new();
    for g in 0..n {
        for p in 0..npts {
            arrows.push(format!("({}, p{})", t.labels[g], p));
            source.push(p);
            range.push(action[g][p]);
        }
    }
    let mut compose = Vec::new();
    for g in 0..n {
        for h in 0..n {
            for p in 0..npts {
                // (g, h.p) . (h, p) = (gh, p)
                compose.push((aid(g, action[h][p]), aid(h, p), aid(t.table[g][h], p)));
            }
        }
    }
    let inverse = (0..n * npts)
        .map(|a| {
            let (g, p) = (a / npts, a % npts);
            aid(t.inverse(g), action[g][p])
        })
        .collect();
    let unit_arrow = (0..npts).map(|p| aid(t.identity, p)).collect();
    FiniteGroupoid::new(units, arrows, range, source, compose, inverse, unit_arrow).unwrap()
}

/// Disjoint union of two groupoids (labels prefixed to stay unique).
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let units: Vec<String> = a
        .unit_labels()
        .iter()
        .map(|u| format!("L.{u}"))
        .chain(b.unit_labels().iter().map(|u| format!("R.{u}")))
        .collect();
    let arrows: Vec<String> = a
        .arrow_labels()
        .iter()
        .map(|g| format!("L.{g}"))
        .chain(b.arrow_labels().iter().map(|g| format!("R.{g}")))
        .collect();
    let (nu, na) = (a.unit_count(), a.arrow_count());
    let range: Vec<usize> = (0..a.arrow_count())
        .map(|g| a.range(g))
        .chain((0..b.arrow_count()).map(|g| b.range(g) + nu))
        .collect();
    let source: Vec<usize> = (0..a.arrow_count())
        .map(|g| a.source(g))
        .chain((0..b.arrow_count()).map(|g| b.source(g) + nu))
        .collect();
    let mut compose: Vec<(usize, usize, usize)> = a
        .composable_pairs()
        .iter()
        .map(|&(g, h)| (g, h, a.compose(g, h).unwrap()))
        .collect();
    compose.extend(
        b.composable_pairs()
            .iter()
            .map(|&(g, h)| (g + na, h + na, b.compose(g, h).unwrap() + na)),
    );
    let inverse: Vec<usize> = (0..a.arrow_count())
        .map(|g| a.inverse(g))
        .chain((0..b.arrow_count()).map(|g| b.inverse(g) + na))
        .collect();
    let unit_arrow: Vec<usize> = (0..a.unit_count())
        .map(|x| a.unit_arrow(x))
        .chain((0..b.unit_count()).map(|x| b.unit_arrow(x) + na))
        .collect();
    FiniteGroupoid::new(units, arrows, range, source, compose, inverse, unit_arrow).unwrap()
}

// ---------------------------------------------------------------------------
// Standard bundles
// ---------------------------------------------------------------------------

/// The trivial line bundle: every fiber C, multiplication of scalars.
pub fn trivial_line_bundle(g: &FiniteGroupoid) -> FellBundle {
    FellBundle::from_cocycle(g, |_, _| Complex64::new(1.0, 0.0)).unwrap()
}

/// Cocycle line bundle over a finite group from a bilinear exponent:
/// sigma(s, t) = exp(2 pi i s^T B t / modulus) with s, t exponent vectors.
pub fn bilinear_cocycle_bundle(
    t: &GroupTable,
    vector_of: impl Fn(usize) -> Vec<i64>,
    exponent: &[Vec<i64>],
    modulus: i64,
) -> FellBundle {
    let g = group_groupoid(t);
    let phase = |i: usize, j: usize| {
        let s = vector_of(i);
        let tv = vector_of(j);
        let mut e = 0i64;
        for (a, row) in exponent.iter().enumerate() {
            for (b, &coef) in row.iter().enumerate() {
                e += s[a] * coef * tv[b];
            }
        }
        let theta = 2.0 * std::f64::consts::PI * (e as f64) / (modulus as f64);
        Complex64::new(theta.cos(), theta.sin())
    };
    FellBundle::from_cocycle(&g, |x, y| phase(x, y)).unwrap()
}

/// The twisted (Z/2)^2 bundle with sigma((a,b),(c,d)) = (-1)^(b c).
pub fn klein_twisted_bundle() -> FellBundle {
    bilinear_cocycle_bundle(
        &klein_table(),
        |i| {
            let (a, b) = klein_vector(i);
            vec![a as i64, b as i64]
        },
        &[vec![0, 0], vec![1, 0]],
        2,
    )
}

/// The untwisted (Z/2)^2 group bundle.
pub fn klein_trivial_bundle() -> FellBundle {
    trivial_line_bundle(&group_groupoid(&klein_table()))
}

/// Z/2 acting on C + C by the coordinate flip; the crossed product is M_2.
pub fn flip_dynamical_bundle() -> FellBundle {
    use crate::algebra::build;
    use crate::linalg::{CMat, ONE, ZERO};
    let g = cyclic_group_groupoid(2);
    let algs = vec![build::block_diagonal(&[1, 1])];
    let flip = CMat::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]);
    FellBundle::from_dynamical_system(&g, &algs, &[CMat::identity(2), flip]).unwrap()
}

/// Pair groupoid on two units with 2-dimensional commutative unit fibers
/// and the swap-conjugation action act(i, j) = psi_i psi_j^-1.
pub fn pair_dynamical_bundle() -> FellBundle {
    use crate::algebra::build;
    use crate::linalg::{CMat, ONE, ZERO};
    let g = pair_groupoid(2);
    let algs = vec![
        build::block_diagonal(&[1, 1]),
        build::block_diagonal(&[1, 1]),
    ];
    let swap = CMat::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]);
    let act = vec![CMat::identity(2), swap.clone(), swap, CMat::identity(2)];
    FellBundle::from_dynamical_system(&g, &algs, &act).unwrap()
}

// ---------------------------------------------------------------------------
// Standard k-graph skeletons
// ---------------------------------------------------------------------------

/// 1-graph with one vertex and `loops` loops.
pub fn loops_skeleton(loops: usize) -> Skeleton {
    let edges = (0..loops).map(|i| (format!("e{i}"), 0, 0)).collect();
    Skeleton::new(1, vec!["v".into()], vec![edges], Vec::new()).unwrap()
}

/// 2-graph with a single vertex, `blue` loops of color 1 and `red` loops of
/// color 2, and squares pairing (b, r) with (r, b) (product-like shuffle).
pub fn product_loops_skeleton(blue: usize, red: usize) -> Skeleton {
    let blues: Vec<(String, usize, usize)> = (0..blue).map(|i| (format!("b{i}"), 0, 0)).collect();
    let reds: Vec<(String, usize, usize)> = (0..red).map(|i| (format!("r{i}"), 0, 0)).collect();
    let mut squares = Vec::new();
    for i in 0..blue {
        for j in 0..red {
            // b_i r_j = r_j b_i
            squares.push((0, 1, i, j, j, i));
        }
    }
    Skeleton::new(2, vec!["v".into()], vec![blues, reds], squares).unwrap()
}

/// 1-graph: vertices v -> w with `at_v` loops at v, `at_w` loops at w and a
/// single connecting edge with range v and source w.
pub fn chain_skeleton(at_v: usize, at_w: usize) -> Skeleton {
    let mut edges = Vec::new();
    for i in 0..at_v {
        edges.push((format!("av{i}"), 0, 0));
    }
    for i in 0..at_w {
        edges.push((format!("aw{i}"), 1, 1));
    }
    edges.push(("c".to_string(), 0, 1));
    Skeleton::new(1, vec!["v".into(), "w".into()], vec![edges], Vec::new()).unwrap()
}

/// 1-graph: a single directed n-cycle.
pub fn cycle_skeleton(n: usize) -> Skeleton {
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n).map(|i| (format!("e{i}"), i, (i + 1) % n)).collect();
    Skeleton::new(1, vertices, vec![edges], Vec::new()).unwrap()
}

/// Disjoint union of two 1-graphs given as loop counts per vertex.
pub fn two_component_skeleton(loops_a: usize, loops_b: usize) -> Skeleton {
    let mut edges = Vec::new();
    for i in 0..loops_a {
        edges.push((format!("a{i}"), 0, 0));
    }
    for i in 0..loops_b {
        edges.push((format!("b{i}"), 1, 1));
    }
    Skeleton::new(1, vec!["u".into(), "w".into()], vec![edges], Vec::new()).unwrap()
}
