//! Finite groupoids with counting-measure Haar systems.
//!
//! All structure is table-driven: arrow identifiers are opaque, composition
//! is a partial map defined exactly on pairs (g, h) with source(g) =
//! range(h), and the unit embedding is stored explicitly so malformed
//! inputs with several idempotent-like arrows stay unambiguous.

use std::collections::HashMap;

use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("arrow index {0} out of range")]
    BadArrow(usize),
    #[error("unit index {0} out of range")]
    BadUnit(usize),
    #[error("duplicate composition entry for ({0}, {1})")]
    DuplicateComposition(usize, usize),
    #[error("table length mismatch: {0}")]
    Shape(String),
}

/// A finite groupoid: units, arrows, range/source, partial composition,
/// inversion, and the explicit unit embedding.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    units: Vec<String>,
    arrows: Vec<String>,
    range: Vec<usize>,
    source: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    /// Sorted list of pairs on which composition is declared.
    composable: Vec<(usize, usize)>,
    inverse: Vec<usize>,
    unit_arrow: Vec<usize>,
}

impl FiniteGroupoid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        units: Vec<String>,
        arrows: Vec<String>,
        range: Vec<usize>,
        source: Vec<usize>,
        compose_entries: Vec<(usize, usize, usize)>,
        inverse: Vec<usize>,
        unit_arrow: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        let na = arrows.len();
        let nu = units.len();
        if range.len() != na || source.len() != na || inverse.len() != na {
            return Err(GroupoidError::Shape(
                "range/source/inverse must cover all arrows".into(),
            ));
        }
        if unit_arrow.len() != nu {
            return Err(GroupoidError::Shape(
                "unit_arrow must cover all units".into(),
            ));
        }
        for &x in range.iter().chain(&source) {
            if x >= nu {
                return Err(GroupoidError::BadUnit(x));
            }
        }
        for &g in inverse.iter().chain(&unit_arrow) {
            if g >= na {
                return Err(GroupoidError::BadArrow(g));
            }
        }
        let mut compose = HashMap::new();
        let mut composable = Vec::new();
        for &(g, h, gh) in &compose_entries {
            if g >= na || h >= na || gh >= na {
                return Err(GroupoidError::BadArrow(g.max(h).max(gh)));
            }
            if compose.insert((g, h), gh).is_some() {
                return Err(GroupoidError::DuplicateComposition(g, h));
            }
            composable.push((g, h));
        }
        composable.sort_unstable();
        Ok(FiniteGroupoid {
            units,
            arrows,
            range,
            source,
            compose,
            composable,
            inverse,
            unit_arrow,
        })
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn unit_label(&self, x: usize) -> &str {
        &self.units[x]
    }

    pub fn arrow_label(&self, g: usize) -> &str {
        &self.arrows[g]
    }

    pub fn unit_labels(&self) -> &[String] {
        &self.units
    }

    pub fn arrow_labels(&self) -> &[String] {
        &self.arrows
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn unit_arrow(&self, x: usize) -> usize {
        self.unit_arrow[x]
    }

    /// Composite g.h if the table declares it.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose.get(&(g, h)).copied()
    }

    /// All pairs on which composition is declared, sorted.
    pub fn composable_pairs(&self) -> &[(usize, usize)] {
        &self.composable
    }

    /// G_up(x) = arrows with range x (the fiber of the counting measure).
    pub fn arrows_into(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&g| self.range[g] == x)
            .collect()
    }

    /// G_down(x) = arrows with source x.
    pub fn arrows_out_of(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&g| self.source[g] == x)
            .collect()
    }

    /// Exhaustive check of the groupoid axioms. Violations are report
    /// entries, not failures.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let na = self.arrows.len();
        let lbl = |g: usize| self.arrows[g].clone();

        // composition domain is exactly {(g,h) : s(g) = r(h)}
        for g in 0..na {
            for h in 0..na {
                let declared = self.compose.contains_key(&(g, h));
                let should = self.source[g] == self.range[h];
                if declared && !should {
                    rep.push(
                        "composition_domain",
                        format!("({}, {}) declared but not composable", lbl(g), lbl(h)),
                    );
                } else if !declared && should {
                    rep.push(
                        "composition_domain",
                        format!("({}, {}) composable but undeclared", lbl(g), lbl(h)),
                    );
                }
            }
        }

        // range/source of composites
        for &(g, h) in &self.composable {
            if let Some(gh) = self.compose(g, h) {
                if self.range[gh] != self.range[g] || self.source[gh] != self.source[h] {
                    rep.push(
                        "composite_endpoints",
                        format!(
                            "({}, {}) -> {} has wrong range or source",
                            lbl(g),
                            lbl(h),
                            lbl(gh)
                        ),
                    );
                }
            }
        }

        // associativity over all composable triples
        for &(g, h) in &self.composable {
            for k in 0..na {
                if self.source[h] != self.range[k] {
                    continue;
                }
                let left = self.compose(g, h).and_then(|gh| self.compose(gh, k));
                let right = self.compose(h, k).and_then(|hk| self.compose(g, hk));
                if left != right || left.is_none() {
                    rep.push(
                        "associativity",
                        format!(
                            "triple ({}, {}, {}): (gh)k = {:?}, g(hk) = {:?}",
                            lbl(g),
                            lbl(h),
                            lbl(k),
                            left.map(&lbl),
                            right.map(&lbl)
                        ),
                    );
                }
            }
        }

        // inverses
        for g in 0..na {
            let gi = self.inverse[g];
            if self.inverse[gi] != g {
                rep.push(
                    "inverse_involution",
                    format!("inverse(inverse({})) = {}", lbl(g), lbl(self.inverse[gi])),
                );
            }
            if self.range[gi] != self.source[g] || self.source[gi] != self.range[g] {
                rep.push("inverse_endpoints", format!("{} vs {}", lbl(g), lbl(gi)));
            }
            let u_r = self.unit_arrow[self.range[g]];
            let u_s = self.unit_arrow[self.source[g]];
            if self.compose(g, gi) != Some(u_r) {
                rep.push(
                    "inverse_right",
                    format!("{}.{} != unit at range", lbl(g), lbl(gi)),
                );
            }
            if self.compose(gi, g) != Some(u_s) {
                rep.push(
                    "inverse_left",
                    format!("{}.{} != unit at source", lbl(gi), lbl(g)),
                );
            }
        }

        // unit embedding: endpoints and two-sided identity
        for x in 0..self.units.len() {
            let u = self.unit_arrow[x];
            if self.range[u] != x || self.source[u] != x {
                rep.push(
                    "unit_endpoints",
                    format!(
                        "unit arrow {} of {} has wrong endpoints",
                        lbl(u),
                        self.units[x]
                    ),
                );
            }
        }
        for g in 0..na {
            let u_r = self.unit_arrow[self.range[g]];
            let u_s = self.unit_arrow[self.source[g]];
            if self.compose(u_r, g) != Some(g) {
                rep.push("unit_identity", format!("unit.{} != {}", lbl(g), lbl(g)));
            }
            if self.compose(g, u_s) != Some(g) {
                rep.push("unit_identity", format!("{}.unit != {}", lbl(g), lbl(g)));
            }
        }

        // inversion is a bijection G_up(x) <-> G_down(x)
        for x in 0..self.units.len() {
            let up = self.arrows_into(x);
            let mut image: Vec<usize> = up.iter().map(|&g| self.inverse[g]).collect();
            image.sort_unstable();
            image.dedup();
            let down = self.arrows_out_of(x);
            if image != down {
                rep.push(
                    "fiber_inversion",
                    format!(
                        "inversion does not map G_up({0}) onto G_down({0})",
                        self.units[x]
                    ),
                );
            }
        }

        // counting-measure left invariance: translation by g is a bijection
        // G_up(s(g)) -> G_up(r(g))
        for g in 0..na {
            let from = self.arrows_into(self.source[g]);
            let mut image = Vec::new();
            for &gamma in &from {
                match self.compose(g, gamma) {
                    Some(gg) => image.push(gg),
                    None => {
                        rep.push(
                            "left_translation",
                            format!("{}.{} undefined", lbl(g), lbl(gamma)),
                        );
                    }
                }
            }
            image.sort_unstable();
            image.dedup();
            let target = self.arrows_into(self.range[g]);
            if image != target {
                rep.push(
                    "left_translation",
                    format!("translation by {} is not a bijection", lbl(g)),
                );
            }
        }

        rep
    }

    /// Partition of the unit set: x, y lie in one block iff some arrow has
    /// range x and source y. Blocks and their contents are sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.units.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for g in 0..self.arrows.len() {
            let a = find(&mut parent, self.range[g]);
            let b = find(&mut parent, self.source[g]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            blocks.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = blocks.into_values().collect();
        for b in &mut out {
            b.sort_unstable();
        }
        out.sort();
        out
    }

    /// The isotropy group at x: all arrows with range = source = x, with
    /// its multiplication table (indices into the returned arrow list).
    pub fn isotropy(&self, x: usize) -> IsotropyGroup {
        let arrows: Vec<usize> = (0..self.arrows.len())
            .filter(|&g| self.range[g] == x && self.source[g] == x)
            .collect();
        let index: HashMap<usize, usize> =
            arrows.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = arrows.len();
        let mut table = vec![vec![usize::MAX; n]; n];
        let mut closed = true;
        for i in 0..n {
            for j in 0..n {
                match self
                    .compose(arrows[i], arrows[j])
                    .and_then(|gh| index.get(&gh))
                {
                    Some(&k) => table[i][j] = k,
                    None => closed = false,
                }
            }
        }
        IsotropyGroup {
            unit: x,
            arrows,
            table,
            closed,
        }
    }
}

/// An isotropy group presented as an arrow subset with its multiplication.
#[derive(Debug, Clone)]
pub struct IsotropyGroup {
    pub unit: usize,
    pub arrows: Vec<usize>,
    /// table[i][j] = index of arrows[i].arrows[j] in `arrows`.
    pub table: Vec<Vec<usize>>,
    /// Whether the subset was closed under composition.
    pub closed: bool,
}

impl IsotropyGroup {
    pub fn order(&self) -> usize {
        self.arrows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn pair_groupoid_is_valid() {
        let g = zoo::pair_groupoid(3);
        assert!(g.validate().is_valid());
        assert_eq!(g.arrow_count(), 9);
    }

    #[test]
    fn cyclic_group_is_valid() {
        let g = zoo::cyclic_group_groupoid(4);
        assert!(g.validate().is_valid());
        assert_eq!(g.unit_count(), 1);
    }

    #[test]
    fn corrupted_composition_is_reported() {
        // redirect one composition entry of the pair groupoid on 3 units
        let g = zoo::pair_groupoid(3);
        let mut entries = Vec::new();
        for &(a, b) in g.composable_pairs() {
            let mut c = g.compose(a, b).unwrap();
            // (0,1).(1,2) = (0,2); redirect it to (0,1)
            if g.arrow_label(a) == "(0,1)" && g.arrow_label(b) == "(1,2)" {
                c = (0..g.arrow_count())
                    .find(|&x| g.arrow_label(x) == "(0,1)")
                    .unwrap();
            }
            entries.push((a, b, c));
        }
        let bad = FiniteGroupoid::new(
            g.unit_labels().to_vec(),
            g.arrow_labels().to_vec(),
            (0..g.arrow_count()).map(|a| g.range(a)).collect(),
            (0..g.arrow_count()).map(|a| g.source(a)).collect(),
            entries,
            (0..g.arrow_count()).map(|a| g.inverse(a)).collect(),
            (0..g.unit_count()).map(|x| g.unit_arrow(x)).collect(),
        )
        .unwrap();
        let rep = bad.validate();
        assert!(!rep.is_valid());
        // the redirected entry must be witnessed by an endpoint or
        // associativity failure mentioning the pair
        assert!(rep.violations.iter().any(|v| {
            (v.code == "composite_endpoints" || v.code == "associativity")
                && v.witness.contains("(0,1)")
                && v.witness.contains("(1,2)")
        }));
    }

    #[test]
    fn orbits_of_standard_examples() {
        assert_eq!(zoo::pair_groupoid(3).orbits(), vec![vec![0, 1, 2]]);

        let two_groups = zoo::disjoint_union(
            &zoo::cyclic_group_groupoid(2),
            &zoo::cyclic_group_groupoid(3),
        );
        assert!(two_groups.validate().is_valid());
        assert_eq!(two_groups.orbits(), vec![vec![0], vec![1]]);

        // Z/2 swapping two points: action groupoid has one orbit
        let swap = zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![1, 0]]);
        assert!(swap.validate().is_valid());
        assert_eq!(swap.orbits(), vec![vec![0, 1]]);
    }

    #[test]
    fn isotropy_examples() {
        let pair = zoo::pair_groupoid(3);
        for x in 0..3 {
            assert_eq!(pair.isotropy(x).order(), 1);
        }

        let z4 = zoo::cyclic_group_groupoid(4);
        assert_eq!(z4.isotropy(0).order(), 4);

        // Z/2 acting trivially on two points: isotropy of order 2 at each unit
        let trivial = zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![0, 1]]);
        assert!(trivial.validate().is_valid());
        assert_eq!(trivial.isotropy(0).order(), 2);
        assert_eq!(trivial.isotropy(1).order(), 2);
    }

    #[test]
    fn isotropy_isomorphic_along_orbits() {
        // conjugation by a connecting arrow matches multiplication tables
        let g = zoo::action_groupoid(&zoo::cyclic_table(2), &[vec![0, 1], vec![1, 0]]);
        let iso0 = g.isotropy(0);
        let iso1 = g.isotropy(1);
        assert_eq!(iso0.order(), iso1.order());
        // connecting arrow from unit 1 to unit 0
        let conn = (0..g.arrow_count())
            .find(|&a| g.range(a) == 0 && g.source(a) == 1)
            .unwrap();
        let conn_inv = g.inverse(conn);
        // conjugate iso1 into iso0 and compare tables under the bijection
        let conj: Vec<usize> = iso1
            .arrows
            .iter()
            .map(|&a| {
                let t = g.compose(conn, a).unwrap();
                g.compose(t, conn_inv).unwrap()
            })
            .collect();
        for (i, &ci) in conj.iter().enumerate() {
            assert!(iso0.arrows.contains(&ci));
            for (j, &cj) in conj.iter().enumerate() {
                let prod_in_0 = g.compose(ci, cj).unwrap();
                let prod_in_1 = iso1.arrows[iso1.table[i][j]];
                let conj_prod = g
                    .compose(g.compose(conn, prod_in_1).unwrap(), conn_inv)
                    .unwrap();
                assert_eq!(prod_in_0, conj_prod);
            }
        }
    }

    #[test]
    fn left_translation_and_inverse_invariants() {
        for g in [zoo::pair_groupoid(2), zoo::cyclic_group_groupoid(3)] {
            assert!(g.validate().is_valid());
            for a in 0..g.arrow_count() {
                assert_eq!(g.inverse(g.inverse(a)), a);
                let u = g.unit_arrow(g.range(a));
                assert_eq!(g.compose(a, g.inverse(a)), Some(u));
            }
        }
    }
}
