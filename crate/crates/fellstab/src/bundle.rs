//! Fell bundles over finite groupoids: structure tensors per composable
//! pair, conjugate-linear involutions per arrow, validation of the bundle
//! axioms, standard constructors, and the section convolution algebra.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{BilinearMap, StarAlgebra};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::{self, rank_of_rows, CMat, C64, ONE, ZERO};
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("cocycle identity failed at triple ({0}, {1}, {2})")]
    CocycleIdentityFailed(String, String, String),
    #[error("cocycle is not normalized on units at arrow {0}")]
    CocycleNotNormalized(String),
    #[error("cocycle value at ({0}, {1}) is not unit modulus")]
    NotUnitModulus(String, String),
    #[error("action is not functorial at pair ({0}, {1})")]
    NotFunctorial(String, String),
    #[error("action at arrow {0} is not a *-isomorphism: {1}")]
    NotStarIso(String, String),
    #[error("base groupoid is invalid")]
    InvalidBase,
    #[error("shape error: {0}")]
    Shape(String),
}

/// A Fell bundle over a finite groupoid. Fibers are abstract coordinate
/// spaces; the multiplication B(g) x B(h) -> B(gh) is a structure tensor
/// per composable pair and the involution B(g) -> B(g^-1) a
/// conjugate-linear matrix per arrow.
#[derive(Debug, Clone)]
pub struct FellBundle {
    base: FiniteGroupoid,
    fiber_dim: Vec<usize>,
    mult: HashMap<(usize, usize), BilinearMap>,
    invol: Vec<CMat>,
}

impl FellBundle {
    pub fn new(
        base: FiniteGroupoid,
        fiber_dim: Vec<usize>,
        mult: HashMap<(usize, usize), BilinearMap>,
        invol: Vec<CMat>,
    ) -> Result<Self, BundleError> {
        let na = base.arrow_count();
        if fiber_dim.len() != na || invol.len() != na {
            return Err(BundleError::Shape(
                "fiber_dim and invol must cover all arrows".into(),
            ));
        }
        for &(g, h) in base.composable_pairs() {
            let gh = base.compose(g, h).expect("composable");
            let t = mult
                .get(&(g, h))
                .ok_or_else(|| BundleError::Shape(format!("missing tensor for ({g}, {h})")))?;
            if t.left_dim != fiber_dim[g]
                || t.right_dim != fiber_dim[h]
                || t.out_dim != fiber_dim[gh]
            {
                return Err(BundleError::Shape(format!(
                    "tensor shape mismatch at ({g}, {h})"
                )));
            }
        }
        for g in 0..na {
            let gi = base.inverse(g);
            if invol[g].rows != fiber_dim[gi] || invol[g].cols != fiber_dim[g] {
                return Err(BundleError::Shape(format!(
                    "involution shape mismatch at arrow {g}"
                )));
            }
        }
        Ok(FellBundle {
            base,
            fiber_dim,
            mult,
            invol,
        })
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.base
    }

    pub fn fiber_dim(&self, g: usize) -> usize {
        self.fiber_dim[g]
    }

    pub fn fiber_dims(&self) -> &[usize] {
        &self.fiber_dim
    }

    pub fn mult_map(&self, g: usize, h: usize) -> &BilinearMap {
        &self.mult[&(g, h)]
    }

    pub fn invol_matrix(&self, g: usize) -> &CMat {
        &self.invol[g]
    }

    /// Product B(g) x B(h) -> B(gh).
    pub fn fiber_product(&self, g: usize, h: usize, x: &[C64], y: &[C64]) -> Vec<C64> {
        self.mult[&(g, h)].apply(x, y)
    }

    /// Involution B(g) -> B(g^-1), conjugate-linear.
    pub fn fiber_star(&self, g: usize, x: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.invol[g].matvec(&conj)
    }

    /// The unit fiber A(x) = B(unit_arrow(x)) as a *-algebra.
    pub fn unit_algebra(&self, x: usize) -> StarAlgebra {
        let u = self.base.unit_arrow(x);
        let d = self.fiber_dim[u];
        let mut mult = BilinearMap::new(d, d, d);
        let t = &self.mult[&(u, u)];
        for i in 0..d {
            for j in 0..d {
                for &(k, z) in t.basis_product(i, j) {
                    mult.push(i, j, k, z);
                }
            }
        }
        let labels = (0..d)
            .map(|i| format!("{}[{}]", self.base.unit_label(x), i))
            .collect();
        StarAlgebra::new(labels, mult, self.invol[u].clone())
    }

    /// The section convolution *-algebra on the direct sum of all fibers.
    pub fn section_algebra(&self) -> SectionAlgebra {
        let na = self.base.arrow_count();
        let mut offsets = vec![0usize; na + 1];
        for g in 0..na {
            offsets[g + 1] = offsets[g] + self.fiber_dim[g];
        }
        let dim = offsets[na];
        let mut mult = BilinearMap::new(dim, dim, dim);
        for &(g, h) in self.base.composable_pairs() {
            let gh = self.base.compose(g, h).unwrap();
            let t = &self.mult[&(g, h)];
            for i in 0..self.fiber_dim[g] {
                for j in 0..self.fiber_dim[h] {
                    for &(k, z) in t.basis_product(i, j) {
                        mult.push(offsets[g] + i, offsets[h] + j, offsets[gh] + k, z);
                    }
                }
            }
        }
        let mut invol = CMat::zeros(dim, dim);
        for g in 0..na {
            let gi = self.base.inverse(g);
            let m = &self.invol[g];
            for k in 0..self.fiber_dim[gi] {
                for i in 0..self.fiber_dim[g] {
                    let z = m.at(k, i);
                    if z != ZERO {
                        invol.set(offsets[gi] + k, offsets[g] + i, z);
                    }
                }
            }
        }
        let labels = (0..na)
            .flat_map(|g| {
                (0..self.fiber_dim[g]).map(move |i| format!("{}[{}]", self.base.arrow_label(g), i))
            })
            .collect();
        SectionAlgebra {
            algebra: StarAlgebra::new(labels, mult, invol),
            offsets,
        }
    }

    /// Full axiom sweep: associativity across composable triples, the
    /// involution laws, unit-fiber *-algebra axioms, fiberwise positivity
    /// and definiteness, and saturation. Violations carry witnesses.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let base_rep = self.base.validate();
        if !base_rep.is_valid() {
            rep.merge(base_rep);
            return rep;
        }
        let na = self.base.arrow_count();
        let albl = |g: usize| self.base.arrow_label(g).to_string();

        // associativity over composable triples, on basis tuples; the
        // per-triple sweeps are independent and run in parallel
        let triples: Vec<(usize, usize, usize)> = self
            .base
            .composable_pairs()
            .iter()
            .flat_map(|&(g, h)| {
                (0..na)
                    .filter(move |&k| self.base.source(h) == self.base.range(k))
                    .map(move |k| (g, h, k))
            })
            .collect();
        let assoc_failures: Vec<(usize, String)> = triples
            .par_iter()
            .enumerate()
            .filter_map(|(idx, &(g, h, k))| {
                let gh = self.base.compose(g, h).unwrap();
                let hk = self.base.compose(h, k).unwrap();
                let mut worst = 0.0f64;
                for i in 0..self.fiber_dim[g] {
                    let ei = basis(self.fiber_dim[g], i);
                    for j in 0..self.fiber_dim[h] {
                        let ej = basis(self.fiber_dim[h], j);
                        let pij = self.fiber_product(g, h, &ei, &ej);
                        for l in 0..self.fiber_dim[k] {
                            let el = basis(self.fiber_dim[k], l);
                            let lhs = self.fiber_product(gh, k, &pij, &el);
                            let pjl = self.fiber_product(h, k, &ej, &el);
                            let rhs = self.fiber_product(g, hk, &ei, &pjl);
                            worst = worst.max(linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs)));
                        }
                    }
                }
                (worst > tol).then(|| {
                    (
                        idx,
                        format!(
                            "triple ({}, {}, {}) residual {:.3e}",
                            albl(g),
                            albl(h),
                            albl(k),
                            worst
                        ),
                    )
                })
            })
            .collect();
        let mut assoc_failures = assoc_failures;
        assoc_failures.sort_by_key(|&(idx, _)| idx);
        for (_, witness) in assoc_failures {
            rep.push("associativity", witness);
        }

        // involution: order two and anti-homomorphism
        for g in 0..na {
            let gi = self.base.inverse(g);
            let round = self.invol[gi].mul(&self.invol[g].conj());
            if !round.approx_eq(&CMat::identity(self.fiber_dim[g]), tol) {
                rep.push(
                    "involution_order",
                    format!("star^2 != id on fiber {}", albl(g)),
                );
            }
        }
        for &(g, h) in self.base.composable_pairs() {
            let gh = self.base.compose(g, h).unwrap();
            let (hi, gi) = (self.base.inverse(h), self.base.inverse(g));
            let mut worst = 0.0f64;
            for i in 0..self.fiber_dim[g] {
                let ei = basis(self.fiber_dim[g], i);
                for j in 0..self.fiber_dim[h] {
                    let ej = basis(self.fiber_dim[h], j);
                    let lhs = self.fiber_star(gh, &self.fiber_product(g, h, &ei, &ej));
                    let rhs = self.fiber_product(
                        hi,
                        gi,
                        &self.fiber_star(h, &ej),
                        &self.fiber_star(g, &ei),
                    );
                    worst = worst.max(linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs)));
                }
            }
            if worst > tol {
                rep.push(
                    "involution_antihom",
                    format!("pair ({}, {}) residual {:.3e}", albl(g), albl(h), worst),
                );
            }
        }

        // unit fibers are *-algebras
        for x in 0..self.base.unit_count() {
            let alg = self.unit_algebra(x);
            let sub = alg.validate(tol);
            for v in sub.violations {
                rep.push(
                    "unit_fiber",
                    format!("A({}): {} — {}", self.base.unit_label(x), v.code, v.witness),
                );
            }
            if alg.unit(tol).is_none() {
                rep.push(
                    "unit_fiber",
                    format!("A({}) has no multiplicative unit", self.base.unit_label(x)),
                );
            }
        }

        // positivity: [b_i* b_j] is a positive matrix over A(s(g)), and the
        // scalarized Gram is definite (b* b = 0 forces b = 0); per-arrow,
        // in parallel
        let positivity_failures: Vec<(usize, &str, String)> = (0..na)
            .into_par_iter()
            .flat_map_iter(|g| {
                let mut out = Vec::new();
                let s = self.base.source(g);
                let alg_s = self.unit_algebra(s);
                let dg = self.fiber_dim[g];
                if dg == 0 {
                    out.push((
                        g,
                        "fiber_dimension",
                        format!("fiber at {} is zero", albl(g)),
                    ));
                    return out.into_iter();
                }
                let gi = self.base.inverse(g);
                let inner = |i: usize, j: usize| -> Vec<C64> {
                    // b_i* b_j lands in B(g^-1 g) = A(s(g))
                    let bi_star = self.fiber_star(g, &basis(dg, i));
                    self.fiber_product(gi, g, &bi_star, &basis(dg, j))
                };
                if !alg_s.element_matrix_is_positive(dg, &|i, j| inner(i, j), tol) {
                    out.push((
                        g,
                        "fiber_positivity",
                        format!("[b_i* b_j] not positive at {}", albl(g)),
                    ));
                }
                let gram = CMat::from_fn(dg, dg, |i, j| alg_s.trace(&inner(i, j)));
                let (vals, _) = linalg::hermitian_eigen(&gram);
                let hi = vals.last().copied().unwrap_or(0.0).max(1.0);
                if vals.first().copied().unwrap_or(0.0) <= tol * hi {
                    out.push((
                        g,
                        "fiber_definiteness",
                        format!("fiber inner product degenerate at {}", albl(g)),
                    ));
                }
                out.into_iter()
            })
            .collect();
        let mut positivity_failures = positivity_failures;
        positivity_failures.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for (_, code, witness) in positivity_failures {
            rep.push(code, witness);
        }

        // saturation: span{b c*} = A(r(g)) and span{b* c} = A(s(g))
        for g in 0..na {
            let (r, s) = (self.base.range(g), self.base.source(g));
            let gi = self.base.inverse(g);
            let dg = self.fiber_dim[g];
            let mut left = Vec::new();
            let mut right = Vec::new();
            for i in 0..dg {
                for j in 0..dg {
                    let bj_star = self.fiber_star(g, &basis(dg, j));
                    left.push(self.fiber_product(g, gi, &basis(dg, i), &bj_star));
                    let bi_star = self.fiber_star(g, &basis(dg, i));
                    right.push(self.fiber_product(gi, g, &bi_star, &basis(dg, j)));
                }
            }
            let ur = self.base.unit_arrow(r);
            let us = self.base.unit_arrow(s);
            if rank_of_rows(&left, tol) != self.fiber_dim[ur] {
                rep.push(
                    "saturation",
                    format!("span(B(g) B(g)*) < A(r(g)) at {}", albl(g)),
                );
            }
            if rank_of_rows(&right, tol) != self.fiber_dim[us] {
                rep.push(
                    "saturation",
                    format!("span(B(g)* B(g)) < A(s(g)) at {}", albl(g)),
                );
            }
        }

        rep
    }

    /// Line bundle from a unit-modulus 2-cocycle on the groupoid:
    /// u_g u_h = sigma(g, h) u_{gh} and u_g* = conj(sigma(g, g^-1)) u_{g^-1}.
    pub fn from_cocycle(
        base: &FiniteGroupoid,
        sigma: impl Fn(usize, usize) -> C64,
    ) -> Result<Self, BundleError> {
        let na = base.arrow_count();
        let albl = |g: usize| base.arrow_label(g).to_string();
        // unit modulus and normalization on units
        for &(g, h) in base.composable_pairs() {
            let z = sigma(g, h);
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(BundleError::NotUnitModulus(albl(g), albl(h)));
            }
        }
        for g in 0..na {
            let ur = base.unit_arrow(base.range(g));
            let us = base.unit_arrow(base.source(g));
            if (sigma(ur, g) - ONE).norm() > 1e-12 || (sigma(g, us) - ONE).norm() > 1e-12 {
                return Err(BundleError::CocycleNotNormalized(albl(g)));
            }
        }
        // cocycle identity over composable triples
        for &(g, h) in base.composable_pairs() {
            let gh = base.compose(g, h).unwrap();
            for k in 0..na {
                if base.source(h) != base.range(k) {
                    continue;
                }
                let hk = base.compose(h, k).unwrap();
                let lhs = sigma(g, h) * sigma(gh, k);
                let rhs = sigma(h, k) * sigma(g, hk);
                if (lhs - rhs).norm() > 1e-12 {
                    return Err(BundleError::CocycleIdentityFailed(
                        albl(g),
                        albl(h),
                        albl(k),
                    ));
                }
            }
        }
        let mut mult = HashMap::new();
        for &(g, h) in base.composable_pairs() {
            let mut t = BilinearMap::new(1, 1, 1);
            t.push(0, 0, 0, sigma(g, h));
            mult.insert((g, h), t);
        }
        let invol = (0..na)
            .map(|g| {
                let gi = base.inverse(g);
                let mut m = CMat::zeros(1, 1);
                m.set(0, 0, sigma(g, gi).conj());
                m
            })
            .collect();
        FellBundle::new(base.clone(), vec![1; na], mult, invol)
    }

    /// Semidirect-product bundle of a groupoid dynamical system: fibers
    /// B(g) = A(r(g)), product (a, g)(b, h) = (a act_g(b), gh), involution
    /// (a, g)* = (act_g^-1(a*), g^-1). `act[g]` must be a *-isomorphism
    /// A(s(g)) -> A(r(g)) and functorial in g.
    pub fn from_dynamical_system(
        base: &FiniteGroupoid,
        unit_algebras: &[StarAlgebra],
        act: &[CMat],
    ) -> Result<Self, BundleError> {
        let na = base.arrow_count();
        let nu = base.unit_count();
        if unit_algebras.len() != nu || act.len() != na {
            return Err(BundleError::Shape(
                "one algebra per unit, one action matrix per arrow".into(),
            ));
        }
        let dim_at = |x: usize| unit_algebras[x].dim();
        let albl = |g: usize| base.arrow_label(g).to_string();
        for g in 0..na {
            if act[g].rows != dim_at(base.range(g)) || act[g].cols != dim_at(base.source(g)) {
                return Err(BundleError::Shape(format!(
                    "action shape mismatch at {}",
                    albl(g)
                )));
            }
        }
        let tol = 1e-9;
        // functoriality: act[unit] = id, act[gh] = act[g] act[h]
        for x in 0..nu {
            let u = base.unit_arrow(x);
            if !act[u].approx_eq(&CMat::identity(dim_at(x)), tol) {
                return Err(BundleError::NotFunctorial(albl(u), albl(u)));
            }
        }
        for &(g, h) in base.composable_pairs() {
            let gh = base.compose(g, h).unwrap();
            if !act[gh].approx_eq(&act[g].mul(&act[h]), tol) {
                return Err(BundleError::NotFunctorial(albl(g), albl(h)));
            }
        }
        // *-isomorphism fiberwise
        for g in 0..na {
            let (r, s) = (base.range(g), base.source(g));
            let (ar, as_) = (&unit_algebras[r], &unit_algebras[s]);
            let d = dim_at(s);
            for i in 0..d {
                let ei = basis(d, i);
                for j in 0..d {
                    let ej = basis(d, j);
                    let lhs = act[g].matvec(&as_.product(&ei, &ej));
                    let rhs = ar.product(&act[g].matvec(&ei), &act[g].matvec(&ej));
                    if linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs)) > tol {
                        return Err(BundleError::NotStarIso(
                            albl(g),
                            "not multiplicative".into(),
                        ));
                    }
                }
                let lhs = act[g].matvec(&as_.star(&ei));
                let rhs = ar.star(&act[g].matvec(&ei));
                if linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs)) > tol {
                    return Err(BundleError::NotStarIso(
                        albl(g),
                        "not star-preserving".into(),
                    ));
                }
            }
            let mut rows = Vec::new();
            for c in 0..act[g].cols {
                rows.push(act[g].col_vec(c));
            }
            if rank_of_rows(&rows, tol) != dim_at(r) {
                return Err(BundleError::NotStarIso(albl(g), "not bijective".into()));
            }
        }
        // assemble tensors: B(g) has the basis of A(r(g))
        let fiber_dim: Vec<usize> = (0..na).map(|g| dim_at(base.range(g))).collect();
        let mut mult = HashMap::new();
        for &(g, h) in base.composable_pairs() {
            let r = base.range(g);
            let ar = &unit_algebras[r];
            let (dg, dh) = (fiber_dim[g], fiber_dim[h]);
            let mut t = BilinearMap::new(dg, dh, fiber_dim[base.compose(g, h).unwrap()]);
            for j in 0..dh {
                let acted = act[g].matvec(&basis(dh, j));
                for i in 0..dg {
                    let prod = ar.product(&basis(dg, i), &acted);
                    for (k, &z) in prod.iter().enumerate() {
                        if z != ZERO {
                            t.push(i, j, k, z);
                        }
                    }
                }
            }
            mult.insert((g, h), t);
        }
        let invol = (0..na)
            .map(|g| {
                let r = base.range(g);
                let gi = base.inverse(g);
                let ar = &unit_algebras[r];
                let dg = fiber_dim[g];
                // x -> act_{g^-1}(x*) as a conjugate-linear matrix
                CMat::from_fn(fiber_dim[gi], dg, |k, i| {
                    let starred = ar.star(&basis(dg, i));
                    act[gi].matvec(&starred)[k]
                })
            })
            .collect();
        FellBundle::new(base.clone(), fiber_dim, mult, invol)
    }
}

/// A section algebra together with the per-arrow coordinate offsets.
#[derive(Debug, Clone)]
pub struct SectionAlgebra {
    pub algebra: StarAlgebra,
    /// offsets[g]..offsets[g+1] are the coordinates of the fiber over g.
    pub offsets: Vec<usize>,
}

impl SectionAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Coordinate of basis element i of the fiber over arrow g.
    pub fn coord(&self, g: usize, i: usize) -> usize {
        self.offsets[g] + i
    }
}

fn basis(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use crate::DEFAULT_TOLERANCE as TOL;

    #[test]
    fn trivial_line_bundle_over_pair_groupoid_validates() {
        let b = zoo::trivial_line_bundle(&zoo::pair_groupoid(2));
        assert!(b.validate(TOL).is_valid());
        let s = b.section_algebra();
        assert_eq!(s.dim(), 4);
        assert!(s.algebra.validate(TOL).is_valid());
        assert_eq!(s.algebra.block_decompose(TOL).unwrap().sizes(), vec![2]);
    }

    #[test]
    fn pair_groupoid_section_algebra_is_matrix_units() {
        // oracle: delta_(i,j) * delta_(j,k) = delta_(i,k), all else zero
        let g = zoo::pair_groupoid(3);
        let b = zoo::trivial_line_bundle(&g);
        let s = b.section_algebra();
        assert_eq!(s.algebra.block_decompose(TOL).unwrap().sizes(), vec![3]);
        for a1 in 0..g.arrow_count() {
            for a2 in 0..g.arrow_count() {
                let p = s.algebra.product(
                    &s.algebra.basis_vector(s.coord(a1, 0)),
                    &s.algebra.basis_vector(s.coord(a2, 0)),
                );
                match g.compose(a1, a2) {
                    Some(a3) => {
                        assert!((p[s.coord(a3, 0)] - ONE).norm() < TOL);
                        assert!(p
                            .iter()
                            .enumerate()
                            .all(|(k, z)| k == s.coord(a3, 0) || z.norm() < TOL));
                    }
                    None => assert!(linalg::vec_max_abs(&p) < TOL),
                }
            }
        }
    }

    #[test]
    fn broken_phase_table_reported_by_validate() {
        // start from the valid Z/3 group line bundle, then corrupt one
        // product phase; associativity must fail with a witnessing triple
        let g = zoo::cyclic_group_groupoid(3);
        let good = FellBundle::from_cocycle(&g, |_, _| ONE).unwrap();
        let mut mult = HashMap::new();
        for &(a, b) in g.composable_pairs() {
            let mut t = BilinearMap::new(1, 1, 1);
            let z = if (a, b) == (1, 1) {
                C64::new(0.0, 1.0)
            } else {
                ONE
            };
            t.push(0, 0, 0, z);
            mult.insert((a, b), t);
        }
        let bad = FellBundle::new(
            g.clone(),
            good.fiber_dims().to_vec(),
            mult,
            (0..g.arrow_count())
                .map(|a| good.invol_matrix(a).clone())
                .collect(),
        )
        .unwrap();
        let rep = bad.validate(TOL);
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| v.code == "associativity"));
    }

    #[test]
    fn identity_involution_breaks_antihomomorphism() {
        // replace the involution of the twisted Klein bundle by the identity
        let good = zoo::klein_twisted_bundle();
        let g = good.base().clone();
        let na = g.arrow_count();
        let mut mult = HashMap::new();
        for &(a, b) in g.composable_pairs() {
            let t = good.mult_map(a, b);
            let mut t2 = BilinearMap::new(1, 1, 1);
            for &(k, z) in t.basis_product(0, 0) {
                t2.push(0, 0, k, z);
            }
            mult.insert((a, b), t2);
        }
        let bad = FellBundle::new(
            g,
            good.fiber_dims().to_vec(),
            mult,
            (0..na).map(|_| CMat::identity(1)).collect(),
        )
        .unwrap();
        let rep = bad.validate(TOL);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.code == "involution_antihom" || v.code == "involution_order"));
    }

    #[test]
    fn non_cocycle_rejected_by_constructor() {
        let g = zoo::cyclic_group_groupoid(3);
        let err = FellBundle::from_cocycle(&g, |a, b| {
            if (a, b) == (1, 1) {
                C64::new(0.0, 1.0)
            } else {
                ONE
            }
        });
        assert!(matches!(
            err,
            Err(BundleError::CocycleIdentityFailed(_, _, _))
        ));
    }

    #[test]
    fn group_line_bundles_decompose_by_characters() {
        // Z/2 untwisted: two characters
        let z2 = zoo::trivial_line_bundle(&zoo::cyclic_group_groupoid(2));
        assert!(z2.validate(TOL).is_valid());
        assert_eq!(
            z2.section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            vec![1, 1]
        );

        // Z/3 untwisted: oracle via the character idempotents
        // p_j = (1/3) sum_k conj(w^(jk)) u_k, w = exp(2 pi i/3)
        let z3 = zoo::trivial_line_bundle(&zoo::cyclic_group_groupoid(3));
        let s = z3.section_algebra();
        let w = C64::new(-0.5, 3f64.sqrt() / 2.0);
        for j in 0..3 {
            let p: Vec<C64> = (0..3)
                .map(|k| w.powu((j * k) as u32).conj() / C64::new(3.0, 0.0))
                .collect();
            let p2 = s.algebra.product(&p, &p);
            assert!(linalg::vec_max_abs(&linalg::vec_sub(&p2, &p)) < 1e-12);
        }
        assert_eq!(
            s.algebra.block_decompose(TOL).unwrap().sizes(),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn twisted_klein_bundle_is_simple() {
        let b = zoo::klein_twisted_bundle();
        assert!(b.validate(TOL).is_valid());
        assert_eq!(
            b.section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            vec![2]
        );
        let untwisted = zoo::klein_trivial_bundle();
        assert_eq!(
            untwisted
                .section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn dynamical_system_bundles() {
        use crate::algebra::build;
        // trivial action of Z/2 on C: commutative section algebra of dim 2
        let g = zoo::cyclic_group_groupoid(2);
        let algs = vec![build::block_diagonal(&[1])];
        let act = vec![CMat::identity(1), CMat::identity(1)];
        let b = FellBundle::from_dynamical_system(&g, &algs, &act).unwrap();
        assert!(b.validate(TOL).is_valid());
        assert_eq!(
            b.section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            vec![1, 1]
        );

        // pair groupoid on 2 units, A(x) = C, identity action: one 2x2 block
        let pg = zoo::pair_groupoid(2);
        let algs = vec![build::block_diagonal(&[1]), build::block_diagonal(&[1])];
        let act = vec![CMat::identity(1); 4];
        let b = FellBundle::from_dynamical_system(&pg, &algs, &act).unwrap();
        assert!(b.validate(TOL).is_valid());
        assert_eq!(
            b.section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            vec![2]
        );

        // flip action of Z/2 on C + C: crossed product is M_2
        let b = zoo_flip_bundle();
        assert!(b.validate(TOL).is_valid());
        let s = b.section_algebra();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.algebra.block_decompose(TOL).unwrap().sizes(), vec![2]);
    }

    fn zoo_flip_bundle() -> FellBundle {
        use crate::algebra::build;
        let g = zoo::cyclic_group_groupoid(2);
        let algs = vec![build::block_diagonal(&[1, 1])];
        let flip = CMat::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]);
        let act = vec![CMat::identity(2), flip];
        FellBundle::from_dynamical_system(&g, &algs, &act).unwrap()
    }

    #[test]
    fn non_functorial_action_rejected() {
        use crate::algebra::build;
        let g = zoo::cyclic_group_groupoid(2);
        let algs = vec![build::block_diagonal(&[1, 1])];
        // g . g = e but act_g^2 != id for this non-involutive choice
        let m = CMat::from_rows(&[vec![ZERO, ONE], vec![-ONE, ZERO]]);
        let act = vec![CMat::identity(2), m];
        assert!(matches!(
            FellBundle::from_dynamical_system(&g, &algs, &act),
            Err(BundleError::NotFunctorial(_, _))
        ));
    }

    #[test]
    fn non_star_isomorphism_rejected() {
        use crate::algebra::build;
        let g = zoo::cyclic_group_groupoid(2);
        let algs = vec![build::block_diagonal(&[1, 1])];
        // an involution of C + C that is not multiplicative: x -> Mx with
        // M^2 = id but M not an algebra map (mixes the idempotents)
        let m = CMat::from_rows(&[
            vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
            vec![C64::new(1.5, 0.0), C64::new(-0.5, 0.0)],
        ]);
        assert!(m.mul(&m).approx_eq(&CMat::identity(2), 1e-12));
        let act = vec![CMat::identity(2), m];
        assert!(matches!(
            FellBundle::from_dynamical_system(&g, &algs, &act),
            Err(BundleError::NotStarIso(_, _))
        ));
    }

    #[test]
    fn restriction_to_units_matches_unit_algebras() {
        let b = zoo_flip_bundle();
        let s = b.section_algebra();
        let g = b.base();
        for x in 0..g.unit_count() {
            let u = g.unit_arrow(x);
            let a = b.unit_algebra(x);
            for i in 0..b.fiber_dim(u) {
                for j in 0..b.fiber_dim(u) {
                    let big = s.algebra.product(
                        &s.algebra.basis_vector(s.coord(u, i)),
                        &s.algebra.basis_vector(s.coord(u, j)),
                    );
                    let small = a.product(&a.basis_vector(i), &a.basis_vector(j));
                    // the product must be supported on the unit fiber with
                    // identical coordinates
                    for (k, z) in big.iter().enumerate() {
                        let expected = if k >= s.coord(u, 0) && k < s.coord(u, 0) + b.fiber_dim(u) {
                            small[k - s.coord(u, 0)]
                        } else {
                            ZERO
                        };
                        assert!((z - expected).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cohomologous_cocycles_same_blocks() {
        // sigma'(g, h) = sigma(g, h) b(g) b(h) / b(gh) for unit-modulus b
        let g = zoo::cyclic_group_groupoid(3);
        let b_phase = [ONE, C64::new(0.0, 1.0), C64::new(-0.5, 0.5 * 3f64.sqrt())];
        let coboundary = move |x: usize, y: usize| {
            let xy = (x + y) % 3;
            b_phase[x] * b_phase[y] / b_phase[xy]
        };
        let twisted = FellBundle::from_cocycle(&g, coboundary).unwrap();
        assert!(twisted.validate(TOL).is_valid());
        let plain = zoo::trivial_line_bundle(&g);
        assert_eq!(
            twisted
                .section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes(),
            plain
                .section_algebra()
                .algebra
                .block_decompose(TOL)
                .unwrap()
                .sizes()
        );
    }

    #[test]
    fn saturation_is_exact_for_constructors() {
        for b in [
            zoo::trivial_line_bundle(&zoo::pair_groupoid(3)),
            zoo::klein_twisted_bundle(),
            zoo_flip_bundle(),
        ] {
            let rep = b.validate(TOL);
            assert!(
                !rep.violations.iter().any(|v| v.code == "saturation"),
                "saturation must hold exactly"
            );
        }
    }
}
