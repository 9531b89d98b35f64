//! Finite-dimensional *-algebras given by structure constants, and the
//! Morita invariants used to compare them: block decomposition, center
//! dimension, and the two-sided ideal lattice.

use thiserror::Error;

use crate::linalg::{
    self, hermitian_eigen, is_psd, kernel_basis, rank_of_rows, CMat, C64, ONE, ZERO,
};
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("trace form is degenerate beyond tolerance (not semisimple)")]
    NotSemisimple,
    #[error("block rank {0} is not a perfect square")]
    NotSquareRank(usize),
    #[error("too many blocks ({0}) to enumerate the ideal lattice")]
    TooManyBlocks(usize),
}

/// A bilinear map between coordinate spaces, stored sparsely by basis pair.
#[derive(Debug, Clone)]
pub struct BilinearMap {
    pub left_dim: usize,
    pub right_dim: usize,
    pub out_dim: usize,
    entries: Vec<Vec<(usize, C64)>>,
}

impl BilinearMap {
    pub fn new(left_dim: usize, right_dim: usize, out_dim: usize) -> Self {
        BilinearMap {
            left_dim,
            right_dim,
            out_dim,
            entries: vec![Vec::new(); left_dim * right_dim],
        }
    }

    pub fn push(&mut self, i: usize, j: usize, k: usize, z: C64) {
        if z != ZERO {
            self.entries[i * self.right_dim + j].push((k, z));
        }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.entries[i * self.right_dim + j]
    }

    /// All stored entries as (i, j, k, coefficient), ordered by (i, j, k).
    pub fn entries(&self) -> Vec<(usize, usize, usize, C64)> {
        let mut out = Vec::new();
        for i in 0..self.left_dim {
            for j in 0..self.right_dim {
                for &(k, z) in self.basis_product(i, j) {
                    out.push((i, j, k, z));
                }
            }
        }
        out.sort_by_key(|&(i, j, k, _)| (i, j, k));
        out
    }

    pub fn apply(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.out_dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let f = xi * yj;
                for &(k, z) in self.basis_product(i, j) {
                    out[k] += f * z;
                }
            }
        }
        out
    }
}

/// A finite-dimensional *-algebra in a fixed basis: sparse structure
/// constants for the product and a conjugate-linear involution matrix
/// (star(x) = invol . conj(x)).
#[derive(Debug, Clone)]
pub struct StarAlgebra {
    labels: Vec<String>,
    mult: BilinearMap,
    invol: CMat,
}

impl StarAlgebra {
    pub fn new(labels: Vec<String>, mult: BilinearMap, invol: CMat) -> Self {
        let d = labels.len();
        assert_eq!(mult.left_dim, d);
        assert_eq!(mult.right_dim, d);
        assert_eq!(mult.out_dim, d);
        assert_eq!((invol.rows, invol.cols), (d, d));
        StarAlgebra {
            labels,
            mult,
            invol,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mult(&self) -> &BilinearMap {
        &self.mult
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        self.mult.apply(x, y)
    }

    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.invol.matvec(&conj)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim()];
        v[i] = ONE;
        v
    }

    /// Matrix of left multiplication by x in the given basis.
    pub fn left_regular(&self, x: &[C64]) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..d {
                for &(k, z) in self.mult.basis_product(i, j) {
                    m.add_at(k, j, xi * z);
                }
            }
        }
        m
    }

    /// Canonical trace tau(x) = tr(L_x).
    pub fn trace(&self, x: &[C64]) -> C64 {
        let d = self.dim();
        let mut t = ZERO;
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..d {
                for &(k, z) in self.mult.basis_product(i, j) {
                    if k == j {
                        t += xi * z;
                    }
                }
            }
        }
        t
    }

    /// Trace form <a, b> = tau(a* b).
    pub fn trace_form(&self, a: &[C64], b: &[C64]) -> C64 {
        self.trace(&self.product(&self.star(a), b))
    }

    /// Gram matrix of the trace form over the basis.
    pub fn gram(&self) -> CMat {
        let d = self.dim();
        let stars: Vec<Vec<C64>> = (0..d).map(|i| self.star(&self.basis_vector(i))).collect();
        CMat::from_fn(d, d, |i, j| {
            self.trace(&self.product(&stars[i], &self.basis_vector(j)))
        })
    }

    /// Multiplicative unit, if the linear system u . e_i = e_i = e_i . u has
    /// a solution within tolerance.
    pub fn unit(&self, tol: f64) -> Option<Vec<C64>> {
        let d = self.dim();
        // solve sum_i u_i (e_i e_j) = e_j for all j
        let mut a = CMat::zeros(d * d, d);
        let mut b = vec![ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                for &(k, z) in self.mult.basis_product(i, j) {
                    a.add_at(j * d + k, i, z);
                }
            }
            b[j * d + j] = ONE;
        }
        let (u, res) = linalg::solve_lstsq(&a, &b, tol);
        if res > tol * 10.0 {
            return None;
        }
        // check it is also a right unit
        for j in 0..d {
            let ej = self.basis_vector(j);
            let r = linalg::vec_max_abs(&linalg::vec_sub(&self.product(&ej, &u), &ej));
            if r > tol * 10.0 {
                return None;
            }
        }
        Some(u)
    }

    /// Axiom sweep: associativity, conjugate-linear anti-automorphism of
    /// order two, and positive semidefiniteness of the trace form.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let d = self.dim();
        // associativity on basis triples
        let mut worst = 0.0f64;
        let mut worst_at = (0, 0, 0);
        for i in 0..d {
            for j in 0..d {
                let pij: Vec<C64> = {
                    let mut v = vec![ZERO; d];
                    for &(k, z) in self.mult.basis_product(i, j) {
                        v[k] += z;
                    }
                    v
                };
                for k in 0..d {
                    let ek = self.basis_vector(k);
                    let lhs = self.product(&pij, &ek);
                    let pjk: Vec<C64> = {
                        let mut v = vec![ZERO; d];
                        for &(m, z) in self.mult.basis_product(j, k) {
                            v[m] += z;
                        }
                        v
                    };
                    let rhs = self.product(&self.basis_vector(i), &pjk);
                    let r = linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs));
                    if r > worst {
                        worst = r;
                        worst_at = (i, j, k);
                    }
                }
            }
        }
        if worst > tol {
            rep.push(
                "associativity",
                format!(
                    "basis triple ({}, {}, {}) residual {:.3e}",
                    self.labels[worst_at.0],
                    self.labels[worst_at.1],
                    self.labels[worst_at.2],
                    worst
                ),
            );
        }
        // involution of order two
        let inv2 = self.invol.mul(&self.invol.conj());
        if !inv2.approx_eq(&CMat::identity(d), tol) {
            rep.push(
                "involution_order",
                format!(
                    "star^2 differs from identity by {:.3e}",
                    inv2.sub(&CMat::identity(d)).max_abs()
                ),
            );
        }
        // anti-automorphism on basis pairs
        let mut worst = 0.0f64;
        let mut worst_at = (0, 0);
        for i in 0..d {
            let si = self.star(&self.basis_vector(i));
            for j in 0..d {
                let sj = self.star(&self.basis_vector(j));
                let lhs = self.star(&self.product(&self.basis_vector(i), &self.basis_vector(j)));
                let rhs = self.product(&sj, &si);
                let r = linalg::vec_max_abs(&linalg::vec_sub(&lhs, &rhs));
                if r > worst {
                    worst = r;
                    worst_at = (i, j);
                }
            }
        }
        if worst > tol {
            rep.push(
                "involution_antihom",
                format!(
                    "basis pair ({}, {}) residual {:.3e}",
                    self.labels[worst_at.0], self.labels[worst_at.1], worst
                ),
            );
        }
        // positivity of the trace form
        let g = self.gram();
        if !g.approx_eq(&g.adjoint(), tol.max(1e-12) * (1.0 + g.max_abs())) {
            rep.push(
                "trace_form_hermitian",
                "gram matrix is not Hermitian".into(),
            );
        }
        if !is_psd(&g, tol) {
            rep.push(
                "trace_form_positive",
                "trace form has a negative eigenvalue".into(),
            );
        }
        rep
    }

    /// Semisimple iff the trace form is positive definite: smallest
    /// eigenvalue above tol * largest.
    pub fn is_semisimple(&self, tol: f64) -> bool {
        let (vals, _) = hermitian_eigen(&self.gram());
        match (vals.first(), vals.last()) {
            (Some(&lo), Some(&hi)) => lo > tol * hi.max(1.0),
            _ => true,
        }
    }

    /// Basis of the center {z : z a = a z for all a}.
    pub fn center_basis(&self, tol: f64) -> Vec<Vec<C64>> {
        let d = self.dim();
        // rows indexed by (basis i, output k); columns by the unknown z_j
        let mut sys = CMat::zeros(d * d, d);
        for j in 0..d {
            for i in 0..d {
                for &(k, z) in self.mult.basis_product(j, i) {
                    sys.add_at(i * d + k, j, z);
                }
                for &(k, z) in self.mult.basis_product(i, j) {
                    sys.add_at(i * d + k, j, -z);
                }
            }
        }
        kernel_basis(&sys, tol)
    }

    pub fn center_dimension(&self, tol: f64) -> usize {
        self.center_basis(tol).len()
    }

    /// Decompose a semisimple algebra into full matrix blocks by splitting
    /// the center. Blocks are sorted by size, then by the first basis index
    /// where the corresponding central projection has a nonzero coordinate.
    pub fn block_decompose(&self, tol: f64) -> Result<BlockDecomposition, AlgebraError> {
        if !self.is_semisimple(tol) {
            return Err(AlgebraError::NotSemisimple);
        }
        let d = self.dim();
        let center = self.center_basis(tol);
        let m = center.len();
        // orthonormal basis of the center under the trace form
        let gc = CMat::from_fn(m, m, |i, j| self.trace_form(&center[i], &center[j]));
        let (vals, vecs) = hermitian_eigen(&gc);
        let mut onb: Vec<Vec<C64>> = Vec::new();
        for k in 0..m {
            // center Gram is positive definite on a semisimple algebra
            let s = vals[k].max(1e-300).sqrt();
            let mut v = vec![ZERO; d];
            for i in 0..m {
                let c = vecs.at(i, k) / C64::new(s, 0.0);
                for (x, &ci) in v.iter_mut().zip(&center[i]) {
                    *x += c * ci;
                }
            }
            onb.push(v);
        }
        // split the center by the Hermitian multiplication operators of the
        // self-adjoint parts of each center basis vector
        let mut subspaces: Vec<CMat> = vec![CMat::identity(m)];
        let imag = C64::new(0.0, 1.0);
        for zc in &center {
            let zs = self.star(zc);
            let h: Vec<C64> = zc.iter().zip(&zs).map(|(a, b)| a + b).collect();
            let k: Vec<C64> = zc.iter().zip(&zs).map(|(a, b)| imag * (a - b)).collect();
            for gen in [h, k] {
                // matrix of multiplication by gen on the center, o.n. basis
                let mut mm = CMat::zeros(m, m);
                for j in 0..m {
                    let gj = self.product(&gen, &onb[j]);
                    for i in 0..m {
                        mm.set(i, j, self.trace_form(&onb[i], &gj));
                    }
                }
                subspaces = split_subspaces(subspaces, &mm, tol);
                if subspaces.len() == m {
                    break;
                }
            }
            if subspaces.len() == m {
                break;
            }
        }
        if subspaces.len() != m {
            // commutative pathologies should not reach here on semisimple input
            return Err(AlgebraError::NotSemisimple);
        }
        // each 1-dim subspace spans a minimal central idempotent
        let mut blocks = Vec::new();
        for s in &subspaces {
            let mut v = vec![ZERO; d];
            for i in 0..m {
                let c = s.at(i, 0);
                for (x, &oi) in v.iter_mut().zip(&onb[i]) {
                    *x += c * oi;
                }
            }
            // normalize to an idempotent: v^2 = lambda v
            let vv = self.product(&v, &v);
            let nv = self.trace_form(&v, &v);
            let lambda = self.trace_form(&v, &vv) / nv;
            let e: Vec<C64> = v.iter().map(|z| z / lambda).collect();
            // block dimension: dim(A e) = n^2
            let rows: Vec<Vec<C64>> = (0..d)
                .map(|i| self.product(&self.basis_vector(i), &e))
                .collect();
            let rank = rank_of_rows(&rows, tol);
            let n = (rank as f64).sqrt().round() as usize;
            if n * n != rank {
                return Err(AlgebraError::NotSquareRank(rank));
            }
            let first = e.iter().position(|z| z.norm() > tol * 10.0).unwrap_or(d);
            blocks.push(Block {
                size: n,
                projection: e,
                first_index: first,
            });
        }
        blocks.sort_by(|a, b| (a.size, a.first_index).cmp(&(b.size, b.first_index)));
        let total: usize = blocks.iter().map(|b| b.size * b.size).sum();
        debug_assert_eq!(total, d, "block sizes must account for the dimension");
        Ok(BlockDecomposition { blocks })
    }

    /// All two-sided *-closed ideals of a semisimple algebra: one per subset
    /// of blocks, ordered by (dimension, block mask).
    pub fn ideal_lattice(&self, tol: f64) -> Result<IdealLattice, AlgebraError> {
        let dec = self.block_decompose(tol)?;
        let m = dec.blocks.len();
        if m > 20 {
            return Err(AlgebraError::TooManyBlocks(m));
        }
        let mut ideals = Vec::new();
        for mask in 0u32..(1u32 << m) {
            let dim: usize = (0..m)
                .filter(|&j| mask & (1 << j) != 0)
                .map(|j| dec.blocks[j].size * dec.blocks[j].size)
                .sum();
            ideals.push(IdealDescriptor { mask, dim });
        }
        ideals.sort_by_key(|i| (i.dim, i.mask));
        Ok(IdealLattice {
            block_count: m,
            decomposition: dec,
            ideals,
        })
    }

    /// Operator norm of an element, via the left regular representation in
    /// an orthonormal basis for the trace form. None if the algebra is not
    /// semisimple.
    pub fn element_norm(&self, x: &[C64], tol: f64) -> Option<f64> {
        if !self.is_semisimple(tol) {
            return None;
        }
        let g = self.gram();
        let (vals, vecs) = hermitian_eigen(&g);
        let d = self.dim();
        let half = CMat::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(vals[r].max(1e-300).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let half_inv = CMat::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(1.0 / vals[r].max(1e-300).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let p = self.product(&self.star(x), x);
        let lp = self.left_regular(&p);
        // matrix in the o.n. basis: L^1/2 U^H L_p U L^-1/2 (Hermitian PSD)
        let m = half.mul(&vecs.adjoint()).mul(&lp).mul(&vecs).mul(&half_inv);
        let (evals, _) = hermitian_eigen(&m);
        evals.last().map(|l| l.max(0.0).sqrt())
    }

    /// Positivity of a matrix [t_ij] of algebra elements with t_ij* = t_ji,
    /// checked through the left regular representation in an orthonormal
    /// basis. Entries are coordinate vectors; `n` is the matrix size.
    pub fn element_matrix_is_positive(
        &self,
        n: usize,
        t: &dyn Fn(usize, usize) -> Vec<C64>,
        tol: f64,
    ) -> bool {
        let d = self.dim();
        let g = self.gram();
        let (vals, vecs) = hermitian_eigen(&g);
        let half = CMat::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(vals[r].max(1e-300).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let half_inv = CMat::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(1.0 / vals[r].max(1e-300).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let to_onb = |x: &[C64]| -> CMat {
            let lx = self.left_regular(x);
            half.mul(&vecs.adjoint()).mul(&lx).mul(&vecs).mul(&half_inv)
        };
        let mut big = CMat::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let block = to_onb(&t(i, j));
                for p in 0..d {
                    for q in 0..d {
                        big.set(i * d + p, j * d + q, block.at(p, q));
                    }
                }
            }
        }
        is_psd(&big, tol)
    }
}

fn split_subspaces(subspaces: Vec<CMat>, op: &CMat, tol: f64) -> Vec<CMat> {
    let mut out = Vec::new();
    for s in subspaces {
        if s.cols <= 1 {
            out.push(s);
            continue;
        }
        let restricted = s.adjoint().mul(&op.mul(&s));
        let (vals, vecs) = hermitian_eigen(&restricted);
        let scale = vals.iter().map(|v| v.abs()).fold(1.0, f64::max);
        // cluster eigenvalues by gaps
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..vals.len() {
            match groups.last_mut() {
                Some(g) if (vals[i] - vals[*g.last().unwrap()]).abs() <= 1e-7 * scale => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        let _ = tol;
        for g in groups {
            let cols = CMat::from_fn(restricted.rows, g.len(), |r, c| vecs.at(r, g[c]));
            out.push(s.mul(&cols));
        }
    }
    out
}

/// One matrix block of a semisimple algebra.
#[derive(Debug, Clone)]
pub struct Block {
    pub size: usize,
    /// The minimal central projection cutting this block (coordinates).
    pub projection: Vec<C64>,
    first_index: usize,
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }
}

/// A two-sided ideal, as the sum of the blocks in `mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealDescriptor {
    pub mask: u32,
    pub dim: usize,
}

/// The full (Boolean) lattice of two-sided ideals of a semisimple algebra.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    pub block_count: usize,
    pub decomposition: BlockDecomposition,
    pub ideals: Vec<IdealDescriptor>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn le(&self, a: &IdealDescriptor, b: &IdealDescriptor) -> bool {
        a.mask & !b.mask == 0
    }

    pub fn meet(&self, a: &IdealDescriptor, b: &IdealDescriptor) -> IdealDescriptor {
        self.by_mask(a.mask & b.mask)
    }

    pub fn join(&self, a: &IdealDescriptor, b: &IdealDescriptor) -> IdealDescriptor {
        self.by_mask(a.mask | b.mask)
    }

    fn by_mask(&self, mask: u32) -> IdealDescriptor {
        *self
            .ideals
            .iter()
            .find(|i| i.mask == mask)
            .expect("mask in lattice")
    }

    /// Lattice isomorphism test: two Boolean ideal lattices are isomorphic
    /// as posets iff they have the same number of atoms.
    pub fn poset_isomorphic(&self, other: &IdealLattice) -> bool {
        self.block_count == other.block_count
    }
}

/// Convenience constructors used by tests and examples.
pub mod build {
    use super::*;

    /// Full n x n matrix algebra on the basis E_rc (row-major).
    pub fn matrix_algebra(n: usize) -> StarAlgebra {
        let d = n * n;
        let idx = |r: usize, c: usize| r * n + c;
        let mut mult = BilinearMap::new(d, d, d);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        if b == c {
                            mult.push(idx(a, b), idx(c, e), idx(a, e), ONE);
                        }
                    }
                }
            }
        }
        let mut invol = CMat::zeros(d, d);
        for r in 0..n {
            for c in 0..n {
                invol.set(idx(c, r), idx(r, c), ONE);
            }
        }
        let labels = (0..n)
            .flat_map(|r| (0..n).map(move |c| format!("E{r}{c}")))
            .collect();
        StarAlgebra::new(labels, mult, invol)
    }

    /// Direct sum of full matrix algebras.
    pub fn block_diagonal(sizes: &[usize]) -> StarAlgebra {
        let d: usize = sizes.iter().map(|n| n * n).sum();
        let mut mult = BilinearMap::new(d, d, d);
        let mut invol = CMat::zeros(d, d);
        let mut labels = Vec::new();
        let mut offset = 0;
        for (bi, &n) in sizes.iter().enumerate() {
            let idx = |r: usize, c: usize| offset + r * n + c;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for e in 0..n {
                            if b == c {
                                mult.push(idx(a, b), idx(c, e), idx(a, e), ONE);
                            }
                        }
                    }
                }
            }
            for r in 0..n {
                for c in 0..n {
                    invol.set(idx(c, r), idx(r, c), ONE);
                    labels.push(format!("B{bi}E{r}{c}"));
                }
            }
            offset += n * n;
        }
        StarAlgebra::new(labels, mult, invol)
    }

    /// Group algebra of a finite group given by its multiplication table,
    /// twisted by a unit-modulus 2-cocycle sigma(i, j).
    pub fn twisted_group_algebra(
        table: &[Vec<usize>],
        inverse: &[usize],
        sigma: impl Fn(usize, usize) -> C64,
    ) -> StarAlgebra {
        let n = table.len();
        let mut mult = BilinearMap::new(n, n, n);
        for i in 0..n {
            for j in 0..n {
                mult.push(i, j, table[i][j], sigma(i, j));
            }
        }
        let mut invol = CMat::zeros(n, n);
        for (i, &ii) in inverse.iter().enumerate() {
            invol.set(ii, i, sigma(i, ii).conj());
        }
        let labels = (0..n).map(|i| format!("u{i}")).collect();
        StarAlgebra::new(labels, mult, invol)
    }
}

/// Verify that the span of the blocks selected by `mask` is a two-sided
/// ideal, by direct multiplication checks against the basis. Used as an
/// independent oracle in tests.
pub fn is_two_sided_ideal(alg: &StarAlgebra, lattice: &IdealLattice, mask: u32, tol: f64) -> bool {
    let d = alg.dim();
    // basis of the ideal: { e_i . P } for the sum P of selected projections
    let mut p = vec![ZERO; d];
    for (j, b) in lattice.decomposition.blocks.iter().enumerate() {
        if mask & (1 << j) != 0 {
            for (x, &c) in p.iter_mut().zip(&b.projection) {
                *x += c;
            }
        }
    }
    let ideal_rows: Vec<Vec<C64>> = (0..d)
        .map(|i| alg.product(&alg.basis_vector(i), &p))
        .collect();
    let rank = rank_of_rows(&ideal_rows, tol);
    // products from either side must stay inside the span
    let mut all: Vec<Vec<C64>> = ideal_rows.clone();
    for i in 0..d {
        for v in &ideal_rows {
            all.push(alg.product(&alg.basis_vector(i), v));
            all.push(alg.product(v, &alg.basis_vector(i)));
        }
    }
    rank_of_rows(&all, tol) == rank
}

/// Express `x` in terms of the given spanning vectors (least squares); the
/// residual reports how far x is from their span.
pub fn coords_in_span(span: &[Vec<C64>], x: &[C64], tol: f64) -> (Vec<C64>, f64) {
    let dim = x.len();
    let a = CMat::from_fn(dim, span.len(), |r, c| span[c][r]);
    linalg::solve_lstsq(&a, x, tol)
}

/// Deterministic selection of a linearly independent spanning subset
/// (by pivoted Gram reduction) from a list of vectors.
pub fn pivot_span(vectors: &[Vec<C64>], tol: f64) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors.len();
    let g = CMat::from_fn(n, n, |i, j| {
        vectors[i]
            .iter()
            .zip(&vectors[j])
            .map(|(a, b)| a.conj() * b)
            .sum()
    });
    let mut piv = linalg::gram_pivots(&g, tol);
    piv.sort_unstable();
    piv
}
