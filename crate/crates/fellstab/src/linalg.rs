//! Small dense complex linear algebra.
//!
//! Everything here targets matrices of dimension at most a few hundred, with
//! entries that are exact integers or unit-modulus phases up to rounding.
//! All rank decisions are made against an explicit absolute tolerance.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.at(r, c);
                write!(f, "{:+.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let nr = rows.len();
        let nc = if nr == 0 { 0 } else { rows[0].len() };
        CMat::from_fn(nr, nc, |r, c| rows[r][c])
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// Flatten in row-major order.
    pub fn to_vec(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.add_at(r, c, a * other.at(k, c));
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, z: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.conj();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMat, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.sub(other).max_abs() <= tol
    }
}

pub fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_max_abs(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Row echelon reduction with partial pivoting. Returns (rank, pivot columns).
/// The matrix is modified in place.
pub fn row_echelon(m: &mut CMat, tol: f64) -> (usize, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        let mut best = row;
        let mut best_abs = 0.0;
        for r in row..m.rows {
            let a = m.at(r, col).norm();
            if a > best_abs {
                best_abs = a;
                best = r;
            }
        }
        if best_abs <= tol {
            continue;
        }
        if best != row {
            for c in 0..m.cols {
                let tmp = m.at(row, c);
                m.set(row, c, m.at(best, c));
                m.set(best, c, tmp);
            }
        }
        let p = m.at(row, col);
        for c in col..m.cols {
            let v = m.at(row, c) / p;
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let f = m.at(r, col);
            if f == ZERO {
                continue;
            }
            for c in col..m.cols {
                let v = m.at(r, c) - f * m.at(row, c);
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.rows {
            break;
        }
    }
    (pivots.len(), pivots)
}

/// Rank of the matrix whose rows are the given vectors.
pub fn rank_of_rows(rows: &[Vec<C64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = CMat::from_rows(rows);
    let scale = m.max_abs().max(1.0);
    row_echelon(&mut m, tol * scale).0
}

/// Basis of the null space {x : A x = 0}, as vectors.
pub fn kernel_basis(a: &CMat, tol: f64) -> Vec<Vec<C64>> {
    let mut m = a.clone();
    let scale = m.max_abs().max(1.0);
    let (_, pivots) = row_echelon(&mut m, tol * scale);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![ZERO; a.cols];
        v[f] = ONE;
        for (i, &p) in pivots.iter().enumerate() {
            // row i has its leading 1 at column p
            v[p] = -m.at(i, f);
        }
        basis.push(v);
    }
    basis
}

/// Least-squares solution of A x = b via the normal equations.
/// Returns (x, residual) where residual = max |A x - b|.
pub fn solve_lstsq(a: &CMat, b: &[C64], tol: f64) -> (Vec<C64>, f64) {
    assert_eq!(a.rows, b.len());
    let ah = a.adjoint();
    let gram = ah.mul(a);
    let rhs = ah.matvec(b);
    let x = solve_square(&gram, &rhs, tol);
    let res = vec_max_abs(&vec_sub(&a.matvec(&x), b));
    (x, res)
}

/// Solve a square (possibly singular) system G x = r by Gaussian elimination
/// with partial pivoting; free variables are set to zero.
pub fn solve_square(g: &CMat, r: &[C64], tol: f64) -> Vec<C64> {
    assert_eq!(g.rows, g.cols);
    assert_eq!(g.rows, r.len());
    let n = g.rows;
    let mut m = CMat::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, g.at(i, j));
        }
        m.set(i, n, r[i]);
    }
    let scale = g.max_abs().max(1.0);
    let (_, pivots) = row_echelon(&mut m, tol * scale);
    let mut x = vec![ZERO; n];
    for (i, &p) in pivots.iter().enumerate() {
        if p < n {
            x[p] = m.at(i, n);
        }
    }
    x
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvector columns.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    // symmetrize against rounding in the input
    for r in 0..n {
        for c in 0..n {
            let v = (m.at(r, c) + m.at(c, r).conj()) * C64::new(0.5, 0.0);
            m.set(r, c, v);
        }
    }
    let mut v = CMat::identity(n);
    let scale = m.max_abs().max(1e-300);
    let eps = 1e-14 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m.at(p, q).norm());
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.at(p, q);
                let abs_apq = apq.norm();
                if abs_apq <= eps * 1e-2 {
                    continue;
                }
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                let phase = apq / C64::new(abs_apq, 0.0);
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotation R with R[p,p]=c, R[p,q]=s*phase, R[q,p]=-s*conj(phase), R[q,q]=c;
                // apply A <- R^H A R, V <- V R
                for i in 0..n {
                    let mip = m.at(i, p);
                    let miq = m.at(i, q);
                    m.set(
                        i,
                        p,
                        mip * C64::new(c, 0.0) - miq * phase.conj() * C64::new(s, 0.0),
                    );
                    m.set(
                        i,
                        q,
                        mip * phase * C64::new(s, 0.0) + miq * C64::new(c, 0.0),
                    );
                }
                for j in 0..n {
                    let mpj = m.at(p, j);
                    let mqj = m.at(q, j);
                    m.set(
                        p,
                        j,
                        mpj * C64::new(c, 0.0) - mqj * phase * C64::new(s, 0.0),
                    );
                    m.set(
                        q,
                        j,
                        mpj * phase.conj() * C64::new(s, 0.0) + mqj * C64::new(c, 0.0),
                    );
                }
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    v.set(
                        i,
                        p,
                        vip * C64::new(c, 0.0) - viq * phase.conj() * C64::new(s, 0.0),
                    );
                    v.set(
                        i,
                        q,
                        vip * phase * C64::new(s, 0.0) + viq * C64::new(c, 0.0),
                    );
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| m.at(i, i).re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = CMat::from_fn(n, n, |r, c| v.at(r, order[c]));
    (sorted_vals, sorted_vecs)
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn spectral_radius_hermitian(a: &CMat) -> f64 {
    let (vals, _) = hermitian_eigen(a);
    vals.iter().map(|l| l.abs()).fold(0.0, f64::max)
}

/// Operator (spectral) norm of an arbitrary matrix: sqrt(lambda_max(A^H A)).
pub fn operator_norm(a: &CMat) -> f64 {
    let g = a.adjoint().mul(a);
    let (vals, _) = hermitian_eigen(&g);
    vals.last().map(|l| l.max(0.0).sqrt()).unwrap_or(0.0)
}

/// Positive semidefiniteness of a Hermitian matrix: all eigenvalues
/// >= -tol * max(|eigenvalue|, 1).
pub fn is_psd(a: &CMat, tol: f64) -> bool {
    let (vals, _) = hermitian_eigen(a);
    let scale = vals.iter().map(|l| l.abs()).fold(1.0, f64::max);
    vals.iter().all(|&l| l >= -tol * scale)
}

/// Greedy pivoted Cholesky on a positive semidefinite Gram matrix.
/// Returns the pivot indices in selection order; their count is the
/// numerical rank. Deterministic: largest remaining diagonal wins, ties
/// broken by smallest index.
pub fn gram_pivots(g: &CMat, tol: f64) -> Vec<usize> {
    assert_eq!(g.rows, g.cols);
    let n = g.rows;
    let mut r = g.clone();
    let scale = (0..n).map(|i| r.at(i, i).re).fold(0.0, f64::max).max(1.0);
    let mut chosen = Vec::new();
    let mut used = vec![false; n];
    loop {
        let mut best = usize::MAX;
        let mut best_d = tol * scale;
        for i in 0..n {
            if used[i] {
                continue;
            }
            let d = r.at(i, i).re;
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        if best == usize::MAX {
            break;
        }
        used[best] = true;
        chosen.push(best);
        let dp = r.at(best, best);
        let col: Vec<C64> = (0..n).map(|i| r.at(i, best)).collect();
        for i in 0..n {
            if used[i] {
                continue;
            }
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let v = r.at(i, j) - col[i] * col[j].conj() / dp;
                r.set(i, j, v);
            }
        }
    }
    chosen
}
