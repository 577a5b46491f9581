//! Dense exact linear algebra over the rationals: row reduction, kernels,
//! solving, canonical subspaces, and quotients with chosen sections.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{format_rat, Rational};

/// Dense matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QMatrix{}x{}{}", self.rows, self.cols, self.to_plain_string())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn set_row(&mut self, i: usize, row: &[Rational]) {
        assert_eq!(row.len(), self.cols);
        self.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(row);
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    *out.at_mut(i, j) += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = vec![Rational::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Rational::zero();
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                acc += a * &v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn to_plain_string(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let entries: Vec<String> = (0..self.cols).map(|j| format_rat(self.at(i, j))).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    /// Reduced row-echelon form and the pivot column list. Row space is
    /// preserved; the result is the canonical RREF of the matrix.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let pivot = m.at(r, c).clone();
            if !pivot.is_one() {
                for j in c..m.cols {
                    if !m.at(r, j).is_zero() {
                        let v = m.at(r, j) / &pivot;
                        *m.at_mut(r, j) = v;
                    }
                }
            }
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in c..m.cols {
                    if m.at(r, j).is_zero() {
                        continue;
                    }
                    let v = m.at(i, j) - &f * m.at(r, j);
                    *m.at_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Exact solution of `self * x = b` when one exists, with the fixed
    /// first-pivot convention: free variables are set to zero. The candidate
    /// is verified by substituting back before it is returned.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len(), "rhs length mismatch");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent system
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r.at(row, self.cols).clone();
        }
        let check = self.mul_vec(&x);
        assert!(
            check.iter().zip(b).all(|(u, v)| u == v),
            "solve verification failed"
        );
        Some(x)
    }

    /// Null space as a canonical subspace; dim = cols - rank.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_set.contains(&j) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[j] = Rational::one();
            for (row, &col) in pivots.iter().enumerate() {
                if !r.at(row, j).is_zero() {
                    v[col] = -r.at(row, j).clone();
                }
            }
            basis.push(v);
        }
        Subspace::from_rows(self.cols, basis)
    }

    /// Exact inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    /// Monic minimal polynomial, coefficients low degree to high.
    pub fn min_poly(&self) -> Vec<Rational> {
        assert_eq!(self.rows, self.cols, "min_poly needs a square matrix");
        let n = self.rows;
        let mut powers: Vec<QMatrix> = vec![QMatrix::identity(n)];
        loop {
            let k = powers.len();
            // Rows of `stack` are the vectorized powers 0..k.
            let stack = QMatrix::from_rows(powers.iter().map(|m| m.data.clone()).collect());
            let next = powers.last().unwrap().mul(self);
            if let Some(coeffs) = stack.transpose().solve(&next.data) {
                let mut poly: Vec<Rational> = coeffs.iter().map(|c| -c.clone()).collect();
                poly.push(Rational::one());
                return poly;
            }
            powers.push(next);
            assert!(k <= n, "minimal polynomial search exceeded dimension");
        }
    }
}

/// A linear subspace of Q^n, canonicalized: the basis matrix is the RREF of
/// any chosen spanning set with zero rows dropped, so two equal subspaces
/// compare equal syntactically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Rational>>) -> Subspace {
        if rows.is_empty() {
            return Subspace {
                ambient,
                basis: QMatrix::zeros(0, ambient),
                pivots: vec![],
            };
        }
        assert!(rows.iter().all(|r| r.len() == ambient));
        let (r, pivots) = QMatrix::from_rows(rows).rref();
        let basis = QMatrix::from_rows(
            (0..pivots.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>(),
        );
        let basis = if pivots.is_empty() {
            QMatrix::zeros(0, ambient)
        } else {
            basis
        };
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace::from_rows(ambient, vec![])
    }

    pub fn full(ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace::from_rows(ambient, rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` modulo the subspace; the result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for j in 0..self.ambient {
                if !self.basis.at(row, j).is_zero() {
                    let t = &w[j] - &f * self.basis.at(row, j);
                    w[j] = t;
                }
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..other.dim()).all(|i| self.contains_vec(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows: Vec<Vec<Rational>> = (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect();
        rows.extend((0..other.dim()).map(|i| other.basis.row(i).to_vec()));
        Subspace::from_rows(self.ambient, rows)
    }
}

/// Quotient data for `v / w`: a projection with kernel `w` on `v`, and a
/// section assembled from chosen coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientDecomposition {
    pub dim: usize,
    /// `dim x ambient`; applied to elements of `v` it gives quotient coordinates.
    pub projection: QMatrix,
    /// `dim x ambient`; rows are the chosen coset representatives.
    pub section: QMatrix,
}

impl QuotientDecomposition {
    /// Apply the section: quotient coordinates to an ambient representative.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        self.section.transpose().mul_vec(coords)
    }
}

/// Quotient of `v` by a contained subspace `w`, with deterministic coset
/// representatives (the rows of `v`'s canonical basis that extend `w`).
pub fn quotient(v: &Subspace, w: &Subspace) -> Result<QuotientDecomposition> {
    if v.ambient() != w.ambient() {
        return Err(Error::Containment("ambient dimensions differ".into()));
    }
    if !v.contains(w) {
        return Err(Error::Containment(
            "quotient denominator is not contained in the numerator".into(),
        ));
    }
    let n = v.ambient();
    // Coset representatives: rows of v's basis independent modulo w.
    let mut reps: Vec<Vec<Rational>> = Vec::new();
    let mut span = w.clone();
    for i in 0..v.dim() {
        let row = v.basis().row(i).to_vec();
        if !span.contains_vec(&row) {
            span = span.sum(&Subspace::from_rows(n, vec![row.clone()]));
            reps.push(row);
        }
    }
    let q = reps.len();
    assert_eq!(q, v.dim() - w.dim());
    let section = if q == 0 {
        QMatrix::zeros(0, n)
    } else {
        QMatrix::from_rows(reps.clone())
    };
    // Coefficient extraction: for x in v, x = sum a_i r_i + (element of w);
    // a = first q rows of (B B^T)^{-1} B with B the stacked basis.
    let projection = if q == 0 {
        QMatrix::zeros(0, n)
    } else {
        let b = section.vstack(w.basis());
        let gram = b.mul(&b.transpose());
        let gram_inv = gram
            .inverse()
            .expect("Gram matrix of independent rows is invertible");
        let full = gram_inv.mul(&b);
        QMatrix::from_rows((0..q).map(|i| full.row(i).to_vec()).collect())
    };
    // projection . section = identity on the quotient.
    debug_assert!(projection.mul(&section.transpose()).is_identity() || q == 0);
    Ok(QuotientDecomposition {
        dim: q,
        projection,
        section,
    })
}

/// Format a vector with the shared rational convention.
pub fn format_vec(v: &[Rational]) -> String {
    let entries: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", entries.join(", "))
}

/// True iff every entry is zero.
pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Pointwise sum of vectors.
pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Pointwise difference.
pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scalar multiple.
pub fn vec_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}
