//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything in the K-theory pipeline reduces to a handful of lattice
//! computations: Smith normal form with its unimodular transforms, kernel
//! bases (canonicalized by column Hermite form), cokernel structure, and
//! integral solves. Matrices here are small (a few dozen rows at most), so
//! the algorithms favour determinism over speed.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("entry count {got} does not match shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("basis columns are not linearly independent")]
    DependentBasis,
    #[error("image of the lattice is not contained in the lattice")]
    NotInvariant,
}

/// Dense row-major integer matrix. Empty shapes (0×n, n×0) are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[BigInt]) -> Self {
        Self::from_columns(v.len(), &[v.to_vec()])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigInt::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Characteristic polynomial det(xI − A), coefficients from x⁰ upward.
    /// Faddeev–LeVerrier; every division is exact over ℤ.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square(), "charpoly of non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
            coeffs[n - k] = -trace / BigInt::from(k);
        }
        coeffs
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Display for IntMatrix {
    /// `[[a, b], [c, d]]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries d₁ | d₂ | … including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

// Row/column operations on a dense working copy; each op is mirrored on the
// transform it belongs to.
struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[t].clone();
            for (x, s) in m[i].iter_mut().zip(src) {
                *x -= q * s;
            }
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let s = r[t].clone();
                r[j] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[t].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, ncols: usize) -> IntMatrix {
    let nrows = rows.len();
    IntMatrix::new(nrows, ncols, rows.into_iter().flatten().collect()).expect("consistent shape")
}

/// Smith normal form with unimodular transforms.
///
/// Pivot is the smallest nonzero absolute value in the active submatrix,
/// ties broken by (row, col); output is deterministic for a given input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_rows(),
        u: IntMatrix::identity(m).to_rows(),
        v: IntMatrix::identity(n).to_rows(),
    };
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut remainder = false;
            for i in t + 1..m {
                if !w.a[i][t].is_zero() {
                    let q = &w.a[i][t] / &w.a[t][t];
                    w.row_axpy(i, t, &q);
                    remainder |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !w.a[t][j].is_zero() {
                    let q = &w.a[t][j] / &w.a[t][t];
                    w.col_axpy(j, t, &q);
                    remainder |= !w.a[t][j].is_zero();
                }
            }
            if remainder {
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let p = w.a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    SmithDecomposition {
        u: rows_to_matrix(w.u, m),
        d: rows_to_matrix(w.a, n),
        v: rows_to_matrix(w.v, n),
    }
}

/// Column Hermite normal form of the lattice spanned by the columns of `a`.
///
/// Returns a basis (zero columns dropped) in lower echelon form: each pivot
/// is positive and the entries to its left in the pivot row lie in
/// `[0, pivot)`. Two matrices span the same lattice iff their forms agree.
pub fn column_hermite_form(a: &IntMatrix) -> IntMatrix {
    let n = a.rows();
    let mut cols = a.columns();
    let k = cols.len();
    let mut c = 0;
    for row in 0..n {
        if c == k {
            break;
        }
        loop {
            let best = (c..k)
                .filter(|&j| !cols[j][row].is_zero())
                .min_by(|&x, &y| cols[x][row].abs().cmp(&cols[y][row].abs()).then(x.cmp(&y)));
            let Some(b) = best else { break };
            cols.swap(c, b);
            let mut done = true;
            for j in c + 1..k {
                if !cols[j][row].is_zero() {
                    let q = &cols[j][row] / &cols[c][row];
                    let pivot_col = cols[c].clone();
                    for (x, p) in cols[j].iter_mut().zip(pivot_col) {
                        *x -= &q * p;
                    }
                    done &= cols[j][row].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if cols.get(c).is_none_or(|col| col[row].is_zero()) {
            continue;
        }
        if cols[c][row].is_negative() {
            for x in cols[c].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let pivot_col = cols[c].clone();
        for col in cols.iter_mut().take(c) {
            let q = col[row].div_floor(&pivot_col[row]);
            if !q.is_zero() {
                for (x, p) in col.iter_mut().zip(&pivot_col) {
                    *x -= &q * p;
                }
            }
        }
        c += 1;
    }
    cols.truncate(c);
    IntMatrix::from_columns(n, &cols)
}

/// ℤ-basis of ker A as the columns of the returned `cols(A) × nullity` matrix,
/// canonicalized by column Hermite form.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let free: Vec<usize> = (r..a.cols()).collect();
    let all: Vec<usize> = (0..a.cols()).collect();
    column_hermite_form(&snf.v.submatrix(&all, &free))
}

/// Invariant-factor description of ℤ^rows / im A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelStructure {
    pub free_rank: usize,
    /// Entries > 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl CokernelStructure {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for CokernelStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel(a: &IntMatrix) -> CokernelStructure {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = snf.rank();
    CokernelStructure {
        free_rank: a.rows() - rank,
        torsion: diag.into_iter().filter(|d| d > &BigInt::one()).collect(),
    }
}

/// Solves `B·X = C` over ℤ for `B` of full column rank; `None` when no
/// integral solution exists.
pub fn solve_integral(b: &IntMatrix, c: &IntMatrix) -> Result<Option<IntMatrix>, LinalgError> {
    if b.rows() != c.rows() {
        return Err(LinalgError::Dimension(format!(
            "solve: B has {} rows, C has {}",
            b.rows(),
            c.rows()
        )));
    }
    let snf = smith_normal_form(b);
    let r = b.cols();
    if snf.rank() != r {
        return Err(LinalgError::DependentBasis);
    }
    // D·Y = U·C with X = V·Y
    let uc = &snf.u * c;
    let mut y = IntMatrix::zeros(r, c.cols());
    for j in 0..c.cols() {
        for i in 0..b.rows() {
            let x = &uc[(i, j)];
            if i < r {
                let (q, rem) = x.div_rem(&snf.d[(i, i)]);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[(i, j)] = q;
            } else if !x.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(&snf.v * &y))
}

/// The matrix `S` with `T·B = B·S`, i.e. `T` written in the lattice basis `B`.
pub fn restrict_endomorphism(t: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    if !t.is_square() || t.rows() != b.rows() {
        return Err(LinalgError::Dimension(format!(
            "restrict: T is {}x{}, B is {}x{}",
            t.rows(),
            t.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let tb = t * b;
    solve_integral(b, &tb)?.ok_or(LinalgError::NotInvariant)
}

/// Basis (column Hermite form) of ℤⁿ ∩ ℚ-span of the columns of `a`.
pub fn saturation(a: &IntMatrix) -> IntMatrix {
    let left_kernel = kernel_basis(&a.transpose());
    kernel_basis(&left_kernel.transpose())
}
