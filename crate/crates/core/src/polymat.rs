//! Vectors and matrices over `F_q[x]`: rank, determinant, Smith normal form
//! with transformation matrices, row reduction and coefficient windows.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::{fq, Poly, PrimeField};
use crate::error::{Error, Result};

/// A row vector with entries in `F_q[x]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVector {
    field: PrimeField,
    entries: Vec<Poly>,
}

impl PolyVector {
    pub fn new(field: PrimeField, entries: Vec<Poly>) -> Self {
        assert!(entries.iter().all(|p| p.field() == field), "field mismatch");
        PolyVector { field, entries }
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        PolyVector { field, entries: vec![Poly::zero(field); n] }
    }

    /// `x^a e_j`.
    pub fn monomial_unit(field: PrimeField, n: usize, j: usize, a: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.entries[j] = Poly::monomial(field, 1, a);
        v
    }

    /// Builds a vector from ascending integer coefficient lists.
    pub fn from_coeffs(field: PrimeField, lists: &[Vec<u64>]) -> Self {
        let entries = lists.iter().map(|c| Poly::new(field, c.iter().copied())).collect();
        PolyVector { field, entries }
    }

    pub fn to_coeff_lists(&self) -> Vec<Vec<u64>> {
        self.entries.iter().map(Poly::to_coeff_list).collect()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, j: usize) -> &Poly {
        &self.entries[j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Maximum entry degree, `None` for the zero vector.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().map(Poly::weight).sum()
    }

    /// Smallest `t` such that some entry has a nonzero `x^t` coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::valuation).min()
    }

    /// The coefficient vector `c[t]` in `F_q^n`.
    pub fn coeff_vector(&self, t: usize) -> Vec<u32> {
        self.entries.iter().map(|p| p.coeff(t)).collect()
    }

    pub fn add(&self, other: &PolyVector) -> PolyVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        PolyVector { field: self.field, entries }
    }

    pub fn sub(&self, other: &PolyVector) -> PolyVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        PolyVector { field: self.field, entries }
    }

    pub fn scale(&self, c: u32) -> PolyVector {
        PolyVector { field: self.field, entries: self.entries.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> PolyVector {
        PolyVector { field: self.field, entries: self.entries.iter().map(|e| e * p).collect() }
    }

    pub fn shift(&self, t: usize) -> PolyVector {
        PolyVector { field: self.field, entries: self.entries.iter().map(|e| e.shift(t)).collect() }
    }

    /// Division by `x^t`, when every entry allows it.
    pub fn unshift(&self, t: usize) -> Option<PolyVector> {
        let entries = self.entries.iter().map(|e| e.unshift(t)).collect::<Option<Vec<_>>>()?;
        Some(PolyVector { field: self.field, entries })
    }

    pub fn truncate(&self, j: usize) -> PolyVector {
        PolyVector { field: self.field, entries: self.entries.iter().map(|e| e.truncate(j)).collect() }
    }

    /// `x^{deg c} c(1/x)` using the vector's own degree.
    pub fn reverse(&self) -> PolyVector {
        match self.degree() {
            None => self.clone(),
            Some(d) => PolyVector {
                field: self.field,
                entries: self.entries.iter().map(|e| e.reverse_at(d)).collect(),
            },
        }
    }

    pub fn dot(&self, other: &PolyVector) -> Poly {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Poly::zero(self.field), |acc, (a, b)| &acc + &(a * b))
    }

    /// Scalar multiple whose first nonzero coefficient, scanning positions
    /// by degree and then coordinate, equals 1.
    pub fn normalized(&self) -> PolyVector {
        let Some(t) = self.valuation() else {
            return self.clone();
        };
        let lead = self.entries.iter().map(|p| p.coeff(t)).find(|&c| c != 0).unwrap();
        self.scale(self.field.inv(lead).unwrap())
    }
}

impl PartialOrd for PolyVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Entrywise lexicographic on ascending coefficient lists.
impl Ord for PolyVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries
            .iter()
            .map(Poly::coeffs)
            .cmp(other.entries.iter().map(Poly::coeffs))
    }
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix over `F_q[x]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        PolyMatrix { field, rows, cols, data: vec![Poly::zero(field); rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    /// Stacks row vectors. All rows must have the same length.
    pub fn from_rows(field: PrimeField, rows: &[PolyVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, PolyVector::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeError("rows have different lengths".into()));
        }
        if rows.iter().any(|r| r.field() != field) {
            return Err(Error::ShapeError("rows over a different field".into()));
        }
        let data = rows.iter().flat_map(|r| r.entries().iter().cloned()).collect();
        Ok(PolyMatrix { field, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from nested ascending coefficient lists.
    pub fn from_coeffs(field: PrimeField, rows: &[Vec<Vec<u64>>]) -> Result<Self> {
        let vs: Vec<PolyVector> = rows.iter().map(|r| PolyVector::from_coeffs(field, r)).collect();
        Self::from_rows(field, &vs)
    }

    pub fn to_coeff_lists(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.rows).map(|i| self.row(i).to_coeff_lists()).collect()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> PolyVector {
        PolyVector::new(self.field, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<PolyVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> PolyVector {
        PolyVector::new(self.field, (0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::degree).max()
    }

    pub fn weight(&self) -> usize {
        self.data.iter().map(Poly::weight).sum()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.field);
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if !a.is_zero() {
                        acc = &acc + &(a * other.get(l, j));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &PolyVector) -> Result<PolyVector> {
        if v.len() != self.rows {
            return Err(Error::ShapeError(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let entries = (0..self.cols).map(|j| v.dot(&self.column(j))).collect();
        Ok(PolyVector::new(self.field, entries))
    }

    /// Submatrix keeping the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> PolyMatrix {
        let mut m = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Coefficient matrix of `x^t` over `F_q`.
    pub fn coeff_matrix(&self, t: usize) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).coeff(t)).collect()).collect()
    }

    fn to_nested(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    fn from_nested(field: PrimeField, rows: usize, cols: usize, m: Vec<Vec<Poly>>) -> Self {
        PolyMatrix { field, rows, cols, data: m.into_iter().flatten().collect() }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Rank over the rational function field, by fraction-free elimination.
pub fn mat_rank(m: &PolyMatrix) -> usize {
    let mut a = m.to_nested();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].degree())
        else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        let piv = pivot_row[col].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let g = piv.gcd(&row[col]).expect("nonzero");
            let mp = piv.div_exact(&g).unwrap();
            let mr = row[col].div_exact(&g).unwrap();
            for (e, pe) in row.iter_mut().zip(&pivot_row) {
                *e = &(&*e * &mp) - &(pe * &mr);
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn det(m: &PolyMatrix) -> Result<Poly> {
    if m.rows != m.cols {
        return Err(Error::ShapeError(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let f = m.field;
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one(f));
    }
    let mut a = m.to_nested();
    let mut negate = false;
    let mut prev = Poly::one(f);
    for kk in 0..n - 1 {
        if a[kk][kk].is_zero() {
            match (kk + 1..n).find(|&i| !a[i][kk].is_zero()) {
                Some(i) => {
                    a.swap(kk, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero(f)),
            }
        }
        for i in kk + 1..n {
            for j in kk + 1..n {
                let num = &(&a[i][j] * &a[kk][kk]) - &(&a[i][kk] * &a[kk][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[kk][kk].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// `G = S * D * T` with `S`, `T` unimodular and `D` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: PolyMatrix,
    pub d: PolyMatrix,
    pub t: PolyMatrix,
    pub s_inv: PolyMatrix,
    pub t_inv: PolyMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries `d_1, ..., d_min(k,n)`.
    pub fn diagonal(&self) -> Vec<Poly> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|p| !p.is_zero()).count()
    }
}

struct SmithState {
    a: Vec<Vec<Poly>>,
    u: Vec<Vec<Poly>>,
    u_inv: Vec<Vec<Poly>>,
    v: Vec<Vec<Poly>>,
    v_inv: Vec<Vec<Poly>>,
}

fn axpy(dst: &mut [Poly], c: &Poly, src: &[Poly]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d + &(c * s);
        }
    }
}

impl SmithState {
    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &Poly) {
        let src = self.a[j].clone();
        axpy(&mut self.a[i], c, &src);
        let src = self.u[j].clone();
        axpy(&mut self.u[i], c, &src);
        let neg = -c;
        for row in self.u_inv.iter_mut() {
            let add = &row[i] * &neg;
            row[j] = &row[j] + &add;
        }
    }

    // col_j += c * col_i
    fn add_col(&mut self, j: usize, i: usize, c: &Poly) {
        for row in self.a.iter_mut() {
            let add = &row[i] * c;
            row[j] = &row[j] + &add;
        }
        for row in self.v.iter_mut() {
            let add = &row[i] * c;
            row[j] = &row[j] + &add;
        }
        let src = self.v_inv[j].clone();
        axpy(&mut self.v_inv[i], &-c, &src);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    fn scale_row(&mut self, i: usize, c: u32, c_inv: u32) {
        for e in self.a[i].iter_mut() {
            *e = e.scale(c);
        }
        for e in self.u[i].iter_mut() {
            *e = e.scale(c);
        }
        for row in self.u_inv.iter_mut() {
            row[i] = row[i].scale(c_inv);
        }
    }
}

fn nested_identity(field: PrimeField, n: usize) -> Vec<Vec<Poly>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
        .collect()
}

/// Smith normal form by the elementary-operation pivot algorithm.
pub fn smith_form(m: &PolyMatrix) -> SmithDecomposition {
    let f = m.field;
    let (k, n) = (m.rows, m.cols);
    let mut st = SmithState {
        a: m.to_nested(),
        u: nested_identity(f, k),
        u_inv: nested_identity(f, k),
        v: nested_identity(f, n),
        v_inv: nested_identity(f, n),
    };
    for t in 0..k.min(n) {
        loop {
            // lowest degree, then lowest row, then lowest column
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if let Some(d) = st.a[i][j].degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            let piv = st.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..k {
                if st.a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = st.a[i][t].divmod(&piv).unwrap();
                st.add_row(i, t, &-&q);
                dirty |= !r.is_zero();
            }
            for j in t + 1..n {
                if st.a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = st.a[t][j].divmod(&piv).unwrap();
                st.add_col(j, t, &-&q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // the pivot must divide the remaining block
            let bad = (t + 1..k).find(|&i| (t + 1..n).any(|j| !piv.divides(&st.a[i][j])));
            match bad {
                Some(i) => st.add_row(t, i, &Poly::one(f)),
                None => break,
            }
        }
        let lead = st.a[t][t].leading_coeff();
        if lead > 1 {
            st.scale_row(t, f.inv(lead).unwrap(), lead);
        }
    }
    SmithDecomposition {
        s: PolyMatrix::from_nested(f, k, k, st.u_inv),
        d: PolyMatrix::from_nested(f, k, n, st.a),
        t: PolyMatrix::from_nested(f, n, n, st.v_inv),
        s_inv: PolyMatrix::from_nested(f, k, k, st.u),
        t_inv: PolyMatrix::from_nested(f, n, n, st.v),
    }
}

/// Left-primeness test. When the matrix is left prime the right inverse
/// `T_inv[:, ..k] * S_inv` is returned alongside.
pub fn is_left_prime(m: &PolyMatrix) -> Result<(bool, Option<PolyMatrix>)> {
    if m.rows > m.cols {
        return Err(Error::ShapeError(format!("{} rows exceed {} columns", m.rows, m.cols)));
    }
    let sd = smith_form(m);
    let prime = sd.diagonal().iter().all(|d| *d == Poly::one(m.field));
    if !prime {
        return Ok((false, None));
    }
    let cols: Vec<usize> = (0..m.rows).collect();
    let inv = sd.t_inv.select_columns(&cols).mul(&sd.s_inv)?;
    Ok((true, Some(inv)))
}

/// A row-reduced generator with its row degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReducedForm {
    pub matrix: PolyMatrix,
    pub row_degrees: Vec<usize>,
    pub internal_degree: usize,
}

fn row_deg(row: &[Poly]) -> usize {
    row.iter().filter_map(Poly::degree).max().unwrap_or(0)
}

fn high_order_matrix(rows: &[Vec<Poly>]) -> Vec<Vec<u32>> {
    rows.iter()
        .map(|r| {
            let d = row_deg(r);
            r.iter().map(|p| p.coeff(d)).collect()
        })
        .collect()
}

/// Row reduction: cancels high-order dependencies until the leading
/// coefficient matrix has full rank, then sorts rows by descending degree
/// and lexicographically.
pub fn row_reduce(m: &PolyMatrix) -> Result<RowReducedForm> {
    if mat_rank(m) < m.rows {
        return Err(Error::RankDeficient);
    }
    let f = m.field;
    let mut rows = m.to_nested();
    loop {
        let h = high_order_matrix(&rows);
        // left kernel of h = right kernel of h^T
        let ht: Vec<Vec<u32>> = (0..m.cols).map(|j| h.iter().map(|r| r[j]).collect()).collect();
        let ker = fq::right_kernel(f, &ht, m.rows);
        let Some(alpha) = ker.first() else {
            break;
        };
        let degs: Vec<usize> = rows.iter().map(|r| row_deg(r)).collect();
        let i0 = (0..m.rows)
            .filter(|&i| alpha[i] != 0)
            .max_by(|&a, &b| degs[a].cmp(&degs[b]).then(b.cmp(&a)))
            .unwrap();
        let inv = f.inv(alpha[i0]).unwrap();
        let mut new_row = rows[i0].clone();
        for i in 0..m.rows {
            if i == i0 || alpha[i] == 0 {
                continue;
            }
            let c = Poly::monomial(f, f.mul(alpha[i], inv), degs[i0] - degs[i]);
            let src = rows[i].clone();
            axpy(&mut new_row, &c, &src);
        }
        rows[i0] = new_row;
    }
    rows.sort_by(|a, b| {
        row_deg(b).cmp(&row_deg(a)).then_with(|| a.iter().map(Poly::coeffs).cmp(b.iter().map(Poly::coeffs)))
    });
    let row_degrees: Vec<usize> = rows.iter().map(|r| row_deg(r)).collect();
    let internal_degree = row_degrees.iter().sum();
    Ok(RowReducedForm { matrix: PolyMatrix::from_nested(f, m.rows, m.cols, rows), row_degrees, internal_degree })
}

/// Maximum degree of a full-size minor, via the row-reduced form.
pub fn internal_degree(m: &PolyMatrix) -> Result<usize> {
    row_reduce(m).map(|r| r.internal_degree)
}

/// Entrywise coefficient window.
pub fn mat_window(m: &PolyMatrix, d: usize, delta: usize) -> Result<PolyMatrix> {
    let data = m.data.iter().map(|p| p.phi_window(d, delta)).collect::<Result<Vec<_>>>()?;
    Ok(PolyMatrix { field: m.field, rows: m.rows, cols: m.cols, data })
}

/// A basis of the row module spanned by `rows`, which may be dependent.
pub fn row_module_basis(field: PrimeField, rows: &[PolyVector]) -> Result<Vec<PolyVector>> {
    let m = PolyMatrix::from_rows(field, rows)?;
    let sd = smith_form(&m);
    Ok(sd
        .diagonal()
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| sd.t.row(i).mul_poly(d))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn mat(q: u64, rows: &[&[&[u64]]]) -> PolyMatrix {
        let rows: Vec<Vec<Vec<u64>>> = rows.iter().map(|r| r.iter().map(|c| c.to_vec()).collect()).collect();
        PolyMatrix::from_coeffs(f(q), &rows).unwrap()
    }

    fn check_smith(m: &PolyMatrix) -> SmithDecomposition {
        let sd = smith_form(m);
        let rebuilt = sd.s.mul(&sd.d).unwrap().mul(&sd.t).unwrap();
        assert_eq!(&rebuilt, m);
        assert_eq!(sd.s.mul(&sd.s_inv).unwrap(), PolyMatrix::identity(m.field(), m.rows()));
        assert_eq!(sd.t.mul(&sd.t_inv).unwrap(), PolyMatrix::identity(m.field(), m.cols()));
        let diag = sd.diagonal();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(sd.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0].divides(&w[1]), "{:?} does not divide {:?}", w[0], w[1]);
        }
        for d in &diag {
            assert!(d.is_zero() || d.leading_coeff() == 1);
        }
        sd
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&mat(2, &[&[&[1], &[], &[0, 1]], &[&[], &[1], &[]]])), 2);
        assert_eq!(mat_rank(&PolyMatrix::zeros(f(3), 2, 3)), 0);
        let mut e38 = vec![0; 38];
        e38.push(1);
        let mut e17 = vec![0; 17];
        e17.push(1);
        let m = mat(2, &[&[&e38, &e17], &[&e17, &[1]]]);
        assert_eq!(mat_rank(&m), 2);
        let mut expect = vec![0u64; 39];
        expect[38] = 1;
        expect[34] = 1;
        assert_eq!(det(&m).unwrap(), Poly::new(f(2), expect));
    }

    #[test]
    fn smith_examples() {
        let sd = check_smith(&mat(2, &[&[&[1, 1], &[]]]));
        assert_eq!(sd.diagonal(), vec![Poly::new(f(2), [1, 1])]);
        let sd = check_smith(&mat(2, &[&[&[1], &[], &[0, 1]], &[&[], &[1], &[]]]));
        assert_eq!(sd.diagonal(), vec![Poly::one(f(2)); 2]);
        let sd = check_smith(&mat(2, &[&[&[1], &[1, 1, 1, 1]]]));
        assert_eq!(sd.diagonal(), vec![Poly::one(f(2))]);
    }

    #[test]
    fn left_prime_examples() {
        let (p, inv) = is_left_prime(&mat(2, &[&[&[1], &[1, 1, 1, 1]]])).unwrap();
        assert!(p);
        let m = mat(2, &[&[&[1], &[1, 1, 1, 1]]]);
        assert_eq!(m.mul(&inv.unwrap()).unwrap(), PolyMatrix::identity(f(2), 1));
        assert!(!is_left_prime(&mat(2, &[&[&[1, 1], &[1, 0, 0, 0, 1]]])).unwrap().0);
        assert!(is_left_prime(&mat(2, &[&[&[1], &[], &[0, 1]], &[&[], &[1], &[]]])).unwrap().0);
        assert!(matches!(is_left_prime(&mat(2, &[&[&[1]], &[&[0, 1]]])), Err(Error::ShapeError(_))));
    }

    #[test]
    fn row_reduce_examples() {
        let rr = row_reduce(&mat(2, &[&[&[1, 0, 1], &[], &[1]], &[&[1], &[1], &[]]])).unwrap();
        assert_eq!((rr.row_degrees.clone(), rr.internal_degree), (vec![2, 0], 2));
        let rr = row_reduce(&mat(5, &[&[&[0, 2], &[1, 1], &[1, 1]], &[&[1], &[1], &[2]]])).unwrap();
        assert_eq!((rr.row_degrees.clone(), rr.internal_degree), (vec![1, 0], 1));
        let c = mat(3, &[&[&[1], &[2], &[]], &[&[], &[1], &[1]]]);
        let rr = row_reduce(&c).unwrap();
        assert_eq!(rr.internal_degree, 0);
        assert_eq!(internal_degree(&mat(5, &[&[&[0, 2], &[1, 1], &[]], &[&[1], &[1], &[2]]])).unwrap(), 1);
        assert_eq!(internal_degree(&PolyMatrix::identity(f(2), 3)).unwrap(), 0);
        assert_eq!(row_reduce(&mat(3, &[&[&[1], &[1]], &[&[2], &[2]]])), Err(Error::RankDeficient));
        // a non-reduced input: rows (1, x) and (x, x^2 + 1) over F_2, determinant 1
        let rr = row_reduce(&mat(2, &[&[&[1], &[0, 1]], &[&[0, 1], &[1, 0, 1]]])).unwrap();
        assert_eq!(rr.internal_degree, 0);
    }

    #[test]
    fn window_examples() {
        let g = mat(2, &[&[&[1], &[], &[0, 1]], &[&[], &[1], &[]]]);
        let mono = |d: usize| {
            let mut v = vec![0u64; d + 1];
            v[d] = 1;
            v
        };
        let mp = mat(2, &[&[&mono(34), &mono(17)], &[&mono(17), &[1]]]);
        let mpg = mp.mul(&g).unwrap();
        let w20 = mat_window(&mpg, 20, 20).unwrap();
        assert_eq!(w20, mat(2, &[&[&[], &mono(17), &[]], &[&mono(17), &[1], &mono(18)]]));
        let w = mat_window(&mpg, 35, 14).unwrap();
        assert_eq!(w, mat(2, &[&[&mono(13), &[], &mono(14)], &[&[], &[], &[]]]));
        assert!(mat_window(&PolyMatrix::zeros(f(2), 2, 2), 5, 3).unwrap().is_zero());
    }

    fn arb_matrix() -> impl Strategy<Value = PolyMatrix> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..=4, 1usize..=4).prop_flat_map(|(q, k, n)| {
            prop::collection::vec(prop::collection::vec(prop::collection::vec(0..q, 0..=5), n), k).prop_map(
                move |rows| PolyMatrix::from_coeffs(f(q), &rows).unwrap(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn smith_reconstructs(m in arb_matrix()) {
            let sd = check_smith(&m);
            prop_assert!(det(&sd.s).unwrap().degree() == Some(0));
            prop_assert!(det(&sd.t).unwrap().degree() == Some(0));
            prop_assert_eq!(mat_rank(&m), sd.rank());
        }

        #[test]
        fn internal_degree_unimodular_invariant(m in arb_matrix(), c in prop::collection::vec(0u64..5, 0..=3)) {
            prop_assume!(mat_rank(&m) == m.rows());
            let fld = m.field();
            let k = m.rows();
            let mut u = PolyMatrix::identity(fld, k);
            if k > 1 {
                u.set(0, k - 1, Poly::new(fld, c.clone()));
                u.set(k - 1, 0, Poly::zero(fld));
            }
            let um = u.mul(&m).unwrap();
            let a = row_reduce(&m).unwrap();
            let b = row_reduce(&um).unwrap();
            prop_assert_eq!(a.internal_degree, b.internal_degree);
            let mut da = a.row_degrees.clone();
            da.sort();
            let mut db = b.row_degrees.clone();
            db.sort();
            prop_assert_eq!(da, db);
            let again = row_reduce(&a.matrix).unwrap();
            prop_assert_eq!(again.row_degrees, a.row_degrees);
            // internal degree equals the largest full-size minor degree
            if k <= m.cols() {
                let n = m.cols();
                let mut best = None;
                let mut cols: Vec<usize> = (0..k).collect();
                loop {
                    let d = det(&m.select_columns(&cols)).unwrap().degree();
                    best = best.max(d);
                    let mut i = k;
                    while i > 0 && cols[i - 1] == n - k + i - 1 { i -= 1; }
                    if i == 0 { break; }
                    cols[i - 1] += 1;
                    for j in i..k { cols[j] = cols[j - 1] + 1; }
                }
                prop_assert_eq!(best, Some(a.internal_degree));
            }
        }
    }
}
