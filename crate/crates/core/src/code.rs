//! Convolutional codes as submodules of `F_q[x]^n`.

use crate::algebra::{fq, Poly, PrimeField};
use crate::error::{Error, Result};
use crate::polymat::{mat_rank, row_reduce, smith_form, PolyMatrix, PolyVector, RowReducedForm, SmithDecomposition};

/// A nonzero `(n, k, delta)` convolutional code. The generator is stored in
/// row-reduced form together with the Smith decomposition of that generator.
#[derive(Debug, Clone)]
pub struct ConvolutionalCode {
    field: PrimeField,
    n: usize,
    generator: RowReducedForm,
    smith: SmithDecomposition,
}

/// A linear block code in `F_q^n`, stored as an independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    pub field: PrimeField,
    pub n: usize,
    pub basis: Vec<Vec<u32>>,
}

impl BlockCode {
    /// Reduces `rows` to an echelon basis of their span.
    pub fn span(field: PrimeField, n: usize, rows: &[Vec<u32>]) -> Self {
        BlockCode { field, n, basis: fq::row_basis(field, rows) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates where some codeword is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.basis.iter().any(|b| b[j] != 0)).collect()
    }

    /// Dual code under the standard inner product.
    pub fn dual(&self) -> BlockCode {
        let ker = fq::right_kernel(self.field, &self.basis, self.n);
        BlockCode::span(self.field, self.n, &ker)
    }
}

/// Builds a code from generator rows of length `n`.
pub fn new_code(field: PrimeField, n: usize, rows: &[PolyVector]) -> Result<ConvolutionalCode> {
    if rows.is_empty() {
        return Err(Error::EmptyCode);
    }
    if n == 0 {
        return Err(Error::ShapeError("code length must be positive".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::ShapeError(format!("row of length {} in a code of length {n}", r.len())));
    }
    if rows.iter().any(|r| r.field() != field) {
        return Err(Error::ShapeError("row over a different field".into()));
    }
    let m = PolyMatrix::from_rows(field, rows)?;
    if mat_rank(&m) < rows.len() {
        return Err(Error::NotABasis);
    }
    let generator = row_reduce(&m)?;
    let smith = smith_form(&generator.matrix);
    Ok(ConvolutionalCode { field, n, generator, smith })
}

impl ConvolutionalCode {
    /// Convenience constructor from nested ascending coefficient lists.
    pub fn from_coeffs(field: PrimeField, rows: &[Vec<Vec<u64>>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let vs: Vec<PolyVector> = rows.iter().map(|r| PolyVector::from_coeffs(field, r)).collect();
        new_code(field, n, &vs)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.generator.matrix.rows()
    }

    #[inline]
    pub fn delta(&self) -> usize {
        self.generator.internal_degree
    }

    /// Row degrees of the stored generator, non-increasing.
    pub fn row_degrees(&self) -> &[usize] {
        &self.generator.row_degrees
    }

    /// The largest row degree.
    pub fn delta1(&self) -> usize {
        self.generator.row_degrees.first().copied().unwrap_or(0)
    }

    pub fn generator(&self) -> &PolyMatrix {
        &self.generator.matrix
    }

    pub fn generators(&self) -> Vec<PolyVector> {
        self.generator.matrix.row_vectors()
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    fn check_word(&self, word: &PolyVector) -> Result<()> {
        if word.len() != self.n || word.field() != self.field {
            return Err(Error::ShapeError(format!(
                "word of length {} over F_{} for a code of length {} over F_{}",
                word.len(),
                word.field().order(),
                self.n,
                self.field.order()
            )));
        }
        Ok(())
    }

    /// The unique `u` with `u * G = word`, if the word is a codeword.
    pub fn coordinates(&self, word: &PolyVector) -> Result<Option<PolyVector>> {
        self.check_word(word)?;
        let w = self.smith.t_inv.left_apply(word)?;
        let k = self.k();
        if w.entries()[k..].iter().any(|p| !p.is_zero()) {
            return Ok(None);
        }
        let mut y = Vec::with_capacity(k);
        for (i, d) in self.smith.diagonal().iter().enumerate() {
            match w.get(i).div_exact(d) {
                Some(q) => y.push(q),
                None => return Ok(None),
            }
        }
        let y = PolyVector::new(self.field, y);
        Ok(Some(self.smith.s_inv.left_apply(&y)?))
    }

    pub fn contains(&self, word: &PolyVector) -> Result<bool> {
        Ok(self.coordinates(word)?.is_some())
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_code(&self, other: &ConvolutionalCode) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `C[0]`, the span of the constant terms of the generators.
    pub fn czero(&self) -> BlockCode {
        let rows: Vec<Vec<u32>> = self.generators().iter().map(|g| g.coeff_vector(0)).collect();
        BlockCode::span(self.field, self.n, &rows)
    }

    pub fn is_noncatastrophic(&self) -> bool {
        self.smith.diagonal().iter().all(|d| d == &Poly::one(self.field))
    }

    /// For a catastrophic code, a pair `(r, c)` with `r * c` in the code and
    /// `c` outside it, read off the Smith form.
    pub fn catastrophic_witness(&self) -> Option<(Poly, PolyVector)> {
        let diag = self.smith.diagonal();
        let i = diag.iter().position(|d| d.degree() != Some(0))?;
        Some((diag[i].clone(), self.smith.t.row(i)))
    }

    /// `C^perp`, generated by the transposed last `n - k` columns of `T^{-1}`.
    pub fn dual(&self) -> Result<ConvolutionalCode> {
        let k = self.k();
        if k == self.n {
            return Err(Error::ZeroDual);
        }
        let rows: Vec<PolyVector> = (k..self.n).map(|j| self.smith.t_inv.column(j)).collect();
        new_code(self.field, self.n, &rows)
    }

    /// The reverse code, generated by the reversed rows of the row-reduced generator.
    pub fn reverse_code(&self) -> Result<ConvolutionalCode> {
        let rows: Vec<PolyVector> = self.generators().iter().map(PolyVector::reverse).collect();
        new_code(self.field, self.n, &rows)
    }

    /// Monic generator of the ideal `{p : p e_j in C}` (zero for the zero
    /// ideal). Indices are 0-based.
    pub fn coordinate_ideal_generator(&self, j: usize) -> Result<Poly> {
        if j >= self.n {
            return Err(Error::ShapeError(format!("coordinate {j} outside 0..{}", self.n)));
        }
        let k = self.k();
        let t = self.smith.t_inv.row(j);
        if t.entries()[k..].iter().any(|p| !p.is_zero()) {
            return Ok(Poly::zero(self.field));
        }
        let mut g = Poly::one(self.field);
        for (i, d) in self.smith.diagonal().iter().enumerate() {
            let c = d.gcd(t.get(i)).expect("d_i is nonzero");
            g = g.lcm(&d.div_exact(&c).unwrap());
        }
        Ok(g)
    }

    /// Image under `c_j -> scalars[j] * c_j` placed at coordinate `perm[j]`.
    pub fn apply_monomial_isometry(&self, perm: &[usize], scalars: &[u32]) -> Result<ConvolutionalCode> {
        let n = self.n;
        if perm.len() != n || scalars.len() != n {
            return Err(Error::ShapeError("permutation and scalars must have length n".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::ShapeError("not a permutation".into()));
            }
        }
        if let Some(&s) = scalars.iter().find(|&&s| self.field.reduce(s as u64) == 0) {
            return Err(Error::NotAUnit(s));
        }
        let rows: Vec<PolyVector> = self
            .generators()
            .iter()
            .map(|g| {
                let mut e = vec![Poly::zero(self.field); n];
                for j in 0..n {
                    e[perm[j]] = g.get(j).scale(self.field.reduce(scalars[j] as u64));
                }
                PolyVector::new(self.field, e)
            })
            .collect();
        new_code(self.field, n, &rows)
    }
}

/// Equality of codes by mutual containment.
pub fn code_equals(a: &ConvolutionalCode, b: &ConvolutionalCode) -> Result<bool> {
    if a.field != b.field || a.n != b.n {
        return Err(Error::ShapeError("codes over different ambient spaces".into()));
    }
    Ok(a.k() == b.k() && a.contains_code(b)? && b.contains_code(a)?)
}
