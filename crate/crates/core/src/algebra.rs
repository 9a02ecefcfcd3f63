//! Exact arithmetic in a prime field `F_q` and in the polynomial ring `F_q[x]`.
//!
//! Field elements are plain `u32` residues in `[0, q)`; the [`PrimeField`]
//! value carries the modulus and performs the arithmetic. Polynomials are
//! dense, ascending, and never carry trailing zeros, so the zero polynomial
//! is the empty coefficient list.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    /// Builds `F_q`, checking primality by trial division.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || q > u32::MAX as u64 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q: q as u32 })
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u32 {
        (a % self.q as u64) as u32
    }

    /// Maps a signed integer onto its residue.
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.q as u64 {
            (s - self.q as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.q as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.q) {
            return None;
        }
        // extended Euclid on (a, q)
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        Some(self.from_i64(t0))
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// All nonzero elements, in increasing order.
    pub fn units(self) -> impl Iterator<Item = u32> {
        1..self.q
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A univariate polynomial over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, reducing them mod `q`
    /// and trimming trailing zeros.
    pub fn new(field: PrimeField, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Self::from_residues(field, coeffs)
    }

    /// Builds a polynomial from coefficients that are already residues.
    pub fn from_residues(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::from_residues(field, vec![field.reduce(c as u64)])
    }

    /// `c * x^d`.
    pub fn monomial(field: PrimeField, c: u32, d: usize) -> Self {
        let c = field.reduce(c as u64);
        if c == 0 {
            return Self::zero(field);
        }
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly { field, coeffs }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    #[inline]
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Largest `t` with `x^t | p`; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// True for nonzero `c * x^d`.
    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.weight() == 1
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_residues(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `x^t`.
    pub fn shift(&self, t: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; t];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs }
    }

    /// Division by `x^t`, when exact.
    pub fn unshift(&self, t: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.valuation()? < t {
            return None;
        }
        Some(Poly { field: self.field, coeffs: self.coeffs[t..].to_vec() })
    }

    /// Drops every coefficient above degree `j`.
    pub fn truncate(&self, j: usize) -> Self {
        let end = self.coeffs.len().min(j + 1);
        Self::from_residues(self.field, self.coeffs[..end].to_vec())
    }

    /// `x^d p(1/x)`; requires `deg(p) <= d`.
    pub fn reverse_at(&self, d: usize) -> Self {
        assert!(self.degree().is_none_or(|e| e <= d), "reverse_at: degree exceeds {d}");
        let mut coeffs = vec![0; d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c;
        }
        Self::from_residues(self.field, coeffs)
    }

    /// Makes the polynomial monic. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn eval(&self, a: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// Euclidean division: `self = quotient * b + remainder`, `deg(remainder) < deg(b)`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        assert_eq!(self.field, b.field, "field mismatch");
        let f = self.field;
        let db = b.degree().ok_or(Error::ZeroDivisor)?;
        let inv_lead = f.inv(b.leading_coeff()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + db], inv_lead);
            quot[i] = c;
            if c != 0 {
                for (j, &bc) in b.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, bc));
                }
            }
        }
        rem.truncate(db);
        Ok((Self::from_residues(f, quot), Self::from_residues(f, rem)))
    }

    /// Remainder-only shortcut for [`Poly::divmod`].
    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        self.divmod(b).map(|(_, r)| r)
    }

    /// Exact quotient, if `b` divides `self`.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        match self.divmod(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, b: &Poly) -> Result<Poly> {
        if self.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*b = g`, `g` monic.
    pub fn xgcd(&self, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = f.inv(r0.leading_coeff()).expect("nonzero gcd");
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Monic least common multiple; zero if either input is zero.
    pub fn lcm(&self, b: &Poly) -> Poly {
        if self.is_zero() || b.is_zero() {
            return Poly::zero(self.field);
        }
        let g = self.gcd(b).expect("nonzero inputs");
        (&self.div_exact(&g).expect("gcd divides") * b).monic()
    }

    /// The coefficient window `phi_{d,delta}`: coefficient `i` of the result
    /// is the coefficient of `x^(d - delta + i)` in `self`, for `i <= delta`.
    pub fn phi_window(&self, d: usize, delta: usize) -> Result<Poly> {
        if d < delta {
            return Err(Error::BadWindow(format!("d = {d} < delta = {delta}")));
        }
        let lo = d - delta;
        Ok(Self::from_residues(self.field, (lo..=d).map(|i| self.coeff(i)).collect()))
    }

    /// Ascending coefficient list as plain integers.
    pub fn to_coeff_list(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }
}

/// Signed-degree convenience for the `phi_window` arguments, which the CLI
/// and tests receive as integers.
pub fn phi_window(p: &Poly, d: i64, delta: i64) -> Result<Poly> {
    if d < 0 || delta < 0 {
        return Err(Error::BadWindow(format!("negative window ({d}, {delta})")));
    }
    p.phi_window(d as usize, delta as usize)
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_residues(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_residues(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_residues(f, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_residues(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Dense linear algebra over `F_q` on row-major `Vec<Vec<u32>>` matrices.
pub mod fq {
    use super::PrimeField;

    /// Reduces `rows` in place to reduced row echelon form and returns the
    /// pivot columns. Zero rows are moved to the bottom.
    pub fn rref(field: PrimeField, rows: &mut [Vec<u32>]) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..ncols {
            if top == rows.len() {
                break;
            }
            let Some(p) = (top..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(top, p);
            let inv = field.inv(rows[top][col]).expect("nonzero pivot");
            for v in rows[top].iter_mut() {
                *v = field.mul(*v, inv);
            }
            let pivot_row = rows[top].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == top || row[col] == 0 {
                    continue;
                }
                let c = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = field.sub(*v, field.mul(c, pv));
                }
            }
            pivots.push(col);
            top += 1;
        }
        pivots
    }

    pub fn rank(field: PrimeField, rows: &[Vec<u32>]) -> usize {
        let mut m = rows.to_vec();
        rref(field, &mut m).len()
    }

    /// Basis of the row space (the nonzero rows of the rref).
    pub fn row_basis(field: PrimeField, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut m = rows.to_vec();
        let r = rref(field, &mut m).len();
        m.truncate(r);
        m
    }

    /// Basis of `{v : rows * v^T = 0}` for a matrix with `ncols` columns.
    pub fn right_kernel(field: PrimeField, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
        let mut m = rows.to_vec();
        let pivots = rref(field, &mut m);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; ncols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(m[i][fc]);
                }
                v
            })
            .collect()
    }

    pub fn weight(v: &[u32]) -> usize {
        v.iter().filter(|&&c| c != 0).count()
    }
}
