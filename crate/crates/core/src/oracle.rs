//! Brute-force reference computations for cross-checking the searches.
//!
//! Everything here works on raw coefficient data with the field and
//! polynomial primitives only: codewords are formed as `u G` by explicit
//! multiplication and independence is tested with F_q rank computations.

use crate::algebra::{fq, Poly, PrimeField};
use crate::code::{BlockCode, ConvolutionalCode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_degree: usize,
    pub cap: u128,
}

impl OracleConfig {
    pub fn new(max_degree: usize) -> Self {
        OracleConfig { max_degree, cap: 50_000_000 }
    }
}

fn check_cap(needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        return Err(Error::OracleTooLarge { needed, cap });
    }
    Ok(())
}

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Raw generator rows as polynomials.
fn rows_of(code: &ConvolutionalCode) -> Vec<Vec<Poly>> {
    let g = code.generator();
    (0..g.rows()).map(|i| (0..g.cols()).map(|j| g.get(i, j).clone()).collect()).collect()
}

/// A codeword flattened to coefficient positions `(j, t) -> t * n + j`.
#[derive(Debug, Clone)]
struct Word {
    poly: Vec<Poly>,
    flat: Vec<u32>,
}

impl Word {
    fn weight(&self) -> usize {
        self.flat.iter().filter(|&&c| c != 0).count()
    }

    fn degree(&self) -> Option<usize> {
        self.poly.iter().filter_map(Poly::degree).max()
    }
}

fn flatten(f: PrimeField, poly: &[Poly], width: usize) -> Vec<u32> {
    let n = poly.len();
    let mut out = vec![0u32; n * width];
    for (j, p) in poly.iter().enumerate() {
        for (t, &c) in p.coeffs().iter().enumerate() {
            if t < width {
                out[t * n + j] = f.reduce(c as u64);
            }
        }
    }
    out
}

/// Every `u` with entries of degree at most `du`, as coefficient vectors.
fn all_inputs(f: PrimeField, k: usize, du: usize) -> Vec<Vec<Poly>> {
    let len = k * (du + 1);
    let q = f.order();
    let total = (q as u128).pow(len as u32) as usize;
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0u32; len];
    for _ in 0..total {
        let u: Vec<Poly> = (0..k).map(|i| Poly::from_residues(f, digits[i * (du + 1)..(i + 1) * (du + 1)].to_vec())).collect();
        out.push(u);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    out
}

fn times(g: &[Vec<Poly>], u: &[Poly], f: PrimeField) -> Vec<Poly> {
    let n = g[0].len();
    (0..n)
        .map(|j| u.iter().zip(g).fold(Poly::zero(f), |acc, (ui, row)| &acc + &(ui * &row[j])))
        .collect()
}

/// Nonzero codewords `u G` with `deg u_i <= du`, one per scalar class
/// (first nonzero flattened coefficient equal to 1), and optionally only
/// those of degree at most `max_word_degree`.
fn codewords(code: &ConvolutionalCode, du: usize, max_word_degree: Option<usize>, cap: u128) -> Result<Vec<Word>> {
    let f = code.field();
    let k = code.k();
    check_cap((f.order() as u128).saturating_pow((k * (du + 1)) as u32), cap)?;
    let g = rows_of(code);
    let width = du + code.delta1() + 1;
    let mut out = Vec::new();
    for u in all_inputs(f, k, du) {
        let c = times(&g, &u, f);
        let flat = flatten(f, &c, width);
        match flat.iter().find(|&&x| x != 0) {
            Some(&1) => {}
            _ => continue,
        }
        let w = Word { poly: c, flat };
        if max_word_degree.is_some_and(|m| w.degree().unwrap_or(0) > m) {
            continue;
        }
        out.push(w);
    }
    out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.flat.cmp(&b.flat)));
    Ok(out)
}

/// Minimum weight over `u G` with `deg u_i <= D`.
pub fn oracle_dfree(code: &ConvolutionalCode, cfg: &OracleConfig) -> Result<usize> {
    let ws = codewords(code, cfg.max_degree, None, cfg.cap)?;
    Ok(ws.iter().map(Word::weight).min().expect("a nonzero code has nonzero codewords"))
}

/// F_q[x]-independence of `r` vectors of degree at most `d`: the shifts
/// `x^j w_i` for `j <= (r-1) d` must be F_q-independent.
fn poly_independent(f: PrimeField, ws: &[&Word], d: usize) -> bool {
    let r = ws.len();
    let shifts = (r - 1) * d;
    let width = d + shifts + 1;
    let mut rows = Vec::with_capacity(r * (shifts + 1));
    for w in ws {
        for s in 0..=shifts {
            let shifted: Vec<Poly> = w.poly.iter().map(|p| p.shift(s)).collect();
            rows.push(flatten(f, &shifted, width));
        }
    }
    fq::rank(f, &rows) == rows.len()
}

fn union_count(ws: &[&Word]) -> usize {
    let len = ws[0].flat.len();
    (0..len).filter(|&i| ws.iter().any(|w| w.flat[i] != 0)).count()
}

/// Branch and bound over increasing index tuples of `words`, accepting
/// tuples for which `ok` holds, minimizing the union support.
fn min_tuple(words: &[Word], r: usize, ok: &dyn Fn(&[&Word]) -> bool, prefix_ok: &dyn Fn(&[&Word]) -> bool) -> Option<usize> {
    fn rec(
        words: &[Word],
        r: usize,
        start: usize,
        cur: &mut Vec<usize>,
        best: &mut Option<usize>,
        ok: &dyn Fn(&[&Word]) -> bool,
        prefix_ok: &dyn Fn(&[&Word]) -> bool,
    ) {
        let sel: Vec<&Word> = cur.iter().map(|&i| &words[i]).collect();
        if !sel.is_empty() {
            let u = union_count(&sel);
            if best.is_some_and(|b| u + (r - cur.len()) >= b) {
                return;
            }
            if cur.len() == r {
                if ok(&sel) {
                    *best = Some(u);
                }
                return;
            }
            if !prefix_ok(&sel) {
                return;
            }
        }
        for i in start..words.len() {
            cur.push(i);
            rec(words, r, i + 1, cur, best, ok, prefix_ok);
            cur.pop();
        }
    }
    let mut best = None;
    rec(words, r, 0, &mut Vec::new(), &mut best, ok, prefix_ok);
    best
}

/// `d_r` over all `r`-tuples of codewords of degree at most `D`.
pub fn oracle_generalized_weight(code: &ConvolutionalCode, r: usize, cfg: &OracleConfig) -> Result<Option<usize>> {
    let f = code.field();
    let d = cfg.max_degree;
    let ws = codewords(code, d, Some(d), cfg.cap)?;
    check_cap(binomial(ws.len() as u128, r as u128), cfg.cap)?;
    let ind = move |s: &[&Word]| poly_independent(f, s, d);
    Ok(min_tuple(&ws, r, &ind, &ind))
}

fn fq_independent(f: PrimeField, ws: &[&Word]) -> bool {
    let rows: Vec<Vec<u32>> = ws.iter().map(|w| w.flat.clone()).collect();
    fq::rank(f, &rows) == rows.len()
}

/// `d'_r` over all `r`-dimensional F_q-subspaces of codewords of degree at most `D`.
pub fn oracle_ghw(code: &ConvolutionalCode, r: usize, cfg: &OracleConfig) -> Result<Option<usize>> {
    let f = code.field();
    let d = cfg.max_degree;
    let ws = codewords(code, d, Some(d), cfg.cap)?;
    check_cap(binomial(ws.len() as u128, r as u128), cfg.cap)?;
    let ind = move |s: &[&Word]| fq_independent(f, s);
    Ok(min_tuple(&ws, r, &ind, &ind))
}

fn det(f: PrimeField, m: &[Vec<Poly>]) -> Poly {
    let k = m.len();
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(f);
    for j in 0..k {
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][j] * &det(f, &minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Degree of the gcd of the full-size minors; `None` when all vanish.
fn minor_gcd_degree(f: PrimeField, rows: &[Vec<Poly>]) -> Option<usize> {
    let k = rows.len();
    let n = rows[0].len();
    let mut g: Option<Poly> = None;
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<Poly>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let d = det(f, &sub);
        if !d.is_zero() {
            g = Some(match g {
                None => d.monic(),
                Some(h) => h.gcd(&d).unwrap(),
            });
        }
        let mut i = k;
        loop {
            if i == 0 {
                return g.and_then(|p| p.degree());
            }
            i -= 1;
            if cols[i] < n - k + i {
                cols[i] += 1;
                for l in i + 1..k {
                    cols[l] = cols[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `wt(C)` over bases made of codewords of degree at most `D`. A tuple of
/// codewords is a basis when its minors have the same gcd as the minors of
/// the generator.
pub fn oracle_code_weight(code: &ConvolutionalCode, cfg: &OracleConfig) -> Result<Option<usize>> {
    let f = code.field();
    let d = cfg.max_degree;
    let k = code.k();
    let target = minor_gcd_degree(f, &rows_of(code));
    let ws = codewords(code, d, Some(d), cfg.cap)?;
    check_cap(binomial(ws.len() as u128, k as u128), cfg.cap)?;
    let prefix = move |s: &[&Word]| poly_independent(f, s, d);
    let ok = move |s: &[&Word]| {
        let rows: Vec<Vec<Poly>> = s.iter().map(|w| w.poly.clone()).collect();
        let g = minor_gcd_degree(f, &rows);
        g.is_some() && g == target
    };
    Ok(min_tuple(&ws, k, &ok, &prefix))
}

/// `d_r^H` of a block code over all `r`-subsets of its nonzero codewords.
pub fn oracle_block_ghw(code: &BlockCode, r: usize, cap: u128) -> Result<Option<usize>> {
    let f = code.field;
    let k = code.basis.len();
    check_cap((f.order() as u128).saturating_pow(k as u32), cap)?;
    let mut words = Vec::new();
    let total = (f.order() as u128).pow(k as u32) as usize;
    let mut digits = vec![0u32; k];
    for _ in 0..total {
        let mut v = vec![0u32; code.n];
        for (c, b) in digits.iter().zip(&code.basis) {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            let poly = v.iter().map(|&c| Poly::constant(f, c)).collect();
            words.push(Word { poly, flat: v });
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < f.order() {
                break;
            }
            *d = 0;
        }
    }
    words.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.flat.cmp(&b.flat)));
    check_cap(binomial(words.len() as u128, r as u128), cap)?;
    let ind = move |s: &[&Word]| fq_independent(f, s);
    Ok(min_tuple(&words, r, &ind, &ind))
}
