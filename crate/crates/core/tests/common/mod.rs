#![allow(dead_code)]

use convw::polymat::PolyMatrix;
use convw::{new_code, ConvolutionalCode, Poly, PolyVector, PrimeField};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn field(q: u64) -> PrimeField {
    PrimeField::new(q).unwrap()
}

pub fn code(q: u64, rows: &[&[&[u64]]]) -> ConvolutionalCode {
    let rows: Vec<Vec<Vec<u64>>> = rows.iter().map(|r| r.iter().map(|c| c.to_vec()).collect()).collect();
    ConvolutionalCode::from_coeffs(field(q), &rows).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_poly(rng: &mut ChaCha8Rng, f: PrimeField, max_degree: usize) -> Poly {
    let coeffs: Vec<u32> = (0..=max_degree).map(|_| rng.gen_range(0..f.order())).collect();
    Poly::from_residues(f, coeffs)
}

/// A random code with the given shape whose row degrees sum to at most
/// `max_delta`; `None` when the drawn rows are dependent.
pub fn random_code(rng: &mut ChaCha8Rng, q: u64, n: usize, k: usize, max_delta: usize) -> Option<ConvolutionalCode> {
    let f = field(q);
    let mut left = max_delta;
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let d = rng.gen_range(0..=left.min(2));
        left -= d;
        let mut entries: Vec<Poly> = (0..n).map(|_| random_poly(rng, f, d)).collect();
        let j = rng.gen_range(0..n);
        let mut top = entries[j].coeffs().to_vec();
        top.resize(d + 1, 0);
        top[d] = rng.gen_range(1..f.order());
        entries[j] = Poly::from_residues(f, top);
        rows.push(PolyVector::new(f, entries));
    }
    new_code(f, n, &rows).ok()
}

/// Draws until a code is found.
pub fn any_code(rng: &mut ChaCha8Rng, qs: &[u64], max_n: usize, max_k: usize, max_delta: usize) -> ConvolutionalCode {
    loop {
        let q = *qs.choose(rng).unwrap();
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=max_k.min(n));
        if let Some(c) = random_code(rng, q, n, k, max_delta) {
            return c;
        }
    }
}

/// A random unimodular `k x k` matrix: a product of elementary row
/// operations, unit scalings and a permutation.
pub fn random_unimodular(rng: &mut ChaCha8Rng, f: PrimeField, k: usize) -> PolyMatrix {
    let mut u = PolyMatrix::identity(f, k);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let rows: Vec<PolyVector> = perm.iter().map(|&i| u.row(i).scale(rng.gen_range(1..f.order()))).collect();
    u = PolyMatrix::from_rows(f, &rows).unwrap();
    if k > 1 {
        for _ in 0..3 {
            let i = rng.gen_range(0..k);
            let mut j = rng.gen_range(0..k);
            while j == i {
                j = rng.gen_range(0..k);
            }
            let p = random_poly(rng, f, 1);
            let mut rows = u.row_vectors();
            rows[i] = rows[i].add(&rows[j].mul_poly(&p));
            u = PolyMatrix::from_rows(f, &rows).unwrap();
        }
    }
    u
}

pub fn word_degree(w: &PolyVector) -> usize {
    w.degree().unwrap_or(0)
}
