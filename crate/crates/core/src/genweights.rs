//! Generalized weights `d_r`, generalized Hamming weights `d'_r`, the weight
//! `wt(C)`, minimal codewords, and the coefficient-window reduction step.
//!
//! Every search result carries a [`Certificate`]: either a reason why the
//! value is exact, or `UpperBound` with the degree cap that was used.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::algebra::{fq, PrimeField};
use crate::code::{BlockCode, ConvolutionalCode};
use crate::error::{Error, Result};
use crate::metrics::{column_distance, enumerate_codewords, free_distance, singleton_bound, SupportBits};
use crate::polymat::{mat_rank, mat_window, PolyMatrix, PolyVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactReason {
    /// The search covered every degree up to the theorem-level bound.
    TheoremBoundExhausted,
    /// The value equals the lower bound `d_free + r - 1`.
    LowerBoundMet,
    /// `delta = 0`: reduction to the block code `C[0]`.
    FormulaDelta0,
    /// Forced by the parameters of an MDS code.
    FormulaMDS,
    /// `d_1 = d_free`, computed on the state graph.
    FreeDistance,
    /// A rank-one code has a unique basis up to scalars.
    RankOneBasis,
    /// sMDS code with MDP reverse, searched up to the degree where minimal
    /// generators must live.
    SmdsDegreeBound,
}

impl ExactReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExactReason::TheoremBoundExhausted => "TheoremBoundExhausted",
            ExactReason::LowerBoundMet => "LowerBoundMet",
            ExactReason::FormulaDelta0 => "FormulaDelta0",
            ExactReason::FormulaMDS => "FormulaMDS",
            ExactReason::FreeDistance => "FreeDistance",
            ExactReason::RankOneBasis => "RankOneBasis",
            ExactReason::SmdsDegreeBound => "SmdsDegreeBound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    Exact(ExactReason),
    UpperBound { max_degree: usize },
}

impl Certificate {
    pub fn is_exact(&self) -> bool {
        matches!(self, Certificate::Exact(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Certificate::Exact(r) => r.as_str(),
            Certificate::UpperBound { .. } => "UpperBound",
        }
    }
}

/// A weight together with a witness tuple (possibly empty when the value
/// comes from a formula) and its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightResult {
    pub value: usize,
    pub witness: Vec<PolyVector>,
    pub certificate: Certificate,
}

impl WeightResult {
    pub fn is_exact(&self) -> bool {
        self.certificate.is_exact()
    }
}

impl Serialize for WeightResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeightResult", 4)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("exact", &self.is_exact())?;
        st.serialize_field("certificate", self.certificate.name())?;
        let w: Vec<Vec<Vec<u64>>> = self.witness.iter().map(PolyVector::to_coeff_lists).collect();
        st.serialize_field("witness", &w)?;
        st.end()
    }
}

/// Degree cap on searched codewords and an optional cap on visited nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_degree: usize,
    pub node_cap: Option<u64>,
}

impl SearchBudget {
    pub fn new(max_degree: usize) -> Self {
        SearchBudget { max_degree, node_cap: None }
    }

    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.node_cap = Some(cap);
        self
    }

    pub fn default_for(code: &ConvolutionalCode) -> Self {
        Self::new(default_max_degree(code))
    }
}

/// Heuristic degree cap `max(delta_1 + 2, ceil(delta/k) + ceil(delta/max(1, n-k)) + 1)`.
pub fn default_max_degree(code: &ConvolutionalCode) -> usize {
    let (n, k, delta) = (code.n(), code.k(), code.delta());
    let m = delta.div_ceil(k) + delta.div_ceil((n - k).max(1)) + 1;
    (code.delta1() + 2).max(m)
}

/// `((r+2) q^(delta1 k r) + 1)(n(delta1+1) - k + r) + delta1`, or 0 when `delta1 = 0`.
pub fn degree_bound(n: usize, k: usize, delta1: usize, q: u64, r: usize) -> BigUint {
    if delta1 == 0 {
        return BigUint::from(0u32);
    }
    let e = (delta1 * k * r) as u32;
    let p = BigUint::from(q).pow(e);
    let a = BigUint::from(r + 2) * p + 1u32;
    let b = BigUint::from(n * (delta1 + 1) + r) - BigUint::from(k);
    a * b + BigUint::from(delta1)
}

// ---------------------------------------------------------------------------
// block codes

/// `d_r^H` of a block code: the least `|S|` such that the subcode supported
/// on `S` has dimension at least `r`. Returns the value and `r` independent
/// codewords supported on an optimal `S`.
pub fn block_ghw(code: &BlockCode, r: usize) -> Result<(usize, Vec<Vec<u32>>)> {
    let k = code.dim();
    if r == 0 || r > k {
        return Err(Error::RankOutOfRange { r, k });
    }
    let n = code.n;
    if n > 24 {
        return Err(Error::NotApplicable(format!("block length {n} is too large for subset search")));
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for s in masks {
        if (s.count_ones() as usize) < r {
            continue;
        }
        let outside: Vec<usize> = (0..n).filter(|&j| s >> j & 1 == 0).collect();
        // m with m * G restricted to `outside` equal to zero
        let rows: Vec<Vec<u32>> = outside.iter().map(|&j| code.basis.iter().map(|b| b[j]).collect()).collect();
        let ker = if rows.is_empty() {
            (0..k).map(|i| (0..k).map(|l| u32::from(i == l)).collect()).collect()
        } else {
            fq::right_kernel(code.field, &rows, k)
        };
        if ker.len() >= r {
            let words: Vec<Vec<u32>> = ker[..r].iter().map(|m| combine(code.field, m, &code.basis)).collect();
            let value = (0..n).filter(|&j| words.iter().any(|w| w[j] != 0)).count();
            return Ok((value, words));
        }
    }
    unreachable!("the full coordinate set supports the whole code")
}

fn combine(f: PrimeField, m: &[u32], basis: &[Vec<u32>]) -> Vec<u32> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![0u32; n];
    for (&c, b) in m.iter().zip(basis) {
        if c != 0 {
            for (o, &v) in out.iter_mut().zip(b) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
    }
    out
}

fn constant_vector(f: PrimeField, v: &[u32]) -> PolyVector {
    PolyVector::from_coeffs(f, &v.iter().map(|&c| vec![c as u64]).collect::<Vec<_>>())
}

// ---------------------------------------------------------------------------
// minimal codewords

/// A search candidate: a codeword, its support, and whether its shift down
/// by `x` is again a codeword.
#[derive(Debug, Clone)]
struct Candidate {
    word: PolyVector,
    bits: SupportBits,
    weight: usize,
    degree: usize,
    shifted: bool,
}

fn candidates_from(code: &ConvolutionalCode, words: Vec<PolyVector>, max_degree: usize) -> Vec<Candidate> {
    let noncat = code.is_noncatastrophic();
    let mut out: Vec<Candidate> = words
        .into_iter()
        .map(|w| {
            let shifted = match w.unshift(1) {
                Some(v) if w.valuation().unwrap_or(0) >= 1 => noncat || code.contains(&v).unwrap_or(false),
                _ => false,
            };
            let bits = SupportBits::of(&w, max_degree);
            Candidate { weight: bits.count(), degree: w.degree().unwrap_or(0), bits, word: w, shifted }
        })
        .collect();
    out.sort_by(|a, b| (a.degree, a.weight, &a.word).cmp(&(b.degree, b.weight, &b.word)));
    out
}

fn minimal_words(code: &ConvolutionalCode, max_degree: usize, max_weight: usize) -> Vec<PolyVector> {
    let all = enumerate_codewords(code, max_degree, max_weight);
    let mut accepted: Vec<(SupportBits, PolyVector)> = Vec::new();
    for c in all {
        if accepted.iter().any(|(s, _)| s.is_subset(&c.support)) {
            continue;
        }
        accepted.push((c.support, c.word.normalized()));
    }
    let mut out: Vec<PolyVector> = accepted.into_iter().map(|(_, w)| w).collect();
    out.sort_by(|a, b| (a.degree(), a.weight(), a).cmp(&(b.degree(), b.weight(), b)));
    out
}

/// All codewords of degree at most `max_degree` whose support is minimal,
/// one normalized representative per support, ordered by degree, weight
/// and then lexicographically.
pub fn enumerate_minimal_codewords(code: &ConvolutionalCode, max_degree: usize) -> Vec<PolyVector> {
    minimal_words(code, max_degree, code.n() * (max_degree + 1))
}

// ---------------------------------------------------------------------------
// tuple search

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// F_q[x]-independent tuples.
    Rank,
    /// F_q-independent tuples.
    Subspace,
    /// Module bases of the code.
    Basis,
}

struct Search<'a> {
    code: &'a ConvolutionalCode,
    cands: &'a [Candidate],
    r: usize,
    mode: Mode,
    max_degree: usize,
    shared_best: AtomicUsize,
    nodes: AtomicU64,
    node_cap: Option<u64>,
    aborted: AtomicBool,
}

struct Frame {
    union: SupportBits,
    private: Vec<SupportBits>,
    idx: Vec<usize>,
    // reduced echelon rows of the flattened coefficient vectors (Subspace mode)
    echelon: Vec<(usize, Vec<u32>)>,
}

pub(crate) fn flatten(v: &PolyVector, max_degree: usize) -> Vec<u32> {
    let n = v.len();
    let mut out = vec![0u32; n * (max_degree + 1)];
    for (j, p) in v.entries().iter().enumerate() {
        for (t, &c) in p.coeffs().iter().enumerate() {
            out[t * n + j] = c;
        }
    }
    out
}

/// Reduces `v` against echelon rows; returns the pivot and the reduced row
/// when `v` is independent of them.
fn echelon_insert(f: PrimeField, rows: &[(usize, Vec<u32>)], mut v: Vec<u32>) -> Option<(usize, Vec<u32>)> {
    for (p, row) in rows {
        let c = v[*p];
        if c != 0 {
            for (a, &b) in v.iter_mut().zip(row) {
                *a = f.sub(*a, f.mul(c, b));
            }
        }
    }
    let p = v.iter().position(|&c| c != 0)?;
    let inv = f.inv(v[p]).unwrap();
    for a in v.iter_mut() {
        *a = f.mul(*a, inv);
    }
    Some((p, v))
}

/// F_q[x]-independence of a tuple: evaluation at the points of `F_q`
/// first, exact fraction-free rank otherwise.
pub(crate) fn independent(f: PrimeField, words: &[&PolyVector]) -> bool {
    let r = words.len();
    if r <= 1 {
        return words.iter().all(|w| !w.is_zero());
    }
    for a in 0..f.order() {
        let rows: Vec<Vec<u32>> = words.iter().map(|w| w.entries().iter().map(|p| p.eval(a)).collect()).collect();
        if fq::rank(f, &rows) == r {
            return true;
        }
    }
    let owned: Vec<PolyVector> = words.iter().map(|w| (*w).clone()).collect();
    let m = PolyMatrix::from_rows(f, &owned).expect("equal lengths");
    mat_rank(&m) == r
}

fn is_basis(code: &ConvolutionalCode, words: &[&PolyVector]) -> bool {
    let f = code.field();
    let mut rows = Vec::with_capacity(words.len());
    for w in words {
        match code.coordinates(w) {
            Ok(Some(u)) => rows.push(u),
            _ => return false,
        }
    }
    let u = PolyMatrix::from_rows(f, &rows).expect("shape");
    matches!(crate::polymat::det(&u), Ok(d) if d.degree() == Some(0))
}

impl<'a> Search<'a> {
    fn lower_bound(&self, fr: &Frame) -> usize {
        fr.union.count() + (self.r - fr.idx.len())
    }

    fn count_node(&self) -> bool {
        if let Some(cap) = self.node_cap {
            let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if n > cap {
                self.aborted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    /// Tries to extend `fr` by candidate `i`; returns the extended frame.
    fn extend(&self, fr: &Frame, i: usize) -> Option<Frame> {
        let c = &self.cands[i];
        let mut private: Vec<SupportBits> = Vec::with_capacity(fr.private.len() + 1);
        for p in &fr.private {
            let mut q = p.clone();
            q.subtract(&c.bits);
            if q.count() == 0 {
                return None;
            }
            private.push(q);
        }
        let mut mine = c.bits.clone();
        mine.subtract(&fr.union);
        if mine.count() == 0 {
            return None;
        }
        private.push(mine);
        let f = self.code.field();
        let mut echelon = Vec::new();
        match self.mode {
            Mode::Subspace => {
                let row = echelon_insert(f, &fr.echelon, flatten(&c.word, self.max_degree))?;
                echelon = fr.echelon.clone();
                // keep rows fully reduced against the new pivot
                for (_, r) in echelon.iter_mut() {
                    let k = r[row.0];
                    if k != 0 {
                        for (a, &b) in r.iter_mut().zip(&row.1) {
                            *a = f.sub(*a, f.mul(k, b));
                        }
                    }
                }
                echelon.push(row);
            }
            Mode::Rank | Mode::Basis => {
                let mut ws: Vec<&PolyVector> = fr.idx.iter().map(|&j| &self.cands[j].word).collect();
                ws.push(&c.word);
                if !independent(f, &ws) {
                    return None;
                }
            }
        }
        let mut idx = fr.idx.clone();
        idx.push(i);
        Some(Frame { union: fr.union.union(&c.bits), private, idx, echelon })
    }

    fn accept_leaf(&self, fr: &Frame) -> bool {
        match self.mode {
            Mode::Rank | Mode::Subspace => !fr.idx.iter().all(|&i| self.cands[i].shifted),
            Mode::Basis => {
                let ws: Vec<&PolyVector> = fr.idx.iter().map(|&i| &self.cands[i].word).collect();
                is_basis(self.code, &ws)
            }
        }
    }

    fn dfs(&self, fr: &Frame, local: &mut Option<(usize, Vec<usize>)>, limit: usize) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if fr.idx.len() == self.r {
            if self.accept_leaf(fr) {
                let v = fr.union.count();
                if local.as_ref().map_or(v < limit, |(b, _)| v < *b) {
                    *local = Some((v, fr.idx.clone()));
                    self.shared_best.fetch_min(v, Ordering::Relaxed);
                }
            }
            return;
        }
        let start = fr.idx.last().map_or(0, |&l| l + 1);
        let need = self.r - fr.idx.len();
        for i in start..self.cands.len() {
            if self.cands.len() - i < need {
                break;
            }
            if !self.count_node() {
                return;
            }
            let c = &self.cands[i];
            let lb = fr.union.union(&c.bits).count() + need - 1;
            let local_best = local.as_ref().map_or(limit, |(b, _)| *b);
            if lb >= local_best || lb > self.shared_best.load(Ordering::Relaxed) {
                continue;
            }
            if let Some(next) = self.extend(fr, i) {
                debug_assert!(self.lower_bound(&next) >= lb);
                self.dfs(&next, local, limit);
            }
        }
    }

    /// Minimum over tuples with value `< limit`, with the lexicographically
    /// least index tuple among minimizers. The flag reports completeness.
    fn run(&self, limit: usize) -> (Option<(usize, Vec<usize>)>, bool) {
        let n = self.code.n();
        let root = Frame {
            union: SupportBits::empty(n * (self.max_degree + 1)),
            private: Vec::new(),
            idx: Vec::new(),
            echelon: Vec::new(),
        };
        self.shared_best.store(limit, Ordering::Relaxed);
        let per_first = |i: usize| -> Option<(usize, Vec<usize>)> {
            if !self.count_node() {
                return None;
            }
            let c = &self.cands[i];
            if c.weight + self.r > limit || c.weight + self.r - 1 > self.shared_best.load(Ordering::Relaxed) {
                return None;
            }
            let fr = self.extend(&root, i)?;
            let mut local = None;
            self.dfs(&fr, &mut local, limit);
            local
        };
        let best = if self.node_cap.is_some() {
            (0..self.cands.len()).filter_map(per_first).min()
        } else {
            (0..self.cands.len()).into_par_iter().filter_map(per_first).min()
        };
        (best, !self.aborted.load(Ordering::Relaxed))
    }
}

struct SearchOutcome {
    value: usize,
    witness: Vec<PolyVector>,
    complete: bool,
}

#[allow(clippy::too_many_arguments)]
fn search(
    code: &ConvolutionalCode,
    pool: impl Fn(usize) -> Vec<PolyVector>,
    r: usize,
    mode: Mode,
    budget: &SearchBudget,
    ub: Option<(usize, Vec<PolyVector>)>,
    hint: Option<usize>,
) -> Result<SearchOutcome> {
    let d = budget.max_degree;
    let n = code.n();
    let unbounded = n * (d + 1) + 1;
    let ub_value = ub.as_ref().map_or(unbounded, |u| u.0);
    // first pass below the hint, then below the known upper bound
    let mut passes = vec![];
    if let Some(h) = hint.filter(|&h| h + 1 < ub_value) {
        passes.push(h + 1);
    }
    passes.push(ub_value);
    let mut complete = true;
    for limit in passes {
        if limit < r + 1 {
            continue;
        }
        let cap = limit - 1 - (r - 1);
        let words = pool(cap);
        let cands = candidates_from(code, words, d);
        let s = Search {
            code,
            cands: &cands,
            r,
            mode,
            max_degree: d,
            shared_best: AtomicUsize::new(limit),
            nodes: AtomicU64::new(0),
            node_cap: budget.node_cap,
            aborted: AtomicBool::new(false),
        };
        let (best, done) = s.run(limit);
        complete &= done;
        if let Some((v, idx)) = best {
            let witness = idx.iter().map(|&i| cands[i].word.clone()).collect();
            return Ok(SearchOutcome { value: v, witness, complete });
        }
    }
    match ub {
        Some((v, w)) => Ok(SearchOutcome { value: v, witness: w, complete }),
        None => Err(Error::BudgetExhausted(format!("no admissible {r}-tuple of degree at most {d}"))),
    }
}

fn union_support_size(ws: &[PolyVector]) -> usize {
    crate::metrics::tuple_support(ws).len()
}

/// Best `r`-subset of generator rows of degree at most `d`.
fn row_subset_bound(code: &ConvolutionalCode, r: usize, d: usize) -> Option<(usize, Vec<PolyVector>)> {
    let rows: Vec<PolyVector> = code.generators().into_iter().filter(|g| g.degree().unwrap_or(0) <= d).collect();
    if rows.len() < r {
        return None;
    }
    let mut best: Option<(usize, Vec<PolyVector>)> = None;
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let ws: Vec<PolyVector> = idx.iter().map(|&i| rows[i].clone()).collect();
        let v = union_support_size(&ws);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, ws));
        }
        // next combination
        let mut i = r;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < rows.len() - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// classification helpers shared with `classify`

pub(crate) fn is_mds_code(code: &ConvolutionalCode) -> bool {
    let b = singleton_bound(code.n(), code.k(), code.delta()).expect("valid parameters");
    free_distance(code).value == b
}

pub(crate) fn is_mdp_code(code: &ConvolutionalCode) -> Option<bool> {
    let (n, k, delta) = (code.n(), code.k(), code.delta());
    if k == n {
        return None;
    }
    let l = delta / k + delta / (n - k);
    match crate::metrics::column_distances(code, l) {
        Ok(p) => Some(p.iter().enumerate().all(|(j, &d)| d == (n - k) * (j + 1) + 1)),
        Err(_) => Some(false),
    }
}

pub(crate) fn smds_parameter(code: &ConvolutionalCode) -> Option<usize> {
    let (n, k, delta) = (code.n(), code.k(), code.delta());
    (k < n).then(|| delta / k + delta.div_ceil(n - k))
}

pub(crate) fn is_smds_code(code: &ConvolutionalCode) -> Option<bool> {
    let m = smds_parameter(code)?;
    Some(match column_distance(code, m) {
        Ok(d) => d == free_distance(code).value,
        Err(_) => false,
    })
}

/// The `d_r` forced by the parameters of an MDS code, when one is.
pub(crate) fn mds_formula(n: usize, k: usize, delta: usize, r: usize) -> Option<usize> {
    if k == n {
        return Some(delta + r);
    }
    if delta.is_multiple_of(k) {
        return Some(n * (delta / k + 1) - k + r);
    }
    let a = k * delta.div_ceil(k) - delta;
    (r <= a).then(|| (n - k) * (delta / k + 1) + delta + r)
}

fn smds_certified(code: &ConvolutionalCode, max_degree: usize) -> bool {
    let Some(m) = smds_parameter(code) else {
        return false;
    };
    if max_degree < m || is_smds_code(code) != Some(true) {
        return false;
    }
    match code.reverse_code() {
        Ok(rev) => is_mdp_code(&rev) == Some(true),
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// generalized weights

fn check_rank(code: &ConvolutionalCode, r: usize) -> Result<()> {
    if r == 0 || r > code.k() {
        return Err(Error::RankOutOfRange { r, k: code.k() });
    }
    Ok(())
}

fn delta0_weight(code: &ConvolutionalCode, r: usize) -> Result<WeightResult> {
    let f = code.field();
    let (v, words) = block_ghw(&code.czero(), r)?;
    Ok(WeightResult {
        value: v,
        witness: words.iter().map(|w| constant_vector(f, w)).collect(),
        certificate: Certificate::Exact(ExactReason::FormulaDelta0),
    })
}

/// The minimum of `|tuple_support|` over F_q[x]-independent `r`-tuples of
/// codewords of degree at most the budget, searched over minimal codewords.
/// No certificate is attached.
pub fn bounded_generalized_weight(code: &ConvolutionalCode, r: usize, budget: &SearchBudget) -> Result<(usize, Vec<PolyVector>, bool)> {
    check_rank(code, r)?;
    let d = budget.max_degree;
    let ub = row_subset_bound(code, r, d);
    let hint = code.n() * (code.delta1() + 1) - code.k() + r;
    let out = search(code, |cap| minimal_words(code, d, cap), r, Mode::Rank, budget, ub, Some(hint))?;
    Ok((out.value, out.witness, out.complete))
}

/// `d_r(C)` with a certificate.
pub fn generalized_weight(code: &ConvolutionalCode, r: usize, budget: &SearchBudget) -> Result<WeightResult> {
    check_rank(code, r)?;
    if code.delta() == 0 {
        return delta0_weight(code, r);
    }
    let q = code.field().order() as u64;
    let theorem = degree_bound(code.n(), code.k(), code.delta1(), q, r);
    let run_search = r > 1 || BigUint::from(budget.max_degree) >= theorem;
    let dfree = free_distance(code);
    if !run_search {
        return Ok(WeightResult {
            value: dfree.value,
            witness: vec![dfree.codeword],
            certificate: Certificate::Exact(ExactReason::FreeDistance),
        });
    }
    let found = bounded_generalized_weight(code, r, budget);
    let (value, witness, complete) = match found {
        Ok(x) => x,
        Err(Error::BudgetExhausted(_)) => (usize::MAX, Vec::new(), false),
        Err(e) => return Err(e),
    };
    if complete && BigUint::from(budget.max_degree) >= theorem && value != usize::MAX {
        return Ok(WeightResult { value, witness, certificate: Certificate::Exact(ExactReason::TheoremBoundExhausted) });
    }
    if r == 1 {
        return Ok(WeightResult {
            value: dfree.value,
            witness: vec![dfree.codeword],
            certificate: Certificate::Exact(ExactReason::FreeDistance),
        });
    }
    let lower = dfree.value + r - 1;
    if value == lower {
        return Ok(WeightResult { value, witness, certificate: Certificate::Exact(ExactReason::LowerBoundMet) });
    }
    let (n, k, delta) = (code.n(), code.k(), code.delta());
    if is_mds_code(code) {
        if let Some(v) = mds_formula(n, k, delta, r) {
            let witness = if v == value { witness } else { Vec::new() };
            return Ok(WeightResult { value: v, witness, certificate: Certificate::Exact(ExactReason::FormulaMDS) });
        }
    }
    if value == usize::MAX {
        return Err(Error::BudgetExhausted(format!("no rank-{r} tuple of degree at most {}", budget.max_degree)));
    }
    if complete && smds_certified(code, budget.max_degree) {
        return Ok(WeightResult { value, witness, certificate: Certificate::Exact(ExactReason::SmdsDegreeBound) });
    }
    Ok(WeightResult { value, witness, certificate: Certificate::UpperBound { max_degree: budget.max_degree } })
}

/// `d_1, ..., d_k`.
pub fn weight_hierarchy(code: &ConvolutionalCode, budget: &SearchBudget) -> Result<Vec<WeightResult>> {
    (1..=code.k()).map(|r| generalized_weight(code, r, budget)).collect()
}

// ---------------------------------------------------------------------------
// generalized Hamming weights

/// Greedy `r`-dimensional subspace from shifts of the generators and of a
/// minimum-weight codeword, within degree `d`.
fn greedy_subspace(code: &ConvolutionalCode, r: usize, d: usize, extra: &[PolyVector]) -> Option<(usize, Vec<PolyVector>)> {
    let f = code.field();
    let mut pool: Vec<PolyVector> = Vec::new();
    for g in extra.iter().cloned().chain(code.generators()) {
        let Some(gd) = g.degree() else { continue };
        if gd > d {
            continue;
        }
        for s in 0..=(d - gd) {
            pool.push(g.shift(s));
        }
    }
    let mut chosen: Vec<PolyVector> = Vec::new();
    let mut echelon: Vec<(usize, Vec<u32>)> = Vec::new();
    let n = code.n();
    let mut union = SupportBits::empty(n * (d + 1));
    while chosen.len() < r {
        let mut best: Option<(usize, usize, (usize, Vec<u32>))> = None;
        for (i, w) in pool.iter().enumerate() {
            let Some(row) = echelon_insert(f, &echelon, flatten(w, d)) else { continue };
            let add = SupportBits::of(w, d).count_outside(&union);
            if best.as_ref().is_none_or(|b| add < b.0) {
                best = Some((add, i, row));
            }
        }
        let (_, i, row) = best?;
        let w = pool[i].clone();
        union.union_with(&SupportBits::of(&w, d));
        for (_, r0) in echelon.iter_mut() {
            let c = r0[row.0];
            if c != 0 {
                for (a, &b) in r0.iter_mut().zip(&row.1) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        echelon.push(row);
        chosen.push(w);
    }
    Some((union.count(), chosen))
}

/// `d'_r` of a code with `delta = 0`: an `r`-dimensional subspace splits
/// into degree layers inside `C[0]`, so the value is the least
/// `sum d^H_{r_t}(C[0])` over splittings of `r` into parts of size at most k.
fn ghw_delta0(code: &ConvolutionalCode, r: usize) -> Result<WeightResult> {
    let f = code.field();
    let block = code.czero();
    let k = block.dim();
    let ghw: Vec<(usize, Vec<Vec<u32>>)> = (1..=k).map(|i| block_ghw(&block, i)).collect::<Result<_>>()?;
    // best[m] = (cost, parts) for dimension m
    let mut best: Vec<Option<(usize, Vec<usize>)>> = vec![None; r + 1];
    best[0] = Some((0, Vec::new()));
    for m in 1..=r {
        for p in 1..=k.min(m) {
            if let Some((c, parts)) = &best[m - p] {
                let cost = c + ghw[p - 1].0;
                if best[m].as_ref().is_none_or(|b| cost < b.0) {
                    let mut parts = parts.clone();
                    parts.push(p);
                    best[m] = Some((cost, parts));
                }
            }
        }
    }
    let (value, mut parts) = best[r].clone().expect("k >= 1");
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let mut witness = Vec::new();
    for (t, &p) in parts.iter().enumerate() {
        for w in &ghw[p - 1].1 {
            witness.push(constant_vector(f, w).shift(t));
        }
    }
    Ok(WeightResult { value, witness, certificate: Certificate::Exact(ExactReason::FormulaDelta0) })
}

/// `d'_r(C)`: least support of an `r`-dimensional F_q-subspace of codewords
/// of degree at most the budget.
pub fn generalized_hamming_weight(code: &ConvolutionalCode, r: usize, budget: &SearchBudget) -> Result<WeightResult> {
    if r == 0 {
        return Err(Error::RankOutOfRange { r, k: code.k() });
    }
    if code.delta() == 0 {
        return ghw_delta0(code, r);
    }
    let d = budget.max_degree;
    let dfree = free_distance(code);
    let extra: Vec<PolyVector> = vec![dfree.codeword.clone()];
    let ub = greedy_subspace(code, r, d, &extra);
    let out = search(code, |cap| minimal_words(code, d, cap), r, Mode::Subspace, budget, ub, None)?;
    if r == 1 {
        return Ok(WeightResult {
            value: dfree.value,
            witness: vec![dfree.codeword],
            certificate: Certificate::Exact(ExactReason::FreeDistance),
        });
    }
    let certificate = if out.value == dfree.value + r - 1 {
        Certificate::Exact(ExactReason::LowerBoundMet)
    } else {
        Certificate::UpperBound { max_degree: d }
    };
    Ok(WeightResult { value: out.value, witness: out.witness, certificate })
}

// ---------------------------------------------------------------------------
// weight of a code

/// `wt(C)`: least support of the F_q-span of a module basis of the code,
/// over bases of codewords of degree at most the budget.
pub fn code_weight(code: &ConvolutionalCode, budget: &SearchBudget) -> Result<WeightResult> {
    let k = code.k();
    let gens = code.generators();
    if k == 1 {
        return Ok(WeightResult {
            value: gens[0].weight(),
            witness: gens,
            certificate: Certificate::Exact(ExactReason::RankOneBasis),
        });
    }
    if code.delta() == 0 {
        let f = code.field();
        let block = code.czero();
        return Ok(WeightResult {
            value: block.support().len(),
            witness: block.basis.iter().map(|b| constant_vector(f, b)).collect(),
            certificate: Certificate::Exact(ExactReason::FormulaDelta0),
        });
    }
    let d = budget.max_degree;
    let ub = Some((union_support_size(&gens), gens));
    let pool = |cap: usize| enumerate_codewords(code, d, cap).into_iter().map(|c| c.word.normalized()).collect();
    let out = search(code, pool, k, Mode::Basis, budget, ub, None)?;
    let dfree = free_distance(code).value;
    let mut certificate = Certificate::UpperBound { max_degree: d };
    if out.value == dfree + k - 1 {
        certificate = Certificate::Exact(ExactReason::LowerBoundMet);
    } else if smds_certified(code, d) {
        let dk = generalized_weight(code, k, budget)?;
        if dk.is_exact() && dk.value == out.value {
            certificate = Certificate::Exact(ExactReason::LowerBoundMet);
        }
    }
    Ok(WeightResult { value: out.value, witness: out.witness, certificate })
}

// ---------------------------------------------------------------------------
// minimalization

/// Replaces each member of an independent tuple by a minimal codeword with
/// smaller or equal support, keeping the F_q[x]-rank.
pub fn minimalize_tuple(code: &ConvolutionalCode, tuple: &[PolyVector], max_degree: usize) -> Result<Vec<PolyVector>> {
    let f = code.field();
    for w in tuple {
        if !code.contains(w)? {
            return Err(Error::ShapeError(format!("{w} is not a codeword")));
        }
    }
    let refs: Vec<&PolyVector> = tuple.iter().collect();
    if tuple.is_empty() || !independent(f, &refs) {
        return Err(Error::NotIndependent);
    }
    let cap = tuple.iter().map(PolyVector::weight).max().unwrap_or(0);
    let minimal = minimal_words(code, max_degree, cap);
    let width = code.n() * (tuple.iter().filter_map(PolyVector::degree).max().unwrap_or(0).max(max_degree) + 1);
    let bits = |w: &PolyVector| SupportBits::of(w, width / code.n() - 1);
    let min_bits: Vec<SupportBits> = minimal.iter().map(bits).collect();
    let mut out = tuple.to_vec();
    for i in 0..out.len() {
        loop {
            let u = out[i].clone();
            let ub = bits(&u);
            let Some(e_idx) = (0..minimal.len()).find(|&m| min_bits[m].is_subset(&ub)) else {
                return Err(Error::BudgetExhausted(format!("no minimal codeword of degree at most {max_degree} inside the support of {u}")));
            };
            let e = &minimal[e_idx];
            if min_bits[e_idx] == ub {
                break;
            }
            let mut trial = out.clone();
            trial[i] = e.clone();
            let refs: Vec<&PolyVector> = trial.iter().collect();
            if independent(f, &refs) {
                out[i] = e.clone();
                break;
            }
            // cancel one position of e inside u; the rank is kept for every alpha
            let (j, t) = e
                .entries()
                .iter()
                .enumerate()
                .find_map(|(j, p)| p.coeffs().iter().position(|&c| c != 0).map(|t| (j, t)))
                .expect("minimal codewords are nonzero");
            let alpha = f.mul(u.get(j).coeff(t), f.inv(e.get(j).coeff(t)).unwrap());
            out[i] = u.sub(&e.scale(alpha));
            debug_assert!(independent(f, &out.iter().collect::<Vec<_>>()));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// reduction step

/// Output of [`reduction_step`]: `M'` and the colliding pair `t < t'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub matrix: PolyMatrix,
    pub t: usize,
    pub t_prime: usize,
}

fn max_entry_degree(m: &PolyMatrix) -> usize {
    m.degree().unwrap_or(0)
}

/// `M' = M_t + (M - M_{t'}) x^(t - t')`.
pub fn reduction_step_at(m: &PolyMatrix, t: usize, t_prime: usize) -> Result<PolyMatrix> {
    if t >= t_prime {
        return Err(Error::BadWindow(format!("need t < t', got ({t}, {t_prime})")));
    }
    let mt = mat_window(m, t, t)?;
    let mtp = mat_window(m, t_prime, t_prime)?;
    let f = m.field();
    let mut out = mt;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let hi = m.get(i, j) - mtp.get(i, j);
            let down = hi.unshift(t_prime - t).expect("entries above t' are divisible by x^(t'+1)");
            let v = out.get(i, j) + &down;
            out.set(i, j, v);
        }
    }
    debug_assert_eq!(out.field(), f);
    Ok(out)
}

/// Finds the first `s1 <= t < t' <= s2` with equal fingerprints
/// `Phi_{s+delta1, delta1-1}(M_s G)` and returns the reduced matrix.
pub fn reduction_step(m: &PolyMatrix, g: &PolyMatrix, q: u64, s1: usize, s2: usize) -> Result<Reduction> {
    if m.cols() != g.rows() || m.field() != g.field() {
        return Err(Error::ShapeError("M must have as many columns as G has rows".into()));
    }
    let delta1 = max_entry_degree(g);
    if delta1 == 0 {
        return Err(Error::BadWindow("G must have maximum degree at least 1".into()));
    }
    let d = max_entry_degree(m);
    if !(1 <= s1 && s1 < s2 && s2 <= d) {
        return Err(Error::BadWindow(format!("need 1 <= s1 < s2 <= {d}, got ({s1}, {s2})")));
    }
    let (k, r) = (g.rows(), m.rows());
    let need = BigUint::from(q).pow((delta1 * k * r) as u32);
    if BigUint::from(s2 - s1) < need {
        return Err(Error::BadWindow(format!("s2 - s1 = {} is below q^(delta1 k r) = {need}", s2 - s1)));
    }
    let mut seen: HashMap<Vec<Vec<Vec<u64>>>, usize> = HashMap::new();
    for s in s1..=s2 {
        let ms = mat_window(m, s, s)?;
        let fp = mat_window(&ms.mul(g)?, s + delta1, delta1 - 1)?.to_coeff_lists();
        if let Some(&t) = seen.get(&fp) {
            let matrix = reduction_step_at(m, t, s)?;
            return Ok(Reduction { matrix, t, t_prime: s });
        }
        seen.insert(fp, s);
    }
    unreachable!("pigeonhole guarantees a collision")
}

/// The three postconditions of the reduction plus the support inequality.
pub fn check_reduction_postconditions(m: &PolyMatrix, g: &PolyMatrix, m_prime: &PolyMatrix, t: usize, s1: usize, s2: usize) -> Result<bool> {
    let delta1 = max_entry_degree(g);
    let d = max_entry_degree(m);
    let dp = max_entry_degree(m_prime);
    let mg = m.mul(g)?;
    let mpg = m_prime.mul(g)?;
    let first = s1 <= t && t < dp && d >= dp && t + d - dp <= s2 && t < t + d - dp;
    if !first {
        return Ok(false);
    }
    let second = mat_window(&mpg, t, t)? == mat_window(&mg, t, t)?;
    let w = dp + delta1 - t - 1;
    let third = mat_window(&mg, d + delta1, w)? == mat_window(&mpg, dp + delta1, w)?;
    Ok(second && third && mpg.weight() <= mg.weight())
}
