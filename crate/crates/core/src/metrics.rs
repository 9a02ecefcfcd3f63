//! Supports, weights, truncations, the encoder state graph, free distance,
//! column distances and the Singleton bound.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::algebra::PrimeField;
use crate::code::ConvolutionalCode;
use crate::error::{Error, Result};
use crate::polymat::PolyVector;
use crate::Poly;

/// Set of `(coordinate, degree)` pairs with nonzero coefficient.
/// Coordinates are 0-based.
pub type Support = BTreeSet<(usize, usize)>;

pub fn codeword_support(c: &PolyVector) -> Support {
    let mut s = Support::new();
    for (j, p) in c.entries().iter().enumerate() {
        for (t, &a) in p.coeffs().iter().enumerate() {
            if a != 0 {
                s.insert((j, t));
            }
        }
    }
    s
}

pub fn tuple_support(ws: &[PolyVector]) -> Support {
    ws.iter().flat_map(codeword_support).collect()
}

/// `c_{[0,j]}`: drops every coefficient above degree `j`.
pub fn truncate(c: &PolyVector, j: i64) -> Result<PolyVector> {
    if j < 0 {
        return Err(Error::BadWindow(format!("truncation index {j} is negative")));
    }
    Ok(c.truncate(j as usize))
}

/// `(n - k)(floor(delta / k) + 1) + delta + 1`.
pub fn singleton_bound(n: usize, k: usize, delta: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::ShapeError(format!("invalid parameters ({n},{k},{delta})")));
    }
    Ok((n - k) * (delta / k + 1) + delta + 1)
}

/// Support as a bitset over positions `t * n + j`, for fast subset and
/// union tests during searches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportBits {
    words: Vec<u64>,
}

impl SupportBits {
    pub fn empty(len: usize) -> Self {
        SupportBits { words: vec![0; len.div_ceil(64).max(1)] }
    }

    pub fn of(c: &PolyVector, max_degree: usize) -> Self {
        let n = c.len();
        let mut s = Self::empty(n * (max_degree + 1));
        for (j, p) in c.entries().iter().enumerate() {
            for (t, &a) in p.coeffs().iter().enumerate() {
                if a != 0 {
                    s.insert(t * n + j);
                }
            }
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_subset(&self, other: &SupportBits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &SupportBits) -> SupportBits {
        SupportBits { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn union_with(&mut self, other: &SupportBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &SupportBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Number of elements of `self` outside `other`.
    #[inline]
    pub fn count_outside(&self, other: &SupportBits) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & !b).count_ones() as usize).sum()
    }
}

/// The encoder realization of a row-reduced generator. A state holds, for
/// each row `i`, the last `delta_i` input symbols of that row.
#[derive(Debug, Clone)]
pub struct StateGraph {
    field: PrimeField,
    n: usize,
    k: usize,
    row_degrees: Vec<usize>,
    // taps[i][l] = coefficient vector of x^l in row i
    taps: Vec<Vec<Vec<u32>>>,
    // offset of row i's memory inside the flattened state
    offsets: Vec<usize>,
    delta: usize,
}

type State = Vec<u32>;

impl StateGraph {
    pub fn new(code: &ConvolutionalCode) -> Self {
        let g = code.generator();
        let row_degrees = code.row_degrees().to_vec();
        let taps = (0..code.k())
            .map(|i| (0..=row_degrees[i]).map(|l| g.row(i).coeff_vector(l)).collect())
            .collect();
        let mut offsets = Vec::with_capacity(code.k());
        let mut acc = 0;
        for &d in &row_degrees {
            offsets.push(acc);
            acc += d;
        }
        StateGraph { field: code.field(), n: code.n(), k: code.k(), row_degrees, taps, offsets, delta: acc }
    }

    /// `q^delta`.
    pub fn num_states(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.delta as u32)
    }

    pub fn zero_state(&self) -> State {
        vec![0; self.delta]
    }

    /// Output `c[t]` for memory `state` and input `a`, and the successor state.
    pub fn step(&self, state: &[u32], a: &[u32]) -> (Vec<u32>, State) {
        let f = self.field;
        let mut out = vec![0u32; self.n];
        for i in 0..self.k {
            let mut add = |c: u32, v: &[u32]| {
                if c != 0 {
                    for (o, &x) in out.iter_mut().zip(v) {
                        *o = f.add(*o, f.mul(c, x));
                    }
                }
            };
            add(a[i], &self.taps[i][0]);
            for l in 1..=self.row_degrees[i] {
                add(state[self.offsets[i] + l - 1], &self.taps[i][l]);
            }
        }
        let mut next = vec![0u32; self.delta];
        for i in 0..self.k {
            let (o, d) = (self.offsets[i], self.row_degrees[i]);
            if d > 0 {
                next[o] = a[i];
                next[o + 1..o + d].copy_from_slice(&state[o..o + d - 1]);
            }
        }
        (out, next)
    }

    /// All inputs in `F_q^k`, in lexicographic order.
    pub fn inputs(&self) -> Vec<Vec<u32>> {
        all_vectors(self.field, self.k)
    }
}

pub(crate) fn all_vectors(field: PrimeField, len: usize) -> Vec<Vec<u32>> {
    let q = field.order();
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

fn hamming(v: &[u32]) -> usize {
    v.iter().filter(|&&c| c != 0).count()
}

/// Free distance with a minimum-weight codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDistance {
    pub value: usize,
    pub codeword: PolyVector,
    pub input: PolyVector,
}

/// Minimum-weight walk leaving the zero state with a nonzero input and
/// returning to it, found by Dijkstra's algorithm.
pub fn free_distance(code: &ConvolutionalCode) -> FreeDistance {
    let sg = StateGraph::new(code);
    let f = code.field();
    let inputs = sg.inputs();
    let zero = sg.zero_state();
    // node None is the virtual start, Some(state) a trellis state
    let mut dist: HashMap<State, usize> = HashMap::new();
    let mut pred: HashMap<State, (Option<State>, usize)> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(usize, State)>> = BinaryHeap::new();
    let mut best_end: Option<(usize, Option<State>, usize)> = None;
    for (ai, a) in inputs.iter().enumerate().skip(1) {
        let (out, next) = sg.step(&zero, a);
        let w = hamming(&out);
        if next == zero {
            if best_end.as_ref().is_none_or(|b| w < b.0) {
                best_end = Some((w, None, ai));
            }
            continue;
        }
        if dist.get(&next).is_none_or(|&d| w < d) {
            dist.insert(next.clone(), w);
            pred.insert(next.clone(), (None, ai));
            heap.push(Reverse((w, next)));
        }
    }
    while let Some(Reverse((d, s))) = heap.pop() {
        if dist.get(&s) != Some(&d) {
            continue;
        }
        if best_end.as_ref().is_some_and(|b| b.0 <= d) {
            break;
        }
        for (ai, a) in inputs.iter().enumerate() {
            let (out, next) = sg.step(&s, a);
            let nd = d + hamming(&out);
            if next == zero {
                if best_end.as_ref().is_none_or(|b| nd < b.0) {
                    best_end = Some((nd, Some(s.clone()), ai));
                }
                continue;
            }
            if dist.get(&next).is_none_or(|&od| nd < od) {
                dist.insert(next.clone(), nd);
                pred.insert(next.clone(), (Some(s.clone()), ai));
                heap.push(Reverse((nd, next)));
            }
        }
    }
    let (value, mut cur, last) = best_end.expect("a nonzero input always returns to zero");
    let mut seq = vec![last];
    while let Some(s) = cur {
        let (p, ai) = pred[&s].clone();
        seq.push(ai);
        cur = p;
    }
    seq.reverse();
    let k = code.k();
    let input = PolyVector::new(
        f,
        (0..k).map(|i| Poly::from_residues(f, seq.iter().map(|&ai| inputs[ai][i]).collect())).collect(),
    );
    let codeword = code.generator().left_apply(&input).expect("shape");
    debug_assert_eq!(codeword.weight(), value);
    FreeDistance { value, codeword, input }
}

/// `d_j^c`: minimum truncation weight over codewords with `c[0] != 0`.
pub fn column_distance(code: &ConvolutionalCode, j: usize) -> Result<usize> {
    Ok(*column_distances(code, j)?.last().unwrap())
}

/// `d_0^c, ..., d_j^c` by layered dynamic programming over the state graph.
pub fn column_distances(code: &ConvolutionalCode, j: usize) -> Result<Vec<usize>> {
    let sg = StateGraph::new(code);
    let inputs = sg.inputs();
    let zero = sg.zero_state();
    let mut layer: HashMap<State, usize> = HashMap::new();
    for a in inputs.iter().skip(1) {
        let (out, next) = sg.step(&zero, a);
        let w = hamming(&out);
        if w == 0 {
            continue;
        }
        let e = layer.entry(next).or_insert(w);
        *e = (*e).min(w);
    }
    if layer.is_empty() {
        return Err(Error::EmptyConstraint);
    }
    let mut profile = vec![*layer.values().min().unwrap()];
    for _ in 0..j {
        let mut nextl: HashMap<State, usize> = HashMap::new();
        for (s, &d) in &layer {
            for a in &inputs {
                let (out, next) = sg.step(s, a);
                let nd = d + hamming(&out);
                let e = nextl.entry(next).or_insert(nd);
                *e = (*e).min(nd);
            }
        }
        layer = nextl;
        profile.push(*layer.values().min().unwrap());
    }
    Ok(profile)
}

/// A codeword found by enumeration, with its bitset support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub word: PolyVector,
    pub support: SupportBits,
    pub weight: usize,
    pub degree: usize,
}

impl Codeword {
    pub fn new(word: PolyVector, max_degree: usize) -> Self {
        let support = SupportBits::of(&word, max_degree);
        let weight = support.count();
        let degree = word.degree().unwrap_or(0);
        Codeword { word, support, weight, degree }
    }
}

/// All nonzero codewords of degree at most `max_degree` and weight at most
/// `max_weight`, one per line through the origin: inputs are normalized so
/// that the first nonzero symbol of the lowest nonzero input coefficient is 1.
/// Codewords are produced as `x^s u G` with `u(0) != 0`.
pub fn enumerate_codewords(code: &ConvolutionalCode, max_degree: usize, max_weight: usize) -> Vec<Codeword> {
    let sg = StateGraph::new(code);
    let f = code.field();
    let k = code.k();
    let degs = code.row_degrees();
    // number of input symbols available to row i
    let active_until: Vec<Option<usize>> = degs.iter().map(|&d| max_degree.checked_sub(d)).collect();
    let mut base = Vec::new();
    let mut inputs_hist: Vec<Vec<u32>> = Vec::new();
    let mut cur_out: Vec<Vec<u32>> = Vec::new();

    struct Ctx<'a> {
        sg: &'a StateGraph,
        field: PrimeField,
        k: usize,
        max_degree: usize,
        max_weight: usize,
        active_until: &'a [Option<usize>],
    }

    fn inputs_at(ctx: &Ctx, t: usize) -> Vec<Vec<u32>> {
        let act: Vec<usize> = (0..ctx.k).filter(|&i| ctx.active_until[i].is_some_and(|u| t <= u)).collect();
        all_vectors(ctx.field, act.len())
            .into_iter()
            .map(|v| {
                let mut a = vec![0u32; ctx.k];
                for (x, &i) in v.iter().zip(&act) {
                    a[i] = *x;
                }
                a
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        ctx: &Ctx,
        t: usize,
        state: &[u32],
        weight: usize,
        hist: &mut Vec<Vec<u32>>,
        outs: &mut Vec<Vec<u32>>,
        found: &mut Vec<(Vec<Vec<u32>>, usize)>,
    ) {
        if t > ctx.max_degree {
            if state.iter().all(|&s| s == 0) && weight > 0 {
                found.push((outs.clone(), weight));
            }
            return;
        }
        let cands = inputs_at(ctx, t);
        for a in cands {
            if t == 0 {
                match a.iter().find(|&&x| x != 0) {
                    Some(&1) => {}
                    _ => continue,
                }
            }
            let (out, next) = ctx.sg.step(state, &a);
            let w = weight + hamming(&out);
            if w > ctx.max_weight {
                continue;
            }
            hist.push(a);
            outs.push(out);
            dfs(ctx, t + 1, &next, w, hist, outs, found);
            hist.pop();
            outs.pop();
        }
    }

    let ctx = Ctx { sg: &sg, field: f, k, max_degree, max_weight, active_until: &active_until };
    if active_until.iter().all(Option::is_none) {
        return Vec::new();
    }
    let mut found = Vec::new();
    dfs(&ctx, 0, &sg.zero_state(), 0, &mut inputs_hist, &mut cur_out, &mut found);
    let n = code.n();
    for (outs, _) in found {
        let entries: Vec<Poly> =
            (0..n).map(|j| Poly::from_residues(f, outs.iter().map(|o| o[j]).collect())).collect();
        let word = PolyVector::new(f, entries);
        let d = word.degree().unwrap();
        for s in 0..=(max_degree - d) {
            base.push(Codeword::new(word.shift(s), max_degree));
        }
    }
    base.sort_by(|a, b| (a.weight, a.degree, &a.word).cmp(&(b.weight, b.degree, &b.word)));
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn code(q: u64, rows: &[&[&[u64]]]) -> ConvolutionalCode {
        let rows: Vec<Vec<Vec<u64>>> = rows.iter().map(|r| r.iter().map(|c| c.to_vec()).collect()).collect();
        ConvolutionalCode::from_coeffs(f(q), &rows).unwrap()
    }

    fn word(q: u64, e: &[&[u64]]) -> PolyVector {
        PolyVector::from_coeffs(f(q), &e.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn supports() {
        let s = codeword_support(&word(2, &[&[1, 1], &[1, 0, 0, 0, 1]]));
        assert_eq!(s, [(0, 0), (0, 1), (1, 0), (1, 4)].into_iter().collect());
        assert!(codeword_support(&PolyVector::zero(f(2), 3)).is_empty());
        assert_eq!(codeword_support(&word(2, &[&[1], &[1, 1, 1, 1]])).len(), 5);
        assert_eq!(tuple_support(&[word(2, &[&[1], &[], &[]]), word(2, &[&[], &[1], &[1, 1]])]).len(), 4);
        assert_eq!(tuple_support(&[word(5, &[&[0, 2], &[1, 1], &[1, 1]]), word(5, &[&[0, 1], &[0, 1], &[0, 2]])]).len(), 5);
        assert!(tuple_support(&[]).is_empty());
    }

    #[test]
    fn truncation() {
        assert_eq!(truncate(&word(2, &[&[1, 0, 0, 0, 1], &[1]]), 1).unwrap(), word(2, &[&[1], &[1]]));
        let c = word(3, &[&[0, 1, 1], &[1, 0, 0, 1]]);
        assert_eq!(truncate(&c, 3).unwrap(), c);
        assert_eq!(truncate(&c, 2).unwrap(), word(3, &[&[0, 1, 1], &[1]]));
        assert!(matches!(truncate(&c, -1), Err(Error::BadWindow(_))));
    }

    #[test]
    fn free_distance_examples() {
        let c = code(2, &[&[&[1], &[1, 1, 1, 1]]]);
        let fd = free_distance(&c);
        assert_eq!(fd.value, 4);
        assert!(c.contains(&fd.codeword).unwrap());
        assert_eq!(free_distance(&code(5, &[&[&[0, 2], &[1, 1], &[1, 1]], &[&[1], &[1], &[2]]])).value, 3);
        assert_eq!(free_distance(&code(2, &[&[&[1], &[1], &[1]]])).value, 3);
        // catastrophic code with a zero-weight cycle
        assert_eq!(free_distance(&code(2, &[&[&[1, 1], &[1, 0, 0, 0, 1]]])).value, 4);
    }

    #[test]
    fn column_distance_examples() {
        let c = code(2, &[&[&[1], &[1], &[1]]]);
        for j in 0..5 {
            assert_eq!(column_distance(&c, j).unwrap(), 3);
        }
        let c = code(5, &[&[&[0, 2], &[1, 1], &[1, 1]], &[&[1], &[1], &[2]]]);
        assert_eq!(column_distance(&c, 0).unwrap(), 2);
        let prof = column_distances(&c, 4).unwrap();
        for (j, d) in prof.iter().enumerate() {
            assert!(*d <= (c.n() - c.k()) * (j + 1) + 1);
        }
        let c = code(2, &[&[&[0, 1], &[]], &[&[], &[0, 0, 1]]]);
        assert_eq!(column_distance(&c, 2), Err(Error::EmptyConstraint));
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_bound(3, 2, 1).unwrap(), 3);
        assert_eq!(singleton_bound(5, 2, 0).unwrap(), 4);
        assert_eq!(singleton_bound(2, 1, 3).unwrap(), 8);
        assert!(singleton_bound(2, 3, 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // u_1 of degree <= 1 and u_2 constant: 2^3 - 1 words
        let c = code(2, &[&[&[1], &[], &[]], &[&[], &[1], &[1, 1]]]);
        let all = enumerate_codewords(&c, 1, usize::MAX);
        assert_eq!(all.len(), 7);
        let all = enumerate_codewords(&c, 2, usize::MAX);
        assert_eq!(all.len(), 31);
        // over F_3 one representative per line: (3^5 - 1) / 2
        let c3 = code(3, &[&[&[1], &[], &[]], &[&[], &[1], &[1, 1]]]);
        assert_eq!(enumerate_codewords(&c3, 2, usize::MAX).len(), 121);
        for w in &all {
            assert!(c.contains(&w.word).unwrap());
            assert!(w.degree <= 2);
        }
    }
}
