//! MDS, MDP and sMDS classification, parameter-forced generalized weights,
//! the maximum weight of a code and optimal anticodes.

use serde::ser::Serializer;
use serde::Serialize;

use crate::algebra::{Poly, PrimeField};
use crate::code::{code_equals, new_code, BlockCode, ConvolutionalCode};
use crate::error::{Error, Result};
use crate::genweights::{
    block_ghw, flatten, generalized_weight, independent, is_mdp_code, is_mds_code, is_smds_code, mds_formula,
    smds_parameter, Certificate, ExactReason, SearchBudget, WeightResult,
};
use crate::metrics::{enumerate_codewords, free_distance, singleton_bound};
use crate::polymat::PolyVector;

pub fn is_mds(code: &ConvolutionalCode) -> bool {
    is_mds_code(code)
}

/// Column distances meet `(n-k)(j+1)+1` for `j = 0..=L`.
pub fn is_mdp(code: &ConvolutionalCode) -> Result<bool> {
    is_mdp_code(code).ok_or_else(|| Error::NotApplicable("MDP is undefined for k = n".into()))
}

/// `d_free = d^c_M`.
pub fn is_smds(code: &ConvolutionalCode) -> Result<bool> {
    is_smds_code(code).ok_or_else(|| Error::NotApplicable("sMDS is undefined for k = n".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeMode {
    Mds,
    Mdp,
}

/// `a` with `delta = k ceil(delta/k) - a`.
fn defect(k: usize, delta: usize) -> usize {
    k * delta.div_ceil(k) - delta
}

/// Necessary conditions on the row degrees of an MDS or MDP code.
pub fn validate_row_degrees(code: &ConvolutionalCode, mode: DegreeMode) -> bool {
    let (k, delta) = (code.k(), code.delta());
    let lo = delta / k;
    let hi = match mode {
        DegreeMode::Mds => lo + 1,
        DegreeMode::Mdp => lo + k - defect(k, delta),
    };
    let degs = code.row_degrees();
    if delta % k == 0 {
        return degs.iter().all(|&d| d == delta / k);
    }
    degs.iter().all(|&d| lo <= d && d <= hi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub r: usize,
    pub bound: usize,
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub free_distance: usize,
    pub singleton_bound: usize,
    pub is_mds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_mdp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_smds: Option<bool>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub a: usize,
    pub mds_row_degrees: bool,
    pub mdp_row_degrees: bool,
    pub formula_weights: Vec<(usize, usize)>,
    pub upper_bounds: Vec<BoundEntry>,
}

/// Classification together with the weights and bounds the parameters force.
pub fn classify(code: &ConvolutionalCode) -> ClassificationReport {
    let (n, k, delta, delta1) = (code.n(), code.k(), code.delta(), code.delta1());
    let dfree = free_distance(code).value;
    let sb = singleton_bound(n, k, delta).expect("valid parameters");
    let is_mds = dfree == sb;
    let is_mdp = is_mdp_code(code);
    let a = defect(k, delta);
    let mut formula_weights = Vec::new();
    let mut upper_bounds = Vec::new();
    if is_mds {
        for r in 1..=k {
            if let Some(v) = mds_formula(n, k, delta, r) {
                formula_weights.push((r, v));
            }
        }
        if k == n {
            upper_bounds.push(BoundEntry { r: k, bound: delta + k, source: "full-rank-mds" });
        } else {
            upper_bounds.push(BoundEntry { r: k, bound: n * (delta.div_ceil(k) + 1) - a, source: "mds-degree-split" });
        }
        if 0 < a && a < k {
            let base = (n - k) * (delta / k + 1) + delta + a;
            let c0 = code.czero();
            let rev0 = code.reverse_code().map(|c| c.czero()).ok();
            for r in 1..=k - a {
                let mut h = block_ghw(&c0, r).map(|x| x.0).unwrap_or(usize::MAX);
                if let Some(rb) = &rev0 {
                    h = h.min(block_ghw(rb, r).map(|x| x.0).unwrap_or(usize::MAX));
                }
                if h != usize::MAX {
                    upper_bounds.push(BoundEntry { r: a + r, bound: base + h, source: "czero-hamming-weights" });
                }
            }
        }
    }
    if is_mdp == Some(true) {
        upper_bounds.push(BoundEntry { r: k, bound: n * (delta / k + k - a + 1) - k + 1, source: "mdp-degree-split" });
    }
    for r in 1..=k {
        upper_bounds.push(BoundEntry { r, bound: n * (delta1 + 1) - k + r, source: "generic" });
    }
    ClassificationReport {
        free_distance: dfree,
        singleton_bound: sb,
        is_mds,
        is_mdp,
        is_smds: is_smds_code(code),
        l: (k < n).then(|| delta / k + delta / (n - k)),
        m: smds_parameter(code),
        a,
        mds_row_degrees: validate_row_degrees(code, DegreeMode::Mds),
        mdp_row_degrees: validate_row_degrees(code, DegreeMode::Mdp),
        formula_weights,
        upper_bounds,
    }
}

/// The report for an MDS code; fails with `NotMDS` otherwise.
pub fn mds_hierarchy_constraints(code: &ConvolutionalCode) -> Result<ClassificationReport> {
    let rep = classify(code);
    if !rep.is_mds {
        return Err(Error::NotMds);
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// maximum weight

fn span_weights(f: PrimeField, span: &[Vec<u32>], v: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(span.len() * f.order() as usize);
    for s in span {
        for a in 0..f.order() {
            out.push(s.iter().zip(v).map(|(&x, &y)| f.add(x, f.mul(a, y))).collect());
        }
    }
    out
}

fn max_hamming(span: &[Vec<u32>]) -> usize {
    span.iter().map(|v| v.iter().filter(|&&c| c != 0).count()).max().unwrap_or(0)
}

/// Lower bound on `maxwt(C)`: the anticode bound, the free distance, and
/// the average weight of a `k`-dimensional subspace of support at least
/// `d_free + k - 1`.
fn maxwt_lower_bound(code: &ConvolutionalCode, dfree: usize) -> usize {
    let (k, q) = (code.k() as u32, code.field().order() as u128);
    let num = (dfree as u128 + k as u128 - 1) * (q - 1) * q.pow(k - 1);
    let den = q.pow(k) - 1;
    (num.div_ceil(den) as usize).max(dfree).max(k as usize)
}

struct MaxwtSearch<'a> {
    field: PrimeField,
    words: &'a [PolyVector],
    flat: &'a [Vec<u32>],
    pivots: Vec<usize>,
    k: usize,
    best: usize,
    best_idx: Option<Vec<usize>>,
    nodes: u64,
    node_cap: Option<u64>,
    aborted: bool,
    floor: usize,
}

impl MaxwtSearch<'_> {
    fn dfs(&mut self, idx: &mut Vec<usize>, span: &[Vec<u32>]) {
        if self.aborted || self.best <= self.floor {
            return;
        }
        if idx.len() == self.k {
            let ws: Vec<&PolyVector> = idx.iter().map(|&i| &self.words[i]).collect();
            if independent(self.field, &ws) {
                self.best = max_hamming(span);
                self.best_idx = Some(idx.clone());
            }
            return;
        }
        // only reduced echelon bases: one per subspace
        let last = idx.last().map(|&l| self.pivots[l]);
        for i in 0..self.words.len() {
            let p = self.pivots[i];
            if last.is_some_and(|l| p <= l) || idx.iter().any(|&j| self.flat[i][self.pivots[j]] != 0 || self.flat[j][p] != 0) {
                continue;
            }
            self.nodes += 1;
            if self.node_cap.is_some_and(|c| self.nodes > c) {
                self.aborted = true;
                return;
            }
            let next = span_weights(self.field, span, &self.flat[i]);
            if max_hamming(&next) >= self.best {
                continue;
            }
            if !idx.is_empty() {
                let mut ws: Vec<&PolyVector> = idx.iter().map(|&j| &self.words[j]).collect();
                ws.push(&self.words[i]);
                if !independent(self.field, &ws) {
                    continue;
                }
            }
            idx.push(i);
            self.dfs(idx, &next);
            idx.pop();
        }
    }
}

/// `maxwt(C)` over F_q-spans of `k` independent codewords of degree at
/// most the budget. Exact when the anticode bound or the average-weight
/// lower bound is met.
pub fn max_weight(code: &ConvolutionalCode, budget: &SearchBudget) -> Result<WeightResult> {
    let f = code.field();
    let k = code.k();
    let d = budget.max_degree;
    let df = free_distance(code);
    let floor = maxwt_lower_bound(code, df.value);
    if k == 1 {
        return Ok(WeightResult {
            value: df.value,
            witness: vec![df.codeword],
            certificate: Certificate::Exact(ExactReason::FreeDistance),
        });
    }
    let gens = code.generators();
    let width = d.max(code.delta1());
    let flat_gens: Vec<Vec<u32>> = gens.iter().map(|g| flatten(g, width)).collect();
    let mut span = vec![vec![0u32; code.n() * (width + 1)]];
    for g in &flat_gens {
        span = span_weights(f, &span, g);
    }
    let mut best = max_hamming(&span);
    let mut witness = gens;
    if best > floor {
        let words: Vec<PolyVector> =
            enumerate_codewords(code, d, best - 1).into_iter().map(|c| c.word.normalized()).collect();
        let flat: Vec<Vec<u32>> = words.iter().map(|w| flatten(w, width)).collect();
        let mut s = MaxwtSearch {
            field: f,
            words: &words,
            flat: &flat,
            pivots: flat.iter().map(|v| v.iter().position(|&c| c != 0).unwrap()).collect(),
            k,
            best,
            best_idx: None,
            nodes: 0,
            node_cap: budget.node_cap,
            aborted: false,
            floor,
        };
        s.dfs(&mut Vec::new(), &[vec![0u32; code.n() * (width + 1)]]);
        if let Some(idx) = s.best_idx {
            best = s.best;
            witness = idx.iter().map(|&i| words[i].clone()).collect();
        }
    }
    let certificate = if best == k || best == floor {
        Certificate::Exact(ExactReason::LowerBoundMet)
    } else {
        Certificate::UpperBound { max_degree: d }
    };
    Ok(WeightResult { value: best, witness, certificate })
}

/// `maxwt_H` of a block code by enumerating its codewords.
pub fn block_max_weight(code: &BlockCode) -> usize {
    let f = code.field;
    let mut span = vec![vec![0u32; code.n]];
    for b in &code.basis {
        span = span_weights(f, &span, b);
    }
    max_hamming(&span)
}

// ---------------------------------------------------------------------------
// anticodes

/// Three-valued answer for questions the theory does not always settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Decision::True => s.serialize_bool(true),
            Decision::False => s.serialize_bool(false),
            Decision::Undecided => s.serialize_str("undecided"),
        }
    }
}

/// The code generated by `x^{a_i} e_{j_i}`. Positions are 0-based and
/// strictly increasing.
pub fn elementary_anticode(field: PrimeField, n: usize, positions: &[usize], exponents: &[usize]) -> Result<ConvolutionalCode> {
    if positions.len() != exponents.len() {
        return Err(Error::ShapeError("positions and exponents differ in length".into()));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) || positions.iter().any(|&j| j >= n) {
        return Err(Error::ShapeError(format!("positions {positions:?} must be strictly increasing in 0..{n}")));
    }
    let rows: Vec<PolyVector> =
        positions.iter().zip(exponents).map(|(&j, &a)| PolyVector::monomial_unit(field, n, j, a)).collect();
    new_code(field, n, &rows)
}

/// Coordinates whose ideal generator is a monomial, with the exponent.
pub fn monomial_positions(code: &ConvolutionalCode) -> Vec<(usize, usize)> {
    (0..code.n())
        .filter_map(|j| {
            let g: Poly = code.coordinate_ideal_generator(j).ok()?;
            (!g.is_zero() && g.is_monomial()).then(|| (j, g.degree().unwrap()))
        })
        .collect()
}

pub fn is_elementary(code: &ConvolutionalCode) -> bool {
    let mono = monomial_positions(code);
    if mono.len() != code.k() {
        return false;
    }
    let (pos, exp): (Vec<usize>, Vec<usize>) = mono.into_iter().unzip();
    match elementary_anticode(code.field(), code.n(), &pos, &exp) {
        Ok(e) => code_equals(code, &e).unwrap_or(false),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryWitness {
    pub positions: Vec<usize>,
    pub exponents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnticodeReport {
    pub rank: usize,
    pub maxwt: WeightResult,
    pub optimal: Decision,
    pub reason: &'static str,
    pub monomial_positions: Vec<usize>,
    pub elementary_witness: Option<ElementaryWitness>,
    pub is_elementary: bool,
}

/// Decides whether `rk(C) = maxwt(C)`, with the argument used.
pub fn optimal_anticode_decision(code: &ConvolutionalCode) -> (Decision, &'static str) {
    let k = code.k();
    if code.delta() == 0 {
        let c0 = code.czero();
        let ok = block_max_weight(&c0) == c0.dim();
        return (if ok { Decision::True } else { Decision::False }, "block-code-anticode");
    }
    let mono = monomial_positions(code);
    if mono.len() >= k {
        return (Decision::True, "elementary-subcode");
    }
    if code.field().order() != 2 {
        return (Decision::False, "no-elementary-subcode");
    }
    let dfree = free_distance(code).value;
    if maxwt_lower_bound(code, dfree) > k {
        return (Decision::False, "average-weight-bound");
    }
    let budget = SearchBudget::default_for(code);
    if let Ok(w) = generalized_weight(code, k, &budget) {
        if w.value == k {
            return (Decision::True, "d_k-equals-rank");
        }
    }
    if let Ok(w) = max_weight(code, &budget) {
        if w.value == k {
            return (Decision::True, "maxwt-equals-rank");
        }
    }
    (Decision::Undecided, "no-certificate")
}

pub fn is_optimal_anticode(code: &ConvolutionalCode) -> Decision {
    optimal_anticode_decision(code).0
}

pub fn anticode_report(code: &ConvolutionalCode, budget: &SearchBudget) -> Result<AnticodeReport> {
    let mono = monomial_positions(code);
    let (optimal, reason) = optimal_anticode_decision(code);
    let k = code.k();
    let elementary_witness = (mono.len() >= k).then(|| ElementaryWitness {
        positions: mono.iter().take(k).map(|m| m.0).collect(),
        exponents: mono.iter().take(k).map(|m| m.1).collect(),
    });
    Ok(AnticodeReport {
        rank: k,
        maxwt: max_weight(code, budget)?,
        optimal,
        reason,
        monomial_positions: mono.iter().map(|m| m.0).collect(),
        elementary_witness,
        is_elementary: is_elementary(code),
    })
}
