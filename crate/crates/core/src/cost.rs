//! k-local cost functions over n-bit assignments.
//!
//! An assignment is addressed either as a `&[bool]` (entry `i` is bit `q_i`)
//! or as a packed `u64` index whose bit `i` is `q_i`. The same little-endian
//! convention is used for local value tables: entry `L` of a term over qubits
//! `[a, b, ...]` is the contribution when `q_a` is bit 0 of `L`, `q_b` bit 1,
//! and so on. Bitstrings are written with `q_0` as the leftmost character.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Widest register that can be addressed with a packed `u64` index.
pub const MAX_BITS: usize = 63;

/// Cost registers up to this width have user-supplied bounds checked exhaustively.
const BRUTE_FORCE_BOUND_CHECK_BITS: usize = 20;

/// A contribution depending on a fixed set of bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTerm")]
pub struct LocalTerm {
    qubits: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawTerm {
    qubits: Vec<usize>,
    values: Vec<f64>,
}

impl TryFrom<RawTerm> for LocalTerm {
    type Error = Error;

    fn try_from(raw: RawTerm) -> Result<Self> {
        LocalTerm::new(raw.qubits, raw.values)
    }
}

impl LocalTerm {
    /// Builds a term; `qubits` may be given in any order and the value table
    /// is permuted to match the sorted order.
    pub fn new(qubits: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let k = qubits.len();
        if k == 0 {
            return Err(invalid("a local term needs at least one qubit"));
        }
        if k > MAX_BITS {
            return Err(invalid(format!("term arity {k} exceeds {MAX_BITS}")));
        }
        if values.len() != 1usize << k {
            return Err(invalid(format!(
                "term over {k} qubits needs {} values, got {}",
                1usize << k,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite term value {v}")));
        }

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&j| qubits[j]);
        let sorted: Vec<usize> = order.iter().map(|&j| qubits[j]).collect();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::OverlappingQubits(w[0]));
        }
        if order.iter().enumerate().all(|(i, &j)| i == j) {
            return Ok(Self { qubits, values });
        }

        let permuted = (0..values.len())
            .map(|new_index| {
                let old_index = order
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| new_index >> bit & 1 == 1)
                    .fold(0usize, |acc, (_, &src)| acc | 1 << src);
                values[old_index]
            })
            .collect();
        Ok(Self {
            qubits: sorted,
            values: permuted,
        })
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Position in the value table selected by the packed assignment `x`.
    #[inline]
    pub fn local_index(&self, x: u64) -> usize {
        self.qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &q)| acc | (((x >> q) & 1) as usize) << j)
    }

    #[inline]
    pub fn value_at(&self, x: u64) -> f64 {
        self.values[self.local_index(x)]
    }
}

/// Minimum and maximum reachable by summing per-term extremes; not strict.
pub fn loose_bounds(constant: f64, terms: &[LocalTerm]) -> (f64, f64) {
    let lo = constant + terms.iter().map(LocalTerm::min_value).sum::<f64>();
    let hi = constant + terms.iter().map(LocalTerm::max_value).sum::<f64>();
    (lo, hi)
}

/// Margin used when none is supplied: a thousandth of half the loose span,
/// never below `1e-9`.
pub fn default_margin(constant: f64, terms: &[LocalTerm]) -> f64 {
    let (lo, hi) = loose_bounds(constant, terms);
    (0.5 * (hi - lo) * 1e-3).max(1e-9)
}

/// Strict bounds `(c_min, c_max)` obtained by widening the loose bounds by `margin`.
pub fn derive_bounds(constant: f64, terms: &[LocalTerm], margin: Option<f64>) -> Result<(f64, f64)> {
    if !constant.is_finite() {
        return Err(invalid(format!("non-finite constant {constant}")));
    }
    if let Some(v) = terms.iter().flat_map(|t| t.values.iter()).find(|v| !v.is_finite()) {
        return Err(invalid(format!("non-finite term value {v}")));
    }
    let margin = margin.unwrap_or_else(|| default_margin(constant, terms));
    if !(margin.is_finite() && margin > 0.0) {
        return Err(invalid(format!("bound margin must be positive, got {margin}")));
    }
    let (lo, hi) = loose_bounds(constant, terms);
    Ok((lo - margin, hi + margin))
}

/// Maps a cost value into `(0, 1)`; values on or outside the bounds are rejected.
pub fn normalize_value(value: f64, c_min: f64, c_max: f64) -> Result<f64> {
    if !(c_min < value && value < c_max) {
        return Err(Error::OutOfBounds { value, c_min, c_max });
    }
    Ok((value - c_min) / (c_max - c_min))
}

/// A cost `C(q_1..q_n) = constant + sum of local terms`, with strict bounds
/// `c_min < C < c_max` over every assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCost")]
pub struct CostFunction {
    n: usize,
    constant: f64,
    terms: Vec<LocalTerm>,
    c_min: f64,
    c_max: f64,
}

#[derive(Deserialize)]
struct RawCost {
    n: usize,
    #[serde(default)]
    constant: f64,
    terms: Vec<LocalTerm>,
    c_min: Option<f64>,
    c_max: Option<f64>,
}

impl TryFrom<RawCost> for CostFunction {
    type Error = Error;

    fn try_from(raw: RawCost) -> Result<Self> {
        match (raw.c_min, raw.c_max) {
            (Some(lo), Some(hi)) => CostFunction::with_bounds(raw.n, raw.constant, raw.terms, lo, hi),
            (None, None) => CostFunction::new(raw.n, raw.constant, raw.terms),
            _ => Err(invalid("c_min and c_max must be given together")),
        }
    }
}

impl CostFunction {
    /// Builds a cost with bounds from [`derive_bounds`] and the default margin.
    pub fn new(n: usize, constant: f64, terms: Vec<LocalTerm>) -> Result<Self> {
        let terms = canonicalize(n, terms)?;
        let (c_min, c_max) = derive_bounds(constant, &terms, None)?;
        Ok(Self {
            n,
            constant,
            terms,
            c_min,
            c_max,
        })
    }

    /// Builds a cost with caller-supplied bounds. They are accepted when they
    /// enclose the loose term-sum interval, or, for `n <= 20`, when every
    /// assignment evaluates strictly inside them.
    pub fn with_bounds(n: usize, constant: f64, terms: Vec<LocalTerm>, c_min: f64, c_max: f64) -> Result<Self> {
        let terms = canonicalize(n, terms)?;
        if !constant.is_finite() {
            return Err(invalid(format!("non-finite constant {constant}")));
        }
        if !(c_min.is_finite() && c_max.is_finite() && c_min < c_max) {
            return Err(invalid(format!(
                "bounds ({c_min}, {c_max}) must be finite with c_min < c_max"
            )));
        }
        let cost = Self {
            n,
            constant,
            terms,
            c_min,
            c_max,
        };
        let (lo, hi) = loose_bounds(constant, &cost.terms);
        if c_min < lo && hi < c_max {
            return Ok(cost);
        }
        if n <= BRUTE_FORCE_BOUND_CHECK_BITS {
            let (lo, hi) = (0..1u64 << n)
                .map(|x| cost.evaluate_index(x))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), c| (a.min(c), b.max(c)));
            if c_min < lo && hi < c_max {
                return Ok(cost);
            }
            return Err(invalid(format!(
                "bounds ({c_min}, {c_max}) do not strictly enclose the cost range [{lo}, {hi}]"
            )));
        }
        Err(invalid(format!(
            "bounds ({c_min}, {c_max}) do not enclose the term-sum interval [{lo}, {hi}] \
             and n = {n} is too large to verify exhaustively"
        )))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn span(&self) -> f64 {
        self.c_max - self.c_min
    }

    /// Largest term arity (`m`); zero for a constant cost.
    pub fn max_arity(&self) -> usize {
        self.terms.iter().map(LocalTerm::arity).max().unwrap_or(0)
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        Ok(self.evaluate_index(self.pack(bits)?))
    }

    /// Cost of the packed assignment `x` (bit `i` of `x` is `q_i`).
    #[inline]
    pub fn evaluate_index(&self, x: u64) -> f64 {
        debug_assert!(self.n == MAX_BITS || x >> self.n == 0);
        self.terms.iter().fold(self.constant, |acc, t| acc + t.value_at(x))
    }

    pub fn normalize(&self, bits: &[bool]) -> Result<f64> {
        normalize_value(self.evaluate(bits)?, self.c_min, self.c_max)
    }

    /// Normalized cost of a packed assignment. Construction guarantees the
    /// value lies strictly inside the bounds.
    #[inline]
    pub fn normalized_index(&self, x: u64) -> f64 {
        (self.evaluate_index(x) - self.c_min) / (self.c_max - self.c_min)
    }

    /// Inverse of normalization.
    pub fn denormalize(&self, c_nor: f64) -> f64 {
        self.c_min + (self.c_max - self.c_min) * c_nor
    }

    fn pack(&self, bits: &[bool]) -> Result<u64> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: bits.len(),
            });
        }
        Ok(bits_to_index(bits))
    }
}

/// Sorts every term, folds terms over the same qubit set into one, and orders
/// terms by arity then qubit set.
fn canonicalize(n: usize, terms: Vec<LocalTerm>) -> Result<Vec<LocalTerm>> {
    if n == 0 || n > MAX_BITS {
        return Err(invalid(format!("bit count must be in 1..={MAX_BITS}, got {n}")));
    }
    let mut folded: BTreeMap<(usize, Vec<usize>), Vec<f64>> = BTreeMap::new();
    for term in terms {
        if let Some(&q) = term.qubits.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: n,
            });
        }
        let key = (term.arity(), term.qubits);
        match folded.get_mut(&key) {
            Some(values) => values.iter_mut().zip(&term.values).for_each(|(a, b)| *a += b),
            None => {
                folded.insert(key, term.values);
            }
        }
    }
    Ok(folded
        .into_iter()
        .map(|((_, qubits), values)| LocalTerm { qubits, values })
        .collect())
}

/// Reproducible random cost with terms of arity `1..=m`. Every `k`-subset of
/// the bits is included independently with probability `term_density`, with
/// table entries uniform in `[-1, 1)`.
pub fn random_local_cost(n: usize, m: usize, term_density: f64, seed: u64) -> Result<CostFunction> {
    if n == 0 || n > MAX_BITS {
        return Err(invalid(format!("bit count must be in 1..={MAX_BITS}, got {n}")));
    }
    if m == 0 || m > n {
        return Err(invalid(format!("arity cap m = {m} must satisfy 1 <= m <= n = {n}")));
    }
    if !(0.0..=1.0).contains(&term_density) {
        return Err(invalid(format!("term density {term_density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for k in 1..=m {
        for subset in (0..n).combinations(k) {
            if rng.random::<f64>() < term_density {
                let values = (0..1usize << k).map(|_| rng.random_range(-1.0..1.0)).collect();
                terms.push(LocalTerm { qubits: subset, values });
            }
        }
    }
    CostFunction::new(n, 0.0, terms)
}

/// Balanced graph bipartitioning instance: vertices `0..v` with `q_i = 1`
/// placing vertex `i` in the first set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct GraphPartitionInstance {
    v: usize,
    edges: Vec<(usize, usize)>,
    j: f64,
    lambda: f64,
    p: f64,
}

#[derive(Deserialize)]
struct RawGraph {
    v: usize,
    edges: Vec<(usize, usize)>,
    j: f64,
    lambda: f64,
    p: f64,
}

impl TryFrom<RawGraph> for GraphPartitionInstance {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        GraphPartitionInstance::new(raw.v, raw.edges, raw.j, raw.lambda, raw.p)
    }
}

impl GraphPartitionInstance {
    /// Validates the instance; edges are stored as sorted `(low, high)` pairs.
    pub fn new(v: usize, edges: Vec<(usize, usize)>, j: f64, lambda: f64, p: f64) -> Result<Self> {
        if v == 0 || !v.is_multiple_of(2) {
            return Err(invalid(format!("vertex count must be even and positive, got {v}")));
        }
        if v > MAX_BITS {
            return Err(invalid(format!("vertex count {v} exceeds {MAX_BITS}")));
        }
        if !(j.is_finite() && j > 0.0) {
            return Err(invalid(format!("coupling J must be positive, got {j}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(invalid(format!("balance penalty must be non-negative, got {lambda}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("edge probability {p} outside [0, 1]")));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            let hi = a.max(b);
            if hi >= v {
                return Err(Error::QubitOutOfRange {
                    index: hi,
                    num_qubits: v,
                });
            }
            canon.push((a.min(b), hi));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self {
            v,
            edges: canon,
            j,
            lambda,
            p,
        })
    }

    pub fn with_penalty(self, lambda: f64) -> Result<Self> {
        Self::new(self.v, self.edges, self.j, lambda, self.p)
    }

    pub fn with_coupling(self, j: f64) -> Result<Self> {
        Self::new(self.v, self.edges, j, self.lambda, self.p)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Number of edges joining the two sides of the partition `x`.
    pub fn cut_size(&self, x: u64) -> usize {
        self.edges.iter().filter(|&&(a, b)| (x >> a ^ x >> b) & 1 == 1).count()
    }

    pub fn is_balanced(&self, x: u64) -> bool {
        x.count_ones() as usize * 2 == self.v
    }

    /// The partitioning cost
    /// `v(v-1)p/4 - (1/2J) sum_{i<j} J_ij s_i s_j + (lambda/2)(sum_i s_i)^2`
    /// with `s_i = 2 q_i - 1`, as a 2-local [`CostFunction`].
    ///
    /// Expanding the square gives `lambda v / 2` (from `s_i^2 = 1`, kept in the
    /// constant) plus `lambda s_i s_j` for every pair, so each pair `i < j`
    /// carries weight `lambda - [ij in E]/2` on `s_i s_j`. Pairs with zero
    /// weight produce no term.
    pub fn cost(&self) -> Result<CostFunction> {
        let v = self.v as f64;
        let constant = v * (v - 1.0) * self.p / 4.0 + self.lambda * v / 2.0;
        let mut terms = Vec::new();
        let mut edges = self.edges.iter().peekable();
        for a in 0..self.v {
            for b in a + 1..self.v {
                let is_edge = edges.next_if(|&&e| e == (a, b)).is_some();
                // J_ij / J is 1 on edges
                let w = self.lambda - if is_edge { 0.5 } else { 0.0 };
                if w != 0.0 {
                    // s_a s_b is +1 when the bits agree
                    terms.push(LocalTerm {
                        qubits: vec![a, b],
                        values: vec![w, -w, -w, w],
                    });
                }
            }
        }
        CostFunction::new(self.v, constant, terms)
    }
}

/// Erdős–Rényi graph on `v` vertices with coupling `J = 1` and no balance
/// penalty. Pairs are visited in lexicographic order and kept when a uniform
/// draw falls below `p`.
pub fn random_graph(v: usize, p: f64, seed: u64) -> Result<GraphPartitionInstance> {
    if !v.is_multiple_of(2) {
        return Err(invalid(format!("vertex count must be even, got {v}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..v)
        .tuple_combinations()
        .filter(|_| rng.random::<f64>() < p)
        .collect();
    GraphPartitionInstance::new(v, edges, 1.0, 0.0, p)
}

pub fn bits_to_index(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (b as u64) << i)
}

pub fn index_to_bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

/// Parses a `0`/`1` string with `q_0` first.
pub fn parse_bitstring(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(invalid(format!("unexpected character {other:?} in bitstring"))),
        })
        .collect()
}

pub fn format_bitstring(x: u64, n: usize) -> String {
    (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}
