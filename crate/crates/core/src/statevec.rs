//! Dense state vectors over a search register and a control register.
//!
//! Qubit `i < n_search` is search bit `q_i`; qubit `n_search + c` is control
//! qubit `c`. Basis index bit `k` holds qubit `k`, so the search assignment
//! occupies the low-order bits and the control pattern the high-order bits.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cost::CostFunction;
use crate::error::{invalid, Error, Result};
use crate::limits::Limits;

/// States at or above this many amplitudes are updated in parallel.
const PARALLEL_LEN: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_search: usize,
    n_control: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// `|S>|0...0>`: amplitude `1/sqrt(2^n_search)` on every search string
    /// with the control register cleared.
    pub fn uniform_superposition(n_search: usize, n_control: usize, limits: &Limits) -> Result<Self> {
        if n_search == 0 {
            return Err(invalid("search register needs at least one qubit"));
        }
        limits.check_state(n_search + n_control)?;
        let n_states = 1usize << n_search;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << (n_search + n_control)];
        let a = Complex64::new(1.0 / (n_states as f64).sqrt(), 0.0);
        amplitudes[..n_states].fill(a);
        Ok(Self {
            n_search,
            n_control,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must match the layout and the norm
    /// must be one within `1e-10`.
    pub fn from_amplitudes(n_search: usize, n_control: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let total = n_search + n_control;
        if total >= usize::BITS as usize || amplitudes.len() != 1usize << total {
            return Err(invalid(format!(
                "{} amplitudes do not match a {total}-qubit register",
                amplitudes.len()
            )));
        }
        let state = Self {
            n_search,
            n_control,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn n_search(&self) -> usize {
        self.n_search
    }

    pub fn n_control(&self) -> usize {
        self.n_control
    }

    pub fn num_qubits(&self) -> usize {
        self.n_search + self.n_control
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Global qubit index of control qubit `c`.
    pub fn control_qubit(&self, c: usize) -> usize {
        self.n_search + c
    }

    /// Basis index of `|x; control>`.
    pub fn basis_index(&self, search: u64, control: u64) -> usize {
        (search | control << self.n_search) as usize
    }

    pub fn amplitude(&self, search: u64, control: u64) -> Complex64 {
        self.amplitudes[self.basis_index(search, control)]
    }

    pub fn norm_sqr(&self) -> f64 {
        crate::numeric::tree_sum(self.amplitudes.len(), |i| self.amplitudes[i].norm_sqr())
    }

    /// Largest `|a_i - b_i|` between two states of the same layout.
    pub fn max_deviation(&self, other: &QuantumState) -> f64 {
        assert_eq!(
            (self.n_search, self.n_control),
            (other.n_search, other.n_control),
            "comparing states with different layouts"
        );
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation after removing the global phase that best aligns `other` to `self`.
    pub fn max_deviation_up_to_phase(&self, other: &QuantumState) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| b.conj() * a)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits(),
            });
        }
        Ok(())
    }

    fn check_targets(&self, qubits: &[usize], control: Option<usize>) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) || control == Some(q) {
                return Err(Error::OverlappingQubits(q));
            }
        }
        if let Some(c) = control {
            self.check_qubit(c)?;
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = 1usize << qubit;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let butterfly = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * h;
                *b = (x - y) * h;
            }
        };
        if self.amplitudes.len() >= PARALLEL_LEN {
            self.amplitudes.par_chunks_mut(2 * stride).for_each(butterfly);
        } else {
            self.amplitudes.chunks_mut(2 * stride).for_each(butterfly);
        }
        Ok(())
    }

    /// Multiplies each amplitude by the table entry selected by its bits on
    /// `qubits` (bit `j` of the table index is `qubits[j]`).
    pub fn apply_diagonal(&mut self, qubits: &[usize], table: &PhaseTable) -> Result<()> {
        self.apply_diagonal_where(qubits, table, None)
    }

    /// Applies `table` on `qubits` only where `control` is `|1>`.
    pub fn apply_controlled_diagonal(&mut self, control: usize, qubits: &[usize], table: &PhaseTable) -> Result<()> {
        self.apply_diagonal_where(qubits, table, Some(control))
    }

    fn apply_diagonal_where(&mut self, qubits: &[usize], table: &PhaseTable, control: Option<usize>) -> Result<()> {
        if qubits.len() != table.arity() {
            return Err(invalid(format!(
                "phase table of arity {} applied to {} qubits",
                table.arity(),
                qubits.len()
            )));
        }
        self.check_targets(qubits, control)?;
        let phases = table.phases();
        let control_mask = control.map_or(0, |c| 1usize << c);
        let update = |(i, a): (usize, &mut Complex64)| {
            if i & control_mask != control_mask {
                return;
            }
            let local = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | (i >> q & 1) << j);
            *a *= phases[local];
        };
        if self.amplitudes.len() >= PARALLEL_LEN {
            self.amplitudes.par_iter_mut().enumerate().for_each(update);
        } else {
            self.amplitudes.iter_mut().enumerate().for_each(update);
        }
        Ok(())
    }

    /// The controlled `U±` gate: `U` on the search register where `control`
    /// is `|0>` and `U^-1` where it is `|1>`. Realized gate by gate as the
    /// unconditional `G` followed by a controlled `G^-2` for every factor.
    pub fn apply_u_pm(&mut self, control: usize, gates: &[DiagonalGate]) -> Result<()> {
        if control < self.n_search {
            return Err(invalid(format!(
                "control qubit {control} lies in the {}-qubit search register",
                self.n_search
            )));
        }
        for gate in gates {
            if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.n_search) {
                return Err(invalid(format!("gate targets qubit {q} outside the search register")));
            }
        }
        for gate in gates {
            self.apply_diagonal(&gate.qubits, &gate.table)?;
            self.apply_controlled_diagonal(control, &gate.qubits, &gate.table.powi(-2))?;
        }
        Ok(())
    }

    /// Born-rule marginal over `qubits`; entry `L` has bit `j` equal to `qubits[j]`.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_targets(qubits, None)?;
        if qubits.len() >= usize::BITS as usize {
            return Err(invalid("marginal over too many qubits"));
        }
        let mut probs = vec![0.0; 1usize << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let local = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | (i >> q & 1) << j);
            probs[local] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Marginal over the whole control register, indexed by control pattern.
    pub fn control_marginal(&self) -> Vec<f64> {
        let n_states = 1usize << self.n_search;
        self.amplitudes
            .chunks(n_states)
            .map(|block| block.iter().map(Complex64::norm_sqr).sum())
            .collect()
    }

    /// Projects onto the control pattern `control`, returning the
    /// renormalized search-register state and the projection probability.
    pub fn project_control(&self, control: u64) -> Result<(QuantumState, f64)> {
        if self.n_control < 64 && control >> self.n_control != 0 {
            return Err(invalid(format!(
                "control pattern {control} exceeds {} bits",
                self.n_control
            )));
        }
        let n_states = 1usize << self.n_search;
        let start = (control as usize) << self.n_search;
        let block = &self.amplitudes[start..start + n_states];
        let weight: f64 = block.iter().map(Complex64::norm_sqr).sum();
        if weight.is_nan() || weight <= 0.0 {
            return Err(Error::DegeneratePostselection);
        }
        let scale = 1.0 / weight.sqrt();
        let amplitudes = block.iter().map(|a| a * scale).collect();
        Ok((
            QuantumState {
                n_search: self.n_search,
                n_control: 0,
                amplitudes,
            },
            weight,
        ))
    }

    /// Probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// Debug dump: each amplitude as little-endian `f64` real then imaginary
    /// part, in basis-index order. Not a stable format.
    pub fn write_le<W: Write>(&self, mut w: W) -> io::Result<()> {
        for a in &self.amplitudes {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Diagonal of a k-qubit phase gate.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    phases: Vec<Complex64>,
}

impl PhaseTable {
    /// Rejects tables whose length is not a power of two or whose entries
    /// are not unit-modulus within `1e-12`.
    pub fn new(phases: Vec<Complex64>) -> Result<Self> {
        if !phases.len().is_power_of_two() {
            return Err(invalid(format!(
                "phase table length {} is not a power of two",
                phases.len()
            )));
        }
        if let Some(p) = phases.iter().find(|p| (p.norm() - 1.0).abs() > 1e-12) {
            return Err(invalid(format!("phase {p} is not unit-modulus")));
        }
        Ok(Self { phases })
    }

    /// Table with entries `exp(i * angle)`.
    pub fn from_angles(angles: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            phases: vec![Complex64::new(1.0, 0.0); 1 << arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.phases.len().trailing_zeros() as usize
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    pub fn conj(&self) -> Self {
        Self {
            phases: self.phases.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn powi(&self, exp: i32) -> Self {
        Self {
            phases: self.phases.iter().map(|p| p.powi(exp)).collect(),
        }
    }

    /// Multiplies one entry by `exp(i * angle)`; only for negative controls in tests and `verify`.
    pub fn perturb(&mut self, index: usize, angle: f64) {
        self.phases[index] *= Complex64::from_polar(1.0, angle);
    }
}

/// A phase table bound to the search qubits it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGate {
    pub qubits: Vec<usize>,
    pub table: PhaseTable,
}

/// Gate factors of `U = exp(sign * i pi/2 * C_nor)`.
///
/// One gate per cost term plus an arity-0 gate for the constant. The offset
/// `c_min` is split evenly over the `M = terms + 1` factors so that each
/// factor carries `(C^k - c_min/M) / (c_max - c_min)` and the factors
/// multiply to `exp(sign * i pi/2 * C_nor(x))` on every basis state.
pub fn build_phase_tables(cost: &CostFunction, sign: f64) -> Vec<DiagonalGate> {
    let factors = (cost.terms().len() + 1) as f64;
    let offset = cost.c_min() / factors;
    let span = cost.span();
    let angle = |c: f64| sign * FRAC_PI_2 * (c - offset) / span;

    let constant = DiagonalGate {
        qubits: Vec::new(),
        table: PhaseTable {
            phases: vec![Complex64::from_polar(1.0, angle(cost.constant()))],
        },
    };
    std::iter::once(constant)
        .chain(cost.terms().iter().map(|term| {
            DiagonalGate {
                qubits: term.qubits().to_vec(),
                table: PhaseTable {
                    phases: term
                        .values()
                        .iter()
                        .map(|&v| Complex64::from_polar(1.0, angle(v)))
                        .collect(),
                },
            }
        }))
        .collect()
}

/// Applies `U` (or `U^-1` for `sign = -1`) directly as a product of its factors.
pub fn apply_cost_unitary(state: &mut QuantumState, gates: &[DiagonalGate]) -> Result<()> {
    gates.iter().try_for_each(|g| state.apply_diagonal(&g.qubits, &g.table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::LocalTerm;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n_search: usize, n_control: usize, seed: u64) -> QuantumState {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1 << (n_search + n_control))
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        QuantumState::from_amplitudes(n_search, n_control, amps).unwrap()
    }

    fn one_bit_cost() -> CostFunction {
        let t = LocalTerm::new(vec![0], vec![0.0, 1.0]).unwrap();
        CostFunction::with_bounds(1, 0.0, vec![t], -0.5, 1.5).unwrap()
    }

    #[test]
    fn uniform_layouts() {
        let s = QuantumState::uniform_superposition(1, 0, &Limits::default()).unwrap();
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let s = QuantumState::uniform_superposition(2, 1, &Limits::default()).unwrap();
        for x in 0..4 {
            assert_eq!(s.amplitude(x, 0), c(0.5, 0.0));
            assert_eq!(s.amplitude(x, 1), c(0.0, 0.0));
        }
        for (n, b) in [(1, 0), (3, 2), (5, 4)] {
            let s = QuantumState::uniform_superposition(n, b, &Limits::default()).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_respects_cap() {
        let limits = Limits::default().with_max_qubits(4);
        assert!(matches!(
            QuantumState::uniform_superposition(3, 2, &limits),
            Err(Error::StateTooLarge { requested: 5, max: 4 })
        ));
        assert!(QuantumState::uniform_superposition(0, 2, &limits).is_err());
    }

    #[test]
    fn hadamard_on_zero_and_involution() {
        let mut s = QuantumState::from_amplitudes(1, 0, vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        s.apply_hadamard(0).unwrap();
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let orig = random_state(3, 2, 5);
        for q in 0..5 {
            let mut s = orig.clone();
            s.apply_hadamard(q).unwrap();
            s.apply_hadamard(q).unwrap();
            assert!(s.max_deviation(&orig) < 1e-12);
        }
        assert!(orig.clone().apply_hadamard(5).is_err());
    }

    #[test]
    fn parallel_paths_match_serial() {
        // 15 qubits crosses PARALLEL_LEN
        let orig = random_state(12, 3, 9);
        let t = PhaseTable::from_angles([0.1, 0.7, -0.4, 2.0]).unwrap();
        let mut s = orig.clone();
        s.apply_hadamard(13).unwrap();
        s.apply_controlled_diagonal(14, &[2, 9], &t).unwrap();
        let mut amps = orig.amplitudes().to_vec();
        let h = FRAC_1_SQRT_2;
        for i in 0..amps.len() {
            if i >> 13 & 1 == 0 {
                let (a, b) = (amps[i], amps[i | 1 << 13]);
                amps[i] = (a + b) * h;
                amps[i | 1 << 13] = (a - b) * h;
            }
        }
        for (i, a) in amps.iter_mut().enumerate() {
            if i >> 14 & 1 == 1 {
                *a *= t.phases()[(i >> 2 & 1) | (i >> 9 & 1) << 1];
            }
        }
        let expect = QuantumState::from_amplitudes(12, 3, amps).unwrap();
        assert!(s.max_deviation(&expect) < 1e-12);
    }

    #[test]
    fn diagonal_gates() {
        let orig = random_state(3, 1, 1);
        let mut s = orig.clone();
        s.apply_diagonal(&[0, 2], &PhaseTable::identity(2)).unwrap();
        assert_eq!(s, orig);

        let global = PhaseTable::from_angles([0.9; 4]).unwrap();
        s.apply_diagonal(&[1, 3], &global).unwrap();
        let (p, q) = (orig.probabilities(), s.probabilities());
        assert!(p.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);

        assert!(s.apply_diagonal(&[0], &global).is_err());
        assert!(matches!(
            s.apply_diagonal(&[1, 1], &global),
            Err(Error::OverlappingQubits(1))
        ));
        assert!(s.apply_diagonal(&[0, 4], &global).is_err());
    }

    #[test]
    fn diagonals_commute() {
        let orig = random_state(4, 0, 3);
        let a = PhaseTable::from_angles([0.3, -1.1, 0.2, 0.5]).unwrap();
        let b = PhaseTable::from_angles([2.3, 0.4]).unwrap();
        let mut ab = orig.clone();
        ab.apply_diagonal(&[0, 2], &a).unwrap();
        ab.apply_diagonal(&[2], &b).unwrap();
        let mut ba = orig;
        ba.apply_diagonal(&[2], &b).unwrap();
        ba.apply_diagonal(&[0, 2], &a).unwrap();
        assert!(ab.max_deviation(&ba) < 1e-15);
    }

    #[test]
    fn controlled_diagonal_branches() {
        let t = PhaseTable::from_angles([0.4, 1.3]).unwrap();
        // control qubit 1 in |0>
        let orig =
            QuantumState::from_amplitudes(1, 1, vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut s = orig.clone();
        s.apply_controlled_diagonal(1, &[0], &t).unwrap();
        assert_eq!(s, orig);

        // control in |1>: same as the plain diagonal
        let orig =
            QuantumState::from_amplitudes(1, 1, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let mut s = orig.clone();
        s.apply_controlled_diagonal(1, &[0], &t).unwrap();
        let mut d = orig.clone();
        d.apply_diagonal(&[0], &t).unwrap();
        assert!(s.max_deviation(&d) < 1e-15);

        assert!(s.apply_controlled_diagonal(0, &[0], &t).is_err());
    }

    #[test]
    fn g_then_controlled_g_minus_two() {
        let g = PhaseTable::from_angles([0.25, 0.9, -0.3, 1.7]).unwrap();
        let orig = random_state(2, 1, 8);
        let mut s = orig.clone();
        s.apply_diagonal(&[0, 1], &g).unwrap();
        s.apply_controlled_diagonal(2, &[0, 1], &g.powi(-2)).unwrap();
        for x in 0..4u64 {
            let plus = orig.amplitude(x, 0) * g.phases()[x as usize];
            let minus = orig.amplitude(x, 1) * g.phases()[x as usize].conj();
            assert!((s.amplitude(x, 0) - plus).norm() < 1e-14);
            assert!((s.amplitude(x, 1) - minus).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_tables_for_one_bit_cost() {
        let cost = one_bit_cost();
        let gates = build_phase_tables(&cost, 1.0);
        assert_eq!(gates.len(), 2);
        let composite: Vec<Complex64> = (0..2)
            .map(|x| gates[0].table.phases()[0] * gates[1].table.phases()[x])
            .collect();
        let expect = [0.25, 0.75].map(|c| Complex64::from_polar(1.0, FRAC_PI_2 * c));
        for (a, b) in composite.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-15);
        }

        let minus = build_phase_tables(&cost, -1.0);
        for (p, m) in gates.iter().zip(&minus) {
            assert_eq!(p.qubits, m.qubits);
            for (a, b) in p.table.phases().iter().zip(m.table.phases()) {
                assert!((a.conj() - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn u_pm_with_constant_cost() {
        let cost = CostFunction::new(2, 1.0, vec![]).unwrap();
        let cn = cost.normalized_index(0);
        let gates = build_phase_tables(&cost, 1.0);
        let orig = random_state(2, 1, 4);
        let mut s = orig.clone();
        s.apply_u_pm(2, &gates).unwrap();
        let plus = Complex64::from_polar(1.0, FRAC_PI_2 * cn);
        for x in 0..4 {
            assert!((s.amplitude(x, 0) - orig.amplitude(x, 0) * plus).norm() < 1e-14);
            assert!((s.amplitude(x, 1) - orig.amplitude(x, 1) * plus.conj()).norm() < 1e-14);
        }
        assert!(s.clone().apply_u_pm(0, &gates).is_err());
    }

    #[test]
    fn marginals() {
        let s = QuantumState::uniform_superposition(3, 0, &Limits::default()).unwrap();
        for q in 0..3 {
            let m = s.marginal_probabilities(&[q]).unwrap();
            assert!((m[0] - 0.5).abs() < 1e-15 && (m[1] - 0.5).abs() < 1e-15);
        }
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[5] = c(0.0, 1.0);
        let basis = QuantumState::from_amplitudes(3, 0, amps).unwrap();
        let m = basis.marginal_probabilities(&[0, 1, 2]).unwrap();
        assert_eq!(m, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let m = basis.marginal_probabilities(&[2, 0]).unwrap();
        assert_eq!(m, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn projection() {
        let s = random_state(2, 2, 6);
        let total: f64 = (0..4).map(|c| s.project_control(c).unwrap().1).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let (p, w) = s.project_control(2).unwrap();
        assert!((w - s.control_marginal()[2]).abs() < 1e-15);
        assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(s.project_control(4).is_err());
        let zero =
            QuantumState::from_amplitudes(1, 1, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(zero.project_control(0).unwrap_err(), Error::DegeneratePostselection);
    }

    #[test]
    fn binary_dump_layout() {
        let s = QuantumState::from_amplitudes(1, 0, vec![c(0.6, -0.0), c(0.0, 0.8)]).unwrap();
        let mut buf = Vec::new();
        s.write_le(&mut buf).unwrap();
        assert_eq!(buf.len(), 32);
        assert_eq!(f64::from_le_bytes(buf[0..8].try_into().unwrap()), 0.6);
        assert_eq!(f64::from_le_bytes(buf[24..32].try_into().unwrap()), 0.8);
    }

    #[test]
    fn phase_table_validation() {
        assert!(PhaseTable::new(vec![c(1.0, 0.0); 3]).is_err());
        assert!(PhaseTable::new(vec![c(0.5, 0.0); 2]).is_err());
        assert_eq!(PhaseTable::identity(3).arity(), 3);
        assert_eq!(PhaseTable::identity(0).arity(), 0);
    }
}
