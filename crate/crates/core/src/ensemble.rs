//! Effective thermodynamics of the post-selected output distribution.
//!
//! With `b` control qubits the accepted search outcomes follow
//! `P_b(x) = cos^{2b}(pi/2 C_nor(x)) / Z`, a Boltzmann law at temperature
//! `t = 1/b` over energies `E(x) = -2 ln cos(pi/2 C_nor(x))`. The free energy
//! is normalized against the uniform ensemble, `Z = N exp(-b F)`, so
//! `F = -ln(P0_b) / b` where `P0_b = Z / N` is the post-selection probability.
//!
//! The entropy `S = -dF/dt` inherits that normalization: it is the Gibbs
//! entropy minus `ln N`, so it runs from `0` at `t = inf` down to
//! `ln(g / N)` at `t = 0` for a `g`-fold degenerate optimum.
//! [`ThermoPoint::s_gibbs`] carries the un-shifted Gibbs entropy.
//!
//! All per-state sums use [`crate::numeric::tree_sum`], so results do not
//! depend on the thread count.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::CostFunction;
use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::numeric::{tree_sum, tree_sum_slice};

/// Relative finite-difference step for the entropy cross-check.
pub const ENTROPY_FD_STEP: f64 = 1e-4;

/// `E = -2 ln cos(pi/2 c_nor)`.
pub fn energy(c_nor: f64) -> f64 {
    -2.0 * (FRAC_PI_2 * c_nor).cos().ln()
}

/// Normalized cost whose single-level ensemble has free energy `f`.
pub fn effective_cost_nor(f: f64) -> f64 {
    FRAC_2_PI * (-f / 2.0).exp().acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `c_nor << 1`
    Low,
    /// `1 - c_nor << 1`
    High,
}

/// Leading-order forms of [`energy`] near the two ends of the cost range.
pub fn asymptotic_energy(c_nor: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Low => PI * PI / 4.0 * c_nor * c_nor,
        Branch::High => (4.0 / (PI * PI * (1.0 - c_nor).powi(2))).ln(),
    }
}

/// Per-state tables for one cost function, enumerated exhaustively.
#[derive(Debug, Clone)]
pub struct Ensemble {
    n: usize,
    c_min: f64,
    c_max: f64,
    costs: Vec<f64>,
    c_nor: Vec<f64>,
    energies: Vec<f64>,
    e_min: f64,
    e_mean: f64,
    e_spread: f64,
    min_cost: f64,
}

/// Per-state tables together with `Z`, `P0_b` and `P_b` at one `b`.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub n: usize,
    pub b: f64,
    pub c_nor: Vec<f64>,
    pub energies: Vec<f64>,
    pub z: f64,
    pub p0b: f64,
    pub distribution: Vec<f64>,
}

/// Thermodynamic state at effective temperature `t = 1/b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub b: f64,
    pub t: f64,
    /// Free energy relative to the uniform ensemble.
    pub f: f64,
    /// Internal energy `<E>_t`.
    pub u: f64,
    /// `(U - F) / t`.
    pub s: f64,
    /// `-dF/dt` by central difference, for cross-checking `s`.
    pub s_fd: f64,
    /// `s + ln N`, the Gibbs entropy of `P_b`, in `[0, n ln 2]`.
    pub s_gibbs: f64,
    pub c_eff: f64,
    pub c_eff_nor: f64,
    /// `C_eff(inf) - C_eff(t)`.
    pub delta: f64,
    /// `delta / (C_eff(inf) - C_eff(0))`; `None` when all states cost the same.
    pub accuracy: Option<f64>,
    pub p0b: f64,
    pub expected_repetitions: f64,
}

impl ThermoPoint {
    /// `|F - (U - t S)|`.
    pub fn identity_residual(&self) -> f64 {
        (self.f - (self.u - self.t * self.s)).abs()
    }

    /// Relative mismatch between the analytic and finite-difference entropies.
    pub fn entropy_mismatch(&self) -> f64 {
        let scale = self.s.abs().max(self.s_fd.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.s - self.s_fd).abs() / scale
        }
    }
}

impl Ensemble {
    pub fn new(cost: &CostFunction, limits: &Limits) -> Result<Self> {
        let n = cost.n();
        limits.check_enumeration(n)?;
        let len = 1usize << n;
        let costs: Vec<f64> = (0..len as u64)
            .into_par_iter()
            .map(|x| cost.evaluate_index(x))
            .collect();
        let (c_min, c_max) = (cost.c_min(), cost.c_max());
        let c_nor: Vec<f64> = costs.iter().map(|c| (c - c_min) / (c_max - c_min)).collect();
        let energies: Vec<f64> = c_nor.iter().map(|&c| energy(c)).collect();
        let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let e_mean = tree_sum_slice(&energies) / len as f64;
        let e_spread = energies.iter().map(|e| (e - e_mean).abs()).fold(0.0, f64::max);
        let min_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            n,
            c_min,
            c_max,
            costs,
            c_nor,
            energies,
            e_min,
            e_mean,
            e_spread,
            min_cost,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_states(&self) -> usize {
        self.energies.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn normalized_costs(&self) -> &[f64] {
        &self.c_nor
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn min_energy(&self) -> f64 {
        self.e_min
    }

    /// Uniform-ensemble average energy, the `b -> 0` limit of `F`.
    pub fn mean_energy(&self) -> f64 {
        self.e_mean
    }

    fn check_b(b: f64) -> Result<()> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid(format!("b must be finite and non-negative, got {b}")));
        }
        Ok(())
    }

    fn check_positive_b(b: f64) -> Result<()> {
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid(format!("b must be finite and positive, got {b}")));
        }
        Ok(())
    }

    /// `P0_b = (1/N) sum_x cos^{2b}(pi/2 C_nor(x))`, evaluated literally.
    pub fn post_selection_probability(&self, b: f64) -> Result<f64> {
        Self::check_b(b)?;
        let c = &self.c_nor;
        Ok(tree_sum(c.len(), |i| (FRAC_PI_2 * c[i]).cos().powf(2.0 * b)) / c.len() as f64)
    }

    /// `Z = sum_x exp(-b E(x))` summed directly, paired with the cos-form `P0_b`.
    /// Both underflow for large `b`; use [`Self::log_post_selection`] there.
    pub fn partition_function(&self, b: f64) -> Result<(f64, f64)> {
        Self::check_b(b)?;
        let e = &self.energies;
        let z = tree_sum(e.len(), |i| (-b * e[i]).exp());
        Ok((z, self.post_selection_probability(b)?))
    }

    /// `ln P0_b = ln((1/N) sum exp(-b E))` without underflow.
    ///
    /// For small `b` the energies are centered on their mean and the sum is
    /// formed with `expm1`/`ln_1p` so that `F` keeps full relative precision
    /// as `b -> 0`; otherwise the sum is shifted by the ground energy.
    pub fn log_post_selection(&self, b: f64) -> Result<f64> {
        Self::check_b(b)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        let e = &self.energies;
        let len = e.len() as f64;
        if b * self.e_spread <= 1.0 {
            let mean = self.e_mean;
            let m = tree_sum(e.len(), |i| (-b * (e[i] - mean)).exp_m1()) / len;
            Ok(-b * mean + m.ln_1p())
        } else {
            let e0 = self.e_min;
            let s = tree_sum(e.len(), |i| (-b * (e[i] - e0)).exp());
            Ok(-b * e0 + (s / len).ln())
        }
    }

    /// `F(b) = -ln(P0_b) / b`.
    pub fn free_energy(&self, b: f64) -> Result<f64> {
        Self::check_positive_b(b)?;
        Ok(-self.log_post_selection(b)? / b)
    }

    /// `U(b) = <E>` under `P_b`.
    pub fn internal_energy(&self, b: f64) -> Result<f64> {
        Self::check_b(b)?;
        let e = &self.energies;
        let e0 = self.e_min;
        let w = |i: usize| (-b * (e[i] - e0)).exp();
        let num = tree_sum(e.len(), |i| e[i] * w(i));
        let den = tree_sum(e.len(), w);
        Ok(num / den)
    }

    /// `P_b(x)` from the `cos^{2b}` form, each weight taken relative to the
    /// lowest-cost state so that large `b` does not underflow.
    pub fn boltzmann_distribution(&self, b: f64) -> Result<Vec<f64>> {
        Self::check_b(b)?;
        let c0 = self.c_nor.iter().copied().fold(f64::INFINITY, f64::min);
        let cos0 = (FRAC_PI_2 * c0).cos();
        let weights: Vec<f64> = self
            .c_nor
            .iter()
            .map(|&c| ((FRAC_PI_2 * c).cos() / cos0).powf(2.0 * b))
            .collect();
        let total = tree_sum_slice(&weights);
        Ok(weights.into_iter().map(|w| w / total).collect())
    }

    /// `P_b(x) = exp(-b E(x)) / Z`.
    pub fn boltzmann_from_energies(&self, b: f64) -> Result<Vec<f64>> {
        Self::check_b(b)?;
        let e0 = self.e_min;
        let weights: Vec<f64> = self.energies.iter().map(|e| (-b * (e - e0)).exp()).collect();
        let total = tree_sum_slice(&weights);
        Ok(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn summary(&self, b: f64) -> Result<EnsembleSummary> {
        let p0b = self.log_post_selection(b)?.exp();
        Ok(EnsembleSummary {
            n: self.n,
            b,
            c_nor: self.c_nor.clone(),
            energies: self.energies.clone(),
            z: p0b * self.num_states() as f64,
            p0b,
            distribution: self.boltzmann_distribution(b)?,
        })
    }

    pub fn effective_cost(&self, c_nor: f64) -> f64 {
        self.c_min + (self.c_max - self.c_min) * c_nor
    }

    /// `C_eff(t = inf)`, from the `b -> 0` limit `F = <E>_uniform`.
    pub fn effective_cost_infinite_t(&self) -> f64 {
        self.effective_cost(effective_cost_nor(self.e_mean))
    }

    /// `C_eff(t = 0)`: the exact minimum cost.
    pub fn optimum(&self) -> f64 {
        self.min_cost
    }

    /// Gain available between the uniform and the ground-state ensembles.
    pub fn gain_range(&self) -> f64 {
        self.effective_cost_infinite_t() - self.min_cost
    }

    /// True when every state has (numerically) the same cost, which leaves
    /// the accuracy undefined.
    pub fn is_degenerate(&self) -> bool {
        self.gain_range() <= 1e-9 * (self.c_max - self.c_min)
    }

    /// All thermodynamic quantities at `t`.
    pub fn thermo_point(&self, t: f64) -> Result<ThermoPoint> {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid(format!("temperature must be finite and positive, got {t}")));
        }
        let b = 1.0 / t;
        let f = self.free_energy(b)?;
        let u = self.internal_energy(b)?;
        let s = (u - f) / t;

        let h = ENTROPY_FD_STEP * t;
        let f_hi = self.free_energy(1.0 / (t + h))?;
        let f_lo = self.free_energy(1.0 / (t - h))?;
        let s_fd = -(f_hi - f_lo) / (2.0 * h);

        let c_eff_nor = effective_cost_nor(f);
        let c_eff = self.effective_cost(c_eff_nor);
        let delta = self.effective_cost_infinite_t() - c_eff;
        let accuracy = (!self.is_degenerate()).then(|| delta / self.gain_range());
        let p0b = (-b * f).exp();
        Ok(ThermoPoint {
            b,
            t,
            f,
            u,
            s,
            s_fd,
            s_gibbs: s + (self.num_states() as f64).ln(),
            c_eff,
            c_eff_nor,
            delta,
            accuracy,
            p0b,
            expected_repetitions: 1.0 / p0b,
        })
    }

    /// `|P0_b - cos^{2b}(pi/2 C_eff_nor(b))|`, which vanishes when the
    /// effective cost reproduces the post-selection probability.
    pub fn consistency_p0b(&self, b: f64) -> Result<f64> {
        Self::check_positive_b(b)?;
        let p0 = self.post_selection_probability(b)?;
        let c = effective_cost_nor(self.free_energy(b)?);
        Ok((p0 - (FRAC_PI_2 * c).cos().powf(2.0 * b)).abs())
    }

    pub fn sweep(&self, b_values: &[f64]) -> Result<Vec<ThermoPoint>> {
        b_values
            .iter()
            .map(|&b| {
                Self::check_positive_b(b)?;
                self.thermo_point(1.0 / b)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::LocalTerm;

    fn one_bit() -> Ensemble {
        let t = LocalTerm::new(vec![0], vec![0.0, 1.0]).unwrap();
        let cost = CostFunction::with_bounds(1, 0.0, vec![t], -0.5, 1.5).unwrap();
        Ensemble::new(&cost, &Limits::default()).unwrap()
    }

    #[test]
    fn energy_values() {
        assert_eq!(energy(0.0), 0.0);
        assert!((energy(0.5) - 2f64.ln()).abs() < 1e-15);
        let e = energy(0.01);
        assert!((e - 2.4674e-4).abs() / 2.4674e-4 < 1e-3);
        assert!((asymptotic_energy(0.01, Branch::Low) - e).abs() / e < 1e-3);
    }

    #[test]
    fn high_branch_grows_without_bound() {
        let mut last = f64::NEG_INFINITY;
        for k in 1..12 {
            let e = asymptotic_energy(1.0 - 10f64.powi(-k), Branch::High);
            assert!(e > last);
            last = e;
        }
        assert!(last > 45.0);
    }

    #[test]
    fn one_bit_partition_function() {
        let ens = one_bit();
        let (z, p0) = ens.partition_function(1.0).unwrap();
        assert!((p0 - 0.5).abs() < 1e-15);
        assert!((z - 1.0).abs() < 1e-15);
        let (z0, p00) = ens.partition_function(0.0).unwrap();
        assert_eq!((z0, p00), (2.0, 1.0));
        assert!((ens.free_energy(1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let p = ens.boltzmann_distribution(1.0).unwrap();
        assert!((p[0] - 0.853_553_390_593_273_7).abs() < 1e-12);
        assert!((p[1] - 0.146_446_609_406_726_3).abs() < 1e-12);
        assert!(ens.consistency_p0b(1.0).unwrap() < 1e-12);
    }

    #[test]
    fn b_validation() {
        let ens = one_bit();
        assert!(ens.free_energy(0.0).is_err());
        assert!(ens.free_energy(-1.0).is_err());
        assert!(ens.partition_function(f64::NAN).is_err());
        assert!(ens.thermo_point(0.0).is_err());
        assert!(ens.sweep(&[1.0, 0.0]).is_err());
        assert!(ens.consistency_p0b(0.0).is_err());
    }

    #[test]
    fn uniform_at_b_zero() {
        let ens = one_bit();
        assert_eq!(ens.boltzmann_distribution(0.0).unwrap(), vec![0.5, 0.5]);
        assert_eq!(ens.internal_energy(0.0).unwrap(), ens.mean_energy());
    }

    #[test]
    fn constant_cost_is_a_single_level() {
        let cost = CostFunction::new(3, 1.25, vec![]).unwrap();
        let ens = Ensemble::new(&cost, &Limits::default()).unwrap();
        let c = cost.normalized_index(0);
        let level = energy(c);
        for b in [0.5, 1.0, 7.0] {
            assert!((ens.free_energy(b).unwrap() - level).abs() < 1e-12);
            let tp = ens.thermo_point(1.0 / b).unwrap();
            assert!(tp.s.abs() < 1e-9);
            assert!(tp.accuracy.is_none());
            assert!(ens.consistency_p0b(b).unwrap() < 1e-14);
        }
        assert!(ens.is_degenerate());
    }

    #[test]
    fn enumeration_cap() {
        let cost = CostFunction::new(5, 0.0, vec![]).unwrap();
        let limits = Limits {
            max_enumeration_bits: 4,
            ..Limits::default()
        };
        assert!(matches!(
            Ensemble::new(&cost, &limits),
            Err(crate::Error::EnumerationTooLarge { requested: 5, max: 4 })
        ));
    }

    #[test]
    fn log_route_matches_direct_sum_in_both_regimes() {
        let ens = one_bit();
        for b in [1e-6, 0.3, 1.0, 5.0, 40.0] {
            let (z, _) = ens.partition_function(b).unwrap();
            let direct = (z / 2.0).ln();
            assert!((ens.log_post_selection(b).unwrap() - direct).abs() < 1e-13 * (1.0 + direct.abs()));
        }
    }
}
