//! Parameter families used by experiment configurations: the parameter
//! schedule `k(n)`, the approximation ratio `ρ` and the growth function `f`.

use serde::{Deserialize, Serialize};

use super::{ceil_tol, floor_tol};
use crate::error::{Error, Result};

/// `k(n)` for the planted experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSchedule {
    Const(f64),
    /// `⌈log₂ n⌉`.
    Log2,
    /// `⌈√(log₂ n)⌉`.
    SqrtLog2,
    /// One value per entry of the `n` list.
    Explicit(Vec<f64>),
}

impl KSchedule {
    /// `k` for the `index`-th value `n` of a sweep.
    pub fn k_at(&self, n: usize, index: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::param("k schedules need n >= 2"));
        }
        let log2 = (n as f64).log2();
        let k = match self {
            KSchedule::Const(c) => *c,
            KSchedule::Log2 => ceil_tol(log2) as f64,
            KSchedule::SqrtLog2 => ceil_tol(log2.sqrt()) as f64,
            KSchedule::Explicit(ks) => *ks
                .get(index)
                .ok_or_else(|| Error::param(format!("explicit k schedule has no entry {}", index + 1)))?,
        };
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::param(format!("k({n}) = {k} must be positive")));
        }
        Ok(k)
    }
}

/// Approximation ratio `ρ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoSpec {
    Const(f64),
    /// `ρ(k) = k^α`.
    Power(f64),
    /// `ρ(k)` for `k = 1, 2, ..`; the last entry extends to larger `k`.
    Table(Vec<f64>),
}

/// Upper end of the grid on which `k ↦ k/ρ(k)` is checked.
pub const RHO_GRID_MAX: u64 = 1_000_000;

impl RhoSpec {
    /// `ρ(x)`; tables are read at `⌊x⌋`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RhoSpec::Const(c) => *c,
            RhoSpec::Power(a) => x.powf(*a),
            RhoSpec::Table(t) => {
                let i = (x.floor().max(1.0) as usize - 1).min(t.len() - 1);
                t[i]
            }
        }
    }

    /// `ρ ≥ 1`, and `k ↦ k/ρ(k)` nondecreasing and growing on `1..=10⁶`.
    pub fn validate(&self) -> Result<()> {
        if let RhoSpec::Table(t) = self {
            if t.is_empty() {
                return Err(Error::param("ρ table is empty"));
            }
        }
        let mut prev = f64::NEG_INFINITY;
        let mut first = None;
        for k in 1..=RHO_GRID_MAX {
            let rho = self.eval(k as f64);
            if !(rho.is_finite() && rho >= 1.0) {
                return Err(Error::param(format!("ρ({k}) = {rho} is not a ratio >= 1")));
            }
            let ratio = k as f64 / rho;
            if ratio < prev * (1.0 - 1e-12) {
                return Err(Error::param(format!("k/ρ(k) decreases at k = {k}")));
            }
            first.get_or_insert(ratio);
            prev = ratio;
        }
        if prev <= first.unwrap_or(0.0) {
            return Err(Error::param("k/ρ(k) does not grow on the check grid"));
        }
        Ok(())
    }
}

/// Growth function `f` of the gap problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FSpec {
    /// `f(k) = k^t`, `t ≥ 1`.
    Power(u32),
    /// `f(k) = 2^k`.
    Exp2,
}

impl FSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FSpec::Power(0) => Err(Error::param("f(k) = k^0 is bounded")),
            _ => Ok(()),
        }
    }

    /// `f(ℓ)`, or `None` beyond `u64`.
    pub fn eval(&self, ell: u64) -> Option<u64> {
        match self {
            FSpec::Power(t) => ell.checked_pow(*t),
            FSpec::Exp2 => 1u64.checked_shl(ell.try_into().ok()?).filter(|_| ell < 64),
        }
    }

    /// `f⁻¹(n) = max({ℓ | f(ℓ) ≤ n} ∪ {0})`.
    pub fn inverse(&self, n: u64) -> Result<u64> {
        self.validate()?;
        let mut best = 0;
        let mut ell = 0u64;
        while let Some(v) = self.eval(ell) {
            if v > n {
                break;
            }
            best = ell;
            ell += 1;
        }
        Ok(best)
    }
}

/// Derived parameters of a gap instance on `n` vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapParameters {
    pub n: u64,
    pub f_inverse: u64,
    pub rho_at_sqrt_n: f64,
    pub sqrt_n_over_rho: f64,
    pub k: u64,
    pub clique_parameter: u64,
    pub planted_size: u64,
    pub q: f64,
}

/// Largest `k ≤ log₂ n` with `2k+1 ≤ min(f⁻¹(n), √n/ρ(√n))`. `ρ` is read at
/// the real `√n` for closed forms and at `⌊√n⌋` for tables.
pub fn gap_parameters(n: u64, f: &FSpec, rho: &RhoSpec) -> Result<GapParameters> {
    if n < 2 {
        return Err(Error::param("gap instances need n >= 2"));
    }
    rho.validate()?;
    let f_inverse = f.inverse(n)?;
    let sqrt_n = (n as f64).sqrt();
    let rho_at_sqrt_n = rho.eval(sqrt_n);
    let sqrt_n_over_rho = sqrt_n / rho_at_sqrt_n;
    let cap = (f_inverse as f64).min(sqrt_n_over_rho);
    let k = floor_tol((cap - 1.0) / 2.0).min(floor_tol((n as f64).log2()));
    if k < 1 {
        return Err(Error::Infeasible(format!(
            "no k >= 1 has 2k+1 <= min(f⁻¹({n}) = {f_inverse}, √n/ρ(√n) = {sqrt_n_over_rho:.4})"
        )));
    }
    let k = k as u64;
    Ok(GapParameters {
        n,
        f_inverse,
        rho_at_sqrt_n,
        sqrt_n_over_rho,
        k,
        clique_parameter: 2 * k + 1,
        planted_size: ceil_tol(sqrt_n),
        q: (n as f64).powf(-1.0 / k as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_schedules() {
        let s = KSchedule::SqrtLog2;
        assert_eq!(s.k_at(32, 0).unwrap(), 3.0);
        assert_eq!(s.k_at(16, 0).unwrap(), 2.0);
        assert_eq!(s.k_at(256, 0).unwrap(), 3.0);
        assert_eq!(KSchedule::Log2.k_at(256, 0).unwrap(), 8.0);
        assert_eq!(KSchedule::Log2.k_at(100, 0).unwrap(), 7.0);
        assert_eq!(KSchedule::Explicit(vec![2.0, 4.5]).k_at(10, 1).unwrap(), 4.5);
        assert!(KSchedule::Explicit(vec![2.0]).k_at(10, 1).is_err());
        assert!(KSchedule::Const(0.0).k_at(10, 0).is_err());
    }

    #[test]
    fn f_inverse() {
        assert_eq!(FSpec::Exp2.inverse(256).unwrap(), 8);
        assert_eq!(FSpec::Exp2.inverse(255).unwrap(), 7);
        assert_eq!(FSpec::Exp2.inverse(0).unwrap(), 0);
        assert_eq!(FSpec::Power(2).inverse(99).unwrap(), 9);
        assert_eq!(FSpec::Power(1).inverse(7).unwrap(), 7);
        assert_eq!(FSpec::Exp2.inverse(u64::MAX).unwrap(), 63);
        assert!(FSpec::Power(0).inverse(5).is_err());
    }

    #[test]
    fn rho_validation() {
        assert!(RhoSpec::Const(1.0).validate().is_ok());
        assert!(RhoSpec::Power(0.5).validate().is_ok());
        assert!(RhoSpec::Power(1.0).validate().is_err());
        assert!(RhoSpec::Power(1.5).validate().is_err());
        assert!(RhoSpec::Const(0.5).validate().is_err());
        assert!(RhoSpec::Table(vec![1.0, 1.5, 2.0]).validate().is_ok());
        assert!(RhoSpec::Table(vec![1.0, 3.0]).validate().is_err());
        assert!(RhoSpec::Table(vec![]).validate().is_err());
        assert_eq!(RhoSpec::Table(vec![1.0, 1.5, 2.0]).eval(2.9), 1.5);
        assert_eq!(RhoSpec::Table(vec![1.0, 1.5, 2.0]).eval(50.0), 2.0);
    }

    #[test]
    fn gap_examples() {
        let p = gap_parameters(256, &FSpec::Exp2, &RhoSpec::Const(1.0)).unwrap();
        assert_eq!((p.f_inverse, p.k, p.clique_parameter, p.planted_size), (8, 3, 7, 16));
        assert_eq!(p.sqrt_n_over_rho, 16.0);
        let p = gap_parameters(64, &FSpec::Exp2, &RhoSpec::Const(1.0)).unwrap();
        assert_eq!((p.f_inverse, p.k), (6, 2));
        assert!(gap_parameters(8, &FSpec::Exp2, &RhoSpec::Const(1.0)).is_err());
        let p = gap_parameters(1 << 20, &FSpec::Power(1), &RhoSpec::Power(0.5)).unwrap();
        // √n = 1024, ρ = 32, √n/ρ = 32, capped by log₂ n = 20.
        assert_eq!(p.k, 15);
    }
}
