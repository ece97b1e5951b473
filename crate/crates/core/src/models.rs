//! Benchmark maps: the three-stage LPA flour beetle model and the delayed
//! Ricker equation lifted to a first-order system.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::map::MapModel;
use crate::state::{DomainSpec, StateVector};
use crate::Matrix;

/// Parameters of the larvae–pupae–adults model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpaParams {
    /// Larval recruits per adult per unit time without cannibalism.
    pub b: f64,
    /// Cannibalism of eggs by larvae.
    pub c_el: f64,
    /// Cannibalism of eggs by adults.
    pub c_ea: f64,
    /// Cannibalism of pupae by adults.
    pub c_pa: f64,
    pub mu_l: f64,
    pub mu_a: f64,
}

impl Default for LpaParams {
    /// The chaotic parameter set (`b = 10.45`, `c_pa = 0.35`, `mu_A = 0.96`).
    fn default() -> Self {
        Self {
            b: 10.45,
            c_el: 0.01731,
            c_ea: 0.01310,
            c_pa: 0.35,
            mu_l: 0.200,
            mu_a: 0.96,
        }
    }
}

impl LpaParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.b, self.c_el, self.c_ea, self.c_pa, self.mu_l, self.mu_a,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lpa",
                reason: "parameters must be finite",
            });
        }
        if !(self.b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: "must be positive",
            });
        }
        if self.c_el < 0.0 || self.c_ea < 0.0 || self.c_pa < 0.0 {
            return Err(Error::InvalidParameter {
                name: "c_el/c_ea/c_pa",
                reason: "cannibalism coefficients must be nonnegative",
            });
        }
        if !(0.0 < self.mu_l && self.mu_l < 1.0) || !(0.0 < self.mu_a && self.mu_a < 1.0) {
            return Err(Error::InvalidParameter {
                name: "mu_l/mu_a",
                reason: "mortality rates must lie in (0, 1)",
            });
        }
        Ok(())
    }

    /// Supremum of the larval recruitment `b·A·exp(−c_ea·A)` over `A ≥ 0`,
    /// i.e. `e⁻¹·b/c_ea`. Infinite when `c_ea = 0`.
    pub fn recruitment_bound(&self) -> f64 {
        self.b / (core::f64::consts::E * self.c_ea)
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let (l, p, a) = (x[0], x[1], x[2]);
        out[0] = self.b * a * libm::exp(-self.c_el * l - self.c_ea * a);
        out[1] = (1.0 - self.mu_l) * l;
        out[2] = p * libm::exp(-self.c_pa * a) + a * (1.0 - self.mu_a);
    }
}

/// `f(L, P, A)` of the LPA model.
///
/// With `strict`, negative components are rejected; otherwise the formula is
/// evaluated as is.
pub fn lpa_eval(p: &LpaParams, x: &StateVector, strict: bool) -> Result<StateVector> {
    x.check_dim(3)?;
    if strict && x.iter().any(|v| *v < 0.0) {
        return Err(Error::OutsideDomain);
    }
    let mut out = [0.0; 3];
    p.eval_into(x.as_slice(), &mut out);
    StateVector::from_slice(&out)
}

/// Analytic Jacobian of the LPA map. Entries (1,2), (2,2), (2,3) and (3,1)
/// are structurally zero.
pub fn lpa_jacobian(p: &LpaParams, x: &[f64]) -> Matrix {
    let (l, pupae, a) = (x[0], x[1], x[2]);
    let e = libm::exp(-p.c_ea * a - p.c_el * l);
    let ep = libm::exp(-p.c_pa * a);
    Matrix::from_row_slice(
        3,
        3,
        &[
            -p.b * p.c_el * a * e,
            0.0,
            p.b * (1.0 - p.c_ea * a) * e,
            1.0 - p.mu_l,
            0.0,
            0.0,
            0.0,
            ep,
            1.0 - p.mu_a - p.c_pa * pupae * ep,
        ],
    )
}

/// The LPA map on the nonnegative orthant of `R^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lpa {
    params: LpaParams,
    domain: DomainSpec,
}

impl Lpa {
    pub fn new(params: LpaParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            domain: DomainSpec::orthant(3),
        })
    }

    pub fn params(&self) -> &LpaParams {
        &self.params
    }
}

impl Default for Lpa {
    fn default() -> Self {
        Self::new(LpaParams::default()).expect("default parameters are valid")
    }
}

impl MapModel for Lpa {
    fn dim(&self) -> usize {
        3
    }

    fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        self.params.eval_into(x, out)
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        Some(lpa_jacobian(&self.params, x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RickerParams {
    pub r: f64,
    /// Time lag `d ≥ 2`; also the dimension of the lifted system.
    pub delay: usize,
}

/// `u_{n+1} = u_n·exp(r − u_{n−d+1})` as the first-order system
/// `f(x) = (x_1·exp(r − x_d), x_1, …, x_{d−1})` with `x = (u_n, …, u_{n−d+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct RickerDelay {
    params: RickerParams,
    domain: DomainSpec,
}

pub fn ricker_lift(p: RickerParams) -> Result<RickerDelay> {
    if p.delay < 2 {
        return Err(Error::InvalidParameter {
            name: "delay",
            reason: "the delay must be at least 2",
        });
    }
    if !p.r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: "must be finite",
        });
    }
    Ok(RickerDelay {
        params: p,
        domain: DomainSpec::orthant(p.delay),
    })
}

impl RickerDelay {
    pub fn params(&self) -> &RickerParams {
        &self.params
    }
}

impl MapModel for RickerDelay {
    fn dim(&self) -> usize {
        self.params.delay
    }

    fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let d = x.len();
        out[0] = x[0] * libm::exp(self.params.r - x[d - 1]);
        out[1..].copy_from_slice(&x[..d - 1]);
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        let d = x.len();
        let growth = libm::exp(self.params.r - x[d - 1]);
        let mut j = Matrix::zeros(d, d);
        j[(0, 0)] = growth;
        j[(0, d - 1)] += -x[0] * growth;
        for i in 1..d {
            j[(i, i - 1)] = 1.0;
        }
        Some(j)
    }
}

/// Reads a lifted delay-line orbit back as the scalar series it encodes.
///
/// Every `d`-th state holds `d` consecutive values `(u_n, …, u_{n−d+1})`;
/// those windows are emitted oldest first. For an uncontrolled lift this is
/// exactly the scalar recursion. A stabilized state with unequal components
/// reads as a `d`-periodic scalar series.
pub fn unfold_delay_line(orbit: &[StateVector]) -> Vec<f64> {
    let Some(first) = orbit.first() else {
        return Vec::new();
    };
    let d = first.dim();
    orbit
        .iter()
        .step_by(d.max(1))
        .flat_map(|s| s.as_slice().iter().rev().copied())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::jacobian_consistency;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::from_slice(v).unwrap()
    }

    #[test]
    fn origin_is_fixed() {
        let p = LpaParams::default();
        assert_eq!(lpa_eval(&p, &sv(&[0.0; 3]), true).unwrap(), sv(&[0.0; 3]));
    }

    #[test]
    fn strict_mode_rejects_negative_states() {
        let p = LpaParams::default();
        assert_eq!(
            lpa_eval(&p, &sv(&[-1.0, 0.0, 0.0]), true),
            Err(Error::OutsideDomain)
        );
        assert!(lpa_eval(&p, &sv(&[-1.0, 0.0, 0.0]), false).is_ok());
    }

    #[test]
    fn published_fixed_point() {
        let k = sv(&[28.0120, 22.4096, 4.6251]);
        let fk = lpa_eval(&LpaParams::default(), &k, true).unwrap();
        for j in 0..3 {
            assert!((fk[j] - k[j]).abs() < 1e-3, "component {j}: {}", fk[j]);
        }
    }

    #[test]
    fn recruitment_bound_from_formula() {
        // e⁻¹·10.45/0.01310, evaluated independently.
        let expected = 10.45 / 0.01310 / libm::exp(1.0);
        assert!((LpaParams::default().recruitment_bound() - expected).abs() < 1e-9);
        assert!((expected - 293.46).abs() < 0.01);
    }

    #[test]
    fn jacobian_zero_pattern() {
        let p = LpaParams::default();
        for x in [[0.0, 0.0, 0.0], [28.0, 22.4, 4.6], [250.0, 3.0, 120.0]] {
            let j = lpa_jacobian(&p, &x);
            for (r, c) in [(0, 1), (1, 1), (1, 2), (2, 0)] {
                assert_eq!(j[(r, c)], 0.0);
            }
            assert_eq!(j[(1, 0)], 1.0 - p.mu_l);
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        let bad = LpaParams {
            mu_a: 1.0,
            ..LpaParams::default()
        };
        assert!(Lpa::new(bad).is_err());
        let bad = LpaParams {
            b: 0.0,
            ..LpaParams::default()
        };
        assert!(Lpa::new(bad).is_err());
    }

    #[test]
    fn ricker_examples() {
        let f = ricker_lift(RickerParams { r: 2.0, delay: 2 }).unwrap();
        assert_eq!(f.evaluate(&sv(&[2.0, 2.0])).unwrap(), sv(&[2.0, 2.0]));
        let y = f.evaluate(&sv(&[1.0, 0.0])).unwrap();
        assert_eq!(y, sv(&[libm::exp(2.0), 1.0]));
        assert!(ricker_lift(RickerParams { r: 2.0, delay: 1 }).is_err());
    }

    #[test]
    fn ricker_jacobian_matches_differences() {
        for d in [2, 3, 5] {
            let f = ricker_lift(RickerParams { r: 1.7, delay: d }).unwrap();
            let pts: Vec<StateVector> = (0..4)
                .map(|k| {
                    StateVector::new((0..d).map(|i| 0.3 + 0.7 * (i + k) as f64).collect()).unwrap()
                })
                .collect();
            assert!(jacobian_consistency(&f, &pts).unwrap() < 1e-6);
        }
    }

    #[test]
    fn unfold_reads_windows_oldest_first() {
        let orbit = [
            sv(&[2.0, 1.0]),
            sv(&[3.0, 2.0]),
            sv(&[4.0, 3.0]),
            sv(&[5.0, 4.0]),
        ];
        assert_eq!(unfold_delay_line(&orbit), alloc::vec![1.0, 2.0, 3.0, 4.0]);
        assert!(unfold_delay_line(&[]).is_empty());
    }
}
