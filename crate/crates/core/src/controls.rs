//! Target-oriented control laws and the constructive results built on them.
//!
//! | scheme       | step                          |
//! |--------------|-------------------------------|
//! | `Vtoc`       | `f(cT + (1−c)x)`              |
//! | `Vmtoc`      | `cT + (1−c)f(x)`              |
//! | `Pf`         | `f((1−c)x)`                   |
//! | `Mpf`        | `(1−c)f(x)`                   |
//! | `DiagVmtoc`  | `CT + (I−C)f(x)`, `C = diag(c_j)` |
//!
//! The scalar one-dimensional TOC/MTOC schemes are the `d = 1` cases of
//! `Vtoc`/`Vmtoc`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::map::MapModel;
use crate::state::{check_dim, DomainSpec, StateVector};
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Vtoc,
    Vmtoc,
    Pf,
    Mpf,
    DiagVmtoc,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Vtoc => "vtoc",
            Scheme::Vmtoc => "vmtoc",
            Scheme::Pf => "pf",
            Scheme::Mpf => "mpf",
            Scheme::DiagVmtoc => "diag-vmtoc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vtoc" | "toc" => Some(Scheme::Vtoc),
            "vmtoc" | "mtoc" => Some(Scheme::Vmtoc),
            "pf" => Some(Scheme::Pf),
            "mpf" => Some(Scheme::Mpf),
            "diag-vmtoc" | "diag" => Some(Scheme::DiagVmtoc),
            _ => None,
        }
    }

    /// PF and MPF act with the implicit target `T = 0`.
    pub fn uses_target(self) -> bool {
        !matches!(self, Scheme::Pf | Scheme::Mpf)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Intensity {
    Scalar(f64),
    Diagonal(Vec<f64>),
}

fn check_intensity(c: f64) -> Result<()> {
    if (0.0..1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::InvalidIntensity(c))
    }
}

/// Scheme, intensity and target of one control law.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlConfig {
    scheme: Scheme,
    intensity: Intensity,
    target: StateVector,
}

impl ControlConfig {
    /// Validates intensities (each in `[0, 1)`) and shapes. `target` may be
    /// omitted for PF/MPF; `dim` gives the state dimension in that case.
    pub fn new(
        scheme: Scheme,
        intensity: Intensity,
        target: Option<StateVector>,
        dim: usize,
    ) -> Result<Self> {
        match (&intensity, scheme) {
            (Intensity::Scalar(c), _) => check_intensity(*c)?,
            (Intensity::Diagonal(cs), Scheme::DiagVmtoc) => {
                check_dim(cs.len(), dim)?;
                cs.iter().try_for_each(|c| check_intensity(*c))?;
            }
            (Intensity::Diagonal(_), _) => {
                return Err(Error::InvalidParameter {
                    name: "intensity",
                    reason: "per-stage intensities require the diag-vmtoc scheme",
                })
            }
        }
        let intensity = match (intensity, scheme) {
            (Intensity::Scalar(c), Scheme::DiagVmtoc) => Intensity::Diagonal(vec![c; dim]),
            (i, _) => i,
        };
        let target = if scheme.uses_target() {
            let t = target.ok_or(Error::InvalidParameter {
                name: "target",
                reason: "this scheme needs a target",
            })?;
            t.check_dim(dim)?;
            t
        } else {
            StateVector::zeros(dim)
        };
        Ok(Self {
            scheme,
            intensity,
            target,
        })
    }

    pub fn vmtoc(c: f64, target: StateVector) -> Result<Self> {
        let d = target.dim();
        Self::new(Scheme::Vmtoc, Intensity::Scalar(c), Some(target), d)
    }

    pub fn vtoc(c: f64, target: StateVector) -> Result<Self> {
        let d = target.dim();
        Self::new(Scheme::Vtoc, Intensity::Scalar(c), Some(target), d)
    }

    pub fn pf(c: f64, dim: usize) -> Result<Self> {
        Self::new(Scheme::Pf, Intensity::Scalar(c), None, dim)
    }

    pub fn mpf(c: f64, dim: usize) -> Result<Self> {
        Self::new(Scheme::Mpf, Intensity::Scalar(c), None, dim)
    }

    pub fn diagonal(cs: Vec<f64>, target: StateVector) -> Result<Self> {
        let d = target.dim();
        Self::new(Scheme::DiagVmtoc, Intensity::Diagonal(cs), Some(target), d)
    }

    /// Same scheme and target with a different scalar intensity. For
    /// `DiagVmtoc` this yields `C = c·I`.
    pub fn with_scalar(&self, c: f64) -> Result<Self> {
        Self::new(
            self.scheme,
            Intensity::Scalar(c),
            Some(self.target.clone()),
            self.dim(),
        )
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn intensity(&self) -> &Intensity {
        &self.intensity
    }

    /// The scalar intensity, if the scheme has one.
    pub fn scalar(&self) -> Option<f64> {
        match self.intensity {
            Intensity::Scalar(c) => Some(c),
            Intensity::Diagonal(_) => None,
        }
    }

    /// Intensity of stage `j`.
    pub fn stage_intensity(&self, j: usize) -> f64 {
        match &self.intensity {
            Intensity::Scalar(c) => *c,
            Intensity::Diagonal(cs) => cs[j],
        }
    }

    pub fn target(&self) -> &StateVector {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// Checks the config against a model: dimension and target membership.
    pub fn validate_for(&self, domain: &DomainSpec) -> Result<()> {
        check_dim(self.dim(), domain.dim())?;
        if self.scheme.uses_target() && !domain.contains_unchecked(self.target.as_slice()) {
            return Err(Error::TargetOutsideDomain);
        }
        Ok(())
    }

    /// `φ(x)_j = c_j·T_j + (1 − c_j)·x_j`, written into `out`.
    fn blend_into(&self, x: &[f64], out: &mut [f64]) {
        let t = self.target.as_slice();
        match &self.intensity {
            Intensity::Scalar(c) => {
                for j in 0..x.len() {
                    out[j] = c * t[j] + (1.0 - c) * x[j];
                }
            }
            Intensity::Diagonal(cs) => {
                for j in 0..x.len() {
                    out[j] = cs[j] * t[j] + (1.0 - cs[j]) * x[j];
                }
            }
        }
    }

    /// One controlled step without allocation; `scratch` has length `d`.
    pub fn step_into<M: MapModel + ?Sized>(
        &self,
        f: &M,
        x: &[f64],
        scratch: &mut [f64],
        out: &mut [f64],
    ) {
        match self.scheme {
            Scheme::Vmtoc | Scheme::DiagVmtoc => {
                f.eval_into(x, scratch);
                self.blend_into(scratch, out);
            }
            Scheme::Vtoc => {
                self.blend_into(x, scratch);
                f.eval_into(scratch, out);
            }
            Scheme::Pf => {
                let c = self.stage_intensity(0);
                for j in 0..x.len() {
                    scratch[j] = (1.0 - c) * x[j];
                }
                f.eval_into(scratch, out);
            }
            Scheme::Mpf => {
                let c = self.stage_intensity(0);
                f.eval_into(x, scratch);
                for j in 0..x.len() {
                    out[j] = (1.0 - c) * scratch[j];
                }
            }
        }
    }
}

/// One step of the controlled map `g(x)`.
pub fn apply_control<M: MapModel + ?Sized>(
    f: &M,
    cfg: &ControlConfig,
    x: &StateVector,
) -> Result<StateVector> {
    check_dim(cfg.dim(), f.dim())?;
    x.check_dim(f.dim())?;
    let d = f.dim();
    let mut scratch = vec![0.0; d];
    let mut out = vec![0.0; d];
    cfg.step_into(f, x.as_slice(), &mut scratch, &mut out);
    StateVector::new(out)
}

/// The controlled map `g` as a model in its own right.
#[derive(Debug, Clone)]
pub struct Controlled<M> {
    map: M,
    cfg: ControlConfig,
}

impl<M: MapModel> Controlled<M> {
    pub fn new(map: M, cfg: ControlConfig) -> Result<Self> {
        cfg.validate_for(map.domain())?;
        Ok(Self { map, cfg })
    }

    pub fn config(&self) -> &ControlConfig {
        &self.cfg
    }

    pub fn inner(&self) -> &M {
        &self.map
    }
}

impl<M: MapModel> MapModel for Controlled<M> {
    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn domain(&self) -> &DomainSpec {
        self.map.domain()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let mut scratch = vec![0.0; x.len()];
        self.cfg.step_into(&self.map, x, &mut scratch, out);
    }

    /// Chain rule on the inner Jacobian; `None` when the inner map has no
    /// analytic Jacobian.
    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        let d = x.len();
        let scale = |m: &mut Matrix| {
            for i in 0..d {
                let s = 1.0 - self.cfg.stage_intensity(i);
                m.row_mut(i).scale_mut(s);
            }
        };
        match self.cfg.scheme {
            Scheme::Vmtoc | Scheme::DiagVmtoc | Scheme::Mpf => {
                let mut j = self.map.analytic_jacobian(x)?;
                scale(&mut j);
                Some(j)
            }
            Scheme::Vtoc | Scheme::Pf => {
                let mut y = vec![0.0; d];
                if self.cfg.scheme == Scheme::Vtoc {
                    self.cfg.blend_into(x, &mut y);
                } else {
                    let c = self.cfg.stage_intensity(0);
                    for i in 0..d {
                        y[i] = (1.0 - c) * x[i];
                    }
                }
                let j = self.map.analytic_jacobian(&y)?;
                Some(j * (1.0 - self.cfg.stage_intensity(0)))
            }
        }
    }
}

/// Result of combining two successive VMTOC steps.
#[derive(Debug, Clone, PartialEq)]
pub enum Composition {
    /// Equivalent single VMTOC `(c, T)`.
    Control { c: f64, target: StateVector },
    /// Both intensities were zero: the combination is the bare map.
    Identity,
}

/// Applying `(c1, T1)` and then `(c2, T2)` after the map equals one VMTOC
/// with `c = c1(1 − c2) + c2` and
/// `T = [c1(1 − c2)/c]·T1 + [c2/c]·T2`.
///
/// A zero intensity is treated as the identity control and passes the other
/// pair through unchanged.
pub fn compose_vmtoc(
    first: (f64, &StateVector),
    second: (f64, &StateVector),
) -> Result<Composition> {
    let (c1, t1) = first;
    let (c2, t2) = second;
    check_intensity(c1)?;
    check_intensity(c2)?;
    match (c1 == 0.0, c2 == 0.0) {
        (true, true) => return Ok(Composition::Identity),
        (false, true) => {
            return Ok(Composition::Control {
                c: c1,
                target: t1.clone(),
            })
        }
        (true, false) => {
            return Ok(Composition::Control {
                c: c2,
                target: t2.clone(),
            })
        }
        (false, false) => {}
    }
    t2.check_dim(t1.dim())?;
    let w1 = c1 * (1.0 - c2);
    let c = w1 + c2;
    let (a1, a2) = (w1 / c, c2 / c);
    let target = t1
        .iter()
        .zip(t2.iter())
        .map(|(p, q)| a1 * p + a2 * q)
        .collect();
    Ok(Composition::Control {
        c,
        target: StateVector::new(target)?,
    })
}

/// Picks `(c_K, T_K)` such that `K` is an equilibrium of
/// `g(x) = c_K·T_K + (1 − c_K)·f(x)`.
///
/// `T_K = αK + (1 − α)f(K)` lies on the ray from `K` in direction
/// `K − f(K)`, and `c_K = 1/α`. Larger `α` means a weaker control with a
/// more distant target.
pub fn target_for_state<M: MapModel + ?Sized>(
    f: &M,
    k: &StateVector,
    alpha: f64,
) -> Result<(f64, StateVector)> {
    k.check_dim(f.dim())?;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    let domain = f.domain();
    if !domain.contains_unchecked(k.as_slice()) {
        return Err(Error::OutsideDomain);
    }
    if !domain.is_interior(k.as_slice())? {
        return Err(Error::BoundaryPoint);
    }
    let fk = f.evaluate(k)?;
    let target: Vec<f64> = k
        .iter()
        .zip(fk.iter())
        .map(|(kj, fj)| kj + (alpha - 1.0) * (kj - fj))
        .collect();
    let target = StateVector::new(target).map_err(|_| Error::AlphaTooLarge)?;
    if !domain.contains_unchecked(target.as_slice()) {
        return Err(Error::AlphaTooLarge);
    }
    Ok((1.0 / alpha, target))
}

/// The conjugacy `φ(x) = cT + (1 − c)x` between VTOC and VMTOC.
pub fn conjugate_state(cfg: &ControlConfig, x: &StateVector) -> Result<StateVector> {
    let c = scalar_conjugacy_intensity(cfg)?;
    x.check_dim(cfg.dim())?;
    let v = x
        .iter()
        .zip(cfg.target.iter())
        .map(|(xj, tj)| c * tj + (1.0 - c) * xj)
        .collect();
    StateVector::new(v)
}

/// `φ⁻¹(y) = (y − cT)/(1 − c)`.
pub fn conjugate_inverse(cfg: &ControlConfig, y: &StateVector) -> Result<StateVector> {
    let c = scalar_conjugacy_intensity(cfg)?;
    y.check_dim(cfg.dim())?;
    let v = y
        .iter()
        .zip(cfg.target.iter())
        .map(|(yj, tj)| (yj - c * tj) / (1.0 - c))
        .collect();
    StateVector::new(v)
}

fn scalar_conjugacy_intensity(cfg: &ControlConfig) -> Result<f64> {
    match (cfg.scheme, cfg.scalar()) {
        (Scheme::Vtoc | Scheme::Vmtoc | Scheme::Pf | Scheme::Mpf, Some(c)) => Ok(c),
        _ => Err(Error::Precondition(
            "conjugacy needs a scalar-intensity target-oriented scheme",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::FnMap;
    use crate::state::NormKind;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::from_slice(v).unwrap()
    }

    fn logistic_pair() -> FnMap {
        FnMap::new(DomainSpec::orthant(2), |x, out| {
            out[0] = 3.0 * x[1] * libm::exp(-0.1 * x[0]);
            out[1] = 0.5 * x[0] + 0.2 * x[1];
        })
    }

    #[test]
    fn zero_intensity_is_the_bare_map() {
        let f = logistic_pair();
        let x = sv(&[2.0, 7.0]);
        let cfg = ControlConfig::vmtoc(0.0, sv(&[5.0, 5.0])).unwrap();
        assert_eq!(
            apply_control(&f, &cfg, &x).unwrap(),
            f.evaluate(&x).unwrap()
        );
    }

    #[test]
    fn intensity_is_validated() {
        assert_eq!(
            ControlConfig::vmtoc(1.0, sv(&[1.0])),
            Err(Error::InvalidIntensity(1.0))
        );
        assert_eq!(
            ControlConfig::vmtoc(-0.1, sv(&[1.0])),
            Err(Error::InvalidIntensity(-0.1))
        );
        assert!(ControlConfig::diagonal(alloc::vec![0.2, 1.5], sv(&[1.0, 1.0])).is_err());
        assert!(matches!(
            ControlConfig::diagonal(alloc::vec![0.2], sv(&[1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn target_must_lie_in_domain() {
        let f = logistic_pair();
        let cfg = ControlConfig::vmtoc(0.3, sv(&[-1.0, 1.0])).unwrap();
        assert_eq!(
            Controlled::new(&f, cfg).err(),
            Some(Error::TargetOutsideDomain)
        );
    }

    #[test]
    fn fixed_point_survives_any_intensity() {
        let k = sv(&[2.0, 3.0]);
        let f = FnMap::affine_about(DomainSpec::full(2), k.clone(), -1.7).unwrap();
        for c in [0.0, 0.2, 0.9] {
            let cfg = ControlConfig::vmtoc(c, k.clone()).unwrap();
            let y = apply_control(&f, &cfg, &k).unwrap();
            assert!(y.distance(&k, NormKind::Max) < 1e-15);
        }
    }

    #[test]
    fn each_scheme_matches_its_formula() {
        let f = logistic_pair();
        let x = sv(&[4.0, 1.5]);
        let t = sv(&[3.0, 8.0]);
        let c = 0.35;
        let fx = f.evaluate(&x).unwrap();
        let vm = apply_control(&f, &ControlConfig::vmtoc(c, t.clone()).unwrap(), &x).unwrap();
        for j in 0..2 {
            assert_eq!(vm[j], c * t[j] + (1.0 - c) * fx[j]);
        }
        let pre = sv(&[c * t[0] + (1.0 - c) * x[0], c * t[1] + (1.0 - c) * x[1]]);
        let vt = apply_control(&f, &ControlConfig::vtoc(c, t.clone()).unwrap(), &x).unwrap();
        assert_eq!(vt, f.evaluate(&pre).unwrap());
        let pf = apply_control(&f, &ControlConfig::pf(c, 2).unwrap(), &x).unwrap();
        let shrunk = sv(&[(1.0 - c) * x[0], (1.0 - c) * x[1]]);
        assert_eq!(pf, f.evaluate(&shrunk).unwrap());
        let mpf = apply_control(&f, &ControlConfig::mpf(c, 2).unwrap(), &x).unwrap();
        assert_eq!(mpf, sv(&[(1.0 - c) * fx[0], (1.0 - c) * fx[1]]));
        let cs = alloc::vec![0.1, 0.6];
        let dg = apply_control(
            &f,
            &ControlConfig::diagonal(cs.clone(), t.clone()).unwrap(),
            &x,
        )
        .unwrap();
        for j in 0..2 {
            assert_eq!(dg[j], cs[j] * t[j] + (1.0 - cs[j]) * fx[j]);
        }
    }

    #[test]
    fn diagonal_with_uniform_intensity_equals_vmtoc() {
        let f = logistic_pair();
        let t = sv(&[3.0, 8.0]);
        let vm = ControlConfig::vmtoc(0.42, t.clone()).unwrap();
        let dg = ControlConfig::diagonal(alloc::vec![0.42, 0.42], t).unwrap();
        for x in [[0.0, 0.0], [1.0, 2.0], [40.0, 0.3]] {
            let x = sv(&x);
            let a = apply_control(&f, &vm, &x).unwrap();
            let b = apply_control(&f, &dg, &x).unwrap();
            for j in 0..2 {
                assert_eq!(a[j].to_bits(), b[j].to_bits());
            }
        }
    }

    #[test]
    fn zero_target_reduces_to_proportional_feedback() {
        let f = logistic_pair();
        let zero = StateVector::zeros(2);
        for x in [[0.5, 0.5], [10.0, 3.0]] {
            let x = sv(&x);
            let vm = apply_control(&f, &ControlConfig::vmtoc(0.3, zero.clone()).unwrap(), &x);
            let mpf = apply_control(&f, &ControlConfig::mpf(0.3, 2).unwrap(), &x);
            assert_eq!(vm, mpf);
            let vt = apply_control(&f, &ControlConfig::vtoc(0.3, zero.clone()).unwrap(), &x);
            let pf = apply_control(&f, &ControlConfig::pf(0.3, 2).unwrap(), &x);
            assert_eq!(vt, pf);
        }
    }

    #[test]
    fn composition_examples() {
        let t1 = sv(&[3.0, 0.0]);
        let t2 = sv(&[0.0, 6.0]);
        match compose_vmtoc((0.5, &t1), (0.5, &t2)).unwrap() {
            Composition::Control { c, target } => {
                assert_eq!(c, 0.75);
                assert!((target[0] - 1.0).abs() < 1e-15);
                assert!((target[1] - 4.0).abs() < 1e-15);
            }
            Composition::Identity => panic!("expected a control"),
        }
        assert_eq!(
            compose_vmtoc((0.3, &t1), (0.0, &t2)).unwrap(),
            Composition::Control {
                c: 0.3,
                target: t1.clone()
            }
        );
        assert_eq!(
            compose_vmtoc((0.0, &t1), (0.6, &t2)).unwrap(),
            Composition::Control {
                c: 0.6,
                target: t2.clone()
            }
        );
        assert_eq!(
            compose_vmtoc((0.0, &t1), (0.0, &t2)).unwrap(),
            Composition::Identity
        );
    }

    #[test]
    fn target_for_state_examples() {
        let f = logistic_pair();
        let k = sv(&[4.0, 2.0]);
        let (c, t) = target_for_state(&f, &k, 2.0).unwrap();
        assert_eq!(c, 0.5);
        let fk = f.evaluate(&k).unwrap();
        for j in 0..2 {
            assert!((t[j] - (2.0 * k[j] - fk[j])).abs() < 1e-12);
        }
        let g = apply_control(&f, &ControlConfig::vmtoc(c, t).unwrap(), &k).unwrap();
        assert!(g.distance(&k, NormKind::Max) < 1e-12);
    }

    #[test]
    fn target_for_fixed_point_is_the_point() {
        let k = sv(&[2.0, 3.0]);
        let f = FnMap::affine_about(DomainSpec::orthant(2), k.clone(), 1.9).unwrap();
        for alpha in [1.01, 3.0, 50.0] {
            let (_, t) = target_for_state(&f, &k, alpha).unwrap();
            assert_eq!(t, k);
        }
    }

    #[test]
    fn target_for_state_errors() {
        let f = logistic_pair();
        assert_eq!(
            target_for_state(&f, &sv(&[0.0, 2.0]), 2.0),
            Err(Error::BoundaryPoint)
        );
        assert_eq!(
            target_for_state(&f, &sv(&[1.0, 1.0]), 1.0),
            Err(Error::InvalidAlpha(1.0))
        );
        // f(K) = (3·8·e^{-0.1}, 0.5 + 1.6) puts T_K far into negative L for big alpha.
        assert_eq!(
            target_for_state(&f, &sv(&[1.0, 8.0]), 10.0),
            Err(Error::AlphaTooLarge)
        );
    }

    #[test]
    fn conjugacy_map_properties() {
        let t = sv(&[3.0, 8.0]);
        let x = sv(&[1.0, -2.0]);
        let id = ControlConfig::vmtoc(0.0, t.clone()).unwrap();
        assert_eq!(conjugate_state(&id, &x).unwrap(), x);
        let cfg = ControlConfig::vtoc(0.4, t.clone()).unwrap();
        assert_eq!(conjugate_state(&cfg, &t).unwrap(), t);
        let y = conjugate_state(&cfg, &x).unwrap();
        assert!(
            conjugate_inverse(&cfg, &y)
                .unwrap()
                .distance(&x, NormKind::Max)
                < 1e-14
        );
        let diag = ControlConfig::diagonal(alloc::vec![0.1, 0.2], t).unwrap();
        assert!(conjugate_state(&diag, &x).is_err());
    }

    #[test]
    fn controlled_jacobian_uses_chain_rule() {
        let k = sv(&[2.0, 3.0]);
        let f = FnMap::new(DomainSpec::full(2), |x, out| {
            out[0] = x[0] * x[1];
            out[1] = libm::sin(x[0]);
        })
        .with_jacobian(|x| Matrix::from_row_slice(2, 2, &[x[1], x[0], libm::cos(x[0]), 0.0]));
        let pts = [sv(&[0.4, 1.1]), sv(&[-2.0, 0.7])];
        for cfg in [
            ControlConfig::vmtoc(0.3, k.clone()).unwrap(),
            ControlConfig::vtoc(0.3, k.clone()).unwrap(),
            ControlConfig::pf(0.3, 2).unwrap(),
            ControlConfig::mpf(0.3, 2).unwrap(),
            ControlConfig::diagonal(alloc::vec![0.1, 0.7], k.clone()).unwrap(),
        ] {
            let g = Controlled::new(&f, cfg).unwrap();
            assert!(crate::map::jacobian_consistency(&g, &pts).unwrap() < 1e-6);
        }
    }
}
