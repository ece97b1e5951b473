//! The map interface every model and control wrapper implements.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{DomainSpec, StateVector};
use crate::Matrix;

/// A continuous self-map `f: D → D` of a convex domain.
///
/// Implementors provide `eval_into`; the analytic Jacobian is optional and
/// defaults to central finite differences through [`MapModel::jacobian`].
/// Evaluation must be a pure function of its input.
pub trait MapModel {
    fn dim(&self) -> usize;

    fn domain(&self) -> &DomainSpec;

    /// Writes `f(x)` into `out`. Both slices have length `dim()`.
    fn eval_into(&self, x: &[f64], out: &mut [f64]);

    fn analytic_jacobian(&self, _x: &[f64]) -> Option<Matrix> {
        None
    }

    fn evaluate(&self, x: &StateVector) -> Result<StateVector> {
        x.check_dim(self.dim())?;
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x.as_slice(), &mut out);
        StateVector::new(out)
    }

    fn jacobian(&self, x: &[f64]) -> Matrix {
        self.analytic_jacobian(x)
            .unwrap_or_else(|| finite_difference_jacobian(self, x))
    }
}

impl<M: MapModel + ?Sized> MapModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn domain(&self) -> &DomainSpec {
        (**self).domain()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).eval_into(x, out)
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        (**self).analytic_jacobian(x)
    }
}

impl<M: MapModel + ?Sized> MapModel for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn domain(&self) -> &DomainSpec {
        (**self).domain()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).eval_into(x, out)
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        (**self).analytic_jacobian(x)
    }
}

/// Finite-difference step for component value `v`.
pub fn fd_step(v: f64) -> f64 {
    1e-6 * (1.0 + v.abs())
}

/// Central finite-difference Jacobian with step `1e-6·(1+|x_i|)`.
pub fn finite_difference_jacobian<M: MapModel + ?Sized>(f: &M, x: &[f64]) -> Matrix {
    let d = f.dim();
    let mut jac = Matrix::zeros(d, d);
    let mut probe = x.to_vec();
    let mut plus = vec![0.0; d];
    let mut minus = vec![0.0; d];
    for j in 0..d {
        let h = fd_step(x[j]);
        probe[j] = x[j] + h;
        f.eval_into(&probe, &mut plus);
        probe[j] = x[j] - h;
        f.eval_into(&probe, &mut minus);
        probe[j] = x[j];
        // The actual spacing, which differs from 2h after rounding.
        let span = (x[j] + h) - (x[j] - h);
        for i in 0..d {
            jac[(i, j)] = (plus[i] - minus[i]) / span;
        }
    }
    jac
}

/// Largest entrywise relative discrepancy between two matrices.
///
/// Entry errors are `|a − b| / max(|a|, |b|, floor)` with
/// `floor = 1e-8·(1 + max|a|)`, so exact zeros and near-roots of an entry do
/// not blow up the ratio.
pub fn relative_matrix_error(a: &Matrix, b: &Matrix) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * (1.0 + scale);
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| (p - q).abs() / p.abs().max(q.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Checks the analytic Jacobian against finite differences at `points`,
/// returning the worst relative error (see [`relative_matrix_error`]).
/// Models without an analytic Jacobian report zero.
pub fn jacobian_consistency<M: MapModel + ?Sized>(f: &M, points: &[StateVector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        p.check_dim(f.dim())?;
        if let Some(analytic) = f.analytic_jacobian(p.as_slice()) {
            let numeric = finite_difference_jacobian(f, p.as_slice());
            worst = worst.max(relative_matrix_error(&analytic, &numeric));
        }
    }
    Ok(worst)
}

/// Returns the indices of sample points whose image leaves the domain.
pub fn self_map_violations<M: MapModel + ?Sized>(
    f: &M,
    samples: &[StateVector],
) -> Result<Vec<usize>> {
    let mut out = vec![0.0; f.dim()];
    let mut bad = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        x.check_dim(f.dim())?;
        f.eval_into(x.as_slice(), &mut out);
        if !f.domain().contains_unchecked(&out) || out.iter().any(|v| !v.is_finite()) {
            bad.push(i);
        }
    }
    Ok(bad)
}

type EvalFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;
type JacFn = dyn Fn(&[f64]) -> Matrix + Send + Sync;

/// A model built from closures; used for user-supplied and test maps.
pub struct FnMap {
    domain: DomainSpec,
    eval: Box<EvalFn>,
    jac: Option<Box<JacFn>>,
}

impl FnMap {
    pub fn new<F>(domain: DomainSpec, eval: F) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self {
            domain,
            eval: Box::new(eval),
            jac: None,
        }
    }

    pub fn with_jacobian<J>(mut self, jac: J) -> Self
    where
        J: Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    {
        self.jac = Some(Box::new(jac));
        self
    }

    /// The affine map `x ↦ K + slope·(x − K)`; its Jacobian is `slope·I`.
    pub fn affine_about(domain: DomainSpec, center: StateVector, slope: f64) -> Result<Self> {
        center.check_dim(domain.dim())?;
        let d = domain.dim();
        let k = center.clone().into_inner();
        let map = Self::new(domain, move |x, out| {
            for i in 0..x.len() {
                out[i] = k[i] + slope * (x[i] - k[i]);
            }
        })
        .with_jacobian(move |_| Matrix::identity(d, d) * slope);
        Ok(map)
    }
}

impl core::fmt::Debug for FnMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnMap")
            .field("domain", &self.domain)
            .field("analytic_jacobian", &self.jac.is_some())
            .finish()
    }
}

impl MapModel for FnMap {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (self.eval)(x, out)
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Option<Matrix> {
        self.jac.as_ref().map(|j| j(x))
    }
}

pub(crate) fn finite_state(v: Vec<f64>, step: usize) -> Result<StateVector> {
    StateVector::new(v).map_err(|_| Error::NonFiniteStep(step))
}
