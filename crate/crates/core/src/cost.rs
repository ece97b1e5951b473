//! Control cost: the average size of the perturbation the controller applies
//! per step.
//!
//! For control after the map (VMTOC, MPF, diagonal) the perturbation at
//! step `j` is `u_j = g(x_j) − f(x_j) = C·(T − f(x_j))`. For control before
//! the map (VTOC, PF) it is the change made to the state itself,
//! `C·(T − x_j)`. The estimate is the mean of `‖u_j‖` over a finite window;
//! asymmetric or stage-dependent prices are not modelled.

use alloc::vec;

use crate::controls::{ControlConfig, Scheme};
use crate::error::{Error, Result};
use crate::map::MapModel;
use crate::state::{NormKind, StateVector};

/// Half-open index range `[start, start + len)` into an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub len: usize,
}

impl Window {
    pub fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    /// The last `len` entries of an orbit of length `n`.
    pub fn tail(n: usize, len: usize) -> Self {
        let len = len.min(n);
        Self {
            start: n - len,
            len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostEstimate {
    pub p: f64,
    pub window: Window,
    pub norm: NormKind,
}

/// Perturbation vector applied at state `x`, written into `out`.
fn perturbation_into<M: MapModel + ?Sized>(
    f: &M,
    cfg: &ControlConfig,
    x: &[f64],
    fx: &mut [f64],
    out: &mut [f64],
) {
    let t = cfg.target().as_slice();
    let base: &[f64] = match cfg.scheme() {
        Scheme::Vtoc | Scheme::Pf => x,
        Scheme::Vmtoc | Scheme::Mpf | Scheme::DiagVmtoc => {
            f.eval_into(x, fx);
            fx
        }
    };
    for (j, o) in out.iter_mut().enumerate() {
        *o = cfg.stage_intensity(j) * (t[j] - base[j]);
    }
}

/// Window mean of the per-step control perturbation along `orbit`.
pub fn cost_per_step<M: MapModel + ?Sized>(
    f: &M,
    cfg: &ControlConfig,
    orbit: &[StateVector],
    window: Window,
    norm: NormKind,
) -> Result<CostEstimate> {
    if window.len == 0 {
        return Err(Error::EmptySample);
    }
    let end = window
        .start
        .checked_add(window.len)
        .ok_or(Error::EmptySample)?;
    if end > orbit.len() {
        return Err(Error::OrbitTooShort {
            needed: end,
            got: orbit.len(),
        });
    }
    let d = f.dim();
    cfg.target().check_dim(d)?;
    let mut fx = vec![0.0; d];
    let mut u = vec![0.0; d];
    let mut sum = 0.0;
    for x in &orbit[window.start..end] {
        x.check_dim(d)?;
        perturbation_into(f, cfg, x.as_slice(), &mut fx, &mut u);
        sum += norm.eval(&u);
    }
    Ok(CostEstimate {
        p: sum / window.len as f64,
        window,
        norm,
    })
}

/// `‖g(x) − f(x)‖` computed by evaluating both maps, with `g` the VMTOC
/// map. Used to cross-check the closed form.
pub fn direct_perturbation<M: MapModel + ?Sized>(
    f: &M,
    c: f64,
    target: &StateVector,
    x: &StateVector,
    norm: NormKind,
) -> Result<f64> {
    let fx = f.evaluate(x)?;
    target.check_dim(fx.dim())?;
    let controlled: alloc::vec::Vec<f64> = target
        .iter()
        .zip(fx.iter())
        .map(|(t, y)| c * t + (1.0 - c) * y)
        .collect();
    Ok(norm.eval_diff(&controlled, fx.as_slice()))
}

/// Cost per step once the controlled orbit sits at the equilibrium `x*`.
pub fn equilibrium_cost<M: MapModel + ?Sized>(
    f: &M,
    cfg: &ControlConfig,
    x_star: &StateVector,
    norm: NormKind,
) -> Result<f64> {
    x_star.check_dim(f.dim())?;
    let d = f.dim();
    let mut fx = vec![0.0; d];
    let mut u = vec![0.0; d];
    perturbation_into(f, cfg, x_star.as_slice(), &mut fx, &mut u);
    Ok(norm.eval(&u))
}
