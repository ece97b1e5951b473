//! Equilibria, spectral radii and minimum control intensity estimates.
//!
//! All constants derived from sampling (`A`, `L̃`, `M`) are lower estimates
//! of the true suprema over the sampled set; reports label them as sampled
//! estimates, never as certified bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::controls::{ControlConfig, Controlled, Scheme};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_col_sum, max_abs_row_sum, spectral_radius};
use crate::map::{finite_difference_jacobian, MapModel};
use crate::state::{check_dim, NormKind, StateVector};
use crate::Matrix;

/// Multiplier applied to the sampled ratio `L̃`.
pub const LIPSCHITZ_SAFETY: f64 = 1.05;

/// Residual below which a point counts as a fixed point for the Lipschitz
/// and contraction routines.
pub const FIXED_POINT_CHECK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Residual target in the max-norm.
    pub tol: f64,
    /// Outer iterations (Newton steps and averaging blocks).
    pub max_iter: usize,
    pub max_halvings: usize,
    pub averaging_steps: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            max_halvings: 30,
            averaging_steps: 200,
        }
    }
}

fn residual<M: MapModel + ?Sized>(f: &M, x: &[f64], buf: &mut [f64]) -> f64 {
    f.eval_into(x, buf);
    let r = NormKind::Max.eval_diff(buf, x);
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

/// `x*` with `‖f(x*) − x*‖∞ < tol`, reached from `x0`.
pub fn find_fixed_point<M: MapModel + ?Sized>(
    f: &M,
    x0: &StateVector,
    tol: f64,
) -> Result<StateVector> {
    find_fixed_point_with(
        f,
        x0,
        &FixedPointOptions {
            tol,
            ..FixedPointOptions::default()
        },
    )
}

/// Damped Newton on `g(x) = f(x) − x` with a finite-difference Jacobian.
///
/// A step is halved until the residual decreases; when every halving fails
/// (or the linear system is singular) the solver runs a block of averaged
/// iterations `x ← (x + f(x))/2` before trying Newton again. Iterates are
/// projected onto the domain.
pub fn find_fixed_point_with<M: MapModel + ?Sized>(
    f: &M,
    x0: &StateVector,
    opts: &FixedPointOptions,
) -> Result<StateVector> {
    x0.check_dim(f.dim())?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    let d = f.dim();
    let domain = f.domain();
    let mut x = x0.as_slice().to_vec();
    domain.project(&mut x);
    let mut fx = vec![0.0; d];
    let mut trial = vec![0.0; d];
    let mut buf = vec![0.0; d];
    let mut res = residual(f, &x, &mut fx);
    let mut best = (res, x.clone());

    for _ in 0..opts.max_iter {
        if res < opts.tol {
            return StateVector::new(x);
        }
        let mut accepted = false;
        if res.is_finite() {
            let mut jac = finite_difference_jacobian(f, &x);
            for i in 0..d {
                jac[(i, i)] -= 1.0;
            }
            let rhs =
                nalgebra::DVector::from_iterator(d, x.iter().zip(&fx).map(|(xi, fi)| xi - fi));
            if let Some(step) = jac
                .lu()
                .solve(&rhs)
                .filter(|s| s.iter().all(|v| v.is_finite()))
            {
                let mut lambda = 1.0;
                for _ in 0..=opts.max_halvings {
                    for i in 0..d {
                        trial[i] = x[i] + lambda * step[i];
                    }
                    domain.project(&mut trial);
                    let r = residual(f, &trial, &mut buf);
                    if r < res {
                        x.copy_from_slice(&trial);
                        fx.copy_from_slice(&buf);
                        res = r;
                        accepted = true;
                        break;
                    }
                    lambda *= 0.5;
                }
            }
        }
        if !accepted {
            for _ in 0..opts.averaging_steps {
                f.eval_into(&x, &mut buf);
                for i in 0..d {
                    x[i] = 0.5 * (x[i] + buf[i]);
                }
                domain.project(&mut x);
            }
            res = residual(f, &x, &mut fx);
        }
        if res < best.0 {
            best = (res, x.clone());
        }
    }
    if res < opts.tol {
        return StateVector::new(x);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: best.0,
    })
}

/// Solves from every seed and keeps distinct equilibria (max-norm distance
/// above `dedup`). Failed seeds are skipped.
pub fn multistart_fixed_points<M: MapModel + ?Sized>(
    f: &M,
    seeds: &[StateVector],
    opts: &FixedPointOptions,
    dedup: f64,
) -> Vec<StateVector> {
    let mut found: Vec<StateVector> = Vec::new();
    for s in seeds {
        if let Ok(x) = find_fixed_point_with(f, s, opts) {
            if found.iter().all(|y| y.distance(&x, NormKind::Max) > dedup) {
                found.push(x);
            }
        }
    }
    found
}

/// An axis-aligned compact box used as a sampling region. `lo = hi` in
/// every component describes a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl SampleBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim(hi.len(), lo.len())?;
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState);
        }
        if let Some(i) = lo.iter().zip(&hi).position(|(l, h)| l > h) {
            return Err(Error::InvalidBox(i));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: &StateVector) -> Self {
        Self {
            lo: x.as_slice().to_vec(),
            hi: x.as_slice().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| l <= v && v <= h)
    }

    fn scale(&self, unit: impl Iterator<Item = f64>) -> Vec<f64> {
        unit.zip(self.lo.iter().zip(&self.hi))
            .map(|(u, (l, h))| l + u * (h - l))
            .collect()
    }

    /// Tensor grid with `per_axis` points per axis, endpoints included; a
    /// single point per axis sits at the centre.
    pub fn grid(&self, per_axis: usize) -> Vec<StateVector> {
        let d = self.dim();
        if per_axis == 0 || d == 0 {
            return Vec::new();
        }
        let total = per_axis.pow(d as u32);
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let unit = idx.iter().map(|&k| {
                if per_axis == 1 {
                    0.5
                } else {
                    k as f64 / (per_axis - 1) as f64
                }
            });
            out.push(StateVector::new(self.scale(unit)).expect("finite box"));
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < per_axis {
                    break;
                }
                *slot = 0;
            }
        }
        out
    }

    /// First `n` points of the Halton sequence scaled into the box. The
    /// prefixes are nested: `halton(n)` starts with `halton(m)` for `m < n`.
    pub fn halton(&self, n: usize) -> Vec<StateVector> {
        let bases = first_primes(self.dim());
        (1..=n)
            .map(|i| {
                let unit = bases.iter().map(|&b| radical_inverse(i as u64, b));
                StateVector::new(self.scale(unit)).expect("finite box")
            })
            .collect()
    }

    /// Grid points followed by low-discrepancy points.
    pub fn samples(&self, plan: &SamplePlan) -> Vec<StateVector> {
        let mut pts = self.grid(plan.grid_per_axis);
        pts.extend(self.halton(plan.low_discrepancy));
        pts
    }
}

/// How many points to draw from a [`SampleBox`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub grid_per_axis: usize,
    pub low_discrepancy: usize,
}

impl SamplePlan {
    pub fn new(grid_per_axis: usize, low_discrepancy: usize) -> Self {
        Self {
            grid_per_axis,
            low_discrepancy,
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut k = 2u64;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= k)
            .all(|&p| !k.is_multiple_of(p))
        {
            primes.push(k);
        }
        k += 1;
    }
    primes
}

/// Row-sum (`B`) and column-sum (`C`) maxima of the Jacobian over a sample
/// set, and `A = min{B, C}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianBound {
    pub a: f64,
    pub row_sum: f64,
    pub col_sum: f64,
    pub samples: usize,
}

/// `A = min{B̂, Ĉ}` over the sample points of `set`.
pub fn bound_a<M: MapModel + ?Sized>(
    f: &M,
    set: &SampleBox,
    plan: &SamplePlan,
) -> Result<JacobianBound> {
    check_dim(set.dim(), f.dim())?;
    let pts = set.samples(plan);
    bound_a_at(f, &pts)
}

/// `A` over an explicit list of points.
pub fn bound_a_at<M: MapModel + ?Sized>(f: &M, pts: &[StateVector]) -> Result<JacobianBound> {
    if pts.is_empty() {
        return Err(Error::EmptySample);
    }
    let (mut b, mut c) = (0.0f64, 0.0f64);
    for p in pts {
        p.check_dim(f.dim())?;
        let j = f.jacobian(p.as_slice());
        if j.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
        b = b.max(max_abs_row_sum(&j));
        c = c.max(max_abs_col_sum(&j));
    }
    Ok(JacobianBound {
        a: b.min(c),
        row_sum: b,
        col_sum: c,
        samples: pts.len(),
    })
}

/// `max{0, 1 − 1/bound}`: intensities above it stabilize locally.
pub fn local_cstar(bound: f64) -> f64 {
    if bound > 1.0 {
        1.0 - 1.0 / bound
    } else {
        0.0
    }
}

/// `0` for `L ≤ 1`, `1 − 1/L` for `L > 1`: intensities above it make the
/// target-equals-fixed-point VMTOC a global contraction towards `K`.
pub fn global_cstar(l: f64) -> f64 {
    if l > 1.0 {
        1.0 - 1.0 / l
    } else {
        0.0
    }
}

/// Components of the Lipschitz-type constant `L` in
/// `‖f(x) − K‖ ≤ L‖x − K‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    /// `max{L̃, M/‖K‖ + 1}`.
    pub l: f64,
    /// Sampled ratio maximum, before the safety factor.
    pub ratio_max: f64,
    /// `LIPSCHITZ_SAFETY · ratio_max`.
    pub l_tilde: f64,
    /// Sampled supremum of `‖f(x)‖` over the box.
    pub m: f64,
    pub k_norm: f64,
    /// Sample points that fell inside the ball `‖x − K‖ ≤ ‖K‖`.
    pub ball_samples: usize,
}

/// Estimates `L = max{L̃, M/‖K‖ + 1}` over the sampling box.
///
/// `L̃` is the largest `‖f(x) − K‖/‖x − K‖` over sample points in the ball
/// `‖x − K‖ ≤ ‖K‖`, inflated by [`LIPSCHITZ_SAFETY`]; `M` is the largest
/// `‖f(x)‖` over all sample points.
pub fn lipschitz_estimate<M: MapModel + ?Sized>(
    f: &M,
    k: &StateVector,
    set: &SampleBox,
    plan: &SamplePlan,
    norm: NormKind,
) -> Result<LipschitzEstimate> {
    k.check_dim(f.dim())?;
    check_dim(set.dim(), f.dim())?;
    let fk = f.evaluate(k)?;
    let res = fk.distance(k, NormKind::Max);
    if !(res < FIXED_POINT_CHECK) {
        return Err(Error::NotFixedPoint(res));
    }
    let k_norm = k.norm(norm);
    if k_norm == 0.0 {
        return Err(Error::ZeroNormFixedPoint);
    }
    let pts = set.samples(plan);
    if pts.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut fx = vec![0.0; f.dim()];
    let (mut m, mut ratio_max, mut ball) = (0.0f64, 0.0f64, 0usize);
    for p in &pts {
        f.eval_into(p.as_slice(), &mut fx);
        m = m.max(norm.eval(&fx));
        let dx = norm.eval_diff(p.as_slice(), k.as_slice());
        if dx > 0.0 && dx <= k_norm {
            ball += 1;
            ratio_max = ratio_max.max(norm.eval_diff(&fx, k.as_slice()) / dx);
        }
    }
    if !m.is_finite() || !ratio_max.is_finite() {
        return Err(Error::NonFiniteState);
    }
    let l_tilde = LIPSCHITZ_SAFETY * ratio_max;
    Ok(LipschitzEstimate {
        l: l_tilde.max(m / k_norm + 1.0),
        ratio_max,
        l_tilde,
        m,
        k_norm,
        ball_samples: ball,
    })
}

/// Outcome of checking `‖x_{n+1} − K‖ ≤ θ‖x_n − K‖` along an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionCheck {
    pub holds: bool,
    /// `θ = (1 − c)L`.
    pub theta: f64,
    /// Largest observed per-step ratio.
    pub observed_theta: f64,
    pub steps_checked: usize,
}

/// Iterates the VMTOC orbit with `T = K` and compares every step with
/// `‖x_{n+1} − K‖ ≤ θ‖x_n − K‖`, `θ = (1 − c)L`.
///
/// Each step may exceed the bound by `1e-12·‖x_n − K‖` plus a rounding
/// allowance of `16ε(1 + ‖K‖∞ + ‖x_{n+1}‖∞)`. The observed ratio is taken
/// over steps with `‖x_n − K‖ ≥ 1e-3·(1 + ‖K‖∞)`, where rounding cannot
/// dominate it.
#[allow(clippy::too_many_arguments)]
pub fn verify_contraction<M: MapModel + ?Sized>(
    f: &M,
    cfg: &ControlConfig,
    k: &StateVector,
    l: f64,
    x0: &StateVector,
    n: usize,
    norm: NormKind,
) -> Result<ContractionCheck> {
    let c = match (cfg.scheme(), cfg.scalar()) {
        (Scheme::Vmtoc, Some(c)) => c,
        _ => {
            return Err(Error::Precondition(
                "contraction check needs a scalar VMTOC",
            ))
        }
    };
    k.check_dim(f.dim())?;
    x0.check_dim(f.dim())?;
    if cfg.target().distance(k, NormKind::Max) > 1e-12 {
        return Err(Error::Precondition("target must equal the fixed point K"));
    }
    let res = f.evaluate(k)?.distance(k, NormKind::Max);
    if !(res < FIXED_POINT_CHECK) {
        return Err(Error::NotFixedPoint(res));
    }
    if !(c > global_cstar(l)) {
        return Err(Error::Precondition(
            "intensity must exceed the global threshold 1 − 1/L",
        ));
    }
    let g = Controlled::new(f, cfg.clone())?;
    let theta = (1.0 - c) * l;
    let d = f.dim();
    let mut x = x0.as_slice().to_vec();
    let mut next = vec![0.0; d];
    let k_max = k.norm(NormKind::Max);
    let floor = 1e-3 * (1.0 + k_max);
    let mut observed = 0.0f64;
    let mut checked = 0;
    let mut holds = true;
    for step in 0..n {
        g.eval_into(&x, &mut next);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteStep(step + 1));
        }
        let before = norm.eval_diff(&x, k.as_slice());
        let after = norm.eval_diff(&next, k.as_slice());
        let slack = 16.0 * f64::EPSILON * (1.0 + k_max + NormKind::Max.eval(&next));
        if after > (theta + 1e-12) * before + slack {
            holds = false;
        }
        if before >= floor {
            observed = observed.max(after / before);
            checked += 1;
        }
        core::mem::swap(&mut x, &mut next);
    }
    Ok(ContractionCheck {
        holds,
        theta,
        observed_theta: observed,
        steps_checked: checked,
    })
}

/// Which formula produced a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    SpectralRadius,
    RowColumnSum,
    Lipschitz,
}

impl BoundSource {
    pub fn describe(self) -> &'static str {
        match self {
            BoundSource::SpectralRadius => "max{0, 1 - 1/rho(Jf(K))} (local, target = K)",
            BoundSource::RowColumnSum => {
                "max{0, 1 - 1/A}, A = min(max row sum, max column sum) of Jf over S (local)"
            }
            BoundSource::Lipschitz => "1 - 1/L for L > 1, else 0 (global, target = K)",
        }
    }
}

/// Stability summary of an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub equilibrium: StateVector,
    pub residual: f64,
    pub rho: f64,
    pub bound: JacobianBound,
    /// Whether the equilibrium lies in the sampled set `S`.
    pub equilibrium_in_set: bool,
    pub lipschitz: Option<LipschitzEstimate>,
    pub norm: NormKind,
    pub local_cstar_rho: f64,
    pub local_cstar_a: f64,
    pub global_cstar: Option<f64>,
    pub notes: Vec<String>,
}

/// Inputs for [`stability_report`].
#[derive(Debug, Clone)]
pub struct StabilitySetup {
    /// The set `S` for the row/column-sum bound.
    pub set: SampleBox,
    pub set_plan: SamplePlan,
    /// Region over which `L̃` and `M` are sampled; `None` skips `L`.
    pub lipschitz_box: Option<SampleBox>,
    pub lipschitz_plan: SamplePlan,
    pub norm: NormKind,
}

/// Computes `ρ`, `A`, `L` and the three thresholds at the equilibrium `k`.
pub fn stability_report<M: MapModel + ?Sized>(
    f: &M,
    k: &StateVector,
    setup: &StabilitySetup,
) -> Result<StabilityReport> {
    k.check_dim(f.dim())?;
    let residual = f.evaluate(k)?.distance(k, NormKind::Max);
    let jac: Matrix = f.jacobian(k.as_slice());
    let rho = spectral_radius(&jac)?;
    let bound = bound_a(f, &setup.set, &setup.set_plan)?;
    let in_set = setup.set.contains(k.as_slice());
    let mut notes = vec![String::from(
        "A, L, M and L~ are sampled estimates (lower bounds of the true suprema), not certified",
    )];
    if !in_set {
        notes.push(String::from(
            "equilibrium lies outside S: the row/column-sum threshold does not cover it",
        ));
    }
    let lipschitz = match &setup.lipschitz_box {
        Some(b) => Some(lipschitz_estimate(
            f,
            k,
            b,
            &setup.lipschitz_plan,
            setup.norm,
        )?),
        None => None,
    };
    if let Some(b) = &setup.lipschitz_box {
        notes.push(format!(
            "L is estimated on the compact box lo={:?} hi={:?}; it holds on the whole domain only if f is bounded by M there",
            b.lo(),
            b.hi()
        ));
    }
    Ok(StabilityReport {
        equilibrium: k.clone(),
        residual,
        rho,
        bound,
        equilibrium_in_set: in_set,
        global_cstar: lipschitz.map(|l| global_cstar(l.l)),
        lipschitz,
        norm: setup.norm,
        local_cstar_rho: local_cstar(rho),
        local_cstar_a: local_cstar(bound.a),
        notes,
    })
}

impl StabilityReport {
    /// Flat `key = value` records with full-precision numbers.
    pub fn records(&self) -> Vec<(String, String)> {
        let num = |v: f64| format!("{v:.16e}");
        let vec_str = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",");
        let mut r = vec![
            ("equilibrium".into(), vec_str(self.equilibrium.as_slice())),
            ("equilibrium_residual".into(), num(self.residual)),
            ("norm".into(), self.norm.name().into()),
            ("rho".into(), num(self.rho)),
            ("A".into(), num(self.bound.a)),
            ("A.row_sum_B".into(), num(self.bound.row_sum)),
            ("A.col_sum_C".into(), num(self.bound.col_sum)),
            ("A.samples".into(), format!("{}", self.bound.samples)),
            (
                "A.equilibrium_in_S".into(),
                format!("{}", self.equilibrium_in_set),
            ),
            ("local_cstar_rho".into(), num(self.local_cstar_rho)),
            (
                "local_cstar_rho.provenance".into(),
                BoundSource::SpectralRadius.describe().into(),
            ),
            ("local_cstar_A".into(), num(self.local_cstar_a)),
            (
                "local_cstar_A.provenance".into(),
                BoundSource::RowColumnSum.describe().into(),
            ),
        ];
        match (&self.lipschitz, self.global_cstar) {
            (Some(l), Some(g)) => {
                r.push(("L".into(), num(l.l)));
                r.push(("L.tilde".into(), num(l.l_tilde)));
                r.push(("L.ratio_max".into(), num(l.ratio_max)));
                r.push(("L.M".into(), num(l.m)));
                r.push(("L.K_norm".into(), num(l.k_norm)));
                r.push(("L.ball_samples".into(), format!("{}", l.ball_samples)));
                r.push(("global_cstar".into(), num(g)));
                r.push((
                    "global_cstar.provenance".into(),
                    BoundSource::Lipschitz.describe().into(),
                ));
            }
            _ => r.push(("global_cstar".into(), "unavailable".into())),
        }
        r.push(("estimate_kind".into(), "sampled estimate".into()));
        for (i, n) in self.notes.iter().enumerate() {
            r.push((format!("note.{i}"), n.clone()));
        }
        r
    }
}
