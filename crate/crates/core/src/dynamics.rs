//! Orbit iteration, period and bubble detection, Lyapunov exponents and
//! bifurcation scans over the control intensity.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::controls::{ControlConfig, Controlled, Scheme};
use crate::error::{Error, Result};
use crate::map::{finite_state, MapModel};
use crate::state::{check_dim, NormKind, StateVector};

pub const DEFAULT_TRANSIENT: usize = 3000;
pub const DEFAULT_KEEP: usize = 50;
pub const DEFAULT_PERIOD_TOL: f64 = 1e-5;
pub const DEFAULT_MAX_PERIOD: usize = 32;

enum Stepper<'a, M: ?Sized> {
    Bare(&'a M),
    Controlled(Controlled<&'a M>),
}

impl<'a, M: MapModel + ?Sized> Stepper<'a, M> {
    fn new(f: &'a M, cfg: Option<&ControlConfig>) -> Result<Self> {
        Ok(match cfg {
            Some(c) => Stepper::Controlled(Controlled::new(f, c.clone())?),
            None => Stepper::Bare(f),
        })
    }

    fn step(&self, x: &[f64], scratch: &mut [f64], out: &mut [f64]) {
        match self {
            Stepper::Bare(f) => f.eval_into(x, out),
            Stepper::Controlled(g) => g.config().step_into(g.inner(), x, scratch, out),
        }
    }

    fn as_model(&self) -> &dyn MapModel
    where
        M: Sized,
    {
        match self {
            Stepper::Bare(f) => *f,
            Stepper::Controlled(g) => g,
        }
    }
}

/// Iterates the (controlled) map `n_transient + n_keep` times from `x0` and
/// returns the last `n_keep` states.
///
/// Leaving the domain is logged once and otherwise tolerated; see
/// [`iterate_orbit_strict`].
pub fn iterate_orbit<M: MapModel + ?Sized>(
    f: &M,
    cfg: Option<&ControlConfig>,
    x0: &StateVector,
    n_transient: usize,
    n_keep: usize,
) -> Result<Vec<StateVector>> {
    run_orbit(f, cfg, x0, n_transient, n_keep, false)
}

/// Like [`iterate_orbit`] but a state outside the domain is an error.
pub fn iterate_orbit_strict<M: MapModel + ?Sized>(
    f: &M,
    cfg: Option<&ControlConfig>,
    x0: &StateVector,
    n_transient: usize,
    n_keep: usize,
) -> Result<Vec<StateVector>> {
    run_orbit(f, cfg, x0, n_transient, n_keep, true)
}

fn run_orbit<M: MapModel + ?Sized>(
    f: &M,
    cfg: Option<&ControlConfig>,
    x0: &StateVector,
    n_transient: usize,
    n_keep: usize,
    strict: bool,
) -> Result<Vec<StateVector>> {
    x0.check_dim(f.dim())?;
    let domain = f.domain();
    if !domain.contains_unchecked(x0.as_slice()) {
        if strict {
            return Err(Error::LeftDomain(0));
        }
        log::warn!("initial state lies outside the model domain");
    }
    let stepper = Stepper::new(f, cfg)?;
    let d = f.dim();
    let mut x = x0.as_slice().to_vec();
    let mut next = vec![0.0; d];
    let mut scratch = vec![0.0; d];
    let mut kept = Vec::with_capacity(n_keep);
    let mut warned = false;
    for step in 1..=n_transient + n_keep {
        stepper.step(&x, &mut scratch, &mut next);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteStep(step));
        }
        if !domain.contains_unchecked(&next) {
            if strict {
                return Err(Error::LeftDomain(step));
            }
            if !warned {
                log::warn!("orbit left the model domain at step {step}");
                warned = true;
            }
        }
        core::mem::swap(&mut x, &mut next);
        if step > n_transient {
            kept.push(finite_state(x.clone(), step)?);
        }
    }
    Ok(kept)
}

/// Period classification of one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Period {
    Periodic(usize),
    Aperiodic,
}

impl Period {
    pub fn is_fixed(self) -> bool {
        self == Period::Periodic(1)
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Periodic(p) => write!(f, "{p}"),
            Period::Aperiodic => f.write_str("aperiodic"),
        }
    }
}

/// Smallest `p ≤ max_period` with `|v[i+p] − v[i]| < tol·(1 + |v[i]|)` for
/// every index of the series.
pub fn detect_series_period(v: &[f64], tol: f64, max_period: usize) -> Result<Period> {
    check_period_args(v.len(), tol, max_period)?;
    Ok(series_period(v, tol, max_period))
}

fn check_period_args(len: usize, tol: f64, max_period: usize) -> Result<()> {
    if max_period == 0 {
        return Err(Error::InvalidParameter {
            name: "max_period",
            reason: "must be at least 1",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    if len < 2 * max_period {
        return Err(Error::OrbitTooShort {
            needed: 2 * max_period,
            got: len,
        });
    }
    Ok(())
}

fn series_period(v: &[f64], tol: f64, max_period: usize) -> Period {
    (1..=max_period)
        .find(|&p| {
            v.iter()
                .zip(&v[p..])
                .all(|(a, b)| (b - a).abs() < tol * (1.0 + a.abs()))
        })
        .map_or(Period::Aperiodic, Period::Periodic)
}

/// Per-component period of an orbit; classify the final window of a long
/// orbit, after transients have died out.
pub fn detect_period(orbit: &[StateVector], tol: f64, max_period: usize) -> Result<Vec<Period>> {
    check_period_args(orbit.len(), tol, max_period)?;
    let d = orbit[0].dim();
    let mut series = vec![0.0; orbit.len()];
    (0..d)
        .map(|j| {
            for (s, x) in series.iter_mut().zip(orbit) {
                *s = x[j];
            }
            Ok(series_period(&series, tol, max_period))
        })
        .collect()
}

/// Least common multiple of the component periods; `None` if any component
/// is aperiodic.
pub fn overall_period(periods: &[Period]) -> Option<usize> {
    periods.iter().try_fold(1usize, |acc, p| match p {
        Period::Periodic(q) => Some(acc / gcd(acc, *q) * q),
        Period::Aperiodic => None,
    })
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// How initial conditions are chosen across the intensity grid.
#[derive(Debug, Clone, PartialEq)]
pub enum InitPolicy {
    /// A fresh uniform draw from the box for every grid value; the stream
    /// for grid index `k` is `(seed, k)`.
    Fresh { lo: Vec<f64>, hi: Vec<f64> },
    /// One draw for the first grid value, then each grid value starts from
    /// the last state of the previous one.
    Continue { lo: Vec<f64>, hi: Vec<f64> },
    /// The same initial state everywhere.
    Fixed(StateVector),
}

impl InitPolicy {
    /// `[0, 50]^d`, the default box for LPA-sized populations.
    pub fn default_fresh(dim: usize) -> Self {
        InitPolicy::Fresh {
            lo: vec![0.0; dim],
            hi: vec![50.0; dim],
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            InitPolicy::Fresh { lo, hi } | InitPolicy::Continue { lo, hi } => {
                check_dim(lo.len(), dim)?;
                check_dim(hi.len(), dim)?;
                if let Some(i) = lo.iter().zip(hi).position(|(l, h)| !(l <= h)) {
                    return Err(Error::InvalidBox(i));
                }
                Ok(())
            }
            InitPolicy::Fixed(x) => x.check_dim(dim),
        }
    }
}

/// Uniform draw from `[lo, hi]` on stream `(seed, stream)`.
pub fn draw_initial(lo: &[f64], hi: &[f64], seed: u64, stream: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let v = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| if l < h { rng.random_range(*l..*h) } else { *l })
        .collect();
    StateVector::new(v).expect("finite box")
}

/// Everything a bifurcation scan needs besides the map.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub scheme: Scheme,
    pub target: StateVector,
    pub c_grid: Vec<f64>,
    pub init: InitPolicy,
    pub seed: u64,
    pub n_transient: usize,
    pub n_keep: usize,
    pub period_tol: f64,
    pub max_period: usize,
    pub strict: bool,
}

impl ScanSpec {
    /// Figure-style defaults: grid `k/300`, 3000 transient steps, 50 kept.
    pub fn new(scheme: Scheme, target: StateVector) -> Self {
        let d = target.dim();
        Self {
            scheme,
            target,
            c_grid: uniform_grid(300),
            init: InitPolicy::default_fresh(d),
            seed: 0,
            n_transient: DEFAULT_TRANSIENT,
            n_keep: DEFAULT_KEEP,
            period_tol: DEFAULT_PERIOD_TOL,
            max_period: DEFAULT_MAX_PERIOD,
            strict: false,
        }
    }

    /// Steps after the transient: enough to keep `n_keep` points and to
    /// classify periods up to `max_period`. Both windows end at the same
    /// step.
    pub fn window(&self) -> usize {
        self.n_keep.max(2 * self.max_period)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        self.target.check_dim(dim)?;
        self.init.validate(dim)?;
        if let Some(c) = self.c_grid.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(Error::InvalidIntensity(*c));
        }
        check_period_args(self.window(), self.period_tol, self.max_period)
    }

    fn control(&self, c: f64) -> Result<ControlConfig> {
        ControlConfig::new(
            self.scheme,
            crate::controls::Intensity::Scalar(c),
            Some(self.target.clone()),
            self.target.dim(),
        )
    }
}

/// `{k/n : k = 0, …, n − 1}`; `c = 1` is not a valid intensity.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / n as f64).collect()
}

/// One grid value of a bifurcation scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub index: usize,
    pub c: f64,
    pub retained: Vec<StateVector>,
    /// Per-component classification over the final window; empty on error.
    pub periods: Vec<Period>,
    /// Master seed; the initial condition comes from stream `index`.
    pub seed: u64,
    pub x0: StateVector,
    pub error: Option<Error>,
}

impl ScanRecord {
    pub fn all_fixed(&self) -> bool {
        self.error.is_none()
            && !self.periods.is_empty()
            && self.periods.iter().all(|p| p.is_fixed())
    }

    pub fn component_fixed(&self, j: usize) -> Option<bool> {
        if self.error.is_some() {
            None
        } else {
            self.periods.get(j).map(|p| p.is_fixed())
        }
    }
}

/// Runs grid value `index` from `x0` and returns the record plus the final
/// state (for orbit continuation).
pub fn scan_point_from<M: MapModel + ?Sized>(
    f: &M,
    spec: &ScanSpec,
    index: usize,
    x0: StateVector,
) -> (ScanRecord, Option<StateVector>) {
    let c = spec.c_grid[index];
    let outcome = spec.control(c).and_then(|cfg| {
        let window = run_orbit(
            f,
            Some(&cfg),
            &x0,
            spec.n_transient,
            spec.window(),
            spec.strict,
        )?;
        let periods = detect_period(&window, spec.period_tol, spec.max_period)?;
        Ok((window, periods))
    });
    let mut rec = ScanRecord {
        index,
        c,
        retained: Vec::new(),
        periods: Vec::new(),
        seed: spec.seed,
        x0,
        error: None,
    };
    match outcome {
        Ok((window, periods)) => {
            let last = window.last().cloned();
            rec.retained = window[window.len() - spec.n_keep..].to_vec();
            rec.periods = periods;
            (rec, last)
        }
        Err(e) => {
            rec.error = Some(e);
            (rec, None)
        }
    }
}

/// Grid value `index` with its own initial condition (fresh or fixed
/// policy). Independent of every other grid value.
pub fn scan_point<M: MapModel + ?Sized>(f: &M, spec: &ScanSpec, index: usize) -> ScanRecord {
    let x0 = match &spec.init {
        InitPolicy::Fresh { lo, hi } | InitPolicy::Continue { lo, hi } => {
            draw_initial(lo, hi, spec.seed, index as u64)
        }
        InitPolicy::Fixed(x) => x.clone(),
    };
    scan_point_from(f, spec, index, x0).0
}

/// Runs the scan sequentially in grid order.
pub fn bifurcation_scan<M: MapModel + ?Sized>(f: &M, spec: &ScanSpec) -> Result<Vec<ScanRecord>> {
    spec.validate(f.dim())?;
    let mut out = Vec::with_capacity(spec.c_grid.len());
    match &spec.init {
        InitPolicy::Continue { lo, hi } => {
            let mut x = draw_initial(lo, hi, spec.seed, 0);
            for i in 0..spec.c_grid.len() {
                let (rec, last) = scan_point_from(f, spec, i, x.clone());
                if let Some(l) = last {
                    x = l;
                }
                out.push(rec);
            }
        }
        _ => {
            for i in 0..spec.c_grid.len() {
                out.push(scan_point(f, spec, i));
            }
        }
    }
    Ok(out)
}

/// A grid interval where one component loses period 1 between two
/// stabilized intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bubble {
    pub component: usize,
    pub c_lo: f64,
    pub c_hi: f64,
}

/// Finds, per component, maximal runs of grid values where the component is
/// not period 1 while some smaller and some larger grid value give
/// period 1. Endpoints are the first and last grid values of the run. Records with
/// errors are ignored. `scan` must be sorted by `c`.
pub fn detect_bubbles(scan: &[ScanRecord]) -> Vec<Bubble> {
    let d = scan
        .iter()
        .find_map(|r| r.error.is_none().then_some(r.periods.len()))
        .unwrap_or(0);
    let mut out = Vec::new();
    for j in 0..d {
        let seq: Vec<(f64, bool)> = scan
            .iter()
            .filter_map(|r| r.component_fixed(j).map(|fixed| (r.c, fixed)))
            .collect();
        let mut seen_fixed = false;
        let mut run: Option<(f64, f64)> = None;
        for &(c, fixed) in &seq {
            if fixed {
                if let Some((lo, hi)) = run.take() {
                    out.push(Bubble {
                        component: j,
                        c_lo: lo,
                        c_hi: hi,
                    });
                }
                seen_fixed = true;
            } else if seen_fixed {
                run = Some(run.map_or((c, c), |(lo, _)| (lo, c)));
            }
        }
    }
    out
}

/// First grid value where every component is period 1, and the grid values
/// above it where some component is not.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationProfile {
    pub onset: Option<f64>,
    pub losses_after_onset: Vec<f64>,
}

pub fn stabilization_profile(scan: &[ScanRecord]) -> StabilizationProfile {
    let onset_idx = scan.iter().position(|r| r.all_fixed());
    let losses = match onset_idx {
        Some(i) => scan[i..]
            .iter()
            .filter(|r| !r.all_fixed())
            .map(|r| r.c)
            .collect(),
        None => Vec::new(),
    };
    StabilizationProfile {
        onset: onset_idx.map(|i| scan[i].c),
        losses_after_onset: losses,
    }
}

/// Largest Lyapunov exponent by propagating a tangent vector through the
/// Jacobians and renormalizing it every step. The log-growth is averaged
/// over the last 80% of the `n` steps.
pub fn lyapunov_max<M: MapModel + Sized>(
    f: &M,
    cfg: Option<&ControlConfig>,
    x0: &StateVector,
    n: usize,
) -> Result<f64> {
    if n < 1000 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "at least 1000 steps are required",
        });
    }
    x0.check_dim(f.dim())?;
    let stepper = Stepper::new(f, cfg)?;
    let g = stepper.as_model();
    let d = f.dim();
    let burn = n / 5;
    let mut x = x0.as_slice().to_vec();
    let mut next = vec![0.0; d];
    let mut v = nalgebra::DVector::from_element(d, 1.0 / libm::sqrt(d as f64));
    let mut sum = 0.0;
    for step in 0..n {
        let jac = g.jacobian(&x);
        let w = &jac * &v;
        let growth = w.norm();
        if !growth.is_finite() {
            return Err(Error::Divergence(step));
        }
        if step >= burn {
            if growth == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            sum += libm::log(growth);
        }
        v = if growth > 0.0 { w / growth } else { v };
        g.eval_into(&x, &mut next);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence(step + 1));
        }
        core::mem::swap(&mut x, &mut next);
    }
    Ok(sum / (n - burn) as f64)
}

/// `‖x_n − K‖` along an orbit, handy for decay checks.
pub fn distances(orbit: &[StateVector], k: &StateVector, norm: NormKind) -> Vec<f64> {
    orbit.iter().map(|x| x.distance(k, norm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::FnMap;
    use crate::models::Lpa;
    use crate::state::DomainSpec;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::from_slice(v).unwrap()
    }

    #[test]
    fn orbit_from_fixed_point_is_constant() {
        let k = sv(&[1.0, 2.0]);
        let f = FnMap::affine_about(DomainSpec::full(2), k.clone(), -3.0).unwrap();
        let orbit = iterate_orbit(&f, None, &k, 10, 5).unwrap();
        assert_eq!(orbit, vec![k; 5]);
    }

    #[test]
    fn orbit_keeps_the_tail() {
        let f = FnMap::new(DomainSpec::full(1), |x, out| out[0] = x[0] + 1.0);
        let orbit = iterate_orbit(&f, None, &sv(&[0.0]), 3, 2).unwrap();
        assert_eq!(orbit, vec![sv(&[4.0]), sv(&[5.0])]);
        assert!(iterate_orbit(&f, None, &sv(&[0.0]), 0, 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn non_finite_step_is_reported() {
        let f = FnMap::new(DomainSpec::full(1), |x, out| out[0] = x[0] * 1e200);
        assert_eq!(
            iterate_orbit(&f, None, &sv(&[1.0]), 5, 0),
            Err(Error::NonFiniteStep(2))
        );
    }

    #[test]
    fn strict_mode_stops_at_domain_exit() {
        let f = FnMap::new(DomainSpec::orthant(1), |x, out| out[0] = x[0] - 1.0);
        assert_eq!(
            iterate_orbit_strict(&f, None, &sv(&[1.5]), 5, 0),
            Err(Error::LeftDomain(2))
        );
        assert!(iterate_orbit(&f, None, &sv(&[1.5]), 5, 0).is_ok());
    }

    fn series(vals: &[f64]) -> Vec<StateVector> {
        vals.iter().map(|v| sv(&[*v])).collect()
    }

    #[test]
    fn period_examples() {
        let constant = series(&[3.0; 8]);
        assert_eq!(
            detect_period(&constant, 1e-6, 4).unwrap(),
            vec![Period::Periodic(1)]
        );
        let alt: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { 2.0 }).collect();
        assert_eq!(
            detect_period(&series(&alt), 1e-6, 4).unwrap(),
            vec![Period::Periodic(2)]
        );
        let ramp: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert_eq!(
            detect_period(&series(&ramp), 1e-6, 4).unwrap(),
            vec![Period::Aperiodic]
        );
        assert_eq!(
            detect_period(&series(&[1.0; 7]), 1e-6, 4),
            Err(Error::OrbitTooShort { needed: 8, got: 7 })
        );
    }

    #[test]
    fn overall_period_is_lcm() {
        use Period::*;
        assert_eq!(
            overall_period(&[Periodic(2), Periodic(3), Periodic(1)]),
            Some(6)
        );
        assert_eq!(overall_period(&[Periodic(4), Periodic(2)]), Some(4));
        assert_eq!(overall_period(&[Periodic(2), Aperiodic]), None);
    }

    fn rec(c: f64, periods: &[usize]) -> ScanRecord {
        ScanRecord {
            index: 0,
            c,
            retained: Vec::new(),
            periods: periods
                .iter()
                .map(|&p| {
                    if p == 0 {
                        Period::Aperiodic
                    } else {
                        Period::Periodic(p)
                    }
                })
                .collect(),
            seed: 0,
            x0: sv(&[0.0]),
            error: None,
        }
    }

    #[test]
    fn monotone_scan_has_no_bubbles() {
        let scan = [
            rec(0.1, &[0]),
            rec(0.2, &[0]),
            rec(0.3, &[2]),
            rec(0.4, &[1]),
            rec(0.5, &[1]),
        ];
        assert!(detect_bubbles(&scan).is_empty());
        let p = stabilization_profile(&scan);
        assert_eq!(p.onset, Some(0.4));
        assert!(p.losses_after_onset.is_empty());
    }

    #[test]
    fn bubble_between_stable_values() {
        let scan = [
            rec(0.1, &[0, 0]),
            rec(0.2, &[1, 1]),
            rec(0.3, &[2, 1]),
            rec(0.4, &[2, 1]),
            rec(0.5, &[1, 1]),
            rec(0.6, &[2, 2]),
        ];
        let b = detect_bubbles(&scan);
        assert_eq!(
            b,
            vec![Bubble {
                component: 0,
                c_lo: 0.3,
                c_hi: 0.4
            }]
        );
        assert_eq!(
            stabilization_profile(&scan).losses_after_onset,
            vec![0.3, 0.4, 0.6]
        );
    }

    #[test]
    fn lyapunov_of_linear_maps() {
        for a in [0.5, -0.9, 0.999] {
            let f = FnMap::new(DomainSpec::full(1), move |x, out| out[0] = a * x[0]);
            let l = lyapunov_max(&f, None, &sv(&[1.0]), 2000).unwrap();
            assert!((l - libm::log(libm::fabs(a))).abs() < 1e-3, "a = {a}: {l}");
        }
        let grow = FnMap::new(DomainSpec::full(1), |x, out| out[0] = 2.0 * x[0]);
        assert!(matches!(
            lyapunov_max(&grow, None, &sv(&[1.0]), 2000),
            Err(Error::Divergence(_))
        ));
        assert!(lyapunov_max(&grow, None, &sv(&[1.0]), 10).is_err());
    }

    #[test]
    fn scan_is_deterministic_and_ordered() {
        let f = Lpa::default();
        let mut spec = ScanSpec::new(Scheme::Vmtoc, sv(&[28.0120, 22.4096, 4.6251]));
        spec.c_grid = vec![0.1, 0.5, 0.9];
        spec.n_transient = 300;
        spec.seed = 11;
        let a = bifurcation_scan(&f, &spec).unwrap();
        let b = bifurcation_scan(&f, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|r| r.c).collect::<Vec<_>>(), spec.c_grid);
        assert!(a.iter().all(|r| r.retained.len() == DEFAULT_KEEP));
        assert_eq!(scan_point(&f, &spec, 1), a[1]);
    }

    #[test]
    fn scan_rejects_bad_grid() {
        let mut spec = ScanSpec::new(Scheme::Vmtoc, sv(&[1.0, 1.0, 1.0]));
        spec.c_grid = vec![0.5, 1.0];
        assert_eq!(
            bifurcation_scan(&Lpa::default(), &spec),
            Err(Error::InvalidIntensity(1.0))
        );
    }

    #[test]
    fn uniform_grid_starts_at_zero() {
        let g = uniform_grid(300);
        assert_eq!(g.len(), 300);
        assert_eq!((g[0], g[1]), (0.0, 1.0 / 300.0));
        assert!(g.iter().all(|c| (0.0..1.0).contains(c)));
    }
}
