//! Executes a [`RunConfig`] and produces the report and CSV contents.

use std::path::PathBuf;

use rayon::prelude::*;

use chaosctl_core::analysis::{
    find_fixed_point, multistart_fixed_points, stability_report, FixedPointOptions, SampleBox,
    SamplePlan, StabilitySetup,
};
use chaosctl_core::cost::{cost_per_step, equilibrium_cost, Window};
use chaosctl_core::dynamics::{
    bifurcation_scan, detect_bubbles, detect_period, draw_initial, iterate_orbit,
    iterate_orbit_strict, lyapunov_max, scan_point, stabilization_profile, InitPolicy, ScanRecord,
    ScanSpec,
};
use chaosctl_core::state::DomainKind;
use chaosctl_core::{ControlConfig, Intensity, MapModel, Scheme, StateVector};

use crate::config::{Command, InitKind, RunConfig};
use crate::error::{CliError, CliResult, Context};
use crate::output::{num, orbit_csv, scan_csv, Report};
use crate::registry::{DynModel, Registry};

/// Environment variable capping scan parallelism.
pub const THREADS_ENV: &str = "CHAOSCTL_THREADS";

/// Stream used for the simulation initial condition, away from the
/// per-grid-value streams `0, 1, …`.
const SIM_STREAM: u64 = u64::MAX;

const EQUILIBRIUM_SEEDS: usize = 16;

/// Everything a command produces, before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub report: Report,
    pub scan_csv: Option<String>,
    pub orbit_csv: Option<String>,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    model: DynModel,
    dim: usize,
}

impl Ctx<'_> {
    fn check_len(&self, field: &str, v: &[f64]) -> CliResult<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(CliError::config(
                field,
                format!("expected {} components, got {}", self.dim, v.len()),
            ))
        }
    }

    fn state(&self, field: &str, v: &[f64]) -> CliResult<StateVector> {
        self.check_len(field, v)?;
        StateVector::from_slice(v).field(field)
    }

    /// Initial-condition box: `scan.lo/hi`, else the model's box domain,
    /// else `[0, 50]^d`.
    fn init_box(&self) -> CliResult<(Vec<f64>, Vec<f64>)> {
        let (dlo, dhi) = match self.model.domain().kind() {
            DomainKind::Box { lo, hi } => (lo.clone(), hi.clone()),
            _ => (vec![0.0; self.dim], vec![50.0; self.dim]),
        };
        let lo = self.cfg.scan.lo.clone().unwrap_or(dlo);
        let hi = self.cfg.scan.hi.clone().unwrap_or(dhi);
        self.check_len("scan.lo", &lo)?;
        self.check_len("scan.hi", &hi)?;
        if let Some(i) = lo.iter().zip(&hi).position(|(l, h)| l > h) {
            return Err(CliError::config(
                "scan.lo",
                format!("lo exceeds hi in component {i}"),
            ));
        }
        Ok((lo, hi))
    }

    fn sim_x0(&self) -> CliResult<StateVector> {
        match &self.cfg.sim.x0 {
            Some(v) => self.state("sim.x0", v),
            None => {
                let (lo, hi) = self.init_box()?;
                Ok(draw_initial(&lo, &hi, self.cfg.seed, SIM_STREAM))
            }
        }
    }

    /// Fixed point of `f` from `equilibrium.x0`. Without a start point the
    /// solver runs from the centre of the initial-condition box and from
    /// Halton points in it, and the first equilibrium off the domain
    /// boundary wins (so LPA yields its positive equilibrium, not 0).
    fn equilibrium_of(&self, f: &dyn MapModel) -> CliResult<StateVector> {
        let tol = self.cfg.equilibrium.tol;
        if let Some(v) = &self.cfg.equilibrium.x0 {
            let x0 = self.state("equilibrium.x0", v)?;
            return find_fixed_point(f, &x0, tol).context("equilibrium");
        }
        let (lo, hi) = self.init_box()?;
        let bx = SampleBox::new(lo, hi).field("scan.lo")?;
        let mut seeds = bx.grid(1);
        seeds.extend(bx.halton(EQUILIBRIUM_SEEDS));
        let opts = FixedPointOptions {
            tol,
            ..FixedPointOptions::default()
        };
        let found = multistart_fixed_points(f, &seeds, &opts, 1e-6);
        let interior = found
            .iter()
            .find(|x| f.domain().is_interior(x.as_slice()).unwrap_or(false));
        interior.or(found.first()).cloned().ok_or_else(|| {
            CliError::core(
                "equilibrium",
                chaosctl_core::Error::NoConvergence {
                    iterations: opts.max_iter,
                    residual: f64::NAN,
                },
            )
        })
    }

    fn target(&self, scheme: Scheme, report: &mut Report) -> CliResult<Option<StateVector>> {
        if !scheme.uses_target() {
            return Ok(None);
        }
        match &self.cfg.control.target {
            Some(t) => {
                report.push("control.target.source", "config");
                self.state("control.target", t).map(Some)
            }
            None => {
                report.push(
                    "control.target.source",
                    "equilibrium of the uncontrolled map",
                );
                self.equilibrium_of(&*self.model).map(Some)
            }
        }
    }

    /// The configured control, if any.
    fn control(&self, report: &mut Report) -> CliResult<Option<ControlConfig>> {
        let Some(scheme) = self.cfg.control.scheme else {
            report.push("control.scheme", "none");
            return Ok(None);
        };
        let c = &self.cfg.control.c;
        let intensity = match c.as_slice() {
            [] => {
                return Err(CliError::config(
                    "control.c",
                    "a control scheme needs an intensity",
                ))
            }
            [one] => Intensity::Scalar(*one),
            many => {
                self.check_len("control.c", many)?;
                Intensity::Diagonal(many.to_vec())
            }
        };
        let target = self.target(scheme, report)?;
        let cfg = ControlConfig::new(scheme, intensity, target, self.dim).field("control")?;
        cfg.validate_for(self.model.domain())
            .field("control.target")?;
        report.push("control.scheme", scheme.name());
        report.push_vec("control.c", c);
        report.push_vec("control.target", cfg.target().as_slice());
        Ok(Some(cfg))
    }
}

/// Builds the model and runs the configured command.
pub fn execute(cfg: &RunConfig, registry: &Registry) -> CliResult<Outputs> {
    cfg.validate()?;
    let model = registry.build(&cfg.model)?;
    let dim = model.dim();
    let ctx = Ctx { cfg, model, dim };
    let mut report = Report::default();
    report.push("command", cfg.command.name());
    report.push("model", &cfg.model.name);
    report.push("dim", dim);
    report.push("seed", cfg.seed);
    report.push("strict", cfg.strict);
    match cfg.command {
        Command::Simulate => simulate(&ctx, report),
        Command::Equilibrium => equilibrium(&ctx, report),
        Command::Stability => stability(&ctx, report),
        Command::Bifurcate => scan_command(&ctx, report, true),
        Command::Bubbles => scan_command(&ctx, report, false),
        Command::Lyapunov => lyapunov(&ctx, report),
        Command::Cost => cost(&ctx, report),
    }
}

fn orbit(
    ctx: &Ctx,
    control: Option<&ControlConfig>,
    x0: &StateVector,
) -> CliResult<Vec<StateVector>> {
    let (t, k) = (ctx.cfg.sim.n_transient, ctx.cfg.sim.n_keep);
    let run = if ctx.cfg.strict {
        iterate_orbit_strict
    } else {
        iterate_orbit
    };
    run(&*ctx.model, control, x0, t, k).context("orbit")
}

fn push_periods(ctx: &Ctx, report: &mut Report, orbit: &[StateVector]) {
    let s = &ctx.cfg.scan;
    match detect_period(orbit, s.period_tol, s.max_period) {
        Ok(p) => report.push(
            "periods",
            p.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        Err(e) => report.push("periods", format!("unavailable ({e})")),
    }
}

fn simulate(ctx: &Ctx, mut report: Report) -> CliResult<Outputs> {
    let control = ctx.control(&mut report)?;
    let x0 = ctx.sim_x0()?;
    report.push_vec("x0", x0.as_slice());
    let orbit = orbit(ctx, control.as_ref(), &x0)?;
    report.push("n_transient", ctx.cfg.sim.n_transient);
    report.push("n_keep", ctx.cfg.sim.n_keep);
    report.push_vec("final", orbit.last().map_or(&[][..], |x| x.as_slice()));
    push_periods(ctx, &mut report, &orbit);
    Ok(Outputs {
        report,
        scan_csv: None,
        orbit_csv: Some(orbit_csv(&orbit, ctx.cfg.sim.n_transient + 1)),
    })
}

fn equilibrium(ctx: &Ctx, mut report: Report) -> CliResult<Outputs> {
    let control = ctx.control(&mut report)?;
    let k = match &control {
        Some(c) => {
            let g = chaosctl_core::controls::Controlled::new(&*ctx.model, c.clone())
                .context("control")?;
            ctx.equilibrium_of(&g)?
        }
        None => ctx.equilibrium_of(&*ctx.model)?,
    };
    let g_res = match &control {
        Some(c) => {
            chaosctl_core::controls::apply_control(&*ctx.model, c, &k).context("equilibrium")?
        }
        None => ctx.model.evaluate(&k).context("equilibrium")?,
    };
    report.push_vec("equilibrium", k.as_slice());
    report.push_num(
        "equilibrium_residual",
        g_res.distance(&k, chaosctl_core::NormKind::Max),
    );
    report.push("equilibrium.tol", num(ctx.cfg.equilibrium.tol));
    Ok(Outputs {
        report,
        scan_csv: None,
        orbit_csv: None,
    })
}

fn optional_box(
    ctx: &Ctx,
    lo: &Option<Vec<f64>>,
    hi: &Option<Vec<f64>>,
    key: &str,
) -> CliResult<Option<SampleBox>> {
    match (lo, hi) {
        (None, None) => Ok(None),
        (Some(lo), Some(hi)) => {
            ctx.check_len(&format!("{key}.lo"), lo)?;
            ctx.check_len(&format!("{key}.hi"), hi)?;
            SampleBox::new(lo.clone(), hi.clone()).field(key).map(Some)
        }
        _ => Err(CliError::config(key, "set both lo and hi")),
    }
}

fn stability(ctx: &Ctx, mut report: Report) -> CliResult<Outputs> {
    let st = &ctx.cfg.stability;
    let k = ctx.equilibrium_of(&*ctx.model)?;
    let set = optional_box(ctx, &st.set_lo, &st.set_hi, "stability.set")?;
    let (set, set_plan) = match set {
        Some(b) => (b, SamplePlan::new(st.grid, st.samples)),
        None => (SampleBox::point(&k), SamplePlan::new(1, 0)),
    };
    let lipschitz_box = optional_box(
        ctx,
        &st.lipschitz_lo,
        &st.lipschitz_hi,
        "stability.lipschitz",
    )?;
    let setup = StabilitySetup {
        set,
        set_plan,
        lipschitz_box,
        lipschitz_plan: SamplePlan::new(st.grid, st.samples),
        norm: ctx.cfg.norm,
    };
    let r = stability_report(&*ctx.model, &k, &setup).context("stability")?;
    report.push_vec("S.lo", setup.set.lo());
    report.push_vec("S.hi", setup.set.hi());
    report.extend(r.records());
    Ok(Outputs {
        report,
        scan_csv: None,
        orbit_csv: None,
    })
}

/// Runs every grid value; independent grid values are spread over a
/// thread pool (capped by `CHAOSCTL_THREADS`) and merged in grid order.
pub fn parallel_scan<M: MapModel + Sync + ?Sized>(
    f: &M,
    spec: &ScanSpec,
) -> CliResult<Vec<ScanRecord>> {
    if matches!(spec.init, InitPolicy::Continue { .. }) {
        return bifurcation_scan(f, spec).context("scan");
    }
    spec.validate(f.dim()).context("scan")?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::config(
                THREADS_ENV,
                format!("expected a positive integer, got '{v}'"),
            )
        })?;
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config(THREADS_ENV, e.to_string()))?;
    Ok(pool.install(|| {
        (0..spec.c_grid.len())
            .into_par_iter()
            .map(|i| scan_point(f, spec, i))
            .collect()
    }))
}

/// The scan configured by `cfg` for a model of dimension `dim`.
fn scan_spec(ctx: &Ctx, report: &mut Report) -> CliResult<ScanSpec> {
    let scheme = ctx
        .cfg
        .control
        .scheme
        .ok_or_else(|| CliError::config("control.scheme", "a scan needs a control scheme"))?;
    let target = ctx
        .target(scheme, report)?
        .unwrap_or_else(|| StateVector::zeros(ctx.dim));
    let s = &ctx.cfg.scan;
    let (lo, hi) = ctx.init_box()?;
    let init =
        match s.init {
            InitKind::Fresh => InitPolicy::Fresh { lo, hi },
            InitKind::Continue => InitPolicy::Continue { lo, hi },
            InitKind::Fixed => {
                let x0 =
                    ctx.cfg.sim.x0.as_ref().ok_or_else(|| {
                        CliError::config("sim.x0", "scan.init = fixed needs sim.x0")
                    })?;
                InitPolicy::Fixed(ctx.state("sim.x0", x0)?)
            }
        };
    let mut spec = ScanSpec::new(scheme, target);
    spec.c_grid = s.grid.values();
    spec.init = init;
    spec.seed = ctx.cfg.seed;
    spec.n_transient = ctx.cfg.sim.n_transient;
    spec.n_keep = ctx.cfg.sim.n_keep;
    spec.period_tol = s.period_tol;
    spec.max_period = s.max_period;
    spec.strict = ctx.cfg.strict;
    report.push("control.scheme", scheme.name());
    report.push_vec("control.target", spec.target.as_slice());
    report.push("scan.grid", &s.grid);
    report.push("scan.points", spec.c_grid.len());
    report.push("scan.init", format!("{:?}", s.init).to_lowercase());
    report.push("scan.n_transient", spec.n_transient);
    report.push("scan.n_keep", spec.n_keep);
    report.push("scan.period_window", spec.window());
    report.push_num("scan.period_tol", spec.period_tol);
    report.push("scan.max_period", spec.max_period);
    Ok(spec)
}

fn scan_command(ctx: &Ctx, mut report: Report, write_csv: bool) -> CliResult<Outputs> {
    let spec = scan_spec(ctx, &mut report)?;
    let records = parallel_scan(&*ctx.model, &spec)?;
    let errors: Vec<&ScanRecord> = records.iter().filter(|r| r.error.is_some()).collect();
    report.push("scan.errors", errors.len());
    for r in &errors {
        report.push(
            format!("scan.error.{}", r.index),
            format!(
                "c={} {}",
                num(r.c),
                r.error.as_ref().map(|e| e.to_string()).unwrap_or_default()
            ),
        );
    }
    let profile = stabilization_profile(&records);
    report.push(
        "stabilization.onset",
        profile.onset.map_or_else(|| "none".to_string(), num),
    );
    report.push(
        "stabilization.losses_after_onset",
        profile.losses_after_onset.len(),
    );
    let bubbles = detect_bubbles(&records);
    report.push("bubbles", bubbles.len());
    for (i, b) in bubbles.iter().enumerate() {
        report.push(format!("bubble.{i}.component"), b.component);
        report.push_num(format!("bubble.{i}.c_lo"), b.c_lo);
        report.push_num(format!("bubble.{i}.c_hi"), b.c_hi);
    }
    let scan_csv = if write_csv {
        let costs = if ctx.cfg.scan.cost {
            report.push("scan.cost.norm", ctx.cfg.norm);
            report.push("scan.cost.window", "retained points");
            Some(scan_costs(ctx, &spec, &records))
        } else {
            None
        };
        let first = spec.n_transient + spec.window() - spec.n_keep + 1;
        Some(scan_csv(&records, first, costs.as_deref()))
    } else {
        None
    };
    Ok(Outputs {
        report,
        scan_csv,
        orbit_csv: None,
    })
}

fn scan_costs(ctx: &Ctx, spec: &ScanSpec, records: &[ScanRecord]) -> Vec<Option<f64>> {
    records
        .iter()
        .map(|r| {
            if r.error.is_some() || r.retained.is_empty() {
                return None;
            }
            let cfg = ControlConfig::new(
                spec.scheme,
                Intensity::Scalar(r.c),
                Some(spec.target.clone()),
                ctx.dim,
            )
            .ok()?;
            let w = Window::new(0, r.retained.len());
            cost_per_step(&*ctx.model, &cfg, &r.retained, w, ctx.cfg.norm)
                .ok()
                .map(|e| e.p)
        })
        .collect()
}

fn lyapunov(ctx: &Ctx, mut report: Report) -> CliResult<Outputs> {
    let control = ctx.control(&mut report)?;
    let x0 = ctx.sim_x0()?;
    let n = ctx.cfg.lyapunov.n;
    let l = lyapunov_max(&ctx.model, control.as_ref(), &x0, n).context("lyapunov")?;
    report.push_vec("x0", x0.as_slice());
    report.push("lyapunov.n", n);
    report.push("lyapunov.averaged_steps", n - n / 5);
    report.push_num("lyapunov.max", l);
    report.push(
        "lyapunov.sign",
        if l > 0.0 { "positive" } else { "non-positive" },
    );
    Ok(Outputs {
        report,
        scan_csv: None,
        orbit_csv: None,
    })
}

fn cost(ctx: &Ctx, mut report: Report) -> CliResult<Outputs> {
    let control = ctx
        .control(&mut report)?
        .ok_or_else(|| CliError::config("control.scheme", "cost needs a control scheme"))?;
    let x0 = ctx.sim_x0()?;
    let orbit = orbit(ctx, Some(&control), &x0)?;
    let start = ctx.cfg.cost.window_start;
    let len = ctx
        .cfg
        .cost
        .window_len
        .unwrap_or(orbit.len().saturating_sub(start));
    if len == 0 || start + len > orbit.len() {
        return Err(CliError::config(
            "cost.window",
            format!(
                "window [{start}, {}) does not fit the {} retained points",
                start + len,
                orbit.len()
            ),
        ));
    }
    let est = cost_per_step(
        &*ctx.model,
        &control,
        &orbit,
        Window::new(start, len),
        ctx.cfg.norm,
    )
    .context("cost")?;
    report.push_vec("x0", x0.as_slice());
    report.push_num("cost.P", est.p);
    report.push("cost.norm", est.norm);
    report.push("cost.window.start", start);
    report.push("cost.window.len", len);
    report.push(
        "cost.window.first_step",
        ctx.cfg.sim.n_transient + 1 + start,
    );
    let periods = detect_period(
        &orbit,
        ctx.cfg.scan.period_tol,
        ctx.cfg.scan.max_period.min(orbit.len() / 2).max(1),
    );
    if let (Ok(p), Some(last)) = (periods, orbit.last()) {
        if p.iter().all(|p| p.is_fixed()) {
            let e = equilibrium_cost(&*ctx.model, &control, last, ctx.cfg.norm).context("cost")?;
            report.push_vec("cost.equilibrium_state", last.as_slice());
            report.push_num("cost.equilibrium", e);
        }
    }
    report.push(
        "cost.note",
        "symmetric unit prices; asymmetric culling/restocking and stage-dependent prices are not modelled",
    );
    Ok(Outputs {
        report,
        scan_csv: None,
        orbit_csv: Some(orbit_csv(&orbit, ctx.cfg.sim.n_transient + 1)),
    })
}

/// Output file paths for a prefix.
pub fn output_paths(prefix: &str) -> [PathBuf; 3] {
    [
        PathBuf::from(format!("{prefix}.scan.csv")),
        PathBuf::from(format!("{prefix}.orbit.csv")),
        PathBuf::from(format!("{prefix}.report.txt")),
    ]
}

/// Executes the command and writes `<out>.report.txt` plus whichever CSV
/// files the command produces. Returns the written paths.
pub fn run(cfg: &RunConfig, registry: &Registry) -> CliResult<Vec<PathBuf>> {
    let out = execute(cfg, registry)?;
    let [scan, orbit, report] = output_paths(&cfg.out);
    let mut written = Vec::new();
    for (path, body) in [
        (scan, out.scan_csv),
        (orbit, out.orbit_csv),
        (report, Some(out.report.render())),
    ] {
        if let Some(body) = body {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
