use std::time::{SystemTime, UNIX_EPOCH};

use polariton_core::coefficients::{loss_exchange, spectral_coefficients};
use polariton_core::modes::{
    density_maps, mode_average, mode_average_with_table, ChannelGeometry, GaussianChannel,
    GridSpec, ModeAverage, ModeOptions, RadialTable,
};
use polariton_core::network::{simulate_network, truth_table_from, RailNetwork};
use polariton_core::scattering::amplitude_profile;
use polariton_core::sweeps::{fit_power_law, optimal_separation, sweep_separation};
use polariton_core::{derive_model, ModelParams, PhysicalParams, Sign, SolverOptions};
use serde_json::{json, Value};

use crate::config::{GridValue, RunConfig};
use crate::grid::{parse_grid, parse_interval};
use crate::output::{emit, Cell, Report, Table};
use crate::{Cli, CliError, Command, Format, GeometryArgs, ModelArgs, SolverArgs};

struct Context<'a> {
    cli: &'a Cli,
    config: RunConfig,
}

enum ModelSource {
    Optical(Vec<f64>, Sign),
    Physical(PhysicalParams),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid_or(
    flag: &Option<String>,
    config: &Option<GridValue>,
) -> Result<Option<Vec<f64>>, CliError> {
    match (flag, config) {
        (Some(s), _) => parse_grid(s).map(Some),
        (None, Some(g)) => g.values().map(Some),
        (None, None) => Ok(None),
    }
}

fn required(v: Option<Vec<f64>>, name: &str) -> Result<Vec<f64>, CliError> {
    match v {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(usage(format!("--{name} is required"))),
    }
}

fn single(v: Vec<f64>, name: &str) -> Result<f64, CliError> {
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(usage(format!(
            "--{name} takes a single value here, got {} values",
            v.len()
        ))),
    }
}

impl<'a> Context<'a> {
    fn model_source(&self, m: &ModelArgs) -> Result<ModelSource, CliError> {
        let physical_flags = [m.coupling, m.rabi, m.decay, m.c3, m.speed_of_light];
        let any_physical = physical_flags.iter().any(Option::is_some);
        let flag_physical = if any_physical {
            match (m.coupling, m.rabi, m.decay, m.c3, m.speed_of_light) {
                (Some(coupling), Some(rabi), Some(decay), Some(c3), Some(speed_of_light)) => Some(PhysicalParams {
                    coupling,
                    rabi,
                    decay,
                    c3,
                    speed_of_light,
                }),
                _ => {
                    return Err(usage(
                        "physical parameters need all of --coupling, --rabi, --decay, --c3, --speed-of-light",
                    ))
                }
            }
        } else {
            None
        };
        let sign_value = m.sign.or(self.config.sign);
        let (db, physical) = match (&m.db, flag_physical) {
            (Some(_), Some(_)) => {
                return Err(usage("give either --db or physical parameters, not both"))
            }
            (Some(db), None) => (Some(parse_grid(db)?), None),
            (None, Some(p)) => (None, Some(p)),
            (None, None) => match (&self.config.db, &self.config.physical) {
                (Some(_), Some(_)) => {
                    return Err(usage("config gives both db and physical parameters"))
                }
                (Some(db), None) => (Some(db.values()?), None),
                (None, p) => (None, *p),
            },
        };
        match (db, physical) {
            (Some(db), None) => {
                let sign = match sign_value.unwrap_or(1) {
                    1 => Sign::Positive,
                    -1 => Sign::Negative,
                    s => return Err(usage(format!("--sign must be 1 or -1, got {s}"))),
                };
                Ok(ModelSource::Optical(db, sign))
            }
            (None, Some(p)) => {
                if m.sign.is_some() {
                    return Err(usage(
                        "--sign follows from the sign of C3 with physical parameters",
                    ));
                }
                Ok(ModelSource::Physical(p))
            }
            _ => Err(usage(
                "a model is required: --db or the physical parameter set",
            )),
        }
    }

    fn models(&self, m: &ModelArgs) -> Result<Vec<ModelParams>, CliError> {
        match self.model_source(m)? {
            ModelSource::Optical(db, sign) => db
                .into_iter()
                .map(|d| ModelParams::dimensionless(d, sign).map_err(CliError::from))
                .collect(),
            ModelSource::Physical(p) => Ok(vec![derive_model(&p)?]),
        }
    }

    fn model(&self, m: &ModelArgs) -> Result<ModelParams, CliError> {
        let mut all = self.models(m)?;
        if all.len() != 1 {
            return Err(usage(format!(
                "--db takes a single value here, got {}",
                all.len()
            )));
        }
        Ok(all.remove(0))
    }

    fn mode_options(&self, s: &SolverArgs) -> Result<ModeOptions, CliError> {
        let d = SolverOptions::default();
        let solver = SolverOptions {
            rtol: s.rtol.or(self.config.rtol).unwrap_or(d.rtol),
            atol: s.atol.or(self.config.atol).unwrap_or(d.atol),
            tail_epsilon: s
                .tail_epsilon
                .or(self.config.tail_epsilon)
                .unwrap_or(d.tail_epsilon),
            loss_free: s.loss_free || self.config.loss_free.unwrap_or(d.loss_free),
            ..d
        };
        solver.validate()?;
        let mut opts = ModeOptions {
            solver,
            ..Default::default()
        };
        if let Some(n) = s.nodes.or(self.config.nodes) {
            opts.table_nodes = n;
        }
        Ok(opts)
    }

    fn waists(&self, g: &GeometryArgs) -> (f64, f64) {
        let c = &self.config;
        let photon = g
            .waist_photon
            .or(g.waist)
            .or(c.waist_photon)
            .or(c.waist)
            .unwrap_or(0.0);
        let spin = g
            .waist_spin
            .or(g.waist)
            .or(c.waist_spin)
            .or(c.waist)
            .unwrap_or(0.0);
        (photon, spin)
    }

    fn separations(&self, g: &GeometryArgs) -> Result<Vec<f64>, CliError> {
        required(grid_or(&g.sep, &self.config.sep)?, "sep")
    }

    fn metadata(&self, parameters: Value, opts: Option<&ModeOptions>) -> Value {
        let mut meta = json!({
            "tool": "polariton",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.cli.command.name(),
            "units": {"length": "blockade radius", "rate": "EIT linewidth"},
            "parameters": parameters,
        });
        if let Some(o) = opts {
            meta["solver"] = json!({
                "rtol": o.solver.rtol,
                "atol": o.solver.atol,
                "tail_epsilon": o.solver.tail_epsilon,
                "loss_free": o.solver.loss_free,
                "table_nodes": o.table_nodes,
                "quad_abs_tol": o.quad_abs_tol,
                "quad_rel_tol": o.quad_rel_tol,
            });
        }
        if let Some(path) = &self.cli.config {
            meta["config"] = json!(path.display().to_string());
        }
        let stamp = !self.cli.no_timestamp && self.config.timestamp.unwrap_or(true);
        if stamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            meta["timestamp_unix"] = json!(secs);
        }
        meta
    }

    fn format(&self) -> Format {
        self.cli
            .format
            .or(self.config.format)
            .unwrap_or(Format::Csv)
    }
}

fn geometry(separation: f64, waists: (f64, f64)) -> Result<ChannelGeometry, CliError> {
    Ok(ChannelGeometry::new(
        GaussianChannel::new([-separation / 2.0, 0.0], waists.0)?,
        GaussianChannel::new([separation / 2.0, 0.0], waists.1)?,
    ))
}

/// Mode averages over a list of separations sharing one radial table.
fn averages(
    model: &ModelParams,
    seps: &[f64],
    waists: (f64, f64),
    opts: &ModeOptions,
) -> Result<Vec<ModeAverage>, CliError> {
    let geoms = seps
        .iter()
        .map(|&l| geometry(l, waists))
        .collect::<Result<Vec<_>, _>>()?;
    let w_eff = geoms[0].effective_waist();
    if w_eff == 0.0 {
        return geoms
            .iter()
            .map(|g| mode_average(model, g, opts).map_err(CliError::from))
            .collect();
    }
    let l_max = seps.iter().cloned().fold(0.0, f64::max);
    let table = RadialTable::build(model, l_max + 8.0 * w_eff + 4.0, opts)?;
    geoms
        .iter()
        .map(|g| mode_average_with_table(&table, g, opts).map_err(CliError::from))
        .collect()
}

fn model_json(m: &ModelParams) -> Value {
    serde_json::to_value(m).unwrap_or(Value::Null)
}

pub fn execute(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Context { cli, config };
    let format = ctx.format();
    let (report, meta) = match &cli.command {
        Command::Coeffs {
            model,
            z,
            rperp,
            spectral,
            k,
            omega,
        } => coeffs(&ctx, model, z, rperp, *spectral, k, omega)?,
        Command::Amplitudes {
            model,
            solver,
            rperp,
        } => amplitudes(&ctx, model, solver, rperp)?,
        Command::Efficiency {
            model,
            solver,
            geometry,
        } => efficiency(&ctx, model, solver, geometry, false)?,
        Command::Gate {
            model,
            solver,
            geometry,
        } => efficiency(&ctx, model, solver, geometry, true)?,
        Command::Sweep {
            model,
            solver,
            geometry,
        } => sweep(&ctx, model, solver, geometry)?,
        Command::OptimalSeparation {
            model,
            solver,
            width,
            bracket,
        } => optimum(&ctx, model, solver, *width, bracket)?,
        Command::DensityMap {
            model,
            solver,
            geometry,
            step,
            half_width,
        } => density(&ctx, model, solver, geometry, *step, *half_width)?,
        Command::Network {
            model,
            solver,
            geometry,
            network,
        } => {
            if cli.format == Some(Format::Csv) {
                return Err(usage("network output is JSON only"));
            }
            network_report(&ctx, model, solver, geometry, network)?
        }
    };
    emit(&report, &meta, format, cli.output.as_deref(), stdout)
}

type Outcome = (Report, Value);

fn coeffs(
    ctx: &Context,
    m: &ModelArgs,
    z: &Option<String>,
    rperp: &Option<String>,
    spectral: bool,
    k: &Option<String>,
    omega: &Option<String>,
) -> Result<Outcome, CliError> {
    let zs = required(grid_or(z, &ctx.config.z)?, "z")?;
    let rs = required(grid_or(rperp, &ctx.config.rperp)?, "rperp")?;
    if spectral {
        let physical = match ctx.model_source(m)? {
            ModelSource::Physical(p) => p,
            ModelSource::Optical(..) => {
                return Err(usage("--spectral needs the physical parameter set"))
            }
        };
        let ks = grid_or(k, &ctx.config.k)?.unwrap_or_else(|| vec![0.0]);
        let ws = grid_or(omega, &ctx.config.omega)?.unwrap_or_else(|| vec![0.0]);
        let mut t = Table::new(vec![
            "z", "r_perp", "K", "omega", "re_A_bar", "im_A_bar", "re_B_bar", "im_B_bar",
        ]);
        for &w in &ws {
            for &kk in &ks {
                for &r in &rs {
                    for &zz in &zs {
                        let p = spectral_coefficients(zz, r, kk, w, &physical)?;
                        t.push(vec![
                            zz.into(),
                            r.into(),
                            kk.into(),
                            w.into(),
                            p.a_bar.re.into(),
                            p.a_bar.im.into(),
                            p.b_bar.re.into(),
                            p.b_bar.im.into(),
                        ]);
                    }
                }
            }
        }
        let model = derive_model(&physical)?;
        let meta = ctx.metadata(
            json!({"model": model_json(&model), "physical": physical, "spectral": true}),
            None,
        );
        return Ok((Report::Table(t), meta));
    }
    let model = ctx.model(m)?;
    let mut t = Table::new(vec!["z", "r_perp", "U", "A", "B"]);
    for &r in &rs {
        for &zz in &zs {
            let c = loss_exchange(zz, r, &model)?;
            t.push(vec![
                zz.into(),
                r.into(),
                c.u.into(),
                c.a.re.into(),
                c.b.re.into(),
            ]);
        }
    }
    let meta = ctx.metadata(json!({"model": model_json(&model)}), None);
    Ok((Report::Table(t), meta))
}

fn amplitudes(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    rperp: &Option<String>,
) -> Result<Outcome, CliError> {
    let model = ctx.model(m)?;
    let opts = ctx.mode_options(s)?;
    let rs = required(grid_or(rperp, &ctx.config.rperp)?, "rperp")?;
    let mut t = Table::new(vec![
        "r_perp",
        "re_T",
        "im_T",
        "re_H",
        "im_H",
        "flux",
        "truncation_estimate",
    ]);
    for res in amplitude_profile(&model, &rs, &opts.solver) {
        let a = res?;
        t.push(vec![
            a.r_perp.into(),
            a.t.re.into(),
            a.t.im.into(),
            a.h.re.into(),
            a.h.im.into(),
            a.flux.into(),
            a.truncation_estimate.into(),
        ]);
    }
    let meta = ctx.metadata(json!({"model": model_json(&model)}), Some(&opts));
    Ok((Report::Table(t), meta))
}

fn efficiency(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    g: &GeometryArgs,
    gate: bool,
) -> Result<Outcome, CliError> {
    let model = ctx.model(m)?;
    let opts = ctx.mode_options(s)?;
    let seps = ctx.separations(g)?;
    let waists = ctx.waists(g);
    let avgs = averages(&model, &seps, waists, &opts)?;
    let mut t = if gate {
        Table::new(vec![
            "separation",
            "waist_photon",
            "waist_spin",
            "figure_of_merit",
            "infidelity",
            "re_h2_bar",
            "im_h2_bar",
            "sequential_figure_of_merit",
            "quadrature_error",
            "interpolation_error",
        ])
    } else {
        Table::new(vec![
            "separation",
            "waist_photon",
            "waist_spin",
            "eta",
            "re_h_bar",
            "im_h_bar",
            "re_t_bar",
            "im_t_bar",
            "quadrature_error",
            "interpolation_error",
        ])
    };
    for (l, a) in seps.iter().zip(&avgs) {
        let mut row: Vec<Cell> = vec![(*l).into(), waists.0.into(), waists.1.into()];
        if gate {
            let f = a.figure_of_merit();
            row.extend([
                f.into(),
                (1.0 - f).into(),
                a.h2_bar.re.into(),
                a.h2_bar.im.into(),
                a.efficiency().powi(2).into(),
            ]);
        } else {
            row.extend([
                a.efficiency().into(),
                a.h_bar.re.into(),
                a.h_bar.im.into(),
                a.t_bar.re.into(),
                a.t_bar.im.into(),
            ]);
        }
        row.extend([a.quadrature_error.into(), a.interpolation_error.into()]);
        t.push(row);
    }
    let meta = ctx.metadata(
        json!({"model": model_json(&model), "waist_photon": waists.0, "waist_spin": waists.1}),
        Some(&opts),
    );
    Ok((Report::Table(t), meta))
}

fn sweep(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    g: &GeometryArgs,
) -> Result<Outcome, CliError> {
    let models = ctx.models(m)?;
    let opts = ctx.mode_options(s)?;
    let seps = ctx.separations(g)?;
    let (wp, ws) = ctx.waists(g);
    if wp != ws {
        return Err(usage("sweep uses equal rail waists; give --waist"));
    }
    let mut t = Table::new(vec![
        "d_b",
        "separation",
        "waist",
        "eta",
        "figure_of_merit",
        "truncation_estimate",
        "error",
    ]);
    for model in &models {
        for r in sweep_separation(model, &seps, wp, &opts)? {
            t.push(vec![
                r.d_b.into(),
                r.separation.into(),
                r.waist.into(),
                r.eta.unwrap_or(f64::NAN).into(),
                r.figure_of_merit.unwrap_or(f64::NAN).into(),
                r.truncation_estimate.into(),
                Cell::Text(r.error.unwrap_or_default()),
            ]);
        }
    }
    let d_bs: Vec<f64> = models.iter().map(|m| m.d_b).collect();
    let meta = ctx.metadata(
        json!({"d_b": d_bs, "sign": models[0].sign, "waist": wp}),
        Some(&opts),
    );
    Ok((Report::Table(t), meta))
}

fn optimum(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    width: Option<f64>,
    bracket: &Option<String>,
) -> Result<Outcome, CliError> {
    let models = ctx.models(m)?;
    let opts = ctx.mode_options(s)?;
    let waist = width.or(ctx.config.waist).unwrap_or(0.0);
    let bracket = match bracket {
        Some(b) => Some(parse_interval(b)?),
        None => ctx.config.bracket.map(|[lo, hi]| (lo, hi)),
    };
    let mut t = Table::new(vec![
        "d_b",
        "L_opt",
        "eta_opt",
        "figure_of_merit",
        "infidelity",
        "bracket_hi",
    ]);
    let mut points = Vec::new();
    for model in &models {
        let o = optimal_separation(model, waist, bracket, &opts)?;
        t.push(vec![
            model.d_b.into(),
            o.separation.into(),
            o.eta.into(),
            o.figure_of_merit.into(),
            (1.0 - o.figure_of_merit).into(),
            o.bracket.1.into(),
        ]);
        points.push((model.d_b, o.separation, 1.0 - o.figure_of_merit));
    }
    let mut params = json!({
        "d_b": models.iter().map(|m| m.d_b).collect::<Vec<_>>(),
        "sign": models[0].sign,
        "waist": waist,
        "bracket": bracket.map(|b| [b.0, b.1]),
    });
    if points.len() >= 4 {
        let sep = fit_power_law(&points.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>());
        let inf = fit_power_law(&points.iter().map(|p| (p.0, p.2)).collect::<Vec<_>>());
        params["fits"] = json!({
            "L_opt": sep.ok(),
            "infidelity": inf.ok(),
        });
    }
    let meta = ctx.metadata(params, Some(&opts));
    Ok((Report::Table(t), meta))
}

fn density(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    g: &GeometryArgs,
    step: Option<f64>,
    half_width: Option<f64>,
) -> Result<Outcome, CliError> {
    let model = ctx.model(m)?;
    let opts = ctx.mode_options(s)?;
    let sep = single(ctx.separations(g)?, "sep")?;
    let geom = geometry(sep, ctx.waists(g))?;
    let mut grid = GridSpec::around(&geom)?;
    if let Some(h) = step.or(ctx.config.step) {
        grid.step = h;
    }
    if let Some(h) = half_width.or(ctx.config.half_width) {
        grid.half_width = h;
    }
    let map = density_maps(&model, &geom, &grid, &opts)?;
    let mut t = Table::new(vec!["x", "y", "photon_density", "spinwave_density"]);
    for i in 0..map.photon_density.len() {
        let r = grid.coordinate(i);
        t.push(vec![
            r[0].into(),
            r[1].into(),
            map.photon_density[i].into(),
            map.spin_wave_density[i].into(),
        ]);
    }
    let meta = ctx.metadata(
        json!({
            "model": model_json(&model),
            "geometry": geom,
            "grid": {
                "center": grid.center,
                "half_width": grid.half_width,
                "step": grid.step,
                "points_per_axis": map.points_per_axis,
                "order": "x fastest",
            },
            "norms": {"photon": map.photon_norm, "spin_wave": map.spin_wave_norm},
        }),
        Some(&opts),
    );
    Ok((Report::Table(t), meta))
}

fn network_report(
    ctx: &Context,
    m: &ModelArgs,
    s: &SolverArgs,
    g: &GeometryArgs,
    path: &Option<std::path::PathBuf>,
) -> Result<Outcome, CliError> {
    let model = ctx.model(m)?;
    let opts = ctx.mode_options(s)?;
    let net = match (path, &ctx.config.network) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read network {}: {e}", p.display())))?;
            serde_json::from_str::<RailNetwork>(&text)
                .map_err(|e| usage(format!("invalid network {}: {e}", p.display())))?
        }
        (None, Some(n)) => n.clone(),
        (None, None) => {
            let sep = single(ctx.separations(g)?, "sep")?;
            let (wp, ws) = ctx.waists(g);
            if wp != ws {
                return Err(usage("the default network uses equal waists; give --waist"));
            }
            RailNetwork::three_rail(sep, wp)?
        }
    };
    let report = simulate_network(&net, &model, &opts)?;
    let table = truth_table_from(&report);
    let doc = json!({
        "network": net,
        "collisions": report.collisions,
        "outcomes": report.outcomes,
        "loss": report.loss,
        "figure_of_merit": report.figure_of_merit,
        "sequential_figure_of_merit": report.sequential_figure_of_merit,
        "truth_table": table,
    });
    let meta = ctx.metadata(json!({"model": model_json(&model)}), Some(&opts));
    Ok((Report::Document(doc), meta))
}
