//! Subcommand drivers: resolve flags and config, run the analysis, emit the artifact.

use serde_json::json;

use gscpcc::codec::{ber_experiment, BerPoint, CodeInstance, DecoderConfig, ExperimentConfig, PunctureMode};
use gscpcc::conv::ConvCodeSpec;
use gscpcc::de::{bp_threshold, DeConfig, DeMode, EnsembleParams};
use gscpcc::potential::{
    capacity_bound, map_threshold_area, potential_threshold, single_system_threshold, two_state_potential_threshold,
    AreaConfig, PotentialConfig,
};
use gscpcc::studio::{optimize_lambda, threshold_table, LambdaChoice, LambdaGrid, TableRow, TableSpec, DEFAULT_COUPLING_LENGTH};
use gscpcc::transfer::{Backend, McConfig, TransferModel};
use gscpcc::{Model64, Params64};

use crate::args::*;
use crate::config;
use crate::output::{Artifact, CliError};

type Res<T> = Result<T, CliError>;

fn threads(io: &IoOpt) -> Res<()> {
    if let Some(n) = io.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    Ok(())
}

pub fn parse_rate(s: &str) -> Res<f64> {
    let bad = || CliError::Usage(format!("cannot parse rate {s:?}"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Res<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing required setting --{flag}")))
}

fn code(s: &str) -> Res<ConvCodeSpec> {
    Ok(s.parse::<ConvCodeSpec>()?)
}

fn params(e: &EnsembleArgs) -> Res<Params64> {
    let c = code(&required(&e.code, "code")?)?;
    let rate = parse_rate(&required(&e.rate, "rate")?)?;
    let q = e.q.unwrap_or(1);
    let lambda = e.lambda.unwrap_or(1.0 / q.max(1) as f64);
    Ok(EnsembleParams::new(c, rate, q, lambda, e.m.unwrap_or(0), e.l.unwrap_or(1))?)
}

fn de_config(d: &DeArgs) -> DeConfig {
    let def = DeConfig::default();
    DeConfig {
        tol: d.de_tol.unwrap_or(def.tol),
        zero_thresh: d.zero_thresh.unwrap_or(def.zero_thresh),
        max_iters: d.max_iters.unwrap_or(def.max_iters),
        bisect_tol: d.bisect_tol.unwrap_or(def.bisect_tol),
    }
}

fn model(c: &ConvCodeSpec, d: &DeArgs) -> Res<Model64> {
    let backend = match d.backend.unwrap_or(BackendKind::Auto) {
        BackendKind::Auto => Backend::default_for(c),
        BackendKind::Exact => Backend::Exact { grid_points: d.grid_points.unwrap_or(1001) },
        BackendKind::Mc => {
            let def = McConfig::default();
            let mc = McConfig {
                trellis_len: d.mc_len.unwrap_or(def.trellis_len),
                seed: d.mc_seed.unwrap_or(def.seed),
                ..def
            };
            Backend::MonteCarlo { grid_points: d.grid_points.unwrap_or(201), mc }
        }
    };
    Ok(TransferModel::new(c.clone(), backend)?)
}

fn is_regular(p: &Params64) -> bool {
    p.q >= 2 && (p.lambda * p.q as f64 - 1.0).abs() < 1e-12
}

pub fn threshold(mut a: ThresholdArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    a.ensemble.fill(DEFAULT_COUPLING_LENGTH);
    a.de.fill();
    let p = params(&a.ensemble)?;
    let m = model(&p.code, &a.de)?;
    let cfg = de_config(&a.de);
    let mode = if p.m == 0 { DeMode::Uncoupled } else { DeMode::Coupled };
    let rec = bp_threshold(&p, &m, mode, &cfg);
    let mode_s = if p.m == 0 { "uncoupled" } else { "coupled" };
    let mut art = Artifact::new(
        "threshold",
        "code,rate,q,lambda,rho,m,L,mode,threshold,gap,probes,iterations",
        &a,
        &[json!({
            "code": p.code.to_string(), "rate": p.rate, "q": p.q, "lambda": p.lambda, "rho": p.rho,
            "m": p.m, "L": p.l, "mode": mode_s, "threshold": rec.threshold, "gap": rec.gap(),
            "probes": rec.probes, "iterations": rec.iterations,
        })],
    )
    .with_extra(json!({ "transfer": m.describe(), "de": cfg }));
    art.lines.push(format!(
        "\"{}\",{},{},{},{:.6},{},{},{},{:.6},{:.6},{},{}",
        p.code, p.rate, p.q, p.lambda, p.rho, p.m, p.l, mode_s, rec.threshold, rec.gap(), rec.probes, rec.iterations
    ));
    art.emit(a.io.out.as_deref(), a.io.json)
}

pub fn potential(mut a: PotentialArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    a.ensemble.fill(1);
    let def = PotentialConfig::default();
    a.de.bisect_tol.get_or_insert(def.bisect_tol);
    a.de.fill();
    let pc = PotentialConfig {
        grid_points: *a.potential_grid.get_or_insert(def.grid_points),
        bisect_tol: a.de.bisect_tol.unwrap_or(def.bisect_tol),
        ..def
    };
    let p = params(&a.ensemble)?.with_coupling(0, 1);
    let m = model(&p.code, &a.de)?;
    let eps_s = single_system_threshold(&p, &m, &pc);
    let eps_c = potential_threshold(&p, &m, &pc);
    let bound = if is_regular(&p) { capacity_bound::<f64>(p.rate, p.q).ok() } else { None };
    let closed = if is_regular(&p) && p.code.num_states() == 2 {
        two_state_potential_threshold::<f64>(p.rate, p.q).ok()
    } else {
        None
    };
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let mut art = Artifact::new(
        "potential",
        "code,rate,q,lambda,eps_s,eps_c,bound,closed_form,gap",
        &a,
        &[json!({
            "code": p.code.to_string(), "rate": p.rate, "q": p.q, "lambda": p.lambda,
            "eps_s": eps_s, "eps_c": eps_c, "bound": bound, "closed_form": closed, "gap": 1.0 - p.rate - eps_c,
        })],
    )
    .with_extra(json!({ "transfer": m.describe(), "potential": pc }));
    art.lines.push(format!(
        "\"{}\",{},{},{},{:.6},{:.6},{},{},{:.6}",
        p.code,
        p.rate,
        p.q,
        p.lambda,
        eps_s,
        eps_c,
        opt(bound),
        opt(closed),
        1.0 - p.rate - eps_c
    ));
    art.emit(a.io.out.as_deref(), a.io.json)
}

pub fn map(mut a: MapArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    a.ensemble.fill(1);
    a.de.fill();
    let def = AreaConfig::default();
    let ac = AreaConfig {
        step: *a.area_step.get_or_insert(def.step),
        refine_step: *a.area_refine_step.get_or_insert(def.refine_step),
        de: de_config(&a.de),
    };
    let curve = *a.curve.get_or_insert(false);
    let p = params(&a.ensemble)?.with_coupling(0, 1);
    let m = model(&p.code, &a.de)?;
    let res = map_threshold_area(&p, &m, &ac)?;
    let extra = json!({ "transfer": m.describe(), "area": ac, "eps_map": res.eps_map });
    let art = if curve {
        let mut art = Artifact::new("map", "eps,h,p_bar,q_bar,p_u,p_l", &a, &res.curve).with_extra(extra);
        art.lines = res
            .curve
            .iter()
            .map(|c| format!("{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}", c.eps, c.h, c.p_bar, c.q_bar, c.p_u, c.p_l))
            .collect();
        art
    } else {
        let row = json!({
            "code": p.code.to_string(), "rate": p.rate, "q": p.q, "lambda": p.lambda,
            "eps_map": res.eps_map, "gap": 1.0 - p.rate - res.eps_map,
        });
        let mut art = Artifact::new("map", "code,rate,q,lambda,eps_map,gap", &a, &[row]).with_extra(extra);
        art.lines.push(format!(
            "\"{}\",{},{},{},{:.6},{:.6}",
            p.code,
            p.rate,
            p.q,
            p.lambda,
            res.eps_map,
            1.0 - p.rate - res.eps_map
        ));
        art
    };
    art.emit(a.io.out.as_deref(), a.io.json)
}

pub fn optimize(mut a: OptimizeArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    a.ensemble.fill(DEFAULT_COUPLING_LENGTH);
    a.de.fill();
    let def = LambdaGrid::default();
    let coarse = *a.coarse_step.get_or_insert(def.coarse_step.unwrap_or(0.0));
    let grid = LambdaGrid {
        step: *a.step.get_or_insert(def.step),
        coarse_step: (coarse > 0.0).then_some(coarse),
        refine_margin: *a.refine_margin.get_or_insert(def.refine_margin),
        tie_decimals: *a.tie_decimals.get_or_insert(def.tie_decimals),
    };
    let base = params(&a.ensemble)?;
    if base.q < 2 {
        return Err(CliError::Usage("optimize needs --q 2 or more".into()));
    }
    let m = model(&base.code, &a.de)?;
    let cfg = de_config(&a.de);
    let s = optimize_lambda(&base, &m, &grid, &cfg)?;
    let (lo, hi) = s.lambda_range();
    let rows: Vec<_> = s
        .points
        .iter()
        .map(|&(l, t)| json!({ "lambda": l, "threshold": t, "tied": s.lambda_star.contains(&l) }))
        .collect();
    let extra = json!({
        "transfer": m.describe(), "de": cfg, "grid": grid,
        "lambda_star_min": lo, "lambda_star_max": hi, "lambda_star": s.lambda_center(), "threshold": s.threshold,
    });
    let mut art = Artifact::new("optimize", "lambda,threshold,tied", &a, &rows).with_extra(extra);
    art.lines = s
        .points
        .iter()
        .map(|&(l, t)| format!("{l},{t:.6},{}", s.lambda_star.contains(&l) as u8))
        .collect();
    art.emit(a.io.out.as_deref(), a.io.json)
}

pub fn table(mut a: TableArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    let def = TableSpec::default();
    let codes = a
        .codes
        .get_or_insert_with(|| def.codes.iter().map(|c| c.octal_label()).collect())
        .iter()
        .map(|c| code(c))
        .collect::<Res<Vec<_>>>()?;
    let rates = a
        .rates
        .get_or_insert_with(|| vec!["1/2".into()])
        .iter()
        .map(|r| parse_rate(r))
        .collect::<Res<Vec<_>>>()?;
    let lambda = if *a.optimize_lambda.get_or_insert(false) {
        LambdaChoice::Optimized { grid: LambdaGrid::default() }
    } else {
        match a.lambda {
            Some(lambda) => LambdaChoice::Fixed { lambda },
            None => LambdaChoice::Regular,
        }
    };
    let de = DeConfig { bisect_tol: *a.bisect_tol.get_or_insert(def.de.bisect_tol), ..def.de };
    let spec = TableSpec {
        codes,
        rates,
        qs: a.qs.get_or_insert_with(|| def.qs.clone()).clone(),
        ms: a.ms.get_or_insert_with(|| def.ms.clone()).clone(),
        lambda,
        l: *a.l.get_or_insert(def.l),
        potential: *a.potential.get_or_insert(false),
        area_map: *a.map.get_or_insert(false),
        de,
        ..def
    };
    let rows = threshold_table(&spec)?;
    let mut art = Artifact::new("table", TableRow::CSV_HEADER, &a, &rows).with_extra(json!({ "spec": spec }));
    art.lines = rows.iter().map(TableRow::csv_line).collect();
    art.emit(a.io.out.as_deref(), a.io.json)
}

pub fn simulate(mut a: SimulateArgs) -> Res<()> {
    let path = a.io.config.clone();
    config::apply(&mut a, path.as_deref())?;
    threads(&a.io)?;
    a.ensemble.fill(20);
    let seed = required(&a.seed, "seed")?;
    let k = required(&a.k, "k")?;
    let eps_list = required(&a.eps, "eps")?;
    let def = ExperimentConfig::default();
    let ddef = DecoderConfig::default();
    let decoder = DecoderConfig {
        max_intra: *a.max_intra.get_or_insert(ddef.max_intra),
        max_inter: *a.max_inter.get_or_insert(ddef.max_inter),
        window: a.window,
    };
    let cfg = ExperimentConfig {
        eps_list,
        min_errors: *a.min_errors.get_or_insert(def.min_errors),
        max_bits: *a.max_bits.get_or_insert(def.max_bits),
        seed,
        batch: *a.batch.get_or_insert(def.batch),
        puncture: match *a.puncture.get_or_insert(PunctureKind::Random) {
            PunctureKind::Random => PunctureMode::Random,
            PunctureKind::Periodic => PunctureMode::Periodic,
        },
        decoder,
        random_data: *a.random_data.get_or_insert(false),
    };
    let criterion = *a.criterion.get_or_insert(false);
    let p = params(&a.ensemble)?;
    let inst = CodeInstance::build(&p, k, seed, criterion)?;
    let points = ber_experiment(&inst, &cfg)?;
    let extra = json!({
        "experiment": cfg,
        "instance": {
            "code": p.code.to_string(), "k": inst.k, "k_prime": inst.k_prime, "n_rep": inst.n_rep,
            "lambda_realized": inst.lambda_realized, "rho": p.rho, "seed": inst.seed,
            "criterion": inst.criterion_enabled, "criterion_violations": inst.violations().len(),
        },
    });
    let mut art = Artifact::new("simulate", BerPoint::CSV_HEADER, &a, &points).with_extra(extra);
    art.lines = points.iter().map(BerPoint::csv_line).collect();
    art.emit(a.io.out.as_deref(), a.io.json)
}
