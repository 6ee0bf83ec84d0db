//! Scenario execution: fixture construction, runs with monitors, audits,
//! checks, and artifact emission.

use std::path::Path;

use mcflab::ambient::AmbientModel;
use mcflab::flows::{
    diffeo_monitor, displacement_monitor, metric_equivalence_monitor, BackgroundConnection,
    CoupledRun, FlowConfig, FlowHistory, FlowState, Scheme,
};
use mcflab::immersion::ImmersionField;
use mcflab::pseudolocality::{
    gaussian_density, monotonicity_check, persistence_audit, point_pick,
    pseudolocality_audit, PersistenceMode,
};
use mcflab::rng::SplitMix64;
use mcflab::shapes;

use crate::emit::{fmt_f64, write_atomic, write_csv, Json};
use crate::scenario::Scenario;

pub struct RunOutcome {
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub expected: String,
}

fn build_model(s: &Scenario) -> Result<AmbientModel<f64>, String> {
    let dim = s.usize_key("ambient.dim")?.unwrap();
    Ok(match s.get("ambient.kind").unwrap() {
        "euclidean" => AmbientModel::euclidean(dim),
        "sphere" => AmbientModel::sphere(dim, s.f64_key("ambient.radius")?.unwrap()),
        "hyperbolic" => AmbientModel::hyperbolic(dim, s.f64_key("ambient.curvature")?.unwrap()),
        "flat-torus" => {
            let mut periods = [0.0f64; 4];
            for (i, p) in s.get("ambient.periods").unwrap().split(',').enumerate() {
                periods[i] = p.trim().parse().unwrap();
            }
            AmbientModel::flat_torus(dim, periods)
        }
        other => return Err(format!("unhandled ambient {other}")),
    })
}

fn parse_nodes(s: &Scenario) -> Result<(usize, usize), String> {
    let raw = s.get("shape.nodes").ok_or("missing shape.nodes")?;
    if let Some((a, b)) = raw.split_once('x') {
        Ok((
            a.trim().parse().map_err(|_| "bad shape.nodes")?,
            b.trim().parse().map_err(|_| "bad shape.nodes")?,
        ))
    } else {
        Ok((raw.trim().parse().map_err(|_| "bad shape.nodes")?, 0))
    }
}

fn build_field(s: &Scenario) -> Result<ImmersionField<f64>, String> {
    let (n0, n1) = parse_nodes(s)?;
    let mut field = match s.get("shape.kind").unwrap() {
        "circle" => {
            let r = s.f64_key("shape.radius")?.unwrap_or(1.0);
            let cx = s.f64_key("shape.center-x")?.unwrap_or(0.0);
            let cy = s.f64_key("shape.center-y")?.unwrap_or(0.0);
            shapes::circle(r, [cx, cy], n0)
        }
        "ellipse" => shapes::ellipse(
            s.f64_key("shape.a")?.unwrap_or(1.0),
            s.f64_key("shape.b")?.unwrap_or(0.5),
            n0,
        ),
        "line-with-bump" => shapes::line_with_bump(
            s.f64_key("shape.half-length")?.unwrap_or(1.0),
            n0,
            s.f64_key("shape.bump-center")?.unwrap_or(0.0),
            s.f64_key("shape.bump-height")?.unwrap_or(0.0),
            s.f64_key("shape.bump-width")?.unwrap_or(0.1),
            s.usize_key("shape.band")?.unwrap_or(3),
        ),
        "graph-of-function" => shapes::graph_of_function(
            s.f64_key("shape.amp")?.unwrap_or(0.1),
            s.f64_key("shape.freq")?.unwrap_or(1.0),
            s.f64_key("shape.half-length")?.unwrap_or(1.0),
            n0,
            s.usize_key("shape.band")?.unwrap_or(3),
        ),
        "sphere" => shapes::sphere(s.f64_key("shape.radius")?.unwrap_or(1.0), n0, n1.max(8)),
        "clifford-torus" => shapes::clifford_torus(
            s.f64_key("shape.r1")?.unwrap_or(1.0),
            s.f64_key("shape.r2")?.unwrap_or(1.0),
            n0,
            n1.max(8),
        ),
        "great-circle" => {
            let r = s.f64_key("ambient.radius")?.unwrap();
            shapes::great_circle(r, n0)
        }
        other => return Err(format!("unhandled shape {other}")),
    };
    // The euclidean builders already use the right model; swap in the torus
    // model when requested (circle in a periodic box).
    let model = build_model(s)?;
    if model != field.model {
        if field.model.dim != model.dim {
            return Err("shape/ambient dimension mismatch".into());
        }
        field.model = model;
    }

    // Optional frozen normal perturbation for gauge experiments.
    if let Some(eta) = s.f64_key("shape.perturb-eta")? {
        if field.grid.dim != 1 {
            return Err("perturbations are implemented for curves".into());
        }
        let n = field.grid.shape[0];
        match s.get("shape.perturb-mode").unwrap_or("bump") {
            "bump" => {
                let w = s.f64_key("shape.perturb-width")?.unwrap_or(0.013);
                let th0 = s.f64_key("shape.perturb-theta")?.unwrap_or(2.0);
                shapes::apply_normal_perturbation(&mut field, |i| {
                    let th = i as f64 / n as f64 * std::f64::consts::TAU;
                    let d = th - th0;
                    eta * (-d * d / (2.0 * w * w)).exp()
                });
            }
            "uniform" => shapes::apply_normal_perturbation(&mut field, |_| eta),
            "random" => {
                let seed: u64 = s.get("seed").unwrap().parse().map_err(|_| "bad seed")?;
                let mut rng = SplitMix64::new(seed);
                let amps: Vec<f64> = (0..n).map(|_| rng.uniform(-eta, eta)).collect();
                shapes::apply_normal_perturbation(&mut field, |i| amps[i]);
            }
            other => return Err(format!("unknown perturb-mode `{other}`")),
        }
    }
    Ok(field)
}

fn mean_radius(field: &ImmersionField<f64>) -> f64 {
    let dim = field.model.dim;
    field
        .x
        .iter()
        .map(|p| (0..dim).map(|c| p[c] * p[c]).sum::<f64>().sqrt())
        .sum::<f64>()
        / field.x.len() as f64
}

fn fit_exponent(samples: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, d)| *t >= lo && *t <= hi && *d > 0.0)
        .map(|&(t, d)| (t.ln(), d.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

pub fn execute(s: &Scenario, out_dir: &Path, quiet: bool) -> Result<RunOutcome, String> {
    let field = build_field(s)?;
    let t_max = s
        .f64_key("flow.t-max")?
        .ok_or("flow.t-max is required to run")?;
    let mut cfg = FlowConfig::new(t_max).with_cfl(s.f64_key("flow.cfl")?.unwrap());
    if let Some(dt) = s.f64_key("flow.dt")? {
        cfg = cfg.with_dt(dt);
    }
    if s.get("flow.scheme") == Some("rk4-in-time") {
        cfg = cfg.with_scheme(Scheme::Rk4);
    }
    let record_every = s.usize_key("monitors.record-every")?.unwrap().max(1);
    let coupled_on = s.bool_key("monitors.coupled")? && field.grid.dim == 1;
    let gradient_on = s.bool_key("monitors.gradient")?;
    let snapshot_times: Vec<f64> = match s.get("monitors.snapshots") {
        None => vec![],
        Some(raw) => raw
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| "bad snapshot time".to_string()))
            .collect::<Result<_, _>>()?,
    };

    let mut state = FlowState::new(field).map_err(|e| e.to_string())?;
    let background = if s.get("flow.gauge") == Some("deturck") {
        Some(BackgroundConnection::from_geometry(&state.geometry))
    } else {
        None
    };
    let mut coupled = if coupled_on {
        Some(CoupledRun::new(state.clone(), false))
    } else {
        None
    };

    let mut history = FlowHistory::new(state.field.grid.clone(), state.field.model.clone());
    history.record(&state);

    // Series columns: t, sup_a, sup_h, volume [+ monitor columns].
    let mut header: Vec<&str> = vec!["t", "sup_a", "sup_h", "volume"];
    if coupled_on {
        header.extend_from_slice(&["displacement", "equivalence_ratio", "gauge_min_det"]);
    }
    if gradient_on {
        header.extend_from_slice(&["t12_grad3", "t1_grad4"]);
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut displacement_series: Vec<(f64, f64)> = Vec::new();
    let mut diffeo_ok = true;
    let mut equivalence_last = 1.0f64;

    let emit_row = |state: &FlowState<f64>,
                    coupled: &Option<CoupledRun<f64>>,
                    rows: &mut Vec<Vec<f64>>| {
        let row_base = state.series.last().unwrap();
        let mut row = vec![row_base.t, row_base.sup_a, row_base.sup_h, row_base.volume];
        if let Some(run) = coupled {
            let d = displacement_monitor(&run.map);
            let me = metric_equivalence_monitor(&run.map, &run.flow.geometry);
            let di = diffeo_monitor(&run.map);
            row.extend_from_slice(&[d, me.ratio(), di.min_det]);
        }
        if gradient_on {
            let (g3, g4) = mcflab::flows::gradient_norms(&state.field, &state.geometry);
            row.push(state.time.sqrt() * g3);
            row.push(state.time * g4);
        }
        rows.push(row);
    };
    emit_row(&state, &coupled, &mut rows);

    let mut snapshots_done = vec![false; snapshot_times.len()];
    let mut artifacts = vec!["series.csv".to_string(), "summary.json".to_string()];
    let mut snapshot_paths: Vec<(usize, f64)> = Vec::new();
    let mut since = 0usize;
    let eps = 1e-14 * t_max.max(1.0);
    let mut fields_to_dump: Vec<(String, ImmersionField<f64>)> = Vec::new();
    while state.time + eps < t_max {
        if let Some(run) = coupled.as_mut() {
            run.step(&cfg).map_err(|e| e.to_string())?;
            state = run.flow.clone();
        } else {
            mcflab::flows::step_flow(&mut state, &cfg, background.as_ref())
                .map_err(|e| e.to_string())?;
        }
        since += 1;
        if since == record_every || state.time + eps >= t_max {
            history.record(&state);
            emit_row(&state, &coupled, &mut rows);
            if let Some(run) = &coupled {
                let d = displacement_monitor(&run.map);
                displacement_series.push((state.time, d));
                let me = metric_equivalence_monitor(&run.map, &run.flow.geometry);
                equivalence_last = me.ratio();
                let di = diffeo_monitor(&run.map);
                diffeo_ok &= di.min_det > 0.0 && di.injective;
            }
            since = 0;
        }
        for (k, &ts) in snapshot_times.iter().enumerate() {
            if !snapshots_done[k] && state.time + eps >= ts {
                snapshots_done[k] = true;
                let name = format!("snapshots/snap{:03}.csv", k);
                fields_to_dump.push((name.clone(), state.field.clone()));
                snapshot_paths.push((k, state.time));
                artifacts.push(name);
            }
        }
    }

    // Emit immersion snapshots: axis indices then chart coordinates,
    // lexicographic node order.
    for (name, f) in &fields_to_dump {
        let mut text = String::new();
        let adim = f.model.dim;
        if f.grid.dim == 1 {
            text.push_str("i0");
        } else {
            text.push_str("i0,i1");
        }
        for c in 0..adim {
            text.push_str(&format!(",x{c}"));
        }
        text.push('\n');
        for idx in 0..f.node_count() {
            let (i0, i1) = f.grid.coords(idx);
            if f.grid.dim == 1 {
                text.push_str(&format!("{i0}"));
            } else {
                text.push_str(&format!("{i0},{i1}"));
            }
            for c in 0..adim {
                text.push_str(&format!(",{}", fmt_f64(f.x[idx][c])));
            }
            text.push('\n');
        }
        write_atomic(&out_dir.join(name), text.as_bytes()).map_err(|e| e.to_string())?;
    }

    write_csv(&out_dir.join("series.csv"), &header, &rows).map_err(|e| e.to_string())?;

    // Audits.
    let mut audit_json: Option<Json> = None;
    let mut audit_pass: Option<bool> = None;
    let mut monotonicity_pass: Option<bool> = None;
    if let Some(kind) = s.get("audit.kind") {
        let center = s.usize_key("audit.center-node")?.unwrap_or(0);
        match kind {
            "pseudolocality" => {
                let rep = pseudolocality_audit(
                    &history,
                    center,
                    s.f64_key("audit.r0")?.ok_or("audit.r0 required")?,
                    s.f64_key("audit.epsilon")?.ok_or("audit.epsilon required")?,
                    s.f64_key("audit.alpha")?.ok_or("audit.alpha required")?,
                )
                .map_err(|e| e.to_string())?;
                audit_pass = Some(rep.passes);
                let witness = match rep.witness {
                    Some((ti, node)) => Json::Obj(vec![
                        ("time".into(), Json::Num(history.times[ti])),
                        ("node".into(), Json::Int(node as i64)),
                    ]),
                    None => Json::Null,
                };
                audit_json = Some(Json::Obj(vec![
                    ("kind".into(), Json::Str("pseudolocality".into())),
                    ("alpha".into(), Json::Num(rep.alpha)),
                    ("epsilon".into(), Json::Num(rep.eps)),
                    ("r0".into(), Json::Num(rep.r0)),
                    ("passes".into(), Json::Bool(rep.passes)),
                    ("max_weighted".into(), Json::Num(rep.max_weighted)),
                    ("delta_measured".into(), Json::Num(rep.delta_measured)),
                    ("initial_is_graph".into(), Json::Bool(rep.initial_is_graph)),
                    ("audited_samples".into(), Json::Int(rep.audited_samples as i64)),
                    ("witness".into(), witness),
                    ("empty_audit".into(), Json::Bool(rep.empty_audit)),
                ]));
            }
            "persistence-thm75" | "persistence-cor76" => {
                let mode = if kind == "persistence-thm75" {
                    PersistenceMode::GraphicBall
                } else {
                    PersistenceMode::UniformDoubling
                };
                let rep = persistence_audit(
                    &history,
                    center,
                    s.f64_key("audit.r0")?.unwrap_or(0.5),
                    s.f64_key("audit.epsilon")?.unwrap_or(0.1),
                    s.f64_key("audit.c0")?.unwrap_or(1.0),
                    s.f64_key("audit.t-window")?.unwrap_or(t_max),
                    mode,
                )
                .map_err(|e| e.to_string())?;
                audit_pass = Some(rep.passes);
                let viol = match rep.first_violation {
                    Some((ti, node, a)) => Json::Obj(vec![
                        ("time".into(), Json::Num(history.times[ti])),
                        ("node".into(), Json::Int(node as i64)),
                        ("a_norm".into(), Json::Num(a)),
                    ]),
                    None => Json::Null,
                };
                audit_json = Some(Json::Obj(vec![
                    ("kind".into(), Json::Str(kind.into())),
                    ("passes".into(), Json::Bool(rep.passes)),
                    ("bound".into(), Json::Num(rep.bound)),
                    ("t_window".into(), Json::Num(rep.t_window)),
                    ("audited_samples".into(), Json::Int(rep.audited_samples as i64)),
                    ("first_violation".into(), viol),
                ]));
            }
            "density" => {
                let t_bar = s.f64_key("audit.t-bar")?.unwrap_or(t_max);
                let eps_a = s.f64_key("audit.epsilon")?.unwrap_or(0.5);
                let x_bar = history.positions[0][center];
                let rep = gaussian_density(&history, &x_bar, t_bar, eps_a)
                    .map_err(|e| e.to_string())?;
                let mono = monotonicity_check(&rep).map_err(|e| e.to_string())?;
                monotonicity_pass = Some(mono.passes);
                audit_pass = Some(mono.passes);
                audit_json = Some(Json::Obj(vec![
                    ("kind".into(), Json::Str("density".into())),
                    ("t_bar".into(), Json::Num(t_bar)),
                    ("epsilon".into(), Json::Num(eps_a)),
                    ("rho".into(), Json::Num(rep.rho)),
                    ("passes".into(), Json::Bool(mono.passes)),
                    ("max_violation".into(), Json::Num(mono.max_violation)),
                    ("pairs".into(), Json::Int(mono.pairs as i64)),
                    ("samples".into(), Json::Int(rep.times.len() as i64)),
                    ("truncation_warning".into(), Json::Bool(rep.truncation_warning)),
                    (
                        "density".into(),
                        Json::Arr(rep.density.iter().map(|v| Json::Num(*v)).collect()),
                    ),
                ]));
            }
            "point-pick" => {
                let alpha = s.f64_key("audit.alpha")?.unwrap_or(0.1);
                let kp = s.f64_key("audit.k")?.unwrap_or(1.0);
                let eps_a = s.f64_key("audit.epsilon")?.unwrap_or(0.1);
                let picked =
                    point_pick(&history, alpha, kp, eps_a, None).map_err(|e| e.to_string())?;
                audit_pass = Some(true);
                audit_json = Some(match picked {
                    None => Json::Obj(vec![
                        ("kind".into(), Json::Str("point-pick".into())),
                        ("found".into(), Json::Bool(false)),
                    ]),
                    Some(p) => Json::Obj(vec![
                        ("kind".into(), Json::Str("point-pick".into())),
                        ("found".into(), Json::Bool(true)),
                        ("time".into(), Json::Num(history.times[p.time_idx])),
                        ("node".into(), Json::Int(p.node as i64)),
                        ("q".into(), Json::Num(p.q)),
                        ("verified".into(), Json::Bool(p.neighborhood_verified)),
                        ("cadence_sufficient".into(), Json::Bool(p.cadence_sufficient)),
                        ("trace_len".into(), Json::Int(p.trace.len() as i64)),
                    ]),
                });
            }
            other => return Err(format!("unhandled audit {other}")),
        }
        artifacts.push("audit.json".to_string());
    }

    // Expected-value checks.
    let mut checks: Vec<Check> = Vec::new();
    if let Some(want) = s.f64_key("expect.mean-radius")? {
        let rtol = s.f64_key("expect.mean-radius-rtol")?.unwrap_or(1e-3);
        let got = mean_radius(&state.field);
        checks.push(Check {
            name: "mean-radius".into(),
            passed: (got - want).abs() <= rtol * want.abs(),
            value: got,
            expected: format!("{want} ± {rtol} rel"),
        });
    }
    if let Some(bound) = s.f64_key("expect.sup-h-max")? {
        let got = state.series.iter().map(|r| r.sup_h).fold(0.0f64, f64::max);
        checks.push(Check {
            name: "sup-h-max".into(),
            passed: got <= bound,
            value: got,
            expected: format!("<= {bound}"),
        });
    }
    if s.bool_key("expect.volume-monotone")? {
        let ok = state
            .series
            .windows(2)
            .all(|w| w[1].volume <= w[0].volume + 1e-10 * w[0].volume);
        checks.push(Check {
            name: "volume-monotone".into(),
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            expected: "nonincreasing".into(),
        });
    }
    if s.bool_key("expect.diffeo")? {
        checks.push(Check {
            name: "diffeo".into(),
            passed: diffeo_ok,
            value: if diffeo_ok { 1.0 } else { 0.0 },
            expected: "det > 0 and injective".into(),
        });
    }
    if let Some(want) = s.f64_key("expect.equivalence-ratio")? {
        let rtol = s.f64_key("expect.equivalence-rtol")?.unwrap_or(0.05);
        checks.push(Check {
            name: "equivalence-ratio".into(),
            passed: (equivalence_last - want).abs() <= rtol * want,
            value: equivalence_last,
            expected: format!("{want} ± {rtol} rel"),
        });
    }
    if let (Some(lo), Some(hi)) = (
        s.f64_key("expect.displacement-exponent-lo")?,
        s.f64_key("expect.displacement-exponent-hi")?,
    ) {
        let got = fit_exponent(&displacement_series, 1e-4, 1e-2).unwrap_or(f64::NAN);
        checks.push(Check {
            name: "displacement-exponent".into(),
            passed: got.is_finite() && got >= lo && got <= hi,
            value: got,
            expected: format!("[{lo}, {hi}]"),
        });
    }
    if let Some(want) = s.get("expect.audit-pass") {
        let want_b = want == "true" || want == "on";
        let got = audit_pass.ok_or("expect.audit-pass without audit.kind")?;
        checks.push(Check {
            name: "audit-pass".into(),
            passed: got == want_b,
            value: if got { 1.0 } else { 0.0 },
            expected: want.to_string(),
        });
    }
    if s.bool_key("expect.monotonicity")? {
        let got = monotonicity_pass.ok_or("expect.monotonicity needs audit.kind = density")?;
        checks.push(Check {
            name: "monotonicity".into(),
            passed: got,
            value: if got { 1.0 } else { 0.0 },
            expected: "slope within slack".into(),
        });
    }

    let passed = checks.iter().all(|c| c.passed);

    // summary.json: scenario echo (sorted), checks, artifacts.
    let scenario_echo = Json::Obj(
        s.keys
            .iter()
            .map(|(k, v)| (k.clone(), Json::Str(v.clone())))
            .collect(),
    );
    let checks_json = Json::Arr(
        checks
            .iter()
            .map(|c| {
                Json::Obj(vec![
                    ("name".into(), Json::Str(c.name.clone())),
                    ("passed".into(), Json::Bool(c.passed)),
                    ("value".into(), Json::Num(c.value)),
                    ("expected".into(), Json::Str(c.expected.clone())),
                ])
            })
            .collect(),
    );
    let snapshots_json = Json::Arr(
        snapshot_paths
            .iter()
            .map(|(k, t)| {
                Json::Obj(vec![
                    ("file".into(), Json::Str(format!("snapshots/snap{:03}.csv", k))),
                    ("t".into(), Json::Num(*t)),
                ])
            })
            .collect(),
    );
    let mut artifacts_sorted = artifacts.clone();
    artifacts_sorted.sort();
    let summary = Json::Obj(vec![
        ("scenario".into(), scenario_echo),
        ("steps".into(), Json::Int(state.steps as i64)),
        ("final_time".into(), Json::Num(state.time)),
        ("checks".into(), checks_json),
        ("snapshots".into(), snapshots_json),
        (
            "artifacts".into(),
            Json::Arr(artifacts_sorted.iter().map(|a| Json::Str(a.clone())).collect()),
        ),
        ("passed".into(), Json::Bool(passed)),
    ]);
    write_atomic(&out_dir.join("summary.json"), summary.to_string_pretty().as_bytes())
        .map_err(|e| e.to_string())?;
    if let Some(aj) = audit_json {
        write_atomic(&out_dir.join("audit.json"), aj.to_string_pretty().as_bytes())
            .map_err(|e| e.to_string())?;
    }

    if !quiet {
        println!("run: {} steps to t = {}", state.steps, fmt_f64(state.time));
        for c in &checks {
            println!(
                "  [{}] {}: {} (expected {})",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                fmt_f64(c.value),
                c.expected
            );
        }
    }

    Ok(RunOutcome { passed, checks })
}

/// Sweep one numeric axis; the error column is self-convergence against a
/// reference run at a quarter of the smallest swept value (isolating the
/// swept-axis error from the fixed-grid floor). Returns (value, error) rows,
/// the fitted order, and monotonicity.
pub fn sweep(
    s: &Scenario,
    axis: &str,
    values: &[String],
    out_dir: &Path,
    quiet: bool,
) -> Result<(Vec<(f64, f64)>, f64, bool), String> {
    let run_one = |derived: &Scenario| -> Result<f64, String> {
        let field = build_field(derived)?;
        let t_max = derived.f64_key("flow.t-max")?.ok_or("flow.t-max required")?;
        let mut cfg = FlowConfig::new(t_max).with_cfl(derived.f64_key("flow.cfl")?.unwrap());
        if let Some(dt) = derived.f64_key("flow.dt")? {
            cfg = cfg.with_dt(dt);
        }
        if derived.get("flow.scheme") == Some("rk4-in-time") {
            cfg = cfg.with_scheme(Scheme::Rk4);
        }
        let mut state = FlowState::new(field).map_err(|e| e.to_string())?;
        mcflab::flows::run_flow(&mut state, &cfg, None).map_err(|e| e.to_string())?;
        Ok(mean_radius(&state.field))
    };

    let mut axis_vals = Vec::new();
    for v in values {
        axis_vals.push(v.parse::<f64>().map_err(|_| "sweep values must be numeric")?);
    }
    let finest = axis_vals.iter().cloned().fold(f64::MAX, f64::min);
    let reference = run_one(&s.with_override(axis, &format!("{}", finest / 4.0))?)?;
    if let Some(want) = s.f64_key("expect.mean-radius")? {
        let rtol = s.f64_key("expect.mean-radius-rtol")?.unwrap_or(1e-2);
        if (reference - want).abs() > rtol * want.abs() {
            return Err(format!(
                "reference run radius {reference} misses expect.mean-radius {want}"
            ));
        }
    }
    let mut rows = Vec::new();
    for (v, axis_val) in values.iter().zip(&axis_vals) {
        let derived = s.with_override(axis, v)?;
        let r = run_one(&derived)?;
        rows.push((*axis_val, (r - reference).abs() / reference.abs()));
    }
    let mut orders = Vec::new();
    for w in rows.windows(2) {
        let (x1, e1) = w[0];
        let (x2, e2) = w[1];
        orders.push((e1 / e2).ln() / (x1 / x2).ln());
    }
    let order = orders.iter().sum::<f64>() / orders.len().max(1) as f64;
    let monotone = rows.windows(2).all(|w| w[1].1 <= w[0].1);

    let csv_rows: Vec<Vec<f64>> = rows.iter().map(|(v, e)| vec![*v, *e]).collect();
    write_csv(&out_dir.join("sweep.csv"), &[axis, "rel_error"], &csv_rows)
        .map_err(|e| e.to_string())?;
    if !quiet {
        println!("sweep over {axis}:");
        for (v, e) in &rows {
            println!("  {} -> rel error {}", fmt_f64(*v), fmt_f64(*e));
        }
        println!("fitted order {} ({})", fmt_f64(order), if monotone { "monotone" } else { "NOT monotone" });
    }
    Ok((rows, order, monotone))
}
