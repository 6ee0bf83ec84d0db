//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance is pinned here, in code. Run with
//! `cargo test --test acceptance -- --nocapture` to see the per-criterion
//! lines from passing tests as well.

use mcflab::ambient::AmbientModel;
use mcflab::flows::{
    commutation_check, diffeo_monitor, displacement_monitor, isometry_equivariance_check,
    mcf_step, metric_equivalence_monitor, metric_evolution_check, run_flow, run_recorded,
    uniqueness_experiment, AmbientIsometry, CoupledRun, FlowConfig, FlowHistory, FlowState,
};
use mcflab::grid::ParameterGrid;
use mcflab::immersion::{
    gauss_intrinsic_curvature, induced_geometry, local_graph_extract, ImmersionField,
};
use mcflab::linalg::{self, Vector};
use mcflab::pseudolocality::{
    gaussian_density, monotonicity_check, persistence_audit, point_pick,
    pseudolocality_audit, PersistenceMode,
};
use mcflab::rng::SplitMix64;
use mcflab::shapes;

fn report(criterion: usize, name: &str, passed: bool, detail: &str) {
    println!(
        "[acceptance] criterion {criterion:02} {}: {name} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} failed: {detail}");
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

fn fit_loglog(samples: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, d)| *t >= lo && *t <= hi && *d > 0.0)
        .map(|&(t, d)| (t.ln(), d.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_01_shrinking_circle() {
    let mut state = FlowState::new(shapes::circle(1.0f64, [0.0, 0.0], 256)).unwrap();
    let cfg = FlowConfig::new(0.25).with_cfl(0.1);
    run_flow(&mut state, &cfg, None).unwrap();
    let want = 0.5f64.sqrt();
    let got = mean_radius(&state.field);
    let rel = (got - want).abs() / want;
    report(
        1,
        "shrinking circle radius",
        rel <= 1e-3,
        &format!("mean radius {got:.7} vs {want:.7}, rel {rel:.2e} (tol 1e-3)"),
    );
}

#[test]
fn criterion_02_shrinking_sphere() {
    let mut state = FlowState::new(shapes::sphere(1.0f64, 32, 64)).unwrap();
    let cfg = FlowConfig::new(0.1).with_cfl(0.2);
    run_flow(&mut state, &cfg, None).unwrap();
    let want = 0.6f64.sqrt();
    let got = mean_radius(&state.field);
    let rel = (got - want).abs() / want;
    report(
        2,
        "shrinking sphere radius (64x32 pole-regularized grid)",
        rel <= 2e-2,
        &format!("mean radius {got:.6} vs {want:.6}, rel {rel:.2e} (tol 2e-2)"),
    );
}

#[test]
fn criterion_03_great_circle_fixed_point() {
    let n = 6144;
    let initial = shapes::great_circle(1.0f64, n);
    let x0 = initial.x.clone();
    let mut state = FlowState::new(initial).unwrap();
    let cfg = FlowConfig::new(f64::MAX).with_cfl(0.1);
    let mut sup_h: f64 = state.geometry.sup_h;
    for _ in 0..10_000 {
        mcf_step(&mut state, &cfg).unwrap();
        sup_h = sup_h.max(state.geometry.sup_h);
    }
    let model = &state.field.model;
    let mut drift: f64 = 0.0;
    for (p, q) in state.field.x.iter().zip(&x0) {
        drift = drift.max(model.distance(p, q).unwrap());
    }
    report(
        3,
        "totally geodesic great circle over 10^4 steps",
        drift <= 1e-6 && sup_h <= 1e-6,
        &format!("sup drift {drift:.2e} (tol 1e-6), sup|H| {sup_h:.2e} (tol 1e-6)"),
    );
}

#[test]
fn criterion_04_gauss_equation_convergence() {
    // Clifford-style torus: both curvature routes vanish identically.
    let mut clifford_exact = true;
    for n in [24usize, 48] {
        let field = shapes::clifford_torus(1.0f64, 1.0, n, n);
        let geom = induced_geometry(&field).unwrap();
        let rep = gauss_intrinsic_curvature(&field, &geom);
        clifford_exact &= rep.residual_l2 == 0.0;
    }
    // Round sphere: the residual is measurable and second order.
    let res_at = |nl: usize| {
        let field = shapes::sphere(1.0f64, nl, 2 * nl);
        let geom = induced_geometry(&field).unwrap();
        gauss_intrinsic_curvature(&field, &geom).residual_l2
    };
    let e1 = res_at(32);
    let e2 = res_at(64);
    let order = (e1 / e2).log2();
    report(
        4,
        "Gauss-equation residual convergence",
        clifford_exact && order >= 1.9,
        &format!(
            "clifford residual exact: {clifford_exact}; sphere order {order:.2} ({e1:.3e} → {e2:.3e}, min 1.9)"
        ),
    );
}

#[test]
fn criterion_05_metric_evolution() {
    let state = FlowState::new(shapes::circle(1.0f64, [0.0, 0.0], 256)).unwrap();
    let dt = mcflab::flows::cfl_dt(&state, 0.05);
    let rep = metric_evolution_check(&state, dt).unwrap();
    // ∂t g11 = −2 H·h11 = −2 g11 at t = 0 on the unit circle.
    let mut worst_rel: f64 = 0.0;
    for idx in 0..state.field.x.len() {
        let want = -2.0 * state.geometry.nodes[idx].g[0][0];
        let got = rep.dtg[idx][0][0];
        worst_rel = worst_rel.max((got - want).abs() / want.abs());
    }
    report(
        5,
        "metric evolution dt g = -2 H h at t=0",
        worst_rel <= 1e-3,
        &format!("worst node rel deviation {worst_rel:.2e} (tol 1e-3)"),
    );
}

#[test]
fn criterion_06_commutation_k1_halving() {
    let resid = |n: usize, dt: f64| {
        let cfg = FlowConfig::new(4e-3).with_dt(dt);
        let mut run =
            CoupledRun::new(FlowState::new(shapes::ellipse(1.0f64, 0.9, n)).unwrap(), false);
        while run.flow.time < 4e-3 - 1e-14 {
            run.step(&cfg).unwrap();
        }
        commutation_check(&run.flow, &run.map, &cfg, 1).unwrap()
    };
    let r1 = resid(512, 8e-6);
    let r2 = resid(1024, 4e-6);
    let order = (r1 / r2).log2();
    report(
        6,
        "commutation identity k=1 residual halving",
        order >= 0.9,
        &format!("residual {r1:.3e} → {r2:.3e}, order {order:.2} (min 0.9)"),
    );
}

#[test]
fn criterion_07_harmonic_flow_displacement_exponent() {
    // Shrinking circle with a localized normal defect frozen into the
    // target metric; the gauge map's diffusive response follows the
    // √t displacement bound over the fit window.
    let n = 4096usize;
    let mut field = shapes::circle(1.0f64, [0.0, 0.0], n);
    shapes::apply_normal_perturbation(&mut field, |i| {
        let th = i as f64 / n as f64 * std::f64::consts::TAU;
        let d = th - 2.0;
        1e-3 * (-d * d / (2.0 * 0.013f64.powi(2))).exp()
    });
    let mut run = CoupledRun::new(FlowState::new(field).unwrap(), false);
    let cfg = FlowConfig::new(1.05e-2).with_cfl(0.1);
    let mut samples = Vec::new();
    let mut next_record = 2e-5;
    while run.flow.time < 1.05e-2 - 1e-14 {
        run.step(&cfg).unwrap();
        if run.flow.time >= next_record {
            samples.push((run.flow.time, displacement_monitor(&run.map)));
            next_record *= 1.2589;
        }
    }
    let exponent = fit_loglog(&samples, 1e-4, 1e-2);
    let c_fit = samples
        .iter()
        .filter(|(t, _)| *t <= 1e-2)
        .map(|(t, d)| d / t.sqrt())
        .fold(0.0f64, f64::max);
    report(
        7,
        "harmonic-flow displacement exponent",
        (0.4..=0.6).contains(&exponent) && c_fit < 5.0,
        &format!("fitted exponent {exponent:.3} (window [0.4, 0.6]), sqrt-t constant {c_fit:.2e} (< 5)"),
    );
}

#[test]
fn criterion_08_diffeomorphism_and_metric_equivalence() {
    let mut run =
        CoupledRun::new(FlowState::new(shapes::circle(1.0f64, [0.0, 0.0], 1024)).unwrap(), false);
    let cfg = FlowConfig::new(0.1).with_cfl(0.1);
    let mut diffeo_ok = true;
    while run.flow.time < 0.1 - 1e-14 {
        run.step(&cfg).unwrap();
        let d = diffeo_monitor(&run.map);
        diffeo_ok &= d.min_det > 0.0 && d.injective;
    }
    let me = metric_equivalence_monitor(&run.map, &run.flow.geometry);
    let want = 1.0 / (1.0 - 2.0 * run.flow.time);
    let rel = (me.ratio() - want).abs() / want;
    report(
        8,
        "gauge diffeomorphism and metric equivalence",
        diffeo_ok && rel <= 0.05,
        &format!(
            "diffeo throughout: {diffeo_ok}; equivalence ratio {:.6} vs {want:.6}, rel {rel:.2e} (tol 5e-2)",
            me.ratio()
        ),
    );
}

#[test]
fn criterion_09_density_monotonicity() {
    // (a) stationary line through the center: slope check plus the t→t̄
    // limit value e^{−n t̄/(2ε)}(1 − 3n t̄/ρ²)³.
    let t_bar = 0.01;
    let eps = 0.5;
    let line = shapes::line_with_bump(1.0f64, 2001, 0.0, 0.0, 1.0, 2);
    let base = FlowState::new(line).unwrap();
    let mut hist = FlowHistory::new(base.field.grid.clone(), base.field.model.clone());
    let mut times: Vec<f64> = (0..=30).map(|k| k as f64 * 3e-4).collect();
    times.push(t_bar - 1e-5);
    for t in times {
        let mut s = base.clone();
        s.time = t;
        hist.record(&s);
    }
    let rep_line = gaussian_density(&hist, &[0.0; 4], t_bar, eps).unwrap();
    let mono_line = monotonicity_check(&rep_line).unwrap();
    let rho = rep_line.rho;
    let limit = (-t_bar / (2.0 * eps)).exp() * (1.0 - 3.0 * t_bar / (rho * rho)).powi(3);
    let last = *rep_line.density.last().unwrap();
    let limit_rel = (last - limit).abs() / limit;

    // (b) shrinking circle with the center on the curve.
    let circle = shapes::circle(1.0f64, [0.0, 0.0], 512);
    let x_bar = circle.x[0];
    let mut state = FlowState::new(circle).unwrap();
    let cfg = FlowConfig::new(0.19).with_cfl(0.1);
    let hist2 = run_recorded(&mut state, &cfg, None, 40).unwrap();
    let rep_circ = gaussian_density(&hist2, &x_bar, 0.2, eps).unwrap();
    let mono_circ = monotonicity_check(&rep_circ).unwrap();

    report(
        9,
        "localized Gaussian density monotonicity",
        mono_line.passes && mono_circ.passes && limit_rel <= 1e-2,
        &format!(
            "line slope ok: {}, circle slope ok: {}, limit value rel {limit_rel:.2e} (tol 1e-2)",
            mono_line.passes, mono_circ.passes
        ),
    );
}

#[test]
fn criterion_10_point_picking_matches_oracle() {
    // Fixture A: single spatial spike, constant in time.
    let base = FlowState::new(shapes::line_with_bump(1.0f64, 64, 0.0, 0.0, 1.0, 2)).unwrap();
    let mut hist_a = FlowHistory::new(base.field.grid.clone(), base.field.model.clone());
    for k in 1..=20 {
        hist_a.times.push(k as f64 * 0.05);
        hist_a.positions.push(base.field.x.clone());
        let mut a = vec![0.05; 64];
        a[31] = 8.0;
        hist_a.a_fields.push(a);
        hist_a.sup_a.push(8.0);
    }
    let alpha = 0.1;
    let eps = 0.25;
    let picked_a = point_pick(&hist_a, alpha, 1.0, eps, None).unwrap().unwrap();
    // Exhaustive oracle for the seed: first lexicographic violator.
    let mut oracle_a = None;
    'outer: for ti in 0..hist_a.times.len() {
        for node in 0..64 {
            let a = hist_a.a_fields[ti][node];
            if a * a >= alpha / hist_a.times[ti] + 1.0 / (eps * eps) {
                oracle_a = Some((ti, node));
                break 'outer;
            }
        }
    }
    let a_ok = oracle_a == Some((picked_a.time_idx, picked_a.node))
        && picked_a.neighborhood_verified
        && picked_a.q == 8.0;

    // Fixture B: cascade where the first candidate fails the 4Q test once.
    let mut hist_b = FlowHistory::new(base.field.grid.clone(), base.field.model.clone());
    for k in 1..=10 {
        hist_b.times.push(k as f64 * 0.1);
        hist_b.positions.push(base.field.x.clone());
        let mut a = vec![0.05; 64];
        a[30] = 8.0;
        a[32] = 40.0;
        hist_b.a_fields.push(a);
        hist_b.sup_a.push(40.0);
    }
    let picked_b = point_pick(&hist_b, 0.1, 2.0, 0.25, Some((2, 30))).unwrap().unwrap();
    let b_ok = picked_b.node == 32
        && picked_b.q == 40.0
        && picked_b.trace.len() == 2
        && picked_b.neighborhood_verified;

    report(
        10,
        "point picking vs exhaustive-scan oracle",
        a_ok && b_ok,
        &format!(
            "spike fixture: picked (t{}, node {}), oracle {:?}; cascade trace len {}, Q {}",
            picked_a.time_idx, picked_a.node, oracle_a, picked_b.trace.len(), picked_b.q
        ),
    );
}

#[test]
fn criterion_11_pseudolocality_pair() {
    let field = shapes::line_with_bump(1.2f64, 1536, 0.85, 0.08, 0.04, 3);
    let (r0, eps, alpha) = (0.5, 0.1, 0.1);
    let t_end = eps * eps * r0 * r0;
    let mut state = FlowState::new(field.clone()).unwrap();
    let cfg = FlowConfig::new(t_end).with_cfl(0.1);
    let hist = run_recorded(&mut state, &cfg, None, 40).unwrap();

    let center = field
        .x
        .iter()
        .enumerate()
        .min_by(|a, b| a.1[0].abs().partial_cmp(&b.1[0].abs()).unwrap())
        .unwrap()
        .0;
    let flat = pseudolocality_audit(&hist, center, r0, eps, alpha).unwrap();
    let bump = field
        .x
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1[0] - 0.85).abs().partial_cmp(&(b.1[0] - 0.85).abs()).unwrap())
        .unwrap()
        .0;
    let control = pseudolocality_audit(&hist, bump, r0, eps, alpha).unwrap();
    report(
        11,
        "pseudolocality audit pair (alpha=0.1, eps=0.1, r0=0.5)",
        flat.passes && !control.passes,
        &format!(
            "flat-center max {:.4} <= alpha; bump-center max {:.4} > alpha",
            flat.max_weighted, control.max_weighted
        ),
    );
}

#[test]
fn criterion_12_graph_extraction_margin() {
    // Equator band of the unit sphere, resolved to sample the r0/96 disk.
    let n = 501usize;
    let half_width = 0.75;
    let model = AmbientModel::euclidean(3);
    let h = 2.0 * half_width / (n - 1) as f64;
    let grid = ParameterGrid::surface([n, n], [h, h], [false, false], 0, false);
    let mut x = Vec::with_capacity(n * n);
    for i0 in 0..n {
        let theta = std::f64::consts::FRAC_PI_2 - half_width + i0 as f64 * h;
        for i1 in 0..n {
            let phi = -half_width + i1 as f64 * h;
            x.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos(), 0.0]);
        }
    }
    let field = ImmersionField::new(grid, model, x);
    let geom = induced_geometry(&field).unwrap();
    let center = 250 * n + 250;
    let r0 = 0.7;
    let patch = local_graph_extract(&field, &geom, center, r0).unwrap();
    let bound = 36.0 / r0;
    report(
        12,
        "graph extraction ratio bound 36/r0",
        patch.ratio_sup * 10.0 <= bound,
        &format!(
            "sup |DF|/|x'| = {:.3} vs bound {bound:.2} (margin {:.0}x, min 10x)",
            patch.ratio_sup,
            bound / patch.ratio_sup
        ),
    );
}

#[test]
fn criterion_13_distance_squared_hessian() {
    let m = AmbientModel::sphere(2, 1.0);
    let mut rng = SplitMix64::new(0xACCE97);
    let mut pairs = 0;
    let mut worst_rel: f64 = 0.0;
    while pairs < 20 {
        let mut y1: Vector<f64> = linalg::zero_vec();
        for c in 0..2 {
            y1[c] = rng.uniform(-0.8, 0.8);
        }
        let mut dir: Vector<f64> = linalg::zero_vec();
        for c in 0..2 {
            dir[c] = rng.uniform(-1.0, 1.0);
        }
        let d_target = rng.uniform(0.02, 0.24);
        let speed = m.norm(&y1, &dir);
        let v = linalg::scale(&dir, d_target / speed, 2);
        let y2 = match m.exp_map(&y1, &v) {
            Ok(e) => e.point,
            Err(_) => continue,
        };
        let hess = match m.distance_sq_hessian(&y1, &y2) {
            Ok(h) => h,
            Err(_) => continue,
        };
        pairs += 1;

        // Finite-difference covariant Hessian on the product chart.
        let fd = 1e-3;
        let dist2 = |a: &Vector<f64>, b: &Vector<f64>| {
            let d = m.distance(a, b).unwrap();
            d * d
        };
        let shift = |i: usize, e: f64| -> (Vector<f64>, Vector<f64>) {
            let mut a = y1;
            let mut b = y2;
            if i < 2 {
                a[i] += e;
            } else {
                b[i - 2] += e;
            }
            (a, b)
        };
        let mut grad = [0.0f64; 4];
        for (i, g) in grad.iter_mut().enumerate() {
            let (au, bu) = shift(i, fd);
            let (ad, bd) = shift(i, -fd);
            *g = (dist2(&au, &bu) - dist2(&ad, &bd)) / (2.0 * fd);
        }
        let psi0 = dist2(&y1, &y2);
        let g1 = m.christoffel_at(&y1).unwrap();
        let g2 = m.christoffel_at(&y2).unwrap();
        let mut scale: f64 = 1.0;
        let mut entries = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let mut v = if i == j {
                    let (au, bu) = shift(i, fd);
                    let (ad, bd) = shift(i, -fd);
                    (dist2(&au, &bu) - 2.0 * psi0 + dist2(&ad, &bd)) / (fd * fd)
                } else {
                    let pp = {
                        let (a, b) = shift(i, fd);
                        let (mut a2, mut b2) = (a, b);
                        if j < 2 {
                            a2[j] += fd;
                        } else {
                            b2[j - 2] += fd;
                        }
                        dist2(&a2, &b2)
                    };
                    let pm = {
                        let (a, b) = shift(i, fd);
                        let (mut a2, mut b2) = (a, b);
                        if j < 2 {
                            a2[j] -= fd;
                        } else {
                            b2[j - 2] -= fd;
                        }
                        dist2(&a2, &b2)
                    };
                    let mp = {
                        let (a, b) = shift(i, -fd);
                        let (mut a2, mut b2) = (a, b);
                        if j < 2 {
                            a2[j] += fd;
                        } else {
                            b2[j - 2] += fd;
                        }
                        dist2(&a2, &b2)
                    };
                    let mm = {
                        let (a, b) = shift(i, -fd);
                        let (mut a2, mut b2) = (a, b);
                        if j < 2 {
                            a2[j] -= fd;
                        } else {
                            b2[j - 2] -= fd;
                        }
                        dist2(&a2, &b2)
                    };
                    (pp - pm - mp + mm) / (4.0 * fd * fd)
                };
                // Covariant correction with the product connection.
                if (i < 2) == (j < 2) {
                    let gam = if i < 2 { &g1 } else { &g2 };
                    let (ci, cj) = (i % 2, j % 2);
                    let off = if i < 2 { 0 } else { 2 };
                    for c in 0..2 {
                        v -= gam[c][ci][cj] * grad[off + c];
                    }
                }
                entries[i][j] = v;
                entries[j][i] = v;
                scale = scale.max(v.abs());
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let (bi, ci) = (i / 2, i % 2);
                let (bj, cj) = (j / 2, j % 2);
                let got = hess.matrix[bi * mcflab::linalg::MAX_DIM + ci]
                    [bj * mcflab::linalg::MAX_DIM + cj];
                worst_rel = worst_rel.max((got - entries[i][j]).abs() / scale);
            }
        }
    }

    // Transported-difference lower bound with a fitted constant on 100
    // random tangents.
    let y1 = [0.25, -0.15, 0.0, 0.0];
    let dir = [0.6, 0.8, 0.0, 0.0];
    let speed = m.norm(&y1, &dir);
    let v = linalg::scale(&dir, 0.2 / speed, 2);
    let y2 = m.exp_map(&y1, &v).unwrap().point;
    let h = m.distance_sq_hessian(&y1, &y2).unwrap();
    let mut c_fit: f64 = 0.0;
    for _ in 0..100 {
        let mut x1: Vector<f64> = linalg::zero_vec();
        let mut x2: Vector<f64> = linalg::zero_vec();
        for c in 0..2 {
            x1[c] = rng.uniform(-1.0, 1.0);
            x2[c] = rng.uniform(-1.0, 1.0);
        }
        let q = h.quadratic_form(&x1, &x2);
        let lead = h.transported_difference_sq(&m, &x1, &x2);
        let x_sq = m.inner(&y1, &x1, &x1) + m.inner(&y2, &x2, &x2);
        c_fit = c_fit.max((lead - q) / (x_sq * h.dist * h.dist));
    }
    report(
        13,
        "distance-squared Hessian formula and lower bound",
        worst_rel <= 1e-4 && c_fit <= 10.0,
        &format!("FD rel error {worst_rel:.2e} over 20 pairs (tol 1e-4); fitted C {c_fit:.2} (max 10)"),
    );
}

#[test]
fn criterion_14_uniqueness_mechanism() {
    let field = shapes::circle(1.0f64, [0.0, 0.0], 256);
    let cfg = FlowConfig::new(0.05).with_dt(2e-5);
    let identical = uniqueness_experiment(&field, 0.0, |_| 1.0, &cfg, &cfg).unwrap();
    let u_max = identical.u.iter().fold(0.0f64, |m, &v| m.max(v));

    let c_a = FlowConfig::new(0.05).with_dt(4e-5);
    let c_b = FlowConfig::new(0.05).with_dt(2e-5);
    let c_c = FlowConfig::new(0.05).with_dt(1e-5);
    let r_ab = uniqueness_experiment(&field, 0.0, |_| 1.0, &c_a, &c_b).unwrap();
    let r_bc = uniqueness_experiment(&field, 0.0, |_| 1.0, &c_b, &c_c).unwrap();
    let order = (r_ab.u_at_end().sqrt() / r_bc.u_at_end().sqrt()).log2();

    let perturbed = uniqueness_experiment(&field, 1e-4, |_| 1.0, &cfg, &cfg).unwrap();
    let slope = perturbed.gronwall_slope().unwrap_or(f64::INFINITY);

    report(
        14,
        "gauge-fixed uniqueness mechanism",
        u_max <= 1e-24 && order >= 0.9 && slope <= 50.0,
        &format!(
            "identical-run u {u_max:.1e} (tol 1e-24); u^1/2 order {order:.2} (min 0.9); Gronwall slope {slope:.2} (max 50)"
        ),
    );
}

#[test]
fn criterion_15_isometry_equivariance() {
    let cfg = FlowConfig::new(0.02).with_dt(2e-5);
    let circle = shapes::circle(1.0f64, [0.0, 0.0], 128);
    let rot = AmbientIsometry::rotation_2d(std::f64::consts::PI / 5.0);
    let d_rot = isometry_equivariance_check(&circle, &rot, &cfg).unwrap();
    let ellipse = shapes::ellipse(1.0f64, 0.7, 128);
    let refl = AmbientIsometry::reflection_x();
    let d_refl = isometry_equivariance_check(&ellipse, &refl, &cfg).unwrap();
    report(
        15,
        "isometry equivariance (rotation pi/5, reflection)",
        d_rot <= 1e-8 && d_refl <= 1e-8,
        &format!("rotation discrepancy {d_rot:.2e}, reflection {d_refl:.2e} (tol 1e-8)"),
    );
}

#[test]
fn criterion_16_curvature_persistence() {
    let field = shapes::circle(1.0f64, [0.0, 0.0], 256);
    let mut state = FlowState::new(field).unwrap();
    let cfg = FlowConfig::new(0.42).with_cfl(0.1);
    let hist = run_recorded(&mut state, &cfg, None, 5).unwrap();
    let pass = persistence_audit(&hist, 0, 0.5, 0.1, 1.0, 0.3, PersistenceMode::UniformDoubling)
        .unwrap();
    let fail = persistence_audit(&hist, 0, 0.5, 0.1, 1.0, 0.42, PersistenceMode::UniformDoubling)
        .unwrap();
    let t_viol = fail
        .first_violation
        .map(|(ti, _, _)| hist.times[ti])
        .unwrap_or(f64::NAN);
    report(
        16,
        "curvature doubling persistence (c0 = 1)",
        pass.passes && !fail.passes && (t_viol - 0.375).abs() < 0.01,
        &format!(
            "passes to t=0.3: {}; first violation at t = {t_viol:.4} (expect ~0.375)",
            pass.passes
        ),
    );
}
