//! Finite-difference and closed-form oracles for the ambient models.
//!
//! The production paths (closed-form Christoffels, RK4 geodesics, shooting
//! log map, Jacobi-form product Hessian) are checked here against independent
//! routes: centered finite differences of the metric, embedded great-circle
//! rotations, lattice brute force, and a finite-difference Hessian on the
//! product chart.

use mcflab::ambient::AmbientModel;
use mcflab::linalg::{self, Vector, MAX_DIM};
use mcflab::rng::SplitMix64;

type Model = AmbientModel<f64>;

fn random_point(model: &Model, rng: &mut SplitMix64) -> Vector<f64> {
    let mut p = linalg::zero_vec();
    for c in 0..model.dim {
        p[c] = match model.name() {
            "hyperbolic" => rng.uniform(-0.45, 0.45),
            "flat-torus" => rng.uniform(0.0, 0.9),
            _ => rng.uniform(-0.8, 0.8),
        };
    }
    p
}

fn random_vector(model: &Model, rng: &mut SplitMix64) -> Vector<f64> {
    let mut v = linalg::zero_vec();
    for c in 0..model.dim {
        v[c] = rng.uniform(-1.0, 1.0);
    }
    v
}

fn test_models() -> Vec<Model> {
    vec![
        Model::euclidean(3),
        Model::sphere(2, 1.0),
        Model::sphere(3, 2.0),
        Model::hyperbolic(2, 1.0),
        Model::flat_torus(2, [1.0, 2.0, 0.0, 0.0]),
    ]
}

/// Levi-Civita consistency: closed-form Γ̄ against the metric-derivative
/// formula with centered finite differences at step 1e-4.
#[test]
fn christoffel_matches_finite_difference_levi_civita() {
    let fd = 1e-4;
    for model in test_models() {
        let mut rng = SplitMix64::new(0xC0FFEE);
        for _ in 0..100 {
            let p = random_point(&model, &mut rng);
            let gamma = model.christoffel_at(&p).unwrap();
            let n = model.dim;

            // дg via centered differences.
            let mut dg = [[[0.0f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; // dg[c][a][b] = ∂_c g_ab
            for c in 0..n {
                let mut up = p;
                let mut dn = p;
                up[c] += fd;
                dn[c] -= fd;
                let gu = model.metric_at(&up).unwrap();
                let gd = model.metric_at(&dn).unwrap();
                for a in 0..n {
                    for b in 0..n {
                        dg[c][a][b] = (gu[a][b] - gd[a][b]) / (2.0 * fd);
                    }
                }
            }
            let ginv = model.metric_inv_at(&p).unwrap();
            let mut scale: f64 = 1e-30;
            for row in gamma.iter().take(n) {
                for r in row.iter().take(n) {
                    for v in r.iter().take(n) {
                        scale = scale.max(v.abs());
                    }
                }
            }
            for g_idx in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut want = 0.0;
                        for d in 0..n {
                            want += 0.5
                                * ginv[g_idx][d]
                                * (dg[a][b][d] + dg[b][a][d] - dg[d][a][b]);
                        }
                        let got = gamma[g_idx][a][b];
                        let tol = 1e-6 * scale.max(1.0);
                        assert!(
                            (got - want).abs() <= tol,
                            "{}: Γ^{}_{}{} = {} vs FD {}",
                            model.name(),
                            g_idx,
                            a,
                            b,
                            got,
                            want
                        );
                    }
                }
            }
        }
    }
}

/// Curvature against second finite differences of the Christoffel field:
/// compare the quadratic form ⟨R(u,v)v,u⟩ on random vectors.
#[test]
fn riemann_matches_finite_difference_curvature() {
    let fd = 1e-4;
    for model in [Model::sphere(2, 2.0), Model::hyperbolic(2, 1.0), Model::euclidean(2)] {
        let mut rng = SplitMix64::new(0xBEEF);
        for _ in 0..20 {
            let p = random_point(&model, &mut rng);
            let u = random_vector(&model, &mut rng);
            let v = random_vector(&model, &mut rng);
            let n = model.dim;

            // R^d_{abc} = ∂_a Γ^d_{bc} − ∂_b Γ^d_{ac} + Γ Γ − Γ Γ  (FD in ∂Γ).
            let gamma = model.christoffel_at(&p).unwrap();
            let mut dgamma = [[[[0.0f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM];
            for c in 0..n {
                let mut up = p;
                let mut dn = p;
                up[c] += fd;
                dn[c] -= fd;
                let gu = model.christoffel_at(&up).unwrap();
                let gd = model.christoffel_at(&dn).unwrap();
                for d in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            dgamma[c][d][a][b] = (gu[d][a][b] - gd[d][a][b]) / (2.0 * fd);
                        }
                    }
                }
            }
            let g = model.metric_at(&p).unwrap();
            // ⟨R(u,v)v, u⟩ with R(∂a,∂b)∂c = R^d_{abc} ∂d.
            let mut quad_fd = 0.0;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let mut rd = dgamma[a][d][b][c] - dgamma[b][d][a][c];
                            for e in 0..n {
                                rd += gamma[d][a][e] * gamma[e][b][c]
                                    - gamma[d][b][e] * gamma[e][a][c];
                            }
                            let mut low = 0.0;
                            for f in 0..n {
                                low += g[d][f] * u[f];
                            }
                            let _ = low;
                            for f in 0..n {
                                quad_fd += g[d][f] * u[f] * rd * u[a] * v[b] * v[c];
                            }
                        }
                    }
                }
            }
            let quad = model.riemann_quad(&p, &u, &v);
            let scale = quad.abs().max(1.0);
            assert!(
                (quad - quad_fd).abs() < 2e-6 * scale,
                "{}: quad {} vs FD {}",
                model.name(),
                quad,
                quad_fd
            );

            // The returned rank-4 tensor must reproduce the same form under
            // the (α,γ),(β,δ) contraction.
            let r = model.riemann_at(&p, 0).unwrap();
            let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
            let mut quad_tensor = 0.0;
            for al in 0..n {
                for be in 0..n {
                    for ga in 0..n {
                        for de in 0..n {
                            quad_tensor += r[idx(al, be, ga, de)] * u[al] * v[be] * u[ga] * v[de];
                        }
                    }
                }
            }
            assert!((quad - quad_tensor).abs() < 1e-12 * scale);
        }
    }
}

/// Euclidean exponential is exact translation; zero vector is a fixed point.
#[test]
fn exp_flat_models_exact() {
    let eu = Model::euclidean(3);
    let p = [0.25, -1.0, 2.0, 0.0];
    let v = [0.5, 0.25, -1.5, 0.0];
    let got = eu.exp_map(&p, &v).unwrap().point;
    for c in 0..3 {
        assert_eq!(got[c], p[c] + v[c]);
    }
    let zero = eu.exp_map(&p, &linalg::zero_vec()).unwrap().point;
    assert_eq!(zero, p);

    let to = Model::flat_torus(2, [1.0, 1.0, 0.0, 0.0]);
    let q = to.exp_map(&[0.2, 0.7, 0.0, 0.0], &[0.3, -0.1, 0.0, 0.0]).unwrap().point;
    assert_eq!(q[0], 0.5);
    assert_eq!(q[1], 0.6);
}

/// Embedded great-circle oracle for the sphere chart.
fn sphere_embed(r: f64, y: &Vector<f64>) -> [f64; 3] {
    let n2 = y[0] * y[0] + y[1] * y[1];
    let d = n2 + r * r;
    [2.0 * r * r * y[0] / d, 2.0 * r * r * y[1] / d, r * (n2 - r * r) / d]
}

fn sphere_embed_diff(r: f64, y: &Vector<f64>, v: &Vector<f64>) -> [f64; 3] {
    let n2 = y[0] * y[0] + y[1] * y[1];
    let d = n2 + r * r;
    let ydotv = y[0] * v[0] + y[1] * v[1];
    let mut out = [0.0f64; 3];
    for i in 0..2 {
        out[i] = 2.0 * r * r * (v[i] * d - y[i] * 2.0 * ydotv) / (d * d);
    }
    out[2] = 4.0 * r * r * r * ydotv / (d * d);
    out
}

fn sphere_unembed(r: f64, e: &[f64; 3]) -> Vector<f64> {
    let mut y = linalg::zero_vec();
    let denom = r - e[2];
    y[0] = e[0] * r / denom;
    y[1] = e[1] * r / denom;
    y
}

#[test]
fn sphere_exp_matches_great_circle_rotation() {
    let r = 1.0;
    let m = Model::sphere(2, r);
    let mut rng = SplitMix64::new(7);
    for _ in 0..25 {
        let p = random_point(&m, &mut rng);
        let mut v = random_vector(&m, &mut rng);
        // Keep |v| within the injectivity radius.
        let speed = m.norm(&p, &v);
        let target = rng.uniform(0.05, 2.0);
        v = linalg::scale(&v, target / speed, 2);

        let got = m.exp_map(&p, &v).unwrap();
        assert!(!got.beyond_injectivity);

        let e0 = sphere_embed(r, &p);
        let t0 = sphere_embed_diff(r, &p, &v);
        let tn: f64 = t0.iter().map(|x| x * x).sum::<f64>().sqrt();
        let l = target; // ḡ-speed equals embedded speed
        assert!((tn - l).abs() < 1e-12 * (1.0 + l));
        let mut end = [0.0f64; 3];
        for c in 0..3 {
            end[c] = (l / r).cos() * e0[c] + (l / r).sin() * r * t0[c] / tn;
        }
        let want = sphere_unembed(r, &end);
        let err = (0..2).map(|c| (got.point[c] - want[c]).abs()).fold(0.0f64, f64::max);
        assert!(err < 1e-8 * (1.0 + want[0].abs().max(want[1].abs())), "exp error {err}");

        // Geodesic speed conservation.
        let end_speed = m.norm(&got.point, &got.velocity);
        assert!((end_speed - l).abs() < 1e-8 * l);
    }
}

#[test]
fn exp_log_round_trip_all_models() {
    for model in test_models() {
        let mut rng = SplitMix64::new(0xABCD + model.dim as u64);
        for _ in 0..20 {
            let p = random_point(&model, &mut rng);
            let q = random_point(&model, &mut rng);
            let d = model.distance(&p, &q).unwrap();
            if !model.bounds_report().injectivity.greater_than(d) {
                continue;
            }
            let log = model.log_map(&p, &q).unwrap();
            assert!(!log.ambiguous);
            let back = model.exp_map(&p, &log.tangent).unwrap().point;
            let wrapped = match model.name() {
                "flat-torus" => {
                    // compare modulo the lattice
                    let diff = linalg::sub(&back, &q, model.dim);
                    let w = model_wrap(&model, &diff);
                    linalg::norm2(&w, model.dim)
                }
                _ => linalg::norm2(&linalg::sub(&back, &q, model.dim), model.dim),
            };
            assert!(wrapped < 1e-8, "{}: round trip error {}", model.name(), wrapped);
        }
    }
}

fn model_wrap(model: &Model, delta: &Vector<f64>) -> Vector<f64> {
    // Re-derive the nearest-representative wrap used by the torus distance.
    match model.name() {
        "flat-torus" => {
            let mut out = *delta;
            let periods = [1.0, 2.0];
            for c in 0..model.dim {
                out[c] -= (out[c] / periods[c]).round() * periods[c];
            }
            out
        }
        _ => *delta,
    }
}

#[test]
fn sphere_distance_arc_length_oracle() {
    let m = Model::sphere(2, 1.0);
    // Two equator points at chart angles 0 and π/3: geodesic distance π/3.
    let a = [1.0, 0.0, 0.0, 0.0];
    let th = std::f64::consts::FRAC_PI_3;
    let b = [th.cos(), th.sin(), 0.0, 0.0];
    let d = m.distance(&a, &b).unwrap();
    assert!(
        (d - th).abs() < 1e-10,
        "sphere distance {d} vs {th}, err {}",
        (d - th).abs()
    );
}

#[test]
fn torus_distance_wraps_lattice() {
    let m = Model::flat_torus(2, [1.0, 1.0, 0.0, 0.0]);
    let p = [0.05, 0.0, 0.0, 0.0];
    let q = [0.95, 0.0, 0.0, 0.0];
    let d = m.distance(&p, &q).unwrap();
    assert!((d - 0.1).abs() < 1e-14);

    // Brute force over the 3² lattice shifts agrees.
    let mut best = f64::MAX;
    for s0 in -1..=1 {
        for s1 in -1..=1 {
            let dx = q[0] - p[0] + s0 as f64;
            let dy = q[1] - p[1] + s1 as f64;
            best = best.min((dx * dx + dy * dy).sqrt());
        }
    }
    assert!((d - best).abs() < 1e-14);
}

#[test]
fn sphere_antipodal_sets_ambiguity_flag() {
    let m = Model::sphere(2, 1.0);
    let p = [0.4, 0.1, 0.0, 0.0];
    let n2 = p[0] * p[0] + p[1] * p[1];
    let anti = [-p[0] / n2, -p[1] / n2, 0.0, 0.0];
    let log = m.log_map(&p, &anti);
    if let Ok(l) = log {
        assert!(l.ambiguous, "antipodal pair must be flagged");
    }
}

#[test]
fn transport_preserves_inner_products() {
    for model in test_models() {
        let mut rng = SplitMix64::new(31 + model.dim as u64);
        for _ in 0..10 {
            let p = random_point(&model, &mut rng);
            let q = random_point(&model, &mut rng);
            let d = model.distance(&p, &q).unwrap();
            if !model.bounds_report().injectivity.greater_than(d) {
                continue;
            }
            let v = random_vector(&model, &mut rng);
            let w = random_vector(&model, &mut rng);
            let pv = model.parallel_transport(&p, &q, &v).unwrap().components;
            let pw = model.parallel_transport(&p, &q, &w).unwrap().components;
            let before = model.inner(&p, &v, &w);
            let after = model.inner(&q, &pv, &pw);
            assert!(
                (before - after).abs() < 1e-8 * (1.0 + before.abs()),
                "{}: transport isometry violated: {} vs {}",
                model.name(),
                before,
                after
            );
        }
    }
}

#[test]
fn transport_of_geodesic_tangent_is_autoparallel() {
    let m = Model::sphere(2, 1.0);
    let p = [0.3, -0.2, 0.0, 0.0];
    let q = [-0.1, 0.5, 0.0, 0.0];
    let log = m.log_map(&p, &q).unwrap();
    let exp = m.exp_map(&p, &log.tangent).unwrap();
    let transported = m.parallel_transport(&p, &q, &log.tangent).unwrap().components;
    let err = linalg::norm2(&linalg::sub(&transported, &exp.velocity, 2), 2);
    assert!(err < 1e-8, "autoparallel violation {err}");

    // A vector orthogonal to the geodesic stays orthogonal with equal norm.
    let mut orth = linalg::zero_vec();
    orth[0] = -log.tangent[1];
    orth[1] = log.tangent[0];
    let before_norm = m.norm(&p, &orth);
    let before_inner = m.inner(&p, &orth, &log.tangent);
    assert!(before_inner.abs() < 1e-12);
    let after = m.parallel_transport(&p, &q, &orth).unwrap().components;
    let after_norm = m.norm(&q, &after);
    let after_inner = m.inner(&q, &after, &exp.velocity);
    assert!((after_norm - before_norm).abs() < 1e-8 * before_norm);
    assert!(after_inner.abs() < 1e-8 * before_norm * m.norm(&q, &exp.velocity));
}

/// Euclidean product Hessian is the exact block matrix (2I, −2I; −2I, 2I).
#[test]
fn hessian_euclidean_blocks_exact() {
    let m = Model::euclidean(3);
    let y1 = [0.1, 0.2, -0.4, 0.0];
    let y2 = [0.5, -0.3, 0.2, 0.0];
    let h = m.distance_sq_hessian(&y1, &y2).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            let want = if a == b { 2.0 } else { 0.0 };
            assert!((h.matrix[a][b] - want).abs() < 1e-9);
            assert!((h.matrix[MAX_DIM + a][MAX_DIM + b] - want).abs() < 1e-9);
            assert!((h.matrix[a][MAX_DIM + b] + want).abs() < 1e-9);
        }
    }
    // (∇²d²)(X, X) = 2|X₁ − X₂|² for X = (X₁, X₂).
    let x1 = [1.0, -0.5, 0.25, 0.0];
    let x2 = [0.2, 0.1, -1.0, 0.0];
    let q = h.quadratic_form(&x1, &x2);
    let want = 2.0 * (0..3).map(|c| (x1[c] - x2[c]) * (x1[c] - x2[c])).sum::<f64>();
    assert!((q - want).abs() < 1e-9 * want.abs().max(1.0));
}

/// Coincident base points on the sphere: restricted to (X, −X) the form gives
/// the flat value 8|X|².
#[test]
fn hessian_sphere_coincident_flat_value() {
    let m = Model::sphere(2, 1.0);
    let y = [0.3, -0.1, 0.0, 0.0];
    let h = m.distance_sq_hessian(&y, &y).unwrap();
    let mut rng = SplitMix64::new(99);
    for _ in 0..10 {
        let x = random_vector(&m, &mut rng);
        let minus = linalg::scale(&x, -1.0, 2);
        let q = h.quadratic_form(&x, &minus);
        let want = 8.0 * m.inner(&y, &x, &x);
        assert!((q - want).abs() < 1e-7 * want.abs().max(1.0), "{q} vs {want}");
    }
}

/// Finite-difference oracle on the product chart: covariant Hessian of d²
/// (coordinate second differences minus the product-connection correction).
fn hessian_fd_oracle(m: &Model, y1: &Vector<f64>, y2: &Vector<f64>, fd: f64) -> Vec<f64> {
    let n = m.dim;
    let dist2 = |a: &Vector<f64>, b: &Vector<f64>| {
        let d = m.distance(a, b).unwrap();
        d * d
    };
    // Product-chart coordinate i ∈ [0, 2n): block 0 perturbs y1, block 1 y2.
    let shifted = |i: usize, eps: f64| -> (Vector<f64>, Vector<f64>) {
        let mut a = *y1;
        let mut b = *y2;
        if i < n {
            a[i] += eps;
        } else {
            b[i - n] += eps;
        }
        (a, b)
    };
    let psi = |i: usize, ei: f64, j: usize, ej: f64| -> f64 {
        let (a, b) = shifted(i, ei);
        let (mut a2, mut b2) = (a, b);
        if j < n {
            a2[j] += ej;
        } else {
            b2[j - n] += ej;
        }
        let _ = b;
        dist2(&a2, &b2)
    };
    let dim2 = 2 * n;
    let mut hess = vec![0.0; dim2 * dim2];
    let psi0 = dist2(y1, y2);
    // First derivatives for the connection correction.
    let mut grad = vec![0.0; dim2];
    for i in 0..dim2 {
        grad[i] = (psi(i, fd, i, 0.0) - psi(i, -fd, i, 0.0)) / (2.0 * fd);
    }
    for i in 0..dim2 {
        for j in i..dim2 {
            let val = if i == j {
                (psi(i, fd, i, 0.0) - 2.0 * psi0 + psi(i, -fd, i, 0.0)) / (fd * fd)
            } else {
                (psi(i, fd, j, fd) - psi(i, fd, j, -fd) - psi(i, -fd, j, fd)
                    + psi(i, -fd, j, -fd))
                    / (4.0 * fd * fd)
            };
            hess[i * dim2 + j] = val;
            hess[j * dim2 + i] = val;
        }
    }
    // Covariant correction: block-diagonal product connection.
    let g1 = m.christoffel_at(y1).unwrap();
    let g2 = m.christoffel_at(y2).unwrap();
    for i in 0..dim2 {
        for j in 0..dim2 {
            let (blk_i, ci) = (i < n, i % n);
            let (blk_j, cj) = (j < n, j % n);
            if blk_i == blk_j {
                let gam = if blk_i { &g1 } else { &g2 };
                let off = if blk_i { 0 } else { n };
                for c in 0..n {
                    hess[i * dim2 + j] -= gam[c][ci][cj] * grad[off + c];
                }
            }
        }
    }
    hess
}

#[test]
fn hessian_matches_product_chart_finite_differences() {
    let m = Model::sphere(2, 1.0);
    let mut rng = SplitMix64::new(0x5EED);
    let mut tested = 0;
    while tested < 8 {
        let y1 = random_point(&m, &mut rng);
        let dir = random_vector(&m, &mut rng);
        let d_target = rng.uniform(0.02, 0.24);
        let speed = m.norm(&y1, &dir);
        let v = linalg::scale(&dir, d_target / speed, 2);
        let y2 = m.exp_map(&y1, &v).unwrap().point;
        let h = match m.distance_sq_hessian(&y1, &y2) {
            Ok(h) => h,
            Err(_) => continue,
        };
        tested += 1;
        let fd = hessian_fd_oracle(&m, &y1, &y2, 1e-3);
        let n = m.dim;
        let dim2 = 2 * n;
        let mut scale: f64 = 1.0;
        for v in &fd {
            scale = scale.max(v.abs());
        }
        for i in 0..dim2 {
            for j in 0..dim2 {
                let (bi, ci) = (i / n, i % n);
                let (bj, cj) = (j / n, j % n);
                let got = h.matrix[bi * MAX_DIM + ci][bj * MAX_DIM + cj];
                let want = fd[i * dim2 + j];
                assert!(
                    (got - want).abs() < 1e-4 * scale,
                    "H[{i}][{j}] = {got} vs FD {want}"
                );
            }
        }
    }
}

/// Lower bound: (∇²d²)(X,X) ≥ 2|X₁ − P⁻¹X₂|² − C|X|²d² with a small
/// fitted constant on the sphere at d = 0.2.
#[test]
fn hessian_lower_bound_fitted_constant() {
    let m = Model::sphere(2, 1.0);
    let mut rng = SplitMix64::new(2024);
    let y1 = [0.25, -0.15, 0.0, 0.0];
    let dir = [0.6, 0.8, 0.0, 0.0];
    let speed = m.norm(&y1, &dir);
    let v = linalg::scale(&dir, 0.2 / speed, 2);
    let y2 = m.exp_map(&y1, &v).unwrap().point;
    let h = m.distance_sq_hessian(&y1, &y2).unwrap();
    let d = h.dist;
    assert!((d - 0.2).abs() < 1e-9);

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x1 = random_vector(&m, &mut rng);
        let x2 = random_vector(&m, &mut rng);
        let q = h.quadratic_form(&x1, &x2);
        let lead = h.transported_difference_sq(&m, &x1, &x2);
        let x_sq = m.inner(&y1, &x1, &x1) + m.inner(&y2, &x2, &x2);
        let c_here = (lead - q) / (x_sq * d * d);
        worst = worst.max(c_here);
    }
    assert!(worst <= 10.0, "fitted C = {worst} exceeds 10");
}

/// Upper bound (i): Hessian entries stay bounded on the admissible region.
#[test]
fn hessian_entries_bounded() {
    for m in [Model::sphere(2, 1.0), Model::hyperbolic(2, 1.0), Model::euclidean(2)] {
        let mut rng = SplitMix64::new(4);
        let mut tested = 0;
        while tested < 12 {
            let y1 = random_point(&m, &mut rng);
            let dir = random_vector(&m, &mut rng);
            let speed = m.norm(&y1, &dir);
            let d_target = rng.uniform(0.01, 0.24);
            let v = linalg::scale(&dir, d_target / speed, m.dim);
            let y2 = match m.exp_map(&y1, &v) {
                Ok(e) => e.point,
                Err(_) => continue,
            };
            let h = match m.distance_sq_hessian(&y1, &y2) {
                Ok(h) => h,
                Err(_) => continue,
            };
            tested += 1;
            for row in h.matrix.iter() {
                for v in row.iter() {
                    assert!(v.abs() <= 20.0, "{}: Hessian entry {} too large", m.name(), v);
                }
            }
        }
    }
}

#[test]
fn pair_too_far_is_rejected() {
    let m = Model::sphere(2, 1.0);
    // d must stay ≤ min{i₀/2, 1/(4√K₀)} = 0.25 here.
    let y1 = [1.0, 0.0, 0.0, 0.0];
    let th: f64 = 0.6;
    let y2 = [th.cos(), th.sin(), 0.0, 0.0];
    assert!(m.distance_sq_hessian(&y1, &y2).is_err());
}

#[test]
fn fitted_hessian_constant_is_small() {
    // Euclidean: the transported-difference identity is exact, C ≈ 0.
    let eu = Model::euclidean(2);
    let c_eu = eu.fit_hessian_constant(7, 10, 20, 0.2).unwrap();
    assert!(c_eu.abs() < 1e-6, "euclidean C = {c_eu}");

    // Unit sphere: curvature-order constant, well below 10.
    let sp = Model::sphere(2, 1.0);
    let c_sp = sp.fit_hessian_constant(7, 10, 20, 0.2).unwrap();
    assert!(c_sp > 0.0 && c_sp <= 10.0, "sphere C = {c_sp}");
}
