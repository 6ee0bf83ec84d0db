//! Graph extraction and δ-Lipschitz checks against analytic oracles.

use mcflab::ambient::AmbientModel;
use mcflab::grid::ParameterGrid;
use mcflab::immersion::{
    induced_geometry, lipschitz_graph_check, local_graph_extract, ImmersionField,
};
use mcflab::shapes;

/// A band around the equator of the unit sphere in R³, fine enough to sample
/// the r0/96 disk that the curvature-controlled extraction samples.
fn sphere_band(n: usize, half_width: f64) -> ImmersionField<f64> {
    let model = AmbientModel::euclidean(3);
    let h = 2.0 * half_width / (n - 1) as f64;
    let grid = ParameterGrid::surface([n, n], [h, h], [false, false], 0, false);
    let mut x = Vec::with_capacity(n * n);
    for i0 in 0..n {
        let theta = std::f64::consts::FRAC_PI_2 - half_width + i0 as f64 * h;
        for i1 in 0..n {
            let phi = -half_width + i1 as f64 * h;
            x.push([
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
                0.0,
            ]);
        }
    }
    ImmersionField::new(grid, model, x)
}

/// Hairpin: two antiparallel straight runs 0.05 apart, joined far outside the
/// checked ball.
fn hairpin(n: usize) -> ImmersionField<f64> {
    let model = AmbientModel::euclidean(2);
    let lower_len = 4.0; // x from −2 to 2
    let turn = std::f64::consts::PI * 0.025;
    let total = 2.0 * lower_len + turn;
    let h = total / (n - 1) as f64;
    let grid = ParameterGrid::line(n, h, false, 2);
    let x = (0..n)
        .map(|i| {
            let s = i as f64 * h;
            let mut p = [0.0; 4];
            if s <= lower_len {
                p[0] = -2.0 + s;
                p[1] = 0.0;
            } else if s <= lower_len + turn {
                let a = (s - lower_len) / 0.025; // angle along the half turn
                p[0] = 2.0 + 0.025 * a.sin();
                p[1] = 0.025 - 0.025 * a.cos();
            } else {
                p[0] = 2.0 - (s - lower_len - turn);
                p[1] = 0.05;
            }
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

#[test]
fn affine_line_extracts_trivial_graph() {
    let field = shapes::line_with_bump(1.5f64, 1024, 0.0, 0.0, 1.0, 2);
    let geom = induced_geometry(&field).unwrap();
    let center = 512;
    let patch = local_graph_extract(&field, &geom, center, 0.7).unwrap();
    assert!(patch.ratio_sup < 1e-10, "ratio = {}", patch.ratio_sup);
    assert!(patch.df_center < 1e-10);
    for s in &patch.samples {
        for c in 0..3 {
            assert!(s.normal[c].abs() < 1e-12);
        }
    }
}

#[test]
fn sphere_patch_meets_ratio_bound_with_margin() {
    // Unit sphere, r0 = 0.7: the analytic graph F(x') = 1 − √(1−|x'|²) has
    // |DF| = |x'|/√(1−|x'|²), so the ratio ≈ 1 on the r0/96 disk, far below
    // 36/r0 ≈ 51.4.
    let field = sphere_band(501, 0.75);
    let geom = induced_geometry(&field).unwrap();
    let center = 250 * 501 + 250;
    let r0 = 0.7;
    let patch = local_graph_extract(&field, &geom, center, r0).unwrap();
    let bound = 36.0 / r0;
    assert!(
        patch.ratio_sup * 10.0 <= bound,
        "ratio {} misses the 10x margin against {}",
        patch.ratio_sup,
        bound
    );
    // The measured ratio matches the analytic value ~1 at these radii.
    assert!(patch.ratio_sup < 1.1 && patch.ratio_sup > 0.5, "ratio = {}", patch.ratio_sup);

    // Graph values agree with the analytic height function.
    for s in &patch.samples {
        let want = 1.0 - (1.0 - s.base_norm * s.base_norm).sqrt();
        let height = (0..2).map(|c| s.normal[c] * s.normal[c]).sum::<f64>().sqrt();
        assert!((height - want).abs() < 1e-4, "height {height} vs {want}");
    }
}

#[test]
fn circle_ratio_within_bound() {
    let field = shapes::circle(1.0f64, [0.0, 0.0], 4096);
    let geom = induced_geometry(&field).unwrap();
    let r0 = 0.9;
    let patch = local_graph_extract(&field, &geom, 17, r0).unwrap();
    assert!(patch.ratio_sup <= 36.0 / r0);
    assert!(patch.ratio_sup < 1.1, "near-flat ratio, got {}", patch.ratio_sup);
}

#[test]
fn curvature_precondition_rejected() {
    // y = 0.3 sin(2πx): max curvature ≈ 0.3(2π)² ≈ 11.8 > 1/r0.
    let field = shapes::graph_of_function(0.3f64, 1.0, 1.5, 2048, 2);
    let geom = induced_geometry(&field).unwrap();
    let center = 1024;
    let err = local_graph_extract(&field, &geom, center, 0.5).unwrap_err();
    assert!(err.to_string().contains("graph precondition"), "{err}");
}

#[test]
fn plane_lipschitz_check_trivial() {
    let field = shapes::line_with_bump(1.5f64, 512, 0.0, 0.0, 1.0, 2);
    let geom = induced_geometry(&field).unwrap();
    let rep = lipschitz_graph_check(&field, &geom, 256, 0.5).unwrap();
    assert!(rep.component_is_graph && !rep.other_sheets);
    assert!(rep.is_graph_strict());
    assert!(rep.delta < 1e-10);
}

#[test]
fn sine_perturbed_line_delta_matches_analytic() {
    let amp = 0.1f64;
    let field = shapes::graph_of_function(amp, 1.0, 1.5, 8192, 2);
    let geom = induced_geometry(&field).unwrap();
    let center = 4096; // x = 0
    let r0 = 0.5;
    let rep = lipschitz_graph_check(&field, &geom, center, r0).unwrap();
    assert!(rep.component_is_graph && !rep.other_sheets);

    // Analytic oracle in the rotated normal frame at the origin: parametrize
    // (t, amp sin 2πt), rotate by the tangent angle α, and take the sup of
    // |dF/dx'| over samples with |x'| < r0.
    let w = std::f64::consts::TAU;
    let alpha = (amp * w).atan();
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let mut sup: f64 = 0.0;
    let mut t = -1.5;
    while t <= 1.5 {
        let slope = amp * w * (w * t).cos();
        let xp = ca * t + sa * amp * (w * t).sin();
        if xp.abs() < r0 {
            let df = (-sa + ca * slope) / (ca + sa * slope);
            sup = sup.max(df.abs());
        }
        t += 1e-4;
    }
    assert!(
        (rep.delta - sup).abs() <= 0.05 * sup,
        "measured {} vs analytic {}",
        rep.delta,
        sup
    );
}

#[test]
fn hairpin_reports_second_sheet() {
    let field = hairpin(3200);
    let geom = induced_geometry(&field).unwrap();
    // Center on the lower branch at x = 0.
    let mut center = 0;
    let mut best = f64::MAX;
    for (i, p) in field.x.iter().enumerate() {
        let d = p[0].abs() + p[1].abs();
        if d < best {
            best = d;
            center = i;
        }
    }
    let rep = lipschitz_graph_check(&field, &geom, center, 0.5).unwrap();
    // Ball meets two sheets: the strict check fails, the component-restricted
    // check passes with δ ≈ 0.
    assert!(rep.other_sheets);
    assert!(!rep.is_graph_strict());
    assert!(rep.component_is_graph);
    assert!(rep.delta < 1e-8, "component delta {}", rep.delta);

    // Graph extraction over the same ball refuses with the multi-sheet error.
    let err = local_graph_extract(&field, &geom, center, 0.25).unwrap_err();
    assert!(err.to_string().contains("sheets"), "{err}");
}

#[test]
fn fold_is_not_a_graph() {
    // A half-circle through the ball folds over its tangent line.
    let field = shapes::circle(1.0f64, [0.0, 0.0], 2048);
    let geom = induced_geometry(&field).unwrap();
    // r0 = 1.6 sees the whole circle: x' covers [-1, 1] twice.
    let rep = lipschitz_graph_check(&field, &geom, 0, 1.6).unwrap();
    assert!(!rep.component_is_graph);
}
