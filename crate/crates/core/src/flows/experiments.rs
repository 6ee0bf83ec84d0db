//! Uniqueness and equivariance experiments.

use super::{deturck_step, BackgroundConnection, FlowConfig, FlowState};
use crate::error::FlowError;
use crate::immersion::ImmersionField;
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Real;
use crate::shapes::apply_normal_perturbation;

/// Chart-linear ambient isometries: orthogonal maps plus translations for
/// euclidean charts, lattice translations of the torus, rotations of the
/// stereographic / Poincaré chart about the origin.
#[derive(Debug, Clone)]
pub struct AmbientIsometry<T> {
    pub matrix: Matrix<T>,
    pub translation: Vector<T>,
}

impl<T: Real> AmbientIsometry<T> {
    pub fn rotation_2d(angle: T) -> Self {
        let mut m = linalg::zero_mat();
        m[0][0] = angle.cos();
        m[0][1] = -angle.sin();
        m[1][0] = angle.sin();
        m[1][1] = angle.cos();
        m[2][2] = T::one();
        m[3][3] = T::one();
        Self { matrix: m, translation: linalg::zero_vec() }
    }

    pub fn reflection_x() -> Self {
        let mut m = linalg::zero_mat();
        m[0][0] = T::one();
        m[1][1] = -T::one();
        m[2][2] = T::one();
        m[3][3] = T::one();
        Self { matrix: m, translation: linalg::zero_vec() }
    }

    pub fn translation(v: Vector<T>) -> Self {
        let mut m = linalg::zero_mat();
        for c in 0..4 {
            m[c][c] = T::one();
        }
        Self { matrix: m, translation: v }
    }

    pub fn apply(&self, p: &Vector<T>, dim: usize) -> Vector<T> {
        let mut out = self.translation;
        for r in 0..dim {
            for c in 0..dim {
                out[r] += self.matrix[r][c] * p[c];
            }
        }
        out
    }

    pub fn apply_field(&self, field: &ImmersionField<T>) -> ImmersionField<T> {
        let mut out = field.clone();
        for x in out.x.iter_mut() {
            *x = self.apply(x, field.model.dim);
        }
        out
    }
}

/// Run the flow from `initial` and from `iso ∘ initial`; report the sup node
/// ambient distance between `iso ∘ flow(initial)` and `flow(iso ∘ initial)`
/// at the final time. A fixed dt is required so both runs take identical
/// step sequences.
pub fn isometry_equivariance_check<T: Real>(
    initial: &ImmersionField<T>,
    iso: &AmbientIsometry<T>,
    cfg: &FlowConfig<T>,
) -> Result<T, FlowError> {
    assert!(cfg.dt_override.is_some(), "equivariance runs need a fixed dt");
    let mut run_a = FlowState::new(initial.clone())?;
    let mut run_b = FlowState::new(iso.apply_field(initial))?;
    super::run_flow(&mut run_a, cfg, None)?;
    super::run_flow(&mut run_b, cfg, None)?;
    let model = &initial.model;
    let mut worst = T::zero();
    for idx in 0..run_a.field.x.len() {
        let mapped = iso.apply(&run_a.field.x[idx], model.dim);
        let d = model
            .distance(&mapped, &run_b.field.x[idx])
            .map_err(|e| FlowError::Geometry(e.into()))?;
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct UniquenessReport<T> {
    pub times: Vec<T>,
    /// u(t) = sup_node d̄²(X̄₁, X̄₂) between the two gauge-fixed runs.
    pub u: Vec<T>,
}

impl<T: Real> UniquenessReport<T> {
    pub fn u_at_end(&self) -> T {
        *self.u.last().expect("empty uniqueness series")
    }

    /// Least-squares slope of ln(u(t)/u(0)) against t (the measured
    /// Gronwall constant). Requires u(0) > 0.
    pub fn gronwall_slope(&self) -> Option<T> {
        let u0 = self.u[0];
        if !(u0 > T::zero()) {
            return None;
        }
        let mut sx = T::zero();
        let mut sy = T::zero();
        let mut sxx = T::zero();
        let mut sxy = T::zero();
        let mut count = T::zero();
        for (t, u) in self.times.iter().zip(&self.u) {
            if !(*u > T::zero()) {
                continue;
            }
            let x = *t;
            let y = (*u / u0).ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            count += T::one();
        }
        let denom = count * sxx - sx * sx;
        if denom.abs() <= T::zero() {
            return None;
        }
        Some((count * sxy - sx * sy) / denom)
    }
}

/// Evolve two gauge-fixed runs with a shared frozen background: one from
/// `initial`, one from `initial` displaced along discrete normals by
/// `eta * profile(node)`. The two configurations must use fixed steps with
/// dt₁ an integer multiple of dt₂ so the sup-distance series is sampled at
/// the coarse run's times.
pub fn uniqueness_experiment<T: Real>(
    initial: &ImmersionField<T>,
    eta: T,
    profile: impl Fn(usize) -> T,
    cfg1: &FlowConfig<T>,
    cfg2: &FlowConfig<T>,
) -> Result<UniquenessReport<T>, FlowError> {
    let dt1 = cfg1.dt_override.expect("uniqueness runs need fixed dt");
    let dt2 = cfg2.dt_override.expect("uniqueness runs need fixed dt");
    let ratio_f = (dt1 / dt2).as_f64();
    let ratio = ratio_f.round() as usize;
    assert!(
        ratio >= 1 && (ratio_f - ratio as f64).abs() < 1e-9,
        "dt1 must be an integer multiple of dt2"
    );

    let mut run1 = FlowState::new(initial.clone())?;
    let background = BackgroundConnection::from_geometry(&run1.geometry);

    let mut perturbed = initial.clone();
    if eta != T::zero() {
        apply_normal_perturbation(&mut perturbed, |i| eta * profile(i));
    }
    let mut run2 = FlowState::new(perturbed)?;

    let model = &initial.model;
    let sup_d2 = |a: &FlowState<T>, b: &FlowState<T>| -> Result<T, FlowError> {
        let mut worst = T::zero();
        for idx in 0..a.field.x.len() {
            let d = model
                .distance(&a.field.x[idx], &b.field.x[idx])
                .map_err(|e| FlowError::Geometry(e.into()))?;
            worst = worst.max(d * d);
        }
        Ok(worst)
    };

    let mut report = UniquenessReport { times: vec![T::zero()], u: vec![sup_d2(&run1, &run2)?] };
    let eps = T::of(1e-14) * cfg1.t_max.max(T::one());
    while run1.time + eps < cfg1.t_max {
        deturck_step(&mut run1, &background, cfg1)?;
        for _ in 0..ratio {
            deturck_step(&mut run2, &background, cfg2)?;
        }
        report.times.push(run1.time);
        report.u.push(sup_d2(&run1, &run2)?);
    }
    Ok(report)
}
