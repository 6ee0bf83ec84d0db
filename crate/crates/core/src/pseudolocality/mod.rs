//! Localized Gaussian density machinery: auxiliary weights, the density
//! series with its dissipation term, and the discrete monotonicity check.

mod audit;
mod pick;

pub use audit::{persistence_audit, pseudolocality_audit, PersistenceMode, PersistenceReport, PseudolocalityReport};
pub use pick::{point_pick, PickedPoint};

use crate::ambient::{AmbientModel, AmbientPoint};
use crate::error::AuditError;
use crate::flows::FlowHistory;
use crate::immersion::induced_geometry;
use crate::linalg::{self, Vector};
use crate::scalar::Real;

/// Backward heat-kernel weight
/// φ(x,t) = (4π(t̄−t))^{−n/2} exp(−(1+(t−t̄)/ε)·d̄²/(4(t̄−t)) − n t/(2ε)).
#[derive(Debug, Clone)]
pub struct HeatKernelWeight<T> {
    pub center: AmbientPoint<T>,
    pub t_bar: T,
    pub eps: T,
    /// Intrinsic dimension of the flowing submanifold.
    pub n: usize,
}

impl<T: Real> HeatKernelWeight<T> {
    pub fn eval(&self, dist: T, t: T) -> T {
        let tau = self.t_bar - t;
        debug_assert!(tau > T::zero());
        let four_pi_tau = T::of(4.0) * T::PI() * tau;
        let pref = four_pi_tau.powf(-T::of_usize(self.n).half());
        let drift = T::one() + (t - self.t_bar) / self.eps;
        let expo = -drift * dist.sq() / (T::of(4.0) * tau)
            - T::of_usize(self.n) * t / (T::of(2.0) * self.eps);
        pref * expo.exp()
    }
}

/// Compactly supported cutoff ψ(x,t) = (1 − (d̄² + 3nt)/ρ²)₊³.
#[derive(Debug, Clone)]
pub struct CutoffWeight<T> {
    pub center: AmbientPoint<T>,
    pub rho: T,
    pub n: usize,
}

impl<T: Real> CutoffWeight<T> {
    pub fn eval(&self, dist: T, t: T) -> T {
        let arg = T::one()
            - (dist.sq() + T::of(3.0) * T::of_usize(self.n) * t) / self.rho.sq();
        if arg <= T::zero() {
            T::zero()
        } else {
            arg * arg * arg
        }
    }
}

/// ρ = min{1/2, 1/(c₀√e), i₀, √ε}; the curvature and injectivity terms drop
/// out on flat complete models.
pub fn rho_scale<T: Real>(model: &AmbientModel<T>, eps: T) -> T {
    let bounds = model.bounds_report();
    let mut rho = T::of(0.5).min(eps.sqrt());
    if bounds.c0 > T::zero() {
        rho = rho.min(T::one() / (bounds.c0 * T::E().sqrt()));
    }
    rho = bounds.injectivity.min_with(rho);
    rho
}

#[derive(Debug, Clone)]
pub struct DensityReport<T> {
    pub times: Vec<T>,
    /// D(t) = ∫ φψ over the submanifold (node quadrature).
    pub density: Vec<T>,
    /// ∫ |H + (1+(t−t̄)/ε)·d̄ ∇̄⊥d̄/(2(t̄−t))|² φψ.
    pub dissipation: Vec<T>,
    /// Max ambient spacing among support nodes, per sample (quadrature meta).
    pub support_spacing: Vec<T>,
    pub t_bar: T,
    pub eps: T,
    pub rho: T,
    /// ψ support touched a pinned boundary band at some sample.
    pub truncation_warning: bool,
}

/// Evaluate the localized Gaussian density along a recorded history for all
/// recorded times strictly before t̄.
pub fn gaussian_density<T: Real>(
    history: &FlowHistory<T>,
    x_bar: &AmbientPoint<T>,
    t_bar: T,
    eps: T,
) -> Result<DensityReport<T>, AuditError> {
    let lo = *history.times.first().ok_or(AuditError::InsufficientSamples {
        found: 0,
        needed: 1,
    })?;
    let hi = *history.times.last().unwrap();
    // t̄ parametrizes the weights; the only degenerate input is a reference
    // time at or before every recorded sample (empty density series).
    if !(t_bar > lo) {
        return Err(AuditError::TimeOutOfRange {
            t: t_bar.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let model = &history.model;
    let grid = &history.grid;
    let n = grid.dim;
    let rho = rho_scale(model, eps);
    let phi = HeatKernelWeight { center: *x_bar, t_bar, eps, n };
    let psi = CutoffWeight { center: *x_bar, rho, n };

    let mut report = DensityReport {
        times: Vec::new(),
        density: Vec::new(),
        dissipation: Vec::new(),
        support_spacing: Vec::new(),
        t_bar,
        eps,
        rho,
        truncation_warning: false,
    };
    let measure = grid.cell_measure();
    for (i, &t) in history.times.iter().enumerate() {
        let tau = t_bar - t;
        if !(tau > T::zero()) {
            continue;
        }
        let geom = history.geometry_at(i);
        let xs = &history.positions[i];
        let mut density = T::zero();
        let mut dissipation = T::zero();
        let mut spacing = T::zero();
        for idx in 0..xs.len() {
            let d = model
                .distance(x_bar, &xs[idx])
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
            let psi_v = psi.eval(d, t);
            if psi_v <= T::zero() {
                continue;
            }
            let phi_v = phi.eval(d, t);
            let node = &geom.nodes[idx];
            let weight = node.det_g.sqrt() * measure;
            density += phi_v * psi_v * weight;

            // Drift vector: H + (1+(t−t̄)/ε)·d̄·∇̄⊥d̄/(2τ).
            let mut v = node.mean_curvature;
            if d > T::of(1e-14) {
                let log = model
                    .log_map(&xs[idx], x_bar)
                    .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
                // ∇̄d̄ at the node points away from the center.
                let mut grad = linalg::scale(&log.tangent, -T::one() / d, model.dim);
                // Remove the tangential part.
                let mut tang: Vector<T> = linalg::zero_vec();
                for p in 0..n {
                    for q in 0..n {
                        let coeff =
                            node.ginv[p][q] * model.inner(&xs[idx], &grad, &node.dx[q]);
                        linalg::axpy(&mut tang, coeff, &node.dx[p], model.dim);
                    }
                }
                for c in 0..model.dim {
                    grad[c] -= tang[c];
                }
                let drift = (T::one() + (t - t_bar) / eps) * d / (T::of(2.0) * tau);
                linalg::axpy(&mut v, drift, &grad, model.dim);
            }
            dissipation += model.inner(&xs[idx], &v, &v) * phi_v * psi_v * weight;

            // Quadrature metadata and truncation detection.
            let (i0, i1) = grid.coords(idx);
            if grid.is_pinned(i0, i1) {
                report.truncation_warning = true;
            }
            let next0 = if grid.periodic[0] { (i0 + 1) % grid.shape[0] } else { (i0 + 1).min(grid.shape[0] - 1) };
            let nb = &xs[grid.index(next0, i1)];
            let gap = model.distance(&xs[idx], nb).unwrap_or(T::zero());
            spacing = spacing.max(gap);
        }
        report.times.push(t);
        report.density.push(density);
        report.dissipation.push(dissipation);
        report.support_spacing.push(spacing);
    }
    Ok(report)
}

/// Time-dependent graph representation along a recorded run: the normal
/// frame is frozen at the initial time at the tracked node, every snapshot
/// is re-expressed in it, and the first-derivative term of the graph
/// constant is measured rather than asserted.
#[derive(Debug, Clone)]
pub struct TimeGraphReport<T> {
    pub times: Vec<T>,
    pub df_sup: Vec<T>,
    /// |F_s(0)|: normal drift of the tracked orbit above the frozen plane.
    pub orbit_offset: Vec<T>,
    /// max over time of r0²·sup|DF| (first-derivative term of the measured
    /// constant Σ r0^{i+1}|DⁱF_s|).
    pub c1_first_order: T,
}

pub fn time_dependent_graphs<T: Real>(
    history: &FlowHistory<T>,
    center: usize,
    r0: T,
) -> Result<TimeGraphReport<T>, AuditError> {
    if history.is_empty() {
        return Err(AuditError::InsufficientSamples { found: 0, needed: 1 });
    }
    let field0 = history.field_at(0);
    let geom0 = induced_geometry(&field0)
        .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
    let x0 = field0.x[center];
    let tangents: Vec<Vector<T>> =
        (0..field0.grid.dim).map(|i| geom0.nodes[center].dx[i]).collect();
    let frame = crate::immersion::adapted_frame(&field0.model, &x0, &tangents);

    let mut report = TimeGraphReport {
        times: Vec::new(),
        df_sup: Vec::new(),
        orbit_offset: Vec::new(),
        c1_first_order: T::zero(),
    };
    for i in 0..history.len() {
        let field = history.field_at(i);
        let geom = induced_geometry(&field)
            .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
        let sample =
            crate::immersion::graph_in_frozen_frame(&field, &geom, &x0, frame, center, r0)
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
        report.times.push(history.times[i]);
        report.df_sup.push(sample.df_sup);
        report.orbit_offset.push(sample.orbit_offset);
        report.c1_first_order = report.c1_first_order.max(r0 * r0 * sample.df_sup);
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport<T> {
    /// Max over consecutive pairs of slope − (−mean dissipation + slack).
    pub max_violation: T,
    pub passes: bool,
    pub pairs: usize,
}

/// Discrete slope check of the monotonicity formula:
/// (D(t₂)−D(t₁))/(t₂−t₁) ≤ −mean dissipation + slack, with
/// slack = 1e−4·(1+|D|)·qrf and qrf = 1 + (h̄/w)² + Δt/τ₂ absorbing the
/// quadrature resolution (h̄ = support spacing, w = Gaussian width at t₂).
pub fn monotonicity_check<T: Real>(
    report: &DensityReport<T>,
) -> Result<MonotonicityReport<T>, AuditError> {
    if report.times.len() < 3 {
        return Err(AuditError::InsufficientSamples { found: report.times.len(), needed: 3 });
    }
    let mut max_violation = T::min_value();
    let mut pairs = 0;
    for i in 0..report.times.len() - 1 {
        let t1 = report.times[i];
        let t2 = report.times[i + 1];
        let tau2 = report.t_bar - t2;
        if !(tau2 > T::zero()) {
            continue;
        }
        let slope = (report.density[i + 1] - report.density[i]) / (t2 - t1);
        let mean_diss = (report.dissipation[i] + report.dissipation[i + 1]).half();
        let width = (T::of(4.0) * tau2).sqrt();
        let spacing = report.support_spacing[i + 1].max(report.support_spacing[i]);
        let qrf = T::one() + (spacing / width).sq() + (t2 - t1) / tau2;
        let d_scale = report.density[i].abs().max(report.density[i + 1].abs());
        let slack = T::of(1e-4) * (T::one() + d_scale) * qrf;
        let violation = slope - (-mean_diss + slack);
        max_violation = max_violation.max(violation);
        pairs += 1;
    }
    if pairs == 0 {
        return Err(AuditError::InsufficientSamples { found: 1, needed: 3 });
    }
    Ok(MonotonicityReport { max_violation, passes: max_violation <= T::zero(), pairs })
}
