//! Curvature audits over recorded histories: the pseudolocality estimate and
//! the two persistence statements.

use crate::ambient::AmbientPoint;
use crate::error::AuditError;
use crate::flows::FlowHistory;
use crate::immersion::{induced_geometry, lipschitz_graph_check};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct PseudolocalityReport<T> {
    /// max over the audited set of t·(|A|² − (εr₀)⁻²).
    pub max_weighted: T,
    pub passes: bool,
    pub alpha: T,
    pub eps: T,
    pub r0: T,
    /// Measured δ of the initial Lipschitz-graph check at (x₀, r₀).
    pub delta_measured: T,
    pub initial_is_graph: bool,
    /// Samples scanned inside B(x₀, εr₀) × (0, T].
    pub audited_samples: usize,
    /// Extremal witness (time index, node) of the max.
    pub witness: Option<(usize, usize)>,
    pub empty_audit: bool,
}

/// Audit |A|²(x,t) ≤ α/t + (εr₀)⁻² over B(x₀, εr₀) ∩ M_t, t ∈ (0, T] with
/// T ≤ ε²r₀². The initial data must pass the δ-Lipschitz graph check at
/// (x₀, r₀); the measured δ is recorded, not thresholded (the theorem is
/// existential in (ε, δ)).
pub fn pseudolocality_audit<T: Real>(
    history: &FlowHistory<T>,
    center_node: usize,
    r0: T,
    eps: T,
    alpha: T,
) -> Result<PseudolocalityReport<T>, AuditError> {
    if history.is_empty() {
        return Err(AuditError::InsufficientSamples { found: 0, needed: 2 });
    }
    let initial = history.field_at(0);
    let geom0 = induced_geometry(&initial)
        .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
    let lip = lipschitz_graph_check(&initial, &geom0, center_node, r0)
        .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
    let x0: AmbientPoint<T> = history.positions[0][center_node];

    let t_window = eps.sq() * r0.sq();
    let ball = eps * r0;
    let floor = T::one() / ball.sq();
    let model = &history.model;

    let mut max_weighted = T::min_value();
    let mut witness = None;
    let mut audited = 0usize;
    for ti in 0..history.len() {
        let t = history.times[ti];
        if !(t > T::zero()) || t > t_window + T::of(1e-15) {
            continue;
        }
        for node in 0..history.a_fields[ti].len() {
            let d = model
                .distance(&x0, &history.positions[ti][node])
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
            if d > ball {
                continue;
            }
            audited += 1;
            let a = history.a_fields[ti][node];
            let weighted = t * (a * a - floor);
            if weighted > max_weighted {
                max_weighted = weighted;
                witness = Some((ti, node));
            }
        }
    }
    let empty = audited == 0;
    Ok(PseudolocalityReport {
        max_weighted: if empty { T::zero() } else { max_weighted },
        passes: !empty && max_weighted <= alpha,
        alpha,
        eps,
        r0,
        delta_measured: lip.delta,
        initial_is_graph: lip.component_is_graph,
        audited_samples: audited,
        witness,
        empty_audit: empty,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PersistenceMode {
    /// Graphic initial ball with |A| ≤ 1/r₀: audit |A| ≤ (εr₀)⁻¹ on
    /// B(x₀, εr₀), t ∈ [0, min(T, ε²r₀²)].
    GraphicBall,
    /// Uniform bound |A| ≤ c₀ at t = 0: audit |A| ≤ 2c₀ everywhere on the
    /// requested window.
    UniformDoubling,
}

#[derive(Debug, Clone)]
pub struct PersistenceReport<T> {
    pub passes: bool,
    /// First violating sample in lexicographic (time, node) order.
    pub first_violation: Option<(usize, usize, T)>,
    pub bound: T,
    pub t_window: T,
    pub audited_samples: usize,
}

/// Curvature-persistence audit in either mode. `c0` is the uniform initial
/// bound for [`PersistenceMode::UniformDoubling`]; `t_window` caps the
/// audited time range.
pub fn persistence_audit<T: Real>(
    history: &FlowHistory<T>,
    center_node: usize,
    r0: T,
    eps: T,
    c0: T,
    t_window: T,
    mode: PersistenceMode,
) -> Result<PersistenceReport<T>, AuditError> {
    if history.is_empty() {
        return Err(AuditError::InsufficientSamples { found: 0, needed: 2 });
    }
    let model = &history.model;
    let x0: AmbientPoint<T> = history.positions[0][center_node];

    let (bound, window, ball): (T, T, Option<T>) = match mode {
        PersistenceMode::GraphicBall => {
            // Hypotheses: |A| ≤ 1/r₀ on the initial ball and graphic data.
            let initial = history.field_at(0);
            let geom0 = induced_geometry(&initial)
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
            let lip = lipschitz_graph_check(&initial, &geom0, center_node, r0)
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e)))?;
            if !lip.component_is_graph {
                return Err(AuditError::HypothesisUnknown(
                    "initial data is not graphic near the center".into(),
                ));
            }
            let mut sup0 = T::zero();
            for node in 0..history.a_fields[0].len() {
                let d = model
                    .distance(&x0, &history.positions[0][node])
                    .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
                if d <= r0 {
                    sup0 = sup0.max(history.a_fields[0][node]);
                }
            }
            if sup0 * r0 > T::one() + T::of(1e-9) {
                return Err(AuditError::HypothesisUnknown(format!(
                    "initial sup|A| = {} exceeds 1/r0",
                    sup0.as_f64()
                )));
            }
            (T::one() / (eps * r0), t_window.min(eps.sq() * r0.sq()), Some(eps * r0))
        }
        PersistenceMode::UniformDoubling => {
            // Discrete initial data carries O(h²) curvature error; verify the
            // hypothesis with a matching relative slack.
            let sup0 = history.sup_a[0];
            if sup0 > c0 * (T::one() + T::of(1e-3)) {
                return Err(AuditError::HypothesisUnknown(format!(
                    "initial sup|A| = {} exceeds c0 = {}",
                    sup0.as_f64(),
                    c0.as_f64()
                )));
            }
            (T::of(2.0) * c0, t_window, None)
        }
    };

    let mut audited = 0usize;
    let mut first_violation = None;
    'outer: for ti in 0..history.len() {
        let t = history.times[ti];
        if t > window + T::of(1e-15) {
            continue;
        }
        for node in 0..history.a_fields[ti].len() {
            if let Some(b) = ball {
                let d = model
                    .distance(&x0, &history.positions[ti][node])
                    .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
                if d > b {
                    continue;
                }
            }
            audited += 1;
            let a = history.a_fields[ti][node];
            if a > bound {
                first_violation = Some((ti, node, a));
                break 'outer;
            }
        }
    }
    Ok(PersistenceReport {
        passes: first_violation.is_none(),
        first_violation,
        bound,
        t_window: window,
        audited_samples: audited,
    })
}
