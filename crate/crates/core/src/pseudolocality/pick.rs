//! Point picking: iterated selection of a space-time point whose curvature
//! controls a parabolic neighborhood, verified by exhaustive scan.

use crate::error::AuditError;
use crate::flows::FlowHistory;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct PickedPoint<T> {
    /// Index into the recorded times.
    pub time_idx: usize,
    pub node: usize,
    /// Q = |A| at the picked point.
    pub q: T,
    pub alpha: T,
    pub k_param: T,
    /// Iterate trace (time index, node), seed first.
    pub trace: Vec<(usize, usize)>,
    /// Exhaustive scan confirmed |A| ≤ 4Q on the (7.5)-type neighborhood.
    pub neighborhood_verified: bool,
    /// Recorded cadence fine enough for the scan to be conclusive
    /// (snapshot gaps ≤ (α/8)Q⁻²).
    pub cadence_sufficient: bool,
}

fn in_e_alpha<T: Real>(history: &FlowHistory<T>, alpha: T, ti: usize, node: usize) -> bool {
    let t = history.times[ti];
    if !(t > T::zero()) {
        return false;
    }
    let a = history.a_fields[ti][node];
    a * a >= alpha / t
}

/// Perelman-style point picking over a recorded history. The seed must
/// violate |A|² ≥ α/t + ε⁻² (searched lexicographically when absent);
/// returns `None` when no violation exists.
pub fn point_pick<T: Real>(
    history: &FlowHistory<T>,
    alpha: T,
    k_param: T,
    eps: T,
    seed: Option<(usize, usize)>,
) -> Result<Option<PickedPoint<T>>, AuditError> {
    if history.is_empty() {
        return Err(AuditError::InsufficientSamples { found: 0, needed: 1 });
    }
    let inv_eps_sq = T::one() / (eps * eps);
    let violates = |ti: usize, node: usize| -> bool {
        let t = history.times[ti];
        if !(t > T::zero()) {
            return false;
        }
        let a = history.a_fields[ti][node];
        a * a >= alpha / t + inv_eps_sq
    };

    let seed = match seed {
        Some(s) if violates(s.0, s.1) => s,
        Some(_) => return Ok(None),
        None => {
            let mut found = None;
            'scan: for ti in 0..history.len() {
                for node in 0..history.a_fields[ti].len() {
                    if violates(ti, node) {
                        found = Some((ti, node));
                        break 'scan;
                    }
                }
            }
            match found {
                Some(s) => s,
                None => return Ok(None),
            }
        }
    };

    // Iterated doubling: replace the candidate by any 4x-larger curvature
    // point of E_α in its trailing K/Q-neighborhood; the argmax is canonical.
    let model = &history.model;
    let mut trace = vec![seed];
    let mut current = seed;
    for _ in 0..64 {
        let (ti, node) = current;
        let q = history.a_fields[ti][node];
        let radius = k_param / q;
        let x_c = history.positions[ti][node];
        let mut best: Option<(usize, usize, T)> = None;
        for tj in 0..=ti {
            for nj in 0..history.a_fields[tj].len() {
                if !in_e_alpha(history, alpha, tj, nj) {
                    continue;
                }
                let a = history.a_fields[tj][nj];
                if a <= T::of(4.0) * q {
                    continue;
                }
                let d = model
                    .distance(&x_c, &history.positions[tj][nj])
                    .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
                if d > radius {
                    continue;
                }
                match best {
                    Some((_, _, ba)) if ba >= a => {}
                    _ => best = Some((tj, nj, a)),
                }
            }
        }
        match best {
            Some((tj, nj, _)) => {
                current = (tj, nj);
                trace.push(current);
            }
            None => break,
        }
    }

    let (ti, node) = current;
    let q = history.a_fields[ti][node];
    let t_bar = history.times[ti];
    let x_bar = history.positions[ti][node];

    // Exhaustive verification of the parabolic neighborhood bound |A| ≤ 4Q
    // on t̄ − (3/4)αQ⁻² ≤ t ≤ t̄, d̄(x, x̄) ≤ K Q⁻¹.
    let t_lo = t_bar - T::of(0.75) * alpha / (q * q);
    let radius = k_param / q;
    let mut verified = true;
    let mut cadence_sufficient = true;
    let max_gap = alpha / (T::of(8.0) * q * q);
    let mut prev_t: Option<T> = None;
    for tj in 0..history.len() {
        let t = history.times[tj];
        if t < t_lo || t > t_bar {
            continue;
        }
        if let Some(pt) = prev_t {
            if t - pt > max_gap + T::of(1e-15) {
                cadence_sufficient = false;
            }
        }
        prev_t = Some(t);
        for nj in 0..history.a_fields[tj].len() {
            let d = model
                .distance(&x_bar, &history.positions[tj][nj])
                .map_err(|e| AuditError::Flow(crate::error::FlowError::Geometry(e.into())))?;
            if d <= radius && history.a_fields[tj][nj] > T::of(4.0) * q + T::of(1e-12) {
                verified = false;
            }
        }
    }

    Ok(Some(PickedPoint {
        time_idx: ti,
        node,
        q,
        alpha,
        k_param,
        trace,
        neighborhood_verified: verified,
        cadence_sufficient,
    }))
}
