//! Recorded flow histories for the audits.

use super::{step_flow, BackgroundConnection, FlowConfig, FlowState};
use crate::error::FlowError;
use crate::grid::ParameterGrid;
use crate::immersion::{induced_geometry, ImmersionField, InducedGeometry};
use crate::linalg::Vector;
use crate::scalar::Real;
use crate::ambient::AmbientModel;

/// Snapshots of a run: node positions and |A| fields at recorded times.
/// Full geometry is recomputed on demand (it is a pure function of the
/// positions).
#[derive(Debug, Clone)]
pub struct FlowHistory<T> {
    pub grid: ParameterGrid<T>,
    pub model: AmbientModel<T>,
    pub times: Vec<T>,
    pub positions: Vec<Vec<Vector<T>>>,
    pub a_fields: Vec<Vec<T>>,
    pub sup_a: Vec<T>,
}

impl<T: Real> FlowHistory<T> {
    pub fn new(grid: ParameterGrid<T>, model: AmbientModel<T>) -> Self {
        Self { grid, model, times: Vec::new(), positions: Vec::new(), a_fields: Vec::new(), sup_a: Vec::new() }
    }

    pub fn record(&mut self, state: &FlowState<T>) {
        self.times.push(state.time);
        self.positions.push(state.field.x.clone());
        self.a_fields
            .push(state.geometry.nodes.iter().map(|n| n.a_sq.max(T::zero()).sqrt()).collect());
        self.sup_a.push(state.geometry.sup_a);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn field_at(&self, i: usize) -> ImmersionField<T> {
        ImmersionField::new(self.grid.clone(), self.model.clone(), self.positions[i].clone())
    }

    pub fn geometry_at(&self, i: usize) -> InducedGeometry<T> {
        induced_geometry(&self.field_at(i)).expect("recorded snapshot degenerated")
    }

    /// Index of the latest recorded time ≤ t (within tolerance).
    pub fn index_at(&self, t: T) -> Option<usize> {
        let eps = T::of(1e-12) * (T::one() + t.abs());
        let mut best = None;
        for (i, &ti) in self.times.iter().enumerate() {
            if ti <= t + eps {
                best = Some(i);
            }
        }
        best
    }
}

/// Run the flow, recording every `record_every`-th accepted step (plus the
/// initial and final states).
pub fn run_recorded<T: Real>(
    state: &mut FlowState<T>,
    cfg: &FlowConfig<T>,
    background: Option<&BackgroundConnection<T>>,
    record_every: usize,
) -> Result<FlowHistory<T>, FlowError> {
    let every = record_every.max(1);
    let mut hist = FlowHistory::new(state.field.grid.clone(), state.field.model.clone());
    hist.record(state);
    let eps = T::of(1e-14) * cfg.t_max.max(T::one());
    let mut since = 0usize;
    while state.time + eps < cfg.t_max {
        step_flow(state, cfg, background)?;
        since += 1;
        if since == every {
            hist.record(state);
            since = 0;
        }
    }
    if since != 0 {
        hist.record(state);
    }
    Ok(hist)
}
