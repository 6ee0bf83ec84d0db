//! Time steppers for the mean curvature flow and its gauge-fixed variant,
//! with the evolution monitors used by the verification harness.

mod checks;
mod cutoff;
mod experiments;
mod history;
mod map;

pub use checks::{commutation_check, gradient_norms, metric_evolution_check, MetricEvolutionReport};
pub use cutoff::{build_cutoff, CutoffFamily};
pub use experiments::{
    isometry_equivariance_check, uniqueness_experiment, AmbientIsometry, UniquenessReport,
};
pub use history::{run_recorded, FlowHistory};
pub use map::{
    deturck_residual, diffeo_monitor, displacement_monitor, gauge_compose,
    metric_equivalence_monitor, CoupledRun, DiffeoReport, FrozenTarget, MapField,
    MetricEquivalence,
};

use crate::error::FlowError;
use crate::immersion::{induced_geometry, ImmersionField, InducedGeometry};
use crate::linalg::{self, Sym2, Vector};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ExplicitEuler,
    Rk4,
}

#[derive(Debug, Clone)]
pub struct FlowConfig<T> {
    pub scheme: Scheme,
    /// CFL constant: dt = c_cfl / sup_node Σ_i g^{ii}/h_i².
    pub c_cfl: T,
    pub t_max: T,
    /// Fixed time step for convergence and equivariance studies.
    pub dt_override: Option<T>,
    /// Rollback budget when a step degenerates the metric.
    pub max_halvings: u32,
}

impl<T: Real> FlowConfig<T> {
    pub fn new(t_max: T) -> Self {
        assert!(t_max > T::zero(), "t_max must be positive");
        Self {
            scheme: Scheme::ExplicitEuler,
            c_cfl: T::of(0.1),
            t_max,
            dt_override: None,
            max_halvings: 8,
        }
    }

    pub fn with_cfl(mut self, c: T) -> Self {
        assert!(c > T::zero() && c <= T::of(0.25), "c_cfl must lie in (0, 0.25]");
        self.c_cfl = c;
        self
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt_override = Some(dt);
        self
    }

    pub fn with_scheme(mut self, s: Scheme) -> Self {
        self.scheme = s;
        self
    }
}

/// One diagnostics row per accepted step.
#[derive(Debug, Clone)]
pub struct SeriesRow<T> {
    pub t: T,
    pub sup_a: T,
    pub sup_h: T,
    pub volume: T,
}

#[derive(Debug, Clone)]
pub struct FlowState<T> {
    pub time: T,
    pub field: ImmersionField<T>,
    pub geometry: InducedGeometry<T>,
    pub steps: u64,
    pub series: Vec<SeriesRow<T>>,
}

impl<T: Real> FlowState<T> {
    pub fn new(field: ImmersionField<T>) -> Result<Self, FlowError> {
        let geometry = induced_geometry(&field)?;
        let mut state = Self { time: T::zero(), field, geometry, steps: 0, series: Vec::new() };
        state.push_row();
        Ok(state)
    }

    fn push_row(&mut self) {
        self.series.push(SeriesRow {
            t: self.time,
            sup_a: self.geometry.sup_a,
            sup_h: self.geometry.sup_h,
            volume: self.geometry.volume,
        });
    }
}

/// Frozen background connection and metric for the gauge-fixed flow and the
/// coupled map flow, captured from an induced geometry.
#[derive(Debug, Clone)]
pub struct BackgroundConnection<T> {
    pub gamma: Vec<[[[T; 2]; 2]; 2]>,
    pub metric: Vec<Sym2<T>>,
}

impl<T: Real> BackgroundConnection<T> {
    pub fn from_geometry(geom: &InducedGeometry<T>) -> Self {
        Self {
            gamma: geom.nodes.iter().map(|n| n.gamma).collect(),
            metric: geom.nodes.iter().map(|n| n.g).collect(),
        }
    }
}

/// CFL-limited step size for the current geometry.
pub fn cfl_dt<T: Real>(state: &FlowState<T>, c_cfl: T) -> T {
    let grid = &state.field.grid;
    let mut worst = T::zero();
    for node in &state.geometry.nodes {
        let mut s = T::zero();
        for i in 0..grid.dim {
            s += node.ginv[i][i] / grid.spacing[i].sq();
        }
        worst = worst.max(s);
    }
    c_cfl / worst
}

/// Evolution velocity at every node: the harmonic-map Laplacian of the
/// position, which equals the mean curvature vector; with a background
/// connection the Christoffel term uses Γ̂ instead of the evolving Γ,
/// i.e. v = H + g^{ij}(Γ^k_{ij} − Γ̂^k_{ij}) ∂_k X.
pub fn flow_velocity<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    background: Option<&BackgroundConnection<T>>,
) -> Vec<Vector<T>> {
    let grid = &field.grid;
    let adim = field.model.dim;
    let mut out = Vec::with_capacity(geom.nodes.len());
    for idx in 0..geom.nodes.len() {
        let (i0, i1) = grid.coords(idx);
        if grid.is_pinned(i0, i1) {
            out.push(linalg::zero_vec());
            continue;
        }
        let node = &geom.nodes[idx];
        let mut v = node.mean_curvature;
        if let Some(bg) = background {
            for i in 0..grid.dim {
                for j in 0..grid.dim {
                    for k in 0..grid.dim {
                        let delta = node.gamma[k][i][j] - bg.gamma[idx][k][i][j];
                        linalg::axpy(&mut v, node.ginv[i][j] * delta, &node.dx[k], adim);
                    }
                }
            }
        }
        out.push(v);
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct StepReport<T> {
    pub dt: T,
    pub halvings: u32,
}

fn apply_velocity<T: Real>(
    field: &ImmersionField<T>,
    vel: &[Vector<T>],
    dt: T,
) -> ImmersionField<T> {
    let mut out = field.clone();
    let adim = field.model.dim;
    for (x, v) in out.x.iter_mut().zip(vel) {
        linalg::axpy(x, dt, v, adim);
    }
    out
}

fn try_step<T: Real>(
    state: &FlowState<T>,
    cfg: &FlowConfig<T>,
    background: Option<&BackgroundConnection<T>>,
    dt: T,
) -> Result<(ImmersionField<T>, InducedGeometry<T>), FlowError> {
    let next = match cfg.scheme {
        Scheme::ExplicitEuler => {
            let vel = flow_velocity(&state.field, &state.geometry, background);
            apply_velocity(&state.field, &vel, dt)
        }
        Scheme::Rk4 => {
            let adim = state.field.model.dim;
            let k1 = flow_velocity(&state.field, &state.geometry, background);
            let f2 = apply_velocity(&state.field, &k1, dt.half());
            let g2 = induced_geometry(&f2)?;
            let k2 = flow_velocity(&f2, &g2, background);
            let f3 = apply_velocity(&state.field, &k2, dt.half());
            let g3 = induced_geometry(&f3)?;
            let k3 = flow_velocity(&f3, &g3, background);
            let f4 = apply_velocity(&state.field, &k3, dt);
            let g4 = induced_geometry(&f4)?;
            let k4 = flow_velocity(&f4, &g4, background);
            let mut out = state.field.clone();
            let sixth = dt / T::of(6.0);
            let two = T::of(2.0);
            for idx in 0..out.x.len() {
                for c in 0..adim {
                    out.x[idx][c] += sixth
                        * (k1[idx][c] + two * k2[idx][c] + two * k3[idx][c] + k4[idx][c]);
                }
            }
            out
        }
    };
    let geom = induced_geometry(&next)?;
    Ok((next, geom))
}

/// Advance by one accepted step; degenerate metrics roll back and halve dt.
pub fn step_flow<T: Real>(
    state: &mut FlowState<T>,
    cfg: &FlowConfig<T>,
    background: Option<&BackgroundConnection<T>>,
) -> Result<StepReport<T>, FlowError> {
    let mut dt = cfg.dt_override.unwrap_or_else(|| cfl_dt(state, cfg.c_cfl));
    let remaining = cfg.t_max - state.time;
    if remaining > T::zero() {
        dt = dt.min(remaining);
    }
    let mut halvings = 0;
    loop {
        match try_step(state, cfg, background, dt) {
            Ok((field, geom)) => {
                let grew = geom.sup_a > T::of(10.0) * state.geometry.sup_a + T::of(1e-9);
                if grew {
                    return Err(FlowError::Instability {
                        t: state.time.as_f64(),
                        factor: (geom.sup_a / state.geometry.sup_a.max(T::of(1e-30))).as_f64(),
                    });
                }
                state.field = field;
                state.geometry = geom;
                state.time += dt;
                state.steps += 1;
                state.push_row();
                return Ok(StepReport { dt, halvings });
            }
            Err(FlowError::Geometry(_)) if halvings < cfg.max_halvings => {
                dt = dt.half();
                halvings += 1;
            }
            Err(e) => {
                if halvings >= cfg.max_halvings {
                    return Err(FlowError::StepUnderflow {
                        t: state.time.as_f64(),
                        attempts: halvings,
                    });
                }
                return Err(e);
            }
        }
    }
}

/// Mean curvature flow step (geometric gauge).
pub fn mcf_step<T: Real>(
    state: &mut FlowState<T>,
    cfg: &FlowConfig<T>,
) -> Result<StepReport<T>, FlowError> {
    step_flow(state, cfg, None)
}

/// Gauge-fixed step: the Christoffel symbols of the frozen background metric
/// replace the evolving ones in the position Laplacian.
pub fn deturck_step<T: Real>(
    state: &mut FlowState<T>,
    background: &BackgroundConnection<T>,
    cfg: &FlowConfig<T>,
) -> Result<StepReport<T>, FlowError> {
    step_flow(state, cfg, Some(background))
}

/// Run until t_max (inclusive up to step resolution).
pub fn run_flow<T: Real>(
    state: &mut FlowState<T>,
    cfg: &FlowConfig<T>,
    background: Option<&BackgroundConnection<T>>,
) -> Result<(), FlowError> {
    let eps = T::of(1e-14) * cfg.t_max.max(T::one());
    while state.time + eps < cfg.t_max {
        step_flow(state, cfg, background)?;
    }
    Ok(())
}
