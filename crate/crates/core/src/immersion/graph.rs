//! Normal-coordinate graph representations of a neighborhood in the immersion.
//!
//! A patch is written as (x′, F(x′)) in an ambient orthonormal frame whose
//! first n legs span the tangent space at the center node. Derivatives of F
//! come from the chain rule through the grid parametrization, so no
//! interpolation enters the measured |DF|.

use super::{ImmersionField, InducedGeometry};
use crate::error::GeometryError;
use crate::linalg::{self, Vector, MAX_DIM};
use crate::scalar::Real;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
pub struct GraphSample<T> {
    pub node: usize,
    /// Tangent-plane coordinates x′ (first n frame components).
    pub base: [T; 2],
    pub base_norm: T,
    /// Graph values F(x′) (remaining frame components, padded).
    pub normal: Vector<T>,
    /// |DF|(x′), Frobenius norm via the chain rule.
    pub df_norm: T,
}

#[derive(Debug, Clone)]
pub struct GraphPatch<T> {
    pub center: usize,
    pub r0: T,
    pub frame: [Vector<T>; MAX_DIM],
    /// Samples with |x′| < r0/96.
    pub samples: Vec<GraphSample<T>>,
    /// sup over samples of |DF|(x′)/|x′|.
    pub ratio_sup: T,
    pub df_center: T,
    pub sup_a_ball: T,
}

#[derive(Debug, Clone)]
pub struct LipschitzReport<T> {
    /// Single-sheet inversion succeeded for the component through the center.
    pub component_is_graph: bool,
    /// Measured sup |DF| over the component samples in |x′| < r0.
    pub delta: T,
    /// Other grid components project onto the same base disk.
    pub other_sheets: bool,
    pub samples: usize,
}

impl<T: Real> LipschitzReport<T> {
    /// The definition's verdict for the full ball: one sheet and no folds.
    pub fn is_graph_strict(&self) -> bool {
        self.component_is_graph && !self.other_sheets
    }
}

pub(crate) struct NormalChart<T> {
    /// Frame components of log_{x0}(X(node)) for nodes near the center.
    coords: Vec<Option<Vector<T>>>,
    component: Vec<bool>,
    frame: [Vector<T>; MAX_DIM],
    sup_a_ball: T,
}

/// ḡ-orthonormal frame at `x0` whose leading legs span the given tangents.
pub(crate) fn adapted_frame<T: Real>(
    model: &crate::ambient::AmbientModel<T>,
    x0: &Vector<T>,
    tangents: &[Vector<T>],
) -> [Vector<T>; MAX_DIM] {
    let mut frame = [linalg::zero_vec(); MAX_DIM];
    let mut count = 0;
    let mut seeds: Vec<Vector<T>> = tangents.to_vec();
    for axis in 0..model.dim {
        let mut e = linalg::zero_vec();
        e[axis] = T::one();
        seeds.push(e);
    }
    for cand0 in seeds {
        if count == model.dim {
            break;
        }
        let mut cand = cand0;
        for f in frame.iter().take(count) {
            let proj = model.inner(x0, &cand, f);
            linalg::axpy(&mut cand, -proj, f, model.dim);
        }
        let n = model.norm(x0, &cand);
        if n > T::of(1e-10) {
            frame[count] = linalg::scale(&cand, T::one() / n, model.dim);
            count += 1;
        }
    }
    assert_eq!(count, model.dim, "failed to complete the adapted frame");
    frame
}

fn build_normal_chart<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    center: usize,
    reach: T,
) -> Result<NormalChart<T>, GeometryError> {
    let x0 = field.x[center];
    let tangents: Vec<Vector<T>> =
        (0..field.grid.dim).map(|i| geom.nodes[center].dx[i]).collect();
    let frame = adapted_frame(&field.model, &x0, &tangents);
    chart_in_frame(field, geom, &x0, frame, center, reach)
}

/// Normal-coordinate chart against an externally fixed center and frame
/// (the time-dependent representation freezes both at the initial time).
pub(crate) fn chart_in_frame<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    x0: &Vector<T>,
    frame: [Vector<T>; MAX_DIM],
    seed_node: usize,
    reach: T,
) -> Result<NormalChart<T>, GeometryError> {
    let grid = &field.grid;
    let model = &field.model;
    let n_nodes = grid.node_count();
    let x0 = *x0;
    let center = seed_node;

    let mut coords: Vec<Option<Vector<T>>> = vec![None; n_nodes];
    let mut in_ball = vec![false; n_nodes];
    let mut sup_a_ball = T::zero();
    for idx in 0..n_nodes {
        let d = model.distance(&x0, &field.x[idx]).map_err(GeometryError::Ambient)?;
        if d < reach {
            let log = model.log_map(&x0, &field.x[idx]).map_err(GeometryError::Ambient)?;
            let mut u = linalg::zero_vec();
            for c in 0..model.dim {
                u[c] = model.inner(&x0, &log.tangent, &frame[c]);
            }
            coords[idx] = Some(u);
            in_ball[idx] = true;
            sup_a_ball = sup_a_ball.max(geom.nodes[idx].a_sq.max(T::zero()).sqrt());
        }
    }

    // Connected component of the ball through the center (grid adjacency).
    let mut component = vec![false; n_nodes];
    let mut queue = VecDeque::new();
    component[center] = true;
    queue.push_back(center);
    while let Some(idx) = queue.pop_front() {
        let (i0, i1) = grid.coords(idx);
        let mut push = |j0: isize, j1: isize| {
            let n0 = grid.shape[0] as isize;
            let n1 = grid.shape[1] as isize;
            let (mut a, mut b) = (j0, j1);
            if grid.periodic[0] {
                a = a.rem_euclid(n0);
            }
            if grid.dim == 2 && grid.periodic[1] {
                b = b.rem_euclid(n1);
            }
            if a < 0 || a >= n0 || b < 0 || b >= n1 {
                return;
            }
            let j = grid.index(a as usize, b as usize);
            if in_ball[j] && !component[j] {
                component[j] = true;
                queue.push_back(j);
            }
        };
        push(i0 as isize - 1, i1 as isize);
        push(i0 as isize + 1, i1 as isize);
        if grid.dim == 2 {
            push(i0 as isize, i1 as isize - 1);
            push(i0 as isize, i1 as isize + 1);
        }
    }

    Ok(NormalChart { coords, component, frame, sup_a_ball })
}

impl<T: Real> NormalChart<T> {
    /// Chain-rule derivative of the normal-coordinate map along grid axes:
    /// columns are d(coords)/du_axis. Centered where both neighbors carry
    /// coordinates, one-sided otherwise; `None` when the stencil is starved.
    fn chart_derivative(
        &self,
        field: &ImmersionField<T>,
        idx: usize,
        axis: usize,
    ) -> Option<Vector<T>> {
        let grid = &field.grid;
        let (i0, i1) = grid.coords(idx);
        let n = grid.shape[axis];
        let i = if axis == 0 { i0 } else { i1 };
        let at = |j: usize| -> Option<&Vector<T>> {
            let id = if axis == 0 { grid.index(j, i1) } else { grid.index(i0, j) };
            self.coords[id].as_ref()
        };
        let wrap = |j: isize| -> Option<usize> {
            if grid.periodic[axis] {
                Some(j.rem_euclid(n as isize) as usize)
            } else if (0..n as isize).contains(&j) {
                Some(j as usize)
            } else {
                None
            }
        };
        let h = grid.spacing[axis];
        let adim = field.model.dim;
        let prev = wrap(i as isize - 1).and_then(at);
        let next = wrap(i as isize + 1).and_then(at);
        match (prev, next) {
            (Some(l), Some(r)) => {
                let mut out = linalg::sub(r, l, adim);
                out = linalg::scale(&out, T::one() / (T::of(2.0) * h), adim);
                Some(out)
            }
            (None, Some(r)) => {
                let rr = wrap(i as isize + 2).and_then(at)?;
                let me = self.coords[idx].as_ref()?;
                let mut out = linalg::zero_vec();
                for c in 0..adim {
                    out[c] = (-T::of(3.0) * me[c] + T::of(4.0) * r[c] - rr[c])
                        / (T::of(2.0) * h);
                }
                Some(out)
            }
            (Some(l), None) => {
                let ll = wrap(i as isize - 2).and_then(at)?;
                let me = self.coords[idx].as_ref()?;
                let mut out = linalg::zero_vec();
                for c in 0..adim {
                    out[c] = (T::of(3.0) * me[c] - T::of(4.0) * l[c] + ll[c])
                        / (T::of(2.0) * h);
                }
                Some(out)
            }
            (None, None) => None,
        }
    }

    /// |DF| at a node: solve the base block against the normal block.
    fn df_norm(&self, field: &ImmersionField<T>, idx: usize) -> Option<T> {
        let n = field.grid.dim;
        let adim = field.model.dim;
        let mut cols = [linalg::zero_vec(); 2];
        for (axis, col) in cols.iter_mut().enumerate().take(n) {
            *col = self.chart_derivative(field, idx, axis)?;
        }
        if n == 1 {
            let t = cols[0];
            let base = t[0];
            if base.abs() <= T::of(1e-14) {
                return None;
            }
            let mut s = T::zero();
            for c in 1..adim {
                s += (t[c] / base).sq();
            }
            Some(s.sqrt())
        } else {
            // DF^β_i solves  J_base · DF_col(β) = J_norm(β) with
            // J_base[i][j] = ∂ x′_i / ∂ u_j.
            let a = cols[0];
            let b = cols[1];
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() <= T::of(1e-14) {
                return None;
            }
            let mut s = T::zero();
            for beta in n..adim {
                // Solve the 2×2 system for (∂F^β/∂x′_1, ∂F^β/∂x′_2).
                let rhs = [a[beta], b[beta]];
                let d1 = (rhs[0] * b[1] - rhs[1] * a[1]) / det;
                let d2 = (a[0] * rhs[1] - b[0] * rhs[0]) / det;
                s += d1 * d1 + d2 * d2;
            }
            Some(s.sqrt())
        }
    }

    fn base_of(&self, idx: usize, dim: usize) -> Option<([T; 2], T)> {
        let u = self.coords[idx].as_ref()?;
        let mut base = [T::zero(); 2];
        let mut norm = T::zero();
        for i in 0..dim {
            base[i] = u[i];
            norm += u[i].sq();
        }
        Some((base, norm.sqrt()))
    }
}

/// Graph extraction under the controlled-curvature hypothesis: requires
/// `sup |A| ≤ 1/r0` on the ambient r0-ball and the smallness threshold
/// `r0 ≤ min{i₀/2, 1/(4√(c₀²+1))}`, and returns samples on |x′| < r0/96.
pub fn local_graph_extract<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    center: usize,
    r0: T,
) -> Result<GraphPatch<T>, GeometryError> {
    let bounds = field.model.bounds_report();
    // Smallness threshold: i₀/2 always; the curvature term 1/(4√(c₀²+1))
    // only binds on curved ambients (flat normal coordinates are global).
    let mut threshold = bounds.injectivity.min_with(T::max_value()).half();
    if bounds.c0 > T::zero() {
        threshold =
            threshold.min(T::one() / (T::of(4.0) * (bounds.c0 * bounds.c0 + T::one()).sqrt()));
    }
    if r0 > threshold {
        return Err(GeometryError::GraphPrecondition(format!(
            "r0 = {} exceeds the smallness threshold {}",
            r0.as_f64(),
            threshold.as_f64()
        )));
    }

    let chart = build_normal_chart(field, geom, center, r0)?;
    if chart.sup_a_ball * r0 > T::one() + T::of(1e-9) {
        return Err(GeometryError::GraphPrecondition(format!(
            "sup|A| = {} exceeds 1/r0 = {} on the ball",
            chart.sup_a_ball.as_f64(),
            (T::one() / r0).as_f64()
        )));
    }

    let disk = r0 / T::of(96.0);
    let n = field.grid.dim;
    let adim = field.model.dim;
    let mut samples = Vec::new();
    let mut ratio_sup = T::zero();
    let mut df_center = T::zero();
    for idx in 0..field.grid.node_count() {
        let Some((base, base_norm)) = chart.base_of(idx, n) else { continue };
        if base_norm >= disk {
            continue;
        }
        if !chart.component[idx] {
            return Err(GeometryError::MultiSheet { node: idx });
        }
        let Some(df) = chart.df_norm(field, idx) else {
            return Err(GeometryError::Resolution { needed: 3, found: 1 });
        };
        let u = chart.coords[idx].as_ref().unwrap();
        let mut normal = linalg::zero_vec();
        for c in n..adim {
            normal[c - n] = u[c];
        }
        if idx == center {
            df_center = df;
        } else if base_norm > T::zero() {
            ratio_sup = ratio_sup.max(df / base_norm);
        }
        samples.push(GraphSample { node: idx, base, base_norm, normal, df_norm: df });
    }

    let off_center = samples.iter().filter(|s| s.node != center).count();
    let coverage = samples.iter().fold(T::zero(), |m, s| m.max(s.base_norm));
    if off_center < 2 || coverage < disk / T::of(2.0) {
        return Err(GeometryError::Resolution { needed: 3, found: off_center + 1 });
    }

    Ok(GraphPatch {
        center,
        r0,
        frame: chart.frame,
        samples,
        ratio_sup,
        df_center,
        sup_a_ball: chart.sup_a_ball,
    })
}

/// One time slice of the time-dependent graph representation.
#[derive(Debug, Clone, Copy)]
pub struct FrameGraphSample<T> {
    /// sup |DF| over the component samples inside the base disk.
    pub df_sup: T,
    /// Normal offset |F_s(0)| of the tracked orbit node above the frozen
    /// tangent plane.
    pub orbit_offset: T,
    pub samples: usize,
}

/// Graph data of the field over a frozen external frame. The
/// time-dependent representation fixes the center point and tangent frame
/// at the initial time and re-expresses every later snapshot in it.
pub fn graph_in_frozen_frame<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    x0: &Vector<T>,
    frame: [Vector<T>; MAX_DIM],
    orbit_node: usize,
    r0: T,
) -> Result<FrameGraphSample<T>, GeometryError> {
    let chart = chart_in_frame(field, geom, x0, frame, orbit_node, r0 * T::of(1.2))?;
    let n = field.grid.dim;
    let adim = field.model.dim;
    let mut df_sup = T::zero();
    let mut samples = 0usize;
    for idx in 0..field.grid.node_count() {
        if !chart.component[idx] {
            continue;
        }
        let Some((_, base_norm)) = chart.base_of(idx, n) else { continue };
        if base_norm >= r0 {
            continue;
        }
        samples += 1;
        if let Some(df) = chart.df_norm(field, idx) {
            df_sup = df_sup.max(df);
        }
    }
    if samples < 3 {
        return Err(GeometryError::Resolution { needed: 3, found: samples });
    }
    let orbit_offset = match &chart.coords[orbit_node] {
        Some(u) => {
            let mut s = T::zero();
            for c in n..adim {
                s += u[c].sq();
            }
            s.sqrt()
        }
        None => return Err(GeometryError::Resolution { needed: 1, found: 0 }),
    };
    Ok(FrameGraphSample { df_sup, orbit_offset, samples })
}

/// δ-Lipschitz graph check over the full base disk |x′| < r0 (no curvature
/// hypothesis). Folds and extra sheets are reported in the flags.
pub fn lipschitz_graph_check<T: Real>(
    field: &ImmersionField<T>,
    geom: &InducedGeometry<T>,
    center: usize,
    r0: T,
) -> Result<LipschitzReport<T>, GeometryError> {
    // Nodes with |y″| up to ~r0 above the base disk still belong to the
    // coordinate slab; reach past the ball to see them.
    let reach = r0 * T::of(1.5);
    let chart = build_normal_chart(field, geom, center, reach)?;
    let n = field.grid.dim;

    let mut delta = T::zero();
    let mut other_sheets = false;
    let mut fold = false;
    let mut det_sign: Option<bool> = None;
    let mut count = 0usize;
    for idx in 0..field.grid.node_count() {
        let Some((_, base_norm)) = chart.base_of(idx, n) else { continue };
        if base_norm >= r0 {
            continue;
        }
        if !chart.component[idx] {
            other_sheets = true;
            continue;
        }
        count += 1;
        if let Some(df) = chart.df_norm(field, idx) {
            delta = delta.max(df);
        }
        // Fold detection: the base-projection Jacobian must keep one
        // orientation along the component.
        let mut cols = [linalg::zero_vec(); 2];
        let mut have = true;
        for (axis, col) in cols.iter_mut().enumerate().take(n) {
            match chart.chart_derivative(field, idx, axis) {
                Some(c) => *col = c,
                None => have = false,
            }
        }
        if have {
            let det =
                if n == 1 { cols[0][0] } else { cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0] };
            if det.abs() <= T::of(1e-14) {
                fold = true;
            } else {
                let pos = det > T::zero();
                match det_sign {
                    None => det_sign = Some(pos),
                    Some(p) if p != pos => fold = true,
                    _ => {}
                }
            }
        }
    }

    Ok(LipschitzReport { component_is_graph: !fold && count > 0, delta, other_sheets, samples: count })
}
