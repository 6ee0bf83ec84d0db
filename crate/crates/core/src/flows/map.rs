//! Harmonic map heat flow coupled with the driving flow (curves).
//!
//! The map runs between the parameter manifold with the evolving induced
//! metric g(·,t) and the same manifold with a frozen target metric ĝ. Maps
//! are stored as a displacement field u with F(θ) = θ + u(θ), so periodic
//! seams need no unwrapping. Surface (2-d) map flows are out of scope; the
//! audited gauge experiments all run on curves.

use super::{flow_velocity, BackgroundConnection, FlowState};
use crate::error::FlowError;
use crate::grid::{stencil_d1, stencil_d2, ParameterGrid};
use crate::immersion::{induced_geometry, ImmersionField, InducedGeometry};
use crate::linalg::{self, Vector};
use crate::scalar::Real;

/// Frozen target data on the parameter grid: metric, Christoffels and the
/// cumulative length table used for target distances.
#[derive(Debug, Clone)]
pub struct FrozenTarget<T> {
    pub grid: ParameterGrid<T>,
    pub g_hat: Vec<T>,
    pub gamma_hat: Vec<T>,
    cum_len: Vec<T>,
    pub total_len: T,
}

impl<T: Real> FrozenTarget<T> {
    pub fn from_geometry(grid: &ParameterGrid<T>, geom: &InducedGeometry<T>) -> Self {
        assert_eq!(grid.dim, 1, "map flows are implemented for curves");
        let n = grid.shape[0];
        let h = grid.spacing[0];
        let g_hat: Vec<T> = geom.nodes.iter().map(|n| n.g[0][0]).collect();
        let gamma_hat: Vec<T> = geom.nodes.iter().map(|n| n.gamma[0][0][0]).collect();
        // Trapezoid cumulative length of √ĝ.
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(T::zero());
        let mut acc = T::zero();
        for i in 0..n {
            let a = g_hat[i].sqrt();
            let b = g_hat[(i + 1) % n].sqrt();
            acc += (a + b).half() * h;
            cum.push(acc);
        }
        let total_len = acc;
        Self { grid: grid.clone(), g_hat, gamma_hat, cum_len: cum, total_len }
    }

    fn param_period(&self) -> T {
        T::of_usize(self.grid.shape[0]) * self.grid.spacing[0]
    }

    /// Periodic linear interpolation of a per-node table at parameter s.
    fn interp(&self, table: &[T], s: T) -> T {
        let n = self.grid.shape[0];
        let h = self.grid.spacing[0];
        let period = self.param_period();
        let mut x = s;
        if self.grid.periodic[0] {
            x = x - (x / period).floor() * period;
        } else {
            x = x.max(T::zero()).min(T::of_usize(n - 1) * h);
        }
        let cell = (x / h).floor();
        let i = (cell.as_f64() as usize).min(n - 1);
        let frac = x / h - cell;
        let j = if self.grid.periodic[0] { (i + 1) % n } else { (i + 1).min(n - 1) };
        table[i] * (T::one() - frac) + table[j] * frac
    }

    pub fn g_hat_at(&self, s: T) -> T {
        self.interp(&self.g_hat, s)
    }

    pub fn gamma_hat_at(&self, s: T) -> T {
        self.interp(&self.gamma_hat, s)
    }

    /// Node-anchored interpolation at param(i) + offset: exact table lookup
    /// when the offset vanishes, so the identity map is exactly stationary.
    fn interp_node(&self, table: &[T], i: usize, offset: T) -> T {
        if offset == T::zero() {
            return table[i];
        }
        let n = self.grid.shape[0];
        let h = self.grid.spacing[0];
        let rel = offset / h;
        let k = rel.floor();
        let frac = rel - k;
        let pos = i as isize + k.as_f64() as isize;
        let (a, b) = if self.grid.periodic[0] {
            let ia = pos.rem_euclid(n as isize) as usize;
            (ia, (ia + 1) % n)
        } else {
            let ia = pos.clamp(0, n as isize - 1) as usize;
            (ia, (ia + 1).min(n - 1))
        };
        table[a] * (T::one() - frac) + table[b] * frac
    }

    pub fn g_hat_at_node(&self, i: usize, offset: T) -> T {
        self.interp_node(&self.g_hat, i, offset)
    }

    pub fn gamma_hat_at_node(&self, i: usize, offset: T) -> T {
        self.interp_node(&self.gamma_hat, i, offset)
    }

    /// Target distance d̂(param(i), param(i) + offset), node-anchored.
    pub fn distance_from_node(&self, i: usize, offset: T) -> T {
        if offset == T::zero() {
            return T::zero();
        }
        let n = self.grid.shape[0];
        let h = self.grid.spacing[0];
        let rel = offset / h;
        let k = rel.floor();
        let frac = rel - k;
        let pos = i as isize + k.as_f64() as isize;
        let arc_to = if self.grid.periodic[0] {
            let wraps = pos.div_euclid(n as isize);
            let ia = pos.rem_euclid(n as isize) as usize;
            let seg = self.cum_len[ia + 1] - self.cum_len[ia];
            T::of(wraps as f64) * self.total_len + self.cum_len[ia] + frac * seg
        } else {
            let ia = pos.clamp(0, n as isize - 1) as usize;
            let seg = self.cum_len[(ia + 1).min(n)] - self.cum_len[ia];
            self.cum_len[ia] + frac * seg
        };
        let d = (arc_to - self.cum_len[i]).abs();
        if self.grid.periodic[0] {
            let l = self.total_len;
            let m = d - (d / l).floor() * l;
            m.min(l - m)
        } else {
            d
        }
    }

    /// Arc-length position S(s) = ∫₀^s √ĝ.
    fn arc(&self, s: T) -> T {
        let n = self.grid.shape[0];
        let h = self.grid.spacing[0];
        let period = self.param_period();
        let mut x = s;
        let mut wraps = T::zero();
        if self.grid.periodic[0] {
            let w = (x / period).floor();
            wraps = w;
            x -= w * period;
        }
        let cell = (x / h).floor();
        let i = (cell.as_f64() as usize).min(n - 1);
        let frac = x / h - cell;
        let base = self.cum_len[i];
        let seg = self.cum_len[(i + 1).min(n)] - self.cum_len[i];
        base + seg * frac + wraps * self.total_len
    }

    /// Target distance d̂ between parameter points (geodesic on the curve).
    pub fn distance(&self, a: T, b: T) -> T {
        let d = (self.arc(b) - self.arc(a)).abs();
        if self.grid.periodic[0] {
            let l = self.total_len;
            let m = d - (d / l).floor() * l;
            m.min(l - m)
        } else {
            d
        }
    }
}

/// Grid map F: node ↦ target parameter coordinate, stored as displacement.
#[derive(Debug, Clone)]
pub struct MapField<T> {
    pub grid: ParameterGrid<T>,
    pub target: FrozenTarget<T>,
    pub displacement: Vec<T>,
    pub time: T,
    /// Pin the boundary band to the identity (Dirichlet sub-domain variant).
    pub dirichlet: bool,
}

impl<T: Real> MapField<T> {
    pub fn identity(grid: &ParameterGrid<T>, target: FrozenTarget<T>, dirichlet: bool) -> Self {
        assert_eq!(grid.dim, 1, "map flows are implemented for curves");
        Self {
            grid: grid.clone(),
            target,
            displacement: vec![T::zero(); grid.shape[0]],
            time: T::zero(),
            dirichlet,
        }
    }

    pub fn param(&self, i: usize) -> T {
        T::of_usize(i) * self.grid.spacing[0]
    }

    pub fn value(&self, i: usize) -> T {
        self.param(i) + self.displacement[i]
    }

    /// dF/dθ at node i (stencil on the displacement plus identity).
    pub fn derivative(&self, i: usize) -> T {
        let n = self.grid.shape[0];
        let get = |j: usize| [self.displacement[j]];
        T::one() + stencil_d1(n, self.grid.spacing[0], self.grid.periodic[0], i, &get)[0]
    }

    /// Advance by dt with the driving metric g(·, t): the tension field is
    /// g^{11}(F'' − Γ(t) F' + Γ̂(F) F'²).
    pub fn step(&mut self, driving: &InducedGeometry<T>, dt: T) {
        let n = self.grid.shape[0];
        let h = self.grid.spacing[0];
        let periodic = self.grid.periodic[0];
        let get = |j: usize| [self.displacement[j]];
        let mut delta = vec![T::zero(); n];
        for i in 0..n {
            if (self.dirichlet || self.grid.dirichlet_band > 0) && !periodic {
                let band = self.grid.dirichlet_band.max(if self.dirichlet { 1 } else { 0 });
                if i < band || i >= n - band {
                    continue;
                }
            }
            let du = stencil_d1(n, h, periodic, i, &get)[0];
            let ddu = stencil_d2(n, h, periodic, i, &get)[0];
            let fp = T::one() + du;
            let node = &driving.nodes[i];
            let gamma_t = node.gamma[0][0][0];
            let gamma_hat = self.target.gamma_hat_at_node(i, self.displacement[i]);
            let tension = node.ginv[0][0] * (ddu - gamma_t * fp + gamma_hat * fp * fp);
            delta[i] = dt * tension;
        }
        for i in 0..n {
            self.displacement[i] += delta[i];
        }
        self.time += dt;
    }
}

/// sup over nodes of the target distance between x and F(x).
pub fn displacement_monitor<T: Real>(map: &MapField<T>) -> T {
    let mut sup = T::zero();
    for i in 0..map.grid.shape[0] {
        sup = sup.max(map.target.distance_from_node(i, map.displacement[i]));
    }
    sup
}

#[derive(Debug, Clone, Copy)]
pub struct MetricEquivalence<T> {
    pub lambda_min: T,
    pub lambda_max: T,
}

impl<T: Real> MetricEquivalence<T> {
    /// Equivalence constant C² with C⁻²ĝ ≤ g ≤ C²ĝ.
    pub fn ratio(&self) -> T {
        self.lambda_max.max(T::one() / self.lambda_min)
    }
}

/// Generalized eigenvalue extremes of g(t) against F*ĝ over the grid.
pub fn metric_equivalence_monitor<T: Real>(
    map: &MapField<T>,
    driving: &InducedGeometry<T>,
) -> MetricEquivalence<T> {
    let mut lo = T::max_value();
    let mut hi = T::min_value();
    for i in 0..map.grid.shape[0] {
        let fp = map.derivative(i);
        let pullback = fp * fp * map.target.g_hat_at_node(i, map.displacement[i]);
        let lambda = driving.nodes[i].g[0][0] / pullback;
        lo = lo.min(lambda);
        hi = hi.max(lambda);
    }
    MetricEquivalence { lambda_min: lo, lambda_max: hi }
}

#[derive(Debug, Clone, Copy)]
pub struct DiffeoReport<T> {
    pub min_det: T,
    pub injective: bool,
}

/// Jacobian determinant extremes and a cell-occupancy injectivity check.
pub fn diffeo_monitor<T: Real>(map: &MapField<T>) -> DiffeoReport<T> {
    let n = map.grid.shape[0];
    let mut min_det = T::max_value();
    for i in 0..n {
        min_det = min_det.min(map.derivative(i));
    }
    let mut injective = min_det > T::zero();
    if injective && map.grid.periodic[0] {
        // Hash node images into parameter cells; a diffeomorphism puts only
        // circularly contiguous node ranges into each cell.
        let period = T::of_usize(n) * map.grid.spacing[0];
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let mut v = map.value(i);
            v = v - (v / period).floor() * period;
            let c = ((v / map.grid.spacing[0]).as_f64() as usize).min(n - 1);
            cells[c].push(i);
        }
        'outer: for members in &cells {
            if members.len() <= 1 {
                continue;
            }
            for w in members.windows(2) {
                let gap = (w[1] + n - w[0]) % n;
                if gap > 2 && (n - gap) > 2 {
                    injective = false;
                    break 'outer;
                }
            }
        }
    }
    DiffeoReport { min_det, injective }
}

/// Periodic Catmull-Rom interpolation of the node positions at parameter s.
fn interp_positions<T: Real>(
    grid: &ParameterGrid<T>,
    x: &[Vector<T>],
    adim: usize,
    s: T,
) -> Vector<T> {
    let n = grid.shape[0];
    let h = grid.spacing[0];
    let period = T::of_usize(n) * h;
    let mut t = s;
    if grid.periodic[0] {
        t = t - (t / period).floor() * period;
    }
    let cell = (t / h).floor();
    let i = (cell.as_f64() as usize).min(n - 1);
    let u = t / h - cell;
    let at = |k: isize| -> &Vector<T> {
        let mut j = i as isize + k;
        if grid.periodic[0] {
            j = j.rem_euclid(n as isize);
        } else {
            j = j.clamp(0, n as isize - 1);
        }
        &x[j as usize]
    };
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    let half = T::of(0.5);
    let mut out = linalg::zero_vec();
    for c in 0..adim {
        let a = p1[c];
        let b = half * (p2[c] - p0[c]);
        let cc = p0[c] - T::of(2.5) * p1[c] + T::of(2.0) * p2[c] - half * p3[c];
        let d = half * (p3[c] - p0[c]) + T::of(1.5) * (p1[c] - p2[c]);
        out[c] = a + u * (b + u * (cc + u * d));
    }
    out
}

/// Compose X ∘ F⁻¹ on the grid by inverse interpolation of the monotone map.
pub fn gauge_compose<T: Real>(
    flow_field: &ImmersionField<T>,
    map: &MapField<T>,
) -> Result<ImmersionField<T>, FlowError> {
    let report = diffeo_monitor(map);
    if !(report.min_det > T::zero()) || !report.injective {
        return Err(FlowError::GaugeNotInvertible);
    }
    let grid = &map.grid;
    let n = grid.shape[0];
    let h = grid.spacing[0];
    let period = T::of_usize(n) * h;
    let adim = flow_field.model.dim;

    // Knot values of the strictly increasing unwrapped map.
    let knots: Vec<T> = (0..=n)
        .map(|i| {
            if i < n {
                map.value(i)
            } else {
                map.value(0) + period
            }
        })
        .collect();

    let mut out = flow_field.clone();
    for j in 0..n {
        let mut y = map.param(j);
        // Bring y into [knots[0], knots[0] + period).
        while y < knots[0] {
            y += period;
        }
        while y >= knots[0] + period {
            y -= period;
        }
        // Locate the knot interval and invert linearly, then refine by
        // bisection against interpolated F (linear knots are exact here).
        let mut lo = 0usize;
        let mut hi = n;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if knots[mid] <= y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let seg = knots[lo + 1] - knots[lo];
        let frac = if seg > T::zero() { (y - knots[lo]) / seg } else { T::zero() };
        let x_param = (T::of_usize(lo) + frac) * h;
        out.x[j] = interp_positions(grid, &flow_field.x, adim, x_param);
    }
    Ok(out)
}

/// Residual of the gauge-fixed evolution on a composed field: compare the
/// discrete time derivative with g^{αβ}∇̂_α∇̂_β X̄ evaluated at the earlier
/// snapshot.
pub fn deturck_residual<T: Real>(
    prev: &ImmersionField<T>,
    next: &ImmersionField<T>,
    dt: T,
    background: &BackgroundConnection<T>,
) -> Result<T, FlowError> {
    let geom = induced_geometry(prev)?;
    let vel = flow_velocity(prev, &geom, Some(background));
    let adim = prev.model.dim;
    let mut worst = T::zero();
    for idx in 0..prev.x.len() {
        let mut err = T::zero();
        for c in 0..adim {
            let fd = (next.x[idx][c] - prev.x[idx][c]) / dt;
            err = err.max((fd - vel[idx][c]).abs());
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

/// A driving flow marched in lockstep with its coupled map.
#[derive(Debug, Clone)]
pub struct CoupledRun<T> {
    pub flow: FlowState<T>,
    pub map: MapField<T>,
}

impl<T: Real> CoupledRun<T> {
    /// Couple a fresh map (identity start) to the flow, freezing the target
    /// metric at the flow's current state.
    pub fn new(flow: FlowState<T>, dirichlet: bool) -> Self {
        let target = FrozenTarget::from_geometry(&flow.field.grid, &flow.geometry);
        let map = MapField::identity(&flow.field.grid, target, dirichlet);
        Self { flow, map }
    }

    /// One synchronized step of flow and map with shared dt.
    pub fn step(
        &mut self,
        cfg: &super::FlowConfig<T>,
    ) -> Result<super::StepReport<T>, FlowError> {
        let driving = self.flow.geometry.clone();
        let report = super::mcf_step(&mut self.flow, cfg)?;
        self.map.step(&driving, report.dt);
        Ok(report)
    }
}
