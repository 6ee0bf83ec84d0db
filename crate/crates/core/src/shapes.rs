//! Builtin initial immersions for the laboratory fixtures.

use crate::ambient::AmbientModel;
use crate::grid::ParameterGrid;
use crate::immersion::{induced_geometry, ImmersionField};
use crate::linalg::{self, Vector};
use crate::scalar::Real;

/// Circle of given radius about `center` in Euclidean R², uniform angle grid.
pub fn circle<T: Real>(radius: T, center: [T; 2], n: usize) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(2);
    let h = T::TAU() / T::of_usize(n);
    let grid = ParameterGrid::closed_curve(n, h);
    let x = (0..n)
        .map(|i| {
            let th = T::of_usize(i) * h;
            let mut p = linalg::zero_vec();
            p[0] = center[0] + radius * th.cos();
            p[1] = center[1] + radius * th.sin();
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

/// Axis-aligned ellipse in Euclidean R².
pub fn ellipse<T: Real>(a: T, b: T, n: usize) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(2);
    let h = T::TAU() / T::of_usize(n);
    let grid = ParameterGrid::closed_curve(n, h);
    let x = (0..n)
        .map(|i| {
            let th = T::of_usize(i) * h;
            let mut p = linalg::zero_vec();
            p[0] = a * th.cos();
            p[1] = b * th.sin();
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

/// Open segment [−half_length, half_length] on the x-axis with an optional
/// Gaussian bump `y = height·exp(−(x−center)²/(2 width²))`, pinned ends.
pub fn line_with_bump<T: Real>(
    half_length: T,
    n: usize,
    bump_center: T,
    bump_height: T,
    bump_width: T,
    band: usize,
) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(2);
    let h = T::of(2.0) * half_length / T::of_usize(n - 1);
    let grid = ParameterGrid::line(n, h, false, band);
    let x = (0..n)
        .map(|i| {
            let s = -half_length + T::of_usize(i) * h;
            let mut p = linalg::zero_vec();
            p[0] = s;
            if bump_height != T::zero() {
                let arg = (s - bump_center) / bump_width;
                p[1] = bump_height * (-arg.sq().half()).exp();
            }
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

/// Graph of `y = amp·sin(2π freq x)` over [−half_length, half_length].
pub fn graph_of_function<T: Real>(
    amp: T,
    freq: T,
    half_length: T,
    n: usize,
    band: usize,
) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(2);
    let h = T::of(2.0) * half_length / T::of_usize(n - 1);
    let grid = ParameterGrid::line(n, h, false, band);
    let x = (0..n)
        .map(|i| {
            let s = -half_length + T::of_usize(i) * h;
            let mut p = linalg::zero_vec();
            p[0] = s;
            p[1] = amp * (T::TAU() * freq * s).sin();
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

/// Round sphere of given radius in Euclidean R³ on a pole-regularized
/// latitude–longitude grid: `n_lat` cell-centered latitude rows, `n_lon`
/// periodic longitude columns.
pub fn sphere<T: Real>(radius: T, n_lat: usize, n_lon: usize) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(3);
    let h_lat = T::PI() / T::of_usize(n_lat);
    let h_lon = T::TAU() / T::of_usize(n_lon);
    let grid =
        ParameterGrid::surface([n_lat, n_lon], [h_lat, h_lon], [false, true], 0, true);
    let mut x = Vec::with_capacity(n_lat * n_lon);
    for i0 in 0..n_lat {
        let theta = (T::of_usize(i0) + T::of(0.5)) * h_lat;
        for i1 in 0..n_lon {
            let phi = T::of_usize(i1) * h_lon;
            let mut p = linalg::zero_vec();
            p[0] = radius * theta.sin() * phi.cos();
            p[1] = radius * theta.sin() * phi.sin();
            p[2] = radius * theta.cos();
            x.push(p);
        }
    }
    ImmersionField::new(grid, model, x)
}

/// Product-of-circles flat torus (r1, r2) in Euclidean R⁴, doubly periodic.
pub fn clifford_torus<T: Real>(r1: T, r2: T, n0: usize, n1: usize) -> ImmersionField<T> {
    let model = AmbientModel::euclidean(4);
    let h0 = T::TAU() / T::of_usize(n0);
    let h1 = T::TAU() / T::of_usize(n1);
    let grid = ParameterGrid::surface([n0, n1], [h0, h1], [true, true], 0, false);
    let mut x = Vec::with_capacity(n0 * n1);
    for i0 in 0..n0 {
        let u = T::of_usize(i0) * h0;
        for i1 in 0..n1 {
            let v = T::of_usize(i1) * h1;
            x.push([r1 * u.cos(), r1 * u.sin(), r2 * v.cos(), r2 * v.sin()]);
        }
    }
    ImmersionField::new(grid, model, x)
}

/// Equator of the round sphere S²(R) in the stereographic chart: the chart
/// circle of radius R, a totally geodesic fixture.
pub fn great_circle<T: Real>(radius: T, n: usize) -> ImmersionField<T> {
    let model = AmbientModel::sphere(2, radius);
    let h = T::TAU() / T::of_usize(n);
    let grid = ParameterGrid::closed_curve(n, h);
    let x = (0..n)
        .map(|i| {
            let th = T::of_usize(i) * h;
            let mut p = linalg::zero_vec();
            p[0] = radius * th.cos();
            p[1] = radius * th.sin();
            p
        })
        .collect();
    ImmersionField::new(grid, model, x)
}

/// Displace every node along the discrete normal direction by
/// `amplitude(node)`. Curves in 2-dimensional ambients only: the normal is
/// the ḡ-orthogonal complement of the tangent stencil.
pub fn apply_normal_perturbation<T: Real>(
    field: &mut ImmersionField<T>,
    amplitude: impl Fn(usize) -> T,
) {
    assert_eq!(field.grid.dim, 1, "normal perturbations are for curves");
    assert_eq!(field.model.dim, 2, "normal perturbations need a 2-d ambient");
    let geom = induced_geometry(field).expect("perturbation of a degenerate immersion");
    for idx in 0..field.node_count() {
        let t = geom.nodes[idx].dx[0];
        let p = field.x[idx];
        let mut nu: Vector<T> = linalg::zero_vec();
        nu[0] = -t[1];
        nu[1] = t[0];
        let norm = field.model.norm(&p, &nu);
        if norm <= T::zero() {
            continue;
        }
        let a = amplitude(idx) / norm;
        linalg::axpy(&mut field.x[idx], a, &nu, 2);
    }
}
