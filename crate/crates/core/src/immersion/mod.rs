//! Discrete immersed submanifolds and their induced geometry.

mod curvature;
mod graph;

pub use curvature::{gauss_intrinsic_curvature, CurvatureReport};
pub use graph::{
    graph_in_frozen_frame, lipschitz_graph_check, local_graph_extract, FrameGraphSample,
    GraphPatch, GraphSample, LipschitzReport,
};
pub(crate) use graph::adapted_frame;

use crate::ambient::AmbientModel;
use crate::error::GeometryError;
use crate::grid::{pole_d1, pole_d2, stencil_d1, stencil_d2, ParameterGrid};
use crate::linalg::{self, Sym2, Vector};
use crate::scalar::{Radius, Real};

/// Grid immersion: per-node ambient chart coordinates.
#[derive(Debug, Clone)]
pub struct ImmersionField<T> {
    pub grid: ParameterGrid<T>,
    pub model: AmbientModel<T>,
    pub x: Vec<Vector<T>>,
}

impl<T: Real> ImmersionField<T> {
    pub fn new(grid: ParameterGrid<T>, model: AmbientModel<T>, x: Vec<Vector<T>>) -> Self {
        assert_eq!(grid.node_count(), x.len());
        Self { grid, model, x }
    }

    pub fn node_count(&self) -> usize {
        self.x.len()
    }
}

/// Everything the flow and the audits need at one node.
#[derive(Debug, Clone, Copy)]
pub struct NodeGeometry<T> {
    /// ∂_i X^α
    pub dx: [Vector<T>; 2],
    pub g: Sym2<T>,
    pub ginv: Sym2<T>,
    pub det_g: T,
    /// Γ^k_{ij}, indexed `[k][i][j]`
    pub gamma: [[[T; 2]; 2]; 2],
    /// h^α_{ij}, indexed `[i][j]`
    pub h: [[Vector<T>; 2]; 2],
    /// H^α = g^{ij} h^α_{ij}
    pub mean_curvature: Vector<T>,
    /// |A|² in the frame-invariant norm g^{ik}g^{jl}ḡ_{αβ}h^α_{ij}h^β_{kl}
    pub a_sq: T,
}

#[derive(Debug, Clone)]
pub struct InducedGeometry<T> {
    pub dim: usize,
    pub ambient_dim: usize,
    pub nodes: Vec<NodeGeometry<T>>,
    pub sup_a: T,
    pub sup_h: T,
    /// ∫ √det g over the grid (node quadrature).
    pub volume: T,
}

impl<T: Real> InducedGeometry<T> {
    pub fn metric_snapshot(&self) -> Vec<Sym2<T>> {
        self.nodes.iter().map(|n| n.g).collect()
    }
}

/// Scratch from the first pass: ambient-corrected second derivatives.
struct FirstPass<T> {
    dx: Vec<[Vector<T>; 2]>,
    w: Vec<[[Vector<T>; 2]; 2]>,
    g: Vec<Sym2<T>>,
}

fn first_pass<T: Real>(field: &ImmersionField<T>) -> Result<FirstPass<T>, GeometryError> {
    let grid = &field.grid;
    let model = &field.model;
    let dim = grid.dim;
    let n_nodes = grid.node_count();
    let mut dx = vec![[linalg::zero_vec(); 2]; n_nodes];
    let mut w = vec![[[linalg::zero_vec(); 2]; 2]; n_nodes];
    let mut g = vec![linalg::sym2_zero(); n_nodes];

    let ambient_parity = [1i8; 4]; // chart components are scalars under the flip
    for idx in 0..n_nodes {
        let (i0, i1) = grid.coords(idx);
        let get0 = |j: usize| field.x[grid.index(j, i1)];
        let get1 = |j: usize| field.x[grid.index(i0, j)];
        let at = |r: usize, c: usize| field.x[grid.index(r, c)];
        let mut d = [linalg::zero_vec(); 2];
        d[0] = if grid.pole_regularized {
            pole_d1(grid, i0, i1, &at, &ambient_parity)
        } else {
            stencil_d1(grid.shape[0], grid.spacing[0], grid.periodic[0], i0, &get0)
        };
        if dim == 2 {
            d[1] = stencil_d1(grid.shape[1], grid.spacing[1], grid.periodic[1], i1, &get1);
        }

        let mut dd = [[linalg::zero_vec(); 2]; 2];
        dd[0][0] = if grid.pole_regularized {
            pole_d2(grid, i0, i1, &at, &ambient_parity)
        } else {
            stencil_d2(grid.shape[0], grid.spacing[0], grid.periodic[0], i0, &get0)
        };
        if dim == 2 {
            dd[1][1] = stencil_d2(grid.shape[1], grid.spacing[1], grid.periodic[1], i1, &get1);
            // Mixed derivative: latitude stencil applied to the longitude
            // derivative field (which is flip-even).
            let dphi = |r: usize, c: usize| {
                let get1j = |k: usize| field.x[grid.index(r, k)];
                stencil_d1(grid.shape[1], grid.spacing[1], grid.periodic[1], c, &get1j)
            };
            let mixed = if grid.pole_regularized {
                pole_d1(grid, i0, i1, &dphi, &ambient_parity)
            } else {
                let cross = |j: usize| dphi(j, i1);
                stencil_d1(grid.shape[0], grid.spacing[0], grid.periodic[0], i0, &cross)
            };
            dd[0][1] = mixed;
            dd[1][0] = mixed;
        }

        let p = &field.x[idx];
        model.check_point(p).map_err(GeometryError::Ambient)?;
        let mut gij = linalg::sym2_zero();
        for i in 0..dim {
            for j in i..dim {
                let v = model.inner(p, &d[i], &d[j]);
                gij[i][j] = v;
                gij[j][i] = v;
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let corr = model.christoffel_contract(p, &d[i], &d[j]);
                w[idx][i][j] = linalg::add(&dd[i][j], &corr, model.dim);
            }
        }
        dx[idx] = d;
        g[idx] = gij;
    }
    Ok(FirstPass { dx, w, g })
}

/// Average a per-node value over the longitude direction at the polar rows.
fn average_polar_rows<T: Real, V, F, S>(grid: &ParameterGrid<T>, data: &mut [V], to: F, store: S)
where
    V: Copy,
    F: Fn(&V) -> Vec<T>,
    S: Fn(&mut V, &[T]),
{
    if !grid.pole_regularized {
        return;
    }
    let n1 = grid.shape[1];
    for &i0 in &[0usize, grid.shape[0] - 1] {
        let mut acc: Option<Vec<T>> = None;
        for i1 in 0..n1 {
            let vals = to(&data[grid.index(i0, i1)]);
            match &mut acc {
                None => acc = Some(vals),
                Some(a) => {
                    for (s, v) in a.iter_mut().zip(vals) {
                        *s += v;
                    }
                }
            }
        }
        let mut mean = acc.unwrap();
        let inv = T::one() / T::of_usize(n1);
        for v in mean.iter_mut() {
            *v *= inv;
        }
        for i1 in 0..n1 {
            store(&mut data[grid.index(i0, i1)], &mean);
        }
    }
}

/// Full induced geometry of a discrete immersion.
pub fn induced_geometry<T: Real>(
    field: &ImmersionField<T>,
) -> Result<InducedGeometry<T>, GeometryError> {
    let grid = &field.grid;
    let model = &field.model;
    let dim = grid.dim;
    let adim = model.dim;
    let n_nodes = grid.node_count();

    let mut fp = first_pass(field)?;

    // Pole policy: metric components at the polar rows are longitude means.
    average_polar_rows(
        grid,
        &mut fp.g,
        |g| vec![g[0][0], g[0][1], g[1][1]],
        |g, m| {
            g[0][0] = m[0];
            g[0][1] = m[1];
            g[1][0] = m[1];
            g[1][1] = m[2];
        },
    );

    // Second pass: Christoffels from metric derivatives.
    let mut invs = Vec::with_capacity(n_nodes);
    for (idx, g) in fp.g.iter().enumerate() {
        let pair = linalg::sym2_inv(g, dim).ok_or_else(|| GeometryError::DegenerateMetric {
            node: idx,
            det: linalg::sym2_det(g, dim).as_f64(),
        })?;
        invs.push(pair);
    }
    let packed: Vec<[T; 3]> = fp.g.iter().map(|g| [g[0][0], g[0][1], g[1][1]]).collect();
    // Under the cross-pole reflection g_θφ flips sign (one θ index).
    let metric_parity = [1i8, -1, 1];
    let mut gammas = vec![[[[T::zero(); 2]; 2]; 2]; n_nodes];
    for idx in 0..n_nodes {
        let (i0, i1) = grid.coords(idx);
        let get0 = |j: usize| packed[grid.index(j, i1)];
        let get1 = |j: usize| packed[grid.index(i0, j)];
        let at = |r: usize, c: usize| packed[grid.index(r, c)];
        let mut dg = [[T::zero(); 3]; 2];
        dg[0] = if grid.pole_regularized {
            pole_d1(grid, i0, i1, &at, &metric_parity)
        } else {
            stencil_d1(grid.shape[0], grid.spacing[0], grid.periodic[0], i0, &get0)
        };
        if dim == 2 {
            dg[1] = stencil_d1(grid.shape[1], grid.spacing[1], grid.periodic[1], i1, &get1);
        }
        let comp = |k: usize, i: usize, j: usize| -> T {
            // packed order: g00, g01, g11
            let slot = i + j; // 0,1,2 for (0,0),(0,1)/(1,0),(1,1)
            dg[k][slot]
        };
        let ginv = invs[idx].0;
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = T::zero();
                    for l in 0..dim {
                        s += ginv[k][l] * (comp(i, j, l) + comp(j, i, l) - comp(l, i, j));
                    }
                    gammas[idx][k][i][j] = s.half();
                }
            }
        }
    }

    average_polar_rows(
        grid,
        &mut gammas,
        |g| {
            let mut v = Vec::with_capacity(8);
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        v.push(g[k][i][j]);
                    }
                }
            }
            v
        },
        |g, m| {
            let mut c = 0;
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        g[k][i][j] = m[c];
                        c += 1;
                    }
                }
            }
        },
    );

    // Third pass: second fundamental form and scalars.
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut sup_a = T::zero();
    let mut sup_h = T::zero();
    let mut volume = T::zero();
    let measure = grid.cell_measure();
    for idx in 0..n_nodes {
        let (ginv, det) = invs[idx];
        let p = &field.x[idx];
        let mut h = [[linalg::zero_vec(); 2]; 2];
        for i in 0..dim {
            for j in 0..dim {
                let mut v = fp.w[idx][i][j];
                for k in 0..dim {
                    linalg::axpy(&mut v, -gammas[idx][k][i][j], &fp.dx[idx][k], adim);
                }
                h[i][j] = v;
            }
        }
        let mut mean = linalg::zero_vec();
        for i in 0..dim {
            for j in 0..dim {
                linalg::axpy(&mut mean, ginv[i][j], &h[i][j], adim);
            }
        }
        let mut a_sq = T::zero();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        a_sq += ginv[i][k] * ginv[j][l] * model.inner(p, &h[i][j], &h[k][l]);
                    }
                }
            }
        }
        let h_norm = model.norm(p, &mean);
        let node = NodeGeometry {
            dx: fp.dx[idx],
            g: fp.g[idx],
            ginv,
            det_g: det,
            gamma: gammas[idx],
            h,
            mean_curvature: mean,
            a_sq,
        };
        sup_a = sup_a.max(a_sq.max(T::zero()).sqrt());
        sup_h = sup_h.max(h_norm);
        volume += det.sqrt() * measure;
        nodes.push(node);
    }

    // Scalar invariants at the polar rows are longitude means as well.
    let mut geom = InducedGeometry { dim, ambient_dim: adim, nodes, sup_a, sup_h, volume };
    if grid.pole_regularized {
        let nodes = &mut geom.nodes;
        let n1 = grid.shape[1];
        for &i0 in &[0usize, grid.shape[0] - 1] {
            let mut mean_a = T::zero();
            for i1 in 0..n1 {
                mean_a += nodes[grid.index(i0, i1)].a_sq;
            }
            mean_a /= T::of_usize(n1);
            for i1 in 0..n1 {
                nodes[grid.index(i0, i1)].a_sq = mean_a;
            }
        }
    }
    Ok(geom)
}

/// Injectivity-radius lower bound for the immersed manifold:
/// `min{ π/√(C̄ + 2C²), C̄₁ }` with `C = sup |A|` and
/// `C̄₁ = min{ δ̄, 1/(4√(C̄+1)), 1/(8(C+1)) }`.
pub fn injectivity_lower_bound<T: Real>(
    geom: &InducedGeometry<T>,
    ambient_curvature_bound: T,
    ambient_injectivity: Radius<T>,
) -> T {
    let c = geom.sup_a;
    let c_bar = ambient_curvature_bound;
    let sec_bound = c_bar + T::of(2.0) * c * c;
    let conjugate = if sec_bound > T::zero() {
        T::PI() / sec_bound.sqrt()
    } else {
        T::max_value()
    };
    let hessian_radius = ambient_injectivity
        .min_with(T::one() / (T::of(4.0) * (c_bar + T::one()).sqrt()))
        .min(T::one() / (T::of(8.0) * (c + T::one())));
    conjugate.min(hessian_radius)
}
