//! Closed-form ambient Riemannian models.
//!
//! All four supported models are conformally flat in their chart,
//! `ḡ_αβ = e^{2μ(y)} δ_αβ`, which pins down the metric, Christoffel symbols
//! and curvature in a handful of lines:
//!
//! * `euclidean`   — identity chart, μ ≡ 0, curvature 0
//! * `flat-torus`  — identity chart with period lattice, μ ≡ 0, curvature 0
//! * `sphere`      — stereographic chart, μ = ln(2R²/(R²+|y|²)), curvature +1/R²
//! * `hyperbolic`  — Poincaré ball, μ = ln(2/√k) − ln(1−|y|²), curvature −k
//!
//! Constant curvature means every covariant derivative of the curvature
//! vanishes, so the standing bounds (c₀, i₀) come out in closed form.

mod geodesic;
mod hessian;

pub use geodesic::{ExpResult, LogResult, TransportResult};
pub use hessian::ProductHessian;

use crate::error::AmbientError;
use crate::linalg::{self, Matrix, Vector, MAX_DIM};
use crate::scalar::{Radius, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum AmbientKind<T> {
    Euclidean,
    Sphere { radius: T },
    Hyperbolic { curvature: T },
    FlatTorus { periods: Vector<T> },
}

/// A point expressed in the model's chart.
pub type AmbientPoint<T> = Vector<T>;

/// A tangent vector at a base point, chart components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientTangent<T> {
    pub base: AmbientPoint<T>,
    pub components: Vector<T>,
}

/// Closed-form bounds required by the flow and pseudolocality machinery.
#[derive(Debug, Clone, Copy)]
pub struct AmbientBounds<T> {
    /// `c₀` with `sup Σ_{i≤3} |∇̄ⁱR̄m| ≤ c₀²`.
    pub c0: T,
    /// Lower bound `i₀` for the injectivity radius.
    pub injectivity: Radius<T>,
    /// Sectional curvature magnitude bound `K₀`.
    pub curvature_bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientModel<T> {
    pub kind: AmbientKind<T>,
    pub dim: usize,
}

impl<T: Real> AmbientModel<T> {
    pub fn euclidean(dim: usize) -> Self {
        assert!((2..=MAX_DIM).contains(&dim));
        Self { kind: AmbientKind::Euclidean, dim }
    }

    pub fn sphere(dim: usize, radius: T) -> Self {
        assert!((2..=MAX_DIM).contains(&dim) && radius > T::zero());
        Self { kind: AmbientKind::Sphere { radius }, dim }
    }

    pub fn hyperbolic(dim: usize, curvature: T) -> Self {
        assert!((2..=MAX_DIM).contains(&dim) && curvature > T::zero());
        Self { kind: AmbientKind::Hyperbolic { curvature }, dim }
    }

    pub fn flat_torus(dim: usize, periods: Vector<T>) -> Self {
        assert!((2..=MAX_DIM).contains(&dim));
        for c in 0..dim {
            assert!(periods[c] > T::zero(), "torus periods must be positive");
        }
        Self { kind: AmbientKind::FlatTorus { periods }, dim }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AmbientKind::Euclidean => "euclidean",
            AmbientKind::Sphere { .. } => "sphere",
            AmbientKind::Hyperbolic { .. } => "hyperbolic",
            AmbientKind::FlatTorus { .. } => "flat-torus",
        }
    }

    /// Sectional curvature of the model (constant).
    pub fn sectional(&self) -> T {
        match self.kind {
            AmbientKind::Euclidean | AmbientKind::FlatTorus { .. } => T::zero(),
            AmbientKind::Sphere { radius } => T::one() / (radius * radius),
            AmbientKind::Hyperbolic { curvature } => -curvature,
        }
    }

    pub fn is_flat(&self) -> bool {
        self.sectional() == T::zero()
    }

    pub fn check_point(&self, p: &AmbientPoint<T>) -> Result<(), AmbientError> {
        for c in 0..self.dim {
            if !p[c].is_finite() {
                return Err(AmbientError::OutOfChart { model: self.name() });
            }
        }
        if let AmbientKind::Hyperbolic { .. } = self.kind {
            if linalg::dot(p, p, self.dim) >= T::one() {
                return Err(AmbientError::OutOfChart { model: self.name() });
            }
        }
        Ok(())
    }

    /// Conformal exponent μ(y) with `ḡ = e^{2μ} δ`.
    pub fn conformal_mu(&self, p: &AmbientPoint<T>) -> T {
        match self.kind {
            AmbientKind::Euclidean | AmbientKind::FlatTorus { .. } => T::zero(),
            AmbientKind::Sphere { radius } => {
                let r2 = radius * radius;
                (T::of(2.0) * r2 / (r2 + linalg::dot(p, p, self.dim))).ln()
            }
            AmbientKind::Hyperbolic { curvature } => {
                let one_m = T::one() - linalg::dot(p, p, self.dim);
                (T::of(2.0) / (curvature.sqrt() * one_m)).ln()
            }
        }
    }

    /// Chart gradient of μ.
    pub fn conformal_grad(&self, p: &AmbientPoint<T>) -> Vector<T> {
        let mut m = linalg::zero_vec();
        match self.kind {
            AmbientKind::Euclidean | AmbientKind::FlatTorus { .. } => {}
            AmbientKind::Sphere { radius } => {
                let denom = radius * radius + linalg::dot(p, p, self.dim);
                for c in 0..self.dim {
                    m[c] = -T::of(2.0) * p[c] / denom;
                }
            }
            AmbientKind::Hyperbolic { .. } => {
                let denom = T::one() - linalg::dot(p, p, self.dim);
                for c in 0..self.dim {
                    m[c] = T::of(2.0) * p[c] / denom;
                }
            }
        }
        m
    }

    /// Metric matrix `ḡ_αβ(p)`.
    pub fn metric_at(&self, p: &AmbientPoint<T>) -> Result<Matrix<T>, AmbientError> {
        self.check_point(p)?;
        let lam = (T::of(2.0) * self.conformal_mu(p)).exp();
        let mut g = linalg::zero_mat();
        for c in 0..self.dim {
            g[c][c] = lam;
        }
        Ok(g)
    }

    /// Inverse metric `ḡ^{αβ}(p)`.
    pub fn metric_inv_at(&self, p: &AmbientPoint<T>) -> Result<Matrix<T>, AmbientError> {
        self.check_point(p)?;
        let lam = (T::of(2.0) * self.conformal_mu(p)).exp();
        let mut g = linalg::zero_mat();
        for c in 0..self.dim {
            g[c][c] = T::one() / lam;
        }
        Ok(g)
    }

    /// Metric inner product of chart vectors at `p`.
    pub fn inner(&self, p: &AmbientPoint<T>, a: &Vector<T>, b: &Vector<T>) -> T {
        let lam = (T::of(2.0) * self.conformal_mu(p)).exp();
        lam * linalg::dot(a, b, self.dim)
    }

    pub fn norm(&self, p: &AmbientPoint<T>, a: &Vector<T>) -> T {
        self.inner(p, a, a).sqrt()
    }

    /// Christoffel symbols `Γ̄^γ_{αβ}(p)`, indexed `[γ][α][β]`.
    pub fn christoffel_at(
        &self,
        p: &AmbientPoint<T>,
    ) -> Result<[Matrix<T>; MAX_DIM], AmbientError> {
        self.check_point(p)?;
        let m = self.conformal_grad(p);
        let mut gamma = [linalg::zero_mat(); MAX_DIM];
        for c in 0..self.dim {
            for a in 0..self.dim {
                for b in 0..self.dim {
                    let mut v = T::zero();
                    if c == a {
                        v += m[b];
                    }
                    if c == b {
                        v += m[a];
                    }
                    if a == b {
                        v -= m[c];
                    }
                    gamma[c][a][b] = v;
                }
            }
        }
        Ok(gamma)
    }

    /// `Γ̄(p)(u, v)^γ` contracted against two chart vectors.
    pub fn christoffel_contract(
        &self,
        p: &AmbientPoint<T>,
        u: &Vector<T>,
        v: &Vector<T>,
    ) -> Vector<T> {
        let m = self.conformal_grad(p);
        let mu = linalg::dot(&m, u, self.dim);
        let mv = linalg::dot(&m, v, self.dim);
        let uv = linalg::dot(u, v, self.dim);
        let mut out = linalg::zero_vec();
        for c in 0..self.dim {
            out[c] = u[c] * mv + v[c] * mu - uv * m[c];
        }
        out
    }

    /// Curvature tensor `R̄_{αβγδ}` or its covariant derivative of the given
    /// order. Orders ≥ 1 vanish identically on every supported model; the
    /// returned rank-4 block is the order-0 tensor or zero.
    pub fn riemann_at(
        &self,
        p: &AmbientPoint<T>,
        order: usize,
    ) -> Result<Vec<T>, AmbientError> {
        if order > 3 {
            return Err(AmbientError::UnsupportedOrder { order });
        }
        self.check_point(p)?;
        let n = self.dim;
        let mut out = vec![T::zero(); n * n * n * n];
        if order > 0 {
            return Ok(out);
        }
        let kappa = self.sectional();
        if kappa == T::zero() {
            return Ok(out);
        }
        let g = self.metric_at(p)?;
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out[idx(a, b, c, d)] =
                            kappa * (g[a][c] * g[b][d] - g[a][d] * g[b][c]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sectional-curvature evaluation `R̄(u, v, u, v)` at `p`.
    pub fn riemann_quad(&self, p: &AmbientPoint<T>, u: &Vector<T>, v: &Vector<T>) -> T {
        let kappa = self.sectional();
        if kappa == T::zero() {
            return T::zero();
        }
        let uu = self.inner(p, u, u);
        let vv = self.inner(p, v, v);
        let uv = self.inner(p, u, v);
        kappa * (uu * vv - uv * uv)
    }

    /// Frobenius norm of the curvature tensor (constant over the model).
    pub fn riemann_norm(&self) -> T {
        let kappa = self.sectional();
        let n = T::of_usize(self.dim);
        (kappa * kappa * T::of(2.0) * n * (n - T::one())).sqrt()
    }

    /// Closed-form standing bounds (c₀, i₀, K₀).
    pub fn bounds_report(&self) -> AmbientBounds<T> {
        let curvature_bound = self.sectional().abs();
        let c0 = self.riemann_norm().sqrt();
        let injectivity = match self.kind {
            AmbientKind::Euclidean | AmbientKind::Hyperbolic { .. } => Radius::Infinite,
            AmbientKind::Sphere { radius } => Radius::Finite(T::PI() * radius),
            AmbientKind::FlatTorus { periods } => {
                let mut shortest = periods[0];
                for c in 1..self.dim {
                    shortest = shortest.min(periods[c]);
                }
                Radius::Finite(shortest.half())
            }
        };
        AmbientBounds { c0, injectivity, curvature_bound }
    }

    /// A ḡ-orthonormal frame at `p` whose first vector is `first` (normalized);
    /// remaining directions come from Gram–Schmidt over the chart axes.
    pub fn orthonormal_frame(
        &self,
        p: &AmbientPoint<T>,
        first: Option<&Vector<T>>,
    ) -> [Vector<T>; MAX_DIM] {
        let mut frame = [linalg::zero_vec(); MAX_DIM];
        let mut count = 0;
        if let Some(f) = first {
            let n = self.norm(p, f);
            frame[0] = linalg::scale(f, T::one() / n, self.dim);
            count = 1;
        }
        let mut axis = 0;
        while count < self.dim && axis < self.dim {
            let mut cand = linalg::zero_vec();
            cand[axis] = T::one();
            for k in 0..count {
                let proj = self.inner(p, &cand, &frame[k]);
                linalg::axpy(&mut cand, -proj, &frame[k], self.dim);
            }
            let n = self.norm(p, &cand);
            if n > T::of(1e-8) {
                frame[count] = linalg::scale(&cand, T::one() / n, self.dim);
                count += 1;
            }
            axis += 1;
        }
        assert_eq!(count, self.dim, "failed to complete orthonormal frame");
        frame
    }

    /// Wrap a chart displacement to the nearest torus representative.
    pub(crate) fn wrap_displacement(&self, delta: &Vector<T>) -> Vector<T> {
        match self.kind {
            AmbientKind::FlatTorus { periods } => {
                let mut out = linalg::zero_vec();
                for c in 0..self.dim {
                    let l = periods[c];
                    out[c] = delta[c] - (delta[c] / l).round() * l;
                }
                out
            }
            _ => *delta,
        }
    }

    /// Chart coordinates of the antipode (sphere only).
    pub(crate) fn sphere_antipode(&self, p: &AmbientPoint<T>) -> Option<AmbientPoint<T>> {
        match self.kind {
            AmbientKind::Sphere { radius } => {
                let r2 = radius * radius;
                let n2 = linalg::dot(p, p, self.dim);
                if n2 <= T::of(1e-30) {
                    None // antipode of the chart origin is the projection pole
                } else {
                    Some(linalg::scale(p, -r2 / n2, self.dim))
                }
            }
            _ => None,
        }
    }
}
