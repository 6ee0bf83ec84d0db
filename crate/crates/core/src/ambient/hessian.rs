//! Covariant Hessian of the squared distance on the product manifold.
//!
//! For a minimizing geodesic γ from y₁ to y₂, d²/2 equals the energy of γ
//! parametrized on [0,1], and the second variation gives
//! `Hess(d²/2)(X, X) = I(J, J)` for the Jacobi field J with boundary values
//! (X₁, X₂). In constant curvature κ the index form is explicit per parallel
//! mode: with ω = √|κ|·d and frame coefficients (ξ, η) at the two ends,
//!
//!   tangential:  (η − ξ)²
//!   normal, κ>0: (ω/sin ω)·[(ξ² + η²) cos ω − 2ξη]
//!   normal, κ<0: (ω/sinh ω)·[(ξ² + η²) cosh ω − 2ξη]
//!
//! The flat limit of both normal lines is (η − ξ)², matching the Euclidean
//! block structure 2I / −2I of Hess(d²).

use super::{AmbientModel, AmbientPoint};
use crate::error::AmbientError;
use crate::linalg::{self, Vector, MAX_DIM};
use crate::scalar::Real;

/// The 2n̄ × 2n̄ covariant Hessian of ψ(y₁,y₂) = d²(y₁,y₂) in chart frames,
/// together with the adapted parallel frame used to assemble it.
#[derive(Debug, Clone)]
pub struct ProductHessian<T> {
    pub matrix: [[T; 2 * MAX_DIM]; 2 * MAX_DIM],
    pub dim: usize,
    pub y1: AmbientPoint<T>,
    pub y2: AmbientPoint<T>,
    pub dist: T,
    /// ḡ-orthonormal frame at y₁; entry 0 is the geodesic direction.
    pub frame1: [Vector<T>; MAX_DIM],
    /// Parallel transport of `frame1` to y₂.
    pub frame2: [Vector<T>; MAX_DIM],
}

impl<T: Real> ProductHessian<T> {
    /// Quadratic form `(∇²d²)(X, X)` for X = (x1, x2) in chart components.
    pub fn quadratic_form(&self, x1: &Vector<T>, x2: &Vector<T>) -> T {
        let n = self.dim;
        let mut xs = [T::zero(); 2 * MAX_DIM];
        xs[..n].copy_from_slice(&x1[..n]);
        xs[MAX_DIM..MAX_DIM + n].copy_from_slice(&x2[..n]);
        // Index layout: block a of size n at offset a*MAX_DIM.
        let mut s = T::zero();
        for (i, &xi) in xs.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            for (j, &xj) in xs.iter().enumerate() {
                if xj == T::zero() {
                    continue;
                }
                s += self.matrix[i][j] * xi * xj;
            }
        }
        s
    }

    /// `2|X₁ − P_γ⁻¹X₂|²`, the transported-difference term that dominates
    /// the quadratic form up to a curvature correction −C|X|²d².
    pub fn transported_difference_sq(
        &self,
        model: &AmbientModel<T>,
        x1: &Vector<T>,
        x2: &Vector<T>,
    ) -> T {
        let (xi, eta) = self.frame_components(model, x1, x2);
        let mut s = T::zero();
        for i in 0..self.dim {
            s += (xi[i] - eta[i]).sq();
        }
        T::of(2.0) * s
    }

    /// Frame coefficients (ξ, η) of chart vectors at the two base points.
    pub fn frame_components(
        &self,
        model: &AmbientModel<T>,
        x1: &Vector<T>,
        x2: &Vector<T>,
    ) -> (Vector<T>, Vector<T>) {
        let mut xi = linalg::zero_vec();
        let mut eta = linalg::zero_vec();
        for i in 0..self.dim {
            xi[i] = model.inner(&self.y1, x1, &self.frame1[i]);
            eta[i] = model.inner(&self.y2, x2, &self.frame2[i]);
        }
        (xi, eta)
    }
}

impl<T: Real> AmbientModel<T> {
    /// Covariant Hessian of d² on the product chart, assembled from the
    /// constant-curvature Jacobi-field index form.
    pub fn distance_sq_hessian(
        &self,
        y1: &AmbientPoint<T>,
        y2: &AmbientPoint<T>,
    ) -> Result<ProductHessian<T>, AmbientError> {
        let n = self.dim;
        let bounds = self.bounds_report();
        let dist = self.distance(y1, y2)?;
        let mut limit = bounds.injectivity.min_with(T::max_value()).half();
        if bounds.curvature_bound > T::zero() {
            limit = limit.min(T::one() / (T::of(4.0) * bounds.curvature_bound.sqrt()));
        }
        if dist > limit {
            return Err(AmbientError::PairTooFar {
                dist: dist.as_f64(),
                limit: limit.as_f64(),
            });
        }

        let coincident = dist <= T::of(1e-12);
        let (frame1, frame2) = if coincident {
            let f = self.orthonormal_frame(y1, None);
            (f, f)
        } else {
            let log = self.log_map(y1, y2)?;
            let f1 = self.orthonormal_frame(y1, Some(&log.tangent));
            let mut f2 = [linalg::zero_vec(); MAX_DIM];
            for (i, item) in f2.iter_mut().enumerate().take(n) {
                *item = self.transport_along(y1, &log.tangent, &frame_ref(&f1, i))?;
            }
            (f1, f2)
        };

        // Mode coefficients of Hess(d²) in the adapted frame.
        let kappa = self.sectional();
        let (c, s) = if coincident || kappa == T::zero() {
            (T::one(), T::one())
        } else if kappa > T::zero() {
            let w = kappa.sqrt() * dist;
            (w * w.cos() / w.sin(), w / w.sin())
        } else {
            let w = (-kappa).sqrt() * dist;
            (w * w.cosh() / w.sinh(), w / w.sinh())
        };

        let two = T::of(2.0);
        let mut mf = [[T::zero(); 2 * MAX_DIM]; 2 * MAX_DIM];
        for i in 0..n {
            let (ci, si) = if i == 0 && !coincident { (T::one(), T::one()) } else { (c, s) };
            mf[i][i] = two * ci;
            mf[MAX_DIM + i][MAX_DIM + i] = two * ci;
            mf[i][MAX_DIM + i] = -two * si;
            mf[MAX_DIM + i][i] = -two * si;
        }

        // Transform to chart components: ξ_i = ḡ(X, e_i) is the inverse of
        // the frame expansion, so H_chart = Bᵀ M B with B[i][a] = ḡ(e_i)_a.
        let g1 = self.metric_at(y1)?;
        let g2 = self.metric_at(y2)?;
        let mut b1 = [[T::zero(); MAX_DIM]; MAX_DIM]; // b1[i][a] = (ḡ e_i)_a at y1
        let mut b2 = [[T::zero(); MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for a in 0..n {
                let mut s1 = T::zero();
                let mut s2 = T::zero();
                for c2 in 0..n {
                    s1 += g1[a][c2] * frame1[i][c2];
                    s2 += g2[a][c2] * frame2[i][c2];
                }
                b1[i][a] = s1;
                b2[i][a] = s2;
            }
        }

        let mut matrix = [[T::zero(); 2 * MAX_DIM]; 2 * MAX_DIM];
        for a in 0..n {
            for b in 0..n {
                let mut h11 = T::zero();
                let mut h12 = T::zero();
                let mut h22 = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        h11 += b1[i][a] * mf[i][j] * b1[j][b];
                        h12 += b1[i][a] * mf[i][MAX_DIM + j] * b2[j][b];
                        h22 += b2[i][a] * mf[MAX_DIM + i][MAX_DIM + j] * b2[j][b];
                    }
                }
                matrix[a][b] = h11;
                matrix[a][MAX_DIM + b] = h12;
                matrix[MAX_DIM + b][a] = h12;
                matrix[MAX_DIM + a][MAX_DIM + b] = h22;
            }
        }

        Ok(ProductHessian { matrix, dim: n, y1: *y1, y2: *y2, dist, frame1, frame2 })
    }
}

fn frame_ref<T: Real>(f: &[Vector<T>; MAX_DIM], i: usize) -> Vector<T> {
    f[i]
}

impl<T: Real> AmbientModel<T> {
    /// Empirical constant C for the transported-difference lower bound:
    /// samples admissible pairs and tangent vectors, returning the smallest
    /// C with (∇²d²)(X,X) ≥ 2|X₁ − P_γ⁻¹X₂|² − C|X|²d² over the draw.
    /// Returns `None` if no admissible pair was found.
    pub fn fit_hessian_constant(
        &self,
        seed: u64,
        n_pairs: usize,
        n_vectors: usize,
        d_max: T,
    ) -> Option<T> {
        let mut rng = crate::rng::SplitMix64::new(seed);
        let n = self.dim;
        let mut worst = T::zero();
        let mut found = false;
        let mut attempts = 0;
        let mut pairs = 0;
        while pairs < n_pairs && attempts < n_pairs * 20 {
            attempts += 1;
            let mut y1 = linalg::zero_vec();
            let mut dir = linalg::zero_vec();
            for c in 0..n {
                y1[c] = T::of(rng.uniform(-0.6, 0.6));
                dir[c] = T::of(rng.uniform(-1.0, 1.0));
            }
            if self.check_point(&y1).is_err() {
                continue;
            }
            let speed = self.norm(&y1, &dir);
            if !(speed > T::zero()) {
                continue;
            }
            let d_target = T::of(rng.uniform(0.01, 1.0)) * d_max;
            let v = linalg::scale(&dir, d_target / speed, n);
            let Ok(exp) = self.exp_map(&y1, &v) else { continue };
            let Ok(h) = self.distance_sq_hessian(&y1, &exp.point) else { continue };
            pairs += 1;
            found = true;
            for _ in 0..n_vectors {
                let mut x1 = linalg::zero_vec();
                let mut x2 = linalg::zero_vec();
                for c in 0..n {
                    x1[c] = T::of(rng.uniform(-1.0, 1.0));
                    x2[c] = T::of(rng.uniform(-1.0, 1.0));
                }
                let q = h.quadratic_form(&x1, &x2);
                let lead = h.transported_difference_sq(self, &x1, &x2);
                let x_sq = self.inner(&y1, &x1, &x1) + self.inner(&exp.point, &x2, &x2);
                let denom = x_sq * h.dist * h.dist;
                if denom > T::of(1e-14) {
                    worst = worst.max((lead - q) / denom);
                }
            }
        }
        if found {
            Some(worst)
        } else {
            None
        }
    }
}
