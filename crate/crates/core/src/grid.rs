//! Structured periodic parameter grids and finite-difference stencils.
//!
//! Axes are uniform. Periodic axes use centered second-order stencils with
//! wraparound; nonperiodic axes switch to one-sided second-order stencils at
//! the two boundary nodes. A nonperiodic axis may carry a Dirichlet band of
//! pinned nodes (used by open-curve fixtures), or be a free boundary with the
//! pole-regularization policy (latitude axis of closed surfaces).

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid<T> {
    pub dim: usize,
    pub shape: [usize; 2],
    pub periodic: [bool; 2],
    pub spacing: [T; 2],
    /// Pinned nodes at each end of every nonperiodic axis.
    pub dirichlet_band: usize,
    /// Latitude–longitude closed-surface policy: axis 0 is latitude
    /// (nonperiodic, cell-centered), axis 1 longitude (periodic); tensors at
    /// the two polar rows are averaged over longitude.
    pub pole_regularized: bool,
}

impl<T: Real> ParameterGrid<T> {
    pub fn line(n: usize, spacing: T, periodic: bool, dirichlet_band: usize) -> Self {
        assert!(n >= 8, "node counts must be at least 8");
        assert!(spacing > T::zero());
        Self {
            dim: 1,
            shape: [n, 1],
            periodic: [periodic, false],
            spacing: [spacing, T::one()],
            dirichlet_band,
            pole_regularized: false,
        }
    }

    pub fn closed_curve(n: usize, spacing: T) -> Self {
        Self::line(n, spacing, true, 0)
    }

    pub fn surface(
        shape: [usize; 2],
        spacing: [T; 2],
        periodic: [bool; 2],
        dirichlet_band: usize,
        pole_regularized: bool,
    ) -> Self {
        assert!(shape[0] >= 8 && shape[1] >= 8, "node counts must be at least 8");
        assert!(spacing[0] > T::zero() && spacing[1] > T::zero());
        if pole_regularized {
            assert!(!periodic[0] && periodic[1], "pole policy expects lat x lon axes");
        }
        Self { dim: 2, shape, periodic, spacing, dirichlet_band, pole_regularized }
    }

    pub fn node_count(&self) -> usize {
        self.shape[0] * self.shape[1]
    }

    #[inline]
    pub fn index(&self, i0: usize, i1: usize) -> usize {
        i0 * self.shape[1] + i1
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.shape[1], idx % self.shape[1])
    }

    /// Resolve an offset index along `axis`, wrapping periodic axes.
    /// Nonperiodic out-of-range offsets are a caller bug.
    #[inline]
    pub fn offset(&self, axis: usize, i: usize, by: isize) -> usize {
        let n = self.shape[axis] as isize;
        let j = i as isize + by;
        if self.periodic[axis] {
            (j.rem_euclid(n)) as usize
        } else {
            debug_assert!((0..n).contains(&j), "stencil reached outside a nonperiodic axis");
            j as usize
        }
    }

    /// True when the node is pinned by a Dirichlet band.
    pub fn is_pinned(&self, i0: usize, i1: usize) -> bool {
        if self.dirichlet_band == 0 {
            return false;
        }
        let b = self.dirichlet_band;
        let ax0 = !self.periodic[0] && (i0 < b || i0 >= self.shape[0] - b);
        let ax1 = self.dim == 2 && !self.periodic[1] && (i1 < b || i1 >= self.shape[1] - b);
        ax0 || ax1
    }

    pub fn is_polar_row(&self, i0: usize) -> bool {
        self.pole_regularized && (i0 == 0 || i0 == self.shape[0] - 1)
    }

    /// Cell volume ∏ spacings over the intrinsic axes.
    pub fn cell_measure(&self) -> T {
        if self.dim == 1 {
            self.spacing[0]
        } else {
            self.spacing[0] * self.spacing[1]
        }
    }

    pub fn max_spacing(&self) -> T {
        if self.dim == 1 {
            self.spacing[0]
        } else {
            self.spacing[0].max(self.spacing[1])
        }
    }
}

impl<T: Real> ParameterGrid<T> {
    /// Resolve a signed latitude index on a pole-regularized grid: indices
    /// beyond the polar rows reflect across the pole onto the antipodal
    /// longitude column. Returns (row, column, crossed-pole).
    pub fn resolve_lat(&self, j: isize, i1: usize) -> (usize, usize, bool) {
        let n0 = self.shape[0] as isize;
        if (0..n0).contains(&j) {
            (j as usize, i1, false)
        } else {
            let r = if j < 0 { -1 - j } else { 2 * n0 - 1 - j };
            let c = (i1 + self.shape[1] / 2) % self.shape[1];
            (r as usize, c, true)
        }
    }
}

/// Centered latitude derivative on a pole-regularized grid. `get(i0, i1)`
/// reads the field; `parity[k]` is the sign the k-th component picks up under
/// the cross-pole reflection (θ ↦ −θ, φ ↦ φ+π): −1 per θ tensor index.
#[inline]
pub fn pole_d1<T: Real, const K: usize>(
    grid: &ParameterGrid<T>,
    i0: usize,
    i1: usize,
    get: &impl Fn(usize, usize) -> [T; K],
    parity: &[i8; K],
) -> [T; K] {
    let h = grid.spacing[0];
    let fetch = |j: isize| -> [T; K] {
        let (r, c, flipped) = grid.resolve_lat(j, i1);
        let mut v = get(r, c);
        if flipped {
            for (x, s) in v.iter_mut().zip(parity) {
                if *s < 0 {
                    *x = -*x;
                }
            }
        }
        v
    };
    let fl = fetch(i0 as isize - 1);
    let fr = fetch(i0 as isize + 1);
    let mut out = [T::zero(); K];
    for c in 0..K {
        out[c] = (fr[c] - fl[c]) / (T::of(2.0) * h);
    }
    out
}

/// Centered latitude second derivative with the cross-pole reflection.
#[inline]
pub fn pole_d2<T: Real, const K: usize>(
    grid: &ParameterGrid<T>,
    i0: usize,
    i1: usize,
    get: &impl Fn(usize, usize) -> [T; K],
    parity: &[i8; K],
) -> [T; K] {
    let h = grid.spacing[0];
    let fetch = |j: isize| -> [T; K] {
        let (r, c, flipped) = grid.resolve_lat(j, i1);
        let mut v = get(r, c);
        if flipped {
            for (x, s) in v.iter_mut().zip(parity) {
                if *s < 0 {
                    *x = -*x;
                }
            }
        }
        v
    };
    let fl = fetch(i0 as isize - 1);
    let f0 = fetch(i0 as isize);
    let fr = fetch(i0 as isize + 1);
    let mut out = [T::zero(); K];
    for c in 0..K {
        out[c] = (fr[c] - T::of(2.0) * f0[c] + fl[c]) / (h * h);
    }
    out
}

/// First derivative along one axis; `get(j)` reads the field at index j on
/// that axis. Centered interior, one-sided second order at the ends.
#[inline]
pub fn stencil_d1<T: Real, const K: usize>(
    n: usize,
    h: T,
    periodic: bool,
    i: usize,
    get: &impl Fn(usize) -> [T; K],
) -> [T; K] {
    let two_h = T::of(2.0) * h;
    let mut out = [T::zero(); K];
    if periodic || (i > 0 && i + 1 < n) {
        let l = if periodic { (i + n - 1) % n } else { i - 1 };
        let r = if periodic { (i + 1) % n } else { i + 1 };
        let fl = get(l);
        let fr = get(r);
        for c in 0..K {
            out[c] = (fr[c] - fl[c]) / two_h;
        }
    } else if i == 0 {
        let f0 = get(0);
        let f1 = get(1);
        let f2 = get(2);
        for c in 0..K {
            out[c] = (-T::of(3.0) * f0[c] + T::of(4.0) * f1[c] - f2[c]) / two_h;
        }
    } else {
        let f0 = get(n - 1);
        let f1 = get(n - 2);
        let f2 = get(n - 3);
        for c in 0..K {
            out[c] = (T::of(3.0) * f0[c] - T::of(4.0) * f1[c] + f2[c]) / two_h;
        }
    }
    out
}

/// Second derivative along one axis, same boundary policy.
#[inline]
pub fn stencil_d2<T: Real, const K: usize>(
    n: usize,
    h: T,
    periodic: bool,
    i: usize,
    get: &impl Fn(usize) -> [T; K],
) -> [T; K] {
    let h2 = h * h;
    let mut out = [T::zero(); K];
    if periodic || (i > 0 && i + 1 < n) {
        let l = if periodic { (i + n - 1) % n } else { i - 1 };
        let r = if periodic { (i + 1) % n } else { i + 1 };
        let fl = get(l);
        let f0 = get(i);
        let fr = get(r);
        for c in 0..K {
            out[c] = (fr[c] - T::of(2.0) * f0[c] + fl[c]) / h2;
        }
    } else {
        let (a, b, cc, d) = if i == 0 { (0, 1, 2, 3) } else { (n - 1, n - 2, n - 3, n - 4) };
        let f0 = get(a);
        let f1 = get(b);
        let f2 = get(cc);
        let f3 = get(d);
        for c in 0..K {
            out[c] = (T::of(2.0) * f0[c] - T::of(5.0) * f1[c] + T::of(4.0) * f2[c]
                - f3[c])
                / h2;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64, n: usize, h: f64) -> Vec<[f64; 1]> {
        (0..n).map(|i| [f(i as f64 * h)]).collect()
    }

    #[test]
    fn periodic_stencils_are_second_order() {
        for &n in &[64usize, 128] {
            let h = std::f64::consts::TAU / n as f64;
            let data = sample(|x| x.sin(), n, h);
            let get = |j: usize| data[j];
            let mut err1: f64 = 0.0;
            let mut err2: f64 = 0.0;
            for i in 0..n {
                let x = i as f64 * h;
                let d1 = stencil_d1(n, h, true, i, &get)[0];
                let d2 = stencil_d2(n, h, true, i, &get)[0];
                err1 = err1.max((d1 - x.cos()).abs());
                err2 = err2.max((d2 + x.sin()).abs());
            }
            let bound = h * h; // sin-family truncation constant < 1
            assert!(err1 < bound, "d1 error {err1} vs {bound}");
            assert!(err2 < bound, "d2 error {err2} vs {bound}");
        }
    }

    #[test]
    fn one_sided_stencils_match_interior_order() {
        let n = 200;
        let h = 1.0 / (n - 1) as f64;
        let data = sample(|x| (2.0 * x).exp(), n, h);
        let get = |j: usize| data[j];
        for &i in &[0usize, 1, n - 2, n - 1] {
            let x = i as f64 * h;
            let d1 = stencil_d1(n, h, false, i, &get)[0];
            let d2 = stencil_d2(n, h, false, i, &get)[0];
            let f = (2.0 * x).exp();
            assert!((d1 - 2.0 * f).abs() < 60.0 * h * h, "d1 edge error");
            assert!((d2 - 4.0 * f).abs() < 600.0 * h * h, "d2 edge error");
        }
    }

    #[test]
    fn pinning_and_polar_rows() {
        let g = ParameterGrid::<f64>::line(32, 0.1, false, 3);
        assert!(g.is_pinned(0, 0) && g.is_pinned(2, 0) && g.is_pinned(31, 0));
        assert!(!g.is_pinned(3, 0) && !g.is_pinned(28, 0));

        let s = ParameterGrid::<f64>::surface(
            [16, 32],
            [0.1, 0.2],
            [false, true],
            0,
            true,
        );
        assert!(s.is_polar_row(0) && s.is_polar_row(15) && !s.is_polar_row(7));
    }
}
