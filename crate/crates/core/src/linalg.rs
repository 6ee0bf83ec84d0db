//! Small fixed-size linear algebra used by the tensor kernels.
//!
//! Ambient dimensions are at most [`MAX_DIM`]; intrinsic dimensions at most 2.
//! Vectors and matrices are plain fixed arrays with an explicit runtime
//! dimension, so the hot per-node loops never allocate.

use crate::scalar::Real;

/// Largest supported ambient chart dimension.
pub const MAX_DIM: usize = 4;

pub type Vector<T> = [T; MAX_DIM];
pub type Matrix<T> = [[T; MAX_DIM]; MAX_DIM];

pub fn zero_vec<T: Real>() -> Vector<T> {
    [T::zero(); MAX_DIM]
}

pub fn zero_mat<T: Real>() -> Matrix<T> {
    [[T::zero(); MAX_DIM]; MAX_DIM]
}

pub fn dot<T: Real>(a: &Vector<T>, b: &Vector<T>, dim: usize) -> T {
    let mut s = T::zero();
    for c in 0..dim {
        s += a[c] * b[c];
    }
    s
}

pub fn axpy<T: Real>(y: &mut Vector<T>, a: T, x: &Vector<T>, dim: usize) {
    for c in 0..dim {
        y[c] += a * x[c];
    }
}

pub fn scale<T: Real>(v: &Vector<T>, a: T, dim: usize) -> Vector<T> {
    let mut out = zero_vec();
    for c in 0..dim {
        out[c] = a * v[c];
    }
    out
}

pub fn sub<T: Real>(a: &Vector<T>, b: &Vector<T>, dim: usize) -> Vector<T> {
    let mut out = zero_vec();
    for c in 0..dim {
        out[c] = a[c] - b[c];
    }
    out
}

pub fn add<T: Real>(a: &Vector<T>, b: &Vector<T>, dim: usize) -> Vector<T> {
    let mut out = zero_vec();
    for c in 0..dim {
        out[c] = a[c] + b[c];
    }
    out
}

pub fn norm2<T: Real>(a: &Vector<T>, dim: usize) -> T {
    dot(a, a, dim).sqrt()
}

/// Inner product with a metric matrix: `aᵀ G b`.
pub fn metric_dot<T: Real>(g: &Matrix<T>, a: &Vector<T>, b: &Vector<T>, dim: usize) -> T {
    let mut s = T::zero();
    for p in 0..dim {
        for q in 0..dim {
            s += g[p][q] * a[p] * b[q];
        }
    }
    s
}

/// Solve the dense `dim × dim` system `A x = b` by Gaussian elimination with
/// partial pivoting. Returns `None` if the pivot collapses.
pub fn solve<T: Real>(a: &Matrix<T>, b: &Vector<T>, dim: usize) -> Option<Vector<T>> {
    let mut m = *a;
    let mut rhs = *b;
    for col in 0..dim {
        let mut piv = col;
        for r in col + 1..dim {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() <= T::zero() {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for r in col + 1..dim {
            let f = m[r][col] / d;
            if f == T::zero() {
                continue;
            }
            for c in col..dim {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
            let v = rhs[col];
            rhs[r] -= f * v;
        }
    }
    let mut x = zero_vec();
    for row in (0..dim).rev() {
        let mut s = rhs[row];
        for c in row + 1..dim {
            s -= m[row][c] * x[c];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Symmetric 2×2 (or 1×1) matrices indexed up to the intrinsic dimension.
pub type Sym2<T> = [[T; 2]; 2];

pub fn sym2_zero<T: Real>() -> Sym2<T> {
    [[T::zero(); 2]; 2]
}

pub fn sym2_det<T: Real>(g: &Sym2<T>, dim: usize) -> T {
    if dim == 1 {
        g[0][0]
    } else {
        g[0][0] * g[1][1] - g[0][1] * g[1][0]
    }
}

/// Inverse of an SPD 1×1/2×2 matrix; `None` when not positive definite.
pub fn sym2_inv<T: Real>(g: &Sym2<T>, dim: usize) -> Option<(Sym2<T>, T)> {
    let det = sym2_det(g, dim);
    if !(g[0][0] > T::zero()) || !(det > T::zero()) {
        return None;
    }
    let mut inv = sym2_zero();
    if dim == 1 {
        inv[0][0] = T::one() / g[0][0];
    } else {
        inv[0][0] = g[1][1] / det;
        inv[1][1] = g[0][0] / det;
        inv[0][1] = -g[0][1] / det;
        inv[1][0] = -g[1][0] / det;
    }
    Some((inv, det))
}

/// Generalized eigenvalue extremes of the pencil `(a, b)` for SPD `b`,
/// i.e. extrema of `xᵀa x / xᵀb x`, for intrinsic dimension 1 or 2.
pub fn generalized_eig_range<T: Real>(a: &Sym2<T>, b: &Sym2<T>, dim: usize) -> (T, T) {
    if dim == 1 {
        let l = a[0][0] / b[0][0];
        return (l, l);
    }
    // Solve det(a - λ b) = 0: quadratic det(b) λ² - tr-term λ + det(a) = 0.
    let db = sym2_det(b, 2);
    let da = sym2_det(a, 2);
    let mixed = a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1];
    let disc = (mixed * mixed - T::of(4.0) * da * db).max(T::zero()).sqrt();
    let two_db = T::of(2.0) * db;
    let l1 = (mixed - disc) / two_db;
    let l2 = (mixed + disc) / two_db;
    (l1.min(l2), l1.max(l2))
}
