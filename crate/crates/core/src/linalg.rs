//! Small dense real matrix helpers, including a deterministic 4x4 SVD.

use crate::statesim::Mat4;

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

pub fn transpose4(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = a[c][r];
        }
    }
    out
}

pub fn frobenius_diff4(a: &Mat4, b: &Mat4) -> f64 {
    let mut acc = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            acc += (a[r][c] - b[r][c]).powi(2);
        }
    }
    acc.sqrt()
}

/// Determinant by Laplace expansion along the first row of 3x3 minors.
pub fn det4(m: &Mat4) -> f64 {
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut total = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for c in 0..4 {
                if c == col {
                    continue;
                }
                minor[r - 1][cc] = m[r][c];
                cc += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][col] * det3(minor);
    }
    total
}

/// `A = X * diag(d) * Y` with orthogonal `X`, `Y` and `d >= 0` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd4 {
    pub x: Mat4,
    pub d: [f64; 4],
    pub y: Mat4,
}

const JACOBI_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 64;

/// One-sided Jacobi SVD. Fully deterministic: fixed pivot order and a fixed
/// completion of the left basis when singular values vanish.
pub fn svd4(a: &Mat4) -> Svd4 {
    // Work on columns: w = a * v, rotating column pairs until orthogonal.
    let mut w = *a;
    let mut v = crate::statesim::identity4();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in &w {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in w.iter_mut() {
                    let (wp, wq) = (row[p], row[q]);
                    row[p] = c * wp - s * wq;
                    row[q] = s * wp + c * wq;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = [0.0; 4];
    for (k, s) in sigma.iter_mut().enumerate() {
        *s = w.iter().map(|row| row[k] * row[k]).sum::<f64>().sqrt();
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    let scale = sigma[order[0]];
    let mut x = [[0.0; 4]; 4];
    let mut vs = [[0.0; 4]; 4];
    let mut d = [0.0; 4];
    let mut filled: Vec<[f64; 4]> = Vec::with_capacity(4);
    for (slot, &k) in order.iter().enumerate() {
        d[slot] = sigma[k];
        for r in 0..4 {
            vs[r][slot] = v[r][k];
        }
        let col: [f64; 4] = if sigma[k] > 1e-13 * scale.max(f64::MIN_POSITIVE) {
            let mut c = [w[0][k], w[1][k], w[2][k], w[3][k]];
            c.iter_mut().for_each(|e| *e /= sigma[k]);
            orthonormalize_against(c, &filled).unwrap_or_else(|| complete_basis(&filled))
        } else {
            complete_basis(&filled)
        };
        filled.push(col);
        for r in 0..4 {
            x[r][slot] = col[r];
        }
    }
    Svd4 { x, d, y: transpose4(&vs) }
}

fn orthonormalize_against(mut c: [f64; 4], basis: &[[f64; 4]]) -> Option<[f64; 4]> {
    // Two passes of modified Gram-Schmidt.
    for _ in 0..2 {
        for b in basis {
            let dot: f64 = (0..4).map(|r| c[r] * b[r]).sum();
            for r in 0..4 {
                c[r] -= dot * b[r];
            }
        }
    }
    let n: f64 = c.iter().map(|e| e * e).sum::<f64>().sqrt();
    if n < 1e-8 {
        return None;
    }
    c.iter_mut().for_each(|e| *e /= n);
    Some(c)
}

fn complete_basis(basis: &[[f64; 4]]) -> [f64; 4] {
    for e in 0..4 {
        let mut unit = [0.0; 4];
        unit[e] = 1.0;
        if let Some(c) = orthonormalize_against(unit, basis) {
            return c;
        }
    }
    unreachable!("fewer than four vectors always leave a standard basis direction")
}
