//! One-dimensional grid problems over Z[√2].

use super::ring::ZRoot2;

const LAMBDA: f64 = 1.0 + std::f64::consts::SQRT_2;

/// All `α = a + b√2` with `α ∈ [x0, x1]` and `α• ∈ [y0, y1]`.
///
/// The bounds are widened slightly to absorb rounding, so callers must do
/// their own exact membership test on the returned points.
pub fn solve_1d(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<ZRoot2<i128>> {
    let mut out = Vec::new();
    if !(x0 <= x1 && y0 <= y1) || !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
        return out;
    }
    // Rescale by λ^n so both intervals have comparable width.
    let dx = (x1 - x0).max(1e-300);
    let dy = (y1 - y0).max(1e-300);
    let n = ((dy / dx).ln() / (2.0 * LAMBDA.ln())).round() as i32;
    let s = LAMBDA.powi(n);
    let sb = if n % 2 == 0 { LAMBDA.powi(-n) } else { -LAMBDA.powi(-n) };
    let (mut xa, mut xb) = (x0 * s, x1 * s);
    let (mut ya, mut yb) = (y0 * sb, y1 * sb);
    if ya > yb {
        std::mem::swap(&mut ya, &mut yb);
    }
    // A few ulps: enough for the rescaling round-off.
    let pad_x = 8e-16 * xa.abs().max(xb.abs()) + 1e-300;
    let pad_y = 8e-16 * ya.abs().max(yb.abs()) + 1e-300;
    xa -= pad_x;
    xb += pad_x;
    ya -= pad_y;
    yb += pad_y;

    let r2 = std::f64::consts::SQRT_2;
    let b_lo = ((xa - yb) / (2.0 * r2)).ceil() as i128;
    let b_hi = ((xb - ya) / (2.0 * r2)).floor() as i128;
    let unscale = if n >= 0 {
        ZRoot2::<i128>::lambda_inv().pow(n as u32)
    } else {
        ZRoot2::<i128>::lambda().pow((-n) as u32)
    };
    for b in b_lo..=b_hi {
        let bf = b as f64 * r2;
        let a_lo = (xa - bf).max(ya + bf).ceil() as i128;
        let a_hi = (xb - bf).min(yb + bf).floor() as i128;
        for a in a_lo..=a_hi {
            out.push(ZRoot2::new(a, b) * unscale.clone());
        }
    }
    out
}
