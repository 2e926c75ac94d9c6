//! Reference computations that avoid the closed forms of `sl2`: truncated
//! power series, eigenvalue logarithms and elementary plane geometry. Used to
//! cross-check the main implementation.

use num_complex::Complex64;

use crate::sl2::{HyperbolicPoint, Sl2Matrix, Sl2Vector};

type M2 = [[f64; 2]; 2];

fn mul(x: M2, y: M2) -> M2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// `exp(X)` by scaling, a 30-term Taylor series and repeated squaring.
pub fn series_exp(x: Sl2Vector) -> M2 {
    let m = x.to_array();
    let norm = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut k = 0;
    while norm / f64::from(1u32 << k.min(30)) > 0.25 && k < 60 {
        k += 1;
    }
    let scale = 0.5f64.powi(k);
    let a = m.map(|r| r.map(|v| v * scale));
    let mut sum = [[1.0, 0.0], [0.0, 1.0]];
    let mut term = sum;
    for n in 1..30 {
        term = mul(term, a).map(|r| r.map(|v| v / n as f64));
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..k {
        sum = mul(sum, sum);
    }
    sum
}

/// Principal logarithm through the eigenvalues, by Sylvester's formula
/// `log M = (log l1 (M - l2) - log l2 (M - l1)) / (l1 - l2)`.
/// Requires distinct eigenvalues off the negative real axis.
pub fn eigen_log(m: M2) -> M2 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    let (g1, g2) = (l1.ln(), l2.ln());
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            let v = (g1 * (m[i][j] - l2 * id) - g2 * (m[i][j] - l1 * id)) / (l1 - l2);
            out[i][j] = v.re;
        }
    }
    out
}

/// Ideal endpoints `(repelling, attracting)` of a hyperbolic element, with
/// `None` standing for infinity.
pub fn hyperbolic_endpoints(r: &Sl2Matrix) -> (Option<f64>, Option<f64>) {
    let [a, b, c, d] = r.entries();
    let tr = a + d;
    // the attracting eigenvector belongs to the eigenvalue of larger modulus
    let disc = (tr * tr - 4.0).sqrt();
    let big = 0.5 * (tr + tr.signum() * disc);
    let small = 0.5 * (tr - tr.signum() * disc);
    let point = |lambda: f64| -> Option<f64> {
        // (M - lambda) v = 0, v = (z, 1)
        if c.abs() > 1e-300 {
            Some((lambda - d) / c)
        } else if (a - lambda).abs() > 1e-300 {
            // first row: (a - lambda) z + b = 0
            Some(-b / (a - lambda))
        } else {
            None
        }
    };
    (point(small), point(big))
}

/// Unit generator flowing from `repelling` to `attracting`: the conjugate of
/// `H` by `[[attracting, repelling], [1, 1]]` (finite endpoints).
pub fn axis_from_endpoints(repelling: f64, attracting: f64) -> Sl2Vector {
    let phi = [[attracting, repelling], [1.0, 1.0]];
    let det = attracting - repelling;
    let inv = [[1.0 / det, -repelling / det], [-1.0 / det, attracting / det]];
    let m = mul(mul(phi, [[1.0, 0.0], [0.0, -1.0]]), inv);
    Sl2Vector::traceless_part(m)
}

/// Endpoints `(from, to)` of the geodesic through `p` then `q`.
pub fn geodesic_through(p: HyperbolicPoint, q: HyperbolicPoint) -> (Option<f64>, Option<f64>) {
    if (p.x - q.x).abs() <= 1e-14 * (1.0 + p.x.abs()) {
        return if q.y > p.y { (Some(p.x), None) } else { (None, Some(p.x)) };
    }
    let c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
    let rho = (p.x - c).hypot(p.y);
    if q.x > p.x {
        (Some(c - rho), Some(c + rho))
    } else {
        (Some(c + rho), Some(c - rho))
    }
}

/// Image of `z` under an orientation-preserving map sending `from` to `0`
/// and `to` to infinity.
fn normalize_to_axis(z: Complex64, from: Option<f64>, to: Option<f64>) -> Complex64 {
    match (from, to) {
        (Some(p), Some(q)) => {
            let w = (z - p) / (q - z);
            // the map has determinant q - p; for q < p it lands in the lower
            // half-plane and reflecting through the origin restores orientation
            if q > p {
                w
            } else {
                -w
            }
        }
        (Some(p), None) => z - p,
        (None, Some(q)) => -1.0 / (z - q),
        (None, None) => z,
    }
}

/// Signed distance from `x` to the oriented geodesic `from -> to`, positive
/// on its right-hand side.
pub fn signed_distance_to_geodesic(x: HyperbolicPoint, from: Option<f64>, to: Option<f64>) -> f64 {
    let w = normalize_to_axis(Complex64::new(x.x, x.y), from, to);
    // after normalization the geodesic is the upward imaginary axis and the
    // right-hand side is Re w > 0
    (w.re / w.im).asinh()
}

/// Golden-section minimum of `f` on `[lo, hi]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    f(0.5 * (lo + hi))
}

/// Relative position of the oriented geodesic `r2 -> a2` with respect to the
/// oriented geodesic `r1 -> a1`, as the expected value of the trace-form
/// pairing of their unit axes: `2 cos` of the crossing angle, or `+-2 cosh`
/// of the distance, positive when the repelling ends are adjacent.
pub fn geodesic_pairing_oracle(r1: f64, a1: f64, r2: f64, a2: f64) -> f64 {
    let map = |t: f64| normalize_to_axis(Complex64::new(t, 0.0), Some(r1), Some(a1)).re;
    let (p, q) = (map(r2), map(a2));
    let m = 0.5 * (p + q);
    let rho = 0.5 * (q - p).abs();
    if p.signum() != q.signum() {
        let cos = if q > p { m / rho } else { -m / rho };
        2.0 * cos
    } else {
        // distance from the semicircle to the imaginary axis, minimized
        let dist = golden_min(
            |phi| {
                let z = Complex64::new(m + rho * phi.cos(), rho * phi.sin());
                (z.re.abs() / z.im).asinh()
            },
            1e-9,
            std::f64::consts::PI - 1e-9,
            200,
        );
        let coherent = p.abs() < q.abs();
        if coherent {
            2.0 * dist.cosh()
        } else {
            -2.0 * dist.cosh()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn series_matches_diagonal() {
        let e = series_exp(1.5 * Sl2Vector::H);
        assert_abs_diff_eq!(e[0][0], 1.5f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(e[1][1], (-1.5f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn eigen_log_inverts_series() {
        let x = Sl2Vector::new(0.3, 1.1, -0.8);
        let l = eigen_log(series_exp(x));
        let back = Sl2Vector::traceless_part(l);
        assert_abs_diff_eq!((back - x).max_abs(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn endpoints_of_diagonal() {
        let r = Sl2Matrix::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(hyperbolic_endpoints(&r), (Some(0.0), None));
        let l = axis_from_endpoints(-1.0, 1.0);
        assert_abs_diff_eq!(crate::sl2::trace_form(l, l), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn side_test() {
        let d = signed_distance_to_geodesic(HyperbolicPoint { x: 1.0, y: 1.0 }, Some(0.0), None);
        assert_abs_diff_eq!(d, 1f64.asinh(), epsilon = 1e-15);
        let d = signed_distance_to_geodesic(HyperbolicPoint { x: 1.0, y: 1.0 }, None, Some(0.0));
        assert_abs_diff_eq!(d, -(1f64.asinh()), epsilon = 1e-15);
        // unit semicircle traversed from -1 to 1 has the origin side on its right
        let d = signed_distance_to_geodesic(HyperbolicPoint { x: 0.0, y: 0.5 }, Some(-1.0), Some(1.0));
        assert!(d > 0.0);
    }

    #[test]
    fn pairing_oracle_cases() {
        // orthogonal crossing
        assert_abs_diff_eq!(geodesic_pairing_oracle(-1.0, 1.0, 0.0, 1e12), 0.0, epsilon = 1e-9);
        // nested semicircles: normalized ends 1/3 and 3, cosh d = (3 + 1/3) / (3 - 1/3)
        assert_abs_diff_eq!(geodesic_pairing_oracle(-1.0, 1.0, -0.5, 0.5), 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(geodesic_pairing_oracle(-1.0, 1.0, 0.5, -0.5), -2.5, epsilon = 1e-9);
    }
}
