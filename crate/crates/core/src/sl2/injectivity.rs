//! Products of two elliptic holonomies at distance `d`, and the distance at
//! which the product acquires finite order.

use std::f64::consts::{PI, TAU};

use super::algebra::Sl2Matrix;
use crate::error::{Error, Result};

/// The two elliptic matrices: a rotation about `i` and a rotation about
/// `e^d i`, with half-angles `theta_h / 2` and `theta_j / 2`.
pub fn elliptic_pair(theta_h: f64, theta_j: f64, d: f64) -> (Sl2Matrix, Sl2Matrix) {
    let (sh, ch) = (0.5 * theta_h).sin_cos();
    let (sj, cj) = (0.5 * theta_j).sin_cos();
    let first = Sl2Matrix::normalized(ch, -sh, sh, ch);
    let second = Sl2Matrix::normalized(cj, -d.exp() * sj, (-d).exp() * sj, cj);
    (first, second)
}

/// Product `hol(gamma_h) hol(gamma_j)` of the two elliptic matrices.
pub fn elliptic_product(theta_h: f64, theta_j: f64, d: f64) -> Sl2Matrix {
    let (a, b) = elliptic_pair(theta_h, theta_j, d);
    a * b
}

/// `|Tr|` of the product, computed from the matrices.
pub fn elliptic_product_trace(theta_h: f64, theta_j: f64, d: f64) -> f64 {
    elliptic_product(theta_h, theta_j, d).trace().abs()
}

/// `2 |cos(h/2) cos(j/2) - cosh(d) sin(h/2) sin(j/2)|`.
pub fn elliptic_product_trace_closed_form(theta_h: f64, theta_j: f64, d: f64) -> f64 {
    let (sh, ch) = (0.5 * theta_h).sin_cos();
    let (sj, cj) = (0.5 * theta_j).sin_cos();
    2.0 * (ch * cj - d.cosh() * sh * sj).abs()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest `d >= 0` at which the product has `|Tr| = 2|cos(pi p / q)|`,
/// making it elliptic of order `q`.
///
/// Writing the signed half-trace as `g(d) = A - B cosh d` with `B > 0`, `g`
/// decreases from `cos((h + j)/2)` to `-inf`; the first crossing of
/// `|g| = |cos(pi p/q)|` is found by bisection in `d`.
pub fn solve_order_q_distance(theta_h: f64, theta_j: f64, p: u32, q: u32) -> Result<f64> {
    for (name, th) in [("theta_h", theta_h), ("theta_j", theta_j)] {
        if !(th > 0.0 && th < TAU) {
            return Err(Error::NoSolution(format!("{name} = {th} is outside (0, 2pi)")));
        }
    }
    if theta_h + theta_j <= TAU {
        return Err(Error::NoSolution(format!(
            "angle sum {} does not exceed 2pi",
            theta_h + theta_j
        )));
    }
    if p == 0 || p >= q || gcd(p, q) != 1 {
        return Err(Error::NoSolution(format!("{p}/{q} is not a reduced fraction in (0, 1)")));
    }
    let (sh, ch) = (0.5 * theta_h).sin_cos();
    let (sj, cj) = (0.5 * theta_j).sin_cos();
    let (a, b) = (ch * cj, sh * sj);
    let target = (PI * p as f64 / q as f64).cos().abs();
    let g0 = a - b;
    // absorbs rounding when d = 0 is itself the solution
    let slack = 1e-12;
    let level = if g0 >= target - slack {
        target
    } else if g0 >= -target - slack {
        -target
    } else {
        return Err(Error::NoSolution(format!(
            "|Tr| at d = 0 is {} >= target {}",
            2.0 * g0.abs(),
            2.0 * target
        )));
    };
    // g(d) = level  <=>  cosh d = (a - level) / b
    let cosh_d = (a - level) / b;
    if cosh_d <= 1.0 {
        return Ok(0.0);
    }
    let g = |d: f64| a - b * d.cosh() - level;
    let mut hi = 1.0;
    let mut lo = 0.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn half_turns_give_cosh() {
        for d in [0.0, 0.3, 1.7] {
            assert_abs_diff_eq!(elliptic_product_trace(PI, PI, d), 2.0 * f64::cosh(d), epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_distance_limit() {
        for (h, j) in [(1.0, 2.0), (4.0, 5.5), (3.5, 3.0)] {
            let expect = 2.0 * (0.5f64 * (h + j)).cos().abs();
            assert_abs_diff_eq!(elliptic_product_trace(h, j, 0.0), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn order_two_example() {
        let t = 1.5 * PI;
        let d = solve_order_q_distance(t, t, 1, 2).unwrap();
        // cosh d = (0 + cos^2(3pi/4)) / sin^2(3pi/4) = 1
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
        let m = elliptic_product(t, t, d);
        assert!(m.pow(2).distance_to_identity() < 1e-8);
    }

    #[test]
    fn order_three_nondegenerate() {
        let (h, j) = (1.5 * PI + 0.4, 1.5 * PI);
        let d = solve_order_q_distance(h, j, 1, 3).unwrap();
        assert!(d > 0.0);
        let (sh, ch) = (0.5 * h).sin_cos();
        let (sj, cj) = (0.5 * j).sin_cos();
        // analytic inversion on the active branch
        let g0 = ch * cj - sh * sj;
        let level = if g0 >= 0.5 { 0.5 } else { -0.5 };
        assert_abs_diff_eq!(d.cosh(), (ch * cj - level) / (sh * sj), epsilon = 1e-12);
        assert_abs_diff_eq!(elliptic_product_trace(h, j, d), 1.0, epsilon = 1e-10);
        assert!(elliptic_product(h, j, d).pow(3).distance_to_identity() < 1e-8);
    }

    #[test]
    fn domain_guards() {
        assert!(solve_order_q_distance(2.0, 3.0, 1, 2).is_err());
        assert!(solve_order_q_distance(4.0, 4.0, 2, 4).is_err());
        assert!(solve_order_q_distance(4.0, 4.0, 0, 3).is_err());
    }
}
