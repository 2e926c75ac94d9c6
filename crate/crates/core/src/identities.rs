//! Randomized suites checking the trigonometric and logarithm identities of
//! `sl2` and `se2` against the independent computations in `oracle`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{
    axis_from_endpoints, eigen_log, geodesic_pairing_oracle, geodesic_through, series_exp,
    signed_distance_to_geodesic,
};
use crate::se2::{se2_fixed_point, se2_pair_distance, triple_orientation, wedge_sum, Se2Element};
use crate::sl2::{
    axis_vector, elliptic_pair_pairing, geodesic_pair_pairing, hyp_distance, killing_form,
    log_perturbation, mixed_pairing, sl2_exp, sl2_log, trace_form, HyperbolicPoint, Sl2Matrix,
    Sl2Vector,
};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_residual < self.tolerance
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> HyperbolicPoint {
    HyperbolicPoint { x: rng.gen_range(-2.0..2.0), y: rng.gen_range(-1.0f64..1.0).exp() }
}

/// `z -> y z + x`, carrying `i` to `p`.
fn lift(p: HyperbolicPoint) -> Sl2Matrix {
    let sy = p.y.sqrt();
    Sl2Matrix::new(sy, p.x / sy, 0.0, 1.0 / sy).expect("unit determinant")
}

fn rotation_about(p: HyperbolicPoint, nu: f64) -> Sl2Matrix {
    sl2_exp((0.5 * nu) * Sl2Vector::rotation_generator()).conjugate_by(&lift(p))
}

fn random_endpoints(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let r: f64 = rng.gen_range(-3.0..3.0);
        let a: f64 = rng.gen_range(-3.0..3.0);
        if (r - a).abs() > 0.1 {
            return (r, a);
        }
    }
}

/// Translation of length `len` along the geodesic `r -> a`, built by
/// conjugating a diagonal matrix.
fn hyperbolic_along(r: f64, a: f64, len: f64) -> Sl2Matrix {
    let det = a - r;
    let phi = [[a, r], [1.0, 1.0]];
    let inv = [[1.0 / det, -r / det], [-1.0 / det, a / det]];
    let (e, f) = ((0.5 * len).exp(), (-0.5 * len).exp());
    let pd = [[phi[0][0] * e, phi[0][1] * f], [phi[1][0] * e, phi[1][1] * f]];
    let m = [
        [pd[0][0] * inv[0][0] + pd[0][1] * inv[1][0], pd[0][0] * inv[0][1] + pd[0][1] * inv[1][1]],
        [pd[1][0] * inv[0][0] + pd[1][1] * inv[1][0], pd[1][0] * inv[0][1] + pd[1][1] * inv[1][1]],
    ];
    Sl2Matrix::new(m[0][0], m[0][1], m[1][0], m[1][1]).expect("unit determinant")
}

fn axis_oracle(from: Option<f64>, to: Option<f64>) -> Sl2Vector {
    match (from, to) {
        (Some(r), Some(a)) => axis_from_endpoints(r, a),
        (Some(p), None) => Sl2Vector::traceless_part([[1.0, -2.0 * p], [0.0, -1.0]]),
        (None, Some(p)) => -Sl2Vector::traceless_part([[1.0, -2.0 * p], [0.0, -1.0]]),
        (None, None) => Sl2Vector::ZERO,
    }
}

/// `B(L(S1), L(S2)) = -2 cosh d` and `[L(S1), L(S2)] = 2 sinh(d) L(R)`.
pub fn trig_elliptic(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (p, q) = (random_point(rng), random_point(rng));
        let s1 = rotation_about(p, rng.gen_range(0.05..TAU - 0.05));
        let s2 = rotation_about(q, rng.gen_range(0.05..TAU - 0.05));
        let d = hyp_distance(p, q);
        let (b, br) = elliptic_pair_pairing(&s1, &s2).expect("distinct centers");
        let (from, to) = geodesic_through(p, q);
        let expected = (2.0 * d.sinh()) * axis_oracle(from, to);
        let scale = 2.0 * d.cosh();
        worst = worst.max((b + scale).abs() / scale).max((br - expected).max_abs() / scale);
    }
    SuiteResult { name: "trig-elliptic", cases, max_residual: worst, tolerance: 1e-9 }
}

/// `B(L(R1), L(R2))` against the crossing angle or the distance of the axes.
pub fn trig_geodesic(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (r1, a1) = random_endpoints(rng);
        let (r2, a2) = random_endpoints(rng);
        let m1 = hyperbolic_along(r1, a1, rng.gen_range(0.1..3.0));
        let m2 = hyperbolic_along(r2, a2, rng.gen_range(0.1..3.0));
        let b = geodesic_pair_pairing(&m1, &m2).expect("hyperbolic");
        let expected = geodesic_pairing_oracle(r1, a1, r2, a2);
        worst = worst.max((b - expected).abs() / expected.abs().max(1.0));
    }
    SuiteResult { name: "trig-geodesic", cases, max_residual: worst, tolerance: 1e-9 }
}

/// `B(L(R), L(S)) = -2 sinh d` with `d` the signed distance of the center of
/// `S` to the axis of `R`, positive on the right.
pub fn trig_mixed(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (r, a) = random_endpoints(rng);
        let m = hyperbolic_along(r, a, rng.gen_range(0.1..3.0));
        let p = random_point(rng);
        let s = rotation_about(p, rng.gen_range(0.05..TAU - 0.05));
        let b = mixed_pairing(&m, &s).expect("classes");
        let d = signed_distance_to_geodesic(p, Some(r), Some(a));
        worst = worst.max((b + 2.0 * d.sinh()).abs() / (2.0 * d.cosh()));
    }
    SuiteResult { name: "trig-mixed", cases, max_residual: worst, tolerance: 1e-9 }
}

/// Fixed points and their distance for rotations of the Euclidean plane.
pub fn flat_fixed_points(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let c1 = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let c2 = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let s1 = Se2Element::rotation_about(c1, rng.gen_range(0.05..TAU - 0.05));
        let s2 = Se2Element::rotation_about(c2, rng.gen_range(0.05..TAU - 0.05));
        let x1 = se2_fixed_point(&s1).expect("elliptic");
        let img = s1.apply(x1);
        let fixed = (img[0] - x1[0]).hypot(img[1] - x1[1]);
        let located = (x1[0] - c1[0]).hypot(x1[1] - c1[1]);
        let dist = se2_pair_distance(&s1, &s2).expect("elliptic");
        let direct = (c1[0] - c2[0]).hypot(c1[1] - c2[1]);
        worst = worst.max(fixed).max(located).max((dist - direct).abs());
    }
    SuiteResult { name: "flat-fixed-points", cases, max_residual: worst, tolerance: 1e-9 }
}

/// Sign of the wedge sum against a rotate-and-compare side test, under rigid
/// motions and reflections. The residual counts disagreements.
pub fn flat_orientation(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut bad = 0usize;
    let mut done = 0;
    while done < cases {
        let pts: Vec<[f64; 2]> = (0..3).map(|_| [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).collect();
        if wedge_sum(pts[0], pts[1], pts[2]).abs() < 1e-6 {
            continue;
        }
        done += 1;
        // rotate so that x1 -> x2 points along +x; the sign of y decides
        let dir = (pts[1][1] - pts[0][1]).atan2(pts[1][0] - pts[0][0]);
        let (s, c) = (-dir).sin_cos();
        let rel = [pts[2][0] - pts[0][0], pts[2][1] - pts[0][1]];
        let y = s * rel[0] + c * rel[1];
        let side: i8 = if y > 0.0 { 1 } else { -1 };
        let sign = triple_orientation(pts[0], pts[1], pts[2]);
        let g = Se2Element::new(rng.gen_range(0.0..TAU), [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
        let moved = triple_orientation(g.apply(pts[0]), g.apply(pts[1]), g.apply(pts[2]));
        let mirror = |p: [f64; 2]| [p[0], -p[1]];
        let reflected = triple_orientation(mirror(pts[0]), mirror(pts[1]), mirror(pts[2]));
        let swapped = triple_orientation(pts[1], pts[0], pts[2]);
        if sign != side || moved != sign || reflected != -sign || swapped != -sign {
            bad += 1;
        }
    }
    SuiteResult { name: "flat-orientation", cases, max_residual: bad as f64, tolerance: 0.5 }
}

fn log_oracle(s: Sl2Vector, u: Sl2Vector) -> Sl2Vector {
    let es = series_exp(s);
    let at = |t: f64| -> Sl2Vector {
        let e = series_exp(t * u);
        let m = [
            [e[0][0] * es[0][0] + e[0][1] * es[1][0], e[0][0] * es[0][1] + e[0][1] * es[1][1]],
            [e[1][0] * es[0][0] + e[1][1] * es[1][0], e[1][0] * es[0][1] + e[1][1] * es[1][1]],
        ];
        Sl2Vector::traceless_part(eigen_log(m))
    };
    let central = |t: f64| (1.0 / (2.0 * t)) * (at(t) - at(-t));
    let (t1, t2) = (1e-3, 1e-4);
    (1.0 / 99.0) * (100.0 * central(t2) - central(t1))
}

fn random_vector(rng: &mut ChaCha8Rng) -> Sl2Vector {
    Sl2Vector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// First-order term of `log(exp(tu) exp(s))` against a Richardson-extrapolated
/// numerical derivative, for elliptic or hyperbolic `s`.
pub fn log_expansion(rng: &mut ChaCha8Rng, cases: usize, elliptic: bool) -> SuiteResult {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let g = lift(random_point(rng));
        let s = if elliptic {
            g.adjoint(rng.gen_range(0.2..2.8) * Sl2Vector::rotation_generator())
        } else {
            g.adjoint(rng.gen_range(0.2..2.0) * Sl2Vector::H)
        };
        let u = random_vector(rng);
        let c = log_perturbation(s, u).expect("nondegenerate");
        let o = log_oracle(s, u);
        worst = worst.max((c - o).max_abs() / c.max_abs().max(1.0));
    }
    let name = if elliptic { "log-elliptic" } else { "log-hyperbolic" };
    SuiteResult { name, cases, max_residual: worst, tolerance: 1e-6 }
}

/// Closed-form exponential against the series, and `exp(log M) = +-M`.
pub fn exp_log(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < cases {
        let x = 2.0 * random_vector(rng);
        let m = sl2_exp(x);
        if (m.trace().abs() - 2.0).abs() < 1e-3 {
            continue;
        }
        done += 1;
        let series = series_exp(x);
        let e = m.to_array();
        // matrices are stored up to sign, so compare against both lifts
        let gap = |sign: f64| {
            (0..4).fold(0.0f64, |acc, k| {
                let (i, j) = (k / 2, k % 2);
                acc.max((sign * e[i][j] - series[i][j]).abs() / (1.0 + series[i][j].abs()))
            })
        };
        worst = worst.max(gap(1.0).min(gap(-1.0)));
        let back = sl2_exp(sl2_log(&m).expect("semisimple"));
        worst = worst.max(back.projective_distance(&m));
        let l = axis_vector(&m).expect("semisimple");
        worst = worst.max((trace_form(l, l).abs() - 2.0).abs());
    }
    SuiteResult { name: "exp-log", cases, max_residual: worst, tolerance: 1e-9 }
}

/// `K(X, Y) / B(X, Y)` on random pairs; the residual is the spread around `4`.
pub fn killing_ratio(rng: &mut ChaCha8Rng, cases: usize) -> (f64, SuiteResult) {
    let mut worst: f64 = 0.0;
    let mut ratio = f64::NAN;
    let mut done = 0;
    while done < cases {
        let (x, y) = (random_vector(rng), random_vector(rng));
        let b = trace_form(x, y);
        if b.abs() < 1e-3 {
            continue;
        }
        done += 1;
        let r = killing_form(x, y) / b;
        if ratio.is_nan() {
            ratio = r;
        }
        worst = worst.max((r.abs() - 4.0).abs()).max((r - ratio).abs());
    }
    (ratio, SuiteResult { name: "killing-ratio", cases, max_residual: worst, tolerance: 1e-10 })
}

/// Every suite, at the sizes used by the self-test.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        trig_elliptic(&mut rng, 500),
        trig_geodesic(&mut rng, 500),
        trig_mixed(&mut rng, 500),
        flat_fixed_points(&mut rng, 500),
        flat_orientation(&mut rng, 500),
        log_expansion(&mut rng, 200, true),
        log_expansion(&mut rng, 200, false),
        exp_log(&mut rng, 1000),
        killing_ratio(&mut rng, 200).1,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in [
            trig_elliptic(&mut rng, 50),
            trig_geodesic(&mut rng, 50),
            trig_mixed(&mut rng, 50),
            flat_fixed_points(&mut rng, 50),
            flat_orientation(&mut rng, 50),
            log_expansion(&mut rng, 20, true),
            log_expansion(&mut rng, 20, false),
            exp_log(&mut rng, 50),
        ] {
            assert!(r.passed(), "{r:?}");
        }
        let (ratio, r) = killing_ratio(&mut rng, 20);
        assert!(r.passed());
        assert!((ratio - 4.0).abs() < 1e-10);
    }
}
