//! Trace-form pairings of normalized axes, and the first-order expansion of
//! `log(exp(tu) S)`.

use nalgebra::{Matrix3, Vector3};

use super::algebra::{axis_vector, classify, sl2_exp, trace_form, Sl2Matrix, Sl2Vector};
use super::plane::{fixed_point, hyp_distance};
use crate::error::{Error, Result};

/// Minimum separation of fixed points before two elliptic elements are
/// treated as sharing a center.
const COINCIDENT_TOL: f64 = 1e-12;

fn require_elliptic(m: &Sl2Matrix) -> Result<()> {
    if classify(m).is_elliptic() {
        Ok(())
    } else {
        Err(Error::NotElliptic)
    }
}

fn require_hyperbolic(m: &Sl2Matrix) -> Result<()> {
    if classify(m).is_hyperbolic() {
        Ok(())
    } else {
        Err(Error::NotHyperbolic)
    }
}

/// Returns `(B(L(S1), L(S2)), [L(S1), L(S2)])` for two elliptic elements with
/// distinct fixed points. The pairing equals `-2 cosh d` and the bracket
/// `2 sinh(d) L(R)`, `R` translating the first center to the second.
pub fn elliptic_pair_pairing(s1: &Sl2Matrix, s2: &Sl2Matrix) -> Result<(f64, Sl2Vector)> {
    require_elliptic(s1)?;
    require_elliptic(s2)?;
    if hyp_distance(fixed_point(s1)?, fixed_point(s2)?) < COINCIDENT_TOL {
        return Err(Error::CoincidentFixedPoints);
    }
    let l1 = axis_vector(s1)?;
    let l2 = axis_vector(s2)?;
    Ok((trace_form(l1, l2), l1.bracket(l2)))
}

/// `B(L(R1), L(R2))` for two hyperbolic elements.
pub fn geodesic_pair_pairing(r1: &Sl2Matrix, r2: &Sl2Matrix) -> Result<f64> {
    require_hyperbolic(r1)?;
    require_hyperbolic(r2)?;
    Ok(trace_form(axis_vector(r1)?, axis_vector(r2)?))
}

/// Relative position of two oriented geodesics, read off from the pairing of
/// their axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicRelation {
    /// The axes cross at `angle` between their oriented tangents.
    Crossing { angle: f64 },
    /// The axes share an ideal endpoint.
    Asymptotic,
    /// The axes are at distance `distance`; `coherent` when the pairing is
    /// positive.
    Disjoint { distance: f64, coherent: bool },
}

pub fn decode_geodesic_pairing(value: f64, tol: f64) -> GeodesicRelation {
    let half = 0.5 * value;
    if (half.abs() - 1.0).abs() <= tol {
        GeodesicRelation::Asymptotic
    } else if half.abs() < 1.0 {
        GeodesicRelation::Crossing { angle: half.acos() }
    } else {
        GeodesicRelation::Disjoint { distance: half.abs().acosh(), coherent: half > 0.0 }
    }
}

/// `B(L(R), L(S))` for `R` hyperbolic and `S` elliptic. Equals
/// `-2 sinh(d)` where `d` is the distance from the fixed point of `S` to the
/// axis of `R`, counted positive on the right of the oriented axis.
pub fn mixed_pairing(r: &Sl2Matrix, s: &Sl2Matrix) -> Result<f64> {
    require_hyperbolic(r)?;
    require_elliptic(s)?;
    Ok(trace_form(axis_vector(r)?, axis_vector(s)?))
}

fn coords_matrix(cols: [Sl2Vector; 3]) -> Matrix3<f64> {
    Matrix3::from_columns(&cols.map(|c| Vector3::from(c.coords())))
}

/// First-order coefficient in `t` of `log(exp(tu) exp(s))`:
/// `(1 - Ad_S)^{-1} [u, s] + (B(u, s) / B(s, s)) s`, with `1 - Ad_S` inverted
/// on the trace-form orthogonal complement of `s`.
pub fn log_perturbation(s: Sl2Vector, u: Sl2Vector) -> Result<Sl2Vector> {
    let bss = trace_form(s, s);
    if bss.abs() <= 1e-14 * s.norm().powi(2) {
        return Err(Error::DegenerateDirection);
    }
    let big_s = sl2_exp(s);
    // On s-perp, (1 - Ad_S); on span{s}, the identity via the B-projection.
    let basis = [Sl2Vector::H, Sl2Vector::E, Sl2Vector::F];
    let images = basis.map(|b| {
        let proj = (trace_form(b, s) / bss) * s;
        b - big_s.adjoint(b) + proj
    });
    let op = coords_matrix(images);
    let lu = op.lu();
    let rhs = Vector3::from(u.bracket(s).coords());
    let perp = lu.solve(&rhs).ok_or(Error::DegenerateDirection)?;
    if !perp.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateDirection);
    }
    let perp = Sl2Vector::from_coords([perp[0], perp[1], perp[2]]);
    Ok(perp + (trace_form(u, s) / bss) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::plane::HyperbolicPoint;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn rotation_about(p: HyperbolicPoint, half: f64) -> Sl2Matrix {
        let frame = crate::sl2::plane::moving_frame(p, HyperbolicPoint { x: p.x, y: p.y * 2.0 });
        sl2_exp(half * Sl2Vector::rotation_generator()).conjugate_by(&frame)
    }

    fn diag(t: f64) -> Sl2Matrix {
        Sl2Matrix::new((t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp()).unwrap()
    }

    #[test]
    fn elliptic_pairing_vertical() {
        let s1 = rotation_about(HyperbolicPoint::I, 0.4);
        let s2 = rotation_about(HyperbolicPoint { x: 0.0, y: 1f64.exp() }, 1.1);
        let (b, br) = elliptic_pair_pairing(&s1, &s2).unwrap();
        assert_abs_diff_eq!(b, -2.0 * 1f64.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(trace_form(br, br), 8.0 * 1f64.sinh().powi(2), epsilon = 1e-11);
        let expected = (2.0 * 1f64.sinh()) * Sl2Vector::H;
        assert_abs_diff_eq!((br - expected).max_abs(), 0.0, epsilon = 1e-12);
        let same = rotation_about(HyperbolicPoint::I, 1.3);
        assert_eq!(elliptic_pair_pairing(&s1, &same), Err(Error::CoincidentFixedPoints));
    }

    #[test]
    fn geodesic_pairing_examples() {
        let r = diag(1.0);
        assert_abs_diff_eq!(geodesic_pair_pairing(&r, &r).unwrap(), 2.0, epsilon = 1e-14);
        let quarter = sl2_exp((PI / 4.0) * Sl2Vector::rotation_generator());
        let r2 = r.conjugate_by(&quarter);
        assert_abs_diff_eq!(geodesic_pair_pairing(&r, &r2).unwrap(), 0.0, epsilon = 1e-14);
        // vertical line Re z = 1, translated copy of the imaginary axis
        let shift = Sl2Matrix::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let r3 = r.conjugate_by(&shift);
        let v = geodesic_pair_pairing(&r, &r3).unwrap();
        assert_eq!(decode_geodesic_pairing(v, 1e-9), GeodesicRelation::Asymptotic);
        let ell = sl2_exp(Sl2Vector::rotation_generator());
        assert_eq!(geodesic_pair_pairing(&r, &ell), Err(Error::NotHyperbolic));
    }

    #[test]
    fn mixed_pairing_examples() {
        let r = diag(0.9);
        let on_axis = rotation_about(HyperbolicPoint { x: 0.0, y: 2.0 }, 0.7);
        assert_abs_diff_eq!(mixed_pairing(&r, &on_axis).unwrap(), 0.0, epsilon = 1e-13);
        let off = rotation_about(HyperbolicPoint { x: 1.0, y: 1.0 }, 0.7);
        // 1 + i lies right of the upward imaginary axis at distance asinh(1)
        let v = mixed_pairing(&r, &off).unwrap();
        assert_abs_diff_eq!(v, -2.0, epsilon = 1e-13);
        let back = mixed_pairing(&r.inverse(), &off).unwrap();
        assert_abs_diff_eq!(back, 2.0, epsilon = 1e-13);
        assert_eq!(mixed_pairing(&off, &off), Err(Error::NotHyperbolic));
        assert_eq!(mixed_pairing(&r, &r), Err(Error::NotElliptic));
    }

    #[test]
    fn log_perturbation_examples() {
        let s = Sl2Vector::new(0.2, 0.9, -1.4);
        let c = log_perturbation(s, s).unwrap();
        assert_abs_diff_eq!((c - s).max_abs(), 0.0, epsilon = 1e-13);
        let z = log_perturbation(s, Sl2Vector::ZERO).unwrap();
        assert_abs_diff_eq!(z.max_abs(), 0.0, epsilon = 0.0);
        assert_eq!(log_perturbation(Sl2Vector::E, Sl2Vector::H), Err(Error::DegenerateDirection));
    }
}
