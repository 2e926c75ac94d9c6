use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Threshold on `| |Tr| - 2 |` below which an element counts as parabolic
/// (or the identity).
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Drift of the determinant tolerated before a matrix is renormalized.
const DET_DRIFT: f64 = 1e-12;

/// Traceless 2x2 matrix `[[h, e], [f, -h]] = h H + e E + f F`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sl2Vector {
    pub h: f64,
    pub e: f64,
    pub f: f64,
}

impl Sl2Vector {
    pub const ZERO: Sl2Vector = Sl2Vector::new(0.0, 0.0, 0.0);
    /// `H = diag(1, -1)`
    pub const H: Sl2Vector = Sl2Vector::new(1.0, 0.0, 0.0);
    /// `E = [[0, 1], [0, 0]]`
    pub const E: Sl2Vector = Sl2Vector::new(0.0, 1.0, 0.0);
    /// `F = [[0, 0], [1, 0]]`
    pub const F: Sl2Vector = Sl2Vector::new(0.0, 0.0, 1.0);

    pub const fn new(h: f64, e: f64, f: f64) -> Self {
        Sl2Vector { h, e, f }
    }

    /// The unit counterclockwise rotation generator at `i`, namely `E - F`.
    pub const fn rotation_generator() -> Self {
        Sl2Vector::new(0.0, 1.0, -1.0)
    }

    /// Projects an arbitrary 2x2 matrix onto its traceless part.
    pub fn traceless_part(m: [[f64; 2]; 2]) -> Self {
        let half = 0.5 * (m[0][0] - m[1][1]);
        Sl2Vector::new(half, m[0][1], m[1][0])
    }

    pub fn to_array(self) -> [[f64; 2]; 2] {
        [[self.h, self.e], [self.f, -self.h]]
    }

    pub fn det(self) -> f64 {
        -self.h * self.h - self.e * self.f
    }

    /// Lie bracket `[X, Y] = XY - YX`.
    pub fn bracket(self, other: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(
            self.e * other.f - self.f * other.e,
            2.0 * (self.h * other.e - self.e * other.h),
            2.0 * (self.f * other.h - self.h * other.f),
        )
    }

    /// Euclidean norm of the entry vector `(h, e, f)`; used for residuals only.
    pub fn norm(self) -> f64 {
        (self.h * self.h + self.e * self.e + self.f * self.f).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.h.abs().max(self.e.abs()).max(self.f.abs())
    }

    /// Coordinates in the basis `(H, E, F)`.
    pub fn coords(self) -> [f64; 3] {
        [self.h, self.e, self.f]
    }

    pub fn from_coords(c: [f64; 3]) -> Self {
        Sl2Vector::new(c[0], c[1], c[2])
    }
}

impl Add for Sl2Vector {
    type Output = Sl2Vector;
    fn add(self, o: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(self.h + o.h, self.e + o.e, self.f + o.f)
    }
}

impl Sub for Sl2Vector {
    type Output = Sl2Vector;
    fn sub(self, o: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(self.h - o.h, self.e - o.e, self.f - o.f)
    }
}

impl Neg for Sl2Vector {
    type Output = Sl2Vector;
    fn neg(self) -> Sl2Vector {
        Sl2Vector::new(-self.h, -self.e, -self.f)
    }
}

impl Mul<Sl2Vector> for f64 {
    type Output = Sl2Vector;
    fn mul(self, v: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(self * v.h, self * v.e, self * v.f)
    }
}

/// The trace form `B(X, Y) = Tr(XY)`.
pub fn trace_form(x: Sl2Vector, y: Sl2Vector) -> f64 {
    2.0 * x.h * y.h + x.e * y.f + x.f * y.e
}

/// Matrix of `ad_X` acting on coordinates in the basis `(H, E, F)`.
pub fn ad_matrix(x: Sl2Vector) -> [[f64; 3]; 3] {
    let cols = [Sl2Vector::H, Sl2Vector::E, Sl2Vector::F].map(|b| x.bracket(b).coords());
    let mut m = [[0.0; 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = col[i];
        }
    }
    m
}

/// The Killing form `Tr(ad_X . ad_Y)`, computed from the adjoint representation.
pub fn killing_form(x: Sl2Vector, y: Sl2Vector) -> f64 {
    let (a, b) = (ad_matrix(x), ad_matrix(y));
    let mut tr = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            tr += a[i][k] * b[k][i];
        }
    }
    tr
}

/// An element of `PSL(2, R)`: a unit-determinant matrix, taken up to sign.
///
/// The stored representative has `Tr >= 0`; when the trace vanishes the
/// `(2,1)` entry is positive (or, if that is zero, the `(1,2)` entry).
#[derive(Clone, Copy, PartialEq)]
pub struct Sl2Matrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl fmt::Debug for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Builds a matrix from entries with positive determinant, rescaling to
    /// determinant one and fixing the projective sign.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::InvalidDeterminant(det));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub(crate) fn normalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        if (det - 1.0).abs() > DET_DRIFT {
            let s = det.sqrt().recip();
            a *= s;
            b *= s;
            c *= s;
            d *= s;
        }
        let tr = a + d;
        let flip = if tr != 0.0 {
            tr < 0.0
        } else if c != 0.0 {
            c < 0.0
        } else {
            b < 0.0
        };
        if flip {
            Sl2Matrix { a: -a, b: -b, c: -c, d: -d }
        } else {
            Sl2Matrix { a, b, c, d }
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn to_array(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Sl2Matrix {
        Sl2Matrix::normalized(self.d, -self.b, -self.c, self.a)
    }

    /// Integer power in the projective group.
    pub fn pow(&self, n: u32) -> Sl2Matrix {
        let mut acc = Sl2Matrix::IDENTITY;
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    /// Adjoint action `Ad_M X = M X M^{-1}`.
    pub fn adjoint(&self, x: Sl2Vector) -> Sl2Vector {
        let m = self.to_array();
        let inv = self.inverse().to_array();
        Sl2Vector::traceless_part(mat_mul(mat_mul(m, x.to_array()), inv))
    }

    /// Conjugation `g M g^{-1}`.
    pub fn conjugate_by(&self, g: &Sl2Matrix) -> Sl2Matrix {
        *g * *self * g.inverse()
    }

    /// Max-entry distance to `other` minimized over the sign ambiguity.
    pub fn projective_distance(&self, other: &Sl2Matrix) -> f64 {
        let p = self.entries();
        let q = other.entries();
        let plus = (0..4).map(|k| (p[k] - q[k]).abs()).fold(0.0, f64::max);
        let minus = (0..4).map(|k| (p[k] + q[k]).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    /// Distance to `+I` or `-I`, whichever is closer.
    pub fn distance_to_identity(&self) -> f64 {
        self.projective_distance(&Sl2Matrix::IDENTITY)
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, o: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::normalized(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

pub(crate) fn mat_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// Isometry type of an element of `PSL(2, R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryClass {
    Identity,
    Parabolic,
    /// `nu = arccos(Tr(M^2)/2)`, in `(0, pi]`.
    Elliptic { nu: f64 },
    /// `length = arccosh(Tr(M^2)/2)`.
    Hyperbolic { length: f64 },
}

impl IsometryClass {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, IsometryClass::Elliptic { .. })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryClass::Hyperbolic { .. })
    }
}

pub fn classify(m: &Sl2Matrix) -> IsometryClass {
    let tr = m.trace().abs();
    if tr < 2.0 - CLASSIFY_TOL {
        let tr2 = m.trace() * m.trace() - 2.0;
        IsometryClass::Elliptic { nu: (0.5 * tr2).clamp(-1.0, 1.0).acos() }
    } else if tr > 2.0 + CLASSIFY_TOL {
        let tr2 = m.trace() * m.trace() - 2.0;
        IsometryClass::Hyperbolic { length: (0.5 * tr2).acosh() }
    } else if m.distance_to_identity() <= CLASSIFY_TOL {
        IsometryClass::Identity
    } else {
        IsometryClass::Parabolic
    }
}

/// `sinh(t)/t` as a function of `t^2`, accurate near zero.
fn sinhc_sq(t2: f64) -> f64 {
    if t2.abs() < 1e-8 {
        1.0 + t2 / 6.0 + t2 * t2 / 120.0
    } else if t2 > 0.0 {
        let t = t2.sqrt();
        t.sinh() / t
    } else {
        let t = (-t2).sqrt();
        t.sin() / t
    }
}

fn cosh_sq(t2: f64) -> f64 {
    if t2 >= 0.0 {
        t2.sqrt().cosh()
    } else {
        (-t2).sqrt().cos()
    }
}

/// Closed-form exponential. Uses `X^2 = -det(X) I`.
pub fn sl2_exp(x: Sl2Vector) -> Sl2Matrix {
    let t2 = -x.det();
    let c = cosh_sq(t2);
    let s = sinhc_sq(t2);
    Sl2Matrix::normalized(c + s * x.h, s * x.e, s * x.f, c - s * x.h)
}

/// The signed rotation sense of an elliptic generator: `true` when its flow
/// turns counterclockwise in the upper half-plane (conjugate to a positive
/// multiple of `E - F`).
pub fn is_counterclockwise(x: Sl2Vector) -> bool {
    x.f < 0.0
}

/// Closed-form principal logarithm.
///
/// Hyperbolic elements get the unique real logarithm of the positive-trace
/// representative. Elliptic elements get `(nu/2) K` where `K` is the unit
/// counterclockwise generator at the fixed point and `nu` in `(0, 2pi)` is
/// the counterclockwise rotation angle. Parabolic elements get `M - I`.
pub fn sl2_log(m: &Sl2Matrix) -> Result<Sl2Vector> {
    let [a, _, _, d] = m.entries();
    let half_tr = 0.5 * (a + d);
    let x = Sl2Vector::traceless_part(m.to_array());
    match classify(m) {
        IsometryClass::Identity => Err(Error::NoBranch),
        IsometryClass::Parabolic => {
            if half_tr < 0.0 {
                Err(Error::NoBranch)
            } else {
                Ok(x)
            }
        }
        IsometryClass::Hyperbolic { .. } => {
            // M = cosh(t) I + sinh(t)/t * r with t = arccosh(Tr/2).
            let t = half_tr.abs().acosh();
            let sign = half_tr.signum();
            Ok((sign * t / t.sinh()) * x)
        }
        IsometryClass::Elliptic { .. } => {
            // M = cos(phi) I + sin(phi) K with K^2 = -I; x = sin(phi) K.
            let sin_abs = x.det().sqrt();
            let mut k = (1.0 / sin_abs) * x;
            let mut sin_phi = sin_abs;
            if !is_counterclockwise(k) {
                k = -k;
                sin_phi = -sin_phi;
            }
            let mut phi = sin_phi.atan2(half_tr);
            if phi <= 0.0 {
                phi += PI;
            }
            Ok(phi * k)
        }
    }
}

/// Counterclockwise rotation angle in `(0, 2pi)` of an elliptic element.
pub fn rotation_angle(m: &Sl2Matrix) -> Result<f64> {
    if !classify(m).is_elliptic() {
        return Err(Error::NotElliptic);
    }
    let s = sl2_log(m)?;
    Ok(2.0 * s.det().sqrt())
}

/// The normalized axis `L(M)`: `2 log(M) / l(M)` for hyperbolic elements and
/// `2 log(M) / nu` for elliptic ones, so that `B(L, L)` is `+2` or `-2`.
pub fn axis_vector(m: &Sl2Matrix) -> Result<Sl2Vector> {
    match classify(m) {
        IsometryClass::Hyperbolic { length } => Ok((2.0 / length) * sl2_log(m)?),
        IsometryClass::Elliptic { .. } => {
            let s = sl2_log(m)?;
            let nu = 2.0 * s.det().sqrt();
            Ok((2.0 / nu) * s)
        }
        IsometryClass::Parabolic | IsometryClass::Identity => Err(Error::NotSemisimple),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rot(half: f64) -> Sl2Matrix {
        Sl2Matrix::new(half.cos(), -half.sin(), half.sin(), half.cos()).unwrap()
    }

    #[test]
    fn basis_pairings() {
        let (h, e, f) = (Sl2Vector::H, Sl2Vector::E, Sl2Vector::F);
        assert_eq!(trace_form(h, h), 2.0);
        assert_eq!(trace_form(e + f, e + f), 2.0);
        assert_eq!(trace_form(e - f, e - f), -2.0);
        assert_eq!(trace_form(h, e + f), 0.0);
        assert_eq!(trace_form(h, e - f), 0.0);
        assert_eq!(trace_form(e + f, e - f), 0.0);
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let x = Sl2Vector::new(0.3, -1.2, 0.7);
        let y = Sl2Vector::new(-0.5, 0.4, 2.1);
        let xy = mat_mul(x.to_array(), y.to_array());
        let yx = mat_mul(y.to_array(), x.to_array());
        let direct = [[xy[0][0] - yx[0][0], xy[0][1] - yx[0][1]], [xy[1][0] - yx[1][0], xy[1][1] - yx[1][1]]];
        let br = x.bracket(y).to_array();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(br[i][j], direct[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn classify_examples() {
        // clockwise rotation by pi/2 in the Mobius picture
        match classify(&rot(PI / 4.0)) {
            IsometryClass::Elliptic { nu } => assert_abs_diff_eq!(nu, PI / 2.0, epsilon = 1e-14),
            other => panic!("{other:?}"),
        }
        let diag = Sl2Matrix::new(0.5f64.exp(), 0.0, 0.0, (-0.5f64).exp()).unwrap();
        match classify(&diag) {
            IsometryClass::Hyperbolic { length } => assert_abs_diff_eq!(length, 1.0, epsilon = 1e-14),
            other => panic!("{other:?}"),
        }
        assert_eq!(classify(&Sl2Matrix::IDENTITY), IsometryClass::Identity);
        let para = Sl2Matrix::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(classify(&para), IsometryClass::Parabolic);
    }

    #[test]
    fn sign_normalization() {
        let m = Sl2Matrix::new(-2.0, 1.0, -3.0, 1.0).unwrap();
        assert!(m.trace() >= 0.0);
        let q = Sl2Matrix::new(0.0, 1.0, -1.0, 0.0).unwrap();
        assert_eq!(q.entries(), [0.0, -1.0, 1.0, 0.0]);
        let scaled = Sl2Matrix::new(2.0, 0.0, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(scaled.det(), 1.0, epsilon = 1e-15);
        assert!(Sl2Matrix::new(1.0, 2.0, 3.0, 4.0).is_err());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(sl2_exp(Sl2Vector::ZERO), Sl2Matrix::IDENTITY);
        let r = sl2_exp((PI / 2.0) * Sl2Vector::rotation_generator());
        assert_abs_diff_eq!(r.trace(), 0.0, epsilon = 1e-15);
        let d = sl2_exp(0.7 * Sl2Vector::H);
        let [a, b, c, dd] = d.entries();
        assert_abs_diff_eq!(a, 0.7f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(dd, (-0.7f64).exp(), epsilon = 1e-14);
        assert_eq!((b, c), (0.0, 0.0));
        // nilpotent case
        let n = sl2_exp(Sl2Vector::E);
        assert_eq!(n.entries(), [1.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn log_examples() {
        let s = (PI / 4.0) * Sl2Vector::rotation_generator();
        let l = sl2_log(&sl2_exp(s)).unwrap();
        assert_abs_diff_eq!((l - s).max_abs(), 0.0, epsilon = 1e-14);
        let diag = Sl2Matrix::new(1f64.exp(), 0.0, 0.0, (-1f64).exp()).unwrap();
        let l = sl2_log(&diag).unwrap();
        assert_abs_diff_eq!((l - Sl2Vector::H).max_abs(), 0.0, epsilon = 1e-14);
        assert_eq!(sl2_log(&Sl2Matrix::IDENTITY), Err(Error::NoBranch));
    }

    #[test]
    fn log_angle_pi_branch() {
        let m = sl2_exp((PI / 2.0) * Sl2Vector::rotation_generator());
        let l = sl2_log(&m).unwrap();
        assert_abs_diff_eq!((l - (PI / 2.0) * Sl2Vector::rotation_generator()).max_abs(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn log_reflex_rotation() {
        // counterclockwise by 3pi/2; the stored representative has positive trace
        let s = (3.0 * PI / 4.0) * Sl2Vector::rotation_generator();
        let m = sl2_exp(s);
        assert!(m.trace() >= 0.0);
        let l = sl2_log(&m).unwrap();
        assert_abs_diff_eq!((l - s).max_abs(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rotation_angle(&m).unwrap(), 1.5 * PI, epsilon = 1e-13);
        // the textbook-looking rotation matrix is a clockwise turn
        assert_abs_diff_eq!(rotation_angle(&rot(PI / 4.0)).unwrap(), 1.5 * PI, epsilon = 1e-13);
    }

    #[test]
    fn axis_vector_examples() {
        for nu in [0.3, 1.0, PI, 5.0] {
            let m = sl2_exp((nu / 2.0) * Sl2Vector::rotation_generator());
            let l = axis_vector(&m).unwrap();
            assert_abs_diff_eq!((l - Sl2Vector::rotation_generator()).max_abs(), 0.0, epsilon = 1e-13);
            assert_abs_diff_eq!(trace_form(l, l), -2.0, epsilon = 1e-12);
        }
        let t = 1.3;
        let r = Sl2Matrix::new((t / 2.0f64).exp(), 0.0, 0.0, (-t / 2.0f64).exp()).unwrap();
        let l = axis_vector(&r).unwrap();
        assert_abs_diff_eq!((l - Sl2Vector::H).max_abs(), 0.0, epsilon = 1e-13);
        let para = Sl2Matrix::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(axis_vector(&para), Err(Error::NotSemisimple));
    }

    #[test]
    fn killing_constant_on_basis() {
        let h = Sl2Vector::H;
        assert_abs_diff_eq!(killing_form(h, h), 4.0 * trace_form(h, h), epsilon = 1e-14);
    }
}
