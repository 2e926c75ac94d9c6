//! The Poisson bivector in edge-length coordinates and its certification:
//! antisymmetry, the cone-angle radical, rank and the Jacobi identity.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::surface::{corner_angle_gradient, next, prev, wall_distance, ConeSurface};

/// Refuse evaluation when `|sin(theta_h / 2)|` drops below this.
pub const WALL_GUARD: f64 = 1e-6;
/// Minimum distance of every cone angle to `2 pi N+` for finite differences.
pub const JACOBI_WALL_MARGIN: f64 = 1e-3;
/// Relative finite-difference step for the Jacobi check.
pub const JACOBI_STEP: f64 = 1e-5;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

/// `P[i][j] = eta(da_i, da_j)` with coordinates in edge-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonMatrix {
    m: DMatrix<f64>,
}

impl PoissonMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        PoissonMatrix { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.m[(i, j)] == -self.m[(j, i)]))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (&self.m * DVector::from_column_slice(v)).iter().copied().collect()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.m.clone().svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values above `rel_tol * max(largest, 1)`. The floor
    /// keeps rounding noise in a matrix that should vanish from counting.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0).max(1.0);
        sv.iter().filter(|s| **s > rel_tol * top).count()
    }

    /// Row-major text, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in self.m.row_iter() {
            let row: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    fn add_scaled(&self, other: &PoissonMatrix, eps: f64) -> PoissonMatrix {
        PoissonMatrix { m: &self.m + &other.m * eps }
    }
}

fn wall_check(s: &ConeSurface, guard: f64) -> Result<()> {
    for v in 0..s.num_vertices() {
        let theta = s.cone_angle(v);
        if (0.5 * theta).sin().abs() < guard {
            return Err(Error::WallAngle { vertex: v, theta });
        }
    }
    Ok(())
}

/// Sums `sin(theta_h/2 - d(g_a, g_b)) / sin(theta_h/2)` over ordered pairs of
/// distinct germs at every vertex, `d` the clockwise angle from `g_a` to
/// `g_b`. Each unordered pair is evaluated once and entered with both signs,
/// which is exact because `d(g_b, g_a) = theta_h - d(g_a, g_b)`.
pub fn eta_matrix(s: &ConeSurface) -> Result<PoissonMatrix> {
    wall_check(s, WALL_GUARD)?;
    let n = s.num_edges();
    let mut m = DMatrix::zeros(n, n);
    for fan in s.vertex_fans() {
        let half = 0.5 * fan.theta;
        let denom = half.sin();
        for a in 0..fan.len() {
            for b in a + 1..fan.len() {
                let c = (half - fan.cw_angle(a, b)).sin() / denom;
                let (i, j) = (fan.germs[a].edge, fan.germs[b].edge);
                m[(i, j)] += c;
                m[(j, i)] -= c;
            }
        }
    }
    Ok(PoissonMatrix { m })
}

/// Largest `|term(a,b) + term(b,a)|` over all germ pairs, where the second
/// term is evaluated directly from its own clockwise angle.
pub fn germ_complement_defect(s: &ConeSurface) -> f64 {
    let mut worst: f64 = 0.0;
    for fan in s.vertex_fans() {
        let half = 0.5 * fan.theta;
        for a in 0..fan.len() {
            for b in 0..fan.len() {
                if a != b {
                    let ab = (half - fan.cw_angle(a, b)).sin();
                    let ba = (half - fan.cw_angle(b, a)).sin();
                    worst = worst.max((ab + ba).abs());
                }
            }
        }
    }
    worst
}

/// `rows[h][k] = d theta_h / d a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGradient {
    pub rows: Vec<Vec<f64>>,
}

/// Analytic cone-angle gradients from the law-of-cosines derivative.
pub fn angle_gradients(s: &ConeSurface) -> AngleGradient {
    let mut rows = vec![vec![0.0; s.num_edges()]; s.num_vertices()];
    for h in 0..3 * s.num_triangles() {
        let v = s.tail(h);
        let (ea, eb, ec) = (s.halfedge_edge(h), s.halfedge_edge(prev(h)), s.halfedge_edge(next(h)));
        let g = corner_angle_gradient(s.halfedge_length(h), s.halfedge_length(prev(h)), s.halfedge_length(next(h)));
        rows[v][ea] += g[0];
        rows[v][eb] += g[1];
        rows[v][ec] += g[2];
    }
    AngleGradient { rows }
}

/// Per vertex, `||P grad theta_h||_inf / (||P||_inf ||grad theta_h||_inf + 1)`.
pub fn radical_check(p: &PoissonMatrix, g: &AngleGradient) -> Result<Vec<f64>> {
    let norm_p = p.norm_inf();
    g.rows
        .iter()
        .map(|row| {
            if row.len() != p.dim() {
                return Err(Error::DimensionMismatch { expected: p.dim(), found: row.len() });
            }
            let pg = p.mul_vec(row);
            let num = pg.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let norm_g = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            Ok(num / (norm_p * norm_g + 1.0))
        })
        .collect()
}

fn map_jobs<T: Send, F: Fn(usize) -> T + Sync>(count: usize, jobs: usize, f: F) -> Vec<T> {
    let jobs = jobs.clamp(1, count.max(1));
    if jobs == 1 {
        return (0..count).map(&f).collect();
    }
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| scope.spawn(move || (w..count).step_by(jobs).map(|l| (l, f(l))).collect::<Vec<_>>()))
            .collect();
        let mut out: Vec<(usize, T)> =
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect();
        out.sort_by_key(|(l, _)| *l);
        out.into_iter().map(|(_, v)| v).collect()
    })
}

/// Central differences `d P / d x_l` for every coordinate.
pub fn field_derivatives<F>(field: &F, x: &[f64], step: f64, jobs: usize) -> Result<Vec<PoissonMatrix>>
where
    F: Fn(&[f64]) -> Result<PoissonMatrix> + Sync,
{
    map_jobs(x.len(), jobs, |l| {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[l] += step;
        minus[l] -= step;
        let hi = field(&plus)?;
        let lo = field(&minus)?;
        Ok(PoissonMatrix { m: (hi.m - lo.m) / (2.0 * step) })
    })
    .into_iter()
    .collect()
}

/// Largest cyclic sum `P^{il} d_l P^{jk} + P^{jl} d_l P^{ki} + P^{kl} d_l P^{ij}`
/// over `i < j < k`, divided by `max|P| * max|dP|`.
pub fn jacobi_residual(p: &PoissonMatrix, dp: &[PoissonMatrix]) -> f64 {
    let n = p.dim();
    let scale = p.max_abs() * dp.iter().map(|d| d.max_abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut s = 0.0;
                for (l, d) in dp.iter().enumerate() {
                    s += p.get(i, l) * d.get(j, k) + p.get(j, l) * d.get(k, i) + p.get(k, l) * d.get(i, j);
                }
                worst = worst.max(s.abs());
            }
        }
    }
    worst / scale
}

/// Normalized Jacobi residual of a bivector field at `x`.
pub fn jacobi_residual_of<F>(field: F, x: &[f64], step: f64, jobs: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<PoissonMatrix> + Sync,
{
    let p = field(x)?;
    let dp = field_derivatives(&field, x, step, jobs)?;
    Ok(jacobi_residual(&p, &dp))
}

fn jacobi_margin(s: &ConeSurface) -> Result<()> {
    for v in 0..s.num_vertices() {
        let theta = s.cone_angle(v);
        if wall_distance(theta) < JACOBI_WALL_MARGIN {
            return Err(Error::WallAngle { vertex: v, theta });
        }
    }
    Ok(())
}

fn jacobi_step(s: &ConeSurface) -> f64 {
    JACOBI_STEP * s.lengths().iter().copied().fold(0.0, f64::max)
}

/// Jacobi residual of `eta` with step `1e-5 * max(a)`.
pub fn jacobi_check(s: &ConeSurface, jobs: usize) -> Result<f64> {
    jacobi_margin(s)?;
    jacobi_residual_of(|x| eta_matrix(&s.with_lengths(x)?), &s.lengths(), jacobi_step(s), jobs)
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize) -> PoissonMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.gen_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    PoissonMatrix { m }
}

/// Jacobi residual of `eta + eps Q(a)` with `Q(a) = Q_0 + sum_l a_l Q_l` for
/// random antisymmetric `Q_l`. A constant `Q` alone can be invisible to the
/// check on very symmetric small surfaces, hence the linear part.
pub fn fault_injected_residual(s: &ConeSurface, eps: f64, seed: u64, jobs: usize) -> Result<f64> {
    jacobi_margin(s)?;
    let n = s.num_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q0 = random_antisymmetric(&mut rng, n);
    let ql: Vec<PoissonMatrix> = (0..n).map(|_| random_antisymmetric(&mut rng, n)).collect();
    let field = |x: &[f64]| -> Result<PoissonMatrix> {
        let mut q = q0.clone();
        for (xl, m) in x.iter().zip(&ql) {
            q = q.add_scaled(m, *xl);
        }
        Ok(eta_matrix(&s.with_lengths(x)?)?.add_scaled(&q, eps))
    };
    jacobi_residual_of(field, &s.lengths(), jacobi_step(s), jobs)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// The relation to the Weil-Petersson bivector, which is not computed here.
pub fn wp_comparison_note() -> &'static str {
    "eta_WP = -(1/8) eta on each angle slice; with the opposite orientation \
     convention the relation reads eta_WP = (1/8) eta. \
     The Weil-Petersson pairing is not evaluated here, and the certified \
     Poisson properties of eta do not depend on this scalar."
}
