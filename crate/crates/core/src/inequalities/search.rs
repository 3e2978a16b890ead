//! Minimization of the induced sectional curvature over 2-planes of `L`.
//!
//! A plane is the span of the first two columns of an orthogonal `n x n`
//! matrix `Q` acting on the `L`-frame. One descent step rotates column `a`
//! (0 or 1) against a trailing column `b`; along that rotation `K` is
//! `mid + amp * cos(2t - phase)`, so each step jumps to its exact minimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, Vector};
use crate::point::SubmanifoldPoint;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub random_starts: usize,
    /// A start stops once a full sweep lowers `K` by less than this.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            random_starts: 20,
            tolerance: 1e-10,
            max_sweeps: 10_000,
            seed: Tolerances::default().seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSearch {
    pub inf_k: f64,
    /// Orthonormal pair spanning the best plane found.
    pub x: Vector,
    pub y: Vector,
    pub starts: usize,
    pub sweeps: usize,
    /// Starts that hit `max_sweeps`; their last plane still counts.
    pub unconverged: usize,
}

/// `R(e_i, e_j, e_k, e_l)` over the `L`-frame, flattened.
struct Tensor {
    n: usize,
    r: Vec<f64>,
}

impl Tensor {
    fn new(point: &SubmanifoldPoint) -> Self {
        let n = point.n();
        let mut r = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        r[((i * n + j) * n + k) * n + l] =
                            point.induced_curvature_frame(i, j, k, l);
                    }
                }
            }
        }
        Tensor { n, r }
    }

    /// Symmetric matrix of `u -> R(u, v, v, u)`.
    fn quadratic_form(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    if v[j] == 0.0 {
                        continue;
                    }
                    let base = (i * n + j) * n;
                    for k in 0..n {
                        acc += self.r[(base + k) * n + l] * v[j] * v[k];
                    }
                }
                m[i * n + l] = acc;
            }
        }
        for i in 0..n {
            for l in i + 1..n {
                let s = 0.5 * (m[i * n + l] + m[l * n + i]);
                m[i * n + l] = s;
                m[l * n + i] = s;
            }
        }
        m
    }

    fn sectional(&self, u: &[f64], v: &[f64]) -> f64 {
        form(&self.quadratic_form(v), u, u, self.n)
    }
}

fn form(m: &[f64], a: &[f64], b: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for l in 0..n {
            acc += a[i] * m[i * n + l] * b[l];
        }
    }
    acc
}

/// Runs coordinate descent from `q` (columns of an orthogonal matrix) and
/// returns the final value, the number of sweeps used and whether the
/// stopping rule was met.
fn descend(t: &Tensor, q: &mut [Vec<f64>], opts: &SearchOptions) -> (f64, usize, bool) {
    let n = t.n;
    let mut value = t.sectional(&q[0], &q[1]);
    for sweep in 1..=opts.max_sweeps {
        let before = value;
        for a in 0..2 {
            let m = t.quadratic_form(&q[1 - a]);
            for b in 2..n {
                let ca = form(&m, &q[a], &q[a], n);
                let cb = form(&m, &q[a], &q[b], n);
                let cc = form(&m, &q[b], &q[b], n);
                let half = 0.5 * (ca - cc);
                let best = 0.5 * (ca + cc) - half.hypot(cb);
                if best < ca {
                    let angle = 0.5 * (-cb).atan2(-half);
                    let (s, c) = angle.sin_cos();
                    let (head, tail) = q.split_at_mut(b);
                    for (x, y) in head[a].iter_mut().zip(tail[0].iter_mut()) {
                        (*x, *y) = (c * *x + s * *y, -s * *x + c * *y);
                    }
                }
            }
        }
        value = t.sectional(&q[0], &q[1]);
        if before - value < opts.tolerance {
            return (value, sweep, true);
        }
    }
    (value, opts.max_sweeps, false)
}

fn coordinate_start(n: usize, i: usize, j: usize) -> Vec<Vec<f64>> {
    let mut order = vec![i, j];
    order.extend((0..n).filter(|k| *k != i && *k != j));
    order
        .into_iter()
        .map(|k| (0..n).map(|x| if x == k { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn random_start(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let raw: Vec<Vector> = (0..n)
            .map(|_| Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(b) = gram_schmidt(&raw, 0) {
            return b
                .into_vectors()
                .into_iter()
                .map(|v| v.as_slice().to_vec())
                .collect();
        }
    }
}

/// Best-effort infimum of `K(pi)` over planes `pi` in `L`, from every pair of
/// frame vectors plus `opts.random_starts` seeded random frames. Fails only
/// when no start meets the stopping rule.
pub fn minimize_sectional(point: &SubmanifoldPoint, opts: &SearchOptions) -> Result<PlaneSearch> {
    let n = point.n();
    if n < 2 {
        return Err(Error::BadDimension(format!(
            "L has dimension {n}, no planes to search"
        )));
    }
    let t = Tensor::new(point);
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            starts.push(coordinate_start(n, i, j));
        }
    }
    if n > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        starts.extend((0..opts.random_starts).map(|_| random_start(n, &mut rng)));
    }

    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let (mut sweeps, mut unconverged) = (0, 0);
    let count = starts.len();
    for mut q in starts {
        let (value, used, converged) = descend(&t, &mut q, opts);
        sweeps += used;
        unconverged += usize::from(!converged);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, q));
        }
    }
    let (inf_k, q) = best.expect("at least one start");
    if unconverged == count {
        return Err(Error::SearchDidNotConverge { best: inf_k });
    }
    let l = point.tangent();
    Ok(PlaneSearch {
        inf_k,
        x: l.combine(&q[0]),
        y: l.combine(&q[1]),
        starts: count,
        sweeps,
        unconverged,
    })
}
