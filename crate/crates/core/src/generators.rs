//! Seeded construction of frames and random formal instances in the
//! canonical model.
//!
//! Random frames are images of a fixed frame under compositions of Givens
//! rotations of the `2m`-block, so `xi_1, xi_2` stay exactly tangent. For
//! slant frames the rotations are unitary (they commute with `f`), which
//! keeps the slant angle.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientModel, StructureFunctions};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::point::{PointFlags, SecondFundamentalForm, SubmanifoldPoint};
use crate::tolerance::Tolerances;

fn with_xis(ambient: &AmbientModel, mut frame: Vec<Vector>) -> Vec<Vector> {
    frame.push(ambient.xi(0).clone());
    frame.push(ambient.xi(1).clone());
    frame
}

/// `e_{2k-1} = dx_k`, `e_{2k} = cos(theta) dy_k + sin(theta) dx_{n/2+k}`, then `xi_1, xi_2`.
pub fn slant_frame(ambient: &AmbientModel, n: usize, theta: f64) -> Result<Vec<Vector>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::BadDimension(format!(
            "slant frames need a positive even n, got {n}"
        )));
    }
    if ambient.m() < n {
        return Err(Error::BadDimension(format!(
            "slant frame with n = {n} needs m >= {n}, got {}",
            ambient.m()
        )));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::BadDimension(format!(
            "slant angle {theta} outside [0, pi/2]"
        )));
    }
    let (s, c) = theta.sin_cos();
    let half = n / 2;
    let mut frame = Vec::with_capacity(n + 2);
    for k in 0..half {
        frame.push(ambient.dx(k));
        frame.push(ambient.dy(k) * c + ambient.dx(half + k) * s);
    }
    Ok(with_xis(ambient, frame))
}

/// `dx_1, ..., dx_n, xi_1, xi_2`.
pub fn anti_invariant_frame(ambient: &AmbientModel, n: usize) -> Result<Vec<Vector>> {
    if n == 0 || ambient.m() < n {
        return Err(Error::BadDimension(format!(
            "anti-invariant frame with n = {n} needs 1 <= n <= m = {}",
            ambient.m()
        )));
    }
    Ok(with_xis(ambient, (0..n).map(|k| ambient.dx(k)).collect()))
}

/// `dx_1, dy_1, ..., dx_{n/2}, dy_{n/2}, xi_1, xi_2`.
pub fn invariant_frame(ambient: &AmbientModel, n: usize) -> Result<Vec<Vector>> {
    if n == 0 || !n.is_multiple_of(2) || 2 * ambient.m() < n {
        return Err(Error::BadDimension(format!(
            "invariant frame needs a positive even n <= 2m, got n = {n}, m = {}",
            ambient.m()
        )));
    }
    Ok(with_xis(
        ambient,
        (0..n / 2)
            .flat_map(|k| [ambient.dx(k), ambient.dy(k)])
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    #[default]
    None,
    Minimal,
    CCompatible,
    MinimalAndCCompatible,
}

impl Constraint {
    pub fn minimal(self) -> bool {
        matches!(
            self,
            Constraint::Minimal | Constraint::MinimalAndCCompatible
        )
    }

    pub fn c_compatible(self) -> bool {
        matches!(
            self,
            Constraint::CCompatible | Constraint::MinimalAndCCompatible
        )
    }

    pub const ALL: [Constraint; 4] = [
        Constraint::None,
        Constraint::Minimal,
        Constraint::CCompatible,
        Constraint::MinimalAndCCompatible,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum FrameMode {
    /// A rotated slant frame with the given angle.
    Slant { theta: f64 },
    /// An orthonormal `n`-frame in general position in the `2m`-block.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n: usize,
    /// Drawn from `[ceil(n/2), n + 2]` (or `[n, n + 2]` for slant frames) when absent.
    pub m: Option<usize>,
    pub sigma_scale: f64,
    /// Sampling interval for each of `F1, F2, F3, F11, F12, F21, F22`.
    pub f_ranges: [(f64, f64); 7],
    pub constraint: Constraint,
    /// Chosen from the seed when absent.
    pub frame_mode: Option<FrameMode>,
}

impl GeneratorConfig {
    pub fn new(seed: u64, n: usize) -> Self {
        GeneratorConfig {
            seed,
            n,
            m: None,
            sigma_scale: 1.0,
            f_ranges: [(-2.0, 2.0); 7],
            constraint: Constraint::None,
            frame_mode: None,
        }
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn with_frame_mode(mut self, mode: FrameMode) -> Self {
        self.frame_mode = Some(mode);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::BadConfig("n must be at least 1".into()));
        }
        if !(self.sigma_scale.is_finite() && self.sigma_scale >= 0.0) {
            return Err(Error::BadConfig(format!(
                "sigma_scale {} must be finite and nonnegative",
                self.sigma_scale
            )));
        }
        for (lo, hi) in &self.f_ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::BadConfig(format!(
                    "bad structure function range [{lo}, {hi}]"
                )));
            }
        }
        if let Some(m) = self.m {
            if 2 * m < self.n {
                return Err(Error::BadConfig(format!(
                    "n = {} does not fit into m = {m}",
                    self.n
                )));
            }
        }
        if let Some(FrameMode::Slant { theta }) = self.frame_mode {
            if !self.n.is_multiple_of(2) {
                return Err(Error::BadConfig(format!(
                    "slant frames need n even, got {}",
                    self.n
                )));
            }
            if !(0.0..=FRAC_PI_2).contains(&theta) {
                return Err(Error::BadConfig(format!(
                    "slant angle {theta} outside [0, pi/2]"
                )));
            }
            if self.m.is_some_and(|m| m < self.n) {
                return Err(Error::BadConfig(format!(
                    "slant frames need m >= n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Applies the rotation by `angle` in the `(i, j)` coordinate plane to every vector.
fn givens(frame: &mut [Vector], i: usize, j: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    for v in frame {
        let (a, b) = (v[i], v[j]);
        v[i] = c * a - s * b;
        v[j] = s * a + c * b;
    }
}

/// A random isometry of the `2m`-block commuting with `f`.
fn unitary_mix(frame: &mut [Vector], m: usize, rng: &mut ChaCha8Rng) {
    let angle = |rng: &mut ChaCha8Rng| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    for _ in 0..4 * m * m {
        if m > 1 && rng.gen_bool(0.5) {
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            let t = angle(rng);
            givens(frame, 2 * i, 2 * j, t);
            givens(frame, 2 * i + 1, 2 * j + 1, t);
        } else {
            let k = rng.gen_range(0..m);
            givens(frame, 2 * k, 2 * k + 1, angle(rng));
        }
    }
}

/// A random isometry of the `2m`-block.
fn generic_mix(frame: &mut [Vector], m: usize, rng: &mut ChaCha8Rng) {
    let d = 2 * m;
    for _ in 0..4 * d * d {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        givens(
            frame,
            i,
            j,
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
    }
}

/// Replaces the `L`-part of `frame` by a random orthonormal recombination.
fn mix_within(frame: &mut [Vector], n: usize, rng: &mut ChaCha8Rng) {
    let mut l = frame[..n].to_vec();
    for _ in 0..2 * n * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let (s, c) = rng
            .gen_range(-std::f64::consts::PI..std::f64::consts::PI)
            .sin_cos();
        let (a, b) = (l[i].clone(), l[j].clone());
        l[i] = &a * c - &b * s;
        l[j] = &a * s + &b * c;
    }
    frame[..n].clone_from_slice(&l);
}

fn draw_mode(n: usize, rng: &mut ChaCha8Rng) -> FrameMode {
    if !n.is_multiple_of(2) {
        return FrameMode::Generic;
    }
    match rng.gen_range(0..4) {
        0 => FrameMode::Generic,
        1 => FrameMode::Slant { theta: 0.0 },
        2 => FrameMode::Slant { theta: FRAC_PI_2 },
        _ => FrameMode::Slant {
            theta: rng.gen_range(0.0..FRAC_PI_2),
        },
    }
}

/// A random formal second fundamental form for a submanifold with `dim L = n`:
/// entries uniform in `[-scale, scale]`, then `constraint` enforced.
pub fn random_second_fundamental_form(
    n: usize,
    rank: usize,
    scale: f64,
    constraint: Constraint,
    seed: u64,
) -> Result<SecondFundamentalForm> {
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(Error::BadConfig(format!(
            "sigma scale {scale} must be finite and nonnegative"
        )));
    }
    Ok(random_sff(
        n,
        rank,
        scale,
        constraint,
        &mut ChaCha8Rng::seed_from_u64(seed),
    ))
}

fn random_sff(
    n: usize,
    rank: usize,
    s: f64,
    constraint: Constraint,
    rng: &mut ChaCha8Rng,
) -> SecondFundamentalForm {
    let dim = n + 2;
    let mut sff = SecondFundamentalForm::zeros(rank, dim);
    for r in 0..rank {
        for i in 0..dim {
            for j in i..dim {
                let v = if s > 0.0 { rng.gen_range(-s..=s) } else { 0.0 };
                sff.set(r, i, j, v);
            }
        }
    }
    let support = if constraint.c_compatible() {
        for r in 0..rank {
            for i in 0..dim {
                sff.set(r, i, n, 0.0);
                sff.set(r, i, n + 1, 0.0);
            }
        }
        n
    } else {
        dim
    };
    if constraint.minimal() {
        for r in 0..rank {
            let shift = (0..support).map(|i| sff.get(r, i, i)).sum::<f64>() / support as f64;
            for i in 0..support {
                sff.set(r, i, i, sff.get(r, i, i) - shift);
            }
        }
    }
    sff
}

/// A deterministic random instance for `cfg`.
pub fn random_instance(cfg: &GeneratorConfig) -> Result<SubmanifoldPoint> {
    random_instance_with_tolerances(cfg, Tolerances::default())
}

pub fn random_instance_with_tolerances(
    cfg: &GeneratorConfig,
    tol: Tolerances,
) -> Result<SubmanifoldPoint> {
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mode = cfg.frame_mode.unwrap_or_else(|| draw_mode(n, &mut rng));
    let min_m = match mode {
        FrameMode::Slant { .. } => n,
        FrameMode::Generic => n.div_ceil(2),
    };
    let m = match cfg.m {
        Some(m) => m,
        None => rng.gen_range(min_m.max(1)..=n + 2),
    };
    let ambient = AmbientModel::canonical(m)?;

    let mut frame = match mode {
        FrameMode::Slant { theta } => slant_frame(&ambient, n, theta)?,
        FrameMode::Generic => {
            let frame: Vec<Vector> = (0..n)
                .map(|k| crate::ambient::unit(ambient.dim(), k))
                .collect();
            with_xis(&ambient, frame)
        }
    };
    match mode {
        FrameMode::Slant { .. } => unitary_mix(&mut frame, m, &mut rng),
        FrameMode::Generic => generic_mix(&mut frame, m, &mut rng),
    }
    if n > 1 {
        mix_within(&mut frame, n, &mut rng);
    }

    let mut f = [0.0; 7];
    for (v, (lo, hi)) in f.iter_mut().zip(cfg.f_ranges) {
        *v = if lo < hi { rng.gen_range(lo..hi) } else { lo };
    }
    let sf = StructureFunctions::new(f);
    let sff = random_sff(n, 2 * m - n, cfg.sigma_scale, cfg.constraint, &mut rng);
    let flags = PointFlags {
        c_compatible: cfg.constraint.c_compatible(),
    };
    SubmanifoldPoint::attach_with_tolerances(ambient, sf, &frame, sff, flags, tol)
}
