//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gssf::fuzz::{run_trial, trial_configs, FuzzOptions, Trial};
use gssf::generators::{
    invariant_frame, random_instance, slant_frame, Constraint, FrameMode, GeneratorConfig,
};
use gssf::inequalities::{
    c_form_equality_classifier, delta_bound, delta_equality_shape_check, equality_instance,
    global_delta_bounds, ricci_bound, ricci_equality_diagnosis, BoundReport, F2Case, RicciVariant,
    ShapeOperatorForm,
};
use gssf::{
    AmbientModel, PointFlags, SecondFundamentalForm, SpaceFormKind, StructureFunctions,
    SubmanifoldPoint, Tolerances, Vector,
};

const CORPUS_SEED: u64 = 20_240_611;
const CORPUS_SIZE: usize = 10_000;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_configs() -> Vec<GeneratorConfig> {
    trial_configs(&FuzzOptions {
        seed: CORPUS_SEED,
        count: CORPUS_SIZE,
        n_range: (1, 6),
        constraint: None,
        tol: Tolerances::default(),
    })
}

fn corpus_trials() -> Result<Vec<Trial>, String> {
    corpus_configs()
        .par_iter()
        .enumerate()
        .map(|(i, cfg)| {
            run_trial(i, cfg, Tolerances::default()).map_err(|e| format!("trial {i}: {e}"))
        })
        .collect()
}

fn random_structure(rng: &mut ChaCha8Rng) -> StructureFunctions {
    StructureFunctions::new(std::array::from_fn(|_| rng.gen_range(-2.0..=2.0)))
}

fn unit_in(point: &SubmanifoldPoint, rng: &mut ChaCha8Rng) -> Vector {
    let c: Vec<f64> = (0..point.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let l = point.l_frame();
    let mut u = l[0].clone() * 0.0;
    for (ci, e) in c.iter().zip(l) {
        u += e * (ci / norm);
    }
    u
}

fn scalar_identity(trials: &[Trial]) -> Outcome {
    let worst = trials
        .iter()
        .map(|t| t.identity_rel_diff)
        .fold(0.0, f64::max);
    ensure(worst <= 1e-9, || {
        format!("max relative difference {worst:.3e}")
    })?;

    let ambient = AmbientModel::canonical(2).map_err(|e| e.to_string())?;
    let frame = invariant_frame(&ambient, 2).map_err(|e| e.to_string())?;
    let sf = StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0);
    let p = SubmanifoldPoint::attach(
        ambient,
        sf,
        &frame,
        SecondFundamentalForm::zeros(2, 4),
        PointFlags::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure((p.tau() - 6.0).abs() <= 1e-12, || {
        format!("spot tau = {}", p.tau())
    })?;
    Ok(format!(
        "{} instances, max rel diff {worst:.2e}, spot tau = {}",
        trials.len(),
        p.tau()
    ))
}

fn chen_ricci(trials: &[Trial]) -> Outcome {
    let worst = trials
        .iter()
        .map(|t| t.worst_ricci_slack)
        .fold(f64::INFINITY, f64::min);
    let mismatch = trials
        .iter()
        .map(|t| t.worst_defect_mismatch)
        .fold(0.0, f64::max);
    ensure(worst >= -1e-9, || format!("worst slack {worst:.3e}"))?;
    ensure(mismatch <= 1e-8, || {
        format!("defect mismatch {mismatch:.3e}")
    })?;
    Ok(format!(
        "worst slack {worst:.2e}, max |slack - defects| {mismatch:.2e}"
    ))
}

/// Gram matrix of the pair vectors, invariant under orthogonal changes of
/// the further normal directions.
fn pair_gram(pairs: &[(f64, f64)]) -> [f64; 3] {
    pairs.iter().fold([0.0; 3], |g, (a, b)| {
        [g[0] + a * a, g[1] + a * b, g[2] + b * b]
    })
}

fn delta_plane(trials: &[Trial]) -> Outcome {
    let worst = trials
        .iter()
        .filter_map(|t| t.worst_delta_slack)
        .fold(f64::INFINITY, f64::min);
    ensure(worst >= -1e-9, || format!("worst plane slack {worst:.3e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_eq = 0.0f64;
    for k in 0..100 {
        let n: usize = rng.gen_range(2..=6);
        let pairs = rng.gen_range(0..=2);
        let m = (n + 1 + pairs).div_ceil(2) + rng.gen_range(0..=1);
        let form = ShapeOperatorForm {
            a: rng.gen_range(-2.0..=2.0),
            b: rng.gen_range(-2.0..=2.0),
            c: rng.gen_range(-2.0..=2.0),
            pairs: (0..pairs)
                .map(|_| (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)))
                .collect(),
        };
        let sf = random_structure(&mut rng);
        let cfg = GeneratorConfig::new(rng.gen(), n)
            .with_m(m)
            .with_frame_mode(FrameMode::Generic);
        let base = random_instance(&cfg).map_err(|e| format!("case {k}: {e}"))?;
        let mut raw = base.l_frame().to_vec();
        raw.push(base.ambient().xi(0).clone());
        raw.push(base.ambient().xi(1).clone());
        let p = equality_instance(base.ambient().clone(), sf, n, &form, &raw)
            .map_err(|e| format!("case {k}: {e}"))?;
        let l = p.l_frame();
        let b = delta_bound(&p, &l[0], &l[1], false).map_err(|e| e.to_string())?;
        worst_eq = worst_eq.max(b.slack.abs());
        ensure(b.slack.abs() <= 1e-9, || {
            format!("case {k} ({form:?}): slack {:.3e}", b.slack)
        })?;

        let check = delta_equality_shape_check(&p, &l[0], &l[1]).map_err(|e| e.to_string())?;
        let sign = if form.c < 0.0 { -1.0 } else { 1.0 };
        let r = &check.recovered;
        let (g_want, g_got) = (pair_gram(&form.pairs), pair_gram(&r.pairs));
        let round_trip = check.matches_forms
            && (r.a - sign * form.a).abs() <= 1e-8
            && (r.b - sign * form.b).abs() <= 1e-8
            && (r.c - sign * form.c).abs() <= 1e-8
            && g_want.iter().zip(g_got).all(|(x, y)| (x - y).abs() <= 1e-8);
        ensure(round_trip, || {
            format!(
                "case {k}: {form:?} recovered as {r:?}, residual {:.3e}",
                check.residual
            )
        })?;
    }
    Ok(format!("worst plane slack {worst:.2e}; 100 equality instances, max |slack| {worst_eq:.2e}, all round-trip"))
}

fn s_form_gap() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_gap, mut worst_common, mut at_zero) = (0.0f64, 0.0f64, 0usize);
    for k in 0..1000 {
        let n = rng.gen_range(1..=6);
        let c = rng.gen_range(-2.0..=6.0);
        let constraint = Constraint::ALL[k % 4];
        let cfg = GeneratorConfig::new(rng.gen(), n).with_constraint(constraint);
        let sf = StructureFunctions::preset(SpaceFormKind::SSpaceForm, c);
        let p = random_instance(&cfg)
            .map_err(|e| e.to_string())?
            .with_structure(sf);
        let nn = n as f64;
        for u in p.l_frame() {
            let g = ricci_bound(&p, u, RicciVariant::General).map_err(|e| e.to_string())?;
            let s = ricci_bound(&p, u, RicciVariant::SForm { c }).map_err(|e| e.to_string())?;
            let (_, nu) = p.tn_decompose(u).map_err(|e| e.to_string())?;
            let gap = (g.rhs - s.rhs - 2.0 * nu.norm_squared()).abs();
            worst_gap = worst_gap.max(gap);
            ensure(gap <= 1e-9, || {
                format!("instance {k}: gap off by {gap:.3e}")
            })?;
            if nu.norm() <= 1e-9 {
                at_zero += 1;
                let common = (nn + 2.0).powi(2) / 4.0 * p.h_norm_sq() + (nn + 2.0) * sf.f1 - 4.0;
                let d = (g.rhs - common).abs().max((s.rhs - common).abs());
                worst_common = worst_common.max(d);
                ensure(d <= 1e-9, || {
                    format!("instance {k}: common value off by {d:.3e}")
                })?;
            }
        }
    }
    ensure(at_zero > 0, || {
        "no direction with NU = 0 was sampled".into()
    })?;
    Ok(format!("max gap error {worst_gap:.2e}; {at_zero} directions with NU = 0, max error {worst_common:.2e}"))
}

/// Removes `u` from the support of every shape operator and restores
/// minimality on the complement.
fn kill_direction(p: &SubmanifoldPoint, u: &Vector) -> Result<SecondFundamentalForm, String> {
    let dim = p.n() + 2;
    let c = DVector::from_vec(p.tangent_coords(u).map_err(|e| e.to_string())?);
    let proj = DMatrix::identity(dim, dim) - &c * c.transpose();
    let ops: Vec<DMatrix<f64>> = (0..p.sff().normal_rank())
        .map(|r| {
            let s = &proj * p.sff().shape_operator(r) * &proj;
            let s = (&s + s.transpose()) * 0.5;
            let shift = s.trace() / (dim - 1) as f64;
            &s - &proj * shift
        })
        .map(|s| (&s + s.transpose()) * 0.5)
        .collect();
    SecondFundamentalForm::from_shape_operators(dim, &ops).map_err(|e| e.to_string())
}

fn minimal_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut null_eq, mut defect_neq) = (0usize, 0usize);
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        // Normal rank >= 1, so a generic U carries a defect.
        let cfg = GeneratorConfig::new(rng.gen(), n)
            .with_m(n / 2 + 1)
            .with_frame_mode(FrameMode::Generic)
            .with_constraint(Constraint::Minimal);
        let base = random_instance(&cfg).map_err(|e| e.to_string())?;
        let u = unit_in(&base, &mut rng);
        let p = if k < 100 {
            base.with_sff(kill_direction(&base, &u)?)
                .map_err(|e| e.to_string())?
        } else {
            base
        };
        let d = ricci_equality_diagnosis(&p, &u).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(d.consistent && d.equality == d.in_null_space, || {
            format!(
                "instance {k}: equality {} null space {} (residual {:.3e})",
                d.equality, d.in_null_space, d.null_space_residual
            )
        })?;
        if k < 100 {
            ensure(d.in_null_space && d.equality, || {
                format!("instance {k}: constructed U not detected")
            })?;
            null_eq += 1;
        } else {
            ensure(!d.in_null_space && !d.equality, || {
                format!("instance {k}: engineered defect missed")
            })?;
            defect_neq += 1;
        }
    }
    Ok(format!(
        "{null_eq} null-space instances with equality, {defect_neq} defect instances without"
    ))
}

fn c_form_point(
    n: usize,
    seed: u64,
    c: f64,
    sff: impl Fn(usize, usize) -> SecondFundamentalForm,
) -> Result<SubmanifoldPoint, String> {
    let cfg = GeneratorConfig::new(seed, n).with_constraint(Constraint::CCompatible);
    let base = random_instance(&cfg).map_err(|e| e.to_string())?;
    let rank = base.sff().normal_rank();
    base.with_structure(StructureFunctions::preset(SpaceFormKind::CSpaceForm, c))
        .with_sff(sff(rank, n + 2))
        .map_err(|e| e.to_string())
}

fn c_form_classifier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    for k in 0..20 {
        let c = rng.gen_range(-4.0..=4.0);
        let seed = rng.gen();
        let (n, p) = if k % 2 == 0 {
            let n = rng.gen_range(3..=5);
            (n, c_form_point(n, seed, c, SecondFundamentalForm::zeros)?)
        } else {
            let h: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let p = c_form_point(2, seed, c, |rank, dim| {
                let mut s = SecondFundamentalForm::zeros(rank, dim);
                for (r, hr) in h.iter().take(rank).enumerate() {
                    s.set(r, 0, 0, *hr);
                    s.set(r, 1, 1, *hr);
                }
                s
            })?;
            (2, p)
        };
        let got = c_form_equality_classifier(&p).map_err(|e| format!("case {k}: {e}"))?;
        ensure(got.all_u_equality && got.matches, || {
            format!("case {k} (n = {n}): {got:?}")
        })?;

        let mut sff = p.sff().clone();
        sff.set(0, 0, 1, sff.get(0, 0, 1) + 0.1);
        let q = p.with_sff(sff).map_err(|e| e.to_string())?;
        let got = c_form_equality_classifier(&q).map_err(|e| e.to_string())?;
        ensure(!got.all_u_equality, || {
            format!("case {k} (n = {n}): perturbed instance still reports equality")
        })?;
        cases += 1;
    }
    Ok(format!(
        "{cases} equality instances and their perturbations classified"
    ))
}

fn slant_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut worst_angle = 0.0f64;
    for n in [2, 4] {
        for theta in [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let ambient = AmbientModel::canonical(n).map_err(|e| e.to_string())?;
            let frame = slant_frame(&ambient, n, theta).map_err(|e| e.to_string())?;
            let sf = random_structure(&mut rng);
            let p = SubmanifoldPoint::attach(
                ambient,
                sf,
                &frame,
                SecondFundamentalForm::zeros(n, n + 2),
                PointFlags::default(),
            )
            .map_err(|e| e.to_string())?;
            let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
            let mut samples = p.l_frame().to_vec();
            samples.extend((0..10).map(|_| unit_in(&p, &mut rng)));
            for x in &samples {
                let (tx, nx) = p.tn_decompose(x).map_err(|e| e.to_string())?;
                let (ttx, _) = p.tn_decompose(&tx).map_err(|e| e.to_string())?;
                worst = worst.max((ttx + x * c2).amax());
                for y in &samples {
                    let (_, ny) = p.tn_decompose(y).map_err(|e| e.to_string())?;
                    let fxfy = p.ambient().apply_f(x).dot(&p.ambient().apply_f(y));
                    worst = worst.max((nx.dot(&ny) - s2 * fxfy).abs());
                }
            }
            worst = worst.max((p.t_norm_sq() - n as f64 * c2).abs());
            worst = worst.max((p.n_norm_sq() - n as f64 * s2).abs());
            let probed = p
                .slant_probe()
                .angle()
                .ok_or_else(|| format!("n = {n}, theta = {theta}: no angle"))?;
            worst_angle = worst_angle.max((probed - theta).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("identity error {worst:.3e}"))?;
    ensure(worst_angle <= 1e-6, || {
        format!("probe error {worst_angle:.3e}")
    })?;
    Ok(format!(
        "max identity error {worst:.2e}, max probe error {worst_angle:.2e}"
    ))
}

fn four_dim_slant() -> Outcome {
    let results: Vec<Result<(bool, f64), String>> = (0..500u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(8_000 + k);
            let constraint = if k % 2 == 0 {
                Constraint::CCompatible
            } else {
                Constraint::MinimalAndCCompatible
            };
            let theta = rng.gen_range(0.0..=FRAC_PI_2);
            let cfg = GeneratorConfig::new(rng.gen(), 2)
                .with_constraint(constraint)
                .with_frame_mode(FrameMode::Slant { theta });
            let p = random_instance(&cfg).map_err(|e| e.to_string())?;
            let g = global_delta_bounds(&p).map_err(|e| e.to_string())?;
            let four = g
                .four_dim_slant
                .ok_or_else(|| format!("instance {k}: corollary not applicable"))?;
            let minimal = p.h_norm_sq().sqrt() <= 1e-9;
            ensure(four.c_compatible && four.bound.holds(1e-9), || {
                format!("instance {k}: slack {:.3e}", four.bound.slack)
            })?;
            ensure(four.bound.equality == minimal, || {
                format!(
                    "instance {k}: equality {} but |H| = {:.3e}",
                    four.bound.equality,
                    p.h_norm_sq().sqrt()
                )
            })?;
            Ok((minimal, four.bound.slack))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let minimal = results.iter().filter(|r| r.0).count();
    let worst = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);

    let ambient = AmbientModel::canonical(2).map_err(|e| e.to_string())?;
    let frame = invariant_frame(&ambient, 2).map_err(|e| e.to_string())?;
    let sf = StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0);
    let flags = PointFlags { c_compatible: true };
    let p = SubmanifoldPoint::attach(
        ambient,
        sf,
        &frame,
        SecondFundamentalForm::zeros(2, 4),
        flags,
    )
    .map_err(|e| e.to_string())?;
    let four = global_delta_bounds(&p)
        .map_err(|e| e.to_string())?
        .four_dim_slant
        .ok_or("spot: not applicable")?;
    ensure(
        (four.bound.lhs - 4.0).abs() <= 1e-12 && (four.bound.rhs - 4.0).abs() <= 1e-12,
        || format!("spot: delta = {}, rhs = {}", four.bound.lhs, four.bound.rhs),
    )?;
    Ok(format!(
        "500 instances ({minimal} minimal), worst slack {worst:.2e}; spot delta = rhs = {}",
        four.bound.rhs
    ))
}

fn f2_sign() -> Outcome {
    let configs: Vec<GeneratorConfig> = corpus_configs().into_iter().filter(|c| c.n >= 2).collect();
    let cases: Vec<Result<(bool, f64), String>> = configs
        .par_iter()
        .map(|cfg| {
            let p = random_instance(cfg).map_err(|e| e.to_string())?;
            let g = global_delta_bounds(&p).map_err(|e| format!("seed {}: {e}", cfg.seed))?;
            let positive = matches!(g.f2_case, F2Case::NonNegative { .. });
            ensure(positive == (p.structure().f2 >= 0.0), || {
                format!("seed {}: wrong case", cfg.seed)
            })?;
            Ok((positive, g.f2_case.bound().slack))
        })
        .collect();
    let cases = cases.into_iter().collect::<Result<Vec<_>, _>>()?;
    let worst = |pos: bool| {
        cases
            .iter()
            .filter(|c| c.0 == pos)
            .map(|c| c.1)
            .fold(f64::INFINITY, f64::min)
    };
    let (wp, wn) = (worst(true), worst(false));
    let positives = cases.iter().filter(|c| c.0).count();
    ensure(positives > 0 && positives < cases.len(), || {
        "corpus does not cover both signs".into()
    })?;
    ensure(wp >= -1e-9 && wn >= -1e-9, || {
        format!("worst slack {wp:.3e} (F2 >= 0), {wn:.3e} (F2 < 0)")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..30 {
        let n = if k % 2 == 0 { 4 } else { 6 };
        let pairs = rng.gen_range(0..=1);
        let m = n / 2 + 1 + pairs;
        let a = AmbientModel::canonical(m).map_err(|e| e.to_string())?;
        let half = n / 2;
        // First two vectors span a plane with F^2 = 0.
        let mut raw = vec![a.dx(0), a.dx(1), a.dy(0), a.dy(1)];
        raw.extend((2..half).flat_map(|i| [a.dx(i), a.dy(i)]));
        raw.push(a.xi(0).clone());
        raw.push(a.xi(1).clone());
        let mut sf = random_structure(&mut rng);
        sf.f2 = rng.gen_range(0.1..=2.0);
        let form = ShapeOperatorForm {
            a: rng.gen_range(-1.0..=1.0),
            b: rng.gen_range(-1.0..=1.0),
            c: rng.gen_range(-1.0..=1.0),
            pairs: (0..pairs)
                .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                .collect(),
        };
        let p = equality_instance(a, sf, n, &form, &raw).map_err(|e| e.to_string())?;
        let g = global_delta_bounds(&p).map_err(|e| e.to_string())?;
        match &g.f2_case {
            F2Case::NonNegative {
                bound,
                invariant_even: true,
            } if bound.equality => {}
            other => return Err(format!("invariant case {k}: {other:?}")),
        }
    }
    Ok(format!(
        "{} instances ({positives} with F2 >= 0), worst slack {wp:.2e} / {wn:.2e}; 30 invariant equality diagnoses",
        cases.len()
    ))
}

fn bound_reports(p: &SubmanifoldPoint) -> Result<Vec<BoundReport>, String> {
    let mut out = Vec::new();
    let l = p.l_frame();
    for u in l {
        out.push(ricci_bound(p, u, RicciVariant::General).map_err(|e| e.to_string())?);
    }
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            out.push(delta_bound(p, &l[i], &l[j], false).map_err(|e| e.to_string())?);
        }
    }
    if l.len() >= 2 {
        let g = global_delta_bounds(p).map_err(|e| e.to_string())?;
        out.push(g.f2_case.bound().clone());
        out.extend(g.four_dim_slant.map(|f| f.bound));
    }
    Ok(out)
}

fn max_field_diff(a: &BoundReport, b: &BoundReport) -> f64 {
    if a.equality != b.equality {
        return f64::INFINITY;
    }
    let mut d = (a.lhs - b.lhs)
        .abs()
        .max((a.rhs - b.rhs).abs())
        .max((a.slack - b.slack).abs());
    match (&a.defect_terms, &b.defect_terms) {
        (Some(x), Some(y)) if x.len() == y.len() => {
            for (s, t) in x.iter().zip(y) {
                d = d.max(if s.name == t.name {
                    (s.value - t.value).abs()
                } else {
                    f64::INFINITY
                });
            }
        }
        (None, None) => {}
        _ => return f64::INFINITY,
    }
    d
}

fn parameter_independence() -> Outcome {
    let configs: Vec<GeneratorConfig> = corpus_configs().into_iter().take(500).collect();
    let diffs: Vec<Result<f64, String>> = configs
        .par_iter()
        .map(|cfg| {
            let p = random_instance(cfg).map_err(|e| e.to_string())?;
            let base = bound_reports(&p)?;
            let mut worst = 0.0f64;
            for (d12, d21) in [(5.0, 5.0), (5.0, -5.0), (-5.0, 5.0), (-5.0, -5.0)] {
                let mut sf = *p.structure();
                sf.f12 += d12;
                sf.f21 += d21;
                let varied = bound_reports(&p.with_structure(sf))?;
                ensure(varied.len() == base.len(), || "report count changed".into())?;
                for (a, b) in base.iter().zip(&varied) {
                    worst = worst.max(max_field_diff(a, b));
                }
            }
            Ok(worst)
        })
        .collect();
    let worst = diffs
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("max field change {worst:.3e}"))?;
    Ok(format!(
        "500 instances x 4 shifts, max field change {worst:.2e}"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let trials = corpus_trials();
    let from_corpus = |f: fn(&[Trial]) -> Outcome| match &trials {
        Ok(t) => f(t),
        Err(e) => Err(e.clone()),
    };
    let criteria: Vec<Criterion> = vec![
        (
            "scalar identity oracle",
            Box::new(|| from_corpus(scalar_identity)),
        ),
        (
            "Chen-Ricci bound and defect identity",
            Box::new(|| from_corpus(chen_ricci)),
        ),
        (
            "plane bound and equality instances",
            Box::new(|| from_corpus(delta_plane)),
        ),
        ("S-form gap", Box::new(s_form_gap)),
        (
            "minimal equality iff null space",
            Box::new(minimal_equality),
        ),
        ("C-form classifier", Box::new(c_form_classifier)),
        ("slant machinery", Box::new(slant_machinery)),
        ("four-dimensional slant corollary", Box::new(four_dim_slant)),
        ("F2 sign bounds", Box::new(f2_sign)),
        ("F12/F21 independence", Box::new(parameter_independence)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("AC{:<2} PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("AC{:<2} FAIL {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
