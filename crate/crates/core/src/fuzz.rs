//! Seeded fuzzing of the scalar identity, the Chen-Ricci bound and the
//! plane bound over random formal instances.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{random_instance_with_tolerances, Constraint, GeneratorConfig};
use crate::inequalities::{delta_bound, ricci_bound, RicciVariant};
use crate::report::{DEFECT_IDENTITY_TOL, TOOL, VERSION};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzOptions {
    pub seed: u64,
    pub count: usize,
    /// Inclusive range for `n`.
    pub n_range: (usize, usize),
    /// Cycles through all constraints when absent.
    pub constraint: Option<Constraint>,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub constraint: Constraint,
    pub identity_rel_diff: f64,
    pub worst_ricci_slack: f64,
    pub worst_delta_slack: Option<f64>,
    pub worst_defect_mismatch: f64,
    pub violations: Vec<Violation>,
}

impl Trial {
    pub fn worst_slack(&self) -> f64 {
        self.worst_delta_slack
            .map_or(self.worst_ricci_slack, |d| d.min(self.worst_ricci_slack))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offender {
    pub index: usize,
    pub seed: u64,
    pub check: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub pass_count: usize,
    pub fail_count: usize,
    pub worst_slack: f64,
    pub worst_slack_trial: usize,
    pub max_identity_rel_diff: f64,
    pub first_failure: Option<Offender>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub count: usize,
    pub n_range: [usize; 2],
    pub constraint: Option<Constraint>,
    pub tolerance: f64,
    pub trials: Vec<Trial>,
    pub summary: FuzzSummary,
}

impl FuzzReport {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

/// Per-trial seeds and dimensions, drawn sequentially from the master seed.
pub fn trial_configs(opts: &FuzzOptions) -> Vec<GeneratorConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.count)
        .map(|i| {
            let n = rng.gen_range(opts.n_range.0..=opts.n_range.1);
            let constraint = opts
                .constraint
                .unwrap_or(Constraint::ALL[i % Constraint::ALL.len()]);
            GeneratorConfig::new(rng.next_u64(), n).with_constraint(constraint)
        })
        .collect()
}

/// Runs every oracle on one generated instance.
pub fn run_trial(index: usize, cfg: &GeneratorConfig, tol: Tolerances) -> Result<Trial> {
    let p = random_instance_with_tolerances(cfg, tol)?;
    let mut violations = Vec::new();
    let identity = p.scalar_identity_check();
    if identity.rel_diff > tol.equality {
        violations.push(Violation {
            check: "scalar_identity".into(),
            value: identity.rel_diff,
        });
    }

    let mut worst_ricci = f64::INFINITY;
    let mut worst_mismatch = 0.0f64;
    for (i, u) in p.l_frame().iter().enumerate() {
        let b = ricci_bound(&p, u, RicciVariant::General)?;
        worst_ricci = worst_ricci.min(b.slack);
        if !b.holds(tol.equality) {
            violations.push(Violation {
                check: format!("ricci_bound[e{}]", i + 1),
                value: b.slack,
            });
        }
        let mismatch = (b.slack - b.defect_sum().unwrap_or(0.0)).abs();
        worst_mismatch = worst_mismatch.max(mismatch);
        if mismatch > DEFECT_IDENTITY_TOL {
            violations.push(Violation {
                check: format!("ricci_defects[e{}]", i + 1),
                value: mismatch,
            });
        }
    }

    let mut worst_delta: Option<f64> = None;
    let l = p.l_frame();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            let b = delta_bound(&p, &l[i], &l[j], false)?;
            worst_delta = Some(worst_delta.map_or(b.slack, |w| w.min(b.slack)));
            if !b.holds(tol.equality) {
                violations.push(Violation {
                    check: format!("delta_bound[e{},e{}]", i + 1, j + 1),
                    value: b.slack,
                });
            }
        }
    }

    Ok(Trial {
        index,
        seed: cfg.seed,
        n: p.n(),
        m: p.ambient().m(),
        constraint: cfg.constraint,
        identity_rel_diff: identity.rel_diff,
        worst_ricci_slack: worst_ricci,
        worst_delta_slack: worst_delta,
        worst_defect_mismatch: worst_mismatch,
        violations,
    })
}

pub fn run_fuzz(opts: &FuzzOptions) -> Result<FuzzReport> {
    if opts.count == 0 {
        return Err(Error::BadConfig("count must be at least 1".into()));
    }
    let (lo, hi) = opts.n_range;
    if lo == 0 || lo > hi {
        return Err(Error::BadConfig(format!("bad n range {lo}..{hi}")));
    }
    let configs = trial_configs(opts);
    let trials = configs
        .par_iter()
        .enumerate()
        .map(|(i, cfg)| run_trial(i, cfg, opts.tol))
        .collect::<Result<Vec<_>>>()?;

    let fail_count = trials.iter().filter(|t| !t.violations.is_empty()).count();
    let (worst_slack_trial, worst_slack) =
        trials
            .iter()
            .map(|t| (t.index, t.worst_slack()))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
    let first_failure = trials
        .iter()
        .find(|t| !t.violations.is_empty())
        .map(|t| Offender {
            index: t.index,
            seed: t.seed,
            check: t.violations[0].check.clone(),
            value: t.violations[0].value,
        });
    let summary = FuzzSummary {
        pass_count: trials.len() - fail_count,
        fail_count,
        worst_slack,
        worst_slack_trial,
        max_identity_rel_diff: trials
            .iter()
            .map(|t| t.identity_rel_diff)
            .fold(0.0, f64::max),
        first_failure,
    };
    Ok(FuzzReport {
        tool: TOOL,
        version: VERSION,
        seed: opts.seed,
        count: opts.count,
        n_range: [lo, hi],
        constraint: opts.constraint,
        tolerance: opts.tol.equality,
        trials,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(seed: u64, count: usize) -> FuzzOptions {
        FuzzOptions {
            seed,
            count,
            n_range: (1, 5),
            constraint: None,
            tol: Tolerances::default(),
        }
    }

    #[test]
    fn small_run_has_no_violations() {
        let r = run_fuzz(&opts(7, 60)).unwrap();
        assert_eq!(r.summary.fail_count, 0, "{:?}", r.summary.first_failure);
        assert!(r.summary.worst_slack >= -1e-9);
    }

    #[test]
    fn runs_are_reproducible() {
        assert_eq!(
            run_fuzz(&opts(3, 20)).unwrap().to_json(),
            run_fuzz(&opts(3, 20)).unwrap().to_json()
        );
    }

    #[test]
    fn bad_options_are_rejected() {
        assert!(matches!(run_fuzz(&opts(1, 0)), Err(Error::BadConfig(_))));
        let mut o = opts(1, 1);
        o.n_range = (4, 2);
        assert!(matches!(run_fuzz(&o), Err(Error::BadConfig(_))));
    }
}
