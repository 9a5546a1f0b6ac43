use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Command, ExperimentConfig, SamplerKind};
use super::report::{Check, Provenance};
use crate::ensembles::{
    semicircle_diagonal, semicircle_moment, BasisKind, EnsembleSpec, GueExpSampler,
    GueProductSampler, HaarSampler, UnitarySampler, W2Sampler,
};
use crate::momentproblem::{
    empirical_moments, unitary_moment_solve_with, MomentVector, SolveOptions,
};
use crate::ratmarkov::{bessel_j1, calibrate_theta};
use crate::statlab::{
    concentration_tail, frame_potentials, haar_l1_bound, mc_moment_tables, moment_l1,
    FramePotential, MomentReport,
};
use crate::weingarten::{gram_inversion_holds, partitions, weingarten};
use crate::{Error, Result};

use Provenance::{Paper, Pilot};

pub(crate) type Outcome = (Value, Vec<Check>);

pub(crate) fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.command()? {
        Command::CalibrateTheta => calibrate(cfg),
        Command::Moments => moments(cfg),
        Command::Framepot => framepot(cfg),
        Command::SemicircleCheck => semicircle(cfg),
        Command::Weingarten => weingarten_table(cfg),
        Command::Momentsolve => momentsolve(cfg),
        Command::Concentration => concentration(cfg),
        Command::W2Suite => w2_suite(cfg),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn factorial(t: usize) -> f64 {
    (1..=t).map(|i| i as f64).product()
}

fn calibrate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let k = cfg.k.unwrap_or(1);
    let thetas = (1..=k).map(calibrate_theta).collect::<Result<Vec<_>>>()?;
    let theta = thetas[k - 1];
    let residual = bessel_j1(2.0 * theta).abs();
    let results = json!({ "k": k, "theta": theta, "thetas": thetas, "j1_at_two_theta": residual });
    Ok((
        results,
        vec![Check::at_most(
            format!("|J1(2 theta_{k})|"),
            residual,
            1e-8,
            Paper,
        )],
    ))
}

/// The ensemble selected by `sampler` (or implied by `ensemble`), with its echo.
fn build_sampler(
    cfg: &ExperimentConfig,
    default_dim: usize,
) -> Result<(Arc<dyn UnitarySampler>, Value)> {
    let seed = cfg.seed();
    let kind = cfg.sampler.unwrap_or(if cfg.ensemble.is_some() {
        SamplerKind::W2
    } else {
        SamplerKind::Haar
    });
    let dim = cfg.dim.unwrap_or(default_dim);
    if dim < 1 {
        return Err(Error::InvalidConfig("dim must be >= 1".into()));
    }
    Ok(match kind {
        SamplerKind::Haar => (
            Arc::new(HaarSampler { dim, seed }),
            json!({ "kind": "haar", "dim": dim }),
        ),
        SamplerKind::GueExp | SamplerKind::GueProduct => {
            let (theta, index) = cfg.theta_or_calibrated()?;
            let echo = json!({ "kind": kind, "dim": dim, "theta": theta, "theta_index": index });
            if kind == SamplerKind::GueExp {
                (Arc::new(GueExpSampler { dim, theta, seed }), echo)
            } else {
                (Arc::new(GueProductSampler { dim, theta, seed }), echo)
            }
        }
        SamplerKind::W2 => {
            let spec = w2_spec(cfg)?;
            let echo = json!({ "kind": "w2", "spec": to_value(&spec) });
            (Arc::new(W2Sampler { spec }), echo)
        }
    })
}

fn w2_spec(cfg: &ExperimentConfig) -> Result<EnsembleSpec> {
    cfg.ensemble
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("w2 ensemble requires field: ensemble".into()))?
        .resolve(cfg.seed())
}

fn moments(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (sampler, echo) = build_sampler(cfg, 64)?;
    let kind = cfg.sampler.unwrap_or(if cfg.ensemble.is_some() {
        SamplerKind::W2
    } else {
        SamplerKind::Haar
    });
    let p_max = cfg.p_max.unwrap_or(6);
    let (report, second) = mc_moment_tables(sampler.as_ref(), p_max, cfg.samples_or(1000)?)?;
    let (l1, l1_err) = moment_l1(&report);
    let mut checks = Vec::new();
    match kind {
        SamplerKind::Haar => {
            for r in &report.rows {
                checks.push(Check::at_most(
                    format!("|mean btr U^{}| / stderr", r.p),
                    r.mean().norm() / r.stderr,
                    4.0,
                    Paper,
                ));
            }
            for r in &second {
                let z = (r.mean - r.reference).abs() / r.stderr;
                checks.push(Check::at_most(
                    format!("|E|tr U^{}|^2 - min(j,N)| / stderr", r.j),
                    z,
                    5.0,
                    Paper,
                ));
            }
            let bound = haar_l1_bound(p_max, report.dim) + 4.0 * l1_err;
            checks.push(Check::at_most(
                "moment l1 vs Haar expectation bound",
                l1,
                bound,
                Paper,
            ));
        }
        SamplerKind::GueExp => {
            let r = &report.rows[0];
            checks.push(Check::at_most(
                "|mean btr e^{i theta G}| - 3 stderr",
                r.mean().norm() - 3.0 * r.stderr,
                0.02,
                Pilot,
            ));
            if let (Some(r2), Some(theta)) = (report.rows.get(1), echo["theta"].as_f64()) {
                let limit = (bessel_j1(4.0 * theta) / (2.0 * theta)).abs();
                checks.push(Check::at_most(
                    "||mean btr p=2| - |J1(4 theta)/(2 theta)||",
                    (r2.mean().norm() - limit).abs(),
                    0.03,
                    Pilot,
                ));
            }
        }
        SamplerKind::GueProduct | SamplerKind::W2 => {
            for r in &report.rows {
                checks.push(Check::at_most(
                    format!("|mean btr W^{}| - 3 stderr", r.p),
                    r.mean().norm() - 3.0 * r.stderr,
                    0.05,
                    Pilot,
                ));
            }
        }
    }
    let results = json!({
        "ensemble": echo,
        "moments": to_value(&report),
        "second_moments": to_value(&second),
        "l1": { "value": l1, "error": l1_err, "haar_bound": haar_l1_bound(p_max, report.dim) },
    });
    Ok((results, checks))
}

/// Frame potentials of `sampler` for `T = 1..=t_max` and an MC Haar reference of the same size.
fn frame_potential_block(
    sampler: &dyn UnitarySampler,
    t_max: usize,
    pairs: usize,
    tolerance: f64,
    seed: u64,
) -> Result<(Value, Vec<Check>)> {
    let orders: Vec<usize> = (1..=t_max).collect();
    let est = frame_potentials(sampler, &orders, pairs)?;
    let haar = frame_potentials(
        &HaarSampler {
            dim: sampler.dim(),
            seed: seed ^ 0x4a11,
        },
        &orders,
        pairs,
    )?;
    let mut checks = Vec::new();
    for (e, h) in est.iter().zip(&haar) {
        let tf = factorial(e.t);
        checks.push(Check::at_most(
            format!("frame potential T={} relative error vs T!", e.t),
            (e.estimate - tf).abs() / tf,
            tolerance,
            Pilot,
        ));
        checks.push(Check::at_most(
            format!("Haar reference T={} |F - T!| / stderr", h.t),
            (h.estimate - tf).abs() / h.stderr,
            4.0,
            Paper,
        ));
    }
    let row = |f: &FramePotential| json!({ "T": f.t, "estimate": f.estimate, "stderr": f.stderr, "pairs": f.pairs, "reference": factorial(f.t) });
    let results = json!({
        "frame_potentials": est.iter().map(row).collect::<Vec<_>>(),
        "haar_reference": haar.iter().map(row).collect::<Vec<_>>(),
    });
    Ok((results, checks))
}

fn basis_tolerance(basis: BasisKind) -> f64 {
    match basis {
        BasisKind::Haar => 0.10,
        BasisKind::Circuit | BasisKind::HashedCircuit => 0.15,
    }
}

fn framepot(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (sampler, echo) = build_sampler(cfg, 16)?;
    let t_max = cfg.t.unwrap_or(2);
    let tolerance = cfg
        .ensemble
        .as_ref()
        .map_or(0.10, |e| basis_tolerance(e.basis));
    let (mut results, checks) = frame_potential_block(
        sampler.as_ref(),
        t_max,
        cfg.samples_or(2000)?,
        tolerance,
        cfg.seed(),
    )?;
    results["ensemble"] = echo;
    Ok((results, checks))
}

fn semicircle(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.dim.unwrap_or(1024);
    let q = cfg.q.unwrap_or(4);
    let d = semicircle_diagonal(n, q)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=q {
        let got = d.normalized_power_trace(k as u32).re;
        let want = semicircle_moment(k as u32);
        let bound = 2f64.powi(k as i32) * (2 * q + 4) as f64 / n as f64;
        rows.push(json!({ "k": k, "btr": got, "semicircle": want, "deviation": (got - want).abs(), "bound": bound }));
        checks.push(Check::at_most(
            format!("|btr D^{k} - m_{k}|"),
            (got - want).abs(),
            bound,
            Paper,
        ));
    }
    let norm = d.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    checks.push(Check::at_most("||D||_op", norm, 2.0, Paper));
    let results =
        json!({ "N": n, "q": q, "rows": rows, "operator_norm": norm, "diagonal": d.values });
    Ok((results, checks))
}

fn weingarten_table(cfg: &ExperimentConfig) -> Result<Outcome> {
    let q = cfg.require(cfg.q, "q")?;
    let n = cfg.require(cfg.dim, "N")? as u64;
    let mut values = Vec::new();
    for pi in partitions(q)? {
        let w = weingarten(&pi, n)?;
        values.push(
            json!({ "cycle_type": pi.parts(), "value": w.to_string(), "approx": w.to_f64() }),
        );
    }
    let gram = gram_inversion_holds(q, n)?;
    let results = json!({ "q": q, "N": n, "values": values, "gram_inversion": gram });
    Ok((
        results,
        vec![Check::at_most(
            "Gram inversion defect",
            if gram { 0.0 } else { 1.0 },
            0.0,
            Paper,
        )],
    ))
}

fn momentsolve(cfg: &ExperimentConfig) -> Result<Outcome> {
    let alpha = MomentVector::try_new(
        cfg.alpha
            .clone()
            .ok_or_else(|| Error::InvalidConfig("momentsolve requires field: alpha".into()))?,
    )
    .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let t = alpha.order();
    let n = cfg
        .dim
        .unwrap_or_else(|| crate::momentproblem::guaranteed_dimension(t.max(1)));
    let sol = unitary_moment_solve_with(
        &alpha,
        n,
        SolveOptions {
            best_effort: cfg.best_effort,
        },
    )?;
    let achieved = empirical_moments(&sol.angles, t);
    let results = json!({
        "T": t,
        "N": n,
        "l1": alpha.l1(),
        "residual": sol.residual,
        "best_effort": sol.best_effort,
        "achieved": achieved.entries(),
        "angles": sol.angles,
    });
    Ok((
        results,
        vec![Check::at_most(
            "max per-moment residual",
            sol.residual,
            1e-8,
            Paper,
        )],
    ))
}

/// Ten equispaced `t` up to where the bound `exp(-N t^2 / s)` drops to `1e-3`.
fn tail_grid(n: usize, s: f64) -> Vec<f64> {
    let t_max = (s * 1000f64.ln() / n as f64).sqrt();
    (1..=10).map(|j| t_max * j as f64 / 10.0).collect()
}

fn concentration(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.dim.unwrap_or(128);
    let p = cfg.p.unwrap_or(1);
    let (theta, index) = cfg.theta_or_calibrated()?;
    let samples = cfg.samples_or(2000)?;
    if p == 0 {
        return Err(Error::InvalidConfig("p must be >= 1".into()));
    }
    // p = 1: btr e^{i theta G}; p >= 2: btr (e^{i theta G} e^{i theta G'})^p.
    let (statistic, s) = if p == 1 {
        ("btr exp(i theta G)", 2.0 * theta * theta)
    } else {
        (
            "btr (exp(i theta G) exp(i theta G'))^p",
            4.0 * (p * p) as f64 * theta * theta,
        )
    };
    let grid = tail_grid(n, s);
    let bound = |t: f64| (-(n as f64) * t * t / s).exp();
    let rows = if p == 1 {
        let sm = GueExpSampler {
            dim: n,
            theta,
            seed: cfg.seed(),
        };
        concentration_tail(
            |i| Ok(sm.moments(i as u64, 1)?.entries()[0]),
            bound,
            &grid,
            samples,
        )?
    } else {
        let sm = GueProductSampler {
            dim: n,
            theta,
            seed: cfg.seed(),
        };
        concentration_tail(
            |i| Ok(sm.moments(i as u64, p)?.entries()[p - 1]),
            bound,
            &grid,
            samples,
        )?
    };
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let results = json!({
        "statistic": statistic, "N": n, "p": p, "theta": theta, "theta_index": index,
        "samples": samples, "rows": to_value(&rows),
    });
    Ok((
        results,
        vec![Check::at_most(
            "t values with Wilson lower limit above bound",
            flagged as f64,
            0.0,
            Paper,
        )],
    ))
}

fn w2_suite(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = w2_spec(cfg)?;
    let p_max = cfg.p_max.unwrap_or(8);
    let samples = cfg.samples_or(300)?;
    let w2 = W2Sampler { spec: spec.clone() };
    let single = GueExpSampler {
        dim: spec.dim,
        theta: spec.theta,
        seed: cfg.seed(),
    };
    let (w2_report, _) = mc_moment_tables(&w2, p_max, samples)?;
    let (single_report, _) = mc_moment_tables(&single, p_max, samples)?;
    let (w2_l1, w2_err) = moment_l1(&w2_report);
    let (s_l1, s_err) = moment_l1(&single_report);
    let combined = (w2_err * w2_err + s_err * s_err).sqrt();
    let mut checks = vec![Check::at_most(
        "l1(W2) + 3 combined stderr - l1(single exponential)",
        w2_l1 + 3.0 * combined - s_l1,
        0.0,
        Paper,
    )];
    for r in &w2_report.rows {
        checks.push(Check::at_most(
            format!("|mean btr W^{}| - 3 stderr", r.p),
            r.mean().norm() - 3.0 * r.stderr,
            0.05,
            Pilot,
        ));
    }
    let mut results = json!({
        "ensemble": to_value(&spec),
        "moments": to_value(&w2_report),
        "single_exponential": to_value::<MomentReport>(&single_report),
        "l1": { "w2": w2_l1, "w2_error": w2_err, "single_exponential": s_l1, "single_exponential_error": s_err },
    });
    // Frame potentials are only affordable at small dimension.
    if spec.dim <= 64 {
        let (fp, fp_checks) = frame_potential_block(
            &w2,
            cfg.t.unwrap_or(2),
            samples,
            basis_tolerance(spec.basis),
            cfg.seed(),
        )?;
        results["frame_potential"] = fp;
        checks.extend(fp_checks);
    }
    Ok((results, checks))
}
