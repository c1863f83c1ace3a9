//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` print FAIL with their numbers but do
//! not fail the test binary; any other failure does.

use std::process::{Command, ExitCode};
use std::time::Instant;

use normdiv::commands::Context;
use normdiv::report::CheckOutcome;
use normdiv::{par, suite, ExperimentConfig, LabResult};
use normdiv_core::asymptotic::{assemble_constant, main_term};
use normdiv_core::divisor::{wolke_ratio, WolkeWeight};
use normdiv_core::{Field, FieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[8];

const CUBIC_PINS: [(u64, u128); 4] = [(50, 49882), (100, 268922), (200, 1410352), (400, 7121960)];
const QUARTIC_PINS: [(u64, u128); 3] = [(30, 5079676), (60, 64797948), (100, 393078577)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: &[CheckOutcome]) -> Outcome {
    let pass = checks.iter().all(CheckOutcome::passed);
    let detail = checks
        .iter()
        .map(|c| format!("{}: {}/{} failed", c.name, c.failures, c.cases))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn fields() -> Vec<Field> {
    vec![
        Field::new(FieldSpec::cyclic_cubic()).unwrap(),
        Field::new(FieldSpec::biquadratic()).unwrap(),
    ]
}

fn context(field: &str, x: &[u64]) -> LabResult<Context> {
    Context::new(ExperimentConfig {
        field: field.into(),
        x: x.to_vec(),
        ..ExperimentConfig::default()
    })
}

fn inclusion_exclusion() -> LabResult<Outcome> {
    let mut checks = Vec::new();
    for f in fields() {
        checks.push(suite::inclusion_exclusion(&f, 60, 10_000)?);
    }
    Ok(from_checks(&checks))
}

fn varrho() -> LabResult<Outcome> {
    let budget = ExperimentConfig::default().budgets.direct;
    let mut checks = Vec::new();
    for f in fields() {
        checks.push(suite::varrho_identity(&f, 500, budget)?);
    }
    Ok(from_checks(&checks))
}

fn rho() -> LabResult<Outcome> {
    let budget = ExperimentConfig::default().budgets.direct;
    let mut checks = Vec::new();
    for f in fields() {
        checks.extend(suite::rho_checks(&f, 200, 200, 1, budget)?);
    }
    Ok(from_checks(&checks))
}

fn hyperbola() -> LabResult<Outcome> {
    Ok(from_checks(&[suite::hyperbola_identity(100_000, &[10, 50, 316], &[3, 4])?]))
}

fn counting_lemma() -> LabResult<Outcome> {
    let ctx = context("cubic9", &[50, 100, 200, 400])?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ideals = Vec::new();
    while ideals.len() < 100 {
        let n = rng.gen_range(2..=100_000u64);
        let list = ctx.field.ideals_of_norm(n)?;
        if !list.is_empty() {
            let i = rng.gen_range(0..list.len());
            ideals.push(list[i].clone());
        }
    }
    let (vol, _) = ctx.volume()?;
    let table = normdiv::commands::counting_table(&ctx, &ideals, &ctx.cfg.x, &vol)?;
    let col = table.columns.iter().position(|c| c.name == "normalized").unwrap();
    let c_meas = table
        .rows
        .iter()
        .map(|r| match r[col] {
            normdiv::report::Cell::Float(v) => v,
            _ => unreachable!(),
        })
        .fold(0.0, f64::max);
    Ok(Outcome {
        pass: c_meas <= 10.0,
        detail: format!("c_meas = {c_meas:.4} over {} cases", table.rows.len()),
    })
}

fn constant() -> LabResult<Outcome> {
    let mut pass = true;
    let mut detail = Vec::new();
    for f in fields() {
        let factors = par::euler_factors(&f, 4000)?;
        for p0 in [1000, 2000] {
            let a = assemble_constant(&f, p0, &factors);
            let b = assemble_constant(&f, 2 * p0, &factors);
            let diff = (b.value - a.value).abs().to_f64();
            let ok = diff <= a.tail_bound && a.value.hi > 0.0;
            pass &= ok;
            detail.push(format!(
                "{} P0={p0}: C={:.10} diff={diff:.2e} tail={:.2e}",
                f.spec().name,
                a.value.to_f64(),
                a.tail_bound
            ));
        }
    }
    Ok(Outcome { pass, detail: detail.join("; ") })
}

fn binomial() -> LabResult<Outcome> {
    Ok(from_checks(&[suite::binomial_identity(3..=8)]))
}

/// Pins, ratio range and |ratio − 1| nonincreasing for X ≥ `from`.
fn trend(field: &str, pins: &[(u64, u128)], from: u64) -> LabResult<Outcome> {
    let xs: Vec<u64> = pins.iter().map(|p| p.0).collect();
    let ctx = context(field, &xs)?;
    let (vol, _) = ctx.volume()?;
    let c = ctx.constant(ctx.cfg.p0)?.value.to_f64();
    let b = &ctx.cfg.budgets;
    let mut ratios = Vec::new();
    let mut pinned = true;
    for &(x, pin) in pins {
        let m = par::m_exact(&ctx.field, &ctx.region, x, b.points, b.segment)?;
        pinned &= m == pin;
        ratios.push(m as f64 / main_term(c, vol.value, ctx.k(), x as f64));
    }
    let in_range = ratios.iter().all(|r| (0.4..=1.6).contains(r));
    let start = xs.iter().position(|&x| x >= from).unwrap_or(0);
    let dev: Vec<f64> = ratios[start..].iter().map(|r| (r - 1.0).abs()).collect();
    let monotone = dev.windows(2).all(|w| w[1] <= w[0]);
    let shown: Vec<String> = xs
        .iter()
        .zip(&ratios)
        .map(|(x, r)| format!("X={x}: {r:.4}"))
        .collect();
    Ok(Outcome {
        pass: pinned && in_range && monotone,
        detail: format!(
            "{}; pins {}, range {}, |ratio-1| nonincreasing {}",
            shown.join(", "),
            if pinned { "ok" } else { "CHANGED" },
            if in_range { "ok" } else { "violated" },
            if monotone { "ok" } else { "violated" },
        ),
    })
}

fn wolke() -> LabResult<Outcome> {
    let f = Field::new(FieldSpec::cyclic_cubic())?;
    let mut ratios = Vec::new();
    for e in 5..=10 {
        let v = 1u64 << e;
        let s = par::wolke_sum(&f, v, WolkeWeight::DegreeOneTau)?;
        ratios.push(wolke_ratio(s, v, 3));
    }
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    Ok(Outcome {
        pass: lo > 0.0 && hi / lo < 3.0,
        detail: format!(
            "ratios {}; spread {:.3}",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" "),
            hi / lo
        ),
    })
}

fn determinism() -> LabResult<Outcome> {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, "field = \"cubic9\"\nx = [50, 100]\n").unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_normdiv"))
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .arg("theorem")
            .env("NORMDIV_THREADS", if run == "a" { "1" } else { "2" })
            .output()
            .unwrap();
        if !status.status.success() {
            return Ok(Outcome {
                pass: false,
                detail: format!("exit {:?}", status.status.code()),
            });
        }
        outputs.push(std::fs::read(out.join("theorem.csv")).unwrap());
    }
    Ok(Outcome {
        pass: outputs[0] == outputs[1],
        detail: format!("{} bytes", outputs[0].len()),
    })
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> LabResult<Outcome>)> = vec![
        (1, "inclusion-exclusion", inclusion_exclusion),
        (2, "varrho direct = assembled", varrho),
        (3, "rho on degree-one primes and multiplicativity", rho),
        (4, "hyperbola identity", hyperbola),
        (5, "counting lemma", counting_lemma),
        (6, "constant stabilization", constant),
        (7, "binomial residue identity", binomial),
        (8, "trend, cubic", || trend("cubic9", &CUBIC_PINS, 100)),
        (9, "trend, quartic", || trend("q_sqrt2_i", &QUARTIC_PINS, 60)),
        (10, "Wolke average", wolke),
        (11, "determinism", determinism),
    ];
    let only: Vec<u32> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = f().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&n);
        println!(
            "criterion {n:>2} {} {name} [{secs:.1} s] {}{}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            if !o.pass && known { " (known failure)" } else { "" }
        );
        if !o.pass && !known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
