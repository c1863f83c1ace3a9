//! One function per subcommand, each producing a [`Report`].

use std::time::Instant;

use normdiv_core::arith::tau;
use normdiv_core::asymptotic::{assemble_constant, main_term, EulerProductEstimate};
use normdiv_core::divisor::{hyperbola_decompose, hyperbola_sign, wolke_ratio, WolkeWeight};
use normdiv_core::field::verify_field;
use normdiv_core::lattice::VolumeEstimate;
use normdiv_core::{Field, IdealHnf, Region};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{LabError, LabResult};
use crate::par;
use crate::report::{col, Cell, CheckOutcome, Kind, Manifest, Provenance as P, Report, Table};
use crate::suite;

pub struct Context {
    pub cfg: ExperimentConfig,
    pub field: Field,
    pub region: Region,
}

impl Context {
    pub fn new(cfg: ExperimentConfig) -> LabResult<Context> {
        cfg.validate()?;
        let spec = cfg.field_spec()?;
        let field = Field::with_seed(spec, cfg.seed)?;
        let region = cfg.region(field.degree())?;
        Ok(Context { cfg, field, region })
    }

    pub fn k(&self) -> u32 {
        self.field.degree() as u32
    }

    pub fn report(&self, command: &str) -> Report {
        Report::new(Manifest {
            command: command.to_string(),
            field: self.field.spec().name.clone(),
            config_digest: self.cfg.digest(),
            seed: self.cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads: rayon::current_num_threads(),
        })
    }

    pub fn volume(&self) -> LabResult<(VolumeEstimate, bool)> {
        let b = &self.cfg.budgets;
        Ok(self
            .field
            .region_volume_best(&self.region, b.volume_tolerance, b.volume_cells)?)
    }

    pub fn constant(&self, p0: u64) -> LabResult<EulerProductEstimate> {
        let factors = par::euler_factors(&self.field, p0)?;
        Ok(assemble_constant(&self.field, p0, &factors))
    }
}

pub fn hnf_text(h: &IdealHnf) -> String {
    let cols: Vec<String> = h
        .columns()
        .iter()
        .map(|c| {
            let v: Vec<String> = c.iter().map(i128::to_string).collect();
            format!("[{}]", v.join(" "))
        })
        .collect();
    cols.join(" ")
}

fn rat(v: &BigRational) -> Cell {
    Cell::Rational(v.clone())
}

fn check(name: &str, cases: u64, failures: u64, detail: String, start: Instant) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        cases,
        failures,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn field_verify(ctx: &Context) -> Report {
    let start = Instant::now();
    let mut r = ctx.report("field verify");
    let mut t = Table::new(
        "checks",
        vec![
            col("check", Kind::Text, P::Label),
            col("passed", Kind::Bool, P::Exact),
            col("detail", Kind::Text, P::Label),
        ],
    );
    let checks = verify_field(ctx.field.spec());
    let bad = checks.iter().filter(|c| !c.passed).count() as u64;
    for c in &checks {
        t.push(vec![Cell::text(c.name), Cell::Bool(c.passed), Cell::text(c.detail.clone())]);
    }
    r.tables.push(t);
    r.checks.push(check("field", checks.len() as u64, bad, String::new(), start));
    r.extra.insert("regulator".into(), json!(ctx.field.regulator()));
    r.extra.insert("torsion".into(), json!(ctx.field.torsion()));
    r.extra
        .insert("residue".into(), json!(ctx.field.dedekind_residue().to_f64()));
    r
}

pub fn split(ctx: &Context, p: u64) -> LabResult<Report> {
    let s = ctx.field.split_prime(p)?;
    let mut r = ctx.report("split");
    let mut t = Table::new(
        "primes",
        vec![
            col("p", Kind::Int, P::Exact),
            col("e", Kind::Int, P::Exact),
            col("f", Kind::Int, P::Exact),
            col("r", Kind::Int, P::Exact),
            col("index", Kind::Int, P::Exact),
            col("g_mod_p", Kind::Text, P::Exact),
            col("hnf", Kind::Text, P::Exact),
        ],
    );
    for pr in &s.primes {
        let g: Vec<String> = pr.g.iter().map(u64::to_string).collect();
        t.push(vec![
            Cell::int(p),
            Cell::int(s.e),
            Cell::int(s.f),
            Cell::int(s.r),
            Cell::int(pr.index as u64),
            Cell::text(g.join(" ")),
            Cell::text(hnf_text(&pr.hnf)),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

pub fn ideals(ctx: &Context, n: u64) -> LabResult<Report> {
    let list = ctx.field.ideals_of_norm(n)?;
    let mut r = ctx.report("ideals");
    let mut t = Table::new(
        "ideals",
        vec![
            col("norm", Kind::Int, P::Exact),
            col("hnf", Kind::Text, P::Exact),
            col("rho", Kind::Rational, P::Exact),
            col("generator", Kind::Text, P::Exact),
        ],
    );
    for id in &list {
        let g = ctx.field.principal_generator(id)?;
        let gs: Vec<String> = g.coords.iter().map(BigInt::to_string).collect();
        t.push(vec![
            Cell::int(n),
            Cell::text(hnf_text(id)),
            rat(&ctx.field.rho_ideal(id).value),
            Cell::text(gs.join(" ")),
        ]);
    }
    r.tables.push(t);
    r.extra
        .insert("count".into(), json!(ctx.field.count_ideals_of_norm(n)?));
    Ok(r)
}

pub fn mu(ctx: &Context, n: u64) -> LabResult<Report> {
    let m = ctx.field.mu_coefficients(n)?;
    let (star, sharp, flat) = ctx.field.star_sharp_flat(n)?;
    let mut r = ctx.report("mu");
    let mut t = Table::new(
        "mu",
        vec![
            col("hnf", Kind::Text, P::Exact),
            col("norm", Kind::Int, P::Exact),
            col("coefficient", Kind::Int, P::Exact),
        ],
    );
    for (id, c) in &m.entries {
        t.push(vec![Cell::text(hnf_text(id)), Cell::Int(id.norm()), Cell::int(*c)]);
    }
    r.tables.push(t);
    r.extra.insert("n_star".into(), json!(star.to_string()));
    r.extra.insert("n_sharp".into(), json!(sharp));
    r.extra.insert("n_flat".into(), json!(flat));
    Ok(r)
}

pub fn density_rho(ctx: &Context, n: u64) -> LabResult<Report> {
    let start = Instant::now();
    let budget = ctx.cfg.budgets.direct as u128;
    let mut r = ctx.report("density rho");
    let mut t = Table::new(
        "rho",
        vec![
            col("hnf", Kind::Text, P::Exact),
            col("lattice", Kind::Rational, P::Exact),
            col("multiplicative", Kind::Rational, P::Exact),
            col("direct", Kind::Text, P::Exact),
        ],
    );
    let mut bad = 0;
    let list = ctx.field.ideals_of_norm(n)?;
    for id in &list {
        let l = ctx.field.rho_ideal(id).value;
        let m = ctx.field.rho_multiplicative(id)?.value;
        let d = match ctx.field.rho_direct(id, budget) {
            Ok(v) => {
                if v.value != l {
                    bad += 1;
                }
                format!("{}/{}", v.value.numer(), v.value.denom())
            }
            Err(normdiv_core::Error::BudgetExceeded { .. }) => "over-budget".to_string(),
            Err(e) => return Err(e.into()),
        };
        if m != l {
            bad += 1;
        }
        t.push(vec![Cell::text(hnf_text(id)), rat(&l), rat(&m), Cell::text(d)]);
    }
    r.tables.push(t);
    r.checks
        .push(check("rho-three-way", list.len() as u64, bad, format!("norm {n}"), start));
    Ok(r)
}

pub fn density_varrho(ctx: &Context, n: u64) -> LabResult<Report> {
    let start = Instant::now();
    let d = ctx.field.varrho_direct_cached(
        n,
        ctx.cfg.budgets.direct as u128,
        &mut Default::default(),
    )?;
    let a = ctx.field.varrho_assembled(n)?;
    let mut r = ctx.report("density varrho");
    let mut t = Table::new(
        "varrho",
        vec![
            col("n", Kind::Int, P::Exact),
            col("direct", Kind::Rational, P::Exact),
            col("assembled", Kind::Rational, P::Exact),
        ],
    );
    t.push(vec![Cell::int(n), rat(&d.value), rat(&a.value)]);
    r.tables.push(t);
    r.checks.push(check(
        "varrho-direct-vs-assembled",
        1,
        u64::from(d.value != a.value),
        String::new(),
        start,
    ));
    Ok(r)
}

pub fn identities(ctx: &Context) -> LabResult<Report> {
    let mut r = ctx.report("identities");
    let b = &ctx.cfg.budgets;
    r.checks = suite::full_suite(&ctx.field, &ctx.region, ctx.cfg.seed, b.direct, b.segment)?;
    let mut t = Table::new(
        "checks",
        vec![
            col("check", Kind::Text, P::Label),
            col("cases", Kind::Int, P::Exact),
            col("failures", Kind::Int, P::Exact),
            col("detail", Kind::Text, P::Label),
        ],
    );
    for c in &r.checks {
        t.push(vec![
            Cell::text(c.name.clone()),
            Cell::int(c.cases),
            Cell::int(c.failures),
            Cell::text(c.detail.clone()),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

/// Counting-lemma columns for one ideal at one scale.
pub fn count_columns() -> Vec<crate::report::Column> {
    vec![
        col("norm", Kind::Int, P::Exact),
        col("hnf", Kind::Text, P::Exact),
        col("x", Kind::Int, P::Exact),
        col("exact", Kind::Int, P::Exact),
        col("density", Kind::Rational, P::Exact),
        col("main", Kind::Float, P::Truncated),
        col("deviation", Kind::Float, P::Truncated),
        col("envelope", Kind::Float, P::Truncated),
        col("normalized", Kind::Float, P::Truncated),
    ]
}

/// `|exact − ρ/N·vol(R_X)|` against the envelope for each ideal and scale.
pub fn counting_table(
    ctx: &Context,
    ideals: &[IdealHnf],
    xs: &[u64],
    volume: &VolumeEstimate,
) -> LabResult<Table> {
    use rayon::prelude::*;
    let field = &ctx.field;
    let gens = ideals
        .par_iter()
        .map(|id| field.principal_generator(id))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..ideals.len())
        .flat_map(|i| xs.iter().map(move |&x| (i, x)))
        .collect();
    let budget = ctx.cfg.budgets.points as u128;
    let results = jobs
        .par_iter()
        .map(|&(i, x)| {
            field
                .count_with_envelope(&ideals[i], &gens[i], &ctx.region, volume, x, budget)
                .map(|c| (i, x, c))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new("count", count_columns());
    for (i, x, c) in results {
        t.push(vec![
            Cell::Int(ideals[i].norm()),
            Cell::text(hnf_text(&ideals[i])),
            Cell::int(x),
            Cell::int(c.exact),
            rat(&c.density),
            Cell::Float(c.main),
            Cell::Float(c.deviation()),
            Cell::Float(c.envelope),
            Cell::Float(c.normalized()),
        ]);
    }
    Ok(t)
}

pub fn count(ctx: &Context, norm: u64, x: u64) -> LabResult<Report> {
    let ideals = ctx.field.ideals_of_norm(norm)?;
    let (vol, _) = ctx.volume()?;
    let mut r = ctx.report("count");
    r.tables.push(counting_table(ctx, &ideals, &[x], &vol)?);
    r.extra.insert("volume".into(), json!(vol.value));
    r.extra.insert("volume_half_gap".into(), json!(vol.half_gap));
    Ok(r)
}

pub fn constant(ctx: &Context, p0: u64) -> LabResult<Report> {
    let start = Instant::now();
    let factors = par::euler_factors(&ctx.field, 2 * p0)?;
    let a = assemble_constant(&ctx.field, p0, &factors);
    let b = assemble_constant(&ctx.field, 2 * p0, &factors);
    let mut r = ctx.report("constant");
    let mut t = Table::new(
        "constant",
        vec![
            col("p0", Kind::Int, P::Exact),
            col("primes", Kind::Int, P::Exact),
            col("c", Kind::Float, P::Truncated),
            col("c_lo", Kind::Float, P::Truncated),
            col("tail_bound", Kind::Float, P::MeasuredConstant),
            col("truncation_bound", Kind::Float, P::MeasuredConstant),
            col("naive", Kind::Float, P::Truncated),
            col("depth_limited", Kind::Int, P::Exact),
        ],
    );
    for e in [&a, &b] {
        t.push(vec![
            Cell::int(e.p0),
            Cell::int(e.primes as u64),
            Cell::Float(e.value.hi),
            Cell::Float(e.value.lo),
            Cell::Float(e.tail_bound),
            Cell::Float(e.truncation_bound),
            Cell::Float(e.naive.to_f64()),
            Cell::int(e.depth_limited.len() as u64),
        ]);
    }
    r.tables.push(t);
    let mut ft = Table::new(
        "factors",
        vec![
            col("p", Kind::Int, P::Exact),
            col("e", Kind::Int, P::Exact),
            col("f", Kind::Int, P::Exact),
            col("r", Kind::Int, P::Exact),
            col("depth", Kind::Int, P::Exact),
            col("depth_limited", Kind::Bool, P::Exact),
            col("factor", Kind::Float, P::Truncated),
            col("normalized", Kind::Float, P::Truncated),
            col("truncation", Kind::Float, P::MeasuredConstant),
        ],
    );
    for f in factors.iter().filter(|f| f.p <= p0) {
        ft.push(vec![
            Cell::int(f.p),
            Cell::int(f.e),
            Cell::int(f.f),
            Cell::int(f.r),
            Cell::int(f.depth),
            Cell::Bool(f.depth_limited),
            Cell::Float(f.factor.to_f64()),
            Cell::Float(f.normalized.to_f64()),
            Cell::Float(f.truncation),
        ]);
    }
    r.tables.push(ft);
    let diff = (b.value - a.value).abs().to_f64();
    let positive = a.value.hi > 0.0 && factors.iter().all(|f| f.factor.hi > 0.0);
    r.checks.push(check(
        "constant-stabilization",
        2,
        u64::from(diff > a.tail_bound) + u64::from(!positive),
        format!("|C(2P0) − C(P0)| = {diff:e}, tail bound {:e}", a.tail_bound),
        start,
    ));
    Ok(r)
}

pub fn sum_exact(ctx: &Context, x: u64) -> LabResult<Report> {
    let b = &ctx.cfg.budgets;
    let m = par::m_exact(&ctx.field, &ctx.region, x, b.points, b.segment)?;
    let mut r = ctx.report("sum-exact");
    let mut t = Table::new(
        "sum",
        vec![col("x", Kind::Int, P::Exact), col("m_exact", Kind::Int, P::Exact)],
    );
    t.push(vec![Cell::int(x), Cell::int(m)]);
    r.tables.push(t);
    Ok(r)
}

pub fn hyperbola(ctx: &Context, n: u64, y: u64, k: Option<u32>) -> LabResult<Report> {
    let start = Instant::now();
    let k = k.unwrap_or(ctx.k());
    if k < 2 {
        return Err(LabError::Config("k must be at least 2".into()));
    }
    let d = hyperbola_decompose(n, y, k)?;
    let mut r = ctx.report("hyperbola");
    let mut t = Table::new(
        "terms",
        vec![
            col("term", Kind::Text, P::Label),
            col("sign", Kind::Int, P::Exact),
            col("count", Kind::Int, P::Exact),
        ],
    );
    t.push(vec![Cell::text("all_small"), Cell::int(1), Cell::int(d.all_small)]);
    for (j, b) in d.large.iter().enumerate() {
        let j = j as u32 + 1;
        t.push(vec![
            Cell::text(format!("large_{j}")),
            Cell::int(hyperbola_sign(k, j)),
            Cell::int(*b),
        ]);
    }
    r.tables.push(t);
    let expect = tau(n, k) as i128;
    r.checks.push(check(
        "hyperbola",
        1,
        u64::from(d.total() != expect),
        format!("total {} against τ_{k}({n}) = {expect}", d.total()),
        start,
    ));
    Ok(r)
}

pub fn sharp(ctx: &Context, x: u64, delta: u64) -> LabResult<Report> {
    let start = Instant::now();
    let b = &ctx.cfg.budgets;
    let s = par::sharp_terms(&ctx.field, &ctx.region, x, delta, b.points, b.segment)?;
    let k = ctx.k();
    let mut r = ctx.report("sharp");
    let mut t = Table::new(
        "terms",
        vec![
            col("term", Kind::Text, P::Label),
            col("sign", Kind::Int, P::Exact),
            col("value", Kind::Int, P::Exact),
        ],
    );
    t.push(vec![Cell::text("m_exact"), Cell::int(1), Cell::int(s.tau)]);
    for (j, m) in s.m.iter().enumerate() {
        let j = j as u32 + 1;
        t.push(vec![Cell::text(format!("M_{j}")), Cell::int(hyperbola_sign(k, j)), Cell::int(*m)]);
    }
    for (j, u) in s.u.iter().enumerate() {
        let j = j as u32 + 1;
        t.push(vec![Cell::text(format!("U_{j}")), Cell::int(hyperbola_sign(k, j)), Cell::int(*u)]);
    }
    t.push(vec![Cell::text("all_small"), Cell::int(1), Cell::int(s.all_small)]);
    t.push(vec![Cell::text("correction"), Cell::int(1), Cell::int(s.correction())]);
    t.push(vec![Cell::text("E"), Cell::int(1), Cell::int(s.e)]);
    r.tables.push(t);
    let ok = s.signed_main() + s.correction() == s.tau as i128
        && s.correction().unsigned_abs() <= s.correction_bound();
    r.checks.push(check(
        "sharp-reassembly",
        1,
        u64::from(!ok),
        format!("X = {x}, Δ = {delta}"),
        start,
    ));
    Ok(r)
}

pub fn theorem_columns() -> Vec<crate::report::Column> {
    vec![
        col("x", Kind::Int, P::Exact),
        col("m_exact", Kind::Int, P::Exact),
        col("main_term", Kind::Float, P::Truncated),
        col("ratio", Kind::Float, P::Truncated),
        col("volume", Kind::Float, P::Truncated),
        col("volume_half_gap", Kind::Float, P::Truncated),
        col("c", Kind::Float, P::Truncated),
        col("c_tail_bound", Kind::Float, P::MeasuredConstant),
    ]
}

pub fn theorem(ctx: &Context) -> LabResult<Report> {
    let mut r = ctx.report("theorem");
    let b = &ctx.cfg.budgets;
    let k = ctx.k();
    let t0 = Instant::now();
    let (vol, vol_ok) = ctx.volume()?;
    let vol_secs = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let c = ctx.constant(ctx.cfg.p0)?;
    let c_secs = t0.elapsed().as_secs_f64();
    let cf = c.value.to_f64();
    let mut t = Table::new("theorem", theorem_columns());
    let mut timing = Vec::new();
    for &x in &ctx.cfg.x {
        let t0 = Instant::now();
        let m = par::m_exact(&ctx.field, &ctx.region, x, b.points, b.segment)?;
        let main = main_term(cf, vol.value, k, x as f64);
        timing.push(json!({"x": x, "seconds": t0.elapsed().as_secs_f64()}));
        t.push(vec![
            Cell::int(x),
            Cell::int(m),
            Cell::Float(main),
            Cell::Float(m.to_f64().unwrap() / main),
            Cell::Float(vol.value),
            Cell::Float(vol.half_gap),
            Cell::Float(cf),
            Cell::Float(c.tail_bound),
        ]);
    }
    r.tables.push(t);
    r.checks.push(suite::binomial_identity(k..=k));
    r.checks.push(suite::sharp_reassembly(
        &ctx.field,
        &ctx.region,
        &[12, 20],
        ctx.cfg.delta,
        b.segment,
    )?);
    r.extra.insert("timing".into(), json!(timing));
    r.extra.insert("volume_seconds".into(), json!(vol_secs));
    r.extra.insert("volume_tolerance_met".into(), json!(vol_ok));
    r.extra.insert("constant_seconds".into(), json!(c_secs));
    r.extra
        .insert("constant_truncation_bound".into(), json!(c.truncation_bound));
    r.extra
        .insert("constant_depth_limited_primes".into(), json!(c.depth_limited.len()));
    Ok(r)
}

pub fn wolke(ctx: &Context, v: u64, sweep: bool) -> LabResult<Report> {
    let k = ctx.k();
    let mut vs = Vec::new();
    if sweep {
        let mut p = 32;
        while p < v {
            vs.push(p);
            p *= 2;
        }
    }
    vs.push(v);
    let mut r = ctx.report("wolke");
    let mut t = Table::new(
        "wolke",
        vec![
            col("v", Kind::Int, P::Exact),
            col("sum", Kind::Int, P::Exact),
            col("ratio", Kind::Float, P::Truncated),
            col("ball_points", Kind::Int, P::Exact),
        ],
    );
    for &v in &vs {
        let s = par::wolke_sum(&ctx.field, v, WolkeWeight::DegreeOneTau)?;
        let n = par::wolke_sum(&ctx.field, v, WolkeWeight::One)?;
        t.push(vec![
            Cell::int(v),
            Cell::int(s),
            Cell::Float(wolke_ratio(s, v, k)),
            Cell::int(n),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}
