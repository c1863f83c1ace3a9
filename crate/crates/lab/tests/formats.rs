use normdiv::config::ExperimentConfig;
use normdiv::report::{col, Cell, Kind, Provenance, Table};
use normdiv::spec_file::{load_spec, parse_spec, spec_to_toml};
use normdiv::{par, LabError};
use normdiv_core::{divisor, Field, FieldSpec, Region};
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn spec_round_trip() {
    for spec in [FieldSpec::cyclic_cubic(), FieldSpec::biquadratic()] {
        let text = spec_to_toml(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }
}

#[test]
fn shipped_specs_match_builtins() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fields");
    let cubic = load_spec(format!("{dir}/cubic9.toml").as_ref()).unwrap();
    assert_eq!(cubic, FieldSpec::cyclic_cubic());
    let quartic = load_spec(format!("{dir}/q_sqrt2_i.toml").as_ref()).unwrap();
    assert_eq!(quartic, FieldSpec::biquadratic());
}

#[test]
fn spec_rejects_bad_input() {
    let good = spec_to_toml(&FieldSpec::cyclic_cubic());
    let extra = format!("{good}\nfoo = 1\n");
    assert!(matches!(parse_spec(&extra), Err(LabError::Config(_))));
    let tensor = good.replacen("tensor = [1,", "tensor = [2,", 1);
    let tensor = if tensor == good {
        good.replacen("tensor = [\n    1,", "tensor = [\n    2,", 1)
    } else {
        tensor
    };
    assert_ne!(tensor, good);
    assert!(parse_spec(&tensor).is_err());
    let short = good.replace("degree = 3", "degree = 4");
    assert!(parse_spec(&short).is_err());
}

fn sample_table(rows: bool) -> Table {
    let mut t = Table::new(
        "t",
        vec![
            col("n", Kind::Int, Provenance::Exact),
            col("rho", Kind::Rational, Provenance::Exact),
            col("main", Kind::Float, Provenance::Truncated),
            col("ok", Kind::Bool, Provenance::Exact),
            col("label", Kind::Text, Provenance::Label),
        ],
    );
    if rows {
        let big = BigInt::from(10).pow(30) + 7;
        t.push(vec![
            Cell::Int(big),
            Cell::Rational(BigRational::new(BigInt::from(-3), BigInt::from(12))),
            Cell::Float(0.1 + 0.2),
            Cell::Bool(true),
            Cell::text("a, \"quoted\" label"),
        ]);
        t.push(vec![
            Cell::int(-5),
            Cell::Rational(BigRational::from_integer(BigInt::from(2))),
            Cell::Float(1e-300),
            Cell::Bool(false),
            Cell::text(""),
        ]);
    }
    t
}

#[test]
fn csv_round_trip() {
    let t = sample_table(true);
    let text = t.to_csv();
    assert!(text.contains("-1/4"));
    assert!(text.contains("2/1"));
    let back = Table::from_csv("t", t.columns.clone(), &text).unwrap();
    assert_eq!(back, t);
}

#[test]
fn empty_table_is_header_only() {
    let t = sample_table(false);
    assert_eq!(t.to_csv(), "n,rho,main,ok,label\n");
    let back = Table::from_csv("t", t.columns.clone(), &t.to_csv()).unwrap();
    assert!(back.rows.is_empty());
}

#[test]
fn json_carries_provenance() {
    let j = sample_table(true).to_json();
    assert_eq!(j["rows"][0]["rho"]["value"], "-1/4");
    assert_eq!(j["rows"][0]["main"]["provenance"], "truncated");
    assert_eq!(j["columns"][4]["provenance"], "label");
}

#[test]
fn config_validation() {
    assert!(ExperimentConfig::parse("").is_ok());
    for bad in [
        "x = [100, 50]",
        "x = [0, 5]",
        "delta = 1",
        "p0 = 1",
        "nonsense = 3",
        "[budgets]\npoints = 0",
        "[budgets]\nvolume_tolerance = -1.0",
    ] {
        assert!(
            matches!(ExperimentConfig::parse(bad), Err(LabError::Config(_))),
            "{bad}"
        );
    }
    let cfg = ExperimentConfig::parse("field = \"cubic9\"\n[region]\nlo = [\"1/2\"]\nhi = [\"3/2\"]\n").unwrap();
    assert!(cfg.region(3).is_err());
    let cfg = ExperimentConfig::parse("[region]\nlo = [\"1/2\", \"-1/2\"]\nhi = [\"3/2\", \"1/2\"]\n").unwrap();
    assert_eq!(cfg.region(3).unwrap(), Region::standard(3));
}

#[test]
fn digest_tracks_content() {
    let a = ExperimentConfig::default();
    let mut b = a.clone();
    assert_eq!(a.digest(), b.digest());
    b.seed = 2;
    assert_ne!(a.digest(), b.digest());
    assert_eq!(a.digest().len(), 64);
}

#[test]
fn parallel_matches_serial() {
    let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
    let r = Region::standard(3);
    for segment in [1u64 << 10, 1 << 22] {
        let p = par::m_exact(&f, &r, 30, u64::MAX, segment).unwrap();
        let s = divisor::m_exact(&f, &r, 30, u128::MAX, 1 << 22).unwrap();
        assert_eq!(p, s);
    }
}

#[test]
fn segment_groups_cover_values() {
    let v = [1u64, 2, 10, 11, 30, 31, 32, 100];
    let g = par::segment_groups(&v, 10);
    assert_eq!(g.concat(), v);
    for s in &g {
        assert!(s[s.len() - 1] - s[0] < 10);
    }
}
