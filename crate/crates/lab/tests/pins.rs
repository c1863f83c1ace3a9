use normdiv::par;
use normdiv_core::asymptotic::assemble_constant;
use normdiv_core::{Field, FieldSpec, Region};

fn c_at(spec: FieldSpec, p0: u64) -> f64 {
    let f = Field::new(spec).unwrap();
    let factors = par::euler_factors(&f, p0).unwrap();
    assemble_constant(&f, p0, &factors).value.to_f64()
}

#[test]
fn constant_values() {
    let c = c_at(FieldSpec::cyclic_cubic(), 1000);
    assert!((c - 1.2724118004416445).abs() < 1e-12, "{c}");
    let c = c_at(FieldSpec::biquadratic(), 1000);
    assert!((c - 1.7770582666).abs() < 1e-9, "{c}");
}

#[test]
fn cubic_sum_at_50() {
    let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
    let m = par::m_exact(&f, &Region::standard(3), 50, u64::MAX, 1 << 22).unwrap();
    assert_eq!(m, 49882);
}
