//! The JSON shapes of the externally consumed report types: every rational
//! carries its exact/lower-bound tag, and the documented fields are present.

use pfg_core::ramified::{delta, EisensteinExtension, RamifiedElement};
use pfg_core::strictness::{decide_strict, extract_forms};
use pfg_core::torsion::{torsion_valuations, verify_tame_ramification};
use pfg_core::{Ctx, FormalGroupLaw, PadicScalar, PrimeConfig, PrimeContext};

fn ctx() -> Ctx {
    PrimeContext::new(PrimeConfig::new(3, 1, 8).unwrap()).unwrap()
}

#[test]
fn delta_report_schema() {
    let c = ctx();
    let ext = EisensteinExtension::pure(&c, 2, PadicScalar::from_integer(&c, -3)).unwrap();
    let pi = RamifiedElement::uniformizer(&ext);
    let rep = delta(&pi, None).unwrap();
    let json: serde_json::Value = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["element"], "pi");
    assert_eq!(json["presentation"], "X");
    assert_eq!(json["v_f_prime"]["exact"], true);
    assert_eq!(json["v_different"]["num"], 1);
    assert_eq!(json["v_different"]["den"], 2);
    assert_eq!(json["delta"]["num"], -1);
    assert_eq!(json["delta"]["den"], 2);
    assert_eq!(json["in_derivation_kernel"], false);
}

#[test]
fn strictness_verdict_schema() {
    let c = ctx();
    let group = FormalGroupLaw::multiplicative(&c, 8).unwrap();
    let fs = extract_forms(&group.mul_by_p().unwrap()).unwrap();
    let json = serde_json::to_value(decide_strict(&fs)).unwrap();
    assert_eq!(json["is_strict"], true);
    assert_eq!(json["degrees"], serde_json::json!([3]));
    assert_eq!(json["method"], "determinant_shortcut");
    assert_eq!(json["reason"], "equal_degrees_only_trivial_zero");
    assert_eq!(json["determinant"], "1");
}

#[test]
fn torsion_report_schema_tags_every_rational() {
    let c = ctx();
    let group = FormalGroupLaw::lubin_tate(&c, 12, 2).unwrap();
    let json = serde_json::to_value(torsion_valuations(&group).unwrap()).unwrap();
    // polygon points carry valuation tags
    let points = json["components"][0]["polygon"]["points"].as_array().unwrap();
    for point in points {
        assert!(point[1]["exact"].is_boolean(), "{point}");
    }
    let slope = &json["components"][0]["valuations"][0]["slope"];
    assert_eq!(slope["num"], 1);
    assert_eq!(slope["den"], 8);

    let tame = serde_json::to_value(verify_tame_ramification(&group).unwrap()).unwrap();
    assert_eq!(tame["e"], 8);
    assert_eq!(tame["tame"], true);
    let w = &tame["witnesses"][0];
    assert!(w["coords_basis"][0].is_array());
    assert_eq!(w["min_valuation"]["den"], 8);
    // the skipped element handles never leak into JSON
    assert!(w.get("coords").is_none());
}
