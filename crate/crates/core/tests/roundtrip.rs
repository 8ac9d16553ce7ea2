use serde::de::DeserializeOwned;
use serde::Serialize;

use upsilon::cable::{cable_bounds, check_bounds, BoundPair, CableParams};
use upsilon::certificate::Certificate;
use upsilon::cfk::Complex;
use upsilon::laurent::LaurentPoly;
use upsilon::pin::{lattice_from_hfk, pin_upsilon, t2m3_cable_bounds, t2m3_cable_facts, t2m3_cable_table, HfkTable};
use upsilon::plfun::PlFunc;
use upsilon::rational::Rational;
use upsilon::staircase::{cable_alexander, lspace_knot_complex, torus_alexander, torus_complex};
use upsilon::summand::{j_family, SummandCertificate};
use upsilon::verify::{run_suite, Report, Suite};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
    let json = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&json).unwrap();
    assert_eq!(&back, v);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn cable_of_trefoil_end_to_end() {
    let d = torus_alexander(2, 3).unwrap();
    round_trip(&d);
    let dc: LaurentPoly = cable_alexander(&d, 2, 5).unwrap();
    let c = lspace_knot_complex(&dc).unwrap();
    round_trip(&c);
    let json = serde_json::to_string(&c).unwrap();
    let c2: Complex = serde_json::from_str(&json).unwrap();
    c2.validate().unwrap();

    let f = c2.upsilon().unwrap();
    round_trip(&f);
    let b = cable_bounds(&torus_complex(2, 3).unwrap().upsilon().unwrap(), CableParams::new(2, 5).unwrap()).unwrap();
    round_trip(&b);
    let cert = check_bounds(&f, &b).unwrap();
    assert!(cert.is_pass());
    round_trip(&cert);
}

#[test]
fn failing_certificate_serializes_witness() {
    let b = cable_bounds(&PlFunc::zero(), CableParams::new(3, 2).unwrap()).unwrap();
    let bad = torus_complex(2, 9).unwrap().upsilon().unwrap();
    let cert = check_bounds(&bad, &b).unwrap();
    assert!(!cert.is_pass());
    let v: serde_json::Value = serde_json::to_value(&cert).unwrap();
    assert_eq!(v["verdict"], "fail");
    let t: Rational = v["witness"]["t"].as_str().unwrap().parse().unwrap();
    assert!(b.constraint_at(t).is_some());
    let back: Certificate = serde_json::from_value(v).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn pin_through_json() {
    let table = t2m3_cable_table(9).unwrap();
    round_trip(&table);
    let table: HfkTable = serde_json::from_str(&serde_json::to_string(&table).unwrap()).unwrap();
    let bounds: BoundPair = serde_json::from_str(&serde_json::to_string(&t2m3_cable_bounds(9).unwrap()).unwrap()).unwrap();
    let survivors = pin_upsilon(&lattice_from_hfk(&table), &t2m3_cable_facts(9), Some(&bounds)).unwrap();
    assert_eq!(survivors.len(), 1);
    assert_eq!(survivors[0].eval(Rational::from_int(1)).unwrap(), Rational::from_int(-9));
}

#[test]
fn reports_round_trip() {
    let cert: SummandCertificate = j_family(2, 5).unwrap();
    round_trip(&cert);
    let report: Report = run_suite(Suite::Summand, None).unwrap();
    assert!(report.pass);
    round_trip(&report);
}

#[test]
fn rejects_malformed_json() {
    assert!(serde_json::from_str::<PlFunc>(r#"[["0","0"],["1","-1"],["1","0"]]"#).is_err());
    assert!(serde_json::from_str::<Rational>(r#""1/0""#).is_err());
    assert!(serde_json::from_str::<HfkTable>(r#"{"entries":[{"alex":1,"maslov":0,"rank":0}]}"#).is_err());
    let unknown_gen = r#"{"name":"x","generators":[{"name":"a","alex":0,"maslov":0}],
        "differential":[{"from":"a","terms":[{"gen":"b","upower":0}]}]}"#;
    assert!(serde_json::from_str::<Complex>(unknown_gen).is_err());
}
