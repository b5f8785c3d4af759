use supercalc_py::{check_json, parse_params, report_json};

#[test]
fn params_defaults_and_overrides() {
    let p = parse_params(Some(r#"{"beta": 4, "f": "str2"}"#)).unwrap();
    assert_eq!((p.beta, p.f.as_str(), p.a), (4, "str2", 1));
    assert!(parse_params(Some(r#"{"gamma": 1}"#)).is_err());
    assert!(parse_params(Some("[1]")).is_err());
    assert_eq!(parse_params(None).unwrap(), Default::default());
}

#[test]
fn check_and_report() {
    let v: serde_json::Value = serde_json::from_str(&check_json("constants", Some(r#"{"a": 2}"#)).unwrap()).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(check_json("nope", None).is_err());
    let r: serde_json::Value = serde_json::from_str(&report_json(Some(2), 7).unwrap()).unwrap();
    assert_eq!(r["checks"].as_array().unwrap().len(), 4);
    assert!(report_json(Some(15), 7).is_err());
}
