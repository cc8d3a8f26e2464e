use zerofree::io::{InputBody, InputDocument, SCHEMA};
use zerofree::AppError;
use zerofree_core::Complex64;

#[test]
fn probs_round_trip() {
    let values = vec![0.1, 0.2000000000000001, 1.0 / 3.0, 0.36666666666666653];
    let doc = InputDocument::probs(values.clone());
    let back = InputDocument::parse(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    match back.body {
        InputBody::Probs { values: v } => assert_eq!(v, values),
        other => panic!("{other:?}"),
    }
    assert_eq!(back.schema, SCHEMA);
}

#[test]
fn roots_round_trip() {
    let roots = [Complex64::new(-1.5, 0.0), Complex64::from_polar(1.2, 2.0), Complex64::from_polar(1.2, -2.0)];
    let doc = InputDocument::roots(&roots).with_source(serde_json::json!({"family": "test"}));
    let back = InputDocument::parse(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    let a = back.analyze().unwrap();
    assert_eq!(a.geometry.degree, 3);
    assert!((a.geometry.delta - 2.0).abs() < 1e-12);
}

#[test]
fn rejects_bad_documents() {
    for text in [
        "",
        "[]",
        r#"{"schema":1,"format":"probs"}"#,
        r#"{"schema":1,"format":"other","values":[1]}"#,
        r#"{"schema":7,"format":"probs","values":[1,1]}"#,
        r#"{"format":"probs","values":[1,1]}"#,
    ] {
        assert!(matches!(InputDocument::parse(text), Err(AppError::Input(_))), "{text}");
    }
    let neg = InputDocument::parse(r#"{"schema":1,"format":"probs","values":[1,-1]}"#).unwrap();
    assert!(matches!(neg.analyze(), Err(AppError::Input(_))));
}

#[test]
fn arbitrary_floats_round_trip() {
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut values = Vec::new();
    while values.len() < 5000 {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        let v = f64::from_bits(x);
        if v.is_finite() {
            values.push(v.abs());
        }
    }
    let doc = InputDocument::probs(values.clone());
    match InputDocument::parse(&doc.to_json()).unwrap().body {
        InputBody::Probs { values: v } => assert!(v.iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits())),
        other => panic!("{other:?}"),
    }
}
