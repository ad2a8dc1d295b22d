// SPDX-License-Identifier: Apache-2.0
use access::*;

fn ex1() -> AccessStructure {
    AccessStructure::from_lists(3, &[&[1, 2], &[2, 3], &[1, 2, 3]], &[&[], &[1], &[2], &[3]]).unwrap()
}

#[test]
fn threshold_basics() {
    let s = make_threshold(2, 1, 3).unwrap();
    assert_eq!(s.accept_sets().len(), 4);
    assert_eq!(s.reject_sets().len(), 4);
    assert!(s.materialize().validate().ok);
    let full = make_threshold(3, 1, 3).unwrap();
    assert_eq!(full.accept_sets(), vec![Subset::from_players(&[1, 2, 3])]);
    assert_eq!(make_threshold(1, 1, 3), Err(AccessError::BadThreshold(1, 1, 3)));
    assert_eq!(make_threshold(4, 1, 3), Err(AccessError::BadThreshold(4, 1, 3)));
}

#[test]
fn validate_examples() {
    assert!(ex1().validate().ok);
    let clash = AccessStructure::from_lists(1, &[&[1]], &[&[1]]).unwrap();
    assert!(!clash.validate().ok);
    let not_monotone = AccessStructure::from_lists(3, &[&[1, 2]], &[]).unwrap();
    let v = not_monotone.validate();
    assert!(!v.ok);
    assert!(v.diagnostics[0].contains("{1,2,3}"));
}

#[test]
fn symplectify_examples() {
    assert_eq!(symplectify(Subset::from_players(&[1, 2]), 3), Subset::from_players(&[1, 2, 4, 5]));
    assert_eq!(symplectify(Subset::EMPTY, 3), Subset::EMPTY);
    let lifted = symplectify_structure(&make_threshold(2, 1, 3).unwrap());
    assert_eq!(lifted.n, 6);
    assert!(lifted.accepts(Subset::from_players(&[2, 3, 5, 6])));
    assert!(lifted.rejects(Subset::from_players(&[3, 6])));
    assert!(!lifted.rejects(Subset::from_players(&[3])));
    assert!(make_threshold(2, 1, 3).unwrap().symplectify().validate().ok);
    assert!(ex1().symplectify().validate().ok);
}

#[test]
fn symplectify_injective_and_order_preserving() {
    let n = 4;
    let all: Vec<Subset> = (0..16).map(Subset).collect();
    for &a in &all {
        for &b in &all {
            let (la, lb) = (symplectify(a, n), symplectify(b, n));
            assert_eq!(a == b, la == lb);
            assert_eq!(a.is_subset_of(b), la.is_subset_of(lb));
        }
        assert_eq!(desymplectify(symplectify(a, n), n), Some(a));
    }
}

#[test]
fn threshold_materializations_validate() {
    for n in 1..=6 {
        for r in 1..=n {
            for t in 0..r {
                assert!(make_threshold(r, t, n).unwrap().materialize().validate().ok);
            }
        }
    }
}

#[test]
fn json_forms() {
    let s: AccessStructure =
        serde_json::from_str(r#"{"n":3,"accept":[[1,2],[2,3],[1,2,3]],"reject":[[],[1],[2],[3]]}"#).unwrap();
    assert_eq!(s, ex1());
    let t: AccessStructure =
        serde_json::from_str(r#"{"n":3,"accept":{"threshold":2},"reject":{"threshold":1}}"#).unwrap();
    assert!(t.is_threshold());
    let back: AccessStructure = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(serde_json::from_str::<AccessStructure>(r#"{"n":3,"accept":[[4]],"reject":[]}"#).is_err());
}
