// SPDX-License-Identifier: Apache-2.0
use access::{make_threshold, symplectify, symplectify_structure, AccessStructure, Subset};
use classical_protocols::*;
use field_tower::{field_build, Fe};
use mmsp::fixtures::{example1_access, example1_f, example1_g1, f3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplinalg::MatGF;

fn example1_css() -> CssProtocol {
    let f = f3();
    CssProtocol::new(example1_g1(&f), example1_f(&f), symplectify_structure(&example1_access())).unwrap()
}

fn ints(f: &field_tower::Field, v: &[i64]) -> Vec<Fe> {
    v.iter().map(|&k| f.from_int(k)).collect()
}

#[test]
fn share_reads_off_columns() {
    let p = example1_css();
    let f = p.field().clone();
    assert_eq!(css_share(&p, &ints(&f, &[0, 0]), &ints(&f, &[0, 0])).unwrap(), ints(&f, &[0; 6]));
    assert_eq!(css_share(&p, &ints(&f, &[1, 0]), &ints(&f, &[0, 0])).unwrap(), ints(&f, &[2, 1, 1, 1, 0, 1]));
    let a = css_share(&p, &ints(&f, &[1, 2]), &ints(&f, &[0, 1])).unwrap();
    let b = css_share(&p, &ints(&f, &[2, 2]), &ints(&f, &[1, 1])).unwrap();
    let ab = css_share(&p, &ints(&f, &[0, 1]), &ints(&f, &[1, 2])).unwrap();
    assert_eq!(ab, a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect::<Vec<_>>());
    assert!(css_share(&p, &ints(&f, &[1]), &ints(&f, &[0, 0])).is_err());
}

#[test]
fn decode_round_trip_exhaustive() {
    let p = example1_css();
    let f = p.field().clone();
    let a = symplectify(Subset::from_players(&[2, 3]), 3);
    for mi in 0..9 {
        for ui in 0..9 {
            let m = ints(&f, &[mi % 3, mi / 3]);
            let u = ints(&f, &[ui % 3, ui / 3]);
            let z = css_share(&p, &m, &u).unwrap();
            let za: Vec<Fe> = a.indices().iter().map(|&i| z[i]).collect();
            assert_eq!(css_decode(&p, a, &za).unwrap(), Some(m));
        }
    }
    let bad = symplectify(Subset::from_players(&[1]), 3);
    assert!(matches!(css_decode(&p, bad, &[Fe::ZERO; 2]), Err(ProtocolError::NotQualified(_))));
}

#[test]
fn example1_audit_is_secure() {
    let r = css_audit(&example1_css()).unwrap();
    assert!(r.secure && r.mmsp && r.agrees, "{r:?}");
}

#[test]
fn message_along_randomness_is_secret_but_useless() {
    let f = f3();
    let g = example1_g1(&f);
    let p = CssProtocol::new(g.clone(), g, symplectify_structure(&example1_access())).unwrap();
    let r = css_audit(&p).unwrap();
    assert!(r.secrecy);
    assert!(!r.correctness);
    assert!(r.agrees);
}

#[test]
fn audit_matches_rank_test_on_random_instances() {
    let f = f3();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fs = make_threshold(3, 1, 4).unwrap();
    let (mut good, mut bad) = (0, 0);
    for _ in 0..60 {
        let g = MatGF::from_fn(&f, 4, 1, |_, _| f.random(&mut rng));
        let fm = MatGF::from_fn(&f, 4, 2, |_, _| f.random(&mut rng));
        let p = CssProtocol::new(g.clone(), fm.clone(), fs.clone()).unwrap();
        let r = css_audit(&p).unwrap();
        assert!(r.agrees);
        if let Some(players) = &r.correctness_failure {
            assert!(!mmsp::accepts_one(&g, &fm, Subset::from_players(players)).unwrap());
        }
        if let Some(players) = &r.secrecy_failure {
            assert!(!mmsp::rejects_one(&g, &fm, Subset::from_players(players)).unwrap());
        }
        if r.secure { good += 1 } else { bad += 1 }
    }
    assert!(good > 0 && bad > 0, "{good} {bad}");
}

fn shamir_f5() -> SpirProtocol {
    // (G, F) = Vandermonde at 1, 2, 3 over F5: a (2,1,3) threshold MMSP
    let f = field_build(5, 1, None).unwrap();
    let g = MatGF::from_rows(&f, &[vec![1], vec![1], vec![1]]);
    let fm = MatGF::from_rows(&f, &[vec![1], vec![2], vec![3]]);
    SpirProtocol::standard(g, fm, 2, make_threshold(2, 1, 3).unwrap()).unwrap()
}

#[test]
fn queries_and_answers() {
    let p = shamir_f5();
    let f = p.field().clone();
    let zero = MatGF::zeros(&f, 1, 2);
    let q = spir_query(&p, 1, &zero).unwrap();
    assert_eq!(q.col(0), p.f.col(0));
    assert!(q.col(1).iter().all(|x| x.is_zero()));
    assert!(matches!(spir_query(&p, 3, &zero), Err(ProtocolError::BadIndex(3, 2))));
    assert_eq!(spir_answer(&f, q.row(0), &[Fe::ZERO; 2], Fe::ZERO).unwrap(), Fe::ZERO);

    let one = SpirProtocol::standard(p.g.clone(), p.f.clone(), 1, p.access.clone()).unwrap();
    let uq = MatGF::zeros(&f, 1, 1);
    let q = spir_query(&one, 1, &uq).unwrap();
    let m = ints(&f, &[4]);
    let u = ints(&f, &[2]);
    let css = CssProtocol::new(p.g.clone(), p.f.clone(), p.access.clone()).unwrap();
    assert_eq!(spir_answers(&one, &q, &m, &u).unwrap(), css_share(&css, &m, &u).unwrap());
    assert!(spir_audit(&one).unwrap().user_secrecy);
}

#[test]
fn standard_protocol_audits() {
    let r = spir_audit(&shamir_f5()).unwrap();
    assert!(r.secure && r.mmsp && r.agrees && r.uq_exhaustive, "{r:?}");

    let f = f3();
    let p = SpirProtocol::standard(example1_g1(&f), example1_f(&f), 2, symplectify_structure(&example1_access())).unwrap();
    let r = spir_audit(&p).unwrap();
    assert!(r.secure && r.agrees, "{r:?}");
}

#[test]
fn off_block_leak_breaks_server_secrecy() {
    let p = shamir_f5();
    let f = p.field().clone();
    // file 1 query also reads file 2 through a column outside span(G)
    let b1 = MatGF::from_rows(&f, &[vec![1, 1], vec![2, 0], vec![3, 0]]);
    let b2 = p.base_query(2).unwrap();
    let leaky = p.clone().with_base_queries(vec![b1, b2]).unwrap();
    let r = spir_audit(&leaky).unwrap();
    assert!(!r.server_secrecy_structural);
    assert!(!r.server_secrecy_empirical);
    assert!(!r.secure);
}

#[test]
fn transcripts_replay() {
    let p = example1_css();
    let f = p.field().clone();
    let m = ints(&f, &[2, 1]);
    assert_eq!(css_run(&p, &m, 9).unwrap(), css_run(&p, &m, 9).unwrap());
    let t = css_run(&p, &m, 9).unwrap();
    assert!(t.steps.iter().filter(|s| s.label.starts_with("decode")).all(|s| s.values == vec![2, 1]));
    let s = shamir_f5();
    let files = ints(s.field(), &[3, 4]);
    let t = spir_run(&s, 2, &files, 4).unwrap();
    assert_eq!(t, spir_run(&s, 2, &files, 4).unwrap());
    assert!(t.steps.iter().filter(|s| s.label.starts_with("decode")).all(|s| s.values == vec![4]));
}

#[test]
fn size_guard() {
    let f = field_build(101, 1, None).unwrap();
    let g = MatGF::zeros(&f, 3, 2);
    let fm = MatGF::zeros(&f, 3, 2);
    let p = CssProtocol::new(g, fm, AccessStructure::from_lists(3, &[&[1, 2, 3]], &[&[]]).unwrap()).unwrap();
    assert!(matches!(css_audit(&p), Err(ProtocolError::TooLarge(_))));
}
