// SPDX-License-Identifier: Apache-2.0
use field_tower::{field_build, Fe, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symplinalg::*;

fn f3() -> Field {
    field_build(3, 1, None).unwrap()
}

fn ex1_g1(f: &Field) -> MatGF {
    MatGF::from_rows(f, &[vec![1, 0], vec![1, 0], vec![2, 2], vec![0, 1], vec![0, 1], vec![0, 2]])
}

fn ex1_f(f: &Field) -> MatGF {
    MatGF::from_rows(f, &[vec![2, 0], vec![1, 0], vec![1, 2], vec![1, 0], vec![0, 2], vec![1, 2]])
}

fn random_mat(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> MatGF {
    MatGF::from_fn(f, rows, cols, |_, _| f.random(rng))
}

#[test]
fn bilinear_examples() {
    let f = f3();
    let x = [Fe(1), Fe(1), Fe(2)];
    assert_eq!(bilinear(&f, &x, &x).unwrap(), 0);
    assert_eq!(bilinear(&f, &[Fe(0); 3], &x).unwrap(), 0);
    let f9 = field_build(3, 2, Some(&[2, 2, 1])).unwrap();
    let xe = f9.from_coeffs(&[0, 1]).unwrap();
    // x^2 = x + 1, trace = trace(x) + trace(1) = 1 + 2
    assert_eq!(bilinear(&f9, &[xe], &[xe]).unwrap(), f9.trace(f9.mul(xe, xe)));
    assert_eq!(bilinear(&f9, &[xe], &[xe]).unwrap(), 0);
}

#[test]
fn symp_examples() {
    let f = f3();
    let g = ex1_g1(&f);
    assert_eq!(symp(&f, &g.col(0), &g.col(1)).unwrap(), 0);
    let v = [Fe(1), Fe(0), Fe(0), Fe(0)];
    let w = [Fe(0), Fe(0), Fe(1), Fe(0)];
    assert_eq!(symp(&f, &v, &w).unwrap(), 1);
    assert_eq!(symp(&f, &[Fe(1); 3], &[Fe(1); 3]), Err(LinalgError::OddLength(3)));
}

#[test]
fn symp_antisymmetric_exhaustive_n2() {
    let f = f3();
    let all: Vec<Vec<Fe>> = (0..81u128).map(|k| (0..4).map(|i| Fe(k / 3u128.pow(i) % 3)).collect()).collect();
    for v in &all {
        assert_eq!(symp(&f, v, v).unwrap(), 0);
        for w in all.iter().step_by(7) {
            assert_eq!((symp(&f, v, w).unwrap() + symp(&f, w, v).unwrap()) % 3, 0);
        }
    }
}

#[test]
fn restrict_example1() {
    let f = f3();
    let gf = ex1_g1(&f).hcat(&ex1_f(&f)).unwrap();
    let p = gf.restrict(&[0, 1, 3, 4]).unwrap();
    let want = MatGF::from_rows(&f, &[vec![1, 0, 2, 0], vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![0, 1, 0, 2]]);
    assert_eq!(p, want);
    assert_eq!(p.rank(), 4);
    assert_eq!(gf.restrict(&[0, 1, 2, 3, 4, 5]).unwrap(), gf);
    assert_eq!(gf.restrict(&[]).unwrap().rows(), 0);
    assert_eq!(gf.restrict(&[6]), Err(LinalgError::IndexOutOfRange(6, 6)));
}

#[test]
fn restrict_commutes_with_hcat() {
    let f = f3();
    let (g, fm) = (ex1_g1(&f), ex1_f(&f));
    let s = [1, 2, 5];
    assert_eq!(
        g.hcat(&fm).unwrap().restrict(&s).unwrap(),
        g.restrict(&s).unwrap().hcat(&fm.restrict(&s).unwrap()).unwrap()
    );
}

#[test]
fn rank_and_span_basics() {
    let f = f3();
    assert_eq!(MatGF::identity(&f, 4).rank(), 4);
    let m = MatGF::from_rows(&f, &[vec![1, 2], vec![2, 1]]);
    assert_eq!(m.rank(), 1);
    assert!(m.in_span(&[Fe(1), Fe(2)]).unwrap());
    assert!(!m.in_span(&[Fe(1), Fe(1)]).unwrap());
    let inv = ex1_g1(&f).hcat(&ex1_f(&f)).unwrap().restrict(&[0, 1, 3, 4]).unwrap().inverse().unwrap();
    assert_eq!(inv.rows(), 4);
}

#[test]
fn quotient_matches_in_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, r) in [(3, 1), (2, 1), (3, 2)] {
        let f = field_build(p, r, None).unwrap();
        for _ in 0..40 {
            let g = random_mat(&f, 4, 2, &mut rng);
            let qm = quotient(&g);
            let v: Vec<Fe> = (0..4).map(|_| f.random(&mut rng)).collect();
            let coords = qm.coset_coords(&v).unwrap();
            assert_eq!(coords.iter().all(|c| c.is_zero()), g.in_span(&v).unwrap());
            let inside = g.mul_vec(&[f.random(&mut rng), f.random(&mut rng)]).unwrap();
            assert!(qm.coset_coords(&inside).unwrap().iter().all(|c| c.is_zero()));
        }
    }
    let f = f3();
    let full = quotient(&MatGF::identity(&f, 3));
    assert_eq!(full.quotient_dim(), 0);
    let zero = quotient(&MatGF::zeros(&f, 3, 2));
    assert_eq!(zero.coset_coords(&[Fe(1), Fe(2), Fe(0)]).unwrap(), vec![Fe(1), Fe(2), Fe(0)]);
}

#[test]
fn orthogonality_predicates() {
    let f = f3();
    assert!(is_self_col_orth(&ex1_g1(&f)).unwrap());
    assert!(is_col_orth(&ex1_f(&f), &ex1_g1(&f)).unwrap());
    let pair = MatGF::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]]);
    assert!(!is_self_col_orth(&pair).unwrap());
}

#[test]
fn mds_checks() {
    let f5 = field_build(5, 1, None).unwrap();
    let vander = MatGF::from_rows(&f5, &[vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3], vec![1, 4]]);
    assert!(is_mds(&vander).unwrap());
    let dup = MatGF::from_rows(&f5, &[vec![1, 2], vec![1, 2], vec![0, 1]]);
    assert!(!is_mds(&dup).unwrap());
    assert!(matches!(is_mds(&MatGF::zeros(&f5, 25, 1)), Err(LinalgError::TooManyColumns(25))));
}

#[test]
fn mds_iff_singleton_bound_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, r) in [(3, 1), (5, 1), (3, 2), (2, 2)] {
        let f = field_build(p, r, None).unwrap();
        for _ in 0..40 {
            let rows = rng.gen_range(3..7);
            let k = rng.gen_range(1..3);
            let m = random_mat(&f, rows, k, &mut rng);
            if m.rank() < k {
                continue;
            }
            let d = min_distance(&m).unwrap().unwrap();
            assert_eq!(is_mds(&m).unwrap(), d == rows - k + 1);
        }
    }
}

fn check_completion(g1: &MatGF) {
    let c = symplectic_completion(g1).unwrap();
    let f = g1.field();
    let n = g1.rows() / 2;
    let lag = c.g1.hcat(&c.gbar).unwrap();
    assert_eq!(lag.cols(), n);
    assert!(is_self_col_orth(&lag).unwrap());
    let h = c.h1.hcat(&c.hbar).unwrap();
    assert!(is_self_col_orth(&h).unwrap());
    let gram = symp_gram(&h, &lag).unwrap();
    assert_eq!(gram, MatGF::identity(f, n));
    assert_eq!(lag.hcat(&h).unwrap().rank(), 2 * n);
}

#[test]
fn completion_examples() {
    let f = f3();
    check_completion(&ex1_g1(&f));
    // (I | 0) columns: no gbar, H1 = (0 | I) up to sign convention
    let x = MatGF::from_rows(&f, &[vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]]);
    let (gbar, h1) = dual_and_completion(&x).unwrap();
    assert_eq!(gbar.cols(), 0);
    assert_eq!(h1, MatGF::from_rows(&f, &[vec![0, 0], vec![0, 0], vec![2, 0], vec![0, 2]]));
    let dep = MatGF::from_rows(&f, &[vec![1, 1], vec![0, 0], vec![0, 0], vec![0, 0]]);
    assert_eq!(dual_and_completion(&dep).unwrap_err(), LinalgError::RankDeficient);
    let bad = MatGF::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]]);
    assert_eq!(dual_and_completion(&bad).unwrap_err(), LinalgError::NotSelfOrthogonal);
    check_completion(&MatGF::zeros(&f, 6, 0));
}

#[test]
fn completion_over_f9() {
    let f = field_build(3, 2, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // random isotropic column: any single vector
    for _ in 0..10 {
        let v: Vec<Fe> = (0..6).map(|_| f.random(&mut rng)).collect();
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        check_completion(&MatGF::column(&f, &v));
    }
}

#[test]
fn json_round_trip() {
    let f = field_build(3, 2, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random_mat(&f, 3, 2, &mut rng);
    let s = serde_json::to_string(&m).unwrap();
    let back: MatGF = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
    let nested = r#"{"field":{"p":3,"r":1,"poly":[0,1]},"rows":2,"cols":2,"data":[[1,2],[0,4]]}"#;
    let m: MatGF = serde_json::from_str(nested).unwrap();
    assert_eq!(m.get(1, 1), Fe(1));
}
