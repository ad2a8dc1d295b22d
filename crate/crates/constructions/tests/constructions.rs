// SPDX-License-Identifier: Apache-2.0
use constructions::*;
use field_tower::tower_build;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplinalg::{is_mds, is_self_col_orth, MatGF};

#[test]
fn pp8_small_cases() {
    let mut src = LevelSource::literal(3, 2).unwrap();
    let m = mds_pp8(1, 2, &mut src).unwrap();
    assert_eq!((m.rows(), m.cols()), (2, 1));
    let m = mds_pp8(2, 4, &mut src).unwrap();
    assert!(is_mds(&m).unwrap());
    assert_eq!(src.attempts(), 0);
    assert!(matches!(mds_pp8(3, 3, &mut src), Err(ConstructionError::OutOfRange(_))));
}

#[test]
fn pp8_needs_enough_levels() {
    let mut src = LevelSource::literal(3, 1).unwrap();
    assert!(matches!(mds_pp8(2, 5, &mut src), Err(ConstructionError::TowerTooShallow { .. })));
}

#[test]
fn l78_cases() {
    let mut src = LevelSource::literal(3, 3).unwrap();
    let m = mds_l78(1, 2, 4, &mut src).unwrap();
    assert_eq!((m.rows(), m.cols()), (4, 2));
    let mut src = LevelSource::literal(3, 5).unwrap();
    let m = mds_l78(2, 3, 6, &mut src).unwrap();
    assert!(is_mds(&m).unwrap());
    assert!(matches!(mds_l78(2, 2, 4, &mut src), Err(ConstructionError::OutOfRange(_))));
}

#[test]
fn amt_literal_tower() {
    let mut src = LevelSource::literal(3, 1).unwrap();
    let p = build_amt(1, 1, &mut src).unwrap();
    assert_eq!((p.mat_a.rows(), p.mat_a.cols()), (2, 1));

    let mut src = LevelSource::literal(3, 4).unwrap();
    let p = build_amt(2, 3, &mut src).unwrap();
    assert!(p.report.all_ok(), "{}", p.report);
    assert_eq!(p.report.checks.len(), 5);
    assert!(is_self_col_orth(&p.mat_a).unwrap());
    assert!(matches!(build_amt(4, 3, &mut src), Err(ConstructionError::OutOfRange(_))));
}

#[test]
fn amx_literal_tower() {
    let mut src = LevelSource::literal(3, depth_needed(1, 2, 2)).unwrap();
    assert_eq!(src.mode(), Mode::Literal);
    let pair = build_amt(1, 2, &mut src).unwrap();
    let ext = build_amx(&pair, 1, &mut src).unwrap();
    assert!(ext.report.all_ok());
    assert!(is_mds(&pair.mat_a.hcat(&ext.mat_c).unwrap()).unwrap());
    let ext2 = build_amx(&pair, 2, &mut src).unwrap();
    let ac = pair.mat_a.hcat(&ext2.mat_c).unwrap();
    assert!(is_mds(&ac.col_range(0, 2)).unwrap());
    assert!(matches!(build_amx(&pair, 0, &mut src), Err(ConstructionError::OutOfRange(_))));
}

#[test]
fn theorem_examples() {
    for (r, t, n, y1) in [(2, 1, 3, 2), (3, 2, 4, 2)] {
        let c = construct_eammsp(r, t, n, y1, 3).unwrap();
        assert!(c.report.all_ok());
        assert_eq!(c.bundle.x(), 2 * (r - t));
    }
    assert!(construct_eammsp(2, 2, 3, 2, 3).is_err());

    let c = construct_cqmmsp(2, 1, 3, 3).unwrap();
    assert_eq!((c.bundle.y2(), c.bundle.x()), (0, 1));
    let c = construct_cqmmsp(3, 2, 4, 3).unwrap();
    assert_eq!((c.bundle.y2(), c.bundle.x()), (0, 2));
    assert!(construct_cqmmsp(2, 1, 4, 3).is_err());

    let c = construct_qqmmsp(2, 1, 3, 3).unwrap();
    assert_eq!((c.bundle.y1(), c.bundle.y2(), c.bundle.x()), (2, 0, 2));
    assert!(construct_qqmmsp(3, 1, 4, 3).unwrap().report.all_ok());
    let e = construct_qqmmsp(2, 1, 5, 3).unwrap_err();
    assert!(e.to_string().contains("(n+1)/2 bound violated"));

    let (g1, f, _) = construct_qqmds(2, 3, 3).unwrap();
    assert!(mmsp::is_qqmds(&g1, &f).unwrap());
    let (g1, f, _) = construct_qqmds(3, 5, 3).unwrap();
    assert!(mmsp::is_qqmds(&g1, &f).unwrap());
    assert!(construct_qqmds(1, 3, 3).is_err());
}

#[test]
fn every_small_parameter_set() {
    for p in [2, 3] {
        for n in 1..=5usize {
            for r in 1..=n {
                for t in 1..r {
                    for y1 in 1..=(2 * t).min(n) {
                        let c = construct_eammsp(r, t, n, y1, p).unwrap();
                        assert!(c.report.all_ok(), "EA {r} {t} {n} {y1}");
                    }
                    if 2 * r > n {
                        assert!(construct_cqmmsp(r, t, n, p).unwrap().report.all_ok());
                        assert!(construct_qqmmsp(r, t, n, p).unwrap().report.all_ok());
                    }
                }
            }
        }
    }
}

#[test]
fn constructions_are_deterministic() {
    let a = construct_eammsp(3, 1, 4, 2, 3).unwrap();
    let b = construct_eammsp(3, 1, 4, 2, 3).unwrap();
    assert_eq!(a.bundle, b.bundle);
}

// Top-left block invertible over a subfield, other entries in the subfield,
// corner entry strictly above it: the whole matrix is invertible.
#[test]
fn corner_above_subfield_keeps_invertibility() {
    let f = tower_build(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let d = 1 + checked % 3;
        let m = MatGF::from_fn(&f, d + 1, d + 1, |i, j| {
            if i == d && j == d {
                f.random_at_level(2, &mut rng).unwrap()
            } else {
                f.random_at_level(rand::Rng::gen_range(&mut rng, 0..=1), &mut rng).unwrap()
            }
        });
        let top: Vec<usize> = (0..d).collect();
        if m.restrict(&top).unwrap().select_cols(&top).rank() < d {
            continue;
        }
        assert_eq!(m.rank(), d + 1);
        checked += 1;
    }
}

// Appending staircase columns to an MDS matrix over a subfield keeps MDS.
#[test]
fn staircase_columns_extend_mds() {
    let f = tower_build(3, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 12 {
        let (d, ff, g) = [(1, 2, 1), (1, 3, 2), (2, 2, 1), (2, 2, 2)][checked % 4];
        let rows = d + ff;
        // D: (rows x d) MDS over level 1
        let dm = MatGF::from_fn(&f, rows, d, |_, _| f.random_at_level(rand::Rng::gen_range(&mut rng, 0..=1), &mut rng).unwrap());
        if !is_mds(&dm).unwrap() {
            continue;
        }
        let fm = MatGF::from_fn(&f, rows, g, |i, j| {
            let s = (i + 1 + j + 1) as isize - (d + g) as isize;
            if s <= 0 {
                f.random_at_level(rand::Rng::gen_range(&mut rng, 0..=1), &mut rng).unwrap()
            } else {
                f.random_at_level(1 + s as usize, &mut rng).unwrap()
            }
        });
        let all = dm.hcat(&fm).unwrap();
        assert!(is_mds(&all).unwrap(), "d={d} f={ff} g={g}");
        checked += 1;
    }
}

#[test]
fn search_finds_small_fixtures() {
    for spec in [SearchSpec::css(2, 1, 3), SearchSpec::ea(2, 1, 3, 2), SearchSpec::cq(2, 1, 3), SearchSpec::qq(2, 1, 3)] {
        let b = search_bundle(3, &spec, 5, 2000).unwrap().expect("found");
        assert!(mmsp::classify_verdict(&b).unwrap());
        assert_eq!(b.g1.field().q(), 3);
    }
}

#[test]
fn mutations_give_negatives() {
    use constructions::{mutate_negative, search_bundle, SearchSpec};
    for spec in [SearchSpec::ea(2, 1, 3, 1), SearchSpec::cq(3, 1, 3), SearchSpec::qq(2, 1, 3)] {
        let b = search_bundle(3, &spec, 1, 2000).unwrap().expect("positive fixture");
        let m = mutate_negative(&b, 7, 200).unwrap().expect("negative fixture");
        assert_eq!(m.class, b.class);
        assert!(!mmsp::classify_verdict(&m).unwrap());
        assert_eq!(m.g1, b.g1);
    }
}
