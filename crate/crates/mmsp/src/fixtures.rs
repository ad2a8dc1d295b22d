// SPDX-License-Identifier: Apache-2.0
//! The three worked examples over F_3 (the third over any F_p).

use access::{make_threshold, AccessStructure};
use field_tower::{field_build, Field};
use symplinalg::MatGF;

use crate::{BundleClass, MmspBundle, Params};

pub fn f3() -> Field {
    field_build(3, 1, None).expect("F3")
}

pub fn example1_g1(f: &Field) -> MatGF {
    MatGF::from_rows(f, &[vec![1, 0], vec![1, 0], vec![2, 2], vec![0, 1], vec![0, 1], vec![0, 2]])
}

pub fn example1_f(f: &Field) -> MatGF {
    MatGF::from_rows(f, &[vec![2, 0], vec![1, 0], vec![1, 2], vec![1, 0], vec![0, 2], vec![1, 2]])
}

/// A = {{1,2},{2,3},{1,2,3}}, B = {{},{1},{2},{3}}.
pub fn example1_access() -> AccessStructure {
    AccessStructure::from_lists(3, &[&[1, 2], &[2, 3], &[1, 2, 3]], &[&[], &[1], &[2], &[3]]).expect("valid")
}

/// Example 1 as a randomless EA bundle.
pub fn example1() -> MmspBundle {
    let f = f3();
    MmspBundle::new(
        BundleClass::Ea,
        example1_g1(&f),
        MatGF::zeros(&f, 6, 0),
        example1_f(&f),
        Params { n: 3, r: None, t: None },
    )
    .with_access(example1_access())
}

/// Example 1 read as a QQ bundle with x' = 1.
pub fn example1_qq() -> MmspBundle {
    example1().with_class(BundleClass::Qq)
}

pub fn example2_g1(f: &Field) -> MatGF {
    MatGF::from_rows(
        f,
        &[vec![1, 0, 0], vec![1, 0, 0], vec![2, 2, 2], vec![0, 1, 0], vec![0, 1, 2], vec![0, 2, 2]],
    )
}

pub fn example2_f(f: &Field) -> MatGF {
    MatGF::from_rows(f, &[vec![2, 0], vec![1, 1], vec![1, 2], vec![0, 0], vec![0, 2], vec![0, 2]])
}

/// A* = {{1,2,3}}, B* = {{},{1},{2},{3},{1,3}}.
pub fn example2_access() -> AccessStructure {
    AccessStructure::from_lists(3, &[&[1, 2, 3]], &[&[], &[1], &[2], &[3], &[1, 3]]).expect("valid")
}

/// Example 2 exactly as printed. Note: its columns are dependent
/// (f1 + f2 = 2 g1 + g3), so the full set is not accepted.
pub fn example2() -> MmspBundle {
    let f = f3();
    cq_bundle(example2_g1(&f), example2_f(&f))
}

/// Example 2 with F*[5][2] changed from 2 to 1. Row 5 is never displayed in
/// the worked example; this is the smallest edit that makes every stated
/// claim hold.
pub fn example2_amended() -> MmspBundle {
    let f = f3();
    let mut fm = example2_f(&f);
    fm.set(4, 1, f.from_int(1));
    cq_bundle(example2_g1(&f), fm)
}

fn cq_bundle(g1: MatGF, fm: MatGF) -> MmspBundle {
    let f = g1.field().clone();
    MmspBundle::new(BundleClass::Cq, g1, MatGF::zeros(&f, 6, 0), fm, Params { n: 3, r: None, t: None })
        .with_access(example2_access())
}

/// The 2p x 2 pair (G**, F**) over F_p: g_{j,1} = g_{j+p,2} = 1,
/// f_{j,1} = f_{j+p,2} = j - 1.
pub fn example3_matrices(p: u32) -> (MatGF, MatGF) {
    let f = field_build(p, 1, None).expect("prime");
    let n = p as usize;
    let g = MatGF::from_fn(&f, 2 * n, 2, |i, k| {
        if (k == 0 && i < n) || (k == 1 && i >= n) {
            f.from_int(1)
        } else {
            f.from_int(0)
        }
    });
    let fm = MatGF::from_fn(&f, 2 * n, 2, |i, k| {
        if k == 0 && i < n {
            f.from_int(i as i64)
        } else if k == 1 && i >= n {
            f.from_int((i - n) as i64)
        } else {
            f.from_int(0)
        }
    });
    (g, fm)
}

/// Example 3 as a (2,1,p) EA bundle.
pub fn example3(p: u32) -> MmspBundle {
    let (g, fm) = example3_matrices(p);
    let n = p as usize;
    let f = g.field().clone();
    MmspBundle::new(BundleClass::Ea, g, MatGF::zeros(&f, 2 * n, 0), fm, Params::threshold(2, 1, n))
        .with_access(make_threshold(2, 1, n).expect("valid"))
}
