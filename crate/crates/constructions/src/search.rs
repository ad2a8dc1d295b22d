// SPDX-License-Identifier: Apache-2.0
//! Random search for small threshold bundles over a prime field. Used for
//! fixtures that the exhaustive classical and dense quantum checks can afford.

use field_tower::{field_build, Fe, Field};
use mmsp::{classify_verdict, BundleClass, MmspBundle, Params};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplinalg::{symplectic_completion, MatGF};

use crate::{out_of_range, Result};

/// Shape of the bundle to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpec {
    pub class: BundleClass,
    pub r: usize,
    pub t: usize,
    pub n: usize,
    pub y1: usize,
    pub y2: usize,
    pub x: usize,
}

impl SearchSpec {
    /// Ramp scheme: t random columns, r - t secret columns.
    pub fn css(r: usize, t: usize, n: usize) -> SearchSpec {
        SearchSpec { class: BundleClass::Plain, r, t, n, y1: t, y2: 0, x: r - t }
    }

    pub fn ea(r: usize, t: usize, n: usize, y1: usize) -> SearchSpec {
        SearchSpec { class: BundleClass::Ea, r, t, n, y1, y2: 2 * t - y1, x: 2 * (r - t) }
    }

    pub fn cq(r: usize, t: usize, n: usize) -> SearchSpec {
        let y2 = (2 * t).saturating_sub(n);
        SearchSpec { class: BundleClass::Cq, r, t, n, y1: n, y2, x: (2 * r).saturating_sub(n.max(2 * t)) }
    }

    pub fn qq(r: usize, t: usize, n: usize) -> SearchSpec {
        let tp = t.max(n.saturating_sub(r));
        SearchSpec { class: BundleClass::Qq, r, t, n, y1: (n + tp).saturating_sub(r), y2: (tp + r).saturating_sub(n), x: 2 * r.saturating_sub(tp) }
    }

    fn rows(&self) -> usize {
        match self.class {
            BundleClass::Plain => self.n,
            _ => 2 * self.n,
        }
    }
}

fn random_mat(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> MatGF {
    MatGF::from_fn(f, rows, cols, |_, _| f.random(rng))
}

/// y linearly independent, pairwise orthogonal columns in F^{2n}.
pub fn random_isotropic(f: &Field, n: usize, y: usize, rng: &mut ChaCha8Rng) -> Option<MatGF> {
    let mut cols: Vec<Vec<Fe>> = Vec::new();
    let mut guard = 0;
    while cols.len() < y {
        guard += 1;
        if guard > 1000 {
            return None;
        }
        // orthogonal complement of the columns so far
        let cons = MatGF::from_fn(f, cols.len(), 2 * n, |j, k| if k < n { cols[j][n + k] } else { f.neg(cols[j][k - n]) });
        let basis = if cols.is_empty() { MatGF::identity(f, 2 * n) } else { cons.nullspace() };
        let coeffs: Vec<Fe> = (0..basis.cols()).map(|_| f.random(rng)).collect();
        let v = basis.mul_vec(&coeffs).ok()?;
        let mut trial = cols.clone();
        trial.push(v);
        let m = MatGF::from_fn(f, 2 * n, trial.len(), |i, j| trial[j][i]);
        if m.rank() == trial.len() {
            cols = trial;
        }
    }
    Some(MatGF::from_fn(f, 2 * n, y, |i, j| cols[j][i]))
}

fn candidate(f: &Field, s: &SearchSpec, rng: &mut ChaCha8Rng) -> Option<MmspBundle> {
    let rows = s.rows();
    let params = Params::threshold(s.r, s.t, s.n);
    let (g1, f_mat) = match s.class {
        BundleClass::Plain => (random_mat(f, rows, s.y1, rng), random_mat(f, rows, s.x, rng)),
        BundleClass::Ea | BundleClass::Cq => (random_isotropic(f, s.n, s.y1, rng)?, random_mat(f, rows, s.x, rng)),
        BundleClass::Qq => {
            let g1 = random_isotropic(f, s.n, s.y1, rng)?;
            let c = symplectic_completion(&g1).ok()?;
            // mix in G1 so F is not always the canonical completion
            let fm = c.gbar.hcat(&c.hbar).ok()?;
            let mix = random_mat(f, s.y1, fm.cols(), rng);
            (g1.clone(), fm.add(&g1.mul(&mix).ok()?).ok()?)
        }
    };
    let g2 = random_mat(f, rows, s.y2, rng);
    Some(MmspBundle::new(s.class, g1, g2, f_mat, params))
}

/// First candidate (in seeded order) that classifies as an MMSP of the
/// requested class, or None after `tries` candidates.
pub fn search_bundle(p: u32, spec: &SearchSpec, seed: u64, tries: usize) -> Result<Option<MmspBundle>> {
    if spec.n == 0 || spec.r > spec.n || spec.t >= spec.r {
        return Err(out_of_range(format!("need n >= r > t, got ({},{},{})", spec.r, spec.t, spec.n)));
    }
    let f = field_build(p, 1, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let Some(b) = candidate(&f, spec, &mut rng) else { continue };
        if classify_verdict(&b)? {
            return Ok(Some(b));
        }
    }
    Ok(None)
}


/// A small random edit of `bundle` (one entry of F or G2, or an extra G2
/// column) that keeps the class invariants but is no longer an MMSP. G1 is
/// never touched. QQ bundles only get G2 edits so F stays column-orthogonal
/// to G1.
pub fn mutate_negative(bundle: &MmspBundle, seed: u64, tries: usize) -> Result<Option<MmspBundle>> {
    use rand::Rng;
    let f = bundle.f.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = bundle.f.rows();
    for _ in 0..tries {
        let mut b = bundle.clone();
        let kind = match bundle.class {
            BundleClass::Qq => 1 + rng.gen_range(0..2),
            _ => rng.gen_range(0..3),
        };
        match kind {
            0 if b.x() > 0 => {
                let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..b.x()));
                let v = f.add(b.f.get(i, j), f.random_nonzero(&mut rng));
                b.f.set(i, j, v);
            }
            1 if b.y2() > 0 => {
                let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..b.y2()));
                let v = f.add(b.g2.get(i, j), f.random_nonzero(&mut rng));
                b.g2.set(i, j, v);
            }
            _ => b.g2 = b.g2.hcat(&random_mat(&f, rows, 1, &mut rng))?,
        }
        match classify_verdict(&b) {
            Ok(false) if mmsp::classify(&b).is_ok() => return Ok(Some(b)),
            Ok(_) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}
