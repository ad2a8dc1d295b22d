// SPDX-License-Identifier: Apache-2.0
//! Sources of "fresh" field elements at a prescribed tower level.

use field_tower::{field_build, tower_build, Fe, Field};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ConstructionError;

/// Deepest literal tower we build; beyond it elements do not fit in u128
/// or arithmetic gets slow.
pub const LITERAL_MAX_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// level j element = e_j (+ a prime-field bump on retries)
    Literal,
    /// random nonzero elements of a moderately large field, checked afterwards
    Generic,
}

#[derive(Debug, Clone)]
pub struct LevelSource {
    f: Field,
    mode: Mode,
    seed: u64,
    rng: ChaCha8Rng,
    bump: u32,
}

fn generic_field(p: u32) -> Result<Field, ConstructionError> {
    let mut s = 1;
    while (p as u128).pow(s as u32) < 4096 {
        s += 1;
    }
    Ok(field_build(p, s, None)?)
}

impl LevelSource {
    pub fn literal(p: u32, depth: usize) -> Result<LevelSource, ConstructionError> {
        let f = tower_build(p, depth.max(1))?;
        Ok(LevelSource { f, mode: Mode::Literal, seed: 0, rng: ChaCha8Rng::seed_from_u64(0), bump: 0 })
    }

    pub fn literal_from(f: Field) -> Result<LevelSource, ConstructionError> {
        if f.tower().is_none() {
            return Err(ConstructionError::TowerTooShallow { needed: 1, available: 0 });
        }
        Ok(LevelSource { f, mode: Mode::Literal, seed: 0, rng: ChaCha8Rng::seed_from_u64(0), bump: 0 })
    }

    pub fn generic(p: u32, seed: u64) -> Result<LevelSource, ConstructionError> {
        let f = generic_field(p)?;
        Ok(LevelSource { f, mode: Mode::Generic, seed, rng: ChaCha8Rng::seed_from_u64(seed), bump: 0 })
    }

    /// Literal when a tower of the needed depth is small enough, generic otherwise.
    pub fn auto(p: u32, depth: usize, seed: u64) -> Result<LevelSource, ConstructionError> {
        let fits = depth <= LITERAL_MAX_DEPTH && (p as u128).checked_pow(1 << depth).is_some_and(|q| q.checked_mul(p as u128).is_some());
        if fits {
            LevelSource::literal(p, depth)
        } else {
            LevelSource::generic(p, seed)
        }
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn depth(&self) -> Option<usize> {
        self.f.depth()
    }

    /// Move on to the next candidate family after a failed verification.
    pub fn retry(&mut self) {
        self.bump += 1;
        self.rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(self.bump as u64)));
    }

    pub fn attempts(&self) -> u32 {
        self.bump
    }

    /// Retries available before giving up.
    pub fn retry_budget(&self) -> u32 {
        match self.mode {
            Mode::Literal => self.f.p() - 1,
            Mode::Generic => 200,
        }
    }

    /// An element of level exactly `level` (level 0 gives 1).
    pub fn fresh(&mut self, level: usize) -> Result<Fe, ConstructionError> {
        if level == 0 {
            return Ok(Fe::ONE);
        }
        match self.mode {
            Mode::Literal => {
                let available = self.f.depth().unwrap_or(0);
                if level > available {
                    return Err(ConstructionError::TowerTooShallow { needed: level, available });
                }
                let e = self.f.gen(level)?;
                Ok(self.f.add(e, self.f.from_int(self.bump as i64)))
            }
            Mode::Generic => Ok(self.f.random_nonzero(&mut self.rng)),
        }
    }
}
