// SPDX-License-Identifier: Apache-2.0
use num_rational::Ratio;

use crate::{MmspError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    Css,
    Cqss,
    Qqss,
    Eass,
    Cqspir,
    Easpir,
}

impl std::str::FromStr for RateKind {
    type Err = MmspError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "css" => RateKind::Css,
            "cqss" => RateKind::Cqss,
            "qqss" => RateKind::Qqss,
            "eass" => RateKind::Eass,
            "cqspir" => RateKind::Cqspir,
            "easpir" => RateKind::Easpir,
            other => return Err(MmspError::OutOfRange(format!("unknown protocol kind {other}"))),
        })
    }
}

/// Closed-form rate log|M| / log D of the threshold constructions.
pub fn rate(kind: RateKind, r: usize, t: usize, n: usize) -> Result<Ratio<i64>> {
    if !(n >= r && r > t && n > 0) {
        return Err(MmspError::OutOfRange(format!("need n >= r > t, got r={r} t={t} n={n}")));
    }
    let (r, t, n) = (r as i64, t as i64, n as i64);
    let num = match kind {
        RateKind::Css => r - t,
        RateKind::Cqss => {
            if t == 0 || 2 * r < n {
                return Err(MmspError::OutOfRange("CQSS rate needs t > 0 and r >= n/2".into()));
            }
            2 * r - (2 * t).max(n)
        }
        RateKind::Qqss => {
            if 2 * r < n + 1 {
                return Err(MmspError::OutOfRange("(n+1)/2 bound violated".into()));
            }
            r - t.max(n - r)
        }
        RateKind::Eass | RateKind::Easpir => {
            if t == 0 {
                return Err(MmspError::OutOfRange("entanglement-assisted rates need t > 0".into()));
            }
            2 * (r - t)
        }
        RateKind::Cqspir => {
            if t == 0 || 2 * t < n {
                return Err(MmspError::OutOfRange("CQSPIR rate needs 2t >= n".into()));
            }
            2 * (r - t)
        }
    };
    Ok(Ratio::new(num, n))
}
