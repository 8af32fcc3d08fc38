//! Concrete finite colorings of the positive integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::error::{Error, Result};

/// A finite coloring. Colors are small integers; see [`ColoringSpec::color`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringSpec {
    Mod { m: u64 },
    LeadingDigit { base: u64 },
    LogBand { base: u64, period: u64 },
    Random { seed: u64, colors: u64 },
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Coloring(msg.into())
}

impl ColoringSpec {
    pub fn modulo(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(bad(format!("mod needs m >= 2, got {m}")));
        }
        Ok(Self::Mod { m })
    }

    /// Base 2 is rejected: every binary leading digit is 1.
    pub fn leading_digit(base: u64) -> Result<Self> {
        if base < 3 {
            return Err(bad(format!("digit needs base >= 3, got {base}")));
        }
        Ok(Self::LeadingDigit { base })
    }

    pub fn log_band(base: u64, period: u64) -> Result<Self> {
        if base < 2 || period < 1 {
            return Err(bad(format!(
                "logband needs base >= 2 and period >= 1, got {base}:{period}"
            )));
        }
        Ok(Self::LogBand { base, period })
    }

    pub fn random(seed: u64, colors: u64) -> Result<Self> {
        if colors < 2 {
            return Err(bad(format!("random needs at least 2 colors, got {colors}")));
        }
        Ok(Self::Random { seed, colors })
    }

    /// One past the largest color index.
    pub fn color_bound(&self) -> u64 {
        match *self {
            Self::Mod { m } => m,
            Self::LeadingDigit { base } => base,
            Self::LogBand { period, .. } => period,
            Self::Random { colors, .. } => colors,
        }
    }

    /// Color of `x >= 1`.
    ///
    /// `random:seed:c` colors `x` by `splitmix64(x ^ splitmix64(seed)) mod c`.
    pub fn color(&self, x: u64) -> u64 {
        debug_assert!(x >= 1);
        match *self {
            Self::Mod { m } => x % m,
            Self::LeadingDigit { base } => x / base.pow(x.ilog(base)),
            Self::LogBand { base, period } => u64::from(x.ilog(base)) % period,
            Self::Random { seed, colors } => splitmix64(x ^ splitmix64(seed)) % colors,
        }
    }
}

/// The `splitmix64` finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mod { m } => write!(f, "mod:{m}"),
            Self::LeadingDigit { base } => write!(f, "digit:{base}"),
            Self::LogBand { base, period } => write!(f, "logband:{base}:{period}"),
            Self::Random { seed, colors } => write!(f, "random:{seed}:{colors}"),
        }
    }
}

impl FromStr for ColoringSpec {
    type Err = Error;

    /// `mod:m`, `digit:p`, `logband:p:r`, `random:seed:colors`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| bad(format!("`{t}` is not a nonnegative integer in `{s}`")))
        };
        match parts[..] {
            ["mod", m] => Self::modulo(num(m)?),
            ["digit", p] => Self::leading_digit(num(p)?),
            ["logband", p, r] => Self::log_band(num(p)?, num(r)?),
            ["random", seed, c] => Self::random(num(seed)?, num(c)?),
            _ => Err(bad(format!("unrecognized coloring `{s}`"))),
        }
    }
}

/// mod:2, mod:3, mod:5, logband:2:3, random:42:4.
pub fn default_family() -> Vec<ColoringSpec> {
    vec![
        ColoringSpec::Mod { m: 2 },
        ColoringSpec::Mod { m: 3 },
        ColoringSpec::Mod { m: 5 },
        ColoringSpec::LogBand { base: 2, period: 3 },
        ColoringSpec::Random {
            seed: 42,
            colors: 4,
        },
    ]
}

/// `x / p^floor(log_p x)`, in `[1, p)`.
pub fn standard_head(x: u64, p: u64) -> BigRational {
    assert!(x >= 1 && p >= 2, "standard_head needs x >= 1 and p >= 2");
    let scale: BigInt = Pow::pow(BigInt::from(p), x.ilog(p));
    BigRational::new(BigInt::from(x), scale)
}

/// Bin of `standard_head(x, p)` among `bins` equal bins of `[1, p)`.
pub fn head_bin(x: u64, p: u64, bins: usize) -> usize {
    let scale = u128::from(p.pow(x.ilog(p)));
    let offset = u128::from(x) - scale;
    let bin = offset * bins as u128 / (scale * u128::from(p - 1));
    bin as usize
}
