//! Seeded synthetic coefficient sets.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64`; uniforms are
//! `(next_u64 >> 11) * 2^-53` and normals come from Box-Muller, so a given
//! `(L, seed, decay)` produces the same file on every platform.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `c ~ U(0, 1]`.
    Uniform,
    /// `c_l = (l + 1)^-alpha * U(0.5, 1.5]`.
    Power(f64),
    /// `c = exp(sigma * N(0, 1))`.
    LogNormal(f64),
}

impl FromStr for Decay {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let param = |v: &str| -> Result<f64> {
            let x: f64 = v.parse().map_err(|_| Error::InvalidArgument(format!("bad decay parameter {v:?}")))?;
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidArgument(format!("decay parameter must be >= 0, got {x}")));
            }
            Ok(x)
        };
        match s.split_once(':') {
            None if s == "uniform" => Ok(Decay::Uniform),
            Some(("power", a)) => Ok(Decay::Power(param(a)?)),
            Some(("lognormal", sig)) => Ok(Decay::LogNormal(param(sig)?)),
            _ => Err(Error::InvalidArgument(format!(
                "unknown decay {s:?}; expected uniform, power:ALPHA or lognormal:SIGMA"
            ))),
        }
    }
}

impl fmt::Display for Decay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decay::Uniform => f.write_str("uniform"),
            Decay::Power(a) => write!(f, "power:{a}"),
            Decay::LogNormal(s) => write!(f, "lognormal:{s}"),
        }
    }
}

struct Source(ChaCha8Rng);

impl Source {
    /// Uniform on `(0, 1]`.
    fn open_uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) + 1) as f64 * (-53f64).exp2()
    }

    fn normal(&mut self) -> f64 {
        let u1 = self.open_uniform();
        let u2 = self.open_uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// `terms` positive values drawn from `decay`.
pub fn generate(terms: usize, seed: u64, decay: Decay) -> Result<Vec<f64>> {
    if terms == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let mut src = Source(ChaCha8Rng::seed_from_u64(seed));
    Ok((0..terms)
        .map(|l| match decay {
            Decay::Uniform => src.open_uniform(),
            Decay::Power(alpha) => (l as f64 + 1.0).powf(-alpha) * (0.5 + src.open_uniform()),
            Decay::LogNormal(sigma) => (sigma * src.normal()).exp(),
        })
        .collect())
}

/// Coeff-list text: a header comment then one value per line.
pub fn to_coeff_list(values: &[f64], header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for v in values {
        out.push_str(&format!("{v:e}\n"));
    }
    out
}
