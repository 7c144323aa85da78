//! Process-wide comparison tolerances.
//!
//! Equality assertions use `|a - b| <= abs + rel * max(|a|, |b|)`. The defaults
//! are `abs = 1e-7`, `rel = 1e-9`; the CLI `--tolerance` flag overrides `abs`.

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_ABS: f64 = 1e-7;
pub const DEFAULT_REL: f64 = 1e-9;

/// Determinant magnitude below which an affine map counts as degenerate.
pub const DEGENERACY: f64 = 1e-9;

static ABS_BITS: AtomicU64 = AtomicU64::new(0x3E7A_D7F2_9ABC_AF48); // 1e-7
static REL_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: DEFAULT_ABS,
            rel: DEFAULT_REL,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// Allowed slack when comparing quantities of magnitude `scale`.
    #[inline]
    pub fn slack(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale.abs()
    }

    #[inline]
    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a.abs().max(b.abs()))
    }

    /// `a <= b` up to tolerance.
    #[inline]
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.slack(a.abs().max(b.abs()))
    }
}

/// Current global tolerance.
pub fn global() -> Tolerance {
    Tolerance {
        abs: f64::from_bits(ABS_BITS.load(Ordering::Relaxed)),
        rel: f64::from_bits(REL_BITS.load(Ordering::Relaxed)),
    }
}

/// Replace the global tolerance. Affects every later comparison in the process.
pub fn set_global(tol: Tolerance) {
    ABS_BITS.store(tol.abs.to_bits(), Ordering::Relaxed);
    REL_BITS.store(tol.rel.to_bits(), Ordering::Relaxed);
}
