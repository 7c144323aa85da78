//! Exhaustive checks of (D1), (D1'), (D2) and monotonicity.
//!
//! (D2) is checked through an equivalent reduced family. Under (D1'),
//! monotonicity is the special case `B = {x}, C = ∅` of (D2); given
//! monotonicity, (D2) for arbitrary `A, B, C` follows from the instances with
//! `A`, `C` disjoint and nonempty and `B = {b}` a single element, since
//! replacing `C` by `C ∖ A` and `B` by one of its elements only shrinks the
//! right-hand side. That leaves `O(3^n · n)` comparisons instead of `O(8^n)`.

use rayon::prelude::*;
use serde::Serialize;

use super::FiniteDiversity;
use crate::tolerance;

/// Stored violations are capped; counts are always exact.
pub const MAX_REPORTED: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Stop at the first violation of each kind.
    #[default]
    FirstViolation,
    /// Enumerate everything and count all violations.
    FullReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// `δ(A) = 0` on a set with at least two elements.
    D1 { subset: Vec<String> },
    /// `δ(A ∪ C) > δ(A ∪ B) + δ(B ∪ C)`.
    D2 {
        a: Vec<String>,
        b: Vec<String>,
        c: Vec<String>,
        deficit: f64,
    },
    /// `δ(A) > δ(A')` for `A ⊂ A'`.
    Monotonicity {
        subset: Vec<String>,
        superset: Vec<String>,
        deficit: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub is_semidiversity: bool,
    pub is_diversity: bool,
    pub is_monotone: bool,
    pub violations: Vec<Violation>,
    /// Violations found, including any not stored.
    pub violation_count: usize,
}

pub fn check_axioms(delta: &FiniteDiversity) -> AxiomReport {
    check_axioms_with(delta, CheckMode::FirstViolation)
}

pub fn check_axioms_with(delta: &FiniteDiversity, mode: CheckMode) -> AxiomReport {
    let slack = tolerance::global().slack(delta.magnitude());
    let n = delta.len();
    let full = delta.full_mask();
    let v = delta.values();
    let first_only = mode == CheckMode::FirstViolation;

    let d1: Vec<usize> = {
        let it = (0..=full).filter(|m| m.count_ones() >= 2 && v[*m] <= 0.0);
        if first_only {
            it.take(1).collect()
        } else {
            it.collect()
        }
    };

    let mono_at = |mask: usize| -> Vec<(usize, usize, f64)> {
        (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .filter_map(|i| {
                let sup = mask | 1 << i;
                let deficit = v[mask] - v[sup];
                (deficit > slack).then_some((mask, sup, deficit))
            })
            .collect()
    };

    let d2_at = |union: usize| -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        // nonempty proper submasks a with a < c = union ^ a (the check is symmetric)
        let mut a = (union - 1) & union;
        while a > 0 {
            let c = union ^ a;
            if a < c {
                for b in 0..n {
                    let bit = 1 << b;
                    let deficit = v[union] - v[a | bit] - v[c | bit];
                    if deficit > slack {
                        out.push((a, bit, c, deficit));
                        if first_only {
                            return out;
                        }
                    }
                }
            }
            a = (a - 1) & union;
        }
        out
    };

    let (mono, d2): (Vec<_>, Vec<_>) = if first_only {
        let mono = (0..=full).map(mono_at).find(|m| !m.is_empty()).unwrap_or_default();
        let d2 = (0..=full)
            .filter(|u| u.count_ones() >= 2)
            .map(d2_at)
            .find(|m| !m.is_empty())
            .unwrap_or_default();
        (mono.into_iter().take(1).collect(), d2)
    } else {
        let mono = (0..=full).into_par_iter().flat_map_iter(mono_at).collect();
        let d2 = (0..=full)
            .into_par_iter()
            .filter(|u| u.count_ones() >= 2)
            .flat_map_iter(d2_at)
            .collect();
        (mono, d2)
    };

    let is_monotone = mono.is_empty();
    // a monotonicity failure is itself a (D2) failure with C = ∅
    let is_semidiversity = is_monotone && d2.is_empty();
    let is_diversity = is_semidiversity && d1.is_empty();

    let names = |m: usize| delta.subset_labels(m);
    let violation_count = d1.len() + mono.len() + d2.len();
    let violations = d1
        .iter()
        .map(|&m| Violation::D1 { subset: names(m) })
        .chain(mono.iter().map(|&(s, sup, deficit)| Violation::Monotonicity {
            subset: names(s),
            superset: names(sup),
            deficit,
        }))
        .chain(d2.iter().map(|&(a, b, c, deficit)| Violation::D2 {
            a: names(a),
            b: names(b),
            c: names(c),
            deficit,
        }))
        .take(MAX_REPORTED)
        .collect();

    AxiomReport {
        is_semidiversity,
        is_diversity,
        is_monotone,
        violations,
        violation_count,
    }
}
