//! Lower and upper bornological convergence of set nets, in the ideal form
//! and in the classical eventual form.
//!
//! The inclusion `A inside C^eps` is evaluated as `excess(A, C) < eps`, which
//! is total: an empty left side is vacuously inside, a nonempty left side is
//! never inside an enlargement of the empty set.

use super::{decide_eventually_quantified, decide_ideal_quantified, ConvergenceVerdict, Side};
use crate::bornology::Bornology;
use crate::metric::{distance_spectrum, thresholds_from_spectrum, FiniteMetricSpace};
use crate::order::{DirectedSet, Ideal};
use crate::rational::Rational;
use crate::subset::Subset;

/// Lower bornological ideal convergence of a net of nonempty sets to `d`:
/// for every member and threshold, the indices with
/// `d intersect B inside (sets[gamma])^eps` form a dual-filter set.
pub fn lower_set_ideal_conv(
    space: &FiniteMetricSpace,
    sets: &[Subset],
    d: &Subset,
    bornology: &Bornology,
    ideal: &Ideal,
) -> ConvergenceVerdict {
    let thresholds = thresholds_from_spectrum(&distance_spectrum(&[space]));
    lower_set_ideal_conv_with_thresholds(space, sets, d, bornology, ideal, &thresholds)
}

pub fn lower_set_ideal_conv_with_thresholds(
    space: &FiniteMetricSpace,
    sets: &[Subset],
    d: &Subset,
    bornology: &Bornology,
    ideal: &Ideal,
    thresholds: &[Rational],
) -> ConvergenceVerdict {
    assert!(!d.is_empty(), "limit set must be nonempty");
    assert_eq!(sets.len(), ideal.universe());
    decide_ideal_quantified(
        &bornology.test_sets(),
        thresholds,
        ideal,
        sets.len(),
        |b, eps| {
            let d_cap_b = d.intersection(b);
            let eps = *eps;
            move |gamma| space.within_enlargement(&d_cap_b, &sets[gamma], &eps)
        },
    )
}

/// Upper bornological ideal convergence: the indices with
/// `sets[gamma] intersect B inside d^eps` form a dual-filter set.
pub fn upper_set_ideal_conv(
    space: &FiniteMetricSpace,
    sets: &[Subset],
    d: &Subset,
    bornology: &Bornology,
    ideal: &Ideal,
) -> ConvergenceVerdict {
    let thresholds = thresholds_from_spectrum(&distance_spectrum(&[space]));
    upper_set_ideal_conv_with_thresholds(space, sets, d, bornology, ideal, &thresholds)
}

pub fn upper_set_ideal_conv_with_thresholds(
    space: &FiniteMetricSpace,
    sets: &[Subset],
    d: &Subset,
    bornology: &Bornology,
    ideal: &Ideal,
    thresholds: &[Rational],
) -> ConvergenceVerdict {
    assert!(!d.is_empty(), "limit set must be nonempty");
    assert_eq!(sets.len(), ideal.universe());
    decide_ideal_quantified(
        &bornology.test_sets(),
        thresholds,
        ideal,
        sets.len(),
        |b, eps| {
            let d = *d;
            let b = *b;
            let eps = *eps;
            move |gamma| space.within_enlargement(&sets[gamma].intersection(&b), &d, &eps)
        },
    )
}

/// Classical bornological convergence: the same inclusions, required to hold
/// eventually (on a whole tail) instead of on a dual-filter set.
pub fn classical_set_conv(
    space: &FiniteMetricSpace,
    sets: &[Subset],
    d: &Subset,
    bornology: &Bornology,
    directed: &DirectedSet,
    side: Side,
) -> ConvergenceVerdict {
    assert!(!d.is_empty(), "limit set must be nonempty");
    assert_eq!(sets.len(), directed.len());
    let thresholds = thresholds_from_spectrum(&distance_spectrum(&[space]));
    decide_eventually_quantified(
        &bornology.test_sets(),
        &thresholds,
        directed,
        |b, eps| {
            let d_cap_b = d.intersection(b);
            let d = *d;
            let b = *b;
            let eps = *eps;
            move |gamma| match side {
                Side::Lower => space.within_enlargement(&d_cap_b, &sets[gamma], &eps),
                Side::Upper => space.within_enlargement(&sets[gamma].intersection(&b), &d, &eps),
            }
        },
    )
}
