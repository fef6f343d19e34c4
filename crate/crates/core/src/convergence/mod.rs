//! Decidable convergence predicates for nets of partial maps.
//!
//! Each checker returns a [`ConvergenceVerdict`]: the boolean outcome, the
//! threshold grid it was decided on, and on failure a witness naming the
//! bornology member, the threshold and the index set that missed the dual
//! filter. The naive subset-quantified forms are kept alongside the sup-inf
//! characterizations on purpose: their agreement is one of the certified
//! equivalences, so neither may be expressed through the other.

mod maps;
mod pointwise;
mod set;

pub use maps::{
    classical_p_conv, classical_p_minus, classical_p_plus, graph_ideal_conv,
    graph_ideal_conv_with_thresholds, p_ideal_conv, p_ideal_conv_with_thresholds,
    p_ideal_minus_naive, p_ideal_minus_naive_with_thresholds, p_ideal_minus_supinf,
    p_ideal_minus_supinf_with_thresholds, p_ideal_plus_naive,
    p_ideal_plus_naive_with_thresholds, p_ideal_plus_supinf, p_ideal_plus_supinf_with_thresholds,
    sup_sup_condition, sup_sup_condition_with_thresholds, NAIVE_SUBSET_CAP,
};
pub use maps::sensitivity;
pub use pointwise::{pointwise_ideal_conv, pointwise_ideal_conv_with_thresholds};
pub use set::{
    classical_set_conv, lower_set_ideal_conv, lower_set_ideal_conv_with_thresholds,
    upper_set_ideal_conv, upper_set_ideal_conv_with_thresholds,
};

use crate::bornology::Bornology;
use crate::error::{Diagnostic, Error};
use crate::metric::{box_product, distance_spectrum, thresholds_from_spectrum, FiniteMetricSpace};
use crate::order::{DirectedSet, Ideal};
use crate::partial_map::{PartialMap, PartialMapNet};
use crate::rational::Rational;
use crate::subset::Subset;

/// Which side of a two-sided convergence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Lower,
    Upper,
}

/// Why a check failed, with enough data to replay the failure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FailingWitness {
    /// The condition's index set missed the dual filter (or, for classical
    /// checks, contained no tail) at this member and threshold.
    FilterMembership {
        member: Subset,
        epsilon: Rational,
        gamma_set: Subset,
    },
    /// A point lay in net domains cofinally often but not in the limit domain.
    PointNotInLimitDomain { point: usize, cofinal: Subset },
    /// Net values at a point failed to ideal-converge to the limit value
    /// along a cofinal subset.
    PointValueMismatch {
        point: usize,
        cofinal: Subset,
        epsilon: Rational,
        gamma_set: Subset,
    },
}

/// A pointwise-check pair `(x, cofinal set)` whose trace ideal was trivial;
/// reported instead of silently assigning the condition a truth value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegenerateTrace {
    pub point: usize,
    pub cofinal: Subset,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvergenceVerdict {
    pub holds: bool,
    pub failing_witness: Option<FailingWitness>,
    /// The threshold grid the quantifiers were decided on.
    pub thresholds_used: Vec<Rational>,
    /// Pointwise checks only; empty for every other mode.
    pub degenerate_traces: Vec<DegenerateTrace>,
}

impl ConvergenceVerdict {
    pub fn success(thresholds: Vec<Rational>) -> Self {
        ConvergenceVerdict {
            holds: true,
            failing_witness: None,
            thresholds_used: thresholds,
            degenerate_traces: Vec::new(),
        }
    }

    pub fn failure(witness: FailingWitness, thresholds: Vec<Rational>) -> Self {
        ConvergenceVerdict {
            holds: false,
            failing_witness: Some(witness),
            thresholds_used: thresholds,
            degenerate_traces: Vec::new(),
        }
    }

    /// Conjunction of two verdicts over the same thresholds, keeping the
    /// first witness.
    pub fn and(self, other: ConvergenceVerdict) -> ConvergenceVerdict {
        if self.holds {
            other
        } else {
            self
        }
    }
}

/// A complete convergence problem: the two spaces, the directed index set,
/// the ideal on it, a bornology on the source space, the net, and the
/// candidate limit. Cross-references are validated at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub x: FiniteMetricSpace,
    pub y: FiniteMetricSpace,
    pub directed: DirectedSet,
    pub ideal: Ideal,
    pub bornology: Bornology,
    pub net: PartialMapNet,
    pub limit: PartialMap,
}

impl Instance {
    pub fn try_new(
        x: FiniteMetricSpace,
        y: FiniteMetricSpace,
        directed: DirectedSet,
        ideal: Ideal,
        bornology: Bornology,
        net: PartialMapNet,
        limit: PartialMap,
    ) -> Result<Self, Error> {
        let mut diags = Vec::new();
        if ideal.universe() != directed.len() {
            diags.push(Diagnostic::new(
                "ideal",
                format!(
                    "ideal lives on {} indices but the directed set has {}",
                    ideal.universe(),
                    directed.len()
                ),
            ));
        }
        if bornology.universe() != x.len() {
            diags.push(Diagnostic::new(
                "bornology",
                format!(
                    "bornology lives on {} points but X has {}",
                    bornology.universe(),
                    x.len()
                ),
            ));
        }
        if net.len() != directed.len() {
            diags.push(Diagnostic::new(
                "net",
                format!(
                    "net assigns {} maps but the directed set has {} indices",
                    net.len(),
                    directed.len()
                ),
            ));
        }
        for (gamma, m) in net.maps().iter().enumerate() {
            if m.x_len() != x.len() || m.y_len() != y.len() {
                diags.push(Diagnostic::new(
                    format!("net[{gamma}]"),
                    "map does not match the declared spaces",
                ));
            }
        }
        if limit.x_len() != x.len() || limit.y_len() != y.len() {
            diags.push(Diagnostic::new(
                "limit",
                "limit map does not match the declared spaces",
            ));
        }
        if x.len() * y.len() > crate::subset::MAX_UNIVERSE {
            diags.push(Diagnostic::new(
                "spaces",
                format!(
                    "|X| * |Y| = {} exceeds the {} point cap for graphs",
                    x.len() * y.len(),
                    crate::subset::MAX_UNIVERSE
                ),
            ));
        }
        if diags.is_empty() {
            Ok(Instance { x, y, directed, ideal, bornology, net, limit })
        } else {
            Err(Error::invalid(diags))
        }
    }

    /// The box-metric product of the two spaces.
    pub fn box_space(&self) -> FiniteMetricSpace {
        box_product(&self.x, &self.y).expect("instance validated against the point cap")
    }

    /// The canonical threshold grid: the combined positive distance spectrum
    /// of both spaces (which already contains every box-product distance)
    /// plus one value above its maximum.
    pub fn thresholds(&self) -> Vec<Rational> {
        thresholds_from_spectrum(&distance_spectrum(&[&self.x, &self.y]))
    }

    /// Same instance, different ideal. Used by the harness for the
    /// tail-ideal coherence and ideal-monotonicity properties.
    pub fn with_ideal(&self, ideal: Ideal) -> Result<Instance, Error> {
        Instance::try_new(
            self.x.clone(),
            self.y.clone(),
            self.directed.clone(),
            ideal,
            self.bornology.clone(),
            self.net.clone(),
            self.limit.clone(),
        )
    }

    /// Same instance with the net replaced by the constant net at the limit.
    pub fn with_constant_net(&self) -> Instance {
        let maps = vec![self.limit.clone(); self.directed.len()];
        let net = PartialMapNet::try_new(self.directed.len(), maps)
            .expect("constant net is total and consistent");
        let mut out = self.clone();
        out.net = net;
        out
    }
}

/// Decide `for every test set B and threshold eps, the indices satisfying the
/// condition form a dual-filter set`, scanning members smallest-first and
/// thresholds in ascending order for a deterministic first witness.
///
/// `condition_builder` is handed `(B, eps)` once and returns the per-index
/// condition, so per-pair precomputation is paid once, not per index.
pub(crate) fn decide_ideal_quantified<F, G>(
    test_sets: &[Subset],
    thresholds: &[Rational],
    ideal: &Ideal,
    gamma_len: usize,
    mut condition_builder: F,
) -> ConvergenceVerdict
where
    F: FnMut(&Subset, &Rational) -> G,
    G: FnMut(usize) -> bool,
{
    for b in test_sets {
        for eps in thresholds {
            let mut cond = condition_builder(b, eps);
            let gamma_set = Subset::from_indices(gamma_len, (0..gamma_len).filter(|g| cond(*g)));
            if !ideal.in_filter(&gamma_set) {
                return ConvergenceVerdict::failure(
                    FailingWitness::FilterMembership {
                        member: *b,
                        epsilon: *eps,
                        gamma_set,
                    },
                    thresholds.to_vec(),
                );
            }
        }
    }
    ConvergenceVerdict::success(thresholds.to_vec())
}

/// Classical (eventual) twin of [`decide_ideal_quantified`]: the condition
/// must hold on a whole tail instead of on a dual-filter set.
pub(crate) fn decide_eventually_quantified<F, G>(
    test_sets: &[Subset],
    thresholds: &[Rational],
    directed: &DirectedSet,
    mut condition_builder: F,
) -> ConvergenceVerdict
where
    F: FnMut(&Subset, &Rational) -> G,
    G: FnMut(usize) -> bool,
{
    let n = directed.len();
    for b in test_sets {
        for eps in thresholds {
            let mut cond = condition_builder(b, eps);
            let gamma_set = Subset::from_indices(n, (0..n).filter(|g| cond(*g)));
            if !directed.holds_eventually(&gamma_set) {
                return ConvergenceVerdict::failure(
                    FailingWitness::FilterMembership {
                        member: *b,
                        epsilon: *eps,
                        gamma_set,
                    },
                    thresholds.to_vec(),
                );
            }
        }
    }
    ConvergenceVerdict::success(thresholds.to_vec())
}
