//! Pointwise ideal convergence: wherever a source point lies in net domains
//! along a cofinal subset of indices, it must lie in the limit domain and the
//! net values there must ideal-converge to the limit value along the trace of
//! the ideal on that subset.
//!
//! The condition quantifies over every cofinal subset contained in the
//! point's support, the strongest reading. Cofinal subsets on which the trace
//! ideal degenerates (the subset itself is negligible) are reported in the
//! verdict rather than being assigned a truth value.

use super::{ConvergenceVerdict, DegenerateTrace, FailingWitness, Instance};
use crate::error::Error;
use crate::order::trace_ideal;
use crate::rational::Rational;
use crate::subset::Subset;

pub fn pointwise_ideal_conv(inst: &Instance) -> ConvergenceVerdict {
    pointwise_ideal_conv_with_thresholds(inst, &inst.thresholds())
}

pub fn pointwise_ideal_conv_with_thresholds(
    inst: &Instance,
    thresholds: &[Rational],
) -> ConvergenceVerdict {
    let gamma_len = inst.directed.len();
    let cofinal = inst.directed.cofinal_subsets();
    let mut degenerate = Vec::new();

    for point in 0..inst.x.len() {
        let support = Subset::from_indices(
            gamma_len,
            (0..gamma_len).filter(|g| inst.net.map(*g).domain().contains(point)),
        );
        for g0 in cofinal.iter().filter(|g0| g0.is_subset_of(&support)) {
            // a negligible cofinal subset makes the whole condition at this
            // pair degenerate, the membership requirement included: flag it
            // and move on
            let trace = match trace_ideal(&inst.ideal, g0) {
                Ok(trace) => trace,
                Err(Error::DegenerateTrace) => {
                    degenerate.push(DegenerateTrace { point, cofinal: *g0 });
                    continue;
                }
                Err(other) => unreachable!("cofinal subsets are nonempty: {other}"),
            };
            if !inst.limit.domain().contains(point) {
                return ConvergenceVerdict {
                    holds: false,
                    failing_witness: Some(FailingWitness::PointNotInLimitDomain {
                        point,
                        cofinal: *g0,
                    }),
                    thresholds_used: thresholds.to_vec(),
                    degenerate_traces: degenerate,
                };
            }
            let limit_value = inst.limit.value_at(point);
            let positions = g0.indices();
            for eps in thresholds {
                let close_positions = Subset::from_indices(
                    positions.len(),
                    positions.iter().enumerate().filter_map(|(pos, gamma)| {
                        let v = inst.net.map(*gamma).value_at(point);
                        (inst.y.dist(v, limit_value) < *eps).then_some(pos)
                    }),
                );
                if !trace.in_filter(&close_positions) {
                    let gamma_set = Subset::from_indices(
                        gamma_len,
                        close_positions.iter().map(|pos| positions[pos]),
                    );
                    return ConvergenceVerdict {
                        holds: false,
                        failing_witness: Some(FailingWitness::PointValueMismatch {
                            point,
                            cofinal: *g0,
                            epsilon: *eps,
                            gamma_set,
                        }),
                        thresholds_used: thresholds.to_vec(),
                        degenerate_traces: degenerate,
                    };
                }
            }
        }
    }

    ConvergenceVerdict {
        holds: true,
        failing_witness: None,
        thresholds_used: thresholds.to_vec(),
        degenerate_traces: degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Bornology;
    use crate::metric::FiniteMetricSpace;
    use crate::order::{ideal_from_generators, tail_ideal, DirectedSet};
    use crate::partial_map::{PartialMap, PartialMapNet};

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn unit_space(labels: &[&str]) -> FiniteMetricSpace {
        let n = labels.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rat("0") } else { rat("1") })
                    .collect()
            })
            .collect();
        FiniteMetricSpace::try_new(labels.iter().map(|s| s.to_string()).collect(), matrix)
            .unwrap()
    }

    fn make_instance(net_maps: Vec<PartialMap>, limit: PartialMap, ideal_gen: Option<&[usize]>) -> Instance {
        let x = unit_space(&["a", "b"]);
        let y = unit_space(&["p", "q"]);
        let gamma = net_maps.len();
        let directed = DirectedSet::linear(gamma);
        let ideal = match ideal_gen {
            None => tail_ideal(&directed),
            Some(g) => {
                ideal_from_generators(gamma, &[Subset::from_indices(gamma, g.iter().copied())])
                    .unwrap()
            }
        };
        Instance::try_new(
            x,
            y,
            directed,
            ideal,
            Bornology::all_subsets(2),
            PartialMapNet::try_new(gamma, net_maps).unwrap(),
            limit,
        )
        .unwrap()
    }

    #[test]
    fn constant_net_converges_pointwise() {
        let limit = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        let inst = make_instance(vec![limit.clone(); 3], limit, None);
        let verdict = pointwise_ideal_conv(&inst);
        assert!(verdict.holds);
        assert!(verdict.degenerate_traces.is_empty());
    }

    #[test]
    fn points_without_cofinal_support_are_vacuous() {
        // b appears only at the first index, which is not cofinal
        let narrow = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        let wide = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        let limit = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        let inst = make_instance(vec![wide, narrow.clone(), narrow.clone()], limit, None);
        assert!(pointwise_ideal_conv(&inst).holds);
    }

    #[test]
    fn cofinal_value_mismatch_fails() {
        // b maps to q at every index but the limit sends it to p
        let to_q = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        let limit = PartialMap::from_pairs(2, 2, [(0, 0), (1, 0)]).unwrap();
        let inst = make_instance(vec![to_q.clone(); 3], limit, None);
        let verdict = pointwise_ideal_conv(&inst);
        assert!(!verdict.holds);
        match verdict.failing_witness.unwrap() {
            FailingWitness::PointValueMismatch { point, .. } => assert_eq!(point, 1),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn cofinal_point_missing_from_limit_domain_fails() {
        let wide = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        let limit = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        let inst = make_instance(vec![wide.clone(); 3], limit, None);
        let verdict = pointwise_ideal_conv(&inst);
        assert!(!verdict.holds);
        assert!(matches!(
            verdict.failing_witness,
            Some(FailingWitness::PointNotInLimitDomain { point: 1, .. })
        ));
    }

    #[test]
    fn negligible_cofinal_subsets_are_reported_not_judged() {
        // the ideal contains the cofinal set {g3}, so traces on it degenerate
        let limit = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        let inst = make_instance(vec![limit.clone(); 3], limit, Some(&[2]));
        let verdict = pointwise_ideal_conv(&inst);
        assert!(verdict.holds);
        assert!(!verdict.degenerate_traces.is_empty());
        for d in &verdict.degenerate_traces {
            assert!(inst.ideal.contains(&d.cofinal));
        }
    }
}
