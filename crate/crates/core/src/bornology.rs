//! Bornologies on a finite space: a covering base, its closure under finite
//! unions and nonempty subsets, and the rectangle-generated bornology on a
//! box product used for graph convergence.

use std::collections::BTreeSet;

use crate::error::{Diagnostic, Error};
use crate::metric::{distance_spectrum, thresholds_from_spectrum, FiniteMetricSpace};
use crate::rational::Rational;
use crate::subset::{size_lex_order, Subset, MAX_UNIVERSE};

/// Universes up to this size get their full membership family materialized;
/// larger ones (box products) answer membership lazily and quantify over the
/// union-closure of the base, which decides the same predicates because every
/// member sits inside a union of base sets and the checked conditions are
/// antitone in the member and additive under unions.
pub const CLOSURE_MATERIALIZE_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bornology {
    universe: usize,
    /// Canonically ordered generating sets.
    base: Vec<Subset>,
    /// Union of the base; equals the full universe for a valid bornology.
    cover: Subset,
    closure: Option<BTreeSet<Subset>>,
}

impl Bornology {
    /// Smallest bornology containing `base`. The base must consist of
    /// nonempty sets and must cover the universe.
    pub fn from_base(universe: usize, base: &[Subset]) -> Result<Self, Error> {
        let mut diags = Vec::new();
        if universe == 0 || universe > MAX_UNIVERSE {
            diags.push(Diagnostic::new(
                "bornology",
                format!("universe size {universe} out of range 1..={MAX_UNIVERSE}"),
            ));
            return Err(Error::invalid(diags));
        }
        if base.is_empty() {
            diags.push(Diagnostic::new("bornology", "base must be nonempty"));
        }
        let mut cover = Subset::empty(universe);
        for (i, b) in base.iter().enumerate() {
            if b.universe() != universe {
                diags.push(Diagnostic::new(
                    format!("bornology.base[{i}]"),
                    "universe mismatch",
                ));
                return Err(Error::invalid(diags));
            }
            if b.is_empty() {
                diags.push(Diagnostic::new(
                    format!("bornology.base[{i}]"),
                    "base members must be nonempty",
                ));
            }
            cover = cover.union(b);
        }
        if !diags.is_empty() {
            return Err(Error::invalid(diags));
        }
        if cover != Subset::full(universe) {
            let uncovered = cover.complement().iter().map(|i| i.to_string()).collect();
            return Err(Error::NotACover(uncovered));
        }
        let mut base: Vec<Subset> = base.to_vec();
        base.sort_by(size_lex_order);
        base.dedup();
        let closure = if universe <= CLOSURE_MATERIALIZE_CAP {
            Some(
                Subset::full(universe)
                    .nonempty_subsets()
                    .into_iter()
                    .collect(),
            )
        } else {
            None
        };
        Ok(Bornology { universe, base, cover, closure })
    }

    /// The bornology of all nonempty subsets, generated by the whole space.
    pub fn all_subsets(universe: usize) -> Self {
        Bornology::from_base(universe, &[Subset::full(universe)])
            .expect("the full set covers the space")
    }

    /// The metrically bounded sets. On a finite space this is every nonempty
    /// subset.
    pub fn bounded(universe: usize) -> Self {
        Bornology::all_subsets(universe)
    }

    /// The totally bounded sets; coincides with [`Bornology::all_subsets`]
    /// on a finite space.
    pub fn totally_bounded(universe: usize) -> Self {
        Bornology::all_subsets(universe)
    }

    /// The sets with compact closure; coincides with
    /// [`Bornology::all_subsets`] on a finite space.
    pub fn relatively_compact(universe: usize) -> Self {
        Bornology::all_subsets(universe)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn base(&self) -> &[Subset] {
        &self.base
    }

    pub fn contains(&self, s: &Subset) -> bool {
        if s.universe() != self.universe {
            return false;
        }
        match &self.closure {
            Some(closure) => closure.contains(s),
            None => !s.is_empty() && s.is_subset_of(&self.cover),
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.closure.is_some()
    }

    /// The full membership family, smallest sets first. Panics when the
    /// closure is not materialized.
    pub fn members_ordered(&self) -> Vec<Subset> {
        let closure = self
            .closure
            .as_ref()
            .expect("closure not materialized for this universe size");
        let mut out: Vec<Subset> = closure.iter().copied().collect();
        out.sort_by(size_lex_order);
        out
    }

    /// The family the convergence predicates quantify over: all members when
    /// materialized, otherwise every union of a nonempty subfamily of the
    /// base. Both decide the same quantified conditions.
    pub fn test_sets(&self) -> Vec<Subset> {
        match &self.closure {
            Some(_) => self.members_ordered(),
            None => {
                let k = self.base.len();
                assert!(k <= 16, "base too large for subfamily enumeration");
                let mut out: Vec<Subset> = Vec::new();
                for pick in 1u64..(1 << k) {
                    let mut u = Subset::empty(self.universe);
                    for (i, b) in self.base.iter().enumerate() {
                        if pick & (1 << i) != 0 {
                            u = u.union(b);
                        }
                    }
                    out.push(u);
                }
                out.sort_by(size_lex_order);
                out.dedup();
                out
            }
        }
    }

    /// Every member admits a small enlargement staying inside the bornology.
    /// Checked with a witness search over half the minimum positive distance
    /// and each spectrum value rather than assumed from finiteness.
    pub fn is_stable_under_small_enlargement(&self, space: &FiniteMetricSpace) -> bool {
        assert_eq!(self.universe, space.len());
        let spectrum = distance_spectrum(&[space]);
        let mut candidates: Vec<Rational> = Vec::new();
        match spectrum.first() {
            Some(least) => candidates.push(*least / Rational::from_int(2)),
            None => candidates.push(Rational::one()),
        }
        candidates.extend(thresholds_from_spectrum(&spectrum));
        self.test_sets().iter().all(|b| {
            candidates.iter().any(|delta| {
                space
                    .enlargement(b, delta)
                    .map(|enlarged| self.contains(&enlarged))
                    .unwrap_or(false)
            })
        })
    }

    /// The bornology on the box product generated by the rectangles
    /// `B x Y` over the base of `self`.
    pub fn product_with_full_second_factor(&self, y_len: usize) -> Result<Bornology, Error> {
        let universe = self.universe * y_len;
        if universe > MAX_UNIVERSE {
            return Err(Error::InstanceTooLarge {
                what: "product bornology points",
                needed: universe,
                cap: MAX_UNIVERSE,
            });
        }
        let rectangles: Vec<Subset> = self
            .base
            .iter()
            .map(|b| {
                Subset::from_indices(
                    universe,
                    b.iter().flat_map(|xi| (0..y_len).map(move |yi| xi * y_len + yi)),
                )
            })
            .collect();
        Bornology::from_base(universe, &rectangles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn two_point_space() -> FiniteMetricSpace {
        FiniteMetricSpace::try_new(
            vec!["a".into(), "b".into()],
            vec![vec![rat("0"), rat("1")], vec![rat("1"), rat("0")]],
        )
        .unwrap()
    }

    #[test]
    fn whole_space_base_generates_all_nonempty_subsets() {
        let b = Bornology::all_subsets(3);
        assert_eq!(b.members_ordered().len(), 7);
        assert!(b.contains(&Subset::from_indices(3, [1])));
        assert!(!b.contains(&Subset::empty(3)));
    }

    #[test]
    fn singleton_base_collapses_to_all_nonempty_subsets() {
        let base: Vec<Subset> = (0..3).map(|i| Subset::singleton(3, i)).collect();
        let b = Bornology::from_base(3, &base).unwrap();
        assert_eq!(b.members_ordered(), Bornology::all_subsets(3).members_ordered());
    }

    #[test]
    fn non_covering_base_is_rejected() {
        let base = [Subset::from_indices(3, [0, 1])];
        assert_eq!(
            Bornology::from_base(3, &base),
            Err(Error::NotACover(vec!["2".into()]))
        );
    }

    #[test]
    fn empty_base_member_is_rejected() {
        let base = [Subset::full(2), Subset::empty(2)];
        assert!(matches!(Bornology::from_base(2, &base), Err(Error::Invalid(_))));
    }

    #[test]
    fn closure_laws_hold_on_the_materialized_family() {
        let b = Bornology::from_base(
            4,
            &[Subset::from_indices(4, [0, 1]), Subset::from_indices(4, [2, 3])],
        )
        .unwrap();
        let members = b.members_ordered();
        let covered = members
            .iter()
            .fold(Subset::empty(4), |acc, m| acc.union(m));
        assert_eq!(covered, Subset::full(4));
        for m in &members {
            for m2 in &members {
                assert!(b.contains(&m.union(m2)));
            }
            for s in m.nonempty_subsets() {
                assert!(b.contains(&s));
            }
        }
    }

    #[test]
    fn closure_is_idempotent_under_regeneration() {
        let b = Bornology::from_base(
            3,
            &[Subset::from_indices(3, [0, 1]), Subset::from_indices(3, [1, 2])],
        )
        .unwrap();
        let regenerated = Bornology::from_base(3, &b.members_ordered()).unwrap();
        assert_eq!(regenerated.members_ordered(), b.members_ordered());
    }

    #[test]
    fn stability_under_small_enlargement() {
        let space = two_point_space();
        assert!(Bornology::all_subsets(2).is_stable_under_small_enlargement(&space));
        // the witness below the least positive distance keeps each member fixed
        let half = rat("1/2");
        let b = Subset::singleton(2, 0);
        assert_eq!(space.enlargement(&b, &half).unwrap(), b);
    }

    #[test]
    fn product_bornology_examples() {
        let b = Bornology::all_subsets(2);
        let prod = b.product_with_full_second_factor(2).unwrap();
        // generated by the single rectangle X x Y = everything
        assert_eq!(prod.universe(), 4);
        assert!(prod.contains(&Subset::full(4)));
        assert!(prod.contains(&Subset::from_indices(4, [1, 2])));
        assert!(!prod.contains(&Subset::empty(4)));

        let based = Bornology::from_base(
            2,
            &[Subset::singleton(2, 0), Subset::singleton(2, 1)],
        )
        .unwrap();
        let prod = based.product_with_full_second_factor(3).unwrap();
        // the rectangle {a} x Y is a generator, hence a member,
        // and its nonempty subsets are members by hereditarity
        let rect = Subset::from_indices(6, [0, 1, 2]);
        assert!(prod.contains(&rect));
        for s in rect.nonempty_subsets() {
            assert!(prod.contains(&s));
        }
    }

    #[test]
    fn oversized_product_falls_back_to_base_unions() {
        // 5 x 13 = 65 points exceeds the mask cap entirely
        let b = Bornology::all_subsets(5);
        assert!(b.product_with_full_second_factor(13).is_err());

        // 5 x 4 = 20 points: representable but not materialized
        let prod = b.product_with_full_second_factor(4).unwrap();
        assert!(!prod.is_materialized());
        assert_eq!(prod.test_sets(), vec![Subset::full(20)]);
        assert!(prod.contains(&Subset::singleton(20, 7)));
    }
}
