//! Partial maps between finite metric spaces, their graphs in the box
//! product, nets of partial maps, and the continuity predicates used as
//! theorem hypotheses.
//!
//! On a finite metric space every subset is closed and every map is
//! continuous, so the predicates here are expected to come back true; they
//! are implemented as genuine threshold searches anyway so that no theorem is
//! ever certified under an unverified hypothesis.

use crate::bornology::Bornology;
use crate::error::{Diagnostic, Error};
use crate::metric::{distance_spectrum, product_index, thresholds_from_spectrum, FiniteMetricSpace};
use crate::rational::Rational;
use crate::subset::Subset;

/// A pair `(D, u)`: a nonempty domain inside the source space and a value
/// table defined exactly on it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMap {
    y_len: usize,
    domain: Subset,
    /// Indexed by source point; `Some` exactly on the domain.
    values: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn try_new(
        x_len: usize,
        y_len: usize,
        domain: Subset,
        values: Vec<Option<usize>>,
    ) -> Result<Self, Error> {
        let mut diags = Vec::new();
        if domain.universe() != x_len {
            diags.push(Diagnostic::new("partial_map", "domain universe mismatch"));
            return Err(Error::invalid(diags));
        }
        if domain.is_empty() {
            diags.push(Diagnostic::new("partial_map", "domain must be nonempty"));
        }
        if values.len() != x_len {
            diags.push(Diagnostic::new(
                "partial_map",
                format!("value table must have {x_len} entries"),
            ));
            return Err(Error::invalid(diags));
        }
        for (i, v) in values.iter().enumerate() {
            match v {
                Some(_) if !domain.contains(i) => diags.push(Diagnostic::new(
                    "partial_map",
                    format!("value defined outside the domain at index {i}"),
                )),
                Some(y) if *y >= y_len => diags.push(Diagnostic::new(
                    "partial_map",
                    format!("value index {y} out of target space at index {i}"),
                )),
                None if domain.contains(i) => diags.push(Diagnostic::new(
                    "partial_map",
                    format!("missing value at domain index {i}"),
                )),
                _ => {}
            }
        }
        if diags.is_empty() {
            Ok(PartialMap { y_len, domain, values })
        } else {
            Err(Error::invalid(diags))
        }
    }

    /// Convenience constructor from `(x, y)` index pairs.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(
        x_len: usize,
        y_len: usize,
        pairs: I,
    ) -> Result<Self, Error> {
        let mut domain = Subset::empty(x_len);
        let mut values = vec![None; x_len];
        for (x, y) in pairs {
            domain = domain.with(x);
            values[x] = Some(y);
        }
        PartialMap::try_new(x_len, y_len, domain, values)
    }

    pub fn x_len(&self) -> usize {
        self.domain.universe()
    }

    pub fn y_len(&self) -> usize {
        self.y_len
    }

    pub fn domain(&self) -> &Subset {
        &self.domain
    }

    pub fn value(&self, x: usize) -> Option<usize> {
        self.values.get(x).copied().flatten()
    }

    /// Value at a point known to be in the domain.
    pub fn value_at(&self, x: usize) -> usize {
        self.values[x].expect("point not in the domain")
    }

    /// `{u(x) : x in D and x in A}`; empty when the intersection is empty.
    pub fn image(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.y_len);
        for x in self.domain.intersection(a).iter() {
            out = out.with(self.value_at(x));
        }
        out
    }

    /// The graph `{(x, u(x))}` as a subset of the box product, using the
    /// x-major point layout of [`product_index`].
    pub fn graph(&self) -> Subset {
        let mut out = Subset::empty(self.x_len() * self.y_len);
        for x in self.domain.iter() {
            out = out.with(product_index(self.y_len, x, self.value_at(x)));
        }
        out
    }

    /// Pointwise continuity on the domain, by threshold search.
    pub fn is_continuous(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> bool {
        let thresholds = combined_thresholds(x, y);
        self.domain.iter().all(|x0| {
            thresholds.iter().all(|eps| {
                thresholds.iter().any(|delta| {
                    self.domain.iter().all(|x1| {
                        x.dist(x0, x1) >= *delta
                            || y.dist(self.value_at(x0), self.value_at(x1)) < *eps
                    })
                })
            })
        })
    }

    /// Uniform continuity relative to a bornology: one delta per member and
    /// epsilon controls all pairs inside the member.
    pub fn is_uniformly_continuous_rel(
        &self,
        bornology: &Bornology,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> bool {
        let thresholds = combined_thresholds(x, y);
        bornology.test_sets().iter().all(|b| {
            let pool = self.domain.intersection(b);
            thresholds.iter().all(|eps| {
                thresholds
                    .iter()
                    .any(|delta| self.pairs_controlled(&pool, delta, eps, x, y))
            })
        })
    }

    /// The strong variant: the delta-condition is imposed on pairs inside the
    /// delta-enlargement of each member, matching how the hypothesis is used.
    pub fn is_strongly_uniformly_continuous(
        &self,
        bornology: &Bornology,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> bool {
        let thresholds = combined_thresholds(x, y);
        bornology.test_sets().iter().all(|b| {
            thresholds.iter().all(|eps| {
                thresholds.iter().any(|delta| {
                    let enlarged = x.enlargement(b, delta).expect("member nonempty");
                    let pool = self.domain.intersection(&enlarged);
                    self.pairs_controlled(&pool, delta, eps, x, y)
                })
            })
        })
    }

    fn pairs_controlled(
        &self,
        pool: &Subset,
        delta: &Rational,
        eps: &Rational,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> bool {
        pool.iter().all(|x1| {
            pool.iter().all(|x2| {
                x.dist(x1, x2) >= *delta
                    || y.dist(self.value_at(x1), self.value_at(x2)) < *eps
            })
        })
    }
}

fn combined_thresholds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<Rational> {
    thresholds_from_spectrum(&distance_spectrum(&[x, y]))
}

/// A net of partial maps: one map per index-set element, all sharing the same
/// source and target spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMapNet {
    maps: Vec<PartialMap>,
}

impl PartialMapNet {
    pub fn try_new(gamma_len: usize, maps: Vec<PartialMap>) -> Result<Self, Error> {
        let mut diags = Vec::new();
        if maps.len() != gamma_len {
            diags.push(Diagnostic::new(
                "net",
                format!("net must assign a map to each of the {gamma_len} indices"),
            ));
            return Err(Error::invalid(diags));
        }
        if let Some(first) = maps.first() {
            for (i, m) in maps.iter().enumerate() {
                if m.x_len() != first.x_len() || m.y_len() != first.y_len() {
                    diags.push(Diagnostic::new(
                        format!("net[{i}]"),
                        "all maps in a net must share the same spaces",
                    ));
                }
            }
        }
        if diags.is_empty() {
            Ok(PartialMapNet { maps })
        } else {
            Err(Error::invalid(diags))
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, gamma: usize) -> &PartialMap {
        &self.maps[gamma]
    }

    pub fn maps(&self) -> &[PartialMap] {
        &self.maps
    }

    pub fn domains(&self) -> Vec<Subset> {
        self.maps.iter().map(|m| *m.domain()).collect()
    }

    pub fn graphs(&self) -> Vec<Subset> {
        self.maps.iter().map(PartialMap::graph).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn spaces() -> (FiniteMetricSpace, FiniteMetricSpace) {
        let x = FiniteMetricSpace::try_new(
            vec!["a".into(), "b".into()],
            vec![vec![rat("0"), rat("1")], vec![rat("1"), rat("0")]],
        )
        .unwrap();
        let y = FiniteMetricSpace::try_new(
            vec!["p".into(), "q".into()],
            vec![vec![rat("0"), rat("2")], vec![rat("2"), rat("0")]],
        )
        .unwrap();
        (x, y)
    }

    #[test]
    fn graph_examples() {
        let pm = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        assert_eq!(pm.graph().indices(), vec![product_index(2, 0, 0)]);

        let pm2 = PartialMap::from_pairs(2, 2, [(0, 0), (1, 0)]).unwrap();
        let g = pm2.graph();
        assert_eq!(g.len(), pm2.domain().len());
        assert!(g.contains(product_index(2, 0, 0)));
        assert!(g.contains(product_index(2, 1, 0)));
    }

    #[test]
    fn graph_projects_back_to_domain() {
        let pm = PartialMap::from_pairs(3, 2, [(0, 1), (2, 0)]).unwrap();
        let projected = Subset::from_indices(
            3,
            pm.graph().iter().map(|idx| idx / pm.y_len()),
        );
        assert_eq!(projected, *pm.domain());
    }

    #[test]
    fn image_examples() {
        let pm = PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(pm.image(&Subset::full(2)).indices(), vec![0, 1]);
        assert_eq!(pm.image(&Subset::from_indices(2, [1])).indices(), vec![1]);

        let small = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        assert!(small.image(&Subset::from_indices(2, [1])).is_empty());
    }

    #[test]
    fn image_is_monotone() {
        let pm = PartialMap::from_pairs(3, 2, [(0, 0), (1, 1), (2, 0)]).unwrap();
        for a in Subset::all_of_universe(3) {
            for b in Subset::all_of_universe(3) {
                if a.is_subset_of(&b) {
                    assert!(pm.image(&a).is_subset_of(&pm.image(&b)));
                }
            }
        }
    }

    #[test]
    fn constructor_rejects_inconsistent_tables() {
        // value outside the domain
        let r = PartialMap::try_new(2, 2, Subset::singleton(2, 0), vec![Some(0), Some(1)]);
        assert!(r.is_err());
        // missing value on the domain
        let r = PartialMap::try_new(2, 2, Subset::full(2), vec![Some(0), None]);
        assert!(r.is_err());
        // empty domain
        let r = PartialMap::try_new(2, 2, Subset::empty(2), vec![None, None]);
        assert!(r.is_err());
    }

    #[test]
    fn continuity_predicates_hold_on_finite_spaces() {
        let (x, y) = spaces();
        let born = Bornology::all_subsets(2);
        for pm in [
            PartialMap::from_pairs(2, 2, [(0, 0), (1, 1)]).unwrap(),
            PartialMap::from_pairs(2, 2, [(0, 0), (1, 0)]).unwrap(),
            PartialMap::from_pairs(2, 2, [(0, 1)]).unwrap(),
        ] {
            assert!(pm.is_continuous(&x, &y));
            assert!(pm.is_uniformly_continuous_rel(&born, &x, &y));
            assert!(pm.is_strongly_uniformly_continuous(&born, &x, &y));
            // uniform continuity relative to the bornology implies the strong
            // variant; both sides evaluated, not assumed
            assert!(
                !pm.is_uniformly_continuous_rel(&born, &x, &y)
                    || pm.is_strongly_uniformly_continuous(&born, &x, &y)
            );
        }
    }

    #[test]
    fn net_requires_total_consistent_assignment() {
        let a = PartialMap::from_pairs(2, 2, [(0, 0)]).unwrap();
        let b = PartialMap::from_pairs(3, 2, [(0, 0)]).unwrap();
        assert!(PartialMapNet::try_new(2, vec![a.clone(), a.clone()]).is_ok());
        assert!(PartialMapNet::try_new(3, vec![a.clone(), a.clone()]).is_err());
        assert!(PartialMapNet::try_new(2, vec![a, b]).is_err());
    }
}
