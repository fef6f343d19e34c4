//! Finite metric spaces with exact rational distances, point-to-set gaps,
//! enlargements, the excess functional, and the box-metric product.
//!
//! Every epsilon-quantified predicate in this crate is decided on the
//! positive distance spectrum: the enlargement `A^eps` is constant for `eps`
//! ranging over a half-open interval between consecutive positive distances,
//! so evaluating at each spectrum value plus one value above the maximum
//! covers every behaviour class of the predicate.

use crate::error::{Diagnostic, Error};
use crate::rational::{Extended, Rational};
use crate::subset::{Subset, MAX_UNIVERSE};

/// A finite metric space: ordered point labels and a symmetric exact-rational
/// distance matrix validated against all metric axioms at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    /// Row-major `n * n` matrix.
    dist: Vec<Rational>,
}

impl FiniteMetricSpace {
    /// Validate and build. Collects every violated axiom, not just the first.
    pub fn try_new(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let diags = metric_violations("space", &labels, &matrix);
        if !diags.is_empty() {
            return Err(Error::invalid(diags));
        }
        let n = labels.len();
        let mut dist = Vec::with_capacity(n * n);
        for row in &matrix {
            dist.extend(row.iter().copied());
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> Rational {
        self.dist[i * self.len() + j]
    }

    /// Distance from a point to a nonempty set: the minimum over members.
    pub fn gap(&self, x: usize, a: &Subset) -> Result<Rational, Error> {
        assert_eq!(a.universe(), self.len(), "subset universe mismatch");
        assert!(x < self.len(), "point index out of range");
        a.iter()
            .map(|p| self.dist(x, p))
            .min()
            .ok_or(Error::EmptySet)
    }

    /// The strict epsilon-enlargement `{x : gap(x, A) < eps}`.
    pub fn enlargement(&self, a: &Subset, eps: &Rational) -> Result<Subset, Error> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        if !eps.is_positive() {
            return Err(Error::NonPositiveEpsilon);
        }
        let mut out = Subset::empty(self.len());
        for x in 0..self.len() {
            if self.gap(x, a).expect("a nonempty") < *eps {
                out = out.with(x);
            }
        }
        Ok(out)
    }

    /// `sup_{a in A} gap(a, C)`, with `0` for empty `A` and `+inf` for
    /// nonempty `A` against empty `C`.
    pub fn excess(&self, a: &Subset, c: &Subset) -> Extended {
        assert_eq!(a.universe(), self.len(), "subset universe mismatch");
        assert_eq!(c.universe(), self.len(), "subset universe mismatch");
        let mut sup = Extended::zero();
        for p in a.iter() {
            let g = match self.gap(p, c) {
                Ok(g) => Extended::Finite(g),
                Err(_) => Extended::Infinity,
            };
            sup = sup.max(g);
        }
        sup
    }

    /// `A` is inside the strict eps-enlargement of `C`. Equivalent to
    /// `excess(A, C) < eps` and total in the degenerate cases, so the
    /// convergence checkers use this form throughout.
    pub fn within_enlargement(&self, a: &Subset, c: &Subset, eps: &Rational) -> bool {
        self.excess(a, c).below(eps)
    }

    /// The open ball `{w : d(z, w) < eps}`.
    pub fn ball(&self, z: usize, eps: &Rational) -> Subset {
        let mut out = Subset::empty(self.len());
        for w in 0..self.len() {
            if self.dist(z, w) < *eps {
                out = out.with(w);
            }
        }
        out
    }

    /// All distinct positive distances, ascending.
    pub fn positive_distances(&self) -> Vec<Rational> {
        let mut vals: Vec<Rational> = self
            .dist
            .iter()
            .copied()
            .filter(Rational::is_positive)
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }
}

impl std::fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteMetricSpace({:?})", self.labels)
    }
}

/// All metric-axiom violations of a candidate matrix, with `path` prefixed
/// onto each diagnostic.
pub fn metric_violations(
    path: &str,
    labels: &[String],
    matrix: &[Vec<Rational>],
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let n = labels.len();
    if n == 0 {
        diags.push(Diagnostic::new(path, "space must have at least one point"));
        return diags;
    }
    if n > MAX_UNIVERSE {
        diags.push(Diagnostic::new(
            path,
            format!("space has {n} points, cap is {MAX_UNIVERSE}"),
        ));
        return diags;
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            diags.push(Diagnostic::new(path, format!("duplicate label {l:?}")));
        }
    }
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        diags.push(Diagnostic::new(
            path,
            format!("distance matrix must be {n}x{n}"),
        ));
        return diags;
    }
    let d = |i: usize, j: usize| matrix[i][j];
    for i in 0..n {
        if !d(i, i).is_zero() {
            diags.push(Diagnostic::new(
                path,
                format!("dist({0},{0}) must be 0", labels[i]),
            ));
        }
        for j in (i + 1)..n {
            if d(i, j) != d(j, i) {
                diags.push(Diagnostic::new(
                    path,
                    format!("symmetry fails at ({},{})", labels[i], labels[j]),
                ));
            }
            if !d(i, j).is_positive() {
                diags.push(Diagnostic::new(
                    path,
                    format!("dist({},{}) must be positive", labels[i], labels[j]),
                ));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d(i, j) > d(i, k) + d(k, j) {
                    diags.push(Diagnostic::new(
                        path,
                        format!(
                            "triangle inequality fails at ({},{},{})",
                            labels[i], labels[j], labels[k]
                        ),
                    ));
                }
            }
        }
    }
    diags
}

/// Index of the pair `(xi, yi)` in a box product whose second factor has
/// `y_len` points. Box-product labels follow the same x-major layout.
pub fn product_index(y_len: usize, xi: usize, yi: usize) -> usize {
    xi * y_len + yi
}

/// The box-metric product: points `X x Y`, distance
/// `max(d(x1,x2), mu(y1,y2))`. The result is passed back through the metric
/// validator rather than trusted.
pub fn box_product(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<FiniteMetricSpace, Error> {
    let n = x.len() * y.len();
    if n > MAX_UNIVERSE {
        return Err(Error::InstanceTooLarge {
            what: "box product points",
            needed: n,
            cap: MAX_UNIVERSE,
        });
    }
    let mut labels = Vec::with_capacity(n);
    for xi in 0..x.len() {
        for yi in 0..y.len() {
            labels.push(format!("({},{})", x.label(xi), y.label(yi)));
        }
    }
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for x1 in 0..x.len() {
        for y1 in 0..y.len() {
            for x2 in 0..x.len() {
                for y2 in 0..y.len() {
                    let d = x.dist(x1, x2).max(y.dist(y1, y2));
                    matrix[product_index(y.len(), x1, y1)][product_index(y.len(), x2, y2)] = d;
                }
            }
        }
    }
    FiniteMetricSpace::try_new(labels, matrix)
}

/// Sorted, deduplicated union of the positive distances of the given spaces.
pub fn distance_spectrum(spaces: &[&FiniteMetricSpace]) -> Vec<Rational> {
    assert!(!spaces.is_empty(), "need at least one space");
    let mut vals: Vec<Rational> = spaces
        .iter()
        .flat_map(|s| s.positive_distances())
        .collect();
    vals.sort();
    vals.dedup();
    vals
}

/// The spectrum plus one value above its maximum: a complete set of
/// representatives for the half-open intervals on which every enlargement is
/// constant. `[1]` for an empty spectrum.
pub fn thresholds_from_spectrum(spectrum: &[Rational]) -> Vec<Rational> {
    let mut out = spectrum.to_vec();
    let top = out
        .last()
        .map(|m| *m + Rational::one())
        .unwrap_or_else(Rational::one);
    out.push(top);
    out
}

/// Subdivide each interval between consecutive thresholds (starting from 0)
/// into `factor` rational steps, and extend the same step count past the
/// maximum. Used to cross-check spectrum-based verdicts on a finer grid.
pub fn refine_thresholds(spectrum: &[Rational], factor: i64) -> Vec<Rational> {
    assert!(factor >= 1);
    let f = Rational::from_int(factor);
    let mut out = Vec::new();
    let mut prev = Rational::zero();
    for t in spectrum {
        let step = (*t - prev) / f;
        for k in 1..=factor {
            out.push(prev + step * Rational::from_int(k));
        }
        prev = *t;
    }
    let step = Rational::one() / f;
    for k in 1..=factor {
        out.push(prev + step * Rational::from_int(k));
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// `X = {a, b}` with `d(a, b) = 1`.
    fn two_point_space() -> FiniteMetricSpace {
        FiniteMetricSpace::try_new(
            vec!["a".into(), "b".into()],
            vec![
                vec![rat("0"), rat("1")],
                vec![rat("1"), rat("0")],
            ],
        )
        .unwrap()
    }

    /// `X = {a, b, c}` with `d(a,b) = 1`, `d(a,c) = 2`, `d(b,c) = 1`.
    fn three_point_space() -> FiniteMetricSpace {
        FiniteMetricSpace::try_new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![rat("0"), rat("1"), rat("2")],
                vec![rat("1"), rat("0"), rat("1")],
                vec![rat("2"), rat("1"), rat("0")],
            ],
        )
        .unwrap()
    }

    #[test]
    fn gap_examples() {
        let x2 = two_point_space();
        let a = Subset::from_indices(2, [0]);
        assert_eq!(x2.gap(0, &a).unwrap(), rat("0"));
        assert_eq!(x2.gap(1, &a).unwrap(), rat("1"));

        let x3 = three_point_space();
        let ab = Subset::from_indices(3, [0, 1]);
        // brute force over A: min(d(c,a), d(c,b)) = min(2, 1)
        let brute = ab.iter().map(|p| x3.dist(2, p)).min().unwrap();
        assert_eq!(x3.gap(2, &ab).unwrap(), brute);
        assert_eq!(brute, rat("1"));

        assert_eq!(x2.gap(0, &Subset::empty(2)), Err(Error::EmptySet));
    }

    #[test]
    fn enlargement_examples() {
        let x = two_point_space();
        let a = Subset::from_indices(2, [0]);
        assert_eq!(x.enlargement(&a, &rat("1/2")).unwrap().indices(), vec![0]);
        assert_eq!(
            x.enlargement(&a, &rat("3/2")).unwrap().indices(),
            vec![0, 1]
        );
        // strict inequality excludes the point at distance exactly 1
        assert_eq!(x.enlargement(&a, &rat("1")).unwrap().indices(), vec![0]);

        assert_eq!(x.enlargement(&Subset::empty(2), &rat("1")), Err(Error::EmptySet));
        assert_eq!(x.enlargement(&a, &rat("0")), Err(Error::NonPositiveEpsilon));
        assert_eq!(x.enlargement(&a, &rat("-1")), Err(Error::NonPositiveEpsilon));
    }

    #[test]
    fn excess_examples() {
        let x = two_point_space();
        let a = Subset::from_indices(2, [0]);
        let ab = Subset::full(2);
        assert_eq!(x.excess(&a, &ab), Extended::zero());
        assert_eq!(x.excess(&ab, &a), Extended::Finite(rat("1")));
        assert_eq!(x.excess(&Subset::empty(2), &a), Extended::zero());
        assert_eq!(x.excess(&a, &Subset::empty(2)), Extended::Infinity);
    }

    #[test]
    fn box_product_examples() {
        let x = two_point_space();
        let y = FiniteMetricSpace::try_new(
            vec!["p".into(), "q".into()],
            vec![
                vec![rat("0"), rat("3")],
                vec![rat("3"), rat("0")],
            ],
        )
        .unwrap();
        let b = box_product(&x, &y).unwrap();
        assert_eq!(b.len(), 4);
        let ap = product_index(2, 0, 0);
        let bq = product_index(2, 1, 1);
        assert_eq!(b.dist(ap, ap), rat("0"));
        assert_eq!(b.dist(ap, bq), rat("3"));
        assert_eq!(b.label(ap), "(a,p)");

        // unit distances on both sides: max(1, 1) = 1
        let y1 = FiniteMetricSpace::try_new(
            vec!["p".into(), "q".into()],
            vec![
                vec![rat("0"), rat("1")],
                vec![rat("1"), rat("0")],
            ],
        )
        .unwrap();
        let b1 = box_product(&x, &y1).unwrap();
        assert_eq!(b1.dist(product_index(2, 0, 0), product_index(2, 1, 1)), rat("1"));
    }

    #[test]
    fn spectrum_examples() {
        let x = two_point_space();
        assert_eq!(distance_spectrum(&[&x]), vec![rat("1")]);

        let x3 = three_point_space();
        assert_eq!(distance_spectrum(&[&x3]), vec![rat("1"), rat("2")]);

        let y = FiniteMetricSpace::try_new(
            vec!["p".into(), "q".into()],
            vec![
                vec![rat("0"), rat("3")],
                vec![rat("3"), rat("0")],
            ],
        )
        .unwrap();
        assert_eq!(
            distance_spectrum(&[&x3, &y]),
            vec![rat("1"), rat("2"), rat("3")]
        );
        assert_eq!(
            thresholds_from_spectrum(&distance_spectrum(&[&x])),
            vec![rat("1"), rat("2")]
        );
    }

    #[test]
    fn box_spectrum_adds_nothing_beyond_factors() {
        // every box distance is the max of a d-value and a mu-value, so the
        // combined spectrum of the factors already contains it
        let x = three_point_space();
        let y = two_point_space();
        let b = box_product(&x, &y).unwrap();
        assert_eq!(distance_spectrum(&[&x, &y]), distance_spectrum(&[&x, &y, &b]));
    }

    #[test]
    fn validation_collects_all_violations() {
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let bad = vec![
            vec![rat("0"), rat("1"), rat("5")],
            vec![rat("2"), rat("0"), rat("1")],
            vec![rat("5"), rat("1"), rat("0")],
        ];
        let diags = metric_violations("spaces.X", &labels, &bad);
        assert!(diags.iter().any(|d| d.message.contains("symmetry")));
        assert!(diags.iter().any(|d| d.message.contains("triangle")));
        assert!(diags.len() >= 2);
    }

    #[test]
    fn refine_thresholds_contains_spectrum_and_above() {
        let spec = vec![rat("1"), rat("2")];
        let grid = refine_thresholds(&spec, 10);
        assert!(grid.contains(&rat("1")));
        assert!(grid.contains(&rat("2")));
        assert!(grid.contains(&rat("1/10")));
        assert!(grid.contains(&rat("11/10")));
        assert!(grid.iter().any(|t| *t > rat("2")));
        assert_eq!(grid.len(), 30);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_space_strategy() -> impl Strategy<Value = FiniteMetricSpace> {
            // random positive entries repaired to a metric via min-plus closure
            (2usize..=5)
                .prop_flat_map(|n| {
                    proptest::collection::vec(1i64..=6, n * n).prop_map(move |raw| (n, raw))
                })
                .prop_map(|(n, raw)| {
                    let mut m = vec![vec![Rational::zero(); n]; n];
                    for i in 0..n {
                        for j in (i + 1)..n {
                            let v = Rational::new(raw[i * n + j], 2);
                            m[i][j] = v;
                            m[j][i] = v;
                        }
                    }
                    for k in 0..n {
                        for i in 0..n {
                            for j in 0..n {
                                if i != j {
                                    let via = m[i][k] + m[k][j];
                                    if via < m[i][j] {
                                        m[i][j] = via;
                                    }
                                }
                            }
                        }
                    }
                    let labels = (0..n).map(|i| format!("x{i}")).collect();
                    FiniteMetricSpace::try_new(labels, m).expect("repaired matrix is a metric")
                })
        }

        proptest! {
            #[test]
            fn inclusion_excess_equivalence(
                space in small_space_strategy(),
                a_bits in 1u64..32,
                c_bits in 1u64..32,
                eps_num in 1i64..8,
            ) {
                let n = space.len();
                let mask = Subset::full(n).bits();
                let a = Subset::from_bits(n, a_bits & mask);
                let c = Subset::from_bits(n, c_bits & mask);
                prop_assume!(!a.is_empty() && !c.is_empty());
                let eps = Rational::new(eps_num, 2);
                let enl = space.enlargement(&c, &eps).unwrap();
                prop_assert_eq!(
                    a.is_subset_of(&enl),
                    space.excess(&a, &c).below(&eps)
                );
            }

            #[test]
            fn enlargement_monotone_in_eps(
                space in small_space_strategy(),
                a_bits in 1u64..32,
                e1 in 1i64..8,
                e2 in 1i64..8,
            ) {
                let n = space.len();
                let a = Subset::from_bits(n, a_bits & Subset::full(n).bits());
                prop_assume!(!a.is_empty());
                let (lo, hi) = (Rational::new(e1.min(e2), 2), Rational::new(e1.max(e2), 2));
                let small = space.enlargement(&a, &lo).unwrap();
                let big = space.enlargement(&a, &hi).unwrap();
                prop_assert!(small.is_subset_of(&big));
                prop_assert!(a.is_subset_of(&small));
            }

            #[test]
            fn spectrum_stability(space in small_space_strategy(), a_bits in 1u64..32) {
                // inside one half-open spectrum interval the enlargement is constant
                let n = space.len();
                let a = Subset::from_bits(n, a_bits & Subset::full(n).bits());
                prop_assume!(!a.is_empty());
                let spectrum = space.positive_distances();
                let mut prev = Rational::zero();
                for t in &spectrum {
                    let mid = (prev + *t) / Rational::from_int(2);
                    if mid.is_positive() {
                        prop_assert_eq!(
                            space.enlargement(&a, &mid).unwrap(),
                            space.enlargement(&a, t).unwrap()
                        );
                    }
                    prev = *t;
                }
            }

            #[test]
            fn box_product_satisfies_metric_axioms(
                x in small_space_strategy(),
                y in small_space_strategy(),
            ) {
                // try_new re-validates every axiom on the product matrix
                prop_assert!(box_product(&x, &y).is_ok());
            }
        }
    }
}
