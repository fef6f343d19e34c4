//! Finite directed index sets and the ideal/filter machinery on them.
//!
//! A directed set here is a preorder (reflexive, transitive, every pair
//! bounded above); antisymmetry is not required. Ideals and filters are
//! stored as explicit subset families so that every closure law is a direct
//! membership check rather than a property of some implicit encoding.

use std::collections::BTreeSet;

use crate::error::{Diagnostic, Error};
use crate::metric::{distance_spectrum, thresholds_from_spectrum, FiniteMetricSpace};
use crate::subset::Subset;

/// Largest index set for which full `2^n` family enumeration is permitted.
pub const MAX_FAMILY_UNIVERSE: usize = 16;

/// A finite directed set: labelled elements and the explicit `>=` relation.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedSet {
    labels: Vec<String>,
    /// Row-major: `geq[i * n + j]` iff `i >= j`.
    geq: Vec<bool>,
}

impl DirectedSet {
    pub fn try_new(labels: Vec<String>, relation: Vec<Vec<bool>>) -> Result<Self, Error> {
        let diags = directed_set_violations("directed_set", &labels, &relation);
        if !diags.is_empty() {
            return Err(Error::invalid(diags));
        }
        let n = labels.len();
        let mut geq = Vec::with_capacity(n * n);
        for row in &relation {
            geq.extend(row.iter().copied());
        }
        Ok(DirectedSet { labels, geq })
    }

    /// The linear order `g1 <= g2 <= ... <= gn`.
    pub fn linear(n: usize) -> Self {
        assert!(n >= 1);
        let labels = (1..=n).map(|i| format!("g{i}")).collect();
        let relation = (0..n)
            .map(|i| (0..n).map(|j| i >= j).collect())
            .collect();
        DirectedSet::try_new(labels, relation).expect("linear order is directed")
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

    pub fn geq(&self, i: usize, j: usize) -> bool {
        self.geq[i * self.len() + j]
    }

    /// The tail `M_n = {k : k >= n}`; contains `n` by reflexivity.
    pub fn tail(&self, n: usize) -> Result<Subset, Error> {
        if n >= self.len() {
            return Err(Error::UnknownIndex(n.to_string()));
        }
        Ok(Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&k| self.geq(k, n)),
        ))
    }

    /// `gamma_set` contains a whole tail, i.e. the condition indexed by it
    /// holds eventually.
    pub fn holds_eventually(&self, gamma_set: &Subset) -> bool {
        (0..self.len()).any(|n| self.tail(n).expect("index in range").is_subset_of(gamma_set))
    }

    /// Total and antisymmetric, i.e. a chain.
    pub fn is_linear_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (self.geq(i, j) || self.geq(j, i)) && (i == j || !(self.geq(i, j) && self.geq(j, i)))
            })
        })
    }

    /// A subset is cofinal when it meets every tail from above.
    pub fn is_cofinal(&self, s: &Subset) -> bool {
        (0..self.len()).all(|n| s.iter().any(|m| self.geq(m, n)))
    }

    /// Every cofinal subset, in ascending mask order.
    pub fn cofinal_subsets(&self) -> Vec<Subset> {
        assert!(self.len() <= MAX_FAMILY_UNIVERSE);
        Subset::all_of_universe(self.len())
            .filter(|s| self.is_cofinal(s))
            .collect()
    }
}

impl std::fmt::Debug for DirectedSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DirectedSet({:?})", self.labels)
    }
}

#[allow(clippy::needless_range_loop)] // diagnostics index labels and the matrix together
pub fn directed_set_violations(
    path: &str,
    labels: &[String],
    relation: &[Vec<bool>],
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let n = labels.len();
    if n == 0 {
        diags.push(Diagnostic::new(path, "directed set must be nonempty"));
        return diags;
    }
    if n > MAX_FAMILY_UNIVERSE {
        diags.push(Diagnostic::new(
            path,
            format!("directed set has {n} elements, cap is {MAX_FAMILY_UNIVERSE}"),
        ));
        return diags;
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            diags.push(Diagnostic::new(path, format!("duplicate label {l:?}")));
        }
    }
    if relation.len() != n || relation.iter().any(|row| row.len() != n) {
        diags.push(Diagnostic::new(path, format!("relation matrix must be {n}x{n}")));
        return diags;
    }
    let geq = |i: usize, j: usize| relation[i][j];
    for i in 0..n {
        if !geq(i, i) {
            diags.push(Diagnostic::new(
                path,
                format!("relation not reflexive at {}", labels[i]),
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if geq(i, j) && geq(j, k) && !geq(i, k) {
                    diags.push(Diagnostic::new(
                        path,
                        format!(
                            "relation not transitive: {} >= {} >= {} but not {} >= {}",
                            labels[i], labels[j], labels[k], labels[i], labels[k]
                        ),
                    ));
                }
            }
        }
    }
    for m in 0..n {
        for p in m..n {
            if !(0..n).any(|u| geq(u, m) && geq(u, p)) {
                diags.push(Diagnostic::new(
                    path,
                    format!("no upper bound for ({},{})", labels[m], labels[p]),
                ));
            }
        }
    }
    diags
}

/// An explicit family of subsets of a fixed universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsetFamily {
    universe: usize,
    members: BTreeSet<Subset>,
}

impl SubsetFamily {
    pub fn new<I: IntoIterator<Item = Subset>>(universe: usize, members: I) -> Self {
        let members: BTreeSet<Subset> = members.into_iter().collect();
        for m in &members {
            assert_eq!(m.universe(), universe, "family member universe mismatch");
        }
        SubsetFamily { universe, members }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.members.contains(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subset> {
        self.members.iter()
    }
}

/// A nontrivial ideal: contains the empty set, closed under subsets and
/// pairwise unions, and does not contain the whole universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ideal {
    family: SubsetFamily,
}

impl Ideal {
    pub fn try_new(family: SubsetFamily) -> Result<Self, Error> {
        let mut diags = Vec::new();
        let n = family.universe();
        let empty = Subset::empty(n);
        let full = Subset::full(n);
        if !family.contains(&empty) {
            diags.push(Diagnostic::new("ideal", "must contain the empty set"));
        }
        if family.contains(&full) {
            diags.push(Diagnostic::new(
                "ideal",
                "must not contain the whole index set (nontriviality)",
            ));
        }
        // downward closure: removing one element from a member stays inside
        'down: for m in family.iter() {
            for i in m.iter() {
                if !family.contains(&m.without(i)) {
                    diags.push(Diagnostic::new(
                        "ideal",
                        format!("not closed under subsets at {m:?}"),
                    ));
                    break 'down;
                }
            }
        }
        'union: for a in family.iter() {
            for b in family.iter() {
                if !family.contains(&a.union(b)) {
                    diags.push(Diagnostic::new(
                        "ideal",
                        format!("not closed under union of {a:?} and {b:?}"),
                    ));
                    break 'union;
                }
            }
        }
        if diags.is_empty() {
            Ok(Ideal { family })
        } else {
            Err(Error::invalid(diags))
        }
    }

    pub fn universe(&self) -> usize {
        self.family.universe()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.family.contains(s)
    }

    /// Membership of `a` in the dual filter: the complement is negligible.
    pub fn in_filter(&self, a: &Subset) -> bool {
        self.contains(&a.complement())
    }

    pub fn members(&self) -> impl Iterator<Item = &Subset> {
        self.family.iter()
    }

    pub fn family(&self) -> &SubsetFamily {
        &self.family
    }

    pub fn is_subideal_of(&self, other: &Ideal) -> bool {
        self.members().all(|m| other.contains(m))
    }
}

/// A filter: no empty set, closed under pairwise intersections and supersets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filter {
    family: SubsetFamily,
}

impl Filter {
    pub fn try_new(family: SubsetFamily) -> Result<Self, Error> {
        let mut diags = Vec::new();
        let n = family.universe();
        if family.contains(&Subset::empty(n)) {
            diags.push(Diagnostic::new("filter", "must not contain the empty set"));
        }
        if family.is_empty() {
            diags.push(Diagnostic::new("filter", "must be nonempty"));
        }
        'inter: for a in family.iter() {
            for b in family.iter() {
                if !family.contains(&a.intersection(b)) {
                    diags.push(Diagnostic::new(
                        "filter",
                        format!("not closed under intersection of {a:?} and {b:?}"),
                    ));
                    break 'inter;
                }
            }
        }
        'up: for m in family.iter() {
            for i in 0..n {
                if !m.contains(i) && !family.contains(&m.with(i)) {
                    diags.push(Diagnostic::new(
                        "filter",
                        format!("not closed under supersets at {m:?}"),
                    ));
                    break 'up;
                }
            }
        }
        if diags.is_empty() {
            Ok(Filter { family })
        } else {
            Err(Error::invalid(diags))
        }
    }

    pub fn universe(&self) -> usize {
        self.family.universe()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.family.contains(s)
    }

    pub fn members(&self) -> impl Iterator<Item = &Subset> {
        self.family.iter()
    }
}

/// The tail ideal: sets whose complement contains a whole tail. Dual to the
/// filter of eventually-true index sets.
pub fn tail_ideal(ds: &DirectedSet) -> Ideal {
    let n = ds.len();
    assert!(n <= MAX_FAMILY_UNIVERSE);
    let tails: Vec<Subset> = (0..n).map(|i| ds.tail(i).expect("index in range")).collect();
    let members = Subset::all_of_universe(n)
        .filter(|a| {
            let comp = a.complement();
            tails.iter().any(|t| t.is_subset_of(&comp))
        })
        .collect::<Vec<_>>();
    Ideal::try_new(SubsetFamily::new(n, members)).expect("tail ideal satisfies the ideal laws")
}

/// Smallest ideal containing the given generator sets: under closure by
/// finite unions and subsets this is the power set of the generators' union.
/// Errors when that union is the whole index set.
pub fn ideal_from_generators(universe: usize, base: &[Subset]) -> Result<Ideal, Error> {
    assert!(universe <= MAX_FAMILY_UNIVERSE);
    let mut total = Subset::empty(universe);
    for g in base {
        total = total.union(g);
    }
    if total == Subset::full(universe) {
        return Err(Error::TrivialIdeal);
    }
    let mut members = total.nonempty_subsets();
    members.push(Subset::empty(universe));
    Ok(Ideal::try_new(SubsetFamily::new(universe, members))
        .expect("generated family satisfies the ideal laws"))
}

/// The dual filter `{A : complement(A) in I}`.
pub fn dual_filter(ideal: &Ideal) -> Filter {
    let n = ideal.universe();
    let members = ideal.members().map(|m| m.complement());
    Filter::try_new(SubsetFamily::new(n, members))
        .expect("dual of a nontrivial ideal satisfies the filter laws")
}

/// Every tail belongs to the dual filter.
pub fn is_d_admissible(ideal: &Ideal, ds: &DirectedSet) -> bool {
    assert_eq!(ideal.universe(), ds.len());
    (0..ds.len()).all(|n| ideal.in_filter(&ds.tail(n).expect("index in range")))
}

/// Restrict an ideal to a nonempty subset of the index set, re-indexing
/// members to positions within `g0` (ascending). Errors with
/// `DegenerateTrace` when `g0` itself lands inside the restriction, which
/// would make the restricted dual filter contain the empty set.
pub fn trace_ideal(ideal: &Ideal, g0: &Subset) -> Result<Ideal, Error> {
    assert_eq!(ideal.universe(), g0.universe());
    if g0.is_empty() {
        return Err(Error::EmptySet);
    }
    if ideal.members().any(|m| g0.is_subset_of(m)) {
        return Err(Error::DegenerateTrace);
    }
    let positions = g0.indices();
    let k = positions.len();
    let members = ideal.members().map(|m| {
        Subset::from_indices(
            k,
            positions
                .iter()
                .enumerate()
                .filter(|(_, gamma)| m.contains(**gamma))
                .map(|(pos, _)| pos),
        )
    });
    Ok(Ideal::try_new(SubsetFamily::new(k, members))
        .expect("trace of an ideal satisfies the ideal laws"))
}

/// `y` is the ideal limit of a net of points of `space`: for every positive
/// threshold, the indices landing strictly within it of `y` form a dual-filter
/// set. Decided on the space's distance spectrum.
pub fn ideal_limit_point(
    values: &[usize],
    y: usize,
    ideal: &Ideal,
    space: &FiniteMetricSpace,
) -> bool {
    assert_eq!(values.len(), ideal.universe(), "net not total on the index set");
    let thresholds = thresholds_from_spectrum(&distance_spectrum(&[space]));
    thresholds.iter().all(|eps| {
        let close = Subset::from_indices(
            values.len(),
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| space.dist(**v, y) < *eps)
                .map(|(i, _)| i),
        );
        ideal.in_filter(&close)
    })
}
