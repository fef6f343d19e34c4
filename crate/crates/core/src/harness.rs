//! Randomized certification campaigns.
//!
//! Each trial draws a seeded random instance (metric matrices repaired to
//! satisfy the triangle inequality by min-plus closure, a directed set drawn
//! from linear orders, trees with a top and products of chains, an ideal per
//! strategy, and a net biased toward convergent and near-convergent shapes)
//! and evaluates the selected properties on it. Hypotheses are evaluated,
//! never assumed; trials whose hypotheses fail are counted as skipped. Every
//! failure is serialized as a reloadable instance file.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bornology::Bornology;
use crate::convergence::{
    classical_p_conv, classical_p_minus, classical_p_plus, classical_set_conv, graph_ideal_conv,
    lower_set_ideal_conv, lower_set_ideal_conv_with_thresholds, p_ideal_conv,
    p_ideal_conv_with_thresholds, p_ideal_minus_naive, p_ideal_minus_naive_with_thresholds,
    p_ideal_minus_supinf, p_ideal_minus_supinf_with_thresholds, p_ideal_plus_naive,
    p_ideal_plus_naive_with_thresholds, p_ideal_plus_supinf, p_ideal_plus_supinf_with_thresholds,
    pointwise_ideal_conv, pointwise_ideal_conv_with_thresholds, sensitivity, sup_sup_condition,
    sup_sup_condition_with_thresholds, upper_set_ideal_conv,
    upper_set_ideal_conv_with_thresholds, ConvergenceVerdict, Instance, Side,
};
use crate::error::{Diagnostic, Error};
use crate::instance_file::InstanceFile;
use crate::metric::{distance_spectrum, refine_thresholds, thresholds_from_spectrum, FiniteMetricSpace};
use crate::order::{ideal_from_generators, tail_ideal, DirectedSet, Ideal};
use crate::partial_map::{PartialMap, PartialMapNet};
use crate::rational::Rational;
use crate::subset::Subset;

/// Size caps for generated instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub x: usize,
    pub y: usize,
    pub gamma: usize,
    pub base: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { x: 5, y: 4, gamma: 6, base: 3 }
    }
}

/// How the per-trial ideal is drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealStrategy {
    /// The tail ideal of the generated directed set.
    TailIdeal,
    /// Generated from a couple of random subsets of a random proper subset.
    Generated,
    /// The power set of a random proper subset.
    RandomNontrivial,
    /// The smallest ideal `{{}}`; not admissible on nontrivial orders.
    Empty,
    /// Fixed generators over `0..gamma`; forces the index set to full cap size.
    FromGenerators(Vec<Vec<usize>>),
}

/// The certified properties. `all` lists every equivalence and implication;
/// the mutation smoke check is opt-in because it is expected to fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyId {
    /// Literal lower form agrees with its sup-inf characterization.
    LowerNaiveSupinf,
    /// Literal upper form agrees with its sup-inf characterization.
    UpperNaiveSupinf,
    /// Graph convergence in the box product agrees with map convergence.
    GraphMap,
    /// Map convergence implies set convergence of the domains.
    MapImpliesDomain,
    /// Upper convergence of a continuous limit implies pointwise convergence.
    PointwiseFromUpper,
    /// Under strong uniform continuity, upper convergence is the sup-sup
    /// condition.
    SupsupStrongUc,
    /// Under enlargement stability and relative uniform continuity,
    /// two-sided convergence is the sup-sup condition plus lower set
    /// convergence of the domains.
    TwoSidedStability,
    /// Classical eventual checkers agree with the tail-ideal checkers.
    ClassicalIdeal,
    /// Verdicts true under an ideal stay true under any larger ideal.
    IdealMonotonicity,
    /// Spectrum-based verdicts agree with a 10x finer threshold grid.
    SpectrumGrid,
    /// Constant nets converge in every mode.
    TrivialTrue,
    /// A deliberately weakened comparator must be caught (expected to fail).
    MutationSmoke,
}

impl PropertyId {
    pub fn all() -> Vec<PropertyId> {
        use PropertyId::*;
        vec![
            LowerNaiveSupinf,
            UpperNaiveSupinf,
            GraphMap,
            MapImpliesDomain,
            PointwiseFromUpper,
            SupsupStrongUc,
            TwoSidedStability,
            ClassicalIdeal,
            IdealMonotonicity,
            SpectrumGrid,
            TrivialTrue,
        ]
    }

    pub fn name(&self) -> &'static str {
        use PropertyId::*;
        match self {
            LowerNaiveSupinf => "lower-naive-supinf",
            UpperNaiveSupinf => "upper-naive-supinf",
            GraphMap => "graph-map",
            MapImpliesDomain => "map-implies-domain",
            PointwiseFromUpper => "pointwise-from-upper",
            SupsupStrongUc => "supsup-strong-uc",
            TwoSidedStability => "two-sided-stability",
            ClassicalIdeal => "classical-ideal",
            IdealMonotonicity => "ideal-monotonicity",
            SpectrumGrid => "spectrum-grid",
            TrivialTrue => "trivial-true",
            MutationSmoke => "mutation-smoke",
        }
    }
}

impl std::fmt::Display for PropertyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyId::all()
            .into_iter()
            .chain([PropertyId::MutationSmoke])
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub caps: Caps,
    /// Distance values drawn before metric repair.
    pub pool: Vec<Rational>,
    pub ideal_strategy: IdealStrategy,
    pub properties: Vec<PropertyId>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 0,
            trials: 500,
            caps: Caps::default(),
            pool: default_pool(),
            ideal_strategy: IdealStrategy::RandomNontrivial,
            properties: PropertyId::all(),
        }
    }
}

pub fn default_pool() -> Vec<Rational> {
    ["1/2", "1", "3/2", "2", "3"]
        .iter()
        .map(|s| s.parse().expect("pool literals parse"))
        .collect()
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let mut diags = Vec::new();
        if self.trials == 0 {
            diags.push(Diagnostic::new("config.trials", "must be at least 1"));
        }
        let c = &self.caps;
        if c.x == 0 || c.x > 8 {
            diags.push(Diagnostic::new("config.caps.x", "must be in 1..=8"));
        }
        if c.y == 0 || c.y > 8 {
            diags.push(Diagnostic::new("config.caps.y", "must be in 1..=8"));
        }
        if c.gamma == 0 || c.gamma > 12 {
            diags.push(Diagnostic::new("config.caps.gamma", "must be in 1..=12"));
        }
        if c.base == 0 || c.base > 8 {
            diags.push(Diagnostic::new("config.caps.base", "must be in 1..=8"));
        }
        if self.pool.is_empty() || self.pool.iter().any(|v| !v.is_positive()) {
            diags.push(Diagnostic::new(
                "config.pool",
                "distance pool must be nonempty and positive",
            ));
        }
        if self.properties.is_empty() {
            diags.push(Diagnostic::new("config.properties", "select at least one"));
        }
        if let IdealStrategy::FromGenerators(gens) = &self.ideal_strategy {
            if (1..=12).contains(&c.gamma) {
                let mut union = Subset::empty(c.gamma);
                for (i, g) in gens.iter().enumerate() {
                    for idx in g {
                        if *idx >= c.gamma {
                            diags.push(Diagnostic::new(
                                format!("config.ideal.generators[{i}]"),
                                format!("index {idx} out of range for gamma cap {}", c.gamma),
                            ));
                        } else {
                            union = union.with(*idx);
                        }
                    }
                }
                if union == Subset::full(c.gamma) {
                    diags.push(Diagnostic::new(
                        "config.ideal.generators",
                        "generators cover the whole index set",
                    ));
                }
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(diags))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialEvaluation {
    pub outcome: Outcome,
    /// For properties with hypotheses: the hypothesis evaluated true.
    pub hypothesis_checked_true: bool,
    pub degenerate_traces: usize,
}

impl TrialEvaluation {
    fn plain(outcome: Outcome) -> Self {
        TrialEvaluation {
            outcome,
            hypothesis_checked_true: false,
            degenerate_traces: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub hypothesis_checked_true: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub property: String,
    pub trial: usize,
    pub detail: String,
    pub instance: InstanceFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub properties: BTreeMap<String, PropertyTally>,
    pub counterexamples: Vec<CounterexampleRecord>,
    pub degenerate_traces: usize,
    pub duration_ms: u64,
}

impl CampaignReport {
    pub fn failures(&self) -> usize {
        self.properties.values().map(|t| t.fail).sum()
    }
}

fn rng_for_trial(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Deterministic in `(config, trial)`.
pub fn random_instance(cfg: &CampaignConfig, trial: usize) -> Instance {
    let mut rng = rng_for_trial(cfg.seed, trial);
    let x = random_space(&mut rng, cfg.caps.x, &cfg.pool, "x");
    let y = random_space(&mut rng, cfg.caps.y, &cfg.pool, "y");
    let directed = random_directed(&mut rng, cfg.caps.gamma, &cfg.ideal_strategy);
    let ideal = random_ideal(&mut rng, &directed, &cfg.ideal_strategy);
    let bornology = random_bornology(&mut rng, x.len(), cfg.caps.base);
    let limit = random_partial_map(&mut rng, x.len(), y.len());
    let maps = random_net(&mut rng, &directed, &limit, x.len(), y.len());
    let net = PartialMapNet::try_new(directed.len(), maps).expect("generated net is total");
    Instance::try_new(x, y, directed, ideal, bornology, net, limit)
        .expect("generated instances satisfy the cross-reference invariants")
}

#[allow(clippy::needless_range_loop)] // symmetric matrix fill wants index pairs
fn random_space(
    rng: &mut ChaCha8Rng,
    cap: usize,
    pool: &[Rational],
    prefix: &str,
) -> FiniteMetricSpace {
    let n = rng.gen_range(1..=cap);
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = pool[rng.gen_range(0..pool.len())];
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    // min-plus closure repairs the triangle inequality while keeping the
    // value set dense over small spectra
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
    let labels = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    FiniteMetricSpace::try_new(labels, m).expect("repaired matrix is a metric")
}

#[allow(clippy::needless_range_loop)]
fn random_directed(rng: &mut ChaCha8Rng, cap: usize, strategy: &IdealStrategy) -> DirectedSet {
    if matches!(strategy, IdealStrategy::FromGenerators(_)) {
        return DirectedSet::linear(cap);
    }
    let n = rng.gen_range(1..=cap);
    let mut relation: Vec<Vec<bool>> = match rng.gen_range(0..3u8) {
        0 => (0..n).map(|i| (0..n).map(|j| i >= j).collect()).collect(),
        1 => {
            // tree with node 0 on top: m >= k iff m lies on the path from k
            // to the root
            let mut parent = vec![0usize; n];
            for (i, p) in parent.iter_mut().enumerate().skip(1) {
                *p = rng.gen_range(0..i);
            }
            let mut rel = vec![vec![false; n]; n];
            for k in 0..n {
                let mut cur = k;
                loop {
                    rel[cur][k] = true;
                    if cur == 0 {
                        break;
                    }
                    cur = parent[cur];
                }
            }
            rel
        }
        _ => {
            // product of two chains of total size at most the cap
            let a = rng.gen_range(1..=n);
            let b = (n / a).max(1);
            let size = a * b;
            let mut rel = vec![vec![false; size]; size];
            for i1 in 0..a {
                for j1 in 0..b {
                    for i2 in 0..a {
                        for j2 in 0..b {
                            rel[i1 * b + j1][i2 * b + j2] = i1 >= i2 && j1 >= j2;
                        }
                    }
                }
            }
            rel
        }
    };
    // occasionally clone an element into an order-equivalent twin, so the
    // preorder (non-antisymmetric) case stays exercised
    let size = relation.len();
    if size < cap && rng.gen_ratio(1, 5) {
        let e = rng.gen_range(0..size);
        for row in relation.iter_mut() {
            let v = row[e];
            row.push(v);
        }
        let mut new_row: Vec<bool> = relation[e].clone();
        new_row[e] = true;
        *new_row.last_mut().expect("nonempty") = true;
        relation.push(new_row);
        relation[e][size] = true;
    }
    let labels = (1..=relation.len()).map(|i| format!("g{i}")).collect();
    DirectedSet::try_new(labels, relation).expect("generated relation is directed")
}

fn random_proper_subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    let full = Subset::full(n).bits();
    Subset::from_bits(n, rng.gen_range(0..full.max(1)))
}

fn random_nonempty_subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    Subset::from_bits(n, rng.gen_range(1..=Subset::full(n).bits()))
}

fn random_ideal(rng: &mut ChaCha8Rng, ds: &DirectedSet, strategy: &IdealStrategy) -> Ideal {
    let n = ds.len();
    match strategy {
        IdealStrategy::TailIdeal => tail_ideal(ds),
        IdealStrategy::Empty => ideal_from_generators(n, &[]).expect("empty ideal is nontrivial"),
        IdealStrategy::RandomNontrivial => {
            let m = random_proper_subset(rng, n);
            ideal_from_generators(n, &[m]).expect("proper subset generates a nontrivial ideal")
        }
        IdealStrategy::Generated => {
            let bound = random_proper_subset(rng, n);
            let k = rng.gen_range(1..=2usize);
            let gens: Vec<Subset> = (0..k)
                .map(|_| {
                    Subset::from_indices(n, bound.iter().filter(|_| rng.gen_bool(0.6)))
                })
                .collect();
            ideal_from_generators(n, &gens)
                .expect("subsets of a proper subset generate a nontrivial ideal")
        }
        IdealStrategy::FromGenerators(gens) => {
            let subsets: Vec<Subset> = gens
                .iter()
                .map(|g| Subset::from_indices(n, g.iter().copied()))
                .collect();
            ideal_from_generators(n, &subsets).expect("config validated the generators")
        }
    }
}

fn random_bornology(rng: &mut ChaCha8Rng, x_len: usize, base_cap: usize) -> Bornology {
    match rng.gen_range(0..3u8) {
        0 => Bornology::all_subsets(x_len),
        1 if x_len <= base_cap => {
            let base: Vec<Subset> = (0..x_len).map(|i| Subset::singleton(x_len, i)).collect();
            Bornology::from_base(x_len, &base).expect("singletons cover the space")
        }
        _ => {
            let k = rng.gen_range(1..=base_cap);
            let mut base: Vec<Subset> = (0..k)
                .map(|_| random_nonempty_subset(rng, x_len))
                .collect();
            let union = base.iter().fold(Subset::empty(x_len), |a, b| a.union(b));
            let uncovered = union.complement();
            if !uncovered.is_empty() {
                let last = base.last_mut().expect("at least one base set");
                *last = last.union(&uncovered);
            }
            Bornology::from_base(x_len, &base).expect("patched base covers the space")
        }
    }
}

fn random_partial_map(rng: &mut ChaCha8Rng, x_len: usize, y_len: usize) -> PartialMap {
    let domain = random_nonempty_subset(rng, x_len);
    let mut values = vec![None; x_len];
    for i in domain.iter() {
        values[i] = Some(rng.gen_range(0..y_len));
    }
    PartialMap::try_new(x_len, y_len, domain, values).expect("generated table is consistent")
}

/// One random tweak: move a value, grow the domain, or shrink it.
fn perturb(rng: &mut ChaCha8Rng, pm: &PartialMap, y_len: usize) -> PartialMap {
    let x_len = pm.x_len();
    let mut domain = *pm.domain();
    let mut values: Vec<Option<usize>> = (0..x_len).map(|i| pm.value(i)).collect();
    match rng.gen_range(0..3u8) {
        0 => {
            let picks = domain.indices();
            let i = picks[rng.gen_range(0..picks.len())];
            values[i] = Some(rng.gen_range(0..y_len));
        }
        1 => {
            let outside = domain.complement().indices();
            if !outside.is_empty() {
                let i = outside[rng.gen_range(0..outside.len())];
                domain = domain.with(i);
                values[i] = Some(rng.gen_range(0..y_len));
            }
        }
        _ => {
            if domain.len() >= 2 {
                let picks = domain.indices();
                let i = picks[rng.gen_range(0..picks.len())];
                domain = domain.without(i);
                values[i] = None;
            }
        }
    }
    PartialMap::try_new(x_len, y_len, domain, values).expect("perturbed table is consistent")
}

fn random_net(
    rng: &mut ChaCha8Rng,
    directed: &DirectedSet,
    limit: &PartialMap,
    x_len: usize,
    y_len: usize,
) -> Vec<PartialMap> {
    let n = directed.len();
    // weights: constant 2, eventually-limit 2, perturbed 3, random 2,
    // fixed-domain 1
    let style = rng.gen_range(0..10u8);
    (0..n)
        .map(|gamma| match style {
            0 | 1 => limit.clone(),
            2 | 3 => {
                let pivot = rng.gen_range(0..n);
                if directed.geq(gamma, pivot) {
                    limit.clone()
                } else {
                    random_partial_map(rng, x_len, y_len)
                }
            }
            4..=6 => {
                if rng.gen_bool(0.5) {
                    perturb(rng, limit, y_len)
                } else {
                    limit.clone()
                }
            }
            7 | 8 => random_partial_map(rng, x_len, y_len),
            _ => {
                let mut values = vec![None; x_len];
                for i in limit.domain().iter() {
                    values[i] = Some(rng.gen_range(0..y_len));
                }
                PartialMap::try_new(x_len, y_len, *limit.domain(), values)
                    .expect("fixed-domain table is consistent")
            }
        })
        .collect()
}

/// Deterministically grow an ideal to a strictly larger nontrivial one, or
/// return it unchanged when it is already maximal.
pub fn grow_ideal(ideal: &Ideal) -> Ideal {
    let n = ideal.universe();
    let max_member = ideal
        .members()
        .fold(Subset::empty(n), |acc, m| acc.union(m));
    if max_member.len() + 1 >= n {
        return ideal.clone();
    }
    let extra = max_member
        .complement()
        .iter()
        .next()
        .expect("complement nonempty");
    ideal_from_generators(n, &[max_member.with(extra)])
        .expect("still a proper subset")
}

fn verdicts_equal(a: &ConvergenceVerdict, b: &ConvergenceVerdict) -> bool {
    a.holds == b.holds
}

/// Evaluate one property on one instance. Pure: counterexamples re-verify by
/// re-running this function on the reloaded instance.
pub fn check_property(property: PropertyId, inst: &Instance) -> TrialEvaluation {
    use PropertyId::*;
    match property {
        LowerNaiveSupinf => match p_ideal_minus_naive(inst) {
            Err(e) => TrialEvaluation::plain(Outcome::Skip(e.to_string())),
            Ok(naive) => {
                let supinf = p_ideal_minus_supinf(inst);
                TrialEvaluation::plain(if verdicts_equal(&naive, &supinf) {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!(
                        "lower: naive={} sup-inf={}",
                        naive.holds, supinf.holds
                    ))
                })
            }
        },
        UpperNaiveSupinf => match p_ideal_plus_naive(inst) {
            Err(e) => TrialEvaluation::plain(Outcome::Skip(e.to_string())),
            Ok(naive) => {
                let supinf = p_ideal_plus_supinf(inst);
                TrialEvaluation::plain(if verdicts_equal(&naive, &supinf) {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!(
                        "upper: naive={} sup-inf={}",
                        naive.holds, supinf.holds
                    ))
                })
            }
        },
        GraphMap => {
            let gl = graph_ideal_conv(inst, Side::Lower);
            let ml = p_ideal_minus_supinf(inst);
            let gu = graph_ideal_conv(inst, Side::Upper);
            let mu = p_ideal_plus_supinf(inst);
            TrialEvaluation::plain(if gl.holds == ml.holds && gu.holds == mu.holds {
                Outcome::Pass
            } else {
                Outcome::Fail(format!(
                    "graph lower={} map lower={} graph upper={} map upper={}",
                    gl.holds, ml.holds, gu.holds, mu.holds
                ))
            })
        }
        MapImpliesDomain => {
            let domains = inst.net.domains();
            let minus = p_ideal_minus_supinf(inst);
            let plus = p_ideal_plus_supinf(inst);
            let mut failures = Vec::new();
            if minus.holds {
                let lower = lower_set_ideal_conv(
                    &inst.x,
                    &domains,
                    inst.limit.domain(),
                    &inst.bornology,
                    &inst.ideal,
                );
                if !lower.holds {
                    failures.push("lower map convergence without lower domain convergence");
                }
            }
            if plus.holds {
                let upper = upper_set_ideal_conv(
                    &inst.x,
                    &domains,
                    inst.limit.domain(),
                    &inst.bornology,
                    &inst.ideal,
                );
                if !upper.holds {
                    failures.push("upper map convergence without upper domain convergence");
                }
            }
            TrialEvaluation::plain(if failures.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(failures.join("; "))
            })
        }
        PointwiseFromUpper => {
            let plus = p_ideal_plus_supinf(inst).holds;
            let continuous = inst.limit.is_continuous(&inst.x, &inst.y);
            let pointwise = pointwise_ideal_conv(inst);
            let degenerate = pointwise.degenerate_traces.len();
            let hypothesis = plus && continuous;
            let outcome = if hypothesis && !pointwise.holds {
                Outcome::Fail("upper-convergent continuous limit fails pointwise".into())
            } else if hypothesis && degenerate > 0 {
                Outcome::Skip("degenerate traces excluded some cofinal subsets".into())
            } else {
                Outcome::Pass
            };
            TrialEvaluation {
                outcome,
                hypothesis_checked_true: continuous,
                degenerate_traces: degenerate,
            }
        }
        SupsupStrongUc => {
            let hypothesis = inst
                .limit
                .is_strongly_uniformly_continuous(&inst.bornology, &inst.x, &inst.y);
            if !hypothesis {
                return TrialEvaluation {
                    outcome: Outcome::Skip("limit not strongly uniformly continuous".into()),
                    hypothesis_checked_true: false,
                    degenerate_traces: 0,
                };
            }
            let plus = p_ideal_plus_supinf(inst);
            let supsup = sup_sup_condition(inst);
            TrialEvaluation {
                outcome: if plus.holds == supsup.holds {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!(
                        "upper={} sup-sup={}",
                        plus.holds, supsup.holds
                    ))
                },
                hypothesis_checked_true: true,
                degenerate_traces: 0,
            }
        }
        TwoSidedStability => {
            let stable = inst.bornology.is_stable_under_small_enlargement(&inst.x);
            let uc = inst
                .limit
                .is_uniformly_continuous_rel(&inst.bornology, &inst.x, &inst.y);
            if !(stable && uc) {
                return TrialEvaluation {
                    outcome: Outcome::Skip("stability or uniform continuity failed".into()),
                    hypothesis_checked_true: false,
                    degenerate_traces: 0,
                };
            }
            let two_sided = p_ideal_conv(inst);
            let supsup = sup_sup_condition(inst);
            let lower_domains = lower_set_ideal_conv(
                &inst.x,
                &inst.net.domains(),
                inst.limit.domain(),
                &inst.bornology,
                &inst.ideal,
            );
            let rhs = supsup.holds && lower_domains.holds;
            TrialEvaluation {
                outcome: if two_sided.holds == rhs {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!(
                        "two-sided={} sup-sup={} lower-domains={}",
                        two_sided.holds, supsup.holds, lower_domains.holds
                    ))
                },
                hypothesis_checked_true: true,
                degenerate_traces: 0,
            }
        }
        ClassicalIdeal => {
            let tail_inst = inst
                .with_ideal(tail_ideal(&inst.directed))
                .expect("same index set");
            let domains = inst.net.domains();
            let d = inst.limit.domain();
            let mut mismatches = Vec::new();

            let cl = classical_set_conv(
                &inst.x, &domains, d, &inst.bornology, &inst.directed, Side::Lower,
            );
            let il = lower_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &tail_inst.ideal);
            if cl.holds != il.holds {
                mismatches.push("lower set");
            }
            let cu = classical_set_conv(
                &inst.x, &domains, d, &inst.bornology, &inst.directed, Side::Upper,
            );
            let iu = upper_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &tail_inst.ideal);
            if cu.holds != iu.holds {
                mismatches.push("upper set");
            }

            match (
                classical_p_minus(inst),
                classical_p_plus(inst),
                classical_p_conv(inst),
                p_ideal_minus_naive(&tail_inst),
                p_ideal_plus_naive(&tail_inst),
            ) {
                (Ok(cm), Ok(cp), Ok(cb), Ok(im), Ok(ip)) => {
                    if cm.holds != im.holds {
                        mismatches.push("lower map");
                    }
                    if cp.holds != ip.holds {
                        mismatches.push("upper map");
                    }
                    if cb.holds != p_ideal_conv(&tail_inst).holds {
                        mismatches.push("two-sided map");
                    }
                }
                _ => {
                    return TrialEvaluation::plain(Outcome::Skip(
                        "naive enumeration over cap".into(),
                    ))
                }
            }

            TrialEvaluation::plain(if mismatches.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("classical/ideal mismatch: {}", mismatches.join(", ")))
            })
        }
        IdealMonotonicity => {
            let bigger = grow_ideal(&inst.ideal);
            let bigger_inst = inst.with_ideal(bigger).expect("same index set");
            let domains = inst.net.domains();
            let d = inst.limit.domain();
            let checks: Vec<(&str, bool, bool)> = vec![
                (
                    "lower set",
                    lower_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &inst.ideal).holds,
                    lower_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &bigger_inst.ideal)
                        .holds,
                ),
                (
                    "upper set",
                    upper_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &inst.ideal).holds,
                    upper_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &bigger_inst.ideal)
                        .holds,
                ),
                (
                    "lower map",
                    p_ideal_minus_supinf(inst).holds,
                    p_ideal_minus_supinf(&bigger_inst).holds,
                ),
                (
                    "upper map",
                    p_ideal_plus_supinf(inst).holds,
                    p_ideal_plus_supinf(&bigger_inst).holds,
                ),
                (
                    "two-sided",
                    p_ideal_conv(inst).holds,
                    p_ideal_conv(&bigger_inst).holds,
                ),
                (
                    "sup-sup",
                    sup_sup_condition(inst).holds,
                    sup_sup_condition(&bigger_inst).holds,
                ),
                (
                    "graph lower",
                    graph_ideal_conv(inst, Side::Lower).holds,
                    graph_ideal_conv(&bigger_inst, Side::Lower).holds,
                ),
                (
                    "graph upper",
                    graph_ideal_conv(inst, Side::Upper).holds,
                    graph_ideal_conv(&bigger_inst, Side::Upper).holds,
                ),
                (
                    "pointwise",
                    pointwise_ideal_conv(inst).holds,
                    pointwise_ideal_conv(&bigger_inst).holds,
                ),
            ];
            let broken: Vec<&str> = checks
                .iter()
                .filter(|(_, small, big)| *small && !*big)
                .map(|(name, _, _)| *name)
                .collect();
            TrialEvaluation::plain(if broken.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("lost under a larger ideal: {}", broken.join(", ")))
            })
        }
        SpectrumGrid => {
            let combined = distance_spectrum(&[&inst.x, &inst.y]);
            let combined_grid = refine_thresholds(&combined, 10);
            let x_spectrum = distance_spectrum(&[&inst.x]);
            let x_grid = refine_thresholds(&x_spectrum, 10);
            let x_thresholds = thresholds_from_spectrum(&x_spectrum);
            let domains = inst.net.domains();
            let d = inst.limit.domain();

            let mut mismatches: Vec<&str> = Vec::new();
            let mut compare = |name: &'static str, coarse: bool, fine: bool| {
                if coarse != fine {
                    mismatches.push(name);
                }
            };

            compare(
                "lower map",
                p_ideal_minus_supinf(inst).holds,
                p_ideal_minus_supinf_with_thresholds(inst, &combined_grid).holds,
            );
            compare(
                "upper map",
                p_ideal_plus_supinf(inst).holds,
                p_ideal_plus_supinf_with_thresholds(inst, &combined_grid).holds,
            );
            compare(
                "two-sided",
                p_ideal_conv(inst).holds,
                p_ideal_conv_with_thresholds(inst, &combined_grid).holds,
            );
            compare(
                "sup-sup",
                sup_sup_condition(inst).holds,
                sup_sup_condition_with_thresholds(inst, &combined_grid).holds,
            );
            compare(
                "graph lower",
                graph_ideal_conv(inst, Side::Lower).holds,
                crate::convergence::graph_ideal_conv_with_thresholds(
                    inst,
                    Side::Lower,
                    &combined_grid,
                )
                .holds,
            );
            compare(
                "graph upper",
                graph_ideal_conv(inst, Side::Upper).holds,
                crate::convergence::graph_ideal_conv_with_thresholds(
                    inst,
                    Side::Upper,
                    &combined_grid,
                )
                .holds,
            );
            compare(
                "pointwise",
                pointwise_ideal_conv(inst).holds,
                pointwise_ideal_conv_with_thresholds(inst, &combined_grid).holds,
            );
            compare(
                "lower set",
                lower_set_ideal_conv_with_thresholds(
                    &inst.x, &domains, d, &inst.bornology, &inst.ideal, &x_thresholds,
                )
                .holds,
                lower_set_ideal_conv_with_thresholds(
                    &inst.x, &domains, d, &inst.bornology, &inst.ideal, &x_grid,
                )
                .holds,
            );
            compare(
                "upper set",
                upper_set_ideal_conv_with_thresholds(
                    &inst.x, &domains, d, &inst.bornology, &inst.ideal, &x_thresholds,
                )
                .holds,
                upper_set_ideal_conv_with_thresholds(
                    &inst.x, &domains, d, &inst.bornology, &inst.ideal, &x_grid,
                )
                .holds,
            );

            if let (Ok(coarse), Ok(fine)) = (
                p_ideal_minus_naive(inst),
                p_ideal_minus_naive_with_thresholds(inst, &combined_grid),
            ) {
                compare("lower naive", coarse.holds, fine.holds);
            }
            if let (Ok(coarse), Ok(fine)) = (
                p_ideal_plus_naive(inst),
                p_ideal_plus_naive_with_thresholds(inst, &combined_grid),
            ) {
                compare("upper naive", coarse.holds, fine.holds);
            }

            TrialEvaluation::plain(if mismatches.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("grid mismatch: {}", mismatches.join(", ")))
            })
        }
        TrivialTrue => {
            let constant = inst.with_constant_net();
            let mut not_true: Vec<&str> = Vec::new();
            match (p_ideal_minus_naive(&constant), p_ideal_plus_naive(&constant)) {
                (Ok(m), Ok(p)) => {
                    if !m.holds {
                        not_true.push("lower naive");
                    }
                    if !p.holds {
                        not_true.push("upper naive");
                    }
                }
                _ => return TrialEvaluation::plain(Outcome::Skip("naive over cap".into())),
            }
            if !p_ideal_minus_supinf(&constant).holds {
                not_true.push("lower sup-inf");
            }
            if !p_ideal_plus_supinf(&constant).holds {
                not_true.push("upper sup-inf");
            }
            if !p_ideal_conv(&constant).holds {
                not_true.push("two-sided");
            }
            if !sup_sup_condition(&constant).holds {
                not_true.push("sup-sup");
            }
            if !graph_ideal_conv(&constant, Side::Lower).holds {
                not_true.push("graph lower");
            }
            if !graph_ideal_conv(&constant, Side::Upper).holds {
                not_true.push("graph upper");
            }
            if !pointwise_ideal_conv(&constant).holds {
                not_true.push("pointwise");
            }
            let domains = constant.net.domains();
            if !lower_set_ideal_conv(
                &constant.x,
                &domains,
                constant.limit.domain(),
                &constant.bornology,
                &constant.ideal,
            )
            .holds
            {
                not_true.push("lower set");
            }
            if !upper_set_ideal_conv(
                &constant.x,
                &domains,
                constant.limit.domain(),
                &constant.bornology,
                &constant.ideal,
            )
            .holds
            {
                not_true.push("upper set");
            }
            if !classical_p_conv(&constant).expect("cap checked above").holds {
                not_true.push("classical two-sided");
            }
            TrialEvaluation::plain(if not_true.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("constant net not convergent: {}", not_true.join(", ")))
            })
        }
        MutationSmoke => match p_ideal_plus_naive(inst) {
            Err(e) => TrialEvaluation::plain(Outcome::Skip(e.to_string())),
            Ok(naive) => {
                let weakened = sensitivity::p_ideal_plus_supinf_weakened(inst);
                TrialEvaluation::plain(if naive.holds == weakened.holds {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!(
                        "weakened comparator diverges: naive={} weakened={}",
                        naive.holds, weakened.holds
                    ))
                })
            }
        },
    }
}

/// Run the campaign. Tallies are deterministic in the config; trials are
/// evaluated in parallel and merged in trial order.
pub fn certify(cfg: &CampaignConfig) -> Result<CampaignReport, Error> {
    cfg.validate()?;
    let start = Instant::now();
    let per_trial: Vec<Vec<(PropertyId, TrialEvaluation, Option<InstanceFile>)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let inst = random_instance(cfg, trial);
            cfg.properties
                .iter()
                .map(|p| {
                    let eval = check_property(*p, &inst);
                    let file = matches!(eval.outcome, Outcome::Fail(_))
                        .then(|| InstanceFile::from_instance(&inst));
                    (*p, eval, file)
                })
                .collect()
        })
        .collect();

    let mut properties: BTreeMap<String, PropertyTally> = cfg
        .properties
        .iter()
        .map(|p| (p.name().to_string(), PropertyTally::default()))
        .collect();
    let mut counterexamples = Vec::new();
    let mut degenerate_traces = 0usize;
    for (trial, evals) in per_trial.into_iter().enumerate() {
        for (prop, eval, file) in evals {
            let tally = properties.get_mut(prop.name()).expect("initialized above");
            match &eval.outcome {
                Outcome::Pass => tally.pass += 1,
                Outcome::Skip(_) => tally.skipped += 1,
                Outcome::Fail(detail) => {
                    tally.fail += 1;
                    counterexamples.push(CounterexampleRecord {
                        property: prop.name().to_string(),
                        trial,
                        detail: detail.clone(),
                        instance: file.expect("failures carry the instance"),
                    });
                }
            }
            if eval.hypothesis_checked_true {
                tally.hypothesis_checked_true += 1;
            }
            degenerate_traces += eval.degenerate_traces;
        }
    }

    Ok(CampaignReport {
        config: cfg.clone(),
        properties,
        counterexamples,
        degenerate_traces,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

/// Directed searches, including hypothesis-dropped variants of the certified
/// implications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchTarget {
    /// First instance failing the given property.
    Property(PropertyId),
    /// Domains converge but the maps do not: the converse of the
    /// map-implies-domain implication.
    MapDomainConverse,
    /// With the non-admissible smallest ideal on a linear order, classical
    /// convergence does not imply ideal convergence.
    ClassicalToIdealNonAdmissible,
}

pub fn search_counterexample(
    target: &SearchTarget,
    cfg: &CampaignConfig,
) -> Result<Option<CounterexampleRecord>, Error> {
    cfg.validate()?;
    for trial in 0..cfg.trials {
        match target {
            SearchTarget::Property(p) => {
                let inst = random_instance(cfg, trial);
                if let Outcome::Fail(detail) = check_property(*p, &inst).outcome {
                    return Ok(Some(CounterexampleRecord {
                        property: p.name().to_string(),
                        trial,
                        detail,
                        instance: InstanceFile::from_instance(&inst),
                    }));
                }
            }
            SearchTarget::MapDomainConverse => {
                let inst = random_instance(cfg, trial);
                let lower = lower_set_ideal_conv(
                    &inst.x,
                    &inst.net.domains(),
                    inst.limit.domain(),
                    &inst.bornology,
                    &inst.ideal,
                );
                let minus = p_ideal_minus_supinf(&inst);
                if lower.holds && !minus.holds {
                    return Ok(Some(CounterexampleRecord {
                        property: "map-domain-converse".into(),
                        trial,
                        detail: "domains converge (lower) but the maps do not".into(),
                        instance: InstanceFile::from_instance(&inst),
                    }));
                }
            }
            SearchTarget::ClassicalToIdealNonAdmissible => {
                let mut forced = cfg.clone();
                forced.ideal_strategy = IdealStrategy::Empty;
                let inst = random_instance(&forced, trial);
                if !inst.directed.is_linear_order() || inst.directed.len() < 2 {
                    continue;
                }
                let Ok(classical) = classical_p_conv(&inst) else {
                    continue;
                };
                if classical.holds && !p_ideal_conv(&inst).holds {
                    return Ok(Some(CounterexampleRecord {
                        property: "classical-to-ideal-non-admissible".into(),
                        trial,
                        detail:
                            "eventually convergent net is not ideal convergent for the smallest ideal"
                                .into(),
                        instance: InstanceFile::from_instance(&inst),
                    }));
                }
            }
        }
    }
    Ok(None)
}
