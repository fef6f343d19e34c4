//! The on-disk JSON form of a convergence instance.
//!
//! Distances are strings like `"3/2"` so that files stay exact and
//! diff-able; subsets of the metric spaces are arrays of point labels;
//! subsets of the index set are sorted arrays of 0-based indices; the net is
//! an object keyed by index-set element label. Validation reports every
//! violated invariant, not just the first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bornology::Bornology;
use crate::convergence::Instance;
use crate::error::{Diagnostic, Error};
use crate::metric::FiniteMetricSpace;
use crate::order::{ideal_from_generators, tail_ideal, DirectedSet, Ideal};
use crate::partial_map::{PartialMap, PartialMapNet};
use crate::rational::Rational;
use crate::subset::Subset;

/// Cap on index-set size accepted from files; family enumeration is `2^n`.
pub const MAX_GAMMA: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub spaces: SpacesFile,
    pub directed_set: DirectedSetFile,
    pub ideal: IdealFile,
    pub bornology: BornologyFile,
    /// Keyed by index-set element label; one entry per element.
    pub net: BTreeMap<String, PartialMapFile>,
    pub limit: PartialMapFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacesFile {
    #[serde(rename = "X")]
    pub x: SpaceFile,
    #[serde(rename = "Y")]
    pub y: SpaceFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub labels: Vec<String>,
    /// Row-major matrix of rational strings.
    pub dist: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedSetFile {
    pub elements: Vec<String>,
    pub geq: Vec<Vec<bool>>,
}

/// Either the tail ideal of the directed set (`strategy: "i0"`) or an
/// explicit list of generator subsets as sorted index arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BornologyFile {
    /// Base sets as arrays of point labels of `X`.
    pub base: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMapFile {
    pub domain: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| {
            Error::invalid(vec![Diagnostic::new("", format!("JSON parse error: {e}"))])
        })
    }

    /// Deterministic pretty rendering with a trailing newline; identical
    /// instances serialize byte-identically.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }

    /// Validate everything and build the in-memory instance. All violations
    /// are collected and returned together.
    pub fn to_instance(&self) -> Result<Instance, Vec<Diagnostic>> {
        let mut diags = Vec::new();

        let x = parse_space("spaces.X", &self.spaces.x, &mut diags);
        let y = parse_space("spaces.Y", &self.spaces.y, &mut diags);
        let directed = self.parse_directed(&mut diags);
        let (Some(x), Some(y), Some(directed)) = (x, y, directed) else {
            return Err(diags);
        };

        let ideal = self.parse_ideal(&directed, &mut diags);
        let bornology = self.parse_bornology(&x, &mut diags);
        let limit = parse_map("limit", &self.limit, &x, &y, &mut diags);
        let net = self.parse_net(&directed, &x, &y, &mut diags);

        let (Some(ideal), Some(bornology), Some(limit), Some(net)) =
            (ideal, bornology, limit, net)
        else {
            return Err(diags);
        };

        match Instance::try_new(x, y, directed, ideal, bornology, net, limit) {
            Ok(inst) => {
                if diags.is_empty() {
                    Ok(inst)
                } else {
                    Err(diags)
                }
            }
            Err(e) => {
                diags.extend(e.into_diagnostics());
                Err(diags)
            }
        }
    }

    fn parse_directed(&self, diags: &mut Vec<Diagnostic>) -> Option<DirectedSet> {
        let n = self.directed_set.elements.len();
        if n > MAX_GAMMA {
            diags.push(Diagnostic::new(
                "directed_set",
                format!("index set has {n} elements, cap is {MAX_GAMMA}"),
            ));
            return None;
        }
        match DirectedSet::try_new(self.directed_set.elements.clone(), self.directed_set.geq.clone())
        {
            Ok(ds) => Some(ds),
            Err(e) => {
                diags.extend(e.into_diagnostics());
                // skeleton chain on the same labels keeps net-key validation
                // going so every violation is reported in one pass
                let labels = &self.directed_set.elements;
                let unique = !labels
                    .iter()
                    .enumerate()
                    .any(|(i, l)| labels[..i].contains(l));
                (unique && !labels.is_empty()).then(|| {
                    let relation = (0..n).map(|i| (0..n).map(|j| i >= j).collect()).collect();
                    DirectedSet::try_new(labels.clone(), relation).expect("chain is directed")
                })
            }
        }
    }

    fn parse_ideal(&self, directed: &DirectedSet, diags: &mut Vec<Diagnostic>) -> Option<Ideal> {
        let n = directed.len();
        match (&self.ideal.strategy, &self.ideal.generators) {
            (Some(s), None) if s == "i0" => Some(tail_ideal(directed)),
            (Some(s), None) => {
                diags.push(Diagnostic::new(
                    "ideal",
                    format!("unknown strategy {s:?}; expected \"i0\" or explicit generators"),
                ));
                None
            }
            (None, Some(gens)) => {
                let mut subsets = Vec::with_capacity(gens.len());
                for (i, g) in gens.iter().enumerate() {
                    if let Some(bad) = g.iter().find(|idx| **idx >= n) {
                        diags.push(Diagnostic::new(
                            format!("ideal.generators[{i}]"),
                            format!("index {bad} out of range for {n} elements"),
                        ));
                        return None;
                    }
                    subsets.push(Subset::from_indices(n, g.iter().copied()));
                }
                match ideal_from_generators(n, &subsets) {
                    Ok(i) => Some(i),
                    Err(e) => {
                        diags.push(Diagnostic::new("ideal", e.to_string()));
                        None
                    }
                }
            }
            (Some(_), Some(_)) | (None, None) => {
                diags.push(Diagnostic::new(
                    "ideal",
                    "exactly one of `strategy` and `generators` must be given",
                ));
                None
            }
        }
    }

    fn parse_bornology(
        &self,
        x: &FiniteMetricSpace,
        diags: &mut Vec<Diagnostic>,
    ) -> Option<Bornology> {
        let mut base = Vec::with_capacity(self.bornology.base.len());
        for (i, labels) in self.bornology.base.iter().enumerate() {
            base.push(parse_point_set(
                &format!("bornology.base[{i}]"),
                labels,
                x,
                diags,
            )?);
        }
        match Bornology::from_base(x.len(), &base) {
            Ok(b) => Some(b),
            Err(Error::NotACover(uncovered)) => {
                let labels: Vec<&str> = uncovered
                    .iter()
                    .filter_map(|i| i.parse::<usize>().ok().map(|i| x.label(i)))
                    .collect();
                diags.push(Diagnostic::new(
                    "bornology",
                    format!("base does not cover X; uncovered: {labels:?}"),
                ));
                None
            }
            Err(e) => {
                diags.extend(e.into_diagnostics());
                None
            }
        }
    }

    fn parse_net(
        &self,
        directed: &DirectedSet,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        diags: &mut Vec<Diagnostic>,
    ) -> Option<PartialMapNet> {
        let mut maps = Vec::with_capacity(directed.len());
        let mut ok = true;
        for label in directed.labels() {
            match self.net.get(label) {
                Some(pm) => {
                    if let Some(pm) = parse_map(&format!("net.{label}"), pm, x, y, diags) {
                        maps.push(pm);
                    } else {
                        ok = false;
                    }
                }
                None => {
                    diags.push(Diagnostic::new(
                        "net",
                        format!("missing partial map for index {label:?}"),
                    ));
                    ok = false;
                }
            }
        }
        for key in self.net.keys() {
            if directed.index_of(key).is_none() {
                diags.push(Diagnostic::new(
                    "net",
                    format!("entry {key:?} is not an index-set element"),
                ));
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        match PartialMapNet::try_new(directed.len(), maps) {
            Ok(net) => Some(net),
            Err(e) => {
                diags.extend(e.into_diagnostics());
                None
            }
        }
    }

    /// Render an in-memory instance back to the file form. Ideals are written
    /// as generators: the single maximal member generates the same family.
    pub fn from_instance(inst: &Instance) -> InstanceFile {
        let x = &inst.x;
        let y = &inst.y;
        let max_member = inst
            .ideal
            .members()
            .fold(Subset::empty(inst.ideal.universe()), |acc, m| acc.union(m));
        InstanceFile {
            spaces: SpacesFile {
                x: space_to_file(x),
                y: space_to_file(y),
            },
            directed_set: DirectedSetFile {
                elements: inst.directed.labels().to_vec(),
                geq: (0..inst.directed.len())
                    .map(|i| (0..inst.directed.len()).map(|j| inst.directed.geq(i, j)).collect())
                    .collect(),
            },
            ideal: IdealFile {
                strategy: None,
                generators: Some(vec![max_member.indices()]),
            },
            bornology: BornologyFile {
                base: inst
                    .bornology
                    .base()
                    .iter()
                    .map(|b| b.iter().map(|i| x.label(i).to_string()).collect())
                    .collect(),
            },
            net: inst
                .directed
                .labels()
                .iter()
                .enumerate()
                .map(|(gamma, label)| (label.clone(), map_to_file(inst.net.map(gamma), x, y)))
                .collect(),
            limit: map_to_file(&inst.limit, x, y),
        }
    }
}

fn space_to_file(space: &FiniteMetricSpace) -> SpaceFile {
    let n = space.len();
    SpaceFile {
        labels: space.labels().to_vec(),
        dist: (0..n)
            .map(|i| (0..n).map(|j| space.dist(i, j).to_string()).collect())
            .collect(),
    }
}

fn map_to_file(pm: &PartialMap, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> PartialMapFile {
    PartialMapFile {
        domain: pm.domain().iter().map(|i| x.label(i).to_string()).collect(),
        map: pm
            .domain()
            .iter()
            .map(|i| (x.label(i).to_string(), y.label(pm.value_at(i)).to_string()))
            .collect(),
    }
}

fn parse_space(
    path: &str,
    file: &SpaceFile,
    diags: &mut Vec<Diagnostic>,
) -> Option<FiniteMetricSpace> {
    let mut matrix = Vec::with_capacity(file.dist.len());
    let mut parse_failed = false;
    for (i, row) in file.dist.iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            match cell.parse::<Rational>() {
                Ok(r) => parsed.push(r),
                Err(e) => {
                    diags.push(Diagnostic::new(format!("{path}.dist[{i}][{j}]"), e));
                    parse_failed = true;
                    parsed.push(Rational::zero());
                }
            }
        }
        matrix.push(parsed);
    }
    let violations = crate::metric::metric_violations(path, &file.labels, &matrix);
    if violations.is_empty() && !parse_failed {
        return Some(FiniteMetricSpace::try_new(file.labels.clone(), matrix).expect("validated"));
    }
    if !parse_failed {
        diags.extend(violations);
    }
    // fall back to a structural skeleton with unit distances so that label
    // references elsewhere in the file are still validated and reported
    skeleton_space(&file.labels)
}

fn skeleton_space(labels: &[String]) -> Option<FiniteMetricSpace> {
    let n = labels.len();
    if n == 0 || n > crate::subset::MAX_UNIVERSE {
        return None;
    }
    if labels.iter().enumerate().any(|(i, l)| labels[..i].contains(l)) {
        return None;
    }
    let one = Rational::one();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::zero() } else { one })
                .collect()
        })
        .collect();
    Some(FiniteMetricSpace::try_new(labels.to_vec(), matrix).expect("unit distances are a metric"))
}

fn parse_point_set(
    path: &str,
    labels: &[String],
    space: &FiniteMetricSpace,
    diags: &mut Vec<Diagnostic>,
) -> Option<Subset> {
    let mut s = Subset::empty(space.len());
    for label in labels {
        match space.index_of(label) {
            Some(i) => s = s.with(i),
            None => {
                diags.push(Diagnostic::new(path, format!("unknown point {label:?}")));
                return None;
            }
        }
    }
    Some(s)
}

fn parse_map(
    path: &str,
    file: &PartialMapFile,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    diags: &mut Vec<Diagnostic>,
) -> Option<PartialMap> {
    let domain = parse_point_set(&format!("{path}.domain"), &file.domain, x, diags)?;
    let mut values = vec![None; x.len()];
    for (from, to) in &file.map {
        let Some(xi) = x.index_of(from) else {
            diags.push(Diagnostic::new(
                format!("{path}.map"),
                format!("unknown source point {from:?}"),
            ));
            return None;
        };
        let Some(yi) = y.index_of(to) else {
            diags.push(Diagnostic::new(
                format!("{path}.map"),
                format!("unknown target point {to:?}"),
            ));
            return None;
        };
        values[xi] = Some(yi);
    }
    match PartialMap::try_new(x.len(), y.len(), domain, values) {
        Ok(pm) => Some(pm),
        Err(e) => {
            for mut d in e.into_diagnostics() {
                d.path = if d.path.is_empty() {
                    path.to_string()
                } else {
                    format!("{path}.{}", d.path)
                };
                diags.push(d);
            }
            None
        }
    }
}

/// Family equality helper used by round-trip tests: the file form stores
/// ideals by generators, so equality must be checked on the closed families.
pub fn same_ideal_family(a: &Ideal, b: &Ideal) -> bool {
    a.family() == b.family()
}

/// Convenience: parse text, validate, and return either the instance or all
/// diagnostics.
pub fn parse_instance(text: &str) -> Result<Instance, Vec<Diagnostic>> {
    let file = InstanceFile::from_json(text).map_err(Error::into_diagnostics)?;
    file.to_instance()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_json() -> String {
        r#"{
            "spaces": {
                "X": {
                    "labels": ["a", "b"],
                    "dist": [["0", "1"], ["1", "0"]]
                },
                "Y": {
                    "labels": ["p", "q"],
                    "dist": [["0", "1/2"], ["1/2", "0"]]
                }
            },
            "directed_set": {
                "elements": ["g1", "g2", "g3"],
                "geq": [
                    [true, false, false],
                    [true, true, false],
                    [true, true, true]
                ]
            },
            "ideal": { "strategy": "i0" },
            "bornology": { "base": [["a", "b"]] },
            "net": {
                "g1": { "domain": ["b"], "map": { "b": "p" } },
                "g2": { "domain": ["b"], "map": { "b": "p" } },
                "g3": { "domain": ["a"], "map": { "a": "p" } }
            },
            "limit": { "domain": ["a"], "map": { "a": "p" } }
        }"#
        .to_string()
    }

    #[test]
    fn fixture_parses_and_validates() {
        let inst = parse_instance(&fixture_json()).expect("fixture is valid");
        assert_eq!(inst.x.len(), 2);
        assert_eq!(inst.directed.len(), 3);
        assert_eq!(inst.ideal.members().count(), 4);
    }

    #[test]
    fn round_trip_preserves_the_instance() {
        let inst = parse_instance(&fixture_json()).unwrap();
        let file = InstanceFile::from_instance(&inst);
        let again = file.to_instance().expect("serialized form validates");
        assert_eq!(inst, again);

        // and the rendering itself is stable
        let reserialized = InstanceFile::from_instance(&again).to_json();
        assert_eq!(file.to_json(), reserialized);
    }

    #[test]
    fn asymmetric_matrix_is_diagnosed() {
        let bad = fixture_json().replace(
            r#""dist": [["0", "1"], ["1", "0"]]"#,
            r#""dist": [["0", "1"], ["2", "0"]]"#,
        );
        let diags = parse_instance(&bad).unwrap_err();
        assert!(diags.iter().any(|d| d.message.contains("symmetry")));
    }

    #[test]
    fn covering_ideal_generators_are_diagnosed() {
        let bad = fixture_json().replace(
            r#""ideal": { "strategy": "i0" }"#,
            r#""ideal": { "generators": [[0, 1], [2]] }"#,
        );
        let diags = parse_instance(&bad).unwrap_err();
        assert!(diags
            .iter()
            .any(|d| d.message.contains("whole index set")));
    }

    #[test]
    fn multiple_violations_are_all_reported() {
        let bad = fixture_json()
            .replace(
                r#""dist": [["0", "1"], ["1", "0"]]"#,
                r#""dist": [["0", "1"], ["2", "0"]]"#,
            )
            .replace(r#""base": [["a", "b"]]"#, r#""base": [["a"]]"#);
        let diags = parse_instance(&bad).unwrap_err();
        assert!(diags.len() >= 2);
        assert!(diags.iter().any(|d| d.message.contains("symmetry")));
        assert!(diags.iter().any(|d| d.message.contains("cover")));
    }

    #[test]
    fn net_must_cover_every_index() {
        let bad = fixture_json().replace(
            r#""g2": { "domain": ["b"], "map": { "b": "p" } },"#,
            "",
        );
        let diags = parse_instance(&bad).unwrap_err();
        assert!(diags.iter().any(|d| d.message.contains("missing partial map")));
    }

    #[test]
    fn tail_ideal_strategy_round_trips_to_the_same_family() {
        let inst = parse_instance(&fixture_json()).unwrap();
        let again = InstanceFile::from_instance(&inst).to_instance().unwrap();
        assert!(same_ideal_family(&inst.ideal, &again.ideal));
    }
}
