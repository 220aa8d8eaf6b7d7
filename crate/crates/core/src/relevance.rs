//! Exact relevance analysis on finite labeled joint distributions.
//!
//! A feature set `V_L` is maximally informative when the class conditional
//! given all features equals the class conditional given `V_L` on the whole
//! support; relevance-optimal sets are the smallest such sets. Features are
//! strongly relevant (in every optimal set), irrelevant (never carry class
//! information given any other subset) or weakly relevant.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infotheory::JointTable;

/// Per-probability tolerance for conditional-distribution equality.
pub const COND_TOL: f64 = 1e-9;

/// Upper bound on the number of features for exhaustive subset search.
pub const MAX_EXHAUSTIVE: usize = 12;

/// A joint table in which one variable is the class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLabeled", into = "RawLabeled")]
pub struct LabeledJoint {
    table: JointTable,
    class_index: usize,
    names: Vec<String>,
    /// Assignments with positive mass, in table order.
    support: Vec<(Vec<usize>, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawLabeled {
    arities: Vec<usize>,
    probabilities: Vec<f64>,
    class_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<RawLabeled> for LabeledJoint {
    type Error = Error;
    fn try_from(raw: RawLabeled) -> Result<Self> {
        let table = JointTable::new(raw.arities, raw.probabilities)?;
        LabeledJoint::new(table, raw.class_index, raw.names)
    }
}

impl From<LabeledJoint> for RawLabeled {
    fn from(j: LabeledJoint) -> Self {
        RawLabeled {
            arities: j.table.arities().to_vec(),
            probabilities: j.table.probabilities().to_vec(),
            class_index: j.class_index,
            names: Some(j.names),
        }
    }
}

impl LabeledJoint {
    /// Feature names default to `V1, V2, ...` in table order, skipping the
    /// class variable.
    pub fn new(table: JointTable, class_index: usize, names: Option<Vec<String>>) -> Result<Self> {
        if class_index >= table.n_vars() {
            return Err(Error::InvalidTable(format!(
                "class index {class_index} out of range for {} variables",
                table.n_vars()
            )));
        }
        let p = table.n_vars() - 1;
        let names = names.unwrap_or_else(|| (1..=p).map(|i| format!("V{i}")).collect());
        if names.len() != p {
            return Err(Error::InvalidTable(format!(
                "{} feature names for {p} features",
                names.len()
            )));
        }
        let class = table.marginal(&[class_index])?;
        if class.probabilities().iter().filter(|&&q| q > 0.0).count() < 2 {
            return Err(Error::InvalidTable(
                "class needs at least two states with positive mass".into(),
            ));
        }
        let support = table
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0.0)
            .map(|(i, &q)| (table.assignment(i), q))
            .collect();
        Ok(LabeledJoint {
            table,
            class_index,
            names,
            support,
        })
    }

    /// Builds a joint from weighted outcomes `(feature values, class, weight)`.
    /// Each feature's distinct values become its states in increasing order;
    /// the class is placed last.
    pub fn from_outcomes<I>(names: Vec<String>, outcomes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<f64>, usize, f64)>,
    {
        let rows: Vec<(Vec<f64>, usize, f64)> = outcomes.into_iter().collect();
        let p = names.len();
        if let Some((v, _, _)) = rows.iter().find(|(v, _, _)| v.len() != p) {
            return Err(Error::InvalidTable(format!(
                "outcome has {} feature values, expected {p}",
                v.len()
            )));
        }
        let mut states: Vec<Vec<f64>> = vec![Vec::new(); p];
        for (j, s) in states.iter_mut().enumerate() {
            s.extend(rows.iter().map(|(v, _, _)| v[j]));
            s.sort_by(f64::total_cmp);
            s.dedup();
        }
        let n_class = rows.iter().map(|(_, c, _)| c + 1).max().unwrap_or(0);
        let mut arities: Vec<usize> = states.iter().map(Vec::len).collect();
        arities.push(n_class);
        let size: usize = arities.iter().product();
        let mut weights = vec![0.0; size];
        for (v, c, w) in &rows {
            let mut idx = 0;
            for (j, x) in v.iter().enumerate() {
                let s = states[j].binary_search_by(|y| y.total_cmp(x)).expect("state present");
                idx = idx * arities[j] + s;
            }
            idx = idx * n_class + c;
            weights[idx] += w;
        }
        let table = JointTable::from_weights(arities, weights)?;
        LabeledJoint::new(table, p, Some(names))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_path(path: &Path) -> Result<Self> {
        LabeledJoint::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn table(&self) -> &JointTable {
        &self.table
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn n_features(&self) -> usize {
        self.table.n_vars() - 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Table variable of feature `i`.
    fn var(&self, i: usize) -> usize {
        if i < self.class_index {
            i
        } else {
            i + 1
        }
    }

    fn vars(&self, features: &[usize]) -> Result<Vec<usize>> {
        features
            .iter()
            .map(|&i| {
                if i < self.n_features() {
                    Ok(self.var(i))
                } else {
                    Err(Error::InvalidSubset(format!(
                        "feature {i} out of range ({} features)",
                        self.n_features()
                    )))
                }
            })
            .collect()
    }

    pub fn format_set(&self, set: &[usize]) -> String {
        let names: Vec<&str> = set.iter().map(|&i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Whether `[target | full] = [target | sub]` at every support point of
/// `full`, where `sub` is a subset of `full` (all table variables).
fn same_conditional(j: &LabeledJoint, target: &[usize], full: &[usize], sub: &[usize]) -> Result<bool> {
    let sub_pos: Vec<usize> = sub
        .iter()
        .map(|v| full.iter().position(|f| f == v).expect("sub must be within full"))
        .collect();
    let pick = |a: &[usize], vars: &[usize]| -> Vec<usize> { vars.iter().map(|&v| a[v]).collect() };
    let mut p_f: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut p_s: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut p_tf: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
    let mut p_ts: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
    for (a, p) in &j.support {
        let (t, f, s) = (pick(a, target), pick(a, full), pick(a, sub));
        *p_f.entry(f.clone()).or_default() += p;
        *p_s.entry(s.clone()).or_default() += p;
        *p_tf.entry((t.clone(), f)).or_default() += p;
        *p_ts.entry((t, s)).or_default() += p;
    }
    // Mass of [target | sub] covered by the support of [target | full].
    let mut covered: BTreeMap<&[usize], f64> = BTreeMap::new();
    for ((t, f), ptf) in &p_tf {
        let s: Vec<usize> = sub_pos.iter().map(|&i| f[i]).collect();
        let q_full = ptf / p_f[f];
        let q_sub = p_ts.get(&(t.clone(), s.clone())).copied().unwrap_or(0.0) / p_s[&s];
        if (q_full - q_sub).abs() > COND_TOL {
            return Ok(false);
        }
        *covered.entry(f.as_slice()).or_default() += q_sub;
    }
    // Target states outside that support must carry no mass given `sub`.
    Ok(covered.values().all(|&c| 1.0 - c <= COND_TOL))
}

/// Definition of a maximally informative feature set.
pub fn is_maximally_informative(j: &LabeledJoint, set: &[usize]) -> Result<bool> {
    let all: Vec<usize> = (0..j.n_features()).collect();
    same_conditional(j, &[j.class_index], &j.vars(&all)?, &j.vars(set)?)
}

/// All subsets of `items` with `size` elements, in lexicographic order.
pub fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    if size > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Rightmost position that can still advance.
        let mut pos = size;
        while pos > 0 && idx[pos - 1] == pos - 1 + n - size {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        for q in pos..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn check_size(j: &LabeledJoint) -> Result<()> {
    if j.n_features() > MAX_EXHAUSTIVE {
        Err(Error::TooManyFeatures {
            max: MAX_EXHAUSTIVE,
            got: j.n_features(),
        })
    } else {
        Ok(())
    }
}

/// Minimum-size maximally informative sets, lexicographically ordered.
pub fn relevance_optimal_sets(j: &LabeledJoint) -> Result<Vec<Vec<usize>>> {
    check_size(j)?;
    let all: Vec<usize> = (0..j.n_features()).collect();
    for size in 0..=all.len() {
        let mut found = Vec::new();
        for set in combinations(&all, size) {
            if is_maximally_informative(j, &set)? {
                found.push(set);
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
    }
    unreachable!("the full feature set is always maximally informative")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relevance {
    Strong,
    Weak,
    Irrelevant,
}

/// Four-way partition relative to a chosen relevance-optimal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelevanceClass {
    SR,
    WrNr,
    WrR,
    Irrelevant,
}

impl fmt::Display for RelevanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelevanceClass::SR => "SR",
            RelevanceClass::WrNr => "WR-NR",
            RelevanceClass::WrR => "WR-R",
            RelevanceClass::Irrelevant => "irrelevant",
        })
    }
}

pub fn classify_feature(j: &LabeledJoint, i: usize) -> Result<Relevance> {
    check_size(j)?;
    let others: Vec<usize> = (0..j.n_features()).filter(|&f| f != i).collect();
    if others.len() + 1 != j.n_features() {
        return Err(Error::InvalidSubset(format!("feature {i} out of range")));
    }
    if !is_maximally_informative(j, &others)? {
        return Ok(Relevance::Strong);
    }
    let class = [j.class_index];
    let vi = j.vars(&[i])?[0];
    for size in 0..=others.len() {
        for l in combinations(&others, size) {
            let sub = j.vars(&l)?;
            let mut full = vec![vi];
            full.extend(&sub);
            if !same_conditional(j, &class, &full, &sub)? {
                return Ok(Relevance::Weak);
            }
        }
    }
    Ok(Relevance::Irrelevant)
}

/// Splits the weakly relevant features by membership in `optimal`.
pub fn partition(j: &LabeledJoint, optimal: &[usize]) -> Result<Vec<RelevanceClass>> {
    (0..j.n_features())
        .map(|i| {
            Ok(match classify_feature(j, i)? {
                Relevance::Strong => RelevanceClass::SR,
                Relevance::Irrelevant => RelevanceClass::Irrelevant,
                Relevance::Weak if optimal.contains(&i) => RelevanceClass::WrNr,
                Relevance::Weak => RelevanceClass::WrR,
            })
        })
        .collect()
}

/// Whether `blanket` is a Markov blanket of feature `i` within `current`:
/// `[(C, V_K) | V_i, V_M] = [(C, V_K) | V_M]` with `K = current - M - {i}`.
pub fn has_markov_blanket(j: &LabeledJoint, i: usize, blanket: &[usize], current: &[usize]) -> Result<bool> {
    if blanket.contains(&i) || blanket.iter().any(|m| !current.contains(m)) {
        return Err(Error::InvalidSubset(
            "blanket must be a subset of the current set without the feature".into(),
        ));
    }
    let k: Vec<usize> = current
        .iter()
        .copied()
        .filter(|f| *f != i && !blanket.contains(f))
        .collect();
    let mut target = vec![j.class_index];
    target.extend(j.vars(&k)?);
    let sub = j.vars(blanket)?;
    let mut full = j.vars(&[i])?;
    full.extend(&sub);
    same_conditional(j, &target, &full, &sub)
}

/// Smallest (then lexicographically first) Markov blanket of `i` in `current`.
pub fn find_markov_blanket(j: &LabeledJoint, i: usize, current: &[usize]) -> Result<Option<Vec<usize>>> {
    let rest: Vec<usize> = current.iter().copied().filter(|&f| f != i).collect();
    for size in 0..=rest.len() {
        for m in combinations(&rest, size) {
            if has_markov_blanket(j, i, &m, current)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

/// Backward elimination from the relevant (SR and WR) features: repeatedly
/// drop a weakly relevant feature that has a Markov blanket in the current
/// set, trying the largest index first, until none has one.
pub fn markov_blanket_filter(j: &LabeledJoint) -> Result<Vec<usize>> {
    check_size(j)?;
    let classes: Vec<Relevance> = (0..j.n_features())
        .map(|i| classify_feature(j, i))
        .collect::<Result<_>>()?;
    let mut current: Vec<usize> = (0..j.n_features())
        .filter(|&i| classes[i] != Relevance::Irrelevant)
        .collect();
    'outer: loop {
        for &i in current.iter().rev() {
            if classes[i] == Relevance::Weak && find_markov_blanket(j, i, &current)?.is_some() {
                current.retain(|&f| f != i);
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

/// Everything the `relevance` command prints.
#[derive(Debug, Clone, Serialize)]
pub struct RelevanceReport {
    pub names: Vec<String>,
    pub relevance: Vec<Relevance>,
    pub optimal_sets: Vec<Vec<usize>>,
    pub filtered: Vec<usize>,
    /// Partition relative to the Markov-blanket filter result.
    pub partition: Vec<RelevanceClass>,
}

pub fn analyze(j: &LabeledJoint) -> Result<RelevanceReport> {
    let relevance: Vec<Relevance> = (0..j.n_features())
        .map(|i| classify_feature(j, i))
        .collect::<Result<_>>()?;
    let optimal_sets = relevance_optimal_sets(j)?;
    let filtered = markov_blanket_filter(j)?;
    let partition = partition(j, &filtered)?;
    Ok(RelevanceReport {
        names: j.names().to_vec(),
        relevance,
        optimal_sets,
        filtered,
        partition,
    })
}

impl RelevanceReport {
    fn list(&self, set: &[usize]) -> String {
        set.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(",")
    }

    fn members(&self, class: RelevanceClass) -> Vec<usize> {
        (0..self.names.len()).filter(|&i| self.partition[i] == class).collect()
    }

    pub fn render(&self) -> String {
        let sets: Vec<String> = self
            .optimal_sets
            .iter()
            .map(|s| format!("{{{}}}", self.list(s)))
            .collect();
        let mut out = format!(
            "SR: {}; optimal sets: {}\n",
            self.list(&self.members(RelevanceClass::SR)),
            sets.join(",")
        );
        out.push_str(&format!("Markov blanket filter: {{{}}}\n", self.list(&self.filtered)));
        for class in [RelevanceClass::WrNr, RelevanceClass::WrR, RelevanceClass::Irrelevant] {
            out.push_str(&format!("{class}: {}\n", self.list(&self.members(class))));
        }
        out
    }
}

/// Discrete analogues of the continuous examples.
pub mod fixtures {
    use super::LabeledJoint;

    /// Symmetric grid used for the independent base variables.
    pub const GRID: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];

    /// V1, V2, V4 independent uniform on [`GRID`], V3 = 3 V2 + 1,
    /// V5 = V4^2 and C = [V1 + V2 >= 0].
    pub fn small_joint() -> LabeledJoint {
        let mut rows = Vec::new();
        for v1 in GRID {
            for v2 in GRID {
                for v4 in GRID {
                    let c = usize::from(v1 + v2 >= 0.0);
                    rows.push((vec![v1, v2, 3.0 * v2 + 1.0, v4, v4 * v4], c, 1.0));
                }
            }
        }
        let names = (1..=5).map(|i| format!("V{i}")).collect();
        LabeledJoint::from_outcomes(names, rows).expect("valid fixture")
    }

    /// The ten benchmark features with X, Y, Z, W independent uniform on
    /// `grid` and C = [X + kY >= 0]. Feature names are the usual labels.
    pub fn benchmark_grid(grid: &[f64], k: f64) -> LabeledJoint {
        let mut rows = Vec::new();
        for &x in grid {
            for &y in grid {
                for &z in grid {
                    for &w in grid {
                        let v = vec![x, 3.0 * x + 1.0, y * y, x - y, z, z * z, y, x * x, w + 2.0, z + w];
                        rows.push((v, usize::from(x + k * y >= 0.0), 1.0));
                    }
                }
            }
        }
        let names = crate::oracle::FeatureId::ALL.iter().map(|f| f.label().to_string()).collect();
        LabeledJoint::from_outcomes(names, rows).expect("valid fixture")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(&[0, 1, 2], 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(&[4, 7], 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(&[4, 7], 2), vec![vec![4, 7]]);
        assert!(combinations(&[1], 2).is_empty());
        assert_eq!(combinations(&[0, 1, 2, 3, 4], 3).len(), 10);
    }

    #[test]
    fn independent_class_has_empty_optimal_set() {
        let mut rows = Vec::new();
        for x in [0.0, 1.0] {
            for c in [0, 1] {
                rows.push((vec![x], c, 0.25));
            }
        }
        let j = LabeledJoint::from_outcomes(vec!["A".into()], rows).unwrap();
        assert_eq!(relevance_optimal_sets(&j).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(classify_feature(&j, 0).unwrap(), Relevance::Irrelevant);
        assert!(markov_blanket_filter(&j).unwrap().is_empty());
    }

    #[test]
    fn single_class_rejected() {
        let rows = vec![(vec![0.0], 0, 0.5), (vec![1.0], 0, 0.5)];
        assert!(LabeledJoint::from_outcomes(vec!["A".into()], rows).is_err());
    }

    #[test]
    fn too_many_features() {
        let p = 13;
        let rows = vec![(vec![0.0; p], 0, 0.5), (vec![1.0; p], 1, 0.5)];
        let names = (0..p).map(|i| format!("F{i}")).collect();
        let j = LabeledJoint::from_outcomes(names, rows).unwrap();
        assert!(matches!(
            relevance_optimal_sets(&j),
            Err(Error::TooManyFeatures { max: 12, got: 13 })
        ));
    }
}
