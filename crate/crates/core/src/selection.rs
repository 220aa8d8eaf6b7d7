//! The eight selection criteria and the sequential forward search.
//!
//! Every objective has the form `MI(C, V_i) - redundancy(V_i, S)` (MICC is
//! multiplicative) and is evaluated in extended-real arithmetic. A candidate
//! whose objective is indeterminate cannot be selected at that step; `-inf`
//! is an ordinary (admissible) value.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::infotheory::normalized_mi;
use crate::xreal::{xmax_all, xsum, XReal};

/// Source of the entropies and mutual informations a criterion needs.
///
/// Features are addressed by zero-based index; the index order is the
/// tie-break order.
pub trait MiProvider {
    fn n_features(&self) -> usize;
    fn feature_name(&self, i: usize) -> String;
    fn entropy(&self, i: usize) -> XReal;
    fn class_mi(&self, i: usize) -> XReal;
    fn pairwise_mi(&self, i: usize, j: usize) -> XReal;
}

impl<P: MiProvider + ?Sized> MiProvider for &P {
    fn n_features(&self) -> usize {
        (**self).n_features()
    }
    fn feature_name(&self, i: usize) -> String {
        (**self).feature_name(i)
    }
    fn entropy(&self, i: usize) -> XReal {
        (**self).entropy(i)
    }
    fn class_mi(&self, i: usize) -> XReal {
        (**self).class_mi(i)
    }
    fn pairwise_mi(&self, i: usize, j: usize) -> XReal {
        (**self).pairwise_mi(i, j)
    }
}

/// Provider backed by explicit arrays; useful for synthetic inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TableProvider {
    pub names: Vec<String>,
    pub entropy: Vec<XReal>,
    pub class_mi: Vec<XReal>,
    /// Row-major `n x n`, must be symmetric.
    pub pairwise: Vec<XReal>,
}

impl TableProvider {
    pub fn new(
        names: Vec<String>,
        entropy: Vec<XReal>,
        class_mi: Vec<XReal>,
        pairwise: Vec<XReal>,
    ) -> Result<Self> {
        let n = names.len();
        if entropy.len() != n || class_mi.len() != n || pairwise.len() != n * n {
            return Err(Error::InvalidSubset(format!(
                "provider arrays disagree: {n} names, {} entropies, {} class MIs, {} pairwise entries",
                entropy.len(),
                class_mi.len(),
                pairwise.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if pairwise[i * n + j] != pairwise[j * n + i] {
                    return Err(Error::InvalidSubset(format!(
                        "pairwise MI not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(TableProvider {
            names,
            entropy,
            class_mi,
            pairwise,
        })
    }

    /// Snapshot of any provider.
    pub fn capture<P: MiProvider + ?Sized>(p: &P) -> Self {
        let n = p.n_features();
        TableProvider {
            names: (0..n).map(|i| p.feature_name(i)).collect(),
            entropy: (0..n).map(|i| p.entropy(i)).collect(),
            class_mi: (0..n).map(|i| p.class_mi(i)).collect(),
            pairwise: (0..n * n).map(|ij| p.pairwise_mi(ij / n, ij % n)).collect(),
        }
    }
}

impl MiProvider for TableProvider {
    fn n_features(&self) -> usize {
        self.names.len()
    }
    fn feature_name(&self, i: usize) -> String {
        self.names[i].clone()
    }
    fn entropy(&self, i: usize) -> XReal {
        self.entropy[i]
    }
    fn class_mi(&self, i: usize) -> XReal {
        self.class_mi[i]
    }
    fn pairwise_mi(&self, i: usize, j: usize) -> XReal {
        self.pairwise[i * self.names.len() + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MethodSpec {
    Mifs { beta: f64 },
    MifsU { beta: f64 },
    Mrmr,
    MmifsU,
    Micc,
    Qmifs,
    Nmifs,
    MaxMifs,
}

pub const METHOD_NAMES: [&str; 8] = ["mifs", "mifsu", "mrmr", "mmifsu", "micc", "qmifs", "nmifs", "maxmifs"];

impl MethodSpec {
    /// Builds a method from its name. `beta` is required to lie in `[0, 1]`,
    /// defaults to 1 for MIFS and MIFS-U, and is rejected for the others.
    pub fn parse(name: &str, beta: Option<f64>) -> Result<Self> {
        let key: String = name
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        if let Some(b) = beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::InvalidMethod(format!("beta must lie in [0, 1], got {b}")));
            }
        }
        let no_beta = |m: MethodSpec| match beta {
            Some(_) => Err(Error::InvalidMethod(format!("method {key} takes no beta"))),
            None => Ok(m),
        };
        match key.as_str() {
            "mifs" => Ok(MethodSpec::Mifs { beta: beta.unwrap_or(1.0) }),
            "mifsu" => Ok(MethodSpec::MifsU { beta: beta.unwrap_or(1.0) }),
            "mrmr" => no_beta(MethodSpec::Mrmr),
            "mmifsu" => no_beta(MethodSpec::MmifsU),
            "micc" => no_beta(MethodSpec::Micc),
            "qmifs" => no_beta(MethodSpec::Qmifs),
            "nmifs" => no_beta(MethodSpec::Nmifs),
            "maxmifs" => no_beta(MethodSpec::MaxMifs),
            _ => Err(Error::UnknownMethod {
                name: name.to_string(),
                valid: METHOD_NAMES.join(", "),
            }),
        }
    }

    /// Canonical lowercase name, as accepted by [`MethodSpec::parse`].
    pub fn key(&self) -> &'static str {
        match self {
            MethodSpec::Mifs { .. } => "mifs",
            MethodSpec::MifsU { .. } => "mifsu",
            MethodSpec::Mrmr => "mrmr",
            MethodSpec::MmifsU => "mmifsu",
            MethodSpec::Micc => "micc",
            MethodSpec::Qmifs => "qmifs",
            MethodSpec::Nmifs => "nmifs",
            MethodSpec::MaxMifs => "maxmifs",
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            MethodSpec::Mifs { beta } | MethodSpec::MifsU { beta } => Some(beta),
            _ => None,
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            MethodSpec::Mifs { .. } => "MIFS",
            MethodSpec::MifsU { .. } => "MIFS-U",
            MethodSpec::Mrmr => "mRMR",
            MethodSpec::MmifsU => "mMIFS-U",
            MethodSpec::Micc => "MICC",
            MethodSpec::Qmifs => "QMIFS",
            MethodSpec::Nmifs => "NMIFS",
            MethodSpec::MaxMifs => "maxMIFS",
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta() {
            Some(b) => write!(f, "{}(beta={})", self.display_name(), b),
            None => f.write_str(self.display_name()),
        }
    }
}

impl FromStr for MethodSpec {
    type Err = Error;
    /// `name` or `name:beta`, e.g. `mifs:0.4`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, b)) => {
                let beta = b
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidMethod(format!("bad beta `{b}` in `{s}`")))?;
                MethodSpec::parse(name, Some(beta))
            }
            None => MethodSpec::parse(s, None),
        }
    }
}

/// `MI(V_l, V_m) / h(V_m)`.
fn phi<P: MiProvider + ?Sized>(p: &P, l: usize, m: usize) -> XReal {
    p.pairwise_mi(l, m).xdiv(p.entropy(m))
}

/// `MI(C, V_s) / h(V_s) * MI(V_i, V_s)`, the MIFS-U redundancy term.
fn mifsu_term<P: MiProvider + ?Sized>(p: &P, i: usize, s: usize) -> XReal {
    p.class_mi(s).xdiv(p.entropy(s)).xmul(p.pairwise_mi(i, s))
}

fn ni<P: MiProvider + ?Sized>(p: &P, i: usize, s: usize) -> XReal {
    normalized_mi(p.pairwise_mi(i, s), p.entropy(i), p.entropy(s))
}

fn inv_len(selected: &[usize]) -> XReal {
    XReal::Finite(1.0 / selected.len() as f64)
}

/// Objective of candidate `i` given the already selected features.
///
/// With an empty selection every method reduces to `MI(C, V_i)`.
pub fn objective<P: MiProvider + ?Sized>(m: &MethodSpec, i: usize, selected: &[usize], p: &P) -> XReal {
    let rel = p.class_mi(i);
    if selected.is_empty() {
        return rel;
    }
    let s = selected.iter().copied();
    match *m {
        MethodSpec::Mifs { beta } => {
            rel.xsub(XReal::Finite(beta).xmul(xsum(s.map(|s| p.pairwise_mi(i, s)))))
        }
        MethodSpec::Mrmr => rel.xsub(inv_len(selected).xmul(xsum(s.map(|s| p.pairwise_mi(i, s))))),
        MethodSpec::MaxMifs => {
            rel.xsub(xmax_all(s.map(|s| p.pairwise_mi(i, s))).expect("nonempty selection"))
        }
        MethodSpec::MifsU { beta } => {
            rel.xsub(XReal::Finite(beta).xmul(xsum(s.map(|s| mifsu_term(p, i, s)))))
        }
        MethodSpec::MmifsU => {
            rel.xsub(xmax_all(s.map(|s| mifsu_term(p, i, s))).expect("nonempty selection"))
        }
        MethodSpec::Nmifs => rel.xsub(inv_len(selected).xmul(xsum(s.map(|s| ni(p, i, s))))),
        MethodSpec::Micc => {
            let mean_ni = inv_len(selected).xmul(xsum(s.map(|s| ni(p, i, s))));
            rel.xdiv(mean_ni).xsub(rel)
        }
        MethodSpec::Qmifs => {
            let half = XReal::Finite(0.5);
            let redundancy = xsum(selected.iter().map(|&k| {
                let pair = xsum(
                    selected
                        .iter()
                        .filter(|&&j| j != k)
                        .map(|&j| phi(p, i, j).xmul(phi(p, j, k))),
                );
                phi(p, i, k).xsub(half.xmul(pair)).xmul(p.class_mi(k))
            }));
            rel.xsub(redundancy)
        }
    }
}

/// Index of the admissible value that is strictly largest, first on ties.
fn argmax(values: impl IntoIterator<Item = (usize, XReal)>) -> Option<usize> {
    let mut best: Option<(usize, XReal)> = None;
    for (i, v) in values {
        if v.is_indet() {
            continue;
        }
        match best {
            Some((_, b)) if v.order(b).is_le() => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// The first selection: the feature with the largest class MI, smallest
/// index on ties. `None` only if every class MI is indeterminate.
pub fn first_feature<P: MiProvider + ?Sized>(p: &P) -> Option<usize> {
    argmax((0..p.n_features()).map(|i| (i, p.class_mi(i))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HaltReason {
    AllSelected,
    NoAdmissibleCandidate,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::AllSelected => "all selected",
            HaltReason::NoAdmissibleCandidate => "no admissible candidate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateEval {
    pub feature: usize,
    pub objective: XReal,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub candidates: Vec<CandidateEval>,
    pub winner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTrace {
    pub method: MethodSpec,
    pub names: Vec<String>,
    pub selected: Vec<usize>,
    pub steps: Vec<Step>,
    pub halt: HaltReason,
}

impl SelectionTrace {
    pub fn selected_names(&self) -> Vec<&str> {
        self.selected.iter().map(|&i| self.names[i].as_str()).collect()
    }

    /// `X X2 Y2 | halt: no admissible candidate`.
    pub fn summary(&self) -> String {
        format!("{} | halt: {}", self.selected_names().join(" "), self.halt)
    }

    /// Tab-separated `step, feature, objective, admissible, selected` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("step\tfeature\tobjective\tadmissible\tselected\n");
        for (n, step) in self.steps.iter().enumerate() {
            for c in &step.candidates {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    n + 1,
                    self.names[c.feature],
                    c.objective,
                    c.admissible,
                    step.winner == Some(c.feature)
                ));
            }
        }
        out
    }
}

/// Runs the forward search to exhaustion or until every remaining candidate
/// is indeterminate.
pub fn select_all<P: MiProvider + ?Sized>(m: &MethodSpec, p: &P) -> SelectionTrace {
    let n = p.n_features();
    let mut selected: Vec<usize> = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut halt = HaltReason::AllSelected;
    while selected.len() < n {
        let candidates: Vec<CandidateEval> = (0..n)
            .filter(|i| !selected.contains(i))
            .map(|i| {
                let objective = objective(m, i, &selected, p);
                CandidateEval {
                    feature: i,
                    objective,
                    admissible: !objective.is_indet(),
                }
            })
            .collect();
        let winner = argmax(candidates.iter().map(|c| (c.feature, c.objective)));
        steps.push(Step { candidates, winner });
        match winner {
            Some(w) => selected.push(w),
            None => {
                halt = HaltReason::NoAdmissibleCandidate;
                break;
            }
        }
    }
    SelectionTrace {
        method: *m,
        names: (0..n).map(|i| p.feature_name(i)).collect(),
        selected,
        steps,
        halt,
    }
}
