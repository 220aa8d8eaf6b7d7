//! Entropy and mutual information on finite discrete joint distributions.
//!
//! A [`JointTable`] is a dense probability mass array over the product of the
//! variables' supports, stored row-major (the last variable varies fastest).
//! All quantities are in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::xreal::XReal;

const NORMALIZATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct JointTable {
    arities: Vec<usize>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    arities: Vec<usize>,
    probabilities: Vec<f64>,
}

impl TryFrom<RawTable> for JointTable {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        JointTable::new(raw.arities, raw.probabilities)
    }
}

impl From<JointTable> for RawTable {
    fn from(t: JointTable) -> Self {
        RawTable {
            arities: t.arities,
            probabilities: t.probs,
        }
    }
}

impl JointTable {
    /// Builds a table, renormalising masses whose total is within 1e-9 of one.
    pub fn new(arities: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if arities.is_empty() {
            return Err(Error::InvalidTable("no variables".into()));
        }
        if let Some(pos) = arities.iter().position(|&a| a == 0) {
            return Err(Error::InvalidTable(format!("variable {pos} has arity 0")));
        }
        let size = arities
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a))
            .ok_or_else(|| Error::InvalidTable("support too large".into()))?;
        if probs.len() != size {
            return Err(Error::InvalidTable(format!(
                "expected {size} masses for arities {arities:?}, got {}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidTable(format!("invalid mass {bad}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::InvalidTable(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        let probs = probs.into_iter().map(|p| p / total).collect();
        Ok(JointTable { arities, probs })
    }

    /// Normalises arbitrary nonnegative weights into a table.
    pub fn from_weights(arities: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidTable("weights must have a positive finite sum".into()));
        }
        JointTable::new(arities, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_vars(&self) -> usize {
        self.arities.len()
    }

    /// Row-major strides of each variable.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.arities.len()];
        for v in (0..self.arities.len().saturating_sub(1)).rev() {
            strides[v] = strides[v + 1] * self.arities[v + 1];
        }
        strides
    }

    /// Decodes a flat index into per-variable states.
    pub fn assignment(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.arities.len()];
        for v in (0..self.arities.len()).rev() {
            out[v] = index % self.arities[v];
            index /= self.arities[v];
        }
        out
    }

    fn check_vars(&self, vars: &[usize]) -> Result<()> {
        for (pos, &v) in vars.iter().enumerate() {
            if v >= self.n_vars() {
                return Err(Error::InvalidSubset(format!(
                    "variable {v} out of range (table has {})",
                    self.n_vars()
                )));
            }
            if vars[..pos].contains(&v) {
                return Err(Error::InvalidSubset(format!("variable {v} repeated")));
            }
        }
        Ok(())
    }

    /// Marginal distribution of `vars`, in the given order. An empty subset
    /// yields the trivial one-cell table.
    pub fn marginal(&self, vars: &[usize]) -> Result<JointTable> {
        self.check_vars(vars)?;
        let arities: Vec<usize> = if vars.is_empty() {
            vec![1]
        } else {
            vars.iter().map(|&v| self.arities[v]).collect()
        };
        let size = arities.iter().product();
        let mut probs = vec![0.0; size];
        let strides = self.strides();
        for (idx, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut target = 0;
            for &v in vars {
                let state = (idx / strides[v]) % self.arities[v];
                target = target * self.arities[v] + state;
            }
            probs[target] += p;
        }
        Ok(JointTable { arities, probs })
    }

    /// Entropy of the subset, allowing the empty subset (entropy 0).
    fn joint_entropy(&self, vars: &[usize]) -> Result<f64> {
        Ok(shannon(&self.marginal(vars)?.probs))
    }
}

/// `-sum p ln p` with `0 ln 0 = 0`.
fn shannon(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    h.max(0.0)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b.iter()).copied().collect()
}

fn ensure_disjoint(sets: &[&[usize]]) -> Result<()> {
    for i in 0..sets.len() {
        for j in (i + 1)..sets.len() {
            if let Some(v) = sets[i].iter().find(|v| sets[j].contains(v)) {
                return Err(Error::InvalidSubset(format!(
                    "subsets overlap on variable {v}"
                )));
            }
        }
    }
    Ok(())
}

fn ensure_nonempty(vars: &[usize], what: &str) -> Result<()> {
    if vars.is_empty() {
        Err(Error::InvalidSubset(format!("{what} subset is empty")))
    } else {
        Ok(())
    }
}

/// H(vars).
pub fn entropy(t: &JointTable, vars: &[usize]) -> Result<f64> {
    ensure_nonempty(vars, "entropy")?;
    t.joint_entropy(vars)
}

/// H(X | Y) = H(X, Y) - H(Y).
pub fn cond_entropy(t: &JointTable, x: &[usize], y: &[usize]) -> Result<f64> {
    ensure_nonempty(x, "conditioned")?;
    ensure_disjoint(&[x, y])?;
    let h = t.joint_entropy(&union(x, y))? - t.joint_entropy(y)?;
    Ok(h.max(0.0))
}

/// MI(X, Y) evaluated from its definition,
/// `sum p(x,y) ln(p(x,y) / (p(x) p(y)))`.
pub fn mi(t: &JointTable, x: &[usize], y: &[usize]) -> Result<f64> {
    ensure_nonempty(x, "first")?;
    ensure_nonempty(y, "second")?;
    ensure_disjoint(&[x, y])?;
    // Fixed argument order so that MI(X, Y) and MI(Y, X) agree bit for bit.
    if x > y {
        return mi(t, y, x);
    }
    let joint = t.marginal(&union(x, y))?;
    let px = t.marginal(x)?;
    let py = t.marginal(y)?;
    let ny: usize = py.probs.len();
    let mut acc = 0.0;
    for (idx, &p) in joint.probs.iter().enumerate() {
        if p > 0.0 {
            let (ix, iy) = (idx / ny, idx % ny);
            acc += p * (p / (px.probs[ix] * py.probs[iy])).ln();
        }
    }
    Ok(acc)
}

/// MI(X, Y) via H(X) + H(Y) - H(X, Y).
pub fn mi_from_entropies(t: &JointTable, x: &[usize], y: &[usize]) -> Result<f64> {
    ensure_nonempty(x, "first")?;
    ensure_nonempty(y, "second")?;
    ensure_disjoint(&[x, y])?;
    Ok(t.joint_entropy(x)? + t.joint_entropy(y)? - t.joint_entropy(&union(x, y))?)
}

/// MI(X, Y | Z) = H(X, Z) + H(Y, Z) - H(X, Y, Z) - H(Z).
pub fn cond_mi(t: &JointTable, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
    ensure_nonempty(x, "first")?;
    ensure_nonempty(y, "second")?;
    ensure_disjoint(&[x, y, z])?;
    let xz = union(x, z);
    let yz = union(y, z);
    let xyz = union(&xz, y);
    Ok(t.joint_entropy(&xz)? + t.joint_entropy(&yz)? - t.joint_entropy(&xyz)? - t.joint_entropy(z)?)
}

/// Triple mutual information MI(X, Y) - MI(X, Y | Z). Can be negative.
pub fn tmi(t: &JointTable, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
    ensure_nonempty(z, "third")?;
    Ok(mi(t, x, y)? - cond_mi(t, x, y, z)?)
}

/// NI = MI(X, Y) / min(h(X), h(Y)) under extended-real semantics.
///
/// For continuous variables the entropies may be zero or negative, so the
/// result is not confined to `[0, 1]`.
pub fn normalized_mi(mi_xy: XReal, h_x: XReal, h_y: XReal) -> XReal {
    mi_xy.xdiv(h_x.xmin(h_y))
}
