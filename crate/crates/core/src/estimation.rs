//! Equal-width histogram estimators of differential entropy and MI.
//!
//! A variable with `n` observations is split into `m = ceil(sqrt(n))` bins of
//! width `delta` spanning the observed range, and the differential entropy is
//! estimated as the plug-in entropy of the bin frequencies plus `ln(delta)`.
//! The top bin is closed so the maximum observation is counted.

use std::cell::OnceCell;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::FeatureId;
use crate::selection::MiProvider;
use crate::xreal::XReal;

pub const MIN_OBSERVATIONS: usize = 4;

/// Number of bins for `n` observations, `ceil(sqrt(n))`.
pub fn bin_count(n: usize) -> usize {
    let mut m = (n as f64).sqrt().ceil() as usize;
    // Guard against rounding in the square root.
    while m * m < n {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m
}

/// How the bivariate histograms used for feature-feature MI are sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid2d {
    /// `m` bins on each axis (`m^2` cells).
    PerAxis,
    /// About `m` cells in total: `ceil(sqrt(m))` bins on each axis.
    #[default]
    TotalCells,
}

impl Grid2d {
    pub fn bins_per_axis(self, n: usize) -> usize {
        let m = bin_count(n);
        match self {
            Grid2d::PerAxis => m,
            Grid2d::TotalCells => bin_count(m).max(2),
        }
    }
}

/// Equal-width partition of the observed range of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binning {
    pub min: f64,
    pub width: f64,
    pub bins: usize,
}

impl Binning {
    pub fn new(values: &[f64], bins: usize) -> Result<Self> {
        if values.len() < MIN_OBSERVATIONS {
            return Err(Error::InvalidSample(format!(
                "need at least {MIN_OBSERVATIONS} observations, got {}",
                values.len()
            )));
        }
        if bins == 0 {
            return Err(Error::InvalidSample("bin count must be positive".into()));
        }
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidSample("non-finite observation".into()));
        }
        if max == min {
            return Err(Error::DegenerateSample(format!("all observations equal {min}")));
        }
        Ok(Binning {
            min,
            width: (max - min) / bins as f64,
            bins,
        })
    }

    /// Bin edges, `bins + 1` values.
    pub fn edges(&self) -> Vec<f64> {
        (0..=self.bins).map(|i| self.min + i as f64 * self.width).collect()
    }

    pub fn index(&self, v: f64) -> usize {
        let pos = ((v - self.min) / self.width).floor();
        if pos <= 0.0 {
            0
        } else {
            (pos as usize).min(self.bins - 1)
        }
    }

    pub fn assign(&self, values: &[f64]) -> Vec<usize> {
        values.iter().map(|&v| self.index(v)).collect()
    }
}

/// Plug-in entropy from cell counts. Counts are summed in sorted order so
/// that any permutation of the cells gives a bit-identical result.
fn plugin_entropy(counts: impl IntoIterator<Item = usize>) -> f64 {
    let mut c: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    c.sort_unstable();
    let n: usize = c.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let s: f64 = c.iter().map(|&c| c as f64 * (c as f64).ln()).sum();
    (nf.ln() - s / nf).max(0.0)
}

fn histogram(idx: &[usize], bins: usize) -> Vec<usize> {
    let mut h = vec![0; bins];
    for &i in idx {
        h[i] += 1;
    }
    h
}

fn joint_histogram(ix: &[usize], iy: &[usize], bx: usize, by: usize) -> Vec<usize> {
    let mut h = vec![0; bx * by];
    for (&a, &b) in ix.iter().zip(iy) {
        h[a * by + b] += 1;
    }
    h
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidSample(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

pub fn estimate_entropy_1d(x: &[f64]) -> Result<f64> {
    let b = Binning::new(x, bin_count(x.len()))?;
    Ok(plugin_entropy(histogram(&b.assign(x), b.bins)) + b.width.ln())
}

/// Joint differential entropy from a bivariate equal-width histogram.
pub fn estimate_entropy_2d(x: &[f64], y: &[f64], grid: Grid2d) -> Result<f64> {
    check_pair(x, y)?;
    let bins = grid.bins_per_axis(x.len());
    let bx = Binning::new(x, bins)?;
    let by = Binning::new(y, bins)?;
    let h = joint_histogram(&bx.assign(x), &by.assign(y), bins, bins);
    Ok(plugin_entropy(h) + bx.width.ln() + by.width.ln())
}

/// `h(x) + h(y) - h(x, y)`, all three on the same grid so the bin-width
/// corrections cancel. Not clamped at zero.
pub fn estimate_mi_features(x: &[f64], y: &[f64], grid: Grid2d) -> Result<f64> {
    check_pair(x, y)?;
    let bins = grid.bins_per_axis(x.len());
    let bx = Binning::new(x, bins)?;
    let by = Binning::new(y, bins)?;
    let (ix, iy) = (bx.assign(x), by.assign(y));
    Ok(mi_from_indices(&ix, &iy, bins))
}

fn mi_from_indices(ix: &[usize], iy: &[usize], bins: usize) -> f64 {
    let hx = plugin_entropy(histogram(ix, bins));
    let hy = plugin_entropy(histogram(iy, bins));
    let hxy = plugin_entropy(joint_histogram(ix, iy, bins, bins));
    hx + hy - hxy
}

/// `h(x) - sum_c p(c) h(x | C = c)` with every class slice binned on the
/// pooled-sample edges.
pub fn estimate_mi_class(x: &[f64], labels: &[u8]) -> Result<f64> {
    if x.len() != labels.len() {
        return Err(Error::InvalidSample(format!(
            "length mismatch: {} values vs {} labels",
            x.len(),
            labels.len()
        )));
    }
    let b = Binning::new(x, bin_count(x.len()))?;
    let idx = b.assign(x);
    mi_class_from_indices(&idx, labels, b.bins)
}

fn mi_class_from_indices(idx: &[usize], labels: &[u8], bins: usize) -> Result<f64> {
    let mut per_class = [vec![0usize; bins], vec![0usize; bins]];
    for (&i, &c) in idx.iter().zip(labels) {
        if c > 1 {
            return Err(Error::InvalidSample(format!("class label {c} is not 0 or 1")));
        }
        per_class[c as usize][i] += 1;
    }
    let n = idx.len() as f64;
    let sizes = [
        per_class[0].iter().sum::<usize>(),
        per_class[1].iter().sum::<usize>(),
    ];
    if sizes.contains(&0) {
        return Err(Error::DegenerateSample("only one class present".into()));
    }
    let pooled: Vec<usize> = (0..bins).map(|i| per_class[0][i] + per_class[1][i]).collect();
    let conditional: f64 = (0..2)
        .map(|c| sizes[c] as f64 / n * plugin_entropy(per_class[c].iter().copied()))
        .sum();
    Ok(plugin_entropy(pooled) - conditional)
}

/// Observations of the features plus a binary class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Display name per feature.
    pub names: Vec<String>,
    /// One vector per feature, each of length `n`.
    pub columns: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl Sample {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let s = Sample {
            names,
            columns,
            labels,
        };
        s.validate()?;
        Ok(s)
    }

    /// Uses the benchmark labels (`X`, `3X+1`, ...) for ten columns and
    /// `v1, v2, ...` otherwise.
    pub fn default_names(p: usize) -> Vec<String> {
        if p == FeatureId::ALL.len() {
            FeatureId::ALL.iter().map(|f| f.label().to_string()).collect()
        } else {
            (1..=p).map(|i| format!("v{i}")).collect()
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if n < MIN_OBSERVATIONS {
            return Err(Error::InvalidSample(format!(
                "need at least {MIN_OBSERVATIONS} observations, got {n}"
            )));
        }
        if self.columns.is_empty() {
            return Err(Error::InvalidSample("no feature columns".into()));
        }
        if self.names.len() != self.columns.len() {
            return Err(Error::InvalidSample("one name per column required".into()));
        }
        for (j, col) in self.columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidSample(format!(
                    "column {} has {} values, expected {n}",
                    j + 1,
                    col.len()
                )));
            }
            if let Some(r) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidSample(format!(
                    "non-finite value in column {} row {}",
                    j + 1,
                    r + 1
                )));
            }
        }
        if let Some(r) = self.labels.iter().position(|&c| c > 1) {
            return Err(Error::InvalidSample(format!(
                "class label {} in row {} is not 0 or 1",
                self.labels[r],
                r + 1
            )));
        }
        Ok(())
    }

    /// Reads `v1,...,vp,class` CSV with a header row.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let p = header.len().saturating_sub(1);
        let expected: Vec<String> = (1..=p).map(|i| format!("v{i}")).chain(["class".into()]).collect();
        let ok = p >= 1 && header.iter().zip(&expected).all(|(h, e)| h.eq_ignore_ascii_case(e));
        if !ok {
            return Err(Error::InvalidSample(format!(
                "line 1: expected header `{}`, got `{}`",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut columns = vec![Vec::new(); p];
        let mut labels = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |pos| pos.line());
            for (j, col) in columns.iter_mut().enumerate() {
                let v: f64 = rec[j].parse().map_err(|_| {
                    Error::InvalidSample(format!("line {line}: bad value `{}` in v{}", &rec[j], j + 1))
                })?;
                col.push(v);
            }
            let c = match &rec[p] {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::InvalidSample(format!(
                        "line {line}: class must be 0 or 1, got `{other}`"
                    )))
                }
            };
            labels.push(c);
        }
        Sample::new(Sample::default_names(p), columns, labels)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        Sample::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.n_features()).map(|i| format!("v{i}")).collect();
        header.push("class".into());
        w.write_record(&header)?;
        let mut row = Vec::with_capacity(header.len());
        for r in 0..self.n() {
            row.clear();
            row.extend(self.columns.iter().map(|c| format!("{:?}", c[r])));
            row.push(self.labels[r].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Histogram estimates over a sample, computed on first use and cached.
#[derive(Debug)]
pub struct EstimatedProvider {
    sample: Sample,
    grid: Grid2d,
    bins_1d: Vec<Binning>,
    bins_2d: Vec<Binning>,
    idx_1d: Vec<OnceCell<Vec<usize>>>,
    idx_2d: Vec<OnceCell<Vec<usize>>>,
    entropy: Vec<OnceCell<f64>>,
    class: Vec<OnceCell<f64>>,
    pair: Vec<OnceCell<f64>>,
}

pub fn estimated_provider(sample: Sample) -> Result<EstimatedProvider> {
    EstimatedProvider::new(sample, Grid2d::default())
}

impl EstimatedProvider {
    /// Validates the sample up front (both classes present, no constant
    /// feature) so that the accessors cannot fail.
    pub fn new(sample: Sample, grid: Grid2d) -> Result<Self> {
        sample.validate()?;
        if !sample.labels.contains(&0) || !sample.labels.contains(&1) {
            return Err(Error::DegenerateSample("only one class present".into()));
        }
        let n = sample.n();
        let p = sample.n_features();
        let mut bins_1d = Vec::with_capacity(p);
        let mut bins_2d = Vec::with_capacity(p);
        for (j, col) in sample.columns.iter().enumerate() {
            let named = |e: Error| match e {
                Error::DegenerateSample(m) => {
                    Error::DegenerateSample(format!("feature {}: {m}", sample.names[j]))
                }
                other => other,
            };
            bins_1d.push(Binning::new(col, bin_count(n)).map_err(named)?);
            bins_2d.push(Binning::new(col, grid.bins_per_axis(n)).map_err(named)?);
        }
        Ok(EstimatedProvider {
            grid,
            bins_1d,
            bins_2d,
            idx_1d: (0..p).map(|_| OnceCell::new()).collect(),
            idx_2d: (0..p).map(|_| OnceCell::new()).collect(),
            entropy: (0..p).map(|_| OnceCell::new()).collect(),
            class: (0..p).map(|_| OnceCell::new()).collect(),
            pair: (0..p * p).map(|_| OnceCell::new()).collect(),
            sample,
        })
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn grid(&self) -> Grid2d {
        self.grid
    }

    fn idx1(&self, i: usize) -> &[usize] {
        self.idx_1d[i].get_or_init(|| self.bins_1d[i].assign(&self.sample.columns[i]))
    }

    fn idx2(&self, i: usize) -> &[usize] {
        self.idx_2d[i].get_or_init(|| self.bins_2d[i].assign(&self.sample.columns[i]))
    }
}

impl MiProvider for EstimatedProvider {
    fn n_features(&self) -> usize {
        self.sample.n_features()
    }
    fn feature_name(&self, i: usize) -> String {
        self.sample.names[i].clone()
    }
    fn entropy(&self, i: usize) -> XReal {
        XReal::Finite(*self.entropy[i].get_or_init(|| {
            let b = &self.bins_1d[i];
            plugin_entropy(histogram(self.idx1(i), b.bins)) + b.width.ln()
        }))
    }
    fn class_mi(&self, i: usize) -> XReal {
        XReal::Finite(*self.class[i].get_or_init(|| {
            mi_class_from_indices(self.idx1(i), &self.sample.labels, self.bins_1d[i].bins)
                .expect("sample validated at construction")
        }))
    }
    fn pairwise_mi(&self, i: usize, j: usize) -> XReal {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let p = self.n_features();
        XReal::Finite(*self.pair[a * p + b].get_or_init(|| {
            mi_from_indices(self.idx2(a), self.idx2(b), self.bins_2d[a].bins)
        }))
    }
}
