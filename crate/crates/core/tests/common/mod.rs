//! Reference tables shared by the integration tests.

#![allow(dead_code)]

use mifs_lab::oracle::Scenario;
use mifs_lab::selection::MethodSpec;

/// Reference entropy and class-MI table: (feature, h_I, mi_I(0.2), mi_I(0.8),
/// h_II, mi_II(0.2), mi_II(0.8)).
pub const ORACLE_TABLE: [(&str, f64, f64, f64, f64, f64, f64); 10] = [
    ("V1", 0.0, 0.5932, 0.2932, 1.4189, 0.5520, 0.2495),
    ("V2", 1.0986, 0.5932, 0.2932, 2.5176, 0.5520, 0.2495),
    ("V3", -1.6932, 0.0, 0.0, 0.7838, 0.0, 0.0),
    ("V4", 0.5000, 0.1785, 0.0201, 1.7655, 0.0947, 0.0032),
    ("V5", 0.0, 0.0, 0.0, 1.4189, 0.0, 0.0),
    ("V6", -1.6932, 0.0, 0.0, 0.7838, 0.0, 0.0),
    ("V7", 0.0, 0.0067, 0.1153, 1.4189, 0.0124, 0.1434),
    ("V8", -1.6932, 0.0, 0.0, 0.7838, 0.0, 0.0),
    ("V9", 0.0, 0.0, 0.0, 1.4189, 0.0, 0.0),
    ("V10", 0.5000, 0.0, 0.0, 1.7655, 0.0, 0.0),
];

pub struct OrderRow {
    pub scenario: Scenario,
    pub k: f64,
    pub method: MethodSpec,
    /// Labels in selection order; the trace must halt right after the last.
    /// `None` marks a cell that is not compared.
    pub order: Vec<Option<&'static str>>,
}

const FULL: &str = "X Y Z W+2 X-Y Z+W 3X+1 Y2 Z2 X2";

fn cells(s: &str) -> Vec<Option<&'static str>> {
    // Leak is fine: test tables are built once per process.
    let s: &'static str = Box::leak(s.to_string().into_boxed_str());
    s.split_whitespace().map(|c| if c == "?" { None } else { Some(c) }).collect()
}

fn rows_for(scenario: Scenario, k: f64, table: &[(&str, &[f64], &str)]) -> Vec<OrderRow> {
    let mut out = Vec::new();
    for &(name, betas, order) in table {
        let order = if order == "full" { FULL } else { order };
        if betas.is_empty() {
            out.push(OrderRow {
                scenario,
                k,
                method: MethodSpec::parse(name, None).unwrap(),
                order: cells(order),
            });
        }
        for &b in betas {
            out.push(OrderRow {
                scenario,
                k,
                method: MethodSpec::parse(name, Some(b)).unwrap(),
                order: cells(order),
            });
        }
    }
    out
}

/// Every row of the four reference ordering panels.
pub fn ordering_rows() -> Vec<OrderRow> {
    use Scenario::*;
    let nb: &[f64] = &[];
    let mut rows = Vec::new();
    rows.extend(rows_for(Uniform, 0.2, &[
        ("mifs", &[0.0], "X X-Y Y Z W+2 Z+W"),
        ("mifs", &[0.4, 0.7, 1.0], "full"),
        ("mifsu", &[0.0], "X"),
        ("mifsu", &[0.4, 0.7, 1.0], "X 3X+1 X-Y X2"),
        ("mrmr", nb, "full"),
        ("mmifsu", nb, "X 3X+1 X-Y X2"),
        ("micc", nb, "X X2 X-Y Y2"),
        ("qmifs", nb, "X 3X+1"),
        ("nmifs", nb, "X X2 Y2 Z2 X-Y"),
        ("maxmifs", nb, "full"),
    ]));
    rows.extend(rows_for(Uniform, 0.8, &[
        ("mifs", &[0.0], "X Y X-Y Z W+2 Z+W"),
        ("mifs", &[0.4, 0.7, 1.0], "full"),
        ("mifsu", &[0.0], "X"),
        ("mifsu", &[0.4, 0.7, 1.0], "X 3X+1 X-Y X2"),
        ("mrmr", nb, "full"),
        ("mmifsu", nb, "X 3X+1 X-Y X2"),
        ("micc", nb, "X X2 X-Y Y2"),
        ("qmifs", nb, "X 3X+1"),
        // Third cell prints 3X+1; excluded, see README.
        ("nmifs", nb, "X X2 ? Z2 X-Y"),
        ("maxmifs", nb, "full"),
    ]));
    rows.extend(rows_for(Gaussian, 0.2, &[
        ("mifs", &[0.0], "X X-Y Y Z W+2 Z+W"),
        ("mifs", &[0.4, 0.7, 1.0], "full"),
        ("mifsu", &[0.0], "X X-Y Y Z W+2 Z+W"),
        ("mifsu", &[0.4], "X X-Y Y Z W+2 Z+W 3X+1 Y2 X2"),
        ("mifsu", &[0.7, 1.0], "X Y Z W+2 Z+W X-Y 3X+1 Y2 X2"),
        ("mrmr", nb, "full"),
        ("mmifsu", nb, "X Y Z W+2 Z+W X-Y 3X+1 Y2 X2"),
        ("micc", nb, "X Y X-Y Y2 X2 3X+1"),
        ("qmifs", nb, "X Y Z W+2 Z+W X-Y"),
        ("nmifs", nb, "full"),
        ("maxmifs", nb, "full"),
    ]));
    rows.extend(rows_for(Gaussian, 0.8, &[
        ("mifs", &[0.0], "X Y X-Y Z W+2 Z+W"),
        ("mifs", &[0.4, 0.7, 1.0], "full"),
        ("mifsu", &[0.0], "X Y X-Y Z W+2 Z+W"),
        ("mifsu", &[0.4, 0.7, 1.0], "X Y Z W+2 Z+W X-Y 3X+1 Y2 X2"),
        ("mrmr", nb, "full"),
        ("mmifsu", nb, "X Y Z W+2 Z+W X-Y 3X+1 Y2 X2"),
        ("micc", nb, "X Y X-Y Y2 X2 3X+1"),
        ("qmifs", nb, "X Y Z W+2 Z+W X-Y"),
        ("nmifs", nb, "full"),
        ("maxmifs", nb, "full"),
    ]));
    rows
}

/// Whether `got` (selected labels) matches the row: same length and every
/// compared cell equal.
pub fn row_matches(row: &OrderRow, got: &[&str]) -> bool {
    got.len() == row.order.len()
        && row.order.iter().zip(got).all(|(want, g)| want.is_none_or(|w| w == *g))
}

/// Lower triangles of the reference pairwise tables. `inf` is +inf, `L` the
/// linear-pair value and `S` the square-pair value of each scenario.
pub const PAIRWISE_TABLE: [&str; 10] = [
    "inf",
    "inf inf",
    "0 0 inf",
    "L L S inf",
    "0 0 0 0 inf",
    "0 0 0 0 inf inf",
    "0 0 inf L 0 0 inf",
    "inf inf 0 S 0 0 0 inf",
    "0 0 0 0 0 0 0 0 inf",
    "0 0 0 0 L S 0 0 L inf",
];

/// Reference entry (i, j) for a scenario: `None` for +inf.
pub fn pairwise_entry(scenario: Scenario, i: usize, j: usize) -> Option<f64> {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    let cell = PAIRWISE_TABLE[i].split_whitespace().nth(j).unwrap();
    let ln2 = std::f64::consts::LN_2;
    match (cell, scenario) {
        ("inf", _) => None,
        ("0", _) => Some(0.0),
        ("L", Scenario::Uniform) => Some(0.5),
        ("L", Scenario::Gaussian) => Some(ln2 / 2.0),
        ("S", Scenario::Uniform) => Some((1.0 - ln2) / 2.0),
        ("S", Scenario::Gaussian) => Some(0.1078),
        _ => unreachable!(),
    }
}
