//! Self-checks run by the `verify` command.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::infotheory::{cond_mi, mi, mi_from_entropies, tmi, JointTable};
use crate::oracle::{
    class_mi, mi_y2_xy_ii, oracle_provider, pairwise_mi, square_class_mi, BaseDistribution, FeatureId,
    Scenario, ScenarioSpec,
};
use crate::relevance::{fixtures, markov_blanket_filter, relevance_optimal_sets};
use crate::selection::{select_all, MethodSpec};
use crate::xreal::{IndetKind, XReal};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn close(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Self {
        Check::new(
            name,
            (got - want).abs() <= tol,
            format!("got {got:.6}, expected {want} +/- {tol:e}"),
        )
    }
}

fn xreal_checks(out: &mut Vec<Check>) {
    use XReal::*;
    let cases = [
        ("inf + -inf", PosInf + NegInf, Indet(IndetKind::InfMinusInf)),
        ("0 * inf", Finite(0.0) * PosInf, Indet(IndetKind::ZeroTimesInf)),
        ("0 / 0", Finite(0.0) / Finite(0.0), Indet(IndetKind::ZeroOverZero)),
        ("0.5 / 0", Finite(0.5) / Finite(0.0), PosInf),
        ("3 / -inf", Finite(3.0) / NegInf, Finite(0.0)),
    ];
    for (name, got, want) in cases {
        out.push(Check::new(format!("xreal {name}"), got == want, format!("got {got}")));
    }
}

fn random_table(rng: &mut ChaCha8Rng) -> JointTable {
    let arities: Vec<usize> = (0..3).map(|_| rng.random_range(2..=4)).collect();
    let n: usize = arities.iter().product();
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    JointTable::from_weights(arities, w).expect("positive weights")
}

fn infotheory_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_identity: f64 = 0.0;
    let mut worst_chain: f64 = 0.0;
    for _ in 0..200 {
        let t = random_table(&mut rng);
        let (x, y, z) = (&[0usize][..], &[1usize][..], &[2usize][..]);
        worst_identity = worst_identity.max((mi(&t, x, y)? - mi_from_entropies(&t, x, y)?).abs());
        let a = mi(&t, x, y)? - cond_mi(&t, x, y, z)?;
        let b = mi(&t, x, z)? - cond_mi(&t, x, z, y)?;
        let c = mi(&t, y, z)? - cond_mi(&t, y, z, x)?;
        worst_chain = worst_chain.max((a - b).abs()).max((a - c).abs());
    }
    out.push(Check::new(
        "MI definition equals entropy identity (200 tables)",
        worst_identity < 1e-10,
        format!("max deviation {worst_identity:e}"),
    ));
    out.push(Check::new(
        "interaction information symmetric (200 tables)",
        worst_chain < 1e-10,
        format!("max deviation {worst_chain:e}"),
    ));
    let mut p = vec![0.0; 8];
    for a in 0..2 {
        for b in 0..2 {
            p[a * 4 + b * 2 + (a ^ b)] = 0.25;
        }
    }
    let xor = JointTable::new(vec![2, 2, 2], p)?;
    out.push(Check::close("XOR interaction information", tmi(&xor, &[0], &[2], &[1])?, -LN_2, 1e-12));
    Ok(())
}

fn square_checks(out: &mut Vec<Check>) -> Result<()> {
    let bases = [
        ("Unif(-0.5,0.5)", BaseDistribution::Uniform { delta: 0.5 }),
        ("Unif(-1,1)", BaseDistribution::Uniform { delta: 1.0 }),
        ("N(0,1)", BaseDistribution::Normal),
    ];
    for k in [0.2, 0.8] {
        for (label, base) in bases {
            let v = square_class_mi(k, base)?;
            out.push(Check::new(
                format!("MI(C_{k}, X^2) = 0 under {label}"),
                v.abs() < 1e-3,
                format!("got {v:e}"),
            ));
        }
    }
    Ok(())
}

fn oracle_checks(out: &mut Vec<Check>) -> Result<()> {
    let i2 = ScenarioSpec::new(Scenario::Uniform, 0.2)?;
    out.push(Check::close("scenario I MI(C_0.2, X)", class_mi(&i2, FeatureId::V1)?, 0.5932, 1e-4));
    out.push(Check::close("scenario I MI(C_0.2, X-Y)", class_mi(&i2, FeatureId::V4)?, 0.1785, 5e-5));
    let ii2 = ScenarioSpec::new(Scenario::Gaussian, 0.2)?;
    out.push(Check::close("scenario II MI(C_0.2, X)", class_mi(&ii2, FeatureId::V1)?, 0.5520, 1e-3));
    out.push(Check::close("scenario II MI(Y^2, X-Y)", mi_y2_xy_ii(), 0.1078, 2e-3));
    for spec in [i2, ii2] {
        let same = class_mi(&spec, FeatureId::V1)? == class_mi(&spec, FeatureId::V2)?;
        out.push(Check::new(
            format!("scenario {} affine invariance of class MI", spec.scenario),
            same,
            "",
        ));
        let symmetric = FeatureId::ALL.iter().all(|&a| {
            FeatureId::ALL
                .iter()
                .all(|&b| pairwise_mi(&spec, a, b) == pairwise_mi(&spec, b, a))
        });
        out.push(Check::new(format!("scenario {} pairwise MI symmetric", spec.scenario), symmetric, ""));
    }
    Ok(())
}

fn selection_checks(out: &mut Vec<Check>) -> Result<()> {
    for scenario in [Scenario::Uniform, Scenario::Gaussian] {
        for k in [0.2, 0.8] {
            let p = oracle_provider(&ScenarioSpec::new(scenario, k)?)?;
            let a = select_all(&MethodSpec::Mifs { beta: 1.0 }, &p);
            let b = select_all(&MethodSpec::Mrmr, &p);
            let c = select_all(&MethodSpec::MaxMifs, &p);
            out.push(Check::new(
                format!("scenario {scenario} k={k}: MIFS(1), mRMR, maxMIFS agree"),
                a.selected == b.selected && b.selected == c.selected,
                a.summary(),
            ));
        }
    }
    Ok(())
}

fn relevance_checks(out: &mut Vec<Check>) -> Result<()> {
    let j = fixtures::small_joint();
    let sets = relevance_optimal_sets(&j)?;
    out.push(Check::new(
        "example joint: optimal sets {V1,V2},{V1,V3}",
        sets == vec![vec![0, 1], vec![0, 2]],
        format!("{sets:?}"),
    ));
    let filtered = markov_blanket_filter(&j)?;
    out.push(Check::new(
        "example joint: Markov blanket filter yields an optimal set",
        sets.contains(&filtered),
        format!("{filtered:?}"),
    ));
    Ok(())
}

/// Runs every check. Errors only on unexpected internal failures.
pub fn run_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    xreal_checks(&mut out);
    infotheory_checks(&mut out)?;
    square_checks(&mut out)?;
    oracle_checks(&mut out)?;
    selection_checks(&mut out)?;
    relevance_checks(&mut out)?;
    Ok(out)
}
