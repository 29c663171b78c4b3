//! Randomized property suites.
//!
//! Trial `i` of a run draws everything from `trial_rng(seed, i)`, so trials
//! run in parallel and the reported failure (the lowest failing trial index)
//! does not depend on scheduling.
//!
//! θ-degrees grow like q^(τ-degree) under twisting, so suites that evaluate
//! Φ(a) keep deg a <= 2 (cocycle suites take a, b of degree <= 1, so that
//! deg ab <= 2) and draw Drinfeld ranks from 1..=3; the reducer soundness
//! and idempotence suites use the full rank range 2..=5.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::biderivation::Biderivation;
use crate::error::{Error, Result};
use crate::ext::{
    dual_tmodule, find_splitting, lie_inner_solve, lie_inner_value, reduce_carlitz, reduce_dual_c, reduce_vs_carlitz,
    Certificate,
};
use crate::field::{Fq, FqPoly};
use crate::json::{encode_matrix, BiderivationJson};
use crate::random;
use crate::skew::SkewMatrix;
use crate::tmodule::{carlitz_tensor, DrinfeldModule, TModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// `δ(ab) = Ψ(a)δ(b) + δ(a)Φ(b)`.
    Cocycle,
    /// Inner biderivations satisfy the cocycle law and `δ_U(a) = UΦ(a) - Ψ(a)U`.
    InnerCocycle,
    /// `split_check(inner(U), U)`.
    Split,
    /// `δ·b - b·δ = inner(δ(b))`.
    TAction,
    /// Every reducer's certificate checks.
    Soundness,
    /// `reduce ∘ reduce = reduce`.
    Idempotence,
    /// Reducers are F_q-linear.
    Linearity,
    /// `δ·b` and `b·δ` reduce to the same class.
    ClassAction,
    /// Distinct reduced classes in Ext¹(E, C) have non-split difference.
    Canonical,
    /// The tangent-level solver: zero residual, or none on a constant term.
    Lie,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Cocycle,
        Suite::InnerCocycle,
        Suite::Split,
        Suite::TAction,
        Suite::Soundness,
        Suite::Idempotence,
        Suite::Linearity,
        Suite::ClassAction,
        Suite::Canonical,
        Suite::Lie,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::InnerCocycle => "inner-cocycle",
            Suite::Split => "split",
            Suite::TAction => "t-action",
            Suite::Soundness => "soundness",
            Suite::Idempotence => "idempotence",
            Suite::Linearity => "linearity",
            Suite::ClassAction => "class-action",
            Suite::Canonical => "canonical",
            Suite::Lie => "lie",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub message: String,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

type Outcome = std::result::Result<(), (String, Value)>;

fn fail(msg: impl Into<String>, instance: Value) -> Outcome {
    Err((msg.into(), instance))
}

fn engine<T>(r: Result<T>, instance: &Value) -> std::result::Result<T, (String, Value)> {
    r.map_err(|e| (format!("engine error: {e}"), instance.clone()))
}

fn bider_json(d: &Biderivation) -> Value {
    serde_json::to_value(BiderivationJson::encode(d)).expect("serializable")
}

fn poly_json(b: &FqPoly, fq: &Fq) -> Value {
    json!(b.0.iter().map(|&c| fq.format_element(c)).collect::<Vec<_>>())
}

/// A random pair of modules: a Drinfeld module and C, two Drinfeld modules,
/// or two Carlitz tensor powers.
fn module_pair(rng: &mut ChaCha8Rng, fq: &Fq) -> (TModule, TModule) {
    match rng.gen_range(0..3) {
        0 => {
            let r = rng.gen_range(2..=3);
            (random::drinfeld(rng, fq, r).as_tmodule().clone(), DrinfeldModule::carlitz(fq).as_tmodule().clone())
        }
        1 => {
            let (r, s) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let e = random::drinfeld(rng, fq, r);
            let f = random::drinfeld(rng, fq, s);
            (e.as_tmodule().clone(), f.as_tmodule().clone())
        }
        _ => {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=3);
            (carlitz_tensor(fq, m).unwrap(), carlitz_tensor(fq, n).unwrap())
        }
    }
}

fn random_bider(rng: &mut ChaCha8Rng, fq: &Fq, source: TModule, target: TModule, max_deg: usize) -> Biderivation {
    let v = random::skew_matrix(rng, fq, target.dim(), source.dim(), max_deg);
    Biderivation::new(source, target, v).expect("shapes agree")
}

fn cocycle_holds(d: &Biderivation, a: &FqPoly, b: &FqPoly, fq: &Fq) -> Result<bool> {
    let ab = a.mul(b, fq);
    let lhs = d.eval(&ab);
    let rhs = d.target().phi_eval(a).mul(&d.eval(b))?.add(&d.eval(a).mul(&d.source().phi_eval(b))?)?;
    Ok(lhs == rhs)
}

fn trial_cocycle(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let (e, f) = module_pair(rng, fq);
    let d = random_bider(rng, fq, e, f, 2);
    let a = random::fq_poly(rng, fq, 1);
    let b = random::fq_poly(rng, fq, 1);
    let inst = json!({"delta": bider_json(&d), "a": poly_json(&a, fq), "b": poly_json(&b, fq)});
    if !engine(cocycle_holds(&d, &a, &b, fq), &inst)? {
        return fail("δ(ab) ≠ Ψ(a)δ(b) + δ(a)Φ(b)", inst);
    }
    Ok(())
}

fn trial_inner_cocycle(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let (e, f) = module_pair(rng, fq);
    let u = random::skew_matrix(rng, fq, f.dim(), e.dim(), 2);
    let a = random::fq_poly(rng, fq, 1);
    let b = random::fq_poly(rng, fq, 1);
    let inst = json!({"u": encode_matrix(&u), "a": poly_json(&a, fq), "b": poly_json(&b, fq)});
    let d = engine(Biderivation::inner(&u, &e, &f), &inst)?;
    if !engine(cocycle_holds(&d, &a, &b, fq), &inst)? {
        return fail("inner biderivation violates the cocycle law", inst);
    }
    let direct = engine(u.mul(&e.phi_eval(&a)).and_then(|x| x.sub(&f.phi_eval(&a).mul(&u)?)), &inst)?;
    if d.eval(&a) != direct {
        return fail("δ_U(a) ≠ UΦ(a) - Ψ(a)U", inst);
    }
    Ok(())
}

fn trial_split(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let (e, f) = module_pair(rng, fq);
    let u = random::skew_matrix(rng, fq, f.dim(), e.dim(), 2);
    let inst = json!({"u": encode_matrix(&u)});
    let d = engine(Biderivation::inner(&u, &e, &f), &inst)?;
    if !engine(d.split_check(&u), &inst)? {
        return fail("split_check(inner(U), U) is false", inst);
    }
    Ok(())
}

fn trial_t_action(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let (e, f) = module_pair(rng, fq);
    let d = random_bider(rng, fq, e, f, 2);
    let b = random::fq_poly(rng, fq, 2);
    let inst = json!({"delta": bider_json(&d), "b": poly_json(&b, fq)});
    let diff = engine(d.t_action_right(&b).sub(&d.t_action_left(&b)), &inst)?;
    let inner = engine(Biderivation::inner(&d.eval(&b), d.source(), d.target()), &inst)?;
    if diff != inner {
        return fail("δ·b - b·δ ≠ inner(δ(b))", inst);
    }
    Ok(())
}

/// One of the three reduction problems, with the τ-degree of random inputs.
struct Reducer {
    kind: Kind,
    max_deg: usize,
}

enum Kind {
    EVsC(DrinfeldModule),
    DualVsC(DrinfeldModule),
    Carlitz(usize, usize),
}

impl Reducer {
    /// With `full_range` false, ranks are 2..=3, tensor shapes (m, m+1) with
    /// m <= 2, and inputs of smaller degree, for suites that multiply by Φ(b).
    /// Reduced coordinates can reach θ-degree q^(τ-degree of the input), so
    /// these sizes are what keeps a trial in the millisecond range.
    fn random(rng: &mut ChaCha8Rng, fq: &Fq, full_range: bool) -> Reducer {
        let rank = if full_range { random::rank(rng) } else { rng.gen_range(2..=3) };
        let (kind, max_deg) = match rng.gen_range(0..3) {
            0 => (Kind::EVsC(random::drinfeld(rng, fq, rank)), if full_range { rank + 2 } else { rank }),
            1 if full_range => (Kind::DualVsC(random::monic_drinfeld(rng, fq, rank)), if rank < 5 { 2 } else { 1 }),
            1 if rank == 2 => (Kind::DualVsC(random::monic_drinfeld(rng, fq, rank)), 2),
            1 => (Kind::DualVsC(random::monic_drinfeld(rng, fq, rank)), 0),
            _ if full_range => {
                let m = rng.gen_range(1..=3);
                (Kind::Carlitz(m, m + rng.gen_range(1..=2)), if m < 3 { 2 } else { 1 })
            }
            _ => {
                let m = rng.gen_range(1..=2);
                (Kind::Carlitz(m, m + 1), 1)
            }
        };
        Reducer { kind, max_deg }
    }

    fn modules(&self, fq: &Fq) -> (TModule, TModule) {
        let c = DrinfeldModule::carlitz(fq).as_tmodule().clone();
        match &self.kind {
            Kind::EVsC(e) => (e.as_tmodule().clone(), c),
            Kind::DualVsC(e) => (dual_tmodule(e).expect("rank >= 2").dual, c),
            Kind::Carlitz(m, n) => (carlitz_tensor(fq, *m).unwrap(), carlitz_tensor(fq, *n).unwrap()),
        }
    }

    fn input(&self, rng: &mut ChaCha8Rng, fq: &Fq) -> Biderivation {
        let (e, f) = self.modules(fq);
        random_bider(rng, fq, e, f, self.max_deg)
    }

    fn reduce(&self, d: &Biderivation) -> Result<Certificate> {
        Ok(match &self.kind {
            Kind::EVsC(e) => reduce_vs_carlitz(e, d)?.certificate(),
            Kind::DualVsC(e) => reduce_dual_c(e, d)?.certificate(),
            Kind::Carlitz(m, n) => reduce_carlitz(*m, *n, d)?.certificate(),
        })
    }

    fn name(&self) -> &'static str {
        match self.kind {
            Kind::EVsC(_) => "e-vs-c",
            Kind::DualVsC(_) => "dual-vs-c",
            Kind::Carlitz(..) => "carlitz",
        }
    }
}

fn reducer_instance(r: &Reducer, d: &Biderivation) -> Value {
    json!({"reducer": r.name(), "delta": bider_json(d)})
}

fn trial_soundness(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let r = Reducer::random(rng, fq, true);
    let d = r.input(rng, fq);
    let inst = reducer_instance(&r, &d);
    let cert = engine(r.reduce(&d), &inst)?;
    if !cert.check {
        return fail("input - reduced ≠ inner(witness)", inst);
    }
    Ok(())
}

fn trial_idempotence(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let r = Reducer::random(rng, fq, true);
    let d = r.input(rng, fq);
    let inst = reducer_instance(&r, &d);
    let once = engine(r.reduce(&d), &inst)?.reduced;
    let twice = engine(r.reduce(&once), &inst)?.reduced;
    if once != twice {
        return fail("reduce(reduce(δ)) ≠ reduce(δ)", inst);
    }
    Ok(())
}

fn trial_linearity(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let r = Reducer::random(rng, fq, false);
    let d1 = r.input(rng, fq);
    let d2 = r.input(rng, fq);
    let c = random::fq_element(rng, fq);
    let inst = json!({
        "reducer": r.name(),
        "delta1": bider_json(&d1),
        "delta2": bider_json(&d2),
        "c": fq.format_element(c),
    });
    let sum = engine(d1.baer_sum(&d2), &inst)?;
    let r1 = engine(r.reduce(&d1), &inst)?.reduced;
    let r2 = engine(r.reduce(&d2), &inst)?.reduced;
    if engine(r.reduce(&sum), &inst)?.reduced != engine(r1.baer_sum(&r2), &inst)? {
        return fail("reduce(δ1 + δ2) ≠ reduce(δ1) + reduce(δ2)", inst);
    }
    if engine(r.reduce(&d1.scale_fq(c)), &inst)?.reduced != r1.scale_fq(c) {
        return fail("reduce(cδ) ≠ c reduce(δ)", inst);
    }
    Ok(())
}

fn trial_class_action(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let r = Reducer::random(rng, fq, false);
    let d = r.input(rng, fq);
    let b = random::fq_poly(rng, fq, 2);
    let inst = json!({"reducer": r.name(), "delta": bider_json(&d), "b": poly_json(&b, fq)});
    let right = engine(r.reduce(&d.t_action_right(&b)), &inst)?.reduced;
    let left = engine(r.reduce(&d.t_action_left(&b)), &inst)?.reduced;
    if right != left {
        return fail("δ·b and b·δ reduce to different classes", inst);
    }
    Ok(())
}

/// Two distinct reduced representatives `Σ_{i<r} b_i τ^i` for a random E of
/// rank 2 or 3, returned as their difference.
pub fn distinct_reduced_pair(rng: &mut ChaCha8Rng, fq: &Fq, rank: usize) -> (DrinfeldModule, Biderivation) {
    let e = random::drinfeld(rng, fq, rank);
    let c = DrinfeldModule::carlitz(fq).as_tmodule().clone();
    loop {
        let x = random::skew_poly(rng, fq, rank - 1);
        let y = random::skew_poly(rng, fq, rank - 1);
        if x != y {
            let diff = SkewMatrix::from_rows(fq, vec![vec![&x - &y]]).expect("1x1");
            return (e.clone(), Biderivation::new(e.as_tmodule().clone(), c, diff).expect("1x1"));
        }
    }
}

fn trial_canonical(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let rank = rng.gen_range(2..=3);
    let (_, d) = distinct_reduced_pair(rng, fq, rank);
    let inst = json!({"difference": bider_json(&d)});
    match engine(find_splitting(&d, rank + 3), &inst)? {
        None => Ok(()),
        Some(u) => fail(format!("difference of distinct reduced classes splits via {:?}", encode_matrix(&u)), inst),
    }
}

fn trial_lie(rng: &mut ChaCha8Rng, fq: &Fq) -> Outcome {
    let c = DrinfeldModule::carlitz(fq).as_tmodule().clone();
    let v = SkewMatrix::from_rows(fq, vec![vec![random::skew_poly_no_constant(rng, fq, 5)]]).expect("1x1");
    let inst = json!({"v": encode_matrix(&v)});
    match engine(lie_inner_solve(&c, &c, &v), &inst)? {
        Some(u) if engine(lie_inner_value(&u, &c, &c), &inst)? == v => {}
        _ => return fail("no exact solution for a value without constant term", inst),
    }
    let k = random::nonzero_k(rng, fq);
    let with_constant = v.add(&SkewMatrix::from_k(&crate::skew::KMatrix::from_rows(fq, vec![vec![k]]).unwrap()));
    let with_constant = engine(with_constant, &inst)?;
    let inst = json!({"v": encode_matrix(&with_constant)});
    if engine(lie_inner_solve(&c, &c, &with_constant), &inst)?.is_some() {
        return fail("solution reported despite a nonzero constant term", inst);
    }
    Ok(())
}

fn trial_fn(suite: Suite) -> fn(&mut ChaCha8Rng, &Fq) -> Outcome {
    match suite {
        Suite::Cocycle => trial_cocycle,
        Suite::InnerCocycle => trial_inner_cocycle,
        Suite::Split => trial_split,
        Suite::TAction => trial_t_action,
        Suite::Soundness => trial_soundness,
        Suite::Idempotence => trial_idempotence,
        Suite::Linearity => trial_linearity,
        Suite::ClassAction => trial_class_action,
        Suite::Canonical => trial_canonical,
        Suite::Lie => trial_lie,
    }
}

/// Runs `trials` trials of a suite. The seed stream of each suite is offset
/// by its position so suites do not share instances.
pub fn run_suite(suite: Suite, fq: &Fq, seed: u64, trials: u64) -> SuiteReport {
    let check = trial_fn(suite);
    let offset = (suite as u64) << 32;
    let failure = (0..trials).into_par_iter().find_map_first(|t| {
        let mut rng = random::trial_rng(seed, offset + t);
        check(&mut rng, fq).err().map(|(message, instance)| Failure { trial: t, message, instance })
    });
    SuiteReport { suite: suite.name().into(), seed, trials, passed: failure.is_none(), failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), Suite::ALL.len());
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        let fq = Fq::prime(3).unwrap();
        for s in Suite::ALL {
            let report = run_suite(s, &fq, 11, 4);
            assert!(report.passed, "{s}: {:?}", report.failure);
        }
    }
}
