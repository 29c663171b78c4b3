//! One line per acceptance criterion. Expected values are assembled here
//! from closed forms, independently of the engine's reducers.

use std::time::Instant;

use drinfeld_ext::ext::{
    bidual_tmodule, carlitz_ext_structure, dual_morphism, dual_tmodule, find_splitting, lie_inner_solve,
    normalize_leading,
};
use drinfeld_ext::field::{Fq, KElement};
use drinfeld_ext::random::{self, trial_rng};
use drinfeld_ext::skew::{SkewMatrix, SkewPoly};
use drinfeld_ext::tmodule::{carlitz_tensor, DrinfeldModule, TModuleMorphism};
use drinfeld_ext::biderivation::Biderivation;
use drinfeld_ext::verify::{run_suite, Suite};
use rand::Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(fq: &Fq, coeffs: Vec<KElement>) -> SkewPoly {
    SkewPoly::from_coeffs(fq, coeffs)
}

fn zero(fq: &Fq) -> KElement {
    KElement::zero(fq)
}

/// Π(t) of Ext¹(E, C) written down from the closed form.
fn closed_form_pi(e: &DrinfeldModule) -> SkewMatrix {
    let fq = e.field();
    let r = e.rank();
    let theta = KElement::theta(fq);
    let tau = SkewPoly::tau(fq);
    let ar = e.a(r);
    let ratio = |i: usize| -(&e.a(i).div(&ar).unwrap());
    let mut m = SkewMatrix::zeros(fq, r, r);
    for i in 0..r {
        m.set(i, i, SkewPoly::from_k(theta.clone()));
        if i + 1 < r {
            m.set(i + 1, i, tau.clone());
        }
    }
    let last = r - 1;
    let row_one_tau2 = ar.frobenius(1).inv().unwrap();
    if r == 2 {
        m.set(1, 1, poly(fq, vec![theta.clone(), ratio(1), row_one_tau2]));
        return m;
    }
    m.set(1, last, poly(fq, vec![zero(fq), ratio(1), row_one_tau2]));
    for j in 2..last {
        m.set(j, last, poly(fq, vec![zero(fq), ratio(j)]));
    }
    m.set(last, last, poly(fq, vec![theta, ratio(last)]));
    m
}

fn criterion_1() -> Check {
    for q in [2u64, 3, 4] {
        let fq = Fq::of_order(q).unwrap();
        for r in 2..=5usize {
            for trial in 0..20 {
                let mut rng = trial_rng(100 + q, (r * 100 + trial) as u64);
                let e = random::drinfeld(&mut rng, &fq, r);
                let pi = dual_tmodule(&e).map_err(|err| err.to_string())?.pi;
                ensure(pi.phi_t() == &closed_form_pi(&e), || format!("q={q} r={r} trial {trial}: {e:?}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        let theta = SkewPoly::from_k(KElement::theta(&fq));
        for r in 2..=5usize {
            for trial in 0..20 {
                let mut rng = trial_rng(200 + q, (r * 100 + trial) as u64);
                let e = random::monic_drinfeld(&mut rng, &fq, r);
                let d = dual_tmodule(&e).map_err(|err| err.to_string())?;
                let pi = d.pi.phi_t();
                let mut col = vec![SkewPoly::zero(&fq); r];
                col[0] = theta.clone();
                col[1] = SkewPoly::tau(&fq);
                let first: Vec<SkewPoly> = (0..r).map(|i| pi.get(i, 0).clone()).collect();
                ensure(first == col, || format!("column 1, q={q} r={r} trial {trial}"))?;
                let expected = closed_form_pi(&e).block(1..r, 1..r);
                ensure(d.dual.phi_t() == &expected, || format!("E^∨ block, q={q} r={r} trial {trial}"))?;
                ensure((1..r).all(|j| pi.get(0, j).is_zero()), || format!("row 1, q={q} r={r} trial {trial}"))?;
            }
        }
    }
    Ok(())
}

/// α_n = Σ_{f=0}^{r-n-1} a_{r-f} τ^{r-n-f} with the coefficients on the left.
fn alpha(e: &DrinfeldModule, n: usize) -> SkewPoly {
    let fq = e.field();
    let r = e.rank();
    (0..r - n).fold(SkewPoly::zero(fq), |acc, f| {
        acc.add(&SkewPoly::monomial(fq, e.a(r - f), r - n - f))
    })
}

fn criterion_3() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        let theta = SkewPoly::from_k(KElement::theta(&fq));
        for r in 2..=4usize {
            for trial in 0..20 {
                let mut rng = trial_rng(300 + q, (r * 100 + trial) as u64);
                let e = random::monic_drinfeld(&mut rng, &fq, r);
                let xi = bidual_tmodule(&e).map_err(|err| err.to_string())?;
                let mut expected = SkewMatrix::zeros(&fq, r, r);
                for i in 0..r - 1 {
                    expected.set(i, i, theta.clone());
                    expected.set(r - 1, i, alpha(&e, i + 1));
                }
                expected.set(r - 1, r - 1, e.phi_t().clone());
                ensure(xi.phi_t() == &expected, || format!("q={q} r={r} trial {trial}: {e:?}"))?;
                ensure(xi.phi_t().get(r - 1, r - 1) == e.phi_t(), || "α_r ≠ Φ(t)".into())?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        for (m, n) in [(1usize, 2usize), (1, 3), (2, 3), (2, 5), (3, 7)] {
            let pi = carlitz_ext_structure(&fq, m, n).map_err(|err| err.to_string())?;
            let mut expected = SkewMatrix::zeros(&fq, n, n);
            for i in 0..n {
                expected.set(i, i, SkewPoly::from_k(KElement::theta(&fq)));
                if i + 1 < n {
                    expected.set(i, i + 1, SkewPoly::one(&fq));
                }
            }
            let corner = expected.get(n - m - 1, 0).add(&SkewPoly::tau(&fq));
            expected.set(n - m - 1, 0, corner);
            ensure(pi.phi_t() == &expected, || format!("q={q} (m,n)=({m},{n})"))?;
            let k = n - m;
            let top_left = pi.phi_t().block(0..k, 0..k);
            ensure(&top_left == carlitz_tensor(&fq, k).unwrap().phi_t(), || format!("top-left block ({m},{n})"))?;
        }
        for (m, n) in [(2usize, 2usize), (3, 1), (4, 2)] {
            let r = carlitz_ext_structure(&fq, m, n);
            ensure(matches!(&r, Err(e) if e.is_unsupported()), || format!("({m},{n}) should be unsupported"))?;
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let suites = [
        Suite::Cocycle,
        Suite::InnerCocycle,
        Suite::Split,
        Suite::TAction,
        Suite::Soundness,
        Suite::Idempotence,
        Suite::Linearity,
        Suite::ClassAction,
    ];
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        for s in suites {
            let start = Instant::now();
            let report = run_suite(s, &fq, 2024, 100);
            ensure(report.passed, || format!("q={q} {s}: {:?}", report.failure))?;
            let secs = start.elapsed().as_secs_f64();
            ensure(secs < 60.0, || format!("q={q} {s} took {secs:.1}s"))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        for r in [2usize, 3] {
            let mut rng = trial_rng(600 + q, r as u64);
            let e = random::drinfeld(&mut rng, &fq, r);
            let mut pairs = 0;
            while pairs < 50 {
                let x = random::skew_poly(&mut rng, &fq, r - 1);
                let y = random::skew_poly(&mut rng, &fq, r - 1);
                if x == y {
                    continue;
                }
                pairs += 1;
                let diff = SkewMatrix::from_rows(&fq, vec![vec![&x - &y]]).unwrap();
                let d = Biderivation::new(e.as_tmodule().clone(), c.clone(), diff).unwrap();
                let found = find_splitting(&d, r + 3).map_err(|err| err.to_string())?;
                ensure(found.is_none(), || format!("q={q} r={r}: {x} and {y} are equivalent"))?;
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        let theta = SkewMatrix::from_k(&drinfeld_ext::skew::KMatrix::from_rows(&fq, vec![vec![KElement::theta(&fq)]]).unwrap());
        for trial in 0..50u64 {
            let mut rng = trial_rng(700 + q, trial);
            let ranks = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let e = random::drinfeld(&mut rng, &fq, ranks.0).as_tmodule().clone();
            let f = random::drinfeld(&mut rng, &fq, ranks.1).as_tmodule().clone();
            let v = SkewMatrix::from_rows(&fq, vec![vec![random::skew_poly_no_constant(&mut rng, &fq, 5)]]).unwrap();
            let u = lie_inner_solve(&e, &f, &v).map_err(|err| err.to_string())?;
            let u = u.ok_or_else(|| format!("no solution for {v:?}"))?;
            let residual = u.mul(&theta).unwrap().sub(&theta.mul(&u).unwrap()).unwrap().sub(&v).unwrap();
            ensure(residual.is_zero(), || format!("nonzero residual for q={q} trial {trial}"))?;
            let k = random::nonzero_k(&mut rng, &fq);
            let with_constant = v.add(&SkewMatrix::from_rows(&fq, vec![vec![SkewPoly::from_k(k)]]).unwrap()).unwrap();
            let none = lie_inner_solve(&e, &f, &with_constant).map_err(|err| err.to_string())?;
            ensure(none.is_none(), || format!("solution despite constant term, q={q} trial {trial}"))?;
        }
    }
    Ok(())
}

fn endo(e: &DrinfeldModule, beta: SkewMatrix) -> TModuleMorphism {
    TModuleMorphism::new(beta, e.as_tmodule().clone(), e.as_tmodule().clone()).unwrap()
}

fn is_der0_preserving(m: &SkewMatrix) -> bool {
    (1..m.cols()).all(|j| m.get(0, j).is_zero())
}

fn criterion_8() -> Check {
    for q in [2u64, 3] {
        let fq = Fq::of_order(q).unwrap();
        for r in [2usize, 3] {
            for trial in 0..10u64 {
                let mut rng = trial_rng(800 + q, r as u64 * 100 + trial);
                let e = random::drinfeld(&mut rng, &fq, r);
                let pi = dual_tmodule(&e).unwrap().pi;
                let ctx = || format!("q={q} r={r} trial {trial}");
                let err = |x: drinfeld_ext::Error| x.to_string();

                let id = dual_morphism(&endo(&e, SkewMatrix::identity(&fq, 1))).map_err(err)?;
                ensure(id == SkewMatrix::identity(&fq, r), || format!("identity, {}", ctx()))?;

                let c = random::nonzero_fq(&mut rng, &fq);
                let ck = KElement::from_fq(&fq, c);
                let scalar = SkewMatrix::identity(&fq, 1).scale(&ck);
                let mc = dual_morphism(&endo(&e, scalar.clone())).map_err(err)?;
                ensure(mc == SkewMatrix::identity(&fq, r).scale(&ck), || format!("scalar, {}", ctx()))?;

                let mt = dual_morphism(&endo(&e, e.as_tmodule().phi_t().clone())).map_err(err)?;
                ensure(&mt == pi.phi_t(), || format!("Φ(t), {}", ctx()))?;

                let a = random::fq_poly(&mut rng, &fq, 2);
                let gamma = endo(&e, e.as_tmodule().phi_eval(&a));
                let beta = endo(&e, scalar);
                let mg = dual_morphism(&gamma).map_err(err)?;
                let composite = dual_morphism(&beta.compose(&gamma).unwrap()).map_err(err)?;
                ensure(composite == mg.mul(&mc).unwrap(), || format!("(β∘γ)^∨ ≠ γ^∨β^∨, {}", ctx()))?;
                let reversed = dual_morphism(&gamma.compose(&beta).unwrap()).map_err(err)?;
                ensure(reversed == mc.mul(&mg).unwrap(), || format!("(γ∘β)^∨ ≠ β^∨γ^∨, {}", ctx()))?;

                for m in [&id, &mc, &mt, &mg] {
                    ensure(is_der0_preserving(m), || format!("Der₀ not preserved, {}", ctx()))?;
                    let lhs = m.mul(pi.phi_t()).unwrap();
                    let rhs = pi.phi_t().mul(m).unwrap();
                    ensure(lhs == rhs, || format!("not t-linear, {}", ctx()))?;
                }

                // an isomorphism to a different module: β = c with F = c E c^{-1}
                if let Ok((f, c)) = normalize_leading(&e) {
                    let iso = TModuleMorphism::new(
                        SkewMatrix::identity(&fq, 1).scale(&c),
                        e.as_tmodule().clone(),
                        f.as_tmodule().clone(),
                    )
                    .unwrap();
                    let m = dual_morphism(&iso).map_err(err)?;
                    let pi_f = dual_tmodule(&f).unwrap().pi;
                    ensure(m.mul(pi_f.phi_t()).unwrap() == pi.phi_t().mul(&m).unwrap(), || {
                        format!("isomorphism not t-linear, {}", ctx())
                    })?;
                    ensure(is_der0_preserving(&m), || format!("Der₀ not preserved by isomorphism, {}", ctx()))?;
                }
            }
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 closed-form dual Π(t)", criterion_1),
        ("2 exact-sequence shape", criterion_2),
        ("3 biduality Ξ(t)", criterion_3),
        ("4 Carlitz tensor Ext", criterion_4),
        ("5 property suites", criterion_5),
        ("6 canonicality oracle", criterion_6),
        ("7 Lie-level solver", criterion_7),
        ("8 dual morphisms", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(()) => println!("PASS criterion {name} ({secs:.1}s)"),
            Err(msg) => {
                println!("FAIL criterion {name} ({secs:.1}s): {msg}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
