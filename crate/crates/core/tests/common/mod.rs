//! Shared oracles for the integration tests.
#![allow(dead_code)]

use blowup::ideal::{Ideal, RingConfig, RingContext};
use blowup::poly::{Monomial, Polynomial, Rational};
use blowup::session::corpus::CORPUS;
use blowup::criteria::{CmVerdict, CzVerdict, Observed};
use blowup::invariants::{length_quotient, mingens, Blowup, Family};
use blowup::session::{parse_session, Analysis, RunConfig, Session};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub type Exps = Vec<u32>;

/// A random monomial ideal: variable count and generator exponent vectors.
#[derive(Debug, Clone)]
pub struct MonomialCase {
    pub nvars: usize,
    pub a: Vec<Exps>,
    pub b: Vec<Exps>,
    /// Pure powers added to `a` so that it is m-primary.
    pub powers: Exps,
}

fn exps(nvars: usize) -> impl Strategy<Value = Exps> {
    proptest::collection::vec(0u32..=8, nvars).prop_map(|mut e| {
        let mut budget = 8u32;
        for x in e.iter_mut() {
            *x = (*x).min(budget);
            budget -= *x;
        }
        e
    })
}

pub fn monomial_case() -> impl Strategy<Value = MonomialCase> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(exps(n), 1..=4),
            proptest::collection::vec(exps(n), 1..=3),
            proptest::collection::vec(1u32..=8, n),
        )
            .prop_map(|(nvars, a, b, powers)| MonomialCase { nvars, a, b, powers })
    })
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn in_ideal(gens: &[Exps], m: &[u32]) -> bool {
    gens.iter().any(|g| divides(g, m))
}

/// All exponent vectors of total degree at most `d`.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Exps> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out.into_iter().flat_map(|e: Exps| (0..=d).map(move |k| [e.clone(), vec![k]].concat())).filter(|e| e.iter().sum::<u32>() <= d).collect();
    }
    out
}

pub fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn add(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Number of monomials outside an m-primary monomial ideal.
pub fn oracle_colength(gens: &[Exps], nvars: usize) -> u64 {
    let bound: u32 = (0..nvars).map(|i| gens.iter().filter(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0)).map(|g| g[i]).min().unwrap()).sum();
    monomials_up_to(nvars, bound).iter().filter(|m| !in_ideal(gens, m)).count() as u64
}

/// A polynomial ring whose ideal operations never take monomial shortcuts.
pub fn general_ring(nvars: usize) -> RingContext {
    let names: Vec<String> = ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect();
    RingContext::new(names, Vec::new(), RingConfig { monomial_shortcuts: false, ..RingConfig::default() }).unwrap()
}

pub fn mono(ctx: &RingContext, e: &[u32]) -> Polynomial {
    ctx.one().mul_term(&Rational::from_integer(1.into()), &Monomial::from_exponents(e))
}

pub fn ideal_of(ctx: &RingContext, gens: &[Exps]) -> Ideal {
    ctx.ideal(gens.iter().map(|g| mono(ctx, g)).collect())
}

/// Exponent vectors of the generators of an ideal known to be monomial.
pub fn monomial_gens(ideal: &Ideal) -> Vec<Exps> {
    ideal
        .gb()
        .unwrap()
        .basis()
        .iter()
        .map(|g| {
            assert!(g.is_monomial(), "expected a monomial generator, got {g:?}");
            g.leading_monomial().unwrap().exponents().to_vec()
        })
        .collect()
}

/// `computed` equals the monomial ideal described by the membership
/// predicate, given oracle generators of degree at most `bound`.
pub fn same_monomial_ideal(computed: &Ideal, oracle_gens: &[Exps], member: impl Fn(&[u32]) -> bool) -> Result<(), String> {
    for g in monomial_gens(computed) {
        if !member(&g) {
            return Err(format!("computed generator {g:?} is not in the oracle ideal"));
        }
    }
    let ctx = computed.context();
    for g in oracle_gens {
        if !computed.contains(&mono(ctx, g)).unwrap() {
            return Err(format!("oracle generator {g:?} is missing from the computed ideal"));
        }
    }
    Ok(())
}

/// Checks intersection, colon, product and colength of one case against
/// the exponent-lattice oracles.
pub fn check_monomial_case(case: &MonomialCase) -> Result<(), String> {
    let n = case.nvars;
    let ctx = general_ring(n);
    let a = ideal_of(&ctx, &case.a);
    let b = ideal_of(&ctx, &case.b);

    let meet = a.intersect(&b).map_err(|e| e.to_string())?;
    let meet_gens: Vec<Exps> = case.a.iter().flat_map(|x| case.b.iter().map(move |y| lcm(x, y))).collect();
    same_monomial_ideal(&meet, &meet_gens, |m| in_ideal(&case.a, m) && in_ideal(&case.b, m)).map_err(|e| format!("intersect: {e}"))?;

    let prod = a.product(&b).map_err(|e| e.to_string())?;
    let prod_gens: Vec<Exps> = case.a.iter().flat_map(|x| case.b.iter().map(move |y| add(x, y))).collect();
    same_monomial_ideal(&prod, &prod_gens, |m| in_ideal(&prod_gens, m)).map_err(|e| format!("product: {e}"))?;

    // m ∈ (A : B) iff m·b ∈ A for every generator b; its generators have degree <= 8
    let colon = a.colon(&b).map_err(|e| e.to_string())?;
    let in_colon = |m: &[u32]| case.b.iter().all(|y| in_ideal(&case.a, &add(m, y)));
    let colon_gens: Vec<Exps> = monomials_up_to(n, 8).into_iter().filter(|m| in_colon(m)).collect();
    same_monomial_ideal(&colon, &colon_gens, in_colon).map_err(|e| format!("colon: {e}"))?;

    let mut primary = case.a.clone();
    for (i, &p) in case.powers.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = p;
        primary.push(e);
    }
    let want = oracle_colength(&primary, n);
    let ideal = ideal_of(&ctx, &primary);
    let got = ideal.colength().map_err(|e| e.to_string())?;
    let local = ideal.local_colength().map_err(|e| e.to_string())?;
    if got != want || local != want {
        return Err(format!("colength: oracle {want}, global {got}, local {local}"));
    }
    Ok(())
}

pub fn corpus_sessions() -> Vec<(&'static str, Session)> {
    CORPUS.iter().map(|e| (e.name, parse_session(e.text).unwrap())).collect()
}

pub fn corpus_session(name: &str) -> Session {
    corpus_sessions().into_iter().find(|(n, _)| *n == name).unwrap().1
}

/// The default pair `(I, J)` of a corpus session, ready for analysis.
pub fn corpus_analysis(name: &str) -> Analysis {
    let s = corpus_session(name);
    let ctx = RingContext::new(s.ring.vars.clone(), s.ring.presentation.clone(), RingConfig::default()).unwrap();
    let i = ctx.ideal(s.ideal("I").unwrap().gens.clone());
    let bl = Blowup::new(&i, s.ideal("J").unwrap().gens.clone()).unwrap();
    Analysis::new(bl, RunConfig::default().reduction_cap, None)
}

pub const CORPUS_NAMES: [&str; 4] = ["three_quadrics", "quotient_surface", "cubic_monomials", "plane_quintics"];

/// A runner with a fixed seed, so every run sees the same cases.
pub fn deterministic_runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn combination(an: &Analysis, coeffs: &[i64]) -> Polynomial {
    let ctx = an.blowup.context();
    let mut f = ctx.one().scale(&Rational::from_integer(0.into()));
    for (g, &c) in an.blowup.i().gens().iter().zip(coeffs) {
        f = &f + &g.scale(&Rational::from_integer(c.into()));
    }
    f
}

/// `λ(C/A) = λ(C/B) + λ(B/A)` for `A = mI ⊆ B = A + (f) ⊆ C = B + (g)`
/// with `f, g` random combinations of the generators of `I`.
pub fn check_additivity(name: &str, cases: u32) -> Result<(), String> {
    let an = corpus_analysis(name);
    let a = an.blowup.m_i_pow(1).map_err(|e| e.to_string())?;
    let k = an.blowup.i().gens().len();
    let strategy = (proptest::collection::vec(-2i64..=2, k), proptest::collection::vec(-2i64..=2, k));
    deterministic_runner(cases)
        .run(&strategy, |(cf, cg)| {
            let b = a.add_element(&combination(&an, &cf));
            let c = b.add_element(&combination(&an, &cg));
            let len = |x, y| length_quotient(x, y).map_err(|e| TestCaseError::fail(e.to_string()));
            prop_assert_eq!(len(&c, &a)?, len(&c, &b)? + len(&b, &a)?);
            Ok(())
        })
        .map_err(|e| format!("{name}: {e}"))
}

/// Identities every analysis must satisfy, checked on one corpus instance.
pub fn check_identities(name: &str) -> Result<(), String> {
    let an = corpus_analysis(name);
    identities(&an).map_err(|e| format!("{name}: {e}"))
}

fn identities(an: &Analysis) -> Result<(), String> {
    let bl = &an.blowup;
    let s = |e: &dyn std::fmt::Display| e.to_string();
    let red = an.reduction().map_err(|e| s(&e))?;

    let g = an.series_g().map_err(|e| s(&e))?;
    let f = an.series_f().map_err(|e| s(&e))?;
    let colength = bl.i().local_colength().map_err(|e| s(&e))?;
    ensure!(g.function[0] == colength, "h_G(0) = {} but colength(I) = {colength}", g.function[0]);
    let mu = mingens(bl.i()).map_err(|e| s(&e))?;
    ensure!(f.function[1] == mu, "h_F(1) = {} but mingens(I) = {mu}", f.function[1]);

    let lambda = an.table(Family::LambdaHM).map_err(|e| s(&e))?;
    ensure!(g.e1 <= lambda.total as i64, "e1 = {} exceeds the LambdaHM total {}", g.e1, lambda.total);

    for family in Family::ALL {
        let t = an.table(family).map_err(|e| s(&e))?;
        ensure!(t.safety_index == family.safety_index(&red), "{family}: safety index {}", t.safety_index);
        for n in t.safety_index..=t.safety_index + 1 {
            let v = family.term(bl, n).map_err(|e| s(&e))?;
            ensure!(v == 0, "{family} term at {n} is {v}");
        }
    }

    let vv = an.valabrega_valla().map_err(|e| s(&e))?;
    let delta = an.table(Family::Delta).map_err(|e| s(&e))?.total;
    ensure!(vv.holds == (delta == 0), "VV holds = {} but the Delta total is {delta}", vv.holds);
    let fiber = an.fiber_test().map_err(|e| s(&e))?.verdict;
    match an.cortadellas_zarzuela().map_err(|e| s(&e))? {
        CzVerdict::Cm => ensure!(fiber == CmVerdict::Cm, "CZ says CM, fiber test says {}", fiber.as_str()),
        CzVerdict::NotCm => ensure!(fiber == CmVerdict::NotCm, "CZ says notCM, fiber test says {}", fiber.as_str()),
        CzVerdict::Inapplicable => ensure!(!vv.holds, "CZ inapplicable although VV holds"),
    }

    for v in an.checklist().map_err(|e| s(&e))? {
        ensure!(!(v.hypothesis_holds && v.observed == Observed::RefutedImpossible), "{} is refuted under its hypothesis", v.id);
    }
    Ok(())
}
