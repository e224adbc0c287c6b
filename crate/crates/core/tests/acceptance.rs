//! Acceptance checks: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use blowup::criteria::{check_o_regular, check_star_regular, CmVerdict, CzVerdict, Target};
use blowup::invariants::Family;
use blowup::session::corpus::CORPUS;
use blowup::session::{parse_session, run_session, Analysis, RunConfig};
use common::{check_additivity, check_identities, check_monomial_case, corpus_analysis, deterministic_runner, monomial_case, CORPUS_NAMES};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn term(an: &Analysis, family: Family, n: u32) -> Result<u64, String> {
    Ok(an.table(family).map_err(err)?.term(n))
}

fn three_quadrics() -> Outcome {
    let an = corpus_analysis("three_quadrics");
    let bl = &an.blowup;
    let red = an.reduction().map_err(err)?;
    ensure!(red.r == 2, "reduction number {}", red.r);
    let cube = bl.i_pow(3).map_err(err)?;
    ensure!(cube.local_equals(&bl.j_i_pow(2).map_err(err)?).map_err(err)?, "I^3 != J I^2");
    ensure!(term(&an, Family::FC2, 0)? == 1, "λ(mI/mJ) = {}", term(&an, Family::FC2, 0)?);
    ensure!(term(&an, Family::FC2, 1)? == 0, "mI^2 != mJI");
    ensure!(red.rm == 1, "m-reduction number {}", red.rm);
    let f = an.depth(Target::F).map_err(err)?;
    ensure!(f.lower_bound >= 1, "depth F lower bound {}", f.lower_bound);
    Ok(format!("r = 2, rm = 1, λ(mI/mJ) = 1, depth F >= {} via {}", f.lower_bound, f.sequence[0].element))
}

fn quotient_surface() -> Outcome {
    let an = corpus_analysis("quotient_surface");
    let bl = &an.blowup;
    ensure!(bl.dimension() == 2, "dimension {}", bl.dimension());
    ensure!(term(&an, Family::FC2, 0)? == 2, "λ(mI/mJ) = {}", term(&an, Family::FC2, 0)?);
    ensure!(term(&an, Family::FC1, 1)? == 1, "λ(mI^2∩J/mJI) = {}", term(&an, Family::FC1, 1)?);
    let fc1 = an.table(Family::FC1).map_err(err)?;
    ensure!(fc1.total_from(2) == 0, "FC1 terms from n = 2 sum to {}", fc1.total_from(2));
    ensure!(term(&an, Family::FC2, 1)? == 1, "λ(mI^2/mJI) = {}", term(&an, Family::FC2, 1)?);
    ensure!(term(&an, Family::VV, 2)? == 0, "I^2∩J != JI");
    let vv = an.valabrega_valla().map_err(err)?;
    ensure!(vv.holds, "VV fails at {:?}", vv.failing);
    ensure!(an.cm_g().map_err(err)?.verdict == CmVerdict::Cm, "G not certified CM");
    ensure!(an.cortadellas_zarzuela().map_err(err)? == CzVerdict::NotCm, "CZ verdict is not notCM");
    let u = bl.context().parse("U").map_err(err)?;
    let ev = check_o_regular(bl, &u, an.nmax().map_err(err)?).map_err(err)?;
    ensure!(ev.regular, "U^o not regular: {:?}", ev.equality_checks);
    let f = an.depth(Target::F).map_err(err)?;
    ensure!(f.lower_bound == 1 && f.cm_flag == CmVerdict::NotCm, "depth F lower bound {} with {}", f.lower_bound, f.cm_flag.as_str());
    Ok("dim 2, VV holds, CZ notCM, U^o regular, depth F = 1".into())
}

fn cubic_monomials() -> Outcome {
    let an = corpus_analysis("cubic_monomials");
    let bl = &an.blowup;
    let red = an.reduction().map_err(err)?;
    ensure!(red.r == 2 && red.rm == 2, "r = {}, rm = {}", red.r, red.rm);
    ensure!(term(&an, Family::FC1, 1)? == 1, "λ(mI^2∩J/mJI) = {}", term(&an, Family::FC1, 1)?);
    let vv = an.valabrega_valla().map_err(err)?;
    ensure!(!vv.holds && vv.failing.first() == Some(&2), "VV failures {:?}", vv.failing);
    let g = an.series_g().map_err(err)?;
    ensure!(g.numerator == [15, 6, 6] && g.denominator_exponent == 3, "H(G) numerator {:?} over (1-t)^{}", g.numerator, g.denominator_exponent);
    let nmax = an.nmax().map_err(err)?;
    let ctx = bl.context();
    let (x3, y3) = (ctx.parse("x^3").map_err(err)?, ctx.parse("y^3").map_err(err)?);
    let first = check_star_regular(bl, &x3, nmax).map_err(err)?;
    ensure!(first.regular, "x^3 not star-regular");
    let second = check_star_regular(&bl.modulo(&x3).map_err(err)?, &y3, nmax).map_err(err)?;
    ensure!(second.regular, "y^3 not star-regular modulo x^3");
    let depth = an.depth(Target::G).map_err(err)?;
    ensure!(depth.lower_bound >= 2, "depth G lower bound {}", depth.lower_bound);
    let fiber = an.fiber_test().map_err(err)?;
    ensure!(fiber.verdict == CmVerdict::Cm && fiber.e0 == 9 && fiber.sum == 9 && fiber.terms[0] == 1, "fiber test {fiber:?}");
    Ok(format!("H(G) = (15+6t+6t^2)/(1-t)^3, x^3, y^3 star-regular, e0(F) = 9 = {}", fiber.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" + ")))
}

fn plane_quintics() -> Outcome {
    let an = corpus_analysis("plane_quintics");
    let bl = &an.blowup;
    let red = an.reduction().map_err(err)?;
    ensure!(red.r == 4, "reduction number {}", red.r);
    ensure!(bl.i_pow(5).map_err(err)?.local_equals(&bl.j_i_pow(4).map_err(err)?).map_err(err)?, "I^5 != J I^4");
    ensure!(term(&an, Family::FC1, 1)? == 1, "λ(mI^2∩J/mJI) = {}", term(&an, Family::FC1, 1)?);
    let fc2 = an.table(Family::FC2).map_err(err)?;
    ensure!(fc2.total_from(2) == 0, "FC2 terms from n = 2 sum to {}", fc2.total_from(2));
    let g = an.series_g().map_err(err)?;
    ensure!(g.numerator == [18, 6, 0, 0, 1] && g.denominator_exponent == 2, "H(G) numerator {:?} over (1-t)^{}", g.numerator, g.denominator_exponent);
    let x = bl.context().parse("x^5 + y^5").map_err(err)?;
    ensure!(check_star_regular(bl, &x, an.nmax().map_err(err)?).map_err(err)?.regular, "x^5+y^5 not star-regular");
    let fiber = an.fiber_test().map_err(err)?;
    ensure!(fiber.verdict == CmVerdict::NotCm, "fiber test says CM");
    let c3 = fiber.comparisons.iter().find(|c| c.n == 3).ok_or("no comparison at n = 3")?;
    ensure!(c3.mu == 11 && c3.weighted == 13, "μ(I^3) = {} against {}", c3.mu, c3.weighted);
    let f = an.depth(Target::F).map_err(err)?;
    ensure!(f.lower_bound == 1 && f.upper_bound(2) == 1, "depth F bounds {}..={}", f.lower_bound, f.upper_bound(2));
    Ok("I^5 = JI^4, H(G) = (18+6t+t^4)/(1-t)^2, μ(I^3) = 11 < 13, depth F = 1".into())
}

fn monomial_oracle() -> Outcome {
    let cases = 240;
    deterministic_runner(cases).run(&monomial_case(), |case| check_monomial_case(&case).map_err(proptest::test_runner::TestCaseError::fail)).map_err(err)?;
    Ok(format!("{cases} random monomial instances agree with the lattice oracles"))
}

fn invariant_identities() -> Outcome {
    for name in CORPUS_NAMES {
        check_identities(name)?;
        check_additivity(name, 4)?;
    }
    Ok(format!("{} corpus instances", CORPUS_NAMES.len()))
}

fn determinism() -> Outcome {
    for entry in &CORPUS {
        let session = parse_session(entry.text).map_err(|e| format!("{}: {e:?}", entry.name))?;
        let mut outputs = Vec::new();
        for jobs in [1, 4] {
            let dir = tempfile::tempdir().map_err(err)?;
            let config = RunConfig { cache_dir: Some(dir.path().to_path_buf()), jobs: Some(jobs), ..RunConfig::default() };
            for state in ["cold", "warm"] {
                let report = run_session(&session, &config).map_err(err)?;
                let cache = report.stats.cache.unwrap_or_default();
                ensure!((state == "warm") == (cache.misses == 0), "{}: {state} run at jobs {jobs} had {} cache misses", entry.name, cache.misses);
                outputs.push(serde_json::to_string_pretty(&report.deterministic_json()).map_err(err)?);
            }
        }
        ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "{}: reports differ between cache states or job counts", entry.name);
    }
    Ok(format!("{} sessions, cold and warm cache, jobs 1 and 4", CORPUS.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("three quadrics", three_quadrics),
        ("quotient surface", quotient_surface),
        ("cubic monomials", cubic_monomials),
        ("plane quintics", plane_quintics),
        ("monomial oracle equivalence", monomial_oracle),
        ("invariant identities", invariant_identities),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
