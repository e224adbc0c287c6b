//! Numeric invariants of an m-primary ideal `I` with a reduction `J`:
//! lengths of quotients, minimal generator counts, reduction numbers, the
//! length-sum families and the Hilbert series of `G(I)` and `F(I)`.
//!
//! Every length is a difference of local colengths.

mod series;
mod sums;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

pub use series::{default_window, g_function, hilbert_coefficients, hilbert_series_f, hilbert_series_f_window, hilbert_series_g, hilbert_series_g_window, HilbertSeries};
pub use sums::{length_sum, Family, LengthTable};

use crate::ideal::{Ideal, IdealError, RingContext};
use crate::poly::Polynomial;

pub const DEFAULT_REDUCTION_CAP: u32 = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("{sub} is not contained in {sup} after localizing")]
    NotASubmodule { sub: String, sup: String },
    #[error("J is not a reduction of I within reduction cap {cap}")]
    NotAReduction { cap: u32 },
    #[error("Hilbert series of {target} does not terminate within window {window}")]
    WindowTooSmall { target: &'static str, window: u32 },
    #[error("{family} term at n = {index} is {value}; it must vanish")]
    SafetyTermNonzero { family: Family, index: u32, value: u64 },
    #[error("I is not primary to the maximal ideal")]
    NotPrimary,
}

/// `λ(R/A)` in the local ring at the origin.
pub fn colength_local(a: &Ideal) -> Result<u64, InvariantError> {
    Ok(a.local_colength()?)
}

/// `λ(A/B)` for `B ⊆ A` locally.
pub fn length_quotient(a: &Ideal, b: &Ideal) -> Result<u64, InvariantError> {
    if !b.local_leq(a)? {
        return Err(InvariantError::NotASubmodule { sub: b.to_string(), sup: a.to_string() });
    }
    Ok(b.local_colength()? - a.local_colength()?)
}

/// Minimal number of generators of `A` after localizing: `λ(A/mA)`.
pub fn mingens(a: &Ideal) -> Result<u64, InvariantError> {
    let ma = a.context().maximal_ideal().product(a)?;
    Ok(ma.local_colength()? - a.local_colength()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    /// Reduction number: least `n` with `I^{n+1} = J I^n`.
    pub r: u32,
    /// m-reduction number: least `n` with `m I^{n+1} = m J I^n`.
    pub rm: u32,
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Piece {
    MI(u32),
    JI(u32),
    MJi(u32),
    IMeetJ(u32),
    MIMeetJ(u32),
    FiberDenominator(u32),
}

/// A pair `(I, J)` together with memoized ideals built from it:
/// `m I^n`, `J I^n`, `m J I^n`, `I^n ∩ J`, `m I^n ∩ J`, `J I^{n-1} + m I^n`.
pub struct Blowup {
    ctx: RingContext,
    i: Ideal,
    j: Ideal,
    m: Ideal,
    j_gens: Vec<Polynomial>,
    memo: Mutex<HashMap<Piece, Ideal>>,
}

impl Blowup {
    /// Checks that `I` is m-primary and `J ⊆ I` after localizing. The
    /// generators of `J` are kept as given for element searches.
    pub fn new(i: &Ideal, j_gens: Vec<Polynomial>) -> Result<Blowup, InvariantError> {
        let ctx = i.context().clone();
        let j = Ideal::new(&ctx, j_gens.clone());
        if !i.is_locally_primary()? || i.local_colength()? == 0 {
            return Err(InvariantError::NotPrimary);
        }
        if !j.local_leq(i)? {
            return Err(InvariantError::NotASubmodule { sub: j.to_string(), sup: i.to_string() });
        }
        let m = ctx.maximal_ideal();
        let j_gens = j_gens.into_iter().map(|g| ctx.reduce(&g)).filter(|g| !g.is_zero()).collect();
        Ok(Blowup { ctx, i: i.clone(), j, m, j_gens, memo: Mutex::new(HashMap::new()) })
    }

    pub fn from_ideals(i: &Ideal, j: &Ideal) -> Result<Blowup, InvariantError> {
        Blowup::new(i, j.gens().to_vec())
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn i(&self) -> &Ideal {
        &self.i
    }

    pub fn j(&self) -> &Ideal {
        &self.j
    }

    pub fn m(&self) -> &Ideal {
        &self.m
    }

    /// Generators of `J` as supplied, reduced modulo the presentation.
    pub fn j_gens(&self) -> &[Polynomial] {
        &self.j_gens
    }

    pub fn dimension(&self) -> u32 {
        self.ctx.dimension() as u32
    }

    /// The same pair in the quotient ring by `x`.
    pub fn modulo(&self, x: &Polynomial) -> Result<Blowup, InvariantError> {
        let ctx = self.ctx.quotient_by(std::slice::from_ref(x))?;
        Blowup::new(&self.i.transfer(&ctx), self.j_gens.clone())
    }

    fn piece(&self, key: Piece, build: impl FnOnce() -> Result<Ideal, InvariantError>) -> Result<Ideal, InvariantError> {
        if let Some(found) = self.memo.lock().unwrap().get(&key) {
            return Ok(found.clone());
        }
        let built = build()?;
        Ok(self.memo.lock().unwrap().entry(key).or_insert(built).clone())
    }

    pub fn i_pow(&self, n: u32) -> Result<Ideal, InvariantError> {
        Ok(self.i.power(n)?)
    }

    /// `m I^n`.
    pub fn m_i_pow(&self, n: u32) -> Result<Ideal, InvariantError> {
        self.piece(Piece::MI(n), || Ok(self.m.product(&self.i_pow(n)?)?))
    }

    /// `J I^n`.
    pub fn j_i_pow(&self, n: u32) -> Result<Ideal, InvariantError> {
        self.piece(Piece::JI(n), || Ok(self.j.product(&self.i_pow(n)?)?))
    }

    /// `m J I^n`.
    pub fn m_j_i_pow(&self, n: u32) -> Result<Ideal, InvariantError> {
        self.piece(Piece::MJi(n), || Ok(self.m.product(&self.j_i_pow(n)?)?))
    }

    /// `I^n ∩ J`.
    pub fn i_pow_meet_j(&self, n: u32) -> Result<Ideal, InvariantError> {
        self.piece(Piece::IMeetJ(n), || Ok(self.i_pow(n)?.intersect(&self.j)?))
    }

    /// `m I^n ∩ J`.
    pub fn m_i_pow_meet_j(&self, n: u32) -> Result<Ideal, InvariantError> {
        self.piece(Piece::MIMeetJ(n), || Ok(self.m_i_pow(n)?.intersect(&self.j)?))
    }

    /// `J I^{n-1} + m I^n` for `n ≥ 1`.
    pub fn fiber_denominator(&self, n: u32) -> Result<Ideal, InvariantError> {
        assert!(n >= 1);
        self.piece(Piece::FiberDenominator(n), || Ok(self.j_i_pow(n - 1)?.sum(&self.m_i_pow(n)?)?))
    }

    /// `λ(A/B)` for ideals known to satisfy `B ⊆ A`; no containment check.
    pub(crate) fn nested_length(a: &Ideal, b: &Ideal) -> Result<u64, InvariantError> {
        Ok(b.local_colength()? - a.local_colength()?)
    }

    /// Number of minimal generators of `I^n`.
    pub fn mingens_i_pow(&self, n: u32) -> Result<u64, InvariantError> {
        Self::nested_length(&self.i_pow(n)?, &self.m_i_pow(n)?)
    }

    /// `λ(I^n / (J I^{n-1} + m I^n))`, with the value 1 at `n = 0`.
    pub fn fiber_quotient_length(&self, n: u32) -> Result<u64, InvariantError> {
        if n == 0 {
            return Ok(1);
        }
        Self::nested_length(&self.i_pow(n)?, &self.fiber_denominator(n)?)
    }
}

/// Reduction number and m-reduction number by ascending search up to `cap`.
pub fn reduction_data(bl: &Blowup, cap: u32) -> Result<ReductionData, InvariantError> {
    if !bl.j.is_locally_primary()? {
        return Err(InvariantError::NotAReduction { cap });
    }
    let mut r = None;
    for n in 0..=cap {
        // J I^n ⊆ I^{n+1}, so equal colengths mean equal ideals
        if bl.i_pow(n + 1)?.local_colength()? == bl.j_i_pow(n)?.local_colength()? {
            r = Some(n);
            break;
        }
    }
    let r = r.ok_or(InvariantError::NotAReduction { cap })?;
    let mut rm = r;
    for n in 0..r {
        if bl.m_i_pow(n + 1)?.local_colength()? == bl.m_j_i_pow(n)?.local_colength()? {
            rm = n;
            break;
        }
    }
    Ok(ReductionData { r, rm, cap })
}

/// True iff `J` is minimally generated by `dim R` elements, the analytic
/// spread of an m-primary ideal.
pub fn minimal_reduction_check(bl: &Blowup) -> Result<bool, InvariantError> {
    Ok(mingens(&bl.j)? == bl.ctx.dimension() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> RingContext {
        RingContext::polynomial_ring(vars.iter().map(|s| s.to_string()).collect())
    }

    fn pair(ctx: &RingContext, i: &[&str], j: &[&str]) -> Blowup {
        let i = ctx.parse_ideal(i).unwrap();
        let j = j.iter().map(|g| ctx.parse(g).unwrap()).collect();
        Blowup::new(&i, j).unwrap()
    }

    #[test]
    fn colengths_and_generators() {
        let ctx = ring(&["x", "y", "z"]);
        let m = ctx.maximal_ideal();
        assert_eq!(colength_local(&m).unwrap(), 1);
        assert_eq!(mingens(&m).unwrap(), 3);
        let r2 = ring(&["x", "y"]);
        assert_eq!(colength_local(&r2.maximal_ideal().power(2).unwrap()).unwrap(), 3);
        let redundant = r2.parse_ideal(&["x", "y", "x + y", "x^2"]).unwrap();
        assert_eq!(mingens(&redundant).unwrap(), 2);
    }

    #[test]
    fn length_quotient_checks_containment() {
        let ctx = ring(&["x", "y"]);
        let m = ctx.maximal_ideal();
        let m2 = m.power(2).unwrap();
        assert_eq!(length_quotient(&m, &m2).unwrap(), 2);
        assert_eq!(length_quotient(&m, &m).unwrap(), 0);
        assert!(matches!(length_quotient(&m2, &m), Err(InvariantError::NotASubmodule { .. })));
    }

    #[test]
    fn reduction_numbers_of_small_pairs() {
        let ctx = ring(&["x", "y"]);
        let same = pair(&ctx, &["x", "y"], &["x", "y"]);
        assert_eq!(reduction_data(&same, 25).unwrap(), ReductionData { r: 0, rm: 0, cap: 25 });
        // (x^2, y^2) reduces m^2 with r = 1, and m J = m^3 already
        let p = pair(&ctx, &["x^2", "x*y", "y^2"], &["x^2", "y^2"]);
        let red = reduction_data(&p, 25).unwrap();
        assert_eq!((red.r, red.rm), (1, 0));
        assert!(minimal_reduction_check(&p).unwrap());
        let not = pair(&ctx, &["x^2", "x*y", "y^2"], &["x^2"]);
        assert!(matches!(reduction_data(&not, 5), Err(InvariantError::NotAReduction { cap: 5 })));
    }

    #[test]
    fn pieces_are_memoized() {
        let ctx = ring(&["x", "y"]);
        let p = pair(&ctx, &["x^2", "x*y", "y^2"], &["x^2", "y^2"]);
        let a = p.m_j_i_pow(2).unwrap();
        let b = p.m_j_i_pow(2).unwrap();
        assert!(std::sync::Arc::ptr_eq(&a.gb().unwrap(), &b.gb().unwrap()));
        assert_eq!(p.mingens_i_pow(3).unwrap(), 7);
        assert_eq!(p.fiber_quotient_length(0).unwrap(), 1);
        assert_eq!(p.fiber_quotient_length(1).unwrap(), 1);
    }

    #[test]
    fn rejects_non_primary_ideal() {
        let ctx = ring(&["x", "y"]);
        let i = ctx.parse_ideal(&["x"]).unwrap();
        assert!(matches!(Blowup::new(&i, vec![ctx.parse("x").unwrap()]), Err(InvariantError::NotPrimary)));
    }
}
