//! Ideals of a finitely presented ring `Q[x_1..x_n]/K` and the operations on
//! them: sums, products, powers, intersections, colons, membership, and the
//! passage to the localization at the origin.
//!
//! An [`Ideal`] is a cheap shared handle. It stores the preimage generators
//! of the ideal (reduced modulo `K`) and lazily caches its Gröbner bases,
//! local data and powers.

mod cache;
mod linear;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;

pub use cache::{CacheStats, GbCache};
pub use linear::echelonize;

use crate::groebner::{buchberger, minimize_monomials, GbConfig, GbError, ReducedGb};
use crate::poly::{parse_polynomial, Monomial, MonomialOrder, ParseError, Polynomial, Rational};

pub const DEFAULT_LOCAL_CAP: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error(transparent)]
    Groebner(#[from] GbError),
    #[error("ideals live in different rings")]
    ContextMismatch,
    #[error("colon by the zero ideal")]
    ZeroDivisorIdeal,
    #[error("ideal has no finite colength at the origin (no stabilization up to exponent {cap})")]
    InfiniteLocalColength { cap: u32 },
}

#[derive(Debug, Clone)]
pub struct RingConfig {
    pub gb: GbConfig,
    /// Largest power of the maximal ideal tried when stabilizing a local part.
    pub local_cap: u32,
    /// Use direct combinatorics for monomial ideals instead of Buchberger.
    pub monomial_shortcuts: bool,
    pub cache: Option<Arc<GbCache>>,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig { gb: GbConfig::default(), local_cap: DEFAULT_LOCAL_CAP, monomial_shortcuts: true, cache: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct RingStats {
    pub groebner_runs: u64,
    pub cache: CacheStats,
}

/// The ring `Q[vars]/K`. Cloning shares the underlying data.
#[derive(Clone)]
pub struct RingContext(Arc<ContextInner>);

struct ContextInner {
    names: Vec<String>,
    presentation: Vec<Polynomial>,
    presentation_gb: ReducedGb,
    dimension: usize,
    config: RingConfig,
    groebner_runs: AtomicU64,
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext").field("vars", &self.0.names).field("presentation", &self.0.presentation).finish()
    }
}

const GREVLEX: MonomialOrder = MonomialOrder::GrevLex;

impl RingContext {
    /// The polynomial ring on `names`.
    pub fn polynomial_ring(names: Vec<String>) -> Self {
        Self::new(names, Vec::new(), RingConfig::default()).expect("a polynomial ring needs no Gröbner computation")
    }

    pub fn new(names: Vec<String>, presentation: Vec<Polynomial>, config: RingConfig) -> Result<Self, IdealError> {
        let n = names.len();
        let presentation: Vec<Polynomial> = presentation.into_iter().map(|p| p.with_order(GREVLEX)).filter(|p| !p.is_zero()).collect();
        for p in &presentation {
            if p.nvars() != n {
                return Err(GbError::Arity { expected: n, found: p.nvars() }.into());
            }
        }
        let groebner_runs = AtomicU64::new(0);
        let presentation_gb = if presentation.is_empty() {
            ReducedGb::from_reduced_basis(n, GREVLEX, Vec::new())
        } else {
            cached_groebner(&names, &[], &presentation, GREVLEX, &config, &groebner_runs)?
        };
        let dimension = presentation_gb.krull_dimension();
        Ok(RingContext(Arc::new(ContextInner { names, presentation, presentation_gb, dimension, config, groebner_runs })))
    }

    /// The quotient of this ring by the extra relations.
    pub fn quotient_by(&self, extra: &[Polynomial]) -> Result<RingContext, IdealError> {
        let mut presentation = self.0.presentation.clone();
        presentation.extend(extra.iter().cloned());
        RingContext::new(self.0.names.clone(), presentation, self.0.config.clone())
    }

    pub fn with_config(&self, config: RingConfig) -> Result<RingContext, IdealError> {
        RingContext::new(self.0.names.clone(), self.0.presentation.clone(), config)
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn presentation(&self) -> &[Polynomial] {
        &self.0.presentation
    }

    pub fn presentation_gb(&self) -> &ReducedGb {
        &self.0.presentation_gb
    }

    /// Krull dimension of the ring.
    pub fn dimension(&self) -> usize {
        self.0.dimension
    }

    pub fn config(&self) -> &RingConfig {
        &self.0.config
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.0.presentation.is_empty()
    }

    pub fn stats(&self) -> RingStats {
        RingStats {
            groebner_runs: self.0.groebner_runs.load(Ordering::Relaxed),
            cache: self.0.config.cache.as_ref().map(|c| c.stats()).unwrap_or_default(),
        }
    }

    pub fn same_ring(&self, other: &RingContext) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.names == other.0.names && self.0.presentation_gb == other.0.presentation_gb)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, ParseError> {
        parse_polynomial(text, &self.0.names, GREVLEX)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), GREVLEX, i)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars(), GREVLEX)
    }

    /// Normal form modulo the presentation ideal.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        if self.is_polynomial_ring() {
            f.with_order(GREVLEX)
        } else {
            self.0.presentation_gb.normal_form(f)
        }
    }

    pub fn ideal(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal::new(self, gens)
    }

    pub fn parse_ideal(&self, gens: &[&str]) -> Result<Ideal, ParseError> {
        let polys = gens.iter().map(|g| self.parse(g)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.ideal(polys))
    }

    pub fn zero_ideal(&self) -> Ideal {
        self.ideal(Vec::new())
    }

    pub fn unit_ideal(&self) -> Ideal {
        self.ideal(vec![self.one()])
    }

    /// The ideal generated by the variables.
    pub fn maximal_ideal(&self) -> Ideal {
        self.ideal((0..self.nvars()).map(|i| self.var(i)).collect())
    }

    /// Reduced Gröbner basis of `gens + K` in `order`, through the disk cache.
    fn groebner(&self, gens: &[Polynomial], order: MonomialOrder) -> Result<ReducedGb, IdealError> {
        let k: Vec<Polynomial> = self.0.presentation_gb.basis().to_vec();
        cached_groebner(&self.0.names, &k, gens, order, &self.0.config, &self.0.groebner_runs)
    }

    fn shortcuts(&self) -> bool {
        self.0.config.monomial_shortcuts && self.is_polynomial_ring()
    }
}

fn cached_groebner(
    names: &[String],
    presentation: &[Polynomial],
    gens: &[Polynomial],
    order: MonomialOrder,
    config: &RingConfig,
    runs: &AtomicU64,
) -> Result<ReducedGb, IdealError> {
    let key = config.cache.as_ref().map(|_| GbCache::key(names, presentation, gens, order));
    if let (Some(cache), Some(key)) = (&config.cache, &key) {
        if let Some(gb) = cache.load(key, names, order) {
            return Ok(gb);
        }
    }
    let mut all: Vec<Polynomial> = presentation.iter().map(|p| p.with_order(order)).collect();
    all.extend(gens.iter().map(|p| p.with_order(order)));
    runs.fetch_add(1, Ordering::Relaxed);
    let gb = buchberger(&all, order, names.len(), &config.gb)?;
    if let (Some(cache), Some(key)) = (&config.cache, &key) {
        cache.store(key, names, &gb);
    }
    Ok(gb)
}

/// Shared handle to an ideal of a [`RingContext`].
#[derive(Clone)]
pub struct Ideal(Arc<IdealInner>);

struct IdealInner {
    ctx: RingContext,
    gens: Vec<Polynomial>,
    monomial: bool,
    gbs: Mutex<BTreeMap<MonomialOrder, Arc<ReducedGb>>>,
    local: OnceLock<Result<LocalData, IdealError>>,
    exponent: OnceLock<Result<u32, IdealError>>,
    powers: Mutex<Vec<Ideal>>,
}

#[derive(Clone)]
struct LocalData {
    /// `None` when the ideal already equals its local part.
    representative: Option<Ideal>,
    colength: u64,
    /// Set when the slow path found the stabilization exponent on the way.
    exponent: Option<u32>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.0.ctx.names();
        write!(f, "[")?;
        for (i, g) in self.0.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display(names))?;
        }
        write!(f, "]")
    }
}

impl Ideal {
    /// The ideal generated by `gens`. Generators are reduced modulo the
    /// presentation and brought into a linearly independent, monic form.
    pub fn new(ctx: &RingContext, gens: Vec<Polynomial>) -> Ideal {
        let reduced: Vec<Polynomial> = gens.iter().map(|g| ctx.reduce(g)).filter(|g| !g.is_zero()).collect();
        let monomial = ctx.shortcuts() && reduced.iter().all(|g| g.is_monomial());
        let gens = if reduced.iter().any(|g| g.is_constant()) {
            vec![ctx.one()]
        } else if monomial {
            let ms = minimize_monomials(reduced.iter().map(|g| g.leading_monomial().unwrap().clone()).collect());
            ms.into_iter().map(|m| Polynomial::from_monomial(GREVLEX, Rational::one(), m)).collect()
        } else {
            echelonize(reduced)
        };
        let monomial = monomial || (ctx.shortcuts() && gens.iter().all(|g| g.is_monomial()));
        Ideal(Arc::new(IdealInner {
            ctx: ctx.clone(),
            gens,
            monomial,
            gbs: Mutex::new(BTreeMap::new()),
            local: OnceLock::new(),
            exponent: OnceLock::new(),
            powers: Mutex::new(Vec::new()),
        }))
    }

    pub fn context(&self) -> &RingContext {
        &self.0.ctx
    }

    /// Preimage generators, not including the presentation relations.
    pub fn gens(&self) -> &[Polynomial] {
        &self.0.gens
    }

    pub fn is_monomial(&self) -> bool {
        self.0.monomial
    }

    /// Same generators viewed in another ring on the same variables.
    pub fn transfer(&self, ctx: &RingContext) -> Ideal {
        Ideal::new(ctx, self.0.gens.clone())
    }

    fn check(&self, other: &Ideal) -> Result<(), IdealError> {
        if self.0.ctx.same_ring(&other.0.ctx) {
            Ok(())
        } else {
            Err(IdealError::ContextMismatch)
        }
    }

    fn monomials(&self) -> Vec<Monomial> {
        self.0.gens.iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
    }

    fn from_monomials(ctx: &RingContext, ms: Vec<Monomial>) -> Ideal {
        let gens = ms.into_iter().map(|m| Polynomial::from_monomial(GREVLEX, Rational::one(), m)).collect();
        Ideal::new(ctx, gens)
    }

    /// Reduced Gröbner basis of the preimage (generators plus presentation).
    pub fn gb(&self) -> Result<Arc<ReducedGb>, IdealError> {
        self.gb_in(GREVLEX)
    }

    pub fn gb_in(&self, order: MonomialOrder) -> Result<Arc<ReducedGb>, IdealError> {
        if let Some(gb) = self.0.gbs.lock().unwrap().get(&order) {
            return Ok(gb.clone());
        }
        let ctx = &self.0.ctx;
        let gb = if self.0.monomial {
            ReducedGb::from_monomials(ctx.nvars(), order, &self.monomials())
        } else {
            ctx.groebner(&self.0.gens, order)?
        };
        let gb = Arc::new(gb);
        self.0.gbs.lock().unwrap().entry(order).or_insert_with(|| gb.clone());
        Ok(gb)
    }

    pub fn is_zero(&self) -> bool {
        self.0.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool, IdealError> {
        Ok(self.gb()?.is_unit())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, IdealError> {
        Ok(self.gb()?.contains(f))
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, IdealError> {
        Ok(self.gb()?.normal_form(f))
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Ideal) -> Result<bool, IdealError> {
        self.check(other)?;
        let gb = other.gb()?;
        Ok(self.0.gens.iter().all(|g| gb.contains(g)))
    }

    /// Equality as ideals.
    pub fn equals(&self, other: &Ideal) -> Result<bool, IdealError> {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ok(true);
        }
        self.check(other)?;
        Ok(self.gb()?.basis() == other.gb()?.basis())
    }

    pub fn dimension(&self) -> Result<usize, IdealError> {
        Ok(self.gb()?.krull_dimension())
    }

    /// Vector space dimension of the quotient by this ideal.
    pub fn colength(&self) -> Result<u64, IdealError> {
        Ok(self.gb()?.count_standard_monomials()?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let mut gens = self.0.gens.clone();
        gens.extend(other.0.gens.iter().cloned());
        Ok(Ideal::new(&self.0.ctx, gens))
    }

    /// `self + (f)`.
    pub fn add_element(&self, f: &Polynomial) -> Ideal {
        let mut gens = self.0.gens.clone();
        gens.push(f.clone());
        Ideal::new(&self.0.ctx, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let ctx = &self.0.ctx;
        if self.0.monomial && other.0.monomial {
            let a = self.monomials();
            let b = other.monomials();
            let prods = a.iter().flat_map(|m| b.iter().map(move |n| m.mul(n))).collect();
            return Ok(Ideal::from_monomials(ctx, minimize_monomials(prods)));
        }
        let mut gens = Vec::with_capacity(self.0.gens.len() * other.0.gens.len());
        for f in &self.0.gens {
            for g in &other.0.gens {
                gens.push(f * g);
            }
        }
        Ok(Ideal::new(ctx, gens))
    }

    /// `f * self`.
    pub fn scale_by(&self, f: &Polynomial) -> Ideal {
        Ideal::new(&self.0.ctx, self.0.gens.iter().map(|g| g * f).collect())
    }

    /// `self^n`, with `self^0` the unit ideal. Powers are cached on the handle.
    pub fn power(&self, n: u32) -> Result<Ideal, IdealError> {
        match n {
            0 => return Ok(self.0.ctx.unit_ideal()),
            1 => return Ok(self.clone()),
            _ => {}
        }
        let idx = (n - 2) as usize;
        loop {
            let (have, base) = {
                let powers = self.0.powers.lock().unwrap();
                if let Some(p) = powers.get(idx) {
                    return Ok(p.clone());
                }
                (powers.len(), powers.last().cloned().unwrap_or_else(|| self.clone()))
            };
            let next = base.product(self)?;
            let mut powers = self.0.powers.lock().unwrap();
            // another thread may have extended the list meanwhile
            if powers.len() == have {
                powers.push(next);
            }
        }
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        let ctx = &self.0.ctx;
        if self.0.monomial && other.0.monomial {
            let a = self.monomials();
            let b = other.monomials();
            let lcms = a.iter().flat_map(|m| b.iter().map(move |n| m.lcm(n))).collect();
            return Ok(Ideal::from_monomials(ctx, minimize_monomials(lcms)));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(ctx.zero_ideal());
        }
        let k = ctx.presentation_gb().basis();
        let mut a = self.0.gens.clone();
        a.extend(k.iter().cloned());
        let mut b = other.0.gens.clone();
        b.extend(k.iter().cloned());
        Ok(Ideal::new(ctx, intersect_gens(ctx, &a, &b)?))
    }

    /// `(self : other)`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check(other)?;
        if other.is_zero() {
            return Err(IdealError::ZeroDivisorIdeal);
        }
        let ctx = &self.0.ctx;
        if self.0.monomial && other.0.monomial {
            let a = self.monomials();
            let mut acc: Option<Vec<Monomial>> = None;
            for b in other.monomials() {
                let q = minimize_monomials(a.iter().map(|m| m.quotient_by_gcd(&b)).collect());
                acc = Some(match acc {
                    None => q,
                    Some(prev) => minimize_monomials(prev.iter().flat_map(|m| q.iter().map(move |n| m.lcm(n))).collect()),
                });
            }
            return Ok(Ideal::from_monomials(ctx, acc.unwrap()));
        }
        let mut acc: Option<Ideal> = None;
        for b in &other.0.gens {
            let q = self.colon_element(b)?;
            acc = Some(match acc {
                None => q,
                Some(prev) => prev.intersect(&q)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// `(self : f)`.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Ideal, IdealError> {
        let ctx = &self.0.ctx;
        let f = ctx.reduce(f);
        if f.is_zero() {
            return Err(IdealError::ZeroDivisorIdeal);
        }
        if self.0.monomial && f.is_monomial() {
            return self.colon(&Ideal::new(ctx, vec![f]));
        }
        if self.contains(&f)? {
            return Ok(ctx.unit_ideal());
        }
        // (A + K : f) = ((A + K) ∩ (f)) / f in the polynomial ring
        let mut a = self.0.gens.clone();
        a.extend(ctx.presentation_gb().basis().iter().cloned());
        let meet = intersect_gens(ctx, &a, std::slice::from_ref(&f))?;
        let quotients = meet.iter().map(|g| g.divide_exact(&f).expect("intersection with (f) is divisible by f")).collect();
        Ok(Ideal::new(ctx, quotients))
    }

    /// Local part at the origin: an ideal with the same localization whose
    /// zero set is the origin, together with the stabilization exponent,
    /// the least `N` with `m^N` inside the localization.
    pub fn local_part(&self) -> Result<(Ideal, u32), IdealError> {
        let data = self.local_data()?;
        let rep = data.representative.clone().unwrap_or_else(|| self.clone());
        Ok((rep, self.local_exponent()?))
    }

    /// Length of `R_m / I_m` where `m` is the ideal of the origin.
    pub fn local_colength(&self) -> Result<u64, IdealError> {
        Ok(self.local_data()?.colength)
    }

    /// True iff the ideal has finite colength at the origin.
    pub fn is_locally_primary(&self) -> Result<bool, IdealError> {
        match self.local_data() {
            Ok(_) => Ok(true),
            Err(IdealError::InfiniteLocalColength { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn local_rep(&self) -> Result<Ideal, IdealError> {
        Ok(self.local_data()?.representative.clone().unwrap_or_else(|| self.clone()))
    }

    /// Membership of `f` in the localization at the origin. Requires finite
    /// local colength.
    pub fn local_contains(&self, f: &Polynomial) -> Result<bool, IdealError> {
        self.local_rep()?.contains(f)
    }

    /// `self ⊆ other` after localizing; `other` must have finite local colength.
    pub fn local_leq(&self, other: &Ideal) -> Result<bool, IdealError> {
        self.check(other)?;
        let rep = other.local_rep()?;
        let gb = rep.gb()?;
        Ok(self.0.gens.iter().all(|g| gb.contains(g)))
    }

    /// Equality after localizing, for ideals of finite local colength.
    pub fn local_equals(&self, other: &Ideal) -> Result<bool, IdealError> {
        self.check(other)?;
        if self.local_colength()? != other.local_colength()? {
            return Ok(false);
        }
        self.local_leq(other)
    }

    fn local_data(&self) -> Result<LocalData, IdealError> {
        self.0.local.get_or_init(|| self.compute_local()).clone()
    }

    fn compute_local(&self) -> Result<LocalData, IdealError> {
        let gb = self.gb()?;
        if gb.is_unit() {
            return Ok(LocalData { representative: None, colength: 0, exponent: Some(0) });
        }
        if !gb.is_zero_dimensional() && self.is_homogeneous_with_presentation() {
            // a positive-dimensional cone through the origin
            return Err(IdealError::InfiniteLocalColength { cap: self.0.ctx.config().local_cap });
        }
        if gb.is_zero_dimensional() && self.supported_at_origin(&gb)? {
            let colength = gb.count_standard_monomials()?;
            return Ok(LocalData { representative: None, colength, exponent: None });
        }
        self.stabilize()
    }

    fn is_homogeneous_with_presentation(&self) -> bool {
        self.0.gens.iter().chain(self.0.ctx.presentation().iter()).all(|g| g.is_homogeneous())
    }

    /// For a zero-dimensional ideal: whether the origin is its only zero,
    /// i.e. every variable is nilpotent modulo it.
    fn supported_at_origin(&self, gb: &ReducedGb) -> Result<bool, IdealError> {
        let ctx = &self.0.ctx;
        if self.is_homogeneous_with_presentation() {
            return Ok(true);
        }
        let bound = gb.count_standard_monomials()?;
        for i in 0..ctx.nvars() {
            let x = ctx.var(i);
            let mut p = gb.normal_form(&x);
            let mut k = 1;
            while !p.is_zero() {
                if k > bound {
                    return Ok(false);
                }
                p = gb.normal_form(&(&p * &x));
                k += 1;
            }
        }
        Ok(true)
    }

    /// Adds powers of the maximal ideal until the colength stops growing.
    fn stabilize(&self) -> Result<LocalData, IdealError> {
        let ctx = &self.0.ctx;
        let cap = ctx.config().local_cap;
        let mut prev: Option<(Ideal, u64)> = None;
        for n in 1..=cap + 1 {
            let mut gens = self.0.gens.clone();
            gens.extend(monomials_of_degree(ctx.nvars(), n).into_iter().map(|m| Polynomial::from_monomial(GREVLEX, Rational::one(), m)));
            let candidate = Ideal::new(ctx, gens);
            let c = candidate.colength()?;
            if let Some((rep, pc)) = prev.take() {
                if pc == c {
                    return Ok(LocalData { representative: Some(rep), colength: c, exponent: Some(n - 1) });
                }
            }
            prev = Some((candidate, c));
        }
        Err(IdealError::InfiniteLocalColength { cap })
    }

    /// Least `N` with `m^N` contained in the localization.
    pub fn local_exponent(&self) -> Result<u32, IdealError> {
        self.0.exponent.get_or_init(|| self.compute_exponent()).clone()
    }

    fn compute_exponent(&self) -> Result<u32, IdealError> {
        let data = self.local_data()?;
        if let Some(n) = data.exponent {
            return Ok(n);
        }
        // the ideal is supported at the origin: iterate V_{k+1} = m * V_k in the quotient
        let ctx = &self.0.ctx;
        let gb = self.gb()?;
        let cap = ctx.config().local_cap;
        let mut layer = echelonize(vec![gb.normal_form(&ctx.one())]);
        let mut n = 0;
        while !layer.is_empty() {
            if n >= cap {
                return Err(IdealError::InfiniteLocalColength { cap });
            }
            let mut next = Vec::with_capacity(layer.len() * ctx.nvars());
            for v in &layer {
                for i in 0..ctx.nvars() {
                    next.push(gb.normal_form(&(v * &ctx.var(i))));
                }
            }
            layer = echelonize(next);
            n += 1;
        }
        Ok(n)
    }
}

/// All monomials of total degree `d` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(var: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var + 1 == cur.len() {
            cur[var] = left;
            out.push(Monomial::from_exponents(cur));
            cur[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    rec(0, d, &mut cur, &mut out);
    out
}

/// Generators of `(a) ∩ (b)` in the polynomial ring, by eliminating `t` from
/// `t*(a) + (1-t)*(b)`.
fn intersect_gens(ctx: &RingContext, a: &[Polynomial], b: &[Polynomial]) -> Result<Vec<Polynomial>, IdealError> {
    let n = ctx.nvars();
    let order = MonomialOrder::Elimination { block: 1 };
    let t = Polynomial::var(n + 1, order, 0);
    let one_minus_t = &Polynomial::one(n + 1, order) - &t;
    let mut gens = Vec::with_capacity(a.len() + b.len());
    gens.extend(a.iter().map(|f| &t * &f.embed(n + 1, 1, order)));
    gens.extend(b.iter().map(|g| &one_minus_t * &g.embed(n + 1, 1, order)));
    ctx.0.groebner_runs.fetch_add(1, Ordering::Relaxed);
    let gb = buchberger(&gens, order, n + 1, &ctx.config().gb)?;
    Ok(gb.basis().iter().filter(|p| p.involves_only_vars_from(1)).map(|p| p.drop_leading_vars(1, GREVLEX)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> RingContext {
        RingContext::polynomial_ring(vars.iter().map(|s| s.to_string()).collect())
    }

    fn general(vars: &[&str]) -> RingContext {
        let cfg = RingConfig { monomial_shortcuts: false, ..RingConfig::default() };
        RingContext::new(vars.iter().map(|s| s.to_string()).collect(), Vec::new(), cfg).unwrap()
    }

    fn id(ctx: &RingContext, gens: &[&str]) -> Ideal {
        ctx.parse_ideal(gens).unwrap()
    }

    #[test]
    fn intersection_of_coordinate_axes() {
        for ctx in [ring(&["x", "y"]), general(&["x", "y"])] {
            let i = id(&ctx, &["x"]).intersect(&id(&ctx, &["y"])).unwrap();
            assert!(i.equals(&id(&ctx, &["x*y"])).unwrap());
        }
    }

    #[test]
    fn colon_examples() {
        for ctx in [ring(&["x", "y"]), general(&["x", "y"])] {
            let c = id(&ctx, &["x^2", "x*y"]).colon(&id(&ctx, &["x"])).unwrap();
            assert!(c.equals(&id(&ctx, &["x", "y"])).unwrap());
        }
        let ctx = ring(&["x", "y"]);
        let c = id(&ctx, &["x^2 - y^3", "x*y"]).colon_element(&ctx.parse("y").unwrap()).unwrap();
        let expect = id(&ctx, &["x", "y^3"]);
        assert!(c.equals(&expect).unwrap(), "{c}");
    }

    #[test]
    fn colon_by_member_is_unit() {
        let ctx = general(&["x", "y"]);
        let c = id(&ctx, &["x", "y"]).colon(&id(&ctx, &["x"])).unwrap();
        assert!(c.is_unit().unwrap());
        assert!(matches!(id(&ctx, &["x"]).colon(&ctx.zero_ideal()), Err(IdealError::ZeroDivisorIdeal)));
    }

    #[test]
    fn powers_and_products() {
        let ctx = ring(&["x", "y"]);
        let m = ctx.maximal_ideal();
        let m2 = m.power(2).unwrap();
        assert!(m2.equals(&id(&ctx, &["x^2", "x*y", "y^2"])).unwrap());
        assert_eq!(m.power(3).unwrap().colength().unwrap(), 6);
        assert!(m.power(0).unwrap().is_unit().unwrap());
        let g = general(&["x", "y"]);
        let gm = g.maximal_ideal();
        assert_eq!(gm.power(4).unwrap().colength().unwrap(), 10);
        assert_eq!(gm.power(4).unwrap().gens().len(), 5);
    }

    #[test]
    fn local_part_drops_other_points() {
        let ctx = ring(&["x"]);
        let i = id(&ctx, &["x*(x-1)"]);
        let (loc, n) = i.local_part().unwrap();
        assert!(loc.equals(&id(&ctx, &["x"])).unwrap());
        assert_eq!(n, 1);
        assert_eq!(i.local_colength().unwrap(), 1);
        assert_eq!(i.colength().unwrap(), 2);
        assert!(i.local_contains(&ctx.parse("x").unwrap()).unwrap());
        assert!(!i.contains(&ctx.parse("x").unwrap()).unwrap());
    }

    #[test]
    fn local_part_in_two_variables() {
        let ctx = ring(&["x", "y"]);
        // (y - x^2, x^3 - x) meets the origin with multiplicity one and two other points
        let i = id(&ctx, &["y - x^2", "x^3 - x"]);
        assert_eq!(i.colength().unwrap(), 3);
        assert_eq!(i.local_colength().unwrap(), 1);
        let j = id(&ctx, &["y^2 - x^3", "x^4"]);
        assert_eq!(j.local_colength().unwrap(), j.colength().unwrap());
        assert_eq!(j.local_exponent().unwrap(), 5);
    }

    #[test]
    fn local_part_of_non_primary_ideal_fails() {
        let ctx = ring(&["x", "y"]);
        let cfg = RingConfig { local_cap: 8, ..RingConfig::default() };
        let ctx = ctx.with_config(cfg).unwrap();
        assert!(matches!(id(&ctx, &["x"]).local_colength(), Err(IdealError::InfiniteLocalColength { cap: 8 })));
        assert!(!id(&ctx, &["x"]).is_locally_primary().unwrap());
        // supported away from the origin: the local ring is zero
        assert_eq!(id(&ctx, &["x - 1", "y"]).local_colength().unwrap(), 0);
    }

    #[test]
    fn stabilization_exponent_of_monomial_ideals() {
        let ctx = ring(&["x", "y"]);
        assert_eq!(id(&ctx, &["x^2", "y^3"]).local_exponent().unwrap(), 4);
        assert_eq!(ctx.maximal_ideal().power(3).unwrap().local_exponent().unwrap(), 3);
        assert_eq!(ctx.unit_ideal().local_exponent().unwrap(), 0);
    }

    #[test]
    fn quotient_ring_operations() {
        let base = ring(&["x", "y"]);
        let ctx = base.quotient_by(&[base.parse("x*y").unwrap()]).unwrap();
        assert_eq!(ctx.dimension(), 1);
        let m = ctx.maximal_ideal();
        // colength of m^n in Q[x,y]/(xy) is 2n-1
        assert_eq!(m.power(3).unwrap().colength().unwrap(), 5);
        let c = ctx.zero_ideal().colon_element(&ctx.parse("x").unwrap()).unwrap();
        assert!(c.equals(&id(&ctx, &["y"])).unwrap());
        let i = id(&ctx, &["x"]).intersect(&id(&ctx, &["y"])).unwrap();
        assert!(i.is_zero() || i.equals(&ctx.zero_ideal()).unwrap());
    }

    #[test]
    fn local_equality_and_containment() {
        let ctx = ring(&["x", "y"]);
        let a = id(&ctx, &["x^2", "y"]);
        let b = id(&ctx, &["x^2*(x-1)", "y"]);
        assert!(!a.equals(&b).unwrap());
        assert!(a.local_equals(&b).unwrap());
        assert!(b.local_leq(&a).unwrap());
        assert!(a.local_leq(&b).unwrap());
    }

    #[test]
    fn contexts_must_match() {
        let a = ring(&["x", "y"]);
        let b = ring(&["u", "v"]);
        assert!(matches!(a.maximal_ideal().sum(&b.maximal_ideal()), Err(IdealError::ContextMismatch)));
    }

    #[test]
    fn generators_are_echelonized() {
        let ctx = general(&["x", "y"]);
        let i = id(&ctx, &["x + y", "x - y", "2*x"]);
        assert_eq!(i.gens().len(), 2);
        assert!(i.equals(&ctx.maximal_ideal()).unwrap());
    }

    #[test]
    fn monomials_of_degree_counts() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(1, 7).len(), 1);
        assert_eq!(monomials_of_degree(2, 0).len(), 1);
    }

    #[test]
    fn cache_round_trip_through_context() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Arc::new(GbCache::open(dir.path()).unwrap());
        let cfg = RingConfig { cache: Some(cache.clone()), ..RingConfig::default() };
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let ctx = RingContext::new(names.clone(), Vec::new(), cfg.clone()).unwrap();
        let i = id(&ctx, &["x^2 - y^3", "x*y - 1"]);
        let first = i.gb().unwrap();
        let ctx2 = RingContext::new(names, Vec::new(), cfg).unwrap();
        let second = id(&ctx2, &["x^2 - y^3", "x*y - 1"]).gb().unwrap();
        assert_eq!(first.basis(), second.basis());
        assert_eq!(cache.stats().hits, 1);
        assert_eq!(ctx2.stats().groebner_runs, 0);
    }
}
