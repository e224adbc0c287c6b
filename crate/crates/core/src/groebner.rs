//! Buchberger's algorithm and the staircase combinatorics built on reduced
//! Gröbner bases: normal forms, zero-dimensionality, standard monomials and
//! Krull dimension.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational};

pub const DEFAULT_DEGREE_CAP: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GbError {
    #[error("Gröbner basis computation exceeded the degree cap {cap} (reached degree {degree})")]
    DegreeCapExceeded { cap: u32, degree: u32 },
    #[error("generator has {found} variables, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("the ideal is not zero-dimensional; its staircase is infinite")]
    NotZeroDimensional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    /// Largest total degree a new basis element may have.
    pub degree_cap: u32,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { degree_cap: DEFAULT_DEGREE_CAP }
    }
}

/// Reduced Gröbner basis: monic, auto-reduced, sorted ascending by leading
/// monomial. An empty basis is the zero ideal.
#[derive(Clone, PartialEq, Eq)]
pub struct ReducedGb {
    order: MonomialOrder,
    nvars: usize,
    basis: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

impl std::fmt::Debug for ReducedGb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedGb").field("order", &self.order).field("basis", &self.basis).finish()
    }
}

impl ReducedGb {
    /// Wraps a basis that is already reduced, e.g. one read back from the
    /// on-disk cache. Re-sorts and re-normalizes but does not re-run Buchberger.
    pub fn from_reduced_basis(nvars: usize, order: MonomialOrder, basis: Vec<Polynomial>) -> Self {
        let mut basis: Vec<Polynomial> = basis.into_iter().map(|p| p.with_order(order).monic()).filter(|p| !p.is_zero()).collect();
        basis.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        let leading = basis.iter().map(|p| p.leading_monomial().unwrap().clone()).collect();
        ReducedGb { order, nvars, basis, leading }
    }

    /// Reduced basis of a monomial ideal given by arbitrary monomial generators.
    pub fn from_monomials(nvars: usize, order: MonomialOrder, gens: &[Monomial]) -> Self {
        let minimal = minimize_monomials(gens.to_vec());
        let basis = minimal.into_iter().map(|m| Polynomial::from_monomial(order, Rational::one(), m)).collect();
        Self::from_reduced_basis(nvars, order, basis)
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn leading(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let refs: Vec<&Polynomial> = self.basis.iter().collect();
        reduce(&f.with_order(self.order), &refs, true)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// True iff every variable occurs as a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        pure_power_bounds(&self.leading, self.nvars).is_some()
    }

    pub fn count_standard_monomials(&self) -> Result<u64, GbError> {
        count_standard_monomials(&self.leading, self.nvars)
    }

    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, GbError> {
        let bounds = pure_power_bounds(&self.leading, self.nvars).ok_or(GbError::NotZeroDimensional)?;
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        enumerate_staircase(&self.leading, &bounds, 0, &mut cur, &mut |m| out.push(Monomial::from_exponents(m)));
        out.sort_by(|a, b| self.order.compare(a, b));
        Ok(out)
    }

    /// Dimension of the quotient ring: the size of a largest set of variables
    /// no leading monomial is supported on.
    pub fn krull_dimension(&self) -> usize {
        krull_dimension(&self.leading, self.nvars)
    }
}

/// Largest exponent needed per variable, when each variable has a pure power
/// among `leading`.
fn pure_power_bounds(leading: &[Monomial], nvars: usize) -> Option<Vec<u32>> {
    if leading.iter().any(|m| m.is_one()) {
        return Some(vec![0; nvars]);
    }
    let mut bounds = vec![u32::MAX; nvars];
    for m in leading {
        if let Some(v) = m.pure_power_var() {
            bounds[v] = bounds[v].min(m.exponents()[v]);
        }
    }
    if bounds.contains(&u32::MAX) {
        None
    } else {
        Some(bounds)
    }
}

pub(crate) fn count_standard_monomials(leading: &[Monomial], nvars: usize) -> Result<u64, GbError> {
    if leading.iter().any(|m| m.is_one()) {
        return Ok(0);
    }
    let bounds = pure_power_bounds(leading, nvars).ok_or(GbError::NotZeroDimensional)?;
    let mut count = 0u64;
    let mut cur = vec![0u32; nvars];
    enumerate_staircase(leading, &bounds, 0, &mut cur, &mut |_| count += 1);
    Ok(count)
}

/// Visits every exponent vector below the staircase. Partial vectors (later
/// coordinates zero) already divisible by a generator are pruned.
/// The caller guarantees the all-zero vector is standard.
fn enumerate_staircase(leading: &[Monomial], bounds: &[u32], var: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if var == cur.len() {
        visit(cur);
        return;
    }
    for e in 0..bounds[var] {
        cur[var] = e;
        let blocked = leading.iter().any(|m| m.exponents().iter().zip(cur.iter()).all(|(a, b)| a <= b));
        if blocked {
            break;
        }
        enumerate_staircase(leading, bounds, var + 1, cur, visit);
    }
    cur[var] = 0;
}

fn krull_dimension(leading: &[Monomial], nvars: usize) -> usize {
    if leading.iter().any(|m| m.is_one()) {
        return 0;
    }
    let supports: Vec<u64> = leading
        .iter()
        .map(|m| m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
        .collect();
    let mut best = 0;
    // a subset S is independent iff no support lies inside S
    for subset in 0u64..(1u64 << nvars) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|&s| s & !subset != 0) {
            best = size;
        }
    }
    best
}

/// Keeps the divisibility-minimal monomials, sorted and deduplicated.
pub fn minimize_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

/// Reduces `f` by `basis` (all in `f`'s order, nonzero). With `full`, every
/// term is reduced; otherwise only the leading term is.
pub(crate) fn reduce(f: &Polynomial, basis: &[&Polynomial], full: bool) -> Polynomial {
    let order = f.order();
    let nvars = f.nvars();
    if basis.is_empty() || f.is_zero() {
        return f.clone();
    }
    let lms: Vec<(&Monomial, u64)> = basis.iter().map(|g| {
        let m = g.leading_monomial().unwrap();
        (m, support_mask(m))
    }).collect();
    let lcs: Vec<Rational> = basis.iter().map(|g| g.leading_coeff().unwrap().clone()).collect();
    // work on an ascending vector so the leading term is popped from the end
    let mut work: Vec<(Rational, Monomial)> = f.terms().iter().rev().cloned().collect();
    let mut rem: Vec<(Rational, Monomial)> = Vec::new();
    while let Some((c, m)) = work.pop() {
        let mask = support_mask(&m);
        let hit = lms.iter().position(|(lm, lmask)| lmask & !mask == 0 && lm.divides(&m));
        match hit {
            Some(k) => {
                let g = basis[k];
                let t = m.div(lms[k].0).unwrap();
                let q = &c / &lcs[k];
                work = sub_scaled_ascending(work, &q, &t, g, order);
            }
            None => {
                rem.push((c, m));
                if !full {
                    rem.extend(work.into_iter().rev());
                    break;
                }
            }
        }
    }
    Polynomial::from_sorted_terms(nvars, order, rem)
}

fn support_mask(m: &Monomial) -> u64 {
    m.exponents().iter().enumerate().fold(0u64, |acc, (i, &e)| if e > 0 { acc | (1 << (i % 64)) } else { acc })
}

/// `work - q * t * tail(g)` where `work` is ascending and the leading term of
/// `q*t*g` has already been cancelled (popped by the caller).
fn sub_scaled_ascending(work: Vec<(Rational, Monomial)>, q: &Rational, t: &Monomial, g: &Polynomial, order: MonomialOrder) -> Vec<(Rational, Monomial)> {
    let mut out = Vec::with_capacity(work.len() + g.len());
    let mut left = work.into_iter().peekable();
    // tail of g in ascending order
    let mut right = g.terms()[1..].iter().rev().map(|(d, n)| (-(q * d), t.mul(n))).peekable();
    loop {
        match (left.peek(), right.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(left.next().unwrap()),
            (None, Some(_)) => out.push(right.next().unwrap()),
            (Some(a), Some(b)) => match order.compare(&a.1, &b.1) {
                Ordering::Less => out.push(left.next().unwrap()),
                Ordering::Greater => out.push(right.next().unwrap()),
                Ordering::Equal => {
                    let (c, m) = left.next().unwrap();
                    let (d, _) = right.next().unwrap();
                    let s = c + d;
                    if !s.is_zero() {
                        out.push((s, m));
                    }
                }
            },
        }
    }
    out
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u32,
}

/// Reduced Gröbner basis of the ideal generated by `gens` in a ring with
/// `nvars` variables. Zero generators are dropped; if none remain the zero
/// ideal (empty basis) is returned.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder, nvars: usize, cfg: &GbConfig) -> Result<ReducedGb, GbError> {
    for g in gens {
        if g.nvars() != nvars {
            return Err(GbError::Arity { expected: nvars, found: g.nvars() });
        }
    }
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.with_order(order).monic()).collect();
    if input.iter().any(|g| g.is_constant()) {
        return Ok(ReducedGb::from_reduced_basis(nvars, order, vec![Polynomial::one(nvars, order)]));
    }
    if input.iter().all(|g| g.is_monomial()) {
        let ms: Vec<Monomial> = input.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
        return Ok(ReducedGb::from_monomials(nvars, order, &ms));
    }
    input.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    input.dedup();

    let mut engine = Engine { order, cfg: *cfg, polys: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for f in input {
        let h = engine.reduce_by_active(&f);
        if !h.is_zero() {
            engine.insert(h.monic())?;
        }
    }
    while let Some(pair) = engine.pairs.pop() {
        let s = engine.s_polynomial(&pair);
        let h = engine.reduce_by_active(&s);
        if !h.is_zero() {
            engine.insert(h.monic())?;
        }
    }
    Ok(engine.finish(nvars))
}

struct Engine {
    order: MonomialOrder,
    cfg: GbConfig,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    /// Sorted so that the pair to process next is last.
    pairs: Vec<Pair>,
}

impl Engine {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn reduce_by_active(&self, f: &Polynomial) -> Polynomial {
        let refs: Vec<&Polynomial> = self.polys.iter().zip(&self.active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        reduce(f, &refs, true)
    }

    fn s_polynomial(&self, pair: &Pair) -> Polynomial {
        let (f, g) = (&self.polys[pair.i], &self.polys[pair.j]);
        let tf = pair.lcm.div(f.leading_monomial().unwrap()).unwrap();
        let tg = pair.lcm.div(g.leading_monomial().unwrap()).unwrap();
        // both are monic
        let one = Rational::one();
        f.mul_term(&one, &tf).sub_mul_term(&one, &tg, g)
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let lcm = self.lm(i).lcm(self.lm(j));
        let degree = lcm.degree();
        Pair { i: i.min(j), j: i.max(j), lcm, degree }
    }

    /// Gebauer–Möller installation of a new basis element.
    fn insert(&mut self, h: Polynomial) -> Result<(), GbError> {
        let degree = h.total_degree().unwrap_or(0);
        if degree > self.cfg.degree_cap {
            return Err(GbError::DegreeCapExceeded { cap: self.cfg.degree_cap, degree });
        }
        let hidx = self.polys.len();
        let hlm = h.leading_monomial().unwrap().clone();
        self.polys.push(h);
        self.active.push(true);

        let candidates: Vec<Pair> = (0..hidx).filter(|&g| self.active[g]).map(|g| self.make_pair(g, hidx)).collect();
        let coprime = |p: &Pair, engine: &Engine| -> bool {
            let other = if p.i == hidx { p.j } else { p.i };
            engine.lm(other).is_coprime(&hlm)
        };
        // criterion M: drop a pair whose lcm is a proper multiple of another new pair's lcm
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in candidates.iter().enumerate() {
            if coprime(p, self) {
                kept.push(p.clone());
                continue;
            }
            let dominated = candidates.iter().enumerate().any(|(l, q)| {
                if l == k || !q.lcm.divides(&p.lcm) {
                    return false;
                }
                // equal lcms: keep the first one only
                q.lcm != p.lcm || l < k
            });
            if !dominated {
                kept.push(p.clone());
            }
        }
        // criterion F/product criterion: among pairs with equal lcm keep one,
        // dropping the whole class when any member is coprime
        let mut fresh: Vec<Pair> = Vec::new();
        for p in kept.iter() {
            let same: Vec<&Pair> = kept.iter().filter(|q| q.lcm == p.lcm).collect();
            if same.iter().any(|q| coprime(q, self)) {
                continue;
            }
            if fresh.iter().any(|q| q.lcm == p.lcm) {
                continue;
            }
            fresh.push(p.clone());
        }
        // criterion B on old pairs
        let old = std::mem::take(&mut self.pairs);
        let mut pairs: Vec<Pair> = old
            .into_iter()
            .filter(|p| {
                if !hlm.divides(&p.lcm) {
                    return true;
                }
                let lih = self.lm(p.i).lcm(&hlm);
                let ljh = self.lm(p.j).lcm(&hlm);
                lih == p.lcm || ljh == p.lcm
            })
            .collect();
        pairs.extend(fresh);
        let order = self.order;
        pairs.sort_by(|a, b| {
            // descending, so the smallest (degree, lcm, i, j) sits at the end
            b.degree
                .cmp(&a.degree)
                .then_with(|| order.compare(&b.lcm, &a.lcm))
                .then_with(|| b.i.cmp(&a.i))
                .then_with(|| b.j.cmp(&a.j))
        });
        self.pairs = pairs;
        for g in 0..hidx {
            if self.active[g] && hlm.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
        Ok(())
    }

    fn finish(self, nvars: usize) -> ReducedGb {
        let order = self.order;
        let minimal: Vec<Polynomial> = self.polys.into_iter().zip(self.active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
        let mut reduced = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            let others: Vec<&Polynomial> = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, p)| p).collect();
            let (lc, lm) = g.leading_term().unwrap().clone();
            let tail = Polynomial::from_sorted_terms(nvars, order, g.terms()[1..].to_vec());
            let tail = reduce(&tail, &others, true);
            let head = Polynomial::from_monomial(order, lc, lm);
            reduced.push((&head + &tail).monic());
        }
        ReducedGb::from_reduced_basis(nvars, order, reduced)
    }
}
