//! Cohen-Macaulay and depth certificates for `G(I)` and `F(I)`.
//!
//! Regularity of an initial form is checked on a finite window of degrees,
//! so a positive answer is bounded evidence. Each certificate records the
//! window it was checked on.

mod checklist;

use serde::Serialize;

pub use checklist::{theorem_checklist, ChecklistInputs, ChecklistVerdict, Observed, STATEMENT_IDS};

use crate::ideal::IdealError;
use crate::invariants::{g_function, Blowup, Family, HilbertSeries, InvariantError, LengthTable, ReductionData};
use crate::poly::Polynomial;

/// Upper bound on the number of candidate elements tried by searches.
pub const POOL_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("{element} is not a minimal generator of {of}")]
    NotAMinimalGenerator { element: String, of: &'static str },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl From<IdealError> for CriteriaError {
    fn from(e: IdealError) -> Self {
        CriteriaError::Invariant(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmVerdict {
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "notCM")]
    NotCm,
    #[serde(rename = "unknown")]
    Unknown,
}

impl CmVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CmVerdict::Cm => "CM",
            CmVerdict::NotCm => "notCM",
            CmVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CzVerdict {
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "notCM")]
    NotCm,
    #[serde(rename = "inapplicable")]
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    G,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceTag {
    /// `(I^{n+1} : x) = I^n` on the window.
    ColonCheck,
    /// `(1-t) H(G(I)) = H(G(I/x))` on the window.
    SeriesFactorization,
    /// `m I^n ∩ (x) = m I^{n-1} x` on the window.
    IntersectionEquality,
}

/// Valabrega-Valla condition `I^n ∩ J = J I^{n-1}` for `1 ≤ n ≤ r+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValabregaValla {
    pub holds: bool,
    pub failing: Vec<u32>,
    pub checked_through: u32,
}

pub fn check_valabrega_valla(vv: &LengthTable) -> ValabregaValla {
    assert_eq!(vv.family, Family::VV);
    ValabregaValla { holds: vv.total == 0, failing: vv.support(), checked_through: vv.safety_index }
}

/// With `G(I)` Cohen-Macaulay, `F(I)` is Cohen-Macaulay iff the FC1 sum vanishes.
pub fn check_cortadellas_zarzuela(vv: &ValabregaValla, fc1: &LengthTable) -> CzVerdict {
    assert_eq!(fc1.family, Family::FC1);
    if !vv.holds {
        CzVerdict::Inapplicable
    } else if fc1.total == 0 {
        CzVerdict::Cm
    } else {
        CzVerdict::NotCm
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarEvidence {
    pub element: String,
    pub window: u32,
    /// Outcome of `(I^{n+1} : x) = I^n` for `n = 0, 1, ...`, stopping at the first failure.
    pub colon_checks: Vec<bool>,
    /// `(1-t) H(G(I))` and `H(G(I/x))` on the window; empty when a colon check failed.
    pub series_lhs: Vec<i64>,
    pub series_rhs: Vec<i64>,
    pub colon_ok: bool,
    pub series_ok: bool,
    pub regular: bool,
}

fn render(bl: &Blowup, x: &Polynomial) -> String {
    x.display(bl.context().names()).to_string()
}

/// Whether the initial form of `x` in `G(I)` is regular, on degrees `0..=nmax`.
pub fn check_star_regular(bl: &Blowup, x: &Polynomial, nmax: u32) -> Result<StarEvidence, CriteriaError> {
    Ok(star_regular(bl, x, nmax)?.0)
}

fn star_regular(bl: &Blowup, x: &Polynomial, nmax: u32) -> Result<(StarEvidence, Option<Blowup>), CriteriaError> {
    if !bl.i().local_contains(x)? || bl.m_i_pow(1)?.local_contains(x)? {
        return Err(CriteriaError::NotAMinimalGenerator { element: render(bl, x), of: "I" });
    }
    let mut ev = StarEvidence {
        element: render(bl, x),
        window: nmax,
        colon_checks: Vec::new(),
        series_lhs: Vec::new(),
        series_rhs: Vec::new(),
        colon_ok: false,
        series_ok: false,
        regular: false,
    };
    for n in 0..=nmax {
        // I^n ⊆ (I^{n+1} : x), so equal colengths mean equality
        let colon = bl.i_pow(n + 1)?.colon_element(x)?;
        let ok = colon.local_colength()? == bl.i_pow(n)?.local_colength()?;
        ev.colon_checks.push(ok);
        if !ok {
            return Ok((ev, None));
        }
    }
    ev.colon_ok = true;
    let h = g_function(bl.i(), nmax)?;
    ev.series_lhs = (0..h.len()).map(|n| h[n] as i64 - if n > 0 { h[n - 1] as i64 } else { 0 }).collect();
    let quotient = bl.modulo(x)?;
    ev.series_rhs = g_function(quotient.i(), nmax)?.into_iter().map(|v| v as i64).collect();
    ev.series_ok = ev.series_lhs == ev.series_rhs;
    ev.regular = ev.series_ok;
    Ok((ev, Some(quotient)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OEvidence {
    pub element: String,
    pub window: u32,
    /// `m I^n ∩ (x) = m I^{n-1} x` for `n = 1, 2, ...`, stopping at the first failure.
    pub equality_checks: Vec<bool>,
    /// `m I^n ∩ (x) ⊆ m I^{n-1} J` for the same `n`.
    pub containment_checks: Vec<bool>,
    pub regular: bool,
}

/// Whether the initial form of `x ∈ J` in `F(I)` is regular, through the
/// equalities `m I^n ∩ (x) = m I^{n-1} x` for `1 ≤ n ≤ nmax`.
///
/// `m I^n ∩ (x) = x (m I^n : x)`, so the equality is checked as
/// `(m I^n : x) = m I^{n-1}` by colength.
pub fn check_o_regular(bl: &Blowup, x: &Polynomial, nmax: u32) -> Result<OEvidence, CriteriaError> {
    let mj = bl.m().product(bl.j())?;
    if !bl.j().local_contains(x)? || mj.local_contains(x)? {
        return Err(CriteriaError::NotAMinimalGenerator { element: render(bl, x), of: "J" });
    }
    let mut ev = OEvidence { element: render(bl, x), window: nmax, equality_checks: Vec::new(), containment_checks: Vec::new(), regular: false };
    for n in 1..=nmax {
        let below = if n == 1 { bl.m().clone() } else { bl.m_i_pow(n - 1)? };
        let colon = bl.m_i_pow(n)?.colon_element(x)?;
        let equal = colon.local_colength()? == below.local_colength()?;
        let target = bl.m_j_i_pow(n - 1)?;
        let mut contained = true;
        for g in colon.gens() {
            if !target.local_contains(&(g * x))? {
                contained = false;
                break;
            }
        }
        ev.equality_checks.push(equal);
        ev.containment_checks.push(contained);
        if !equal {
            return Ok(ev);
        }
    }
    ev.regular = true;
    Ok(ev)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuComparison {
    pub n: u32,
    pub mu: u64,
    pub weighted: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCmTest {
    pub e0: i64,
    /// `λ(I^n / (J I^{n-1} + m I^n))` for `n = 0..=r`, with 1 at `n = 0`.
    pub terms: Vec<u64>,
    pub sum: u64,
    pub verdict: CmVerdict,
    /// `μ(I^n)` against `Σ_{j=0}^{n} (j+1) λ(I^{n-j} / (J I^{n-j-1} + m I^{n-j}))` for `n = 0..=r+1`.
    pub comparisons: Vec<MuComparison>,
    /// Least `n` with `μ(I^n)` strictly below the weighted sum.
    pub first_witness: Option<u32>,
}

/// `F(I)` is Cohen-Macaulay iff `e0(F) = Σ_{n=0}^{r} λ(I^n / (J I^{n-1} + m I^n))`.
pub fn cm_test_fiber(bl: &Blowup, red: &ReductionData, fiber: &HilbertSeries) -> Result<FiberCmTest, CriteriaError> {
    let top = red.r + 1;
    let t: Vec<u64> = (0..=top).map(|n| bl.fiber_quotient_length(n)).collect::<Result<_, _>>()?;
    let terms = t[..=red.r as usize].to_vec();
    let sum: u64 = terms.iter().sum();
    let verdict = if fiber.e0 == sum as i64 { CmVerdict::Cm } else { CmVerdict::NotCm };
    let mut comparisons = Vec::new();
    for n in 0..=top {
        let mu = bl.mingens_i_pow(n)?;
        let weighted = (0..=n).map(|j| (j as u64 + 1) * t[(n - j) as usize]).sum();
        comparisons.push(MuComparison { n, mu, weighted });
    }
    let first_witness = comparisons.iter().find(|c| c.mu < c.weighted).map(|c| c.n);
    Ok(FiberCmTest { e0: fiber.e0, terms, sum, verdict, comparisons, first_witness })
}

/// Candidate elements of `J`: its generators, then sums of two generators,
/// then combinations with coefficients in {0, 1, 2, 3} (at least two
/// nonzero, primitive coefficient vector), in lexicographic order.
pub fn element_pool(gens: &[Polynomial]) -> Vec<Polynomial> {
    let k = gens.len();
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    for i in 0..k {
        let mut v = vec![0; k];
        v[i] = 1;
        vectors.push(v);
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut v = vec![0; k];
            v[i] = 1;
            v[j] = 1;
            vectors.push(v);
        }
    }
    let mut v = vec![0u32; k];
    'outer: loop {
        // next vector in {0..3}^k, little-endian counter on the reversed index
        let mut pos = k;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if v[pos] < 3 {
                v[pos] += 1;
                break;
            }
            v[pos] = 0;
        }
        let nonzero = v.iter().filter(|&&c| c != 0).count();
        let g = v.iter().fold(0, |acc, &c| num_integer::gcd(acc, c));
        if nonzero >= 2 && g == 1 && !vectors.contains(&v) {
            vectors.push(v.clone());
        }
    }
    vectors.truncate(POOL_LIMIT);
    vectors
        .into_iter()
        .map(|v| {
            let mut acc = Polynomial::zero(gens[0].nvars(), gens[0].order());
            for (c, g) in v.iter().zip(gens) {
                if *c != 0 {
                    acc = &acc + &g.scale(&crate::poly::Rational::from_integer((*c).into()));
                }
            }
            acc
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifiedElement {
    pub element: String,
    pub evidence: Vec<EvidenceTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthCertificate {
    pub target: Target,
    pub lower_bound: u32,
    pub sequence: Vec<CertifiedElement>,
    pub window: u32,
    pub candidates_tried: u32,
    pub cm_flag: CmVerdict,
    pub justification: String,
}

impl DepthCertificate {
    /// The best lower bound known: the dimension when Cohen-Macaulay,
    /// otherwise the certified sequence length.
    pub fn effective_lower_bound(&self, d: u32) -> u32 {
        if self.cm_flag == CmVerdict::Cm {
            d
        } else {
            self.lower_bound
        }
    }

    /// Upper bound known from the verdict.
    pub fn upper_bound(&self, d: u32) -> u32 {
        if self.cm_flag == CmVerdict::NotCm {
            d - 1
        } else {
            d
        }
    }

    pub fn set_verdict(&mut self, verdict: CmVerdict, justification: impl Into<String>) {
        self.cm_flag = verdict;
        self.justification = justification.into();
    }
}

/// Greedy search for a regular sequence of initial forms among elements of
/// `J`, passing to the quotient by each certified element.
///
/// For `G`, each element must pass [`check_star_regular`]. For `F`, each
/// element must pass [`check_o_regular`]; the search continues in the
/// quotient only through elements that are also regular in `G`.
pub fn depth_lower_bound(target: Target, bl: &Blowup, nmax: u32) -> Result<DepthCertificate, CriteriaError> {
    let d = bl.dimension();
    let pool = element_pool(bl.j_gens());
    let mut cert = DepthCertificate {
        target,
        lower_bound: 0,
        sequence: Vec::new(),
        window: nmax,
        candidates_tried: 0,
        cm_flag: CmVerdict::Unknown,
        justification: String::new(),
    };
    let mut used: Vec<usize> = Vec::new();
    let mut current: Option<Blowup> = None;
    while cert.lower_bound < d {
        let cur = current.as_ref().unwrap_or(bl);
        let last = cert.lower_bound + 1 == d;
        let mut next: Option<(usize, CertifiedElement, Option<Blowup>)> = None;
        for (idx, x) in pool.iter().enumerate() {
            if used.contains(&idx) {
                continue;
            }
            cert.candidates_tried += 1;
            // F searches that continue need G-regularity too; that check usually fails fast
            let star = if target == Target::G || !last { Some(star_regular(cur, x, nmax)) } else { None };
            let (mut evidence, quotient) = match star {
                Some(Ok((ev, quotient))) if ev.regular => (vec![EvidenceTag::ColonCheck, EvidenceTag::SeriesFactorization], quotient),
                Some(Ok(_)) | Some(Err(CriteriaError::NotAMinimalGenerator { .. })) => continue,
                Some(Err(e)) => return Err(e),
                None => (Vec::new(), None),
            };
            if target == Target::F {
                match o_regular_or_skip(cur, x, nmax)? {
                    Some(element) => {
                        evidence.insert(0, EvidenceTag::IntersectionEquality);
                        next = Some((idx, CertifiedElement { element, evidence }, quotient));
                        break;
                    }
                    None => continue,
                }
            }
            next = Some((idx, CertifiedElement { element: render(cur, x), evidence }, quotient));
            break;
        }
        if next.is_none() && target == Target::F && !last {
            // an F-regular element that is not G-regular still counts, but ends the search
            for (idx, x) in pool.iter().enumerate() {
                if used.contains(&idx) {
                    continue;
                }
                cert.candidates_tried += 1;
                if let Some(element) = o_regular_or_skip(cur, x, nmax)? {
                    next = Some((idx, CertifiedElement { element, evidence: vec![EvidenceTag::IntersectionEquality] }, None));
                    break;
                }
            }
        }
        let Some((idx, el, quotient)) = next else { break };
        used.push(idx);
        cert.sequence.push(el);
        cert.lower_bound += 1;
        match quotient {
            Some(q) => current = Some(q),
            None => break,
        }
    }
    if cert.lower_bound == d {
        cert.set_verdict(CmVerdict::Cm, "regular sequence of length d");
    }
    Ok(cert)
}

fn o_regular_or_skip(bl: &Blowup, x: &Polynomial, nmax: u32) -> Result<Option<String>, CriteriaError> {
    match check_o_regular(bl, x, nmax) {
        Ok(ev) if ev.regular => Ok(Some(ev.element)),
        Ok(_) | Err(CriteriaError::NotAMinimalGenerator { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub element: String,
    pub k: u32,
    /// `λ(m I^k ∩ J / (m I^{k-1} J + m I^k ∩ (x)))`.
    pub length: u64,
}

/// Searches the element pool for `x ∈ J` with
/// `λ(m I^k ∩ J / (m I^{k-1} J + m I^k ∩ (x))) ≠ 0`, given that the FC1 term
/// at `k-1` is the first nonzero one.
pub fn fc1_witness(bl: &Blowup, fc1: &LengthTable, k: u32) -> Result<Option<Witness>, CriteriaError> {
    assert_eq!(fc1.family, Family::FC1);
    if k < 2 || fc1.term(k - 1) == 0 || (0..k - 1).any(|n| fc1.term(n) != 0) {
        return Err(CriteriaError::Precondition(format!("the FC1 term at n = {} must be the first nonzero term", k.saturating_sub(1))));
    }
    let meet = bl.m_i_pow_meet_j(k)?;
    let base = bl.m_j_i_pow(k - 1)?;
    let mik = bl.m_i_pow(k)?;
    for x in element_pool(bl.j_gens()) {
        // m I^k ∩ (x) = x (m I^k : x)
        let part = mik.colon_element(&x)?.scale_by(&x);
        let denominator = base.sum(&part)?;
        let length = denominator.local_colength()? - meet.local_colength()?;
        if length != 0 {
            return Ok(Some(Witness { element: render(bl, &x), k, length }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::RingContext;
    use crate::invariants::{hilbert_series_f, length_sum, reduction_data};

    fn pair(vars: &[&str], i: &[&str], j: &[&str]) -> Blowup {
        let ctx = RingContext::polynomial_ring(vars.iter().map(|s| s.to_string()).collect());
        let i = ctx.parse_ideal(i).unwrap();
        Blowup::new(&i, j.iter().map(|g| ctx.parse(g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn maximal_ideal_is_regular_everywhere() {
        let bl = pair(&["x", "y"], &["x", "y"], &["x", "y"]);
        let x = bl.context().parse("x").unwrap();
        let star = check_star_regular(&bl, &x, 4).unwrap();
        assert!(star.regular && star.colon_ok && star.series_ok);
        assert_eq!(star.series_lhs, vec![1, 1, 1, 1, 1]);
        let o = check_o_regular(&bl, &x, 4).unwrap();
        assert!(o.regular);
        assert!(o.containment_checks.iter().all(|&c| c));
        for target in [Target::G, Target::F] {
            let cert = depth_lower_bound(target, &bl, 4).unwrap();
            assert_eq!(cert.lower_bound, 2);
            assert_eq!(cert.cm_flag, CmVerdict::Cm);
        }
    }

    #[test]
    fn conditions_when_i_equals_j() {
        let bl = pair(&["x", "y"], &["x", "y"], &["x", "y"]);
        let red = reduction_data(&bl, 25).unwrap();
        let vv = check_valabrega_valla(&length_sum(Family::VV, &bl, &red).unwrap());
        assert!(vv.holds && vv.failing.is_empty());
        let fc1 = length_sum(Family::FC1, &bl, &red).unwrap();
        assert_eq!(check_cortadellas_zarzuela(&vv, &fc1), CzVerdict::Cm);
        let f = hilbert_series_f(&bl, &red).unwrap();
        let test = cm_test_fiber(&bl, &red, &f).unwrap();
        assert_eq!(test.verdict, CmVerdict::Cm);
        assert_eq!((test.e0, test.sum), (1, 1));
        assert!(matches!(fc1_witness(&bl, &fc1, 2), Err(CriteriaError::Precondition(_))));
    }

    #[test]
    fn non_generators_are_rejected() {
        let bl = pair(&["x", "y"], &["x", "y"], &["x", "y"]);
        let x2 = bl.context().parse("x^2").unwrap();
        assert!(matches!(check_star_regular(&bl, &x2, 3), Err(CriteriaError::NotAMinimalGenerator { .. })));
        assert!(matches!(check_o_regular(&bl, &x2, 3), Err(CriteriaError::NotAMinimalGenerator { .. })));
    }

    #[test]
    fn zero_divisor_form_is_not_regular() {
        // I = (x, y^2) in k[x,y]/(x^2): the form of x is nilpotent in G(I)
        let base = RingContext::polynomial_ring(vec!["x".into(), "y".into()]);
        let ctx = base.quotient_by(&[base.parse("x^2").unwrap()]).unwrap();
        let i = ctx.parse_ideal(&["x", "y^2"]).unwrap();
        let bl = Blowup::new(&i, vec![ctx.parse("y^2").unwrap()]).unwrap();
        let x = ctx.parse("x").unwrap();
        let ev = check_star_regular(&bl, &x, 3).unwrap();
        assert!(!ev.regular);
        assert_eq!(ev.colon_checks.last(), Some(&false));
    }

    #[test]
    fn pool_order_and_size() {
        let ctx = RingContext::polynomial_ring(vec!["x".into(), "y".into()]);
        let gens = vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()];
        let pool = element_pool(&gens);
        let shown: Vec<String> = pool.iter().map(|p| p.display(ctx.names()).to_string()).collect();
        assert_eq!(shown[..3], ["x", "y", "x+y"]);
        // primitive vectors with both entries nonzero: (1,1) already listed, then (1,2), (1,3), (2,1), (2,3), (3,1), (3,2)
        assert_eq!(shown.len(), 9);
        assert_eq!(shown[3], "x+2*y");
    }
}
