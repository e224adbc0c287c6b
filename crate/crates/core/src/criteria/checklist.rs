use serde::Serialize;

use super::{CriteriaError, DepthCertificate};
use crate::invariants::{Blowup, LengthTable, ReductionData};

/// What the certificates say about a statement's conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observed {
    Verified,
    LowerBoundOnly,
    RefutedImpossible,
    Unknown,
}

impl Observed {
    pub fn as_str(self) -> &'static str {
        match self {
            Observed::Verified => "verified",
            Observed::LowerBoundOnly => "lower-bound-only",
            Observed::RefutedImpossible => "refuted-impossible",
            Observed::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChecklistVerdict {
    pub id: &'static str,
    pub statement: &'static str,
    pub hypothesis_holds: bool,
    /// Depth of `F(I)` the conclusion asks for, when it is a lower bound.
    pub required_depth_f: Option<u32>,
    #[serde(rename = "verdict")]
    pub observed: Observed,
    pub detail: String,
}

/// Everything the checklist reads, computed once by the caller.
pub struct ChecklistInputs<'a> {
    pub reduction: ReductionData,
    pub lambda_hm: &'a LengthTable,
    pub fc1: &'a LengthTable,
    pub fc2: &'a LengthTable,
    pub depth_g: &'a DepthCertificate,
    pub depth_f: &'a DepthCertificate,
}

pub const STATEMENT_IDS: [&str; 16] = [
    "fc1-zero",
    "fc1-zero-positive",
    "rm-one",
    "fc1-one",
    "fc1-one-g-cm",
    "fc2-tail-one",
    "r2-lambda-one",
    "r2-lambda-two",
    "fc2-head-one",
    "fc2-two",
    "fc2-at-most-two",
    "r2-fc2-one-one",
    "r2-fc2-two-one",
    "r2-fc2-two-head",
    "fc2-one-one-cm-criterion",
    "fc2-head-two-cm",
];

struct Ctx {
    d: u32,
    g_lb: u32,
    f_lb: u32,
    f_ub: u32,
}

impl Ctx {
    /// Smallest `t` in `lo..=hi` with `depth G ≥ d - t` certified.
    fn certified_t(&self, lo: u32, hi: u32) -> Option<u32> {
        let t = lo.max(self.d.saturating_sub(self.g_lb));
        (lo <= hi && t <= hi).then_some(t)
    }

    fn observe_at_least(&self, required: u32) -> Observed {
        if self.f_lb >= required {
            Observed::Verified
        } else if self.f_ub < required {
            Observed::RefutedImpossible
        } else if self.f_lb >= 1 {
            Observed::LowerBoundOnly
        } else {
            Observed::Unknown
        }
    }

    fn depth_f_text(&self) -> String {
        format!("certified depth F >= {} (at most {})", self.f_lb, self.f_ub)
    }

    /// A statement "condition and depth G ≥ d - t imply depth F ≥ d - t + shift".
    fn graded(&self, id: &'static str, statement: &'static str, condition: bool, why: String, t_range: (u32, u32), shift: i64) -> ChecklistVerdict {
        let (lo, hi) = t_range;
        let t = if condition { self.certified_t(lo, hi) } else { None };
        let holds = t.is_some();
        let t_eval = t.unwrap_or(hi.max(lo));
        let required = (self.d as i64 - t_eval as i64 + shift).max(0) as u32;
        let observed = if lo > hi { Observed::Unknown } else { self.observe_at_least(required) };
        let depth_part = match t {
            Some(t) => format!("depth G >= {} certified (t = {t})", self.d - t),
            None if condition => format!("certified depth G >= {} is below what t in {lo}..={hi} needs", self.g_lb),
            None => "condition fails".to_string(),
        };
        ChecklistVerdict {
            id,
            statement,
            hypothesis_holds: holds,
            required_depth_f: Some(required),
            observed,
            detail: format!("{why}; {depth_part}; requires depth F >= {required}; {}", self.depth_f_text()),
        }
    }

    fn plain(&self, id: &'static str, statement: &'static str, condition: bool, why: String, required: u32) -> ChecklistVerdict {
        ChecklistVerdict {
            id,
            statement,
            hypothesis_holds: condition,
            required_depth_f: Some(required),
            observed: self.observe_at_least(required),
            detail: format!("{why}; requires depth F >= {required}; {}", self.depth_f_text()),
        }
    }

    /// Conclusion "F(I) is Cohen-Macaulay" (`expect_cm`) or "F(I) is not".
    fn observe_cm(&self, expect_cm: bool) -> Observed {
        let known_cm = self.f_lb >= self.d;
        let known_not = self.f_ub < self.d;
        match (expect_cm, known_cm, known_not) {
            (true, true, _) | (false, _, true) => Observed::Verified,
            (true, _, true) | (false, true, _) => Observed::RefutedImpossible,
            (true, false, false) if self.f_lb >= 1 => Observed::LowerBoundOnly,
            _ => Observed::Unknown,
        }
    }
}

/// Evaluates every depth statement on one instance.
///
/// A statement whose hypothesis is not established gets the verdict
/// `unknown`; its detail still records what the certificates say about the
/// conclusion. Hypotheses are decided exactly from the length tables and reduction
/// numbers, with the certified lower bound for `depth G(I)` in place of the
/// depth assumption. Conclusions are judged against the certified bounds
/// for `depth F(I)`.
pub fn theorem_checklist(bl: &Blowup, inputs: &ChecklistInputs<'_>) -> Result<Vec<ChecklistVerdict>, CriteriaError> {
    let d = bl.dimension();
    let cx = Ctx { d, g_lb: inputs.depth_g.effective_lower_bound(d), f_lb: inputs.depth_f.effective_lower_bound(d), f_ub: inputs.depth_f.upper_bound(d) };
    let (lam, fc1, fc2) = (inputs.lambda_hm, inputs.fc1, inputs.fc2);
    let rm = inputs.reduction.rm;
    let r3 = lam.term(2) == 0;
    let mut out = Vec::new();

    out.push(cx.graded(
        "fc1-zero",
        "m I^{n+1} ∩ J = m J I^n for all n and depth G >= d - t (1 <= t <= d) imply depth F >= d - t + 1",
        fc1.total == 0,
        format!("FC1 total = {}", fc1.total),
        (1, d),
        1,
    ));
    out.push(cx.plain("fc1-zero-positive", "m I^{n+1} ∩ J = m J I^n for all n implies depth F >= 1", fc1.total == 0, format!("FC1 total = {}", fc1.total), 1));
    out.push(cx.graded("rm-one", "r^m = 1 and depth G >= d - t (1 <= t <= d) imply depth F >= d - t + 1", rm == 1, format!("r^m = {rm}"), (1, d), 1));
    out.push(cx.graded(
        "fc1-one",
        "d >= 2, Σ_{n>=1} λ(m I^{n+1} ∩ J / m J I^n) = 1 and depth G >= d - t (1 <= t <= d - 1) imply depth F >= d - t",
        d >= 2 && fc1.total_from(1) == 1,
        format!("d = {d}, FC1 sum from n = 1 is {}", fc1.total_from(1)),
        (1, d.saturating_sub(1)),
        0,
    ));

    let g_cm = cx.g_lb >= d;
    out.push(ChecklistVerdict {
        id: "fc1-one-g-cm",
        statement: "FC1 total = 1 and G(I) Cohen-Macaulay imply depth F = d - 1",
        hypothesis_holds: fc1.total == 1 && g_cm,
        required_depth_f: Some(d - 1),
        observed: {
            let at_least = cx.observe_at_least(d - 1);
            let exact = cx.observe_cm(false);
            match (at_least, exact) {
                (Observed::RefutedImpossible, _) | (_, Observed::RefutedImpossible) => Observed::RefutedImpossible,
                (Observed::Verified, Observed::Verified) => Observed::Verified,
                (Observed::Unknown, _) => Observed::Unknown,
                _ => Observed::LowerBoundOnly,
            }
        },
        detail: format!("FC1 total = {}, G Cohen-Macaulay certified: {g_cm}; {}", fc1.total, cx.depth_f_text()),
    });

    out.push(cx.graded(
        "fc2-tail-one",
        "λ(m I^2 / m J I) = 1, m I^3 = m J I^2 and depth G >= d - t (1 <= t <= d - 1) imply depth F >= d - t",
        fc2.term(1) == 1 && fc2.term(2) == 0,
        format!("FC2 terms at n = 1, 2: {}, {}", fc2.term(1), fc2.term(2)),
        (1, d.saturating_sub(1)),
        0,
    ));
    let r2_head = format!("λ(I^3 / J I^2) = {}, λ(m I^2 ∩ J / m J I) = {}, λ(I^2 / J I) = {}", lam.term(2), fc1.term(1), lam.term(1));
    out.push(cx.plain(
        "r2-lambda-one",
        "I^3 = J I^2, λ(m I^2 ∩ J / m J I) = 1 and λ(I^2 / J I) = 1 imply depth F >= d - 1",
        r3 && fc1.term(1) == 1 && lam.term(1) == 1,
        r2_head.clone(),
        d - 1,
    ));
    out.push(cx.plain(
        "r2-lambda-two",
        "I^3 = J I^2, λ(m I^2 ∩ J / m J I) = 1 and λ(I^2 / J I) = 2 imply depth F >= d - 2",
        r3 && fc1.term(1) == 1 && lam.term(1) == 2,
        r2_head,
        d.saturating_sub(2),
    ));
    out.push(cx.graded(
        "fc2-head-one",
        "d >= 2, λ(m I / m J) = 1 and depth G >= d - t (2 <= t <= d) imply depth F >= d - t + 1",
        d >= 2 && fc2.term(0) == 1,
        format!("d = {d}, λ(m I / m J) = {}", fc2.term(0)),
        (2, d),
        1,
    ));
    out.push(cx.graded(
        "fc2-two",
        "d >= 2, Σ λ(m I^{n+1} / m J I^n) = 2 and depth G >= d - t (2 <= t <= d) imply depth F >= d - t + 1",
        d >= 2 && fc2.total == 2,
        format!("d = {d}, FC2 total = {}", fc2.total),
        (2, d),
        1,
    ));
    out.push(cx.plain("fc2-at-most-two", "Σ λ(m I^{n+1} / m J I^n) <= 2 implies depth F >= 1", fc2.total <= 2, format!("FC2 total = {}", fc2.total), 1));

    let r2_fc2 = format!("λ(I^3 / J I^2) = {}, λ(I^2 / J I) = {}, λ(m I / m J) = {}, λ(m I^2 / m J I) = {}", lam.term(2), lam.term(1), fc2.term(0), fc2.term(1));
    out.push(cx.plain(
        "r2-fc2-one-one",
        "I^3 = J I^2 and λ(I^2 / J I) = 1 = λ(m I^2 / m J I) imply depth F >= d - 1",
        r3 && lam.term(1) == 1 && fc2.term(1) == 1,
        r2_fc2.clone(),
        d - 1,
    ));
    out.push(cx.plain(
        "r2-fc2-two-one",
        "I^3 = J I^2, λ(I^2 / J I) = 2 and λ(m I^2 / m J I) = 1 imply depth F >= d - 2",
        r3 && lam.term(1) == 2 && fc2.term(1) == 1,
        r2_fc2.clone(),
        d.saturating_sub(2),
    ));
    out.push(cx.plain(
        "r2-fc2-two-head",
        "I^3 = J I^2, λ(I^2 / J I) = 2 = λ(m I / m J) and m I^2 = m J I imply depth F >= d - 2",
        r3 && lam.term(1) == 2 && fc2.term(0) == 2 && fc2.term(1) == 0,
        r2_fc2,
        d.saturating_sub(2),
    ));

    let g_near = cx.g_lb + 1 >= d;
    let one_one = g_near && fc2.term(0) == 1 && fc2.term(1) == 1 && fc2.total == 2;
    let (observed, detail) = if one_one {
        let meet = bl.m_i_pow(2)?.intersect(&bl.j_i_pow(1)?)?;
        let equal = meet.local_colength()? == bl.m_j_i_pow(1)?.local_colength()?;
        (cx.observe_cm(equal), format!("m I^2 ∩ J I = m J I: {equal}, so F is predicted {}; {}", if equal { "CM" } else { "not CM" }, cx.depth_f_text()))
    } else {
        (Observed::Unknown, format!("certified depth G >= {}, FC2 terms at n = 0, 1: {}, {}", cx.g_lb, fc2.term(0), fc2.term(1)))
    };
    out.push(ChecklistVerdict {
        id: "fc2-one-one-cm-criterion",
        statement: "depth G >= d - 1 and λ(m I / m J) = λ(m I^2 / m J I) = 1, m I^3 = m J I^2 imply: F CM iff m I^2 ∩ J I = m J I",
        hypothesis_holds: one_one,
        required_depth_f: None,
        observed,
        detail,
    });

    let head_two = g_near && fc2.term(0) == 2 && fc2.term(1) == 0;
    out.push(ChecklistVerdict {
        id: "fc2-head-two-cm",
        statement: "depth G >= d - 1, λ(m I / m J) = 2 and m I^2 = m J I imply F(I) Cohen-Macaulay",
        hypothesis_holds: head_two,
        required_depth_f: Some(d),
        observed: cx.observe_cm(true),
        detail: format!("certified depth G >= {}, FC2 terms at n = 0, 1: {}, {}; {}", cx.g_lb, fc2.term(0), fc2.term(1), cx.depth_f_text()),
    });

    debug_assert_eq!(out.len(), STATEMENT_IDS.len());
    for v in &mut out {
        if !v.hypothesis_holds {
            v.detail.push_str(&format!("; hypothesis not established, conclusion alone: {}", v.observed.as_str()));
            v.observed = Observed::Unknown;
        }
    }
    Ok(out)
}
