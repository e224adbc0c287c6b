use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{Blowup, InvariantError, ReductionData};

/// The five length-sum families.
///
/// | family   | term at `n`                     | indices        |
/// |----------|---------------------------------|----------------|
/// | Delta    | `λ(I^{n+1} ∩ J / I^n J)`        | `1..=r`        |
/// | LambdaHM | `λ(I^{n+1} / I^n J)`            | `0..=r`        |
/// | VV       | `λ(I^n ∩ J / J I^{n-1})`        | `1..=r`        |
/// | FC1      | `λ(m I^{n+1} ∩ J / m J I^n)`    | `0..=rm`       |
/// | FC2      | `λ(m I^{n+1} / m J I^n)`        | `0..=rm`       |
///
/// One more term past the range is computed and must be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Delta,
    LambdaHM,
    VV,
    FC1,
    FC2,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Delta, Family::LambdaHM, Family::VV, Family::FC1, Family::FC2];

    pub fn name(self) -> &'static str {
        match self {
            Family::Delta => "Delta",
            Family::LambdaHM => "LambdaHM",
            Family::VV => "VV",
            Family::FC1 => "FC1",
            Family::FC2 => "FC2",
        }
    }

    pub fn first_index(self) -> u32 {
        match self {
            Family::Delta | Family::VV => 1,
            Family::LambdaHM | Family::FC1 | Family::FC2 => 0,
        }
    }

    /// Index of the extra term that must vanish.
    pub fn safety_index(self, red: &ReductionData) -> u32 {
        match self {
            Family::Delta | Family::VV | Family::LambdaHM => red.r + 1,
            Family::FC1 | Family::FC2 => red.rm + 1,
        }
    }

    pub fn term(self, bl: &Blowup, n: u32) -> Result<u64, InvariantError> {
        match self {
            Family::Delta => Blowup::nested_length(&bl.i_pow_meet_j(n + 1)?, &bl.j_i_pow(n)?),
            Family::LambdaHM => Blowup::nested_length(&bl.i_pow(n + 1)?, &bl.j_i_pow(n)?),
            Family::VV => Blowup::nested_length(&bl.i_pow_meet_j(n)?, &bl.j_i_pow(n - 1)?),
            Family::FC1 => Blowup::nested_length(&bl.m_i_pow_meet_j(n + 1)?, &bl.m_j_i_pow(n)?),
            Family::FC2 => Blowup::nested_length(&bl.m_i_pow(n + 1)?, &bl.m_j_i_pow(n)?),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthTable {
    pub family: Family,
    /// All computed terms, including the vanishing one at `safety_index`.
    pub terms: BTreeMap<u32, u64>,
    pub safety_index: u32,
    pub total: u64,
}

impl LengthTable {
    pub fn term(&self, n: u32) -> u64 {
        self.terms.get(&n).copied().unwrap_or(0)
    }

    /// Sum of the terms with index at least `n`.
    pub fn total_from(&self, n: u32) -> u64 {
        self.terms.range(n..).map(|(_, v)| v).sum()
    }

    /// Indices with a nonzero term.
    pub fn support(&self) -> Vec<u32> {
        self.terms.iter().filter(|(_, &v)| v != 0).map(|(&n, _)| n).collect()
    }
}

pub fn length_sum(family: Family, bl: &Blowup, red: &ReductionData) -> Result<LengthTable, InvariantError> {
    let first = family.first_index();
    let safety = family.safety_index(red);
    // powers are built bottom-up so the parallel terms find them cached
    bl.i_pow(safety + 1)?;
    let values: Vec<u64> = (first..=safety).into_par_iter().map(|n| family.term(bl, n)).collect::<Result<_, _>>()?;
    let terms: BTreeMap<u32, u64> = (first..=safety).zip(values).collect();
    let last = terms[&safety];
    if last != 0 {
        return Err(InvariantError::SafetyTermNonzero { family, index: safety, value: last });
    }
    let total = terms.values().sum();
    Ok(LengthTable { family, terms, safety_index: safety, total })
}
