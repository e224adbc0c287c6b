use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::PolyError;

/// Exponent vector of a monomial. Its length is the ambient variable count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect()))
    }

    /// Exponent-wise saturating difference, i.e. `self / gcd(self, other)`.
    pub fn quotient_by_gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The variable index if this monomial is a pure power `x_i^e` with `e > 0`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Same exponents placed in a larger ambient ring starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Monomial {
        let mut m = Self::one(nvars);
        m.0[offset..offset + self.nvars()].copy_from_slice(&self.0);
        m
    }

    /// Drops the first `count` variables, which must have zero exponent.
    pub fn drop_leading(&self, count: usize) -> Monomial {
        debug_assert!(self.0[..count].iter().all(|&e| e == 0));
        Monomial(SmallVec::from_slice(&self.0[count..]))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Supported monomial orders. Variables are ordered x_0 > x_1 > ... .
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum MonomialOrder {
    #[default]
    GrevLex,
    Lex,
    /// Product of two graded reverse lexicographic orders: the first `block`
    /// variables are compared first, so every monomial involving them is
    /// larger than every monomial that does not.
    Elimination { block: usize },
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination { block } => {
                let block = block.min(a.len());
                grevlex(&a[..block], &b[..block]).then_with(|| grevlex(&a[block..], &b[block..]))
            }
        }
    }

    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, PolyError> {
        if a.nvars() != b.nvars() {
            return Err(PolyError::ArityMismatch { left: a.nvars(), right: b.nvars() });
        }
        Ok(self.compare(a, b))
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".to_string(),
            MonomialOrder::Lex => "lex".to_string(),
            MonomialOrder::Elimination { block } => format!("elim{block}"),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}
