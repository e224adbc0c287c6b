use rayon::prelude::*;
use serde::Serialize;

use super::{Blowup, InvariantError, ReductionData};
use crate::ideal::Ideal;

/// `h(t) / (1-t)^k` together with the Hilbert function it was read off from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub denominator_exponent: u32,
    pub e0: i64,
    pub e1: i64,
    /// Hilbert function values at `0..=window`.
    pub function: Vec<u64>,
}

impl HilbertSeries {
    /// Multiplies the function by `(1-t)^k` and requires the last
    /// `max(k, 1)` coefficients of the window to vanish.
    pub fn from_function(target: &'static str, function: Vec<u64>, k: u32) -> Result<Self, InvariantError> {
        let window = function.len() as u32 - 1;
        let tail_start = function.len().saturating_sub(k.max(1) as usize);
        let mut coeffs: Vec<i64> = function.iter().map(|&v| v as i64).collect();
        for _ in 0..k {
            for i in (1..coeffs.len()).rev() {
                coeffs[i] -= coeffs[i - 1];
            }
        }
        if tail_start == 0 || coeffs[tail_start..].iter().any(|&c| c != 0) {
            return Err(InvariantError::WindowTooSmall { target, window });
        }
        coeffs.truncate(tail_start);
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        let (e0, e1) = hilbert_coefficients(&coeffs);
        Ok(HilbertSeries { numerator: coeffs, denominator_exponent: k, e0, e1, function })
    }

    /// Coefficient of `t^n` in the expansion of the series.
    pub fn coefficient(&self, n: usize) -> i64 {
        let k = self.denominator_exponent as i64;
        // [t^j] (1-t)^{-k} = C(j + k - 1, k - 1)
        let binom = |j: i64| -> i64 {
            if k == 0 {
                return i64::from(j == 0);
            }
            let mut acc: i64 = 1;
            for i in 1..k {
                acc = acc * (j + i) / i;
            }
            acc
        };
        self.numerator.iter().enumerate().filter(|(i, _)| *i <= n).map(|(i, &h)| h * binom((n - i) as i64)).sum()
    }
}

/// `(h(1), h'(1))`.
pub fn hilbert_coefficients(numerator: &[i64]) -> (i64, i64) {
    let e0 = numerator.iter().sum();
    let e1 = numerator.iter().enumerate().map(|(i, &h)| i as i64 * h).sum();
    (e0, e1)
}

/// `λ(I^n / I^{n+1})` for `n = 0..=window`.
pub fn g_function(i: &Ideal, window: u32) -> Result<Vec<u64>, InvariantError> {
    i.power(window + 1)?;
    let colengths: Vec<u64> = (0..=window + 1).into_par_iter().map(|n| Ok(i.power(n)?.local_colength()?)).collect::<Result<_, InvariantError>>()?;
    Ok(colengths.windows(2).map(|w| w[1] - w[0]).collect())
}

/// The window `r + d + 2` used by default for series and regularity checks.
pub fn default_window(bl: &Blowup, red: &ReductionData) -> u32 {
    red.r + bl.dimension() + 2
}

/// Tries the default window, then widens it one step at a time up to twice
/// its size.
fn widening(bl: &Blowup, red: &ReductionData, mut attempt: impl FnMut(u32) -> Result<HilbertSeries, InvariantError>) -> Result<HilbertSeries, InvariantError> {
    let start = default_window(bl, red);
    let mut window = start;
    loop {
        match attempt(window) {
            Err(InvariantError::WindowTooSmall { .. }) if window < 2 * start => window += 1,
            other => return other,
        }
    }
}

pub fn hilbert_series_g(bl: &Blowup, red: &ReductionData) -> Result<HilbertSeries, InvariantError> {
    widening(bl, red, |w| hilbert_series_g_window(bl, w))
}

pub fn hilbert_series_g_window(bl: &Blowup, window: u32) -> Result<HilbertSeries, InvariantError> {
    let function = g_function(bl.i(), window)?;
    HilbertSeries::from_function("G", function, bl.dimension())
}

/// Series of the fiber cone from `μ(I^n)`.
pub fn hilbert_series_f(bl: &Blowup, red: &ReductionData) -> Result<HilbertSeries, InvariantError> {
    widening(bl, red, |w| hilbert_series_f_window(bl, w))
}

pub fn hilbert_series_f_window(bl: &Blowup, window: u32) -> Result<HilbertSeries, InvariantError> {
    bl.i_pow(window)?;
    let function: Vec<u64> = (0..=window).into_par_iter().map(|n| bl.mingens_i_pow(n)).collect::<Result<_, _>>()?;
    HilbertSeries::from_function("F", function, bl.dimension())
}
