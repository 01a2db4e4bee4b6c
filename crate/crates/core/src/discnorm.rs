//! Centered and span-window discrete Morrey norms.
//!
//! Both norms are suprema over infinitely many windows. Because the
//! window-size exponent `1/q - 1/p` is nonpositive, a window can always be
//! shrunk until its extreme points are support points without lowering its
//! value, which leaves `O(s^2)` candidates per norm. The exhaustive
//! [`brute_force_norm`] enumerates every window in a bounded box and serves
//! as the oracle for both engines.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{MorreyError, Result};
use crate::seqcore::{mass_in_window, LogValue, MassIndex, MorreyParams, SparseSequence, Window};

/// Largest support the pair-enumeration engines accept.
pub const MAX_EXACT_SUPPORT: usize = 20_000;

/// Largest box width `brute_force_norm` will enumerate.
pub const MAX_BRUTE_FORCE_WIDTH: u128 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Centered,
    Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormResult {
    pub value: LogValue,
    /// Absent exactly when `value` is zero.
    pub argmax: Option<Window>,
    pub candidates_evaluated: u64,
}

impl NormResult {
    fn zero(candidates_evaluated: u64) -> Self {
        Self {
            value: LogValue::ZERO,
            argmax: None,
            candidates_evaluated,
        }
    }
}

impl Serialize for NormResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NormResult", 4)?;
        if self.value.is_zero() {
            st.serialize_field("log2_value", &Option::<f64>::None)?;
        } else {
            st.serialize_field("log2_value", &self.value.log2())?;
        }
        if self.value.value().is_finite() {
            st.serialize_field("value", &self.value.value())?;
        } else {
            st.serialize_field("value", "inf")?;
        }
        st.serialize_field("argmax", &self.argmax)?;
        st.serialize_field("candidates", &self.candidates_evaluated)?;
        st.end()
    }
}

/// Running maximum with the deterministic tie-break.
#[derive(Debug, Clone, Copy)]
struct Best {
    log2: f64,
    window: Option<Window>,
    evaluated: u64,
}

impl Best {
    const NONE: Best = Best {
        log2: f64::NEG_INFINITY,
        window: None,
        evaluated: 0,
    };

    #[inline]
    fn offer(&mut self, log2: f64, window: Window) {
        self.evaluated += 1;
        let better = match log2.total_cmp(&self.log2) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self
                .window
                .is_none_or(|w| window.tie_order(&w) == Ordering::Less),
        };
        if better && log2 > f64::NEG_INFINITY {
            self.log2 = log2;
            self.window = Some(window);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        let evaluated = self.evaluated + other.evaluated;
        if let Some(w) = other.window {
            self.offer(other.log2, w);
        }
        self.evaluated = evaluated;
        self
    }

    fn into_result(self) -> NormResult {
        match self.window {
            Some(w) => NormResult {
                value: LogValue::from_log2(self.log2),
                argmax: Some(w),
                candidates_evaluated: self.evaluated,
            },
            None => NormResult::zero(self.evaluated),
        }
    }
}

#[inline]
fn log2_window_value(alpha: f64, inv_p: f64, cardinality: f64, mass: f64) -> f64 {
    if mass <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let size_term = if alpha == 0.0 {
        0.0
    } else {
        alpha * cardinality.log2()
    };
    size_term + inv_p * mass.log2()
}

/// `|w|^(1/q - 1/p) * (sum_{j in w} |x_j|^p)^(1/p)`, evaluated in log2.
pub fn window_value(seq: &SparseSequence, w: &Window, params: &MorreyParams) -> LogValue {
    let mass = mass_in_window(seq, w, params.p());
    LogValue::from_log2(log2_window_value(
        params.alpha(),
        params.inv_p(),
        w.cardinality() as f64,
        mass,
    ))
}

fn check_support(seq: &SparseSequence) -> Result<()> {
    if seq.len() > MAX_EXACT_SUPPORT {
        return Err(MorreyError::SupportTooLarge {
            size: seq.len(),
            limit: MAX_EXACT_SUPPORT,
        });
    }
    Ok(())
}

/// Supremum over span windows `{k, ..., k+n}`.
///
/// Evaluates every span whose endpoints are support points; ties resolve
/// to the lexicographically smallest `(k, n)`.
pub fn starred_norm(seq: &SparseSequence, params: &MorreyParams) -> Result<NormResult> {
    check_support(seq)?;
    if seq.is_empty() {
        return Ok(NormResult::zero(0));
    }
    let idx = seq.indices();
    let weights: Vec<f64> = seq
        .values()
        .iter()
        .map(|v| v.abs().powf(params.p()))
        .collect();
    let (alpha, inv_p) = (params.alpha(), params.inv_p());

    let best = (0..idx.len())
        .into_par_iter()
        .map(|i| {
            let mut best = Best::NONE;
            let (mut sum, mut comp) = (0.0f64, 0.0f64);
            for j in i..idx.len() {
                let t = sum + weights[j];
                comp += if sum.abs() >= weights[j] {
                    (sum - t) + weights[j]
                } else {
                    (weights[j] - t) + sum
                };
                sum = t;
                let n = idx[j].abs_diff(idx[i]);
                let lv = log2_window_value(alpha, inv_p, n as f64 + 1.0, sum + comp);
                best.offer(lv, Window::span(idx[i], n));
            }
            best
        })
        .reduce(|| Best::NONE, Best::merge);
    Ok(best.into_result())
}

/// Supremum over centered windows `{m-N, ..., m+N}`.
///
/// For every support pair `a_i <= a_j` the smallest centered windows
/// containing both have radius `ceil((a_j - a_i)/2)` and center
/// `floor` or `ceil` of the midpoint; each is evaluated with the true mass
/// of the whole window, which may include further support points.
pub fn centered_norm(seq: &SparseSequence, params: &MorreyParams) -> Result<NormResult> {
    check_support(seq)?;
    if seq.is_empty() {
        return Ok(NormResult::zero(0));
    }
    let index = MassIndex::new(seq, params.p());
    let idx = seq.indices();
    let (alpha, inv_p) = (params.alpha(), params.inv_p());

    let best = (0..idx.len())
        .into_par_iter()
        .map(|i| {
            let mut best = Best::NONE;
            for j in i..idx.len() {
                let d = idx[j].abs_diff(idx[i]);
                let radius = d - d / 2;
                let lo_mid = idx[i] + (d / 2) as i128;
                let hi_mid = idx[i] + radius as i128;
                let card = 2.0 * radius as f64 + 1.0;
                for m in [lo_mid, hi_mid] {
                    let r = radius as i128;
                    let mass = index.mass_in_range(m - r, m + r);
                    best.offer(
                        log2_window_value(alpha, inv_p, card, mass),
                        Window::centered(m, radius),
                    );
                    if lo_mid == hi_mid {
                        break;
                    }
                }
            }
            best
        })
        .reduce(|| Best::NONE, Best::merge);
    Ok(best.into_result())
}

pub fn norm(seq: &SparseSequence, params: &MorreyParams, kind: NormKind) -> Result<NormResult> {
    match kind {
        NormKind::Centered => centered_norm(seq, params),
        NormKind::Span => starred_norm(seq, params),
    }
}

/// Exhaustive maximum over every window of `kind` lying inside
/// `[min_support - margin, max_support + margin]`.
///
/// Values are computed in the linear domain with plain summation and
/// `powf`, independently of the log-domain engines.
pub fn brute_force_norm(
    seq: &SparseSequence,
    params: &MorreyParams,
    kind: NormKind,
    index_margin: u64,
) -> Result<NormResult> {
    let (Some(first), Some(last)) = (seq.min_index(), seq.max_index()) else {
        return Ok(NormResult::zero(0));
    };
    let margin = index_margin as i128;
    let overflow = || MorreyError::IndexOverflow("enumeration box".into());
    let lo = first.checked_sub(margin).ok_or_else(overflow)?;
    let hi = last.checked_add(margin).ok_or_else(overflow)?;
    let width = hi.abs_diff(lo) + 1;
    if width > MAX_BRUTE_FORCE_WIDTH {
        return Err(MorreyError::InfeasibleEnumeration {
            width,
            limit: MAX_BRUTE_FORCE_WIDTH,
        });
    }
    let width = width as usize;
    let mut dense = vec![0.0f64; width];
    for (i, v) in seq.iter() {
        dense[(i - lo) as usize] = v.abs().powf(params.p());
    }
    let (alpha, inv_p) = (params.alpha(), params.inv_p());
    let value = |card: usize, mass: f64| (card as f64).powf(alpha) * mass.powf(inv_p);

    let mut best_value = 0.0f64;
    let mut best_window = None;
    let mut evaluated = 0u64;
    match kind {
        NormKind::Span => {
            for k in 0..width {
                let mut mass = 0.0;
                for n in 0..(width - k) {
                    mass += dense[k + n];
                    evaluated += 1;
                    let v = value(n + 1, mass);
                    if v > best_value {
                        best_value = v;
                        best_window = Some(Window::span(lo + k as i128, n as u128));
                    }
                }
            }
        }
        NormKind::Centered => {
            for c in 0..width {
                let mut mass = dense[c];
                let mut r = 0usize;
                loop {
                    evaluated += 1;
                    let v = value(2 * r + 1, mass);
                    if v > best_value {
                        best_value = v;
                        best_window = Some(Window::centered(lo + c as i128, r as u128));
                    }
                    if r + 1 > c || c + r + 1 >= width {
                        break;
                    }
                    r += 1;
                    mass += dense[c - r] + dense[c + r];
                }
            }
        }
    }
    Ok(NormResult {
        value: LogValue::from_linear(best_value),
        argmax: best_window,
        candidates_evaluated: evaluated,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ProfilePoint {
    pub window: Window,
    #[serde(serialize_with = "as_decimal")]
    pub cardinality: u128,
    pub mass: f64,
    pub value: LogValue,
}

fn as_decimal<S: Serializer>(x: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Mass and window value for each requested window, in order.
pub fn prefix_profile(
    seq: &SparseSequence,
    params: &MorreyParams,
    windows: &[Window],
) -> Vec<ProfilePoint> {
    let index = MassIndex::new(seq, params.p());
    windows
        .iter()
        .map(|w| {
            let mass = index.mass(w);
            let cardinality = w.cardinality();
            let value = LogValue::from_log2(log2_window_value(
                params.alpha(),
                params.inv_p(),
                cardinality as f64,
                mass,
            ));
            ProfilePoint {
                window: *w,
                cardinality,
                mass,
                value,
            }
        })
        .collect()
}
