//! The two 0/1 counterexample families and the selection of their integer
//! parameters.
//!
//! The *new* family puts a unit at `0`, `1` and at every point of the blocks
//! `S_n = { beta_{n-1} + j * 2^{nw} : j = 1..2^{n(v-w)} }`, where
//! `beta_n = 1 + 2^v + ... + 2^{nv}`. The *legacy* family is the symmetric
//! sequence with a solid central block `|j| <= 2^{w+v}` and sparse
//! arithmetic blocks ending at `±2^{k(w+v)}`.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{MorreyError, Result};
use crate::seqcore::SparseSequence;

pub type Rational = Ratio<i128>;

/// Generators refuse to materialize more support points than this.
pub const MAX_GENERATED_SUPPORT: usize = 1 << 21;

/// Default truncation cap for `n_max` / `k_max`.
pub const DEFAULT_TRUNCATION_CAP: u32 = 8;

const MAX_SNAP_DENOMINATOR: i128 = 1_000_000;
const LEGACY_SEARCH_LIMIT: u64 = 1_000_000;

/// Snaps a real to the simplest rational within `1e-12` relative error,
/// so that exponents such as `4/3` typed as `1.3333333333333333` compare
/// exactly.
pub fn snap_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(MorreyError::Precondition(format!(
            "{x} is not a finite real"
        )));
    }
    let tol = 1e-12 * x.abs().max(1e-300);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_SNAP_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Ok(Ratio::new(h1, k1));
        }
        let frac = rest - a as f64;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    Err(MorreyError::Precondition(format!(
        "{x} has no rational representation with denominator <= {MAX_SNAP_DENOMINATOR}"
    )))
}

fn pow2(exp: u64) -> Option<i128> {
    if exp >= 127 {
        None
    } else {
        Some(1i128 << exp)
    }
}

fn overflow(what: String) -> MorreyError {
    MorreyError::ParameterOverflow(what)
}

/// `beta_n = sum_{i=0..n} 2^{iv}`, or `None` on `i128` overflow.
pub fn beta(v: u32, n: u32) -> Option<i128> {
    (0..=n as u64).try_fold(0i128, |acc, i| acc.checked_add(pow2(i * v as u64)?))
}

/// Parameters of the new counterexample sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NewSeqSpec {
    v: u32,
    w: u32,
    n_max: u32,
}

impl NewSeqSpec {
    pub fn new(v: u32, w: u32, n_max: u32) -> Result<Self> {
        if w < 1 || v <= w {
            return Err(MorreyError::Precondition(format!(
                "new sequence needs v > w >= 1, got v = {v}, w = {w}"
            )));
        }
        if beta(v, n_max).is_none() {
            return Err(overflow(format!(
                "beta_{n_max} = 1 + 2^{v} + ... + 2^{}",
                n_max as u64 * v as u64
            )));
        }
        let size = Self::support_len_for(v, w, n_max)
            .filter(|&s| s <= MAX_GENERATED_SUPPORT as u128)
            .ok_or(MorreyError::SupportTooLarge {
                size: usize::MAX,
                limit: MAX_GENERATED_SUPPORT,
            })?;
        debug_assert!(size >= 2);
        Ok(Self { v, w, n_max })
    }

    /// Largest `n_max <= cap` for which the spec is constructible.
    pub fn with_default_truncation(v: u32, w: u32, cap: u32) -> Result<Self> {
        let mut last = Self::new(v, w, 0)?;
        for n in 1..=cap {
            match Self::new(v, w, n) {
                Ok(spec) => last = spec,
                Err(_) => break,
            }
        }
        Ok(last)
    }

    fn support_len_for(v: u32, w: u32, n_max: u32) -> Option<u128> {
        let gap = (v - w) as u64;
        (1..=n_max as u64).try_fold(2u128, |acc, n| {
            let e = n.checked_mul(gap)?;
            if e >= 128 {
                return None;
            }
            acc.checked_add(1u128 << e)
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn with_n_max(&self, n_max: u32) -> Result<Self> {
        Self::new(self.v, self.w, n_max)
    }

    pub fn beta(&self, n: u32) -> i128 {
        assert!(n <= self.n_max, "beta_{n} beyond n_max = {}", self.n_max);
        beta(self.v, n).expect("validated at construction")
    }

    pub fn support_len(&self) -> usize {
        Self::support_len_for(self.v, self.w, self.n_max).unwrap() as usize
    }

    /// Number of points in block `S_n`, `2^{n(v-w)}`.
    pub fn block_len(&self, n: u32) -> u128 {
        1u128 << (n as u64 * (self.v - self.w) as u64)
    }

    /// Spacing inside block `S_n`, `2^{nw}`.
    pub fn block_step(&self, n: u32) -> i128 {
        1i128 << (n as u64 * self.w as u64)
    }
}

/// Materializes `{0, 1} ∪ S_1 ∪ ... ∪ S_{n_max}` as a 0/1 sequence.
pub fn generate_new_sequence(spec: &NewSeqSpec) -> SparseSequence {
    let mut indices = Vec::with_capacity(spec.support_len());
    indices.extend([0i128, 1]);
    for n in 1..=spec.n_max {
        let start = spec.beta(n - 1);
        let step = spec.block_step(n);
        let count = spec.block_len(n) as i128;
        indices.extend((1..=count).map(|j| start + j * step));
    }
    let values = vec![1.0; indices.len()];
    SparseSequence::from_sorted_unchecked(indices, values)
}

/// Parameters of the legacy sequence; `k0` is derived from `v` and `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LegacySeqSpec {
    v: u32,
    w: u32,
    k_max: u32,
    k0: u32,
}

impl LegacySeqSpec {
    pub fn new(v: u32, w: u32, k_max: u32) -> Result<Self> {
        if v < 1 || w < 1 {
            return Err(MorreyError::Precondition(format!(
                "legacy sequence needs v, w >= 1, got v = {v}, w = {w}"
            )));
        }
        if k_max < 1 {
            return Err(MorreyError::Precondition(
                "legacy sequence needs k_max >= 1".into(),
            ));
        }
        let k0 = legacy_k0(v, w)?;
        let spec = Self { v, w, k_max, k0 };
        if pow2(k_max as u64 * (v + w) as u64).is_none() || pow2((v + w) as u64 + 1).is_none() {
            return Err(overflow(format!("2^{}", k_max as u64 * (v + w) as u64)));
        }
        let size = spec.support_upper_bound();
        if size > MAX_GENERATED_SUPPORT as u128 {
            return Err(MorreyError::SupportTooLarge {
                size: size.min(usize::MAX as u128) as usize,
                limit: MAX_GENERATED_SUPPORT,
            });
        }
        Ok(spec)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    /// `2^{w+v}`, the half-width of the solid central block.
    pub fn central_radius(&self) -> i128 {
        1i128 << (self.v + self.w)
    }

    /// `2^{k(w+v)}`, the outer end of block `k`.
    pub fn block_end(&self, k: u32) -> i128 {
        1i128 << (k as u64 * (self.v + self.w) as u64)
    }

    /// `2^{k(w+v-2)}`, the length of block `k`.
    pub fn block_extent(&self, k: u32) -> i128 {
        1i128 << (k as u64 * (self.v + self.w - 2) as u64)
    }

    pub fn block_step(&self, k: u32) -> i128 {
        1i128 << (k as u64 * self.w as u64)
    }

    /// Points per side in block `k`: `0..=extent/step`.
    pub fn block_len(&self, k: u32) -> i128 {
        self.block_extent(k) / self.block_step(k) + 1
    }

    fn support_upper_bound(&self) -> u128 {
        let central = 2 * self.central_radius() as u128 + 1;
        (self.k0..=self.k_max).fold(central, |acc, k| {
            acc.saturating_add(2 * self.block_len(k) as u128)
        })
    }
}

/// Smallest positive `k0` with `1 - 2^{-2 k0} > 2^{-(w+v-1)}`.
fn legacy_k0(v: u32, w: u32) -> Result<u32> {
    let e = (v + w - 1) as u64;
    for k in 1u32..=62 {
        let four_k = 1u128 << (2 * k);
        // (4^k - 1) * 2^e > 4^k, with 2^e capped where it can only help.
        let lhs = (four_k - 1).saturating_mul(1u128 << e.min(64));
        if lhs > four_k {
            return Ok(k);
        }
    }
    Err(MorreyError::Precondition(format!(
        "no k0 exists for v = {v}, w = {w}"
    )))
}

/// Materializes the legacy sequence truncated at `k_max`.
///
/// Block `k` is read as the progression from `2^{k(w+v)}` down to
/// `2^{k(w+v)} - 2^{k(w+v-2)}` with step `2^{kw}`, mirrored to negative
/// indices; blocks overlapping the central block are merged into it.
pub fn generate_legacy_sequence(spec: &LegacySeqSpec) -> SparseSequence {
    let r = spec.central_radius();
    let mut support: Vec<i128> = (-r..=r).collect();
    for k in spec.k0..=spec.k_max {
        let end = spec.block_end(k);
        let step = spec.block_step(k);
        for i in 0..spec.block_len(k) {
            let j = end - i * step;
            if j > r {
                support.push(j);
                support.push(-j);
            }
        }
    }
    SparseSequence::indicator(support)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b)
        .ok_or_else(|| overflow("Stern-Brocot descent".into()))
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b)
        .ok_or_else(|| overflow("Stern-Brocot descent".into()))
}

/// The fraction `v/w` in the open interval `(lo, hi)` with the smallest
/// denominator, and among those the smallest numerator.
///
/// Walks the Stern-Brocot tree from the root, taking runs of equal turns
/// in one step, and stops at the first mediant strictly inside.
pub fn choose_vw(lo: Rational, hi: Rational) -> Result<(u64, u64)> {
    if lo.is_negative() {
        return Err(MorreyError::Precondition(format!(
            "choose_vw needs a nonnegative lower end, got {lo}"
        )));
    }
    if lo >= hi {
        return Err(MorreyError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let (a, b) = (*lo.numer(), *lo.denom());
    let (c, d) = (*hi.numer(), *hi.denom());
    let (mut ln, mut ld) = (0i128, 1i128);
    let (mut rn, mut rd) = (1i128, 0i128);
    loop {
        let (mn, md) = (ln + rn, ld + rd);
        // mediant <= lo  <=>  b*mn <= a*md
        if mul(b, mn)? <= mul(a, md)? {
            let room = sub(mul(a, ld)?, mul(b, ln)?)?;
            let drift = sub(mul(b, rn)?, mul(a, rd)?)?;
            let k = room / drift;
            ln += mul(k, rn)?;
            ld += mul(k, rd)?;
        } else if mul(d, mn)? >= mul(c, md)? {
            let room = sub(mul(d, rn)?, mul(c, rd)?)?;
            let drift = sub(mul(c, ld)?, mul(d, ln)?)?;
            let k = room / drift;
            rn += mul(k, ln)?;
            rd += mul(k, ld)?;
        } else {
            let v = u64::try_from(mn).map_err(|_| overflow(format!("v = {mn}")))?;
            let w = u64::try_from(md).map_err(|_| overflow(format!("w = {md}")))?;
            return Ok((v, w));
        }
    }
}

fn smallest_integer_above(x: &Rational) -> i128 {
    x.floor().to_integer() + 1
}

/// Smallest `w >= 1`, then smallest integer `v`, with
/// `(q/p2 - 1) w + 2q/p2 < v < (q/p1 - 1) w + 2`.
pub fn choose_vw_legacy(p1: f64, p2: f64, q: f64) -> Result<(u64, u64)> {
    if !(p1 >= 1.0 && p1 < p2 && p2 <= q && q.is_finite()) {
        return Err(MorreyError::Precondition(format!(
            "choose_vw_legacy needs 1 <= p1 < p2 <= q, got p1 = {p1}, p2 = {p2}, q = {q}"
        )));
    }
    let (p1, p2, q) = (snap_rational(p1)?, snap_rational(p2)?, snap_rational(q)?);
    let one = Rational::one();
    let two = Rational::from_integer(2);
    for w in 1..=LEGACY_SEARCH_LIMIT {
        let wr = Rational::from_integer(w as i128);
        let lo = (q / p2 - one) * wr + two * q / p2;
        let hi = (q / p1 - one) * wr + two;
        let v = smallest_integer_above(&lo);
        if Rational::from_integer(v) < hi {
            let v = v.to_u64().ok_or_else(|| overflow(format!("v = {v}")))?;
            return Ok((v, w));
        }
    }
    Err(MorreyError::SearchExhausted {
        limit: LEGACY_SEARCH_LIMIT,
    })
}

fn check_pair(p: f64, q: f64, label: &str) -> Result<()> {
    if !(p >= 1.0 && p <= q && q.is_finite()) {
        return Err(MorreyError::Precondition(format!(
            "need 1 <= p{label} <= q{label}, got p{label} = {p}, q{label} = {q}"
        )));
    }
    Ok(())
}

/// Counterexample to `l^{p2}_{q2} ⊆ l^{p1}_{q1}` when `p1/q1 > p2/q2`.
///
/// Picks `q1/p1 < v/w < q2/p2` and the largest default truncation that
/// stays within the generator limits.
pub fn cross_counterexample(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<Option<NewSeqSpec>> {
    check_pair(p1, q1, "1")?;
    check_pair(p2, q2, "2")?;
    let (p1, q1) = (snap_rational(p1)?, snap_rational(q1)?);
    let (p2, q2) = (snap_rational(p2)?, snap_rational(q2)?);
    if p1 / q1 <= p2 / q2 {
        return Ok(None);
    }
    let (v, w) = choose_vw(q1 / p1, q2 / p2)?;
    let v = u32::try_from(v).map_err(|_| overflow(format!("v = {v}")))?;
    let w = u32::try_from(w).map_err(|_| overflow(format!("w = {w}")))?;
    NewSeqSpec::with_default_truncation(v, w, DEFAULT_TRUNCATION_CAP).map(Some)
}

/// Parses `"a/b"`, a decimal, or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || MorreyError::Precondition(format!("cannot parse {text:?} as a rational"));
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Ok(n) = text.parse::<i128>() {
        return Ok(Rational::from_integer(n));
    }
    let x: f64 = text.parse().map_err(|_| bad())?;
    snap_rational(x)
}
