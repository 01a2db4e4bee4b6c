use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};
use serde_json::Value;

use super::window::Window;
use crate::error::{MorreyError, Result};

/// A finitely supported real sequence on the integers.
///
/// Indices are strictly increasing, stored values are nonzero, and every
/// index not listed is implicitly zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSequence {
    indices: Vec<i128>,
    values: Vec<f64>,
}

impl SparseSequence {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a sequence from raw `(index, value)` pairs in any order.
    ///
    /// Zeros are dropped and repeated indices with equal values merged; a
    /// repeated index carrying two different values is an error.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i128, f64)>,
    {
        let mut raw: Vec<(i128, f64)> = pairs.into_iter().collect();
        for &(index, value) in &raw {
            if !value.is_finite() {
                return Err(MorreyError::NonFiniteValue { index, value });
            }
        }
        raw.sort_by_key(|&(i, _)| i);
        let mut indices = Vec::with_capacity(raw.len());
        let mut values = Vec::with_capacity(raw.len());
        let mut last: Option<(i128, f64)> = None;
        for (index, value) in raw {
            if let Some((li, lv)) = last {
                if li == index {
                    if lv != value {
                        return Err(MorreyError::ConflictingDuplicate {
                            index,
                            first: lv,
                            second: value,
                        });
                    }
                    continue;
                }
            }
            last = Some((index, value));
            if value != 0.0 {
                indices.push(index);
                values.push(value);
            }
        }
        Ok(Self { indices, values })
    }

    /// Indicator sequence of the given index set (duplicates allowed).
    pub fn indicator<I: IntoIterator<Item = i128>>(support: I) -> Self {
        let mut indices: Vec<i128> = support.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        let values = vec![1.0; indices.len()];
        Self { indices, values }
    }

    /// Wraps already sorted, deduplicated, nonzero entries.
    pub(crate) fn from_sorted_unchecked(indices: Vec<i128>, values: Vec<f64>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(values.iter().all(|&v| v != 0.0));
        Self { indices, values }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[i128] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (i128, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    /// Value at an arbitrary index (zero off the support).
    pub fn get(&self, index: i128) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn min_index(&self) -> Option<i128> {
        self.indices.first().copied()
    }

    pub fn max_index(&self) -> Option<i128> {
        self.indices.last().copied()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn shifted(&self, offset: i128) -> Result<Self> {
        let indices = self
            .indices
            .iter()
            .map(|&i| {
                i.checked_add(offset)
                    .ok_or_else(|| MorreyError::IndexOverflow(format!("{i} + {offset}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            indices,
            values: self.values.clone(),
        })
    }

    /// The sequence `j -> x_{-j}`.
    pub fn reflected(&self) -> Result<Self> {
        let mut indices = Vec::with_capacity(self.len());
        for &i in self.indices.iter().rev() {
            indices.push(
                i.checked_neg()
                    .ok_or_else(|| MorreyError::IndexOverflow(format!("-({i})")))?,
            );
        }
        let values = self.values.iter().rev().copied().collect();
        Ok(Self { indices, values })
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::empty();
        }
        Self {
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Restriction to the closed index range `[lo, hi]`.
    pub fn restricted(&self, lo: i128, hi: i128) -> Self {
        let a = self.indices.partition_point(|&i| i < lo);
        let b = self.indices.partition_point(|&i| i <= hi);
        let (a, b) = (a.min(b), b);
        Self {
            indices: self.indices[a..b].to_vec(),
            values: self.values[a..b].to_vec(),
        }
    }

    /// Positions `[a, b)` of support points inside `[lo, hi]`.
    pub(crate) fn position_range(&self, lo: i128, hi: i128) -> (usize, usize) {
        let a = self.indices.partition_point(|&i| i < lo);
        let b = self.indices.partition_point(|&i| i <= hi);
        (a, b.max(a))
    }

    /// Parses `{"entries": [[index_string, value], ...]}`.
    ///
    /// Indices may be decimal strings or JSON integers. Extra top-level keys
    /// (such as a generator's `metadata` block) are ignored.
    pub fn from_json_value(doc: &Value) -> Result<Self> {
        let entries = doc
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| MorreyError::MalformedSequence("missing \"entries\" array".into()))?;
        let mut pairs = Vec::with_capacity(entries.len());
        for (pos, entry) in entries.iter().enumerate() {
            let bad =
                |why: &str| MorreyError::MalformedSequence(format!("entry {pos} ({entry}): {why}"));
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad("expected [index, value]"))?;
            let index = match &pair[0] {
                Value::String(s) => s
                    .trim()
                    .parse::<i128>()
                    .map_err(|_| bad("index is not a 128-bit decimal integer"))?,
                Value::Number(n) => match (n.as_i64(), n.as_u64()) {
                    (Some(i), _) => i as i128,
                    (None, Some(u)) => u as i128,
                    _ => return Err(bad("numeric index must be an integer")),
                },
                _ => return Err(bad("index must be a string or integer")),
            };
            let value = pair[1]
                .as_f64()
                .ok_or_else(|| bad("value must be a number"))?;
            pairs.push((index, value));
        }
        Self::from_pairs(pairs)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| MorreyError::MalformedSequence(e.to_string()))?;
        Self::from_json_value(&doc)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("sequence serialization is infallible")
    }
}

struct Entries<'a>(&'a SparseSequence);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for (i, v) in self.0.iter() {
            seq.serialize_element(&(i.to_string(), v))?;
        }
        seq.end()
    }
}

impl Serialize for SparseSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SparseSequence", 1)?;
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Cumulative `|x_t|^p` over the sorted support, kept as an unevaluated
/// double-double so that range differences stay accurate to the size of
/// the range, not the size of the running total.
#[derive(Debug, Clone)]
pub struct PrefixMass {
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl PrefixMass {
    pub fn new(seq: &SparseSequence, p: f64) -> Self {
        Self::from_weights(seq.values().iter().map(|v| v.abs().powf(p)))
    }

    pub fn from_weights<I: IntoIterator<Item = f64>>(weights: I) -> Self {
        let weights = weights.into_iter();
        let (n, _) = weights.size_hint();
        let mut hi = Vec::with_capacity(n + 1);
        let mut lo = Vec::with_capacity(n + 1);
        hi.push(0.0);
        lo.push(0.0);
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for w in weights {
            let (ns, err) = two_sum(s, w);
            s = ns;
            c += err;
            hi.push(s);
            lo.push(c);
        }
        Self { hi, lo }
    }

    pub fn len(&self) -> usize {
        self.hi.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of the weights at positions `[a, b)`.
    #[inline]
    pub fn range(&self, a: usize, b: usize) -> f64 {
        if b <= a {
            return 0.0;
        }
        (self.hi[b] - self.hi[a]) + (self.lo[b] - self.lo[a])
    }

    pub fn total(&self) -> f64 {
        self.range(0, self.len())
    }

    /// Inclusive cumulative sums, one per support point.
    pub fn cumulative(&self) -> Vec<f64> {
        (1..self.hi.len())
            .map(|i| self.hi[i] + self.lo[i])
            .collect()
    }
}

/// Cumulative masses `sum_{t <= i} |x_t|^p`, one per support point.
pub fn prefix_masses(seq: &SparseSequence, p: f64) -> Vec<f64> {
    PrefixMass::new(seq, p).cumulative()
}

/// `sum_{j in w} |x_j|^p`: binary search for the support points inside
/// `w`, then a compensated sum over them.
pub fn mass_in_window(seq: &SparseSequence, w: &Window, p: f64) -> f64 {
    let (lo, hi) = w.bounds();
    let (a, b) = seq.position_range(lo, hi);
    let (s, c) = seq.values()[a..b]
        .iter()
        .fold((0.0f64, 0.0f64), |(s, c), v| {
            let (ns, err) = two_sum(s, v.abs().powf(p));
            (ns, c + err)
        });
    s + c
}

/// A sequence together with its prefix masses for one exponent `p`.
///
/// Answers window masses in `O(log s)` by binary search plus prefix
/// differencing.
#[derive(Debug, Clone)]
pub struct MassIndex<'a> {
    seq: &'a SparseSequence,
    prefix: PrefixMass,
}

impl<'a> MassIndex<'a> {
    pub fn new(seq: &'a SparseSequence, p: f64) -> Self {
        Self {
            seq,
            prefix: PrefixMass::new(seq, p),
        }
    }

    pub fn sequence(&self) -> &'a SparseSequence {
        self.seq
    }

    pub fn prefix(&self) -> &PrefixMass {
        &self.prefix
    }

    pub fn mass_in_range(&self, lo: i128, hi: i128) -> f64 {
        let (a, b) = self.seq.position_range(lo, hi);
        self.prefix.range(a, b)
    }

    pub fn mass(&self, w: &Window) -> f64 {
        let (lo, hi) = w.bounds();
        self.mass_in_range(lo, hi)
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn naive(seq: &SparseSequence, lo: i128, hi: i128, p: f64) -> f64 {
        (lo..=hi).map(|j| seq.get(j).abs().powf(p)).sum()
    }

    fn arb_seq() -> impl Strategy<Value = SparseSequence> {
        proptest::collection::vec((-60i128..60, -5.0f64..5.0), 0..25).prop_map(|v| {
            let mut seen = std::collections::BTreeMap::new();
            for (i, x) in v {
                seen.entry(i).or_insert(x);
            }
            SparseSequence::from_pairs(seen).unwrap()
        })
    }

    proptest! {
        #[test]
        fn window_mass_matches_naive_loop(
            x in arb_seq(), lo in -80i128..80, len in 0u128..100, p in 1.0f64..8.0,
        ) {
            let w = Window::span(lo, len);
            let (a, b) = w.bounds();
            let expect = naive(&x, a, b, p);
            let idx = MassIndex::new(&x, p);
            for got in [mass_in_window(&x, &w, p), idx.mass(&w)] {
                prop_assert!((got - expect).abs() <= 1e-12 * expect.max(f64::MIN_POSITIVE));
            }
        }

        #[test]
        fn window_mass_is_translation_equivariant(
            x in arb_seq(), m in -80i128..80, r in 0u128..40, p in 1.0f64..8.0,
            offset in -1_000_000i128..1_000_000,
        ) {
            let w = Window::centered(m, r);
            let base = mass_in_window(&x, &w, p);
            let moved = mass_in_window(&x.shifted(offset).unwrap(), &w.translated(offset), p);
            prop_assert_eq!(base, moved);
        }
    }
}
