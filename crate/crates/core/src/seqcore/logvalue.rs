use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A nonnegative quantity stored by its base-2 logarithm.
///
/// Exact zero is represented by `log2_value == -inf` and orders below every
/// positive value. `linear_value` is `2^log2_value` and becomes `+inf` once
/// the quantity leaves the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    log2_value: f64,
    linear_value: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        log2_value: f64::NEG_INFINITY,
        linear_value: 0.0,
    };

    pub fn from_log2(log2_value: f64) -> Self {
        debug_assert!(!log2_value.is_nan());
        if log2_value == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log2_value,
            linear_value: log2_value.exp2(),
        }
    }

    pub fn from_linear(x: f64) -> Self {
        assert!(x >= 0.0, "LogValue must be nonnegative, got {x}");
        if x == 0.0 {
            return Self::ZERO;
        }
        Self {
            log2_value: x.log2(),
            linear_value: x,
        }
    }

    pub fn log2(&self) -> f64 {
        self.log2_value
    }

    pub fn value(&self) -> f64 {
        self.linear_value
    }

    pub fn is_zero(&self) -> bool {
        self.log2_value == f64::NEG_INFINITY
    }

    /// `self / other` as a log value; `other` must be nonzero.
    pub fn ratio(&self, other: &LogValue) -> LogValue {
        assert!(!other.is_zero(), "division by a zero LogValue");
        Self::from_log2(self.log2_value - other.log2_value)
    }
}

impl Eq for LogValue {}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.log2_value.total_cmp(&other.log2_value)
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogValue", 2)?;
        if self.is_zero() {
            st.serialize_field("log2_value", &Option::<f64>::None)?;
        } else {
            st.serialize_field("log2_value", &self.log2_value)?;
        }
        if self.linear_value.is_finite() {
            st.serialize_field("value", &self.linear_value)?;
        } else {
            st.serialize_field("value", "inf")?;
        }
        st.end()
    }
}
