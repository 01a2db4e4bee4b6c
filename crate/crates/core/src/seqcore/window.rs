use std::cmp::Ordering;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A finite integer window.
///
/// `Centered { m, radius }` is `{m - radius, ..., m + radius}` (odd
/// cardinality); `Span { k, n }` is `{k, ..., k + n}` (cardinality `n + 1`).
/// Both endpoints must fit in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    Centered { m: i128, radius: u128 },
    Span { k: i128, n: u128 },
}

impl Window {
    pub fn span(k: i128, n: u128) -> Self {
        Window::Span { k, n }
    }

    pub fn centered(m: i128, radius: u128) -> Self {
        Window::Centered { m, radius }
    }

    /// Span covering the closed integer range `[lo, hi]`.
    pub fn from_range(lo: i128, hi: i128) -> Self {
        assert!(lo <= hi, "empty range [{lo}, {hi}]");
        Window::Span {
            k: lo,
            n: hi.abs_diff(lo),
        }
    }

    /// Inclusive endpoints `(lo, hi)`.
    pub fn bounds(&self) -> (i128, i128) {
        match *self {
            Window::Centered { m, radius } => {
                let r = i128::try_from(radius).expect("window radius exceeds i128");
                (
                    m.checked_sub(r).expect("window lower bound overflows i128"),
                    m.checked_add(r).expect("window upper bound overflows i128"),
                )
            }
            Window::Span { k, n } => {
                let n = i128::try_from(n).expect("window length exceeds i128");
                (
                    k,
                    k.checked_add(n).expect("window upper bound overflows i128"),
                )
            }
        }
    }

    pub fn cardinality(&self) -> u128 {
        match *self {
            Window::Centered { radius, .. } => 2 * radius + 1,
            Window::Span { n, .. } => n + 1,
        }
    }

    pub fn contains(&self, index: i128) -> bool {
        let (lo, hi) = self.bounds();
        lo <= index && index <= hi
    }

    pub fn translated(&self, offset: i128) -> Self {
        match *self {
            Window::Centered { m, radius } => Window::Centered {
                m: m + offset,
                radius,
            },
            Window::Span { k, n } => Window::Span { k: k + offset, n },
        }
    }

    /// Image under `j -> -j`.
    pub fn reflected(&self) -> Self {
        match *self {
            Window::Centered { m, radius } => Window::Centered { m: -m, radius },
            Window::Span { .. } => {
                let (lo, hi) = self.bounds();
                Window::from_range(-hi, -lo)
            }
        }
    }

    fn key(&self) -> (u8, i128, u128) {
        match *self {
            Window::Centered { m, radius } => (0, m, radius),
            Window::Span { k, n } => (1, k, n),
        }
    }

    /// Lexicographic order on `(k, n)` resp. `(m, N)`, used for argmax ties.
    pub fn tie_order(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Centered { m, radius } => write!(f, "S({m},{radius})"),
            Window::Span { k, n } => write!(f, "S*({k},{n})"),
        }
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Window", 3)?;
        match self {
            Window::Centered { m, radius } => {
                st.serialize_field("kind", "centered")?;
                st.serialize_field("m", &m.to_string())?;
                st.serialize_field("N", &radius.to_string())?;
            }
            Window::Span { k, n } => {
                st.serialize_field("kind", "span")?;
                st.serialize_field("k", &k.to_string())?;
                st.serialize_field("n", &n.to_string())?;
            }
        }
        st.end()
    }
}
