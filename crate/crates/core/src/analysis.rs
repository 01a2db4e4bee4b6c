//! Finite evidence for membership and non-membership of the counterexample
//! sequences, and the inclusion criterion between discrete Morrey spaces.
//!
//! For the new sequence with `q/p2 < v/w < q/p1`, the prefix windows
//! `S*(0, beta_n)` carry span values above `3^(1/q-1/p2) 2^(n(v/q-w/p2))`,
//! which grows without bound, while every span value at exponent `p1` stays
//! below `max(1 + 2^(v-w), 2^((1+v-w)/p1))`.

use serde::Serialize;

use crate::discnorm::{prefix_profile, starred_norm, ProfilePoint};
use crate::error::{MorreyError, Result};
use crate::genseq::{
    cross_counterexample, generate_new_sequence, snap_rational, LegacySeqSpec, NewSeqSpec,
};
use crate::seqcore::{LogValue, MorreyParams, Window};

/// Slack on the boundedness comparison.
pub const BOUNDEDNESS_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Divergence,
    Boundedness,
}

/// Whether a point checks one prefix window or the full truncated norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointScope {
    Prefix,
    Supremum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificatePoint {
    pub n: u32,
    pub scope: PointScope,
    pub window: Window,
    pub computed: LogValue,
    pub bound: LogValue,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub v: u32,
    pub w: u32,
    pub n_max: u32,
    pub p: f64,
    pub q: f64,
    pub points: Vec<CertificatePoint>,
    pub overall: bool,
}

impl Certificate {
    fn new(kind: CertificateKind, spec: &NewSeqSpec, params: &MorreyParams) -> Self {
        Self {
            kind,
            v: spec.v(),
            w: spec.w(),
            n_max: spec.n_max(),
            p: params.p(),
            q: params.q(),
            points: Vec::new(),
            overall: true,
        }
    }

    fn push(&mut self, point: CertificatePoint) {
        self.overall &= point.satisfied;
        self.points.push(point);
    }
}

/// The windows `S*(0, beta_n)` for `n = 1..=n_max`.
pub fn beta_windows(spec: &NewSeqSpec) -> Vec<Window> {
    (1..=spec.n_max())
        .map(|n| Window::span(0, spec.beta(n) as u128))
        .collect()
}

/// Span values of the new sequence on `S*(0, beta_n)`, `n = 1..=n_max`.
pub fn beta_profile(spec: &NewSeqSpec, params: &MorreyParams) -> Vec<ProfilePoint> {
    prefix_profile(&generate_new_sequence(spec), params, &beta_windows(spec))
}

/// `log2` of the lower bound `3^(1/q-1/p) 2^(n(v/q-w/p))`.
pub fn divergence_bound_log2(spec: &NewSeqSpec, params: &MorreyParams, n: u32) -> f64 {
    let rate = spec.v() as f64 / params.q() - spec.w() as f64 / params.p();
    params.alpha() * 3f64.log2() + n as f64 * rate
}

/// `max(1 + 2^(v-w), 2^((1+v-w)/p))`.
pub fn boundedness_bound(spec: &NewSeqSpec, params: &MorreyParams) -> f64 {
    let gap = (spec.v() - spec.w()) as f64;
    (1.0 + gap.exp2()).max(((1.0 + gap) / params.p()).exp2())
}

fn require_points(spec: &NewSeqSpec) -> Result<()> {
    if spec.n_max() == 0 {
        return Err(MorreyError::Precondition(
            "a certificate needs n_max >= 1".into(),
        ));
    }
    Ok(())
}

/// Checks `value(S*(0, beta_n)) > 3^(1/q-1/p2) 2^(n(v/q-w/p2))` at the
/// exponents `(p2, q)` for every `n = 1..=n_max`, with no slack.
pub fn divergence_certificate(spec: &NewSeqSpec, p2: f64, q: f64) -> Result<Certificate> {
    let params = MorreyParams::new(p2, q)?;
    if p2 >= q {
        return Err(MorreyError::Precondition(format!(
            "divergence needs p2 < q, got p2 = {p2}, q = {q}"
        )));
    }
    let rate = spec.v() as f64 / q - spec.w() as f64 / p2;
    if rate <= 0.0 {
        return Err(MorreyError::Precondition(format!(
            "divergence needs v/q - w/p2 > 0, got {rate}"
        )));
    }
    require_points(spec)?;
    let mut cert = Certificate::new(CertificateKind::Divergence, spec, &params);
    for (n, pt) in (1..).zip(beta_profile(spec, &params)) {
        let bound = LogValue::from_log2(divergence_bound_log2(spec, &params, n));
        cert.push(CertificatePoint {
            n,
            scope: PointScope::Prefix,
            window: pt.window,
            satisfied: pt.value.log2() > bound.log2(),
            computed: pt.value,
            bound,
        });
    }
    Ok(cert)
}

/// Checks that the full span norm of the truncated sequence, and its value
/// on every `S*(0, beta_n)`, stays below `max(1 + 2^(v-w), 2^((1+v-w)/p1))`
/// at the exponents `(p1, q)`.
pub fn boundedness_certificate(spec: &NewSeqSpec, p1: f64, q: f64) -> Result<Certificate> {
    let params = MorreyParams::new(p1, q)?;
    if spec.v() as f64 * p1 >= q * spec.w() as f64 {
        return Err(MorreyError::Precondition(format!(
            "boundedness needs v/w < q/p1, got v/w = {}, q/p1 = {}",
            spec.v() as f64 / spec.w() as f64,
            q / p1
        )));
    }
    require_points(spec)?;
    let limit = boundedness_bound(spec, &params);
    let bound = LogValue::from_linear(limit);
    let mut cert = Certificate::new(CertificateKind::Boundedness, spec, &params);
    for (n, pt) in (1..).zip(beta_profile(spec, &params)) {
        cert.push(CertificatePoint {
            n,
            scope: PointScope::Prefix,
            window: pt.window,
            satisfied: pt.value.value() <= limit + BOUNDEDNESS_SLACK,
            computed: pt.value,
            bound,
        });
    }
    let norm = starred_norm(&generate_new_sequence(spec), &params)?;
    cert.push(CertificatePoint {
        n: spec.n_max(),
        scope: PointScope::Supremum,
        window: norm.argmax.expect("generated sequences are nonempty"),
        satisfied: norm.value.value() <= limit + BOUNDEDNESS_SLACK,
        computed: norm.value,
        bound,
    });
    Ok(cert)
}

/// Least-squares slope of `log2(value)` against `n`.
pub fn growth_exponent(points: &[(f64, LogValue)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(MorreyError::Precondition(format!(
            "growth exponent needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(_, v)| v.is_zero()) {
        return Err(MorreyError::Precondition(
            "growth exponent needs positive values".into(),
        ));
    }
    let k = points.len() as f64;
    let mean_n = points.iter().map(|(n, _)| n).sum::<f64>() / k;
    let mean_y = points.iter().map(|(_, v)| v.log2()).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (n, v) in points {
        sxy += (n - mean_n) * (v.log2() - mean_y);
        sxx += (n - mean_n) * (n - mean_n);
    }
    if sxx == 0.0 {
        return Err(MorreyError::Precondition(
            "growth exponent needs distinct n".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// The sparse block windows of the legacy sequence,
/// `[2^{k(w+v)} - 2^{k(w+v-2)}, 2^{k(w+v)}]` for `k = k0..=k_max`.
pub fn legacy_block_windows(spec: &LegacySeqSpec) -> Vec<Window> {
    (spec.k0()..=spec.k_max())
        .map(|k| {
            let end = spec.block_end(k);
            Window::from_range(end - spec.block_extent(k), end)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionVerdict {
    pub included: bool,
    /// Included and strictly smaller.
    pub proper: bool,
    pub reason: String,
    pub counterexample: Option<NewSeqSpec>,
}

/// Decides `l^{p2}_{q2} ⊆ l^{p1}_{q1}`: it holds iff `q2 <= q1` and
/// `p1/q1 <= p2/q2`.
pub fn inclusion_oracle(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<InclusionVerdict> {
    MorreyParams::new(p1, q1)?;
    MorreyParams::new(p2, q2)?;
    let (rp1, rq1) = (snap_rational(p1)?, snap_rational(q1)?);
    let (rp2, rq2) = (snap_rational(p2)?, snap_rational(q2)?);
    let q_ok = rq2 <= rq1;
    let ratio_ok = rp1 / rq1 <= rp2 / rq2;
    let included = q_ok && ratio_ok;
    let counterexample = if ratio_ok {
        None
    } else {
        cross_counterexample(p1, q1, p2, q2)?
    };
    let proper = included && rp1 / rq1 < rp2 / rq2;
    let reason = match (q_ok, ratio_ok) {
        (true, true) if proper => format!(
            "q2 = {q2} <= q1 = {q1} and p1/q1 = {} < p2/q2 = {}: inclusion holds and is proper",
            rp1 / rq1,
            rp2 / rq2
        ),
        (true, true) => format!(
            "q2 = {q2} <= q1 = {q1} and p1/q1 = p2/q2 = {}: inclusion holds",
            rp1 / rq1
        ),
        (false, true) => format!("q2 = {q2} > q1 = {q1}: inclusion fails"),
        (_, false) => format!(
            "p1/q1 = {} > p2/q2 = {}: inclusion fails, witnessed by the sequence with q1/p1 < v/w < q2/p2",
            rp1 / rq1,
            rp2 / rq2
        ),
    };
    Ok(InclusionVerdict {
        included,
        proper,
        reason,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: u32, w: u32, n: u32) -> NewSeqSpec {
        NewSeqSpec::new(v, w, n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn profile_examples() {
        let p = MorreyParams::new(2.0, 4.0).unwrap();
        let pts = beta_profile(&spec(3, 1, 2), &p);
        assert_eq!(pts[1].window, Window::span(0, 73));
        assert_eq!(pts[1].cardinality, 74);
        assert_eq!(pts[1].mass, 22.0);
        assert!(close(
            pts[1].value.value(),
            74f64.powf(-0.25) * 22f64.sqrt(),
            1e-12
        ));
        assert!(close(pts[1].value.value(), 1.59937, 2e-4));
    }

    #[test]
    fn divergence_examples() {
        let c = divergence_certificate(&spec(3, 1, 1), 2.0, 4.0).unwrap();
        assert!(c.overall);
        let pt = &c.points[0];
        assert!(close(
            pt.computed.value(),
            10f64.powf(-0.25) * 6f64.sqrt(),
            1e-12
        ));
        assert!(close(pt.computed.value(), 1.37740, 1e-4));
        assert!(close(pt.bound.value(), 0.90360, 1e-5));

        let c = divergence_certificate(&spec(3, 1, 2), 2.0, 4.0).unwrap();
        assert!(c.overall);
        assert!(close(c.points[1].computed.value(), 1.59937, 2e-4));
        assert!(close(c.points[1].bound.value(), 1.07457, 1e-5));

        assert!(matches!(
            divergence_certificate(&spec(3, 1, 2), 1.0, 4.0),
            Err(MorreyError::Precondition(_))
        ));
        assert!(divergence_certificate(&spec(3, 1, 0), 2.0, 4.0).is_err());
    }

    #[test]
    fn boundedness_examples() {
        let c = boundedness_certificate(&spec(3, 1, 2), 1.0, 4.0).unwrap();
        assert!(c.overall);
        let sup = c.points.last().unwrap();
        assert_eq!(sup.scope, PointScope::Supremum);
        assert!(close(sup.computed.value(), 2f64.powf(0.25), 1e-12));
        assert!(close(sup.bound.value(), 8.0, 1e-12));
        assert_eq!(c.points.len(), 3);

        assert!(matches!(
            boundedness_certificate(&spec(3, 1, 2), 2.0, 4.0),
            Err(MorreyError::Precondition(_))
        ));
    }

    #[test]
    fn growth_examples() {
        let pts = [
            (1.0, LogValue::from_log2(1.0)),
            (2.0, LogValue::from_log2(2.0)),
        ];
        assert!(close(growth_exponent(&pts).unwrap(), 1.0, 1e-15));
        assert!(growth_exponent(&pts[..1]).is_err());
        let same = [
            (1.0, LogValue::from_log2(1.0)),
            (1.0, LogValue::from_log2(2.0)),
        ];
        assert!(growth_exponent(&same).is_err());
    }

    #[test]
    fn inclusion_examples() {
        let v = inclusion_oracle(1.0, 2.0, 2.0, 2.0).unwrap();
        assert!(v.included && v.proper && v.counterexample.is_none());

        let v = inclusion_oracle(1.0, 2.0, 2.0, 4.0).unwrap();
        assert!(!v.included && v.counterexample.is_none());

        let v = inclusion_oracle(2.0, 2.0, 1.0, 2.0).unwrap();
        assert!(!v.included);
        let cx = v.counterexample.unwrap();
        assert_eq!((cx.v(), cx.w()), (3, 2));

        let v = inclusion_oracle(2.0, 4.0, 2.0, 4.0).unwrap();
        assert!(v.included && !v.proper);

        assert!(inclusion_oracle(3.0, 2.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn legacy_windows() {
        let spec = LegacySeqSpec::new(7, 2, 2).unwrap();
        assert_eq!(
            legacy_block_windows(&spec),
            vec![
                Window::from_range(384, 512),
                Window::from_range(245_760, 262_144)
            ]
        );
    }
}
