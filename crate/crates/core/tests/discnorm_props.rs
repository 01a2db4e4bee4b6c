mod common;

use common::{discrete_corpus, rel_err};
use morrey_core::discnorm::{brute_force_norm, centered_norm, starred_norm, NormKind};
use morrey_core::{MorreyParams, SparseSequence};
use proptest::prelude::*;

fn arb_seq() -> impl Strategy<Value = SparseSequence> {
    proptest::collection::btree_map(
        -40i128..40,
        prop_oneof![-6.0f64..-0.01, 0.01f64..6.0],
        1..20,
    )
    .prop_map(|m| SparseSequence::from_pairs(m).unwrap())
}

fn arb_params() -> impl Strategy<Value = MorreyParams> {
    (1.0f64..8.0, 0.0f64..1.0).prop_map(|(p, t)| MorreyParams::new(p, p + t * (8.0 - p)).unwrap())
}

fn span(seq: &SparseSequence, params: &MorreyParams) -> f64 {
    starred_norm(seq, params).unwrap().value.value()
}

fn centered(seq: &SparseSequence, params: &MorreyParams) -> f64 {
    centered_norm(seq, params).unwrap().value.value()
}

fn lp_norm(seq: &SparseSequence, p: f64) -> f64 {
    seq.values()
        .iter()
        .map(|v| v.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

#[test]
fn corpus_matches_brute_force() {
    for (seq, p, q) in discrete_corpus(7, 200) {
        let params = MorreyParams::new(p, q).unwrap();
        for kind in [NormKind::Span, NormKind::Centered] {
            let fast = starred_or_centered(&seq, &params, kind);
            let slow = brute_force_norm(&seq, &params, kind, 3)
                .unwrap()
                .value
                .value();
            assert!(
                rel_err(fast, slow) <= 1e-12,
                "{kind:?} p={p} q={q}: {fast} vs {slow}"
            );
        }
    }
}

fn starred_or_centered(seq: &SparseSequence, params: &MorreyParams, kind: NormKind) -> f64 {
    match kind {
        NormKind::Span => span(seq, params),
        NormKind::Centered => centered(seq, params),
    }
}

#[test]
fn pair_sequence_ratio_closed_form() {
    let pair = SparseSequence::indicator([0, 1]);
    for (p, q) in [
        (1.0, 2.0),
        (1.0, 4.0),
        (2.0, 3.0),
        (2.0, 4.0),
        (1.0, 8.0),
        (3.0, 7.0),
        (5.0, 5.0),
    ] {
        let params = MorreyParams::new(p, q).unwrap();
        let ratio = span(&pair, &params) / centered(&pair, &params);
        let expected = (1.0 / q).exp2() / (3f64.powf(params.alpha()) * (1.0 / p).exp2()).max(1.0);
        assert!(
            rel_err(ratio, expected) <= 1e-12,
            "p={p} q={q}: {ratio} vs {expected}"
        );
        let constant = 1.5f64.powf(params.gap());
        if p / q >= 1.5f64.ln() / 3f64.ln() {
            assert!(rel_err(ratio, constant) <= 1e-12);
        } else {
            assert!(ratio < constant);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_match_brute_force(seq in arb_seq(), params in arb_params()) {
        for kind in [NormKind::Span, NormKind::Centered] {
            let fast = starred_or_centered(&seq, &params, kind);
            let slow = brute_force_norm(&seq, &params, kind, 2).unwrap().value.value();
            prop_assert!(rel_err(fast, slow) <= 1e-12, "{:?}: {} vs {}", kind, fast, slow);
        }
    }

    #[test]
    fn centered_and_span_ordering(seq in arb_seq(), params in arb_params()) {
        let (s, c) = (span(&seq, &params), centered(&seq, &params));
        prop_assert!(c <= s * (1.0 + 1e-12));
        prop_assert!(s <= c * 1.5f64.powf(params.gap()) * (1.0 + 1e-12));
    }

    #[test]
    fn between_sup_and_lp(seq in arb_seq(), params in arb_params()) {
        let sup = seq.sup_abs();
        let lp = lp_norm(&seq, params.p());
        for n in [span(&seq, &params), centered(&seq, &params)] {
            prop_assert!(sup <= n * (1.0 + 1e-12));
            prop_assert!(n <= lp * (1.0 + 1e-12));
        }
    }

    #[test]
    fn increasing_in_p(seq in arb_seq(), p in 1.0f64..6.0, dp in 0.0f64..2.0) {
        let q = 8.0;
        let lo = MorreyParams::new(p, q).unwrap();
        let hi = MorreyParams::new(p + dp, q).unwrap();
        prop_assert!(span(&seq, &lo) <= span(&seq, &hi) * (1.0 + 1e-12));
        prop_assert!(centered(&seq, &lo) <= centered(&seq, &hi) * (1.0 + 1e-12));
    }

    #[test]
    fn homogeneous(seq in arb_seq(), params in arb_params(), c in prop_oneof![-9.0f64..-0.1, 0.1f64..9.0]) {
        let scaled = seq.scaled(c);
        prop_assert!(rel_err(span(&scaled, &params), c.abs() * span(&seq, &params)) <= 1e-12);
        prop_assert!(rel_err(centered(&scaled, &params), c.abs() * centered(&seq, &params)) <= 1e-12);
    }

    #[test]
    fn translation_and_reflection(seq in arb_seq(), params in arb_params(), shift in -1_000_000i128..1_000_000) {
        let moved = seq.shifted(shift).unwrap();
        let flipped = seq.reflected().unwrap();
        for other in [&moved, &flipped] {
            prop_assert!(rel_err(span(other, &params), span(&seq, &params)) <= 1e-12);
            prop_assert!(rel_err(centered(other, &params), centered(&seq, &params)) <= 1e-12);
        }
    }

    #[test]
    fn degenerate_exponents_give_lp(seq in arb_seq(), p in 1.0f64..8.0) {
        let params = MorreyParams::new(p, p).unwrap();
        let lp = lp_norm(&seq, p);
        prop_assert!(rel_err(span(&seq, &params), lp) <= 1e-12);
        prop_assert!(rel_err(centered(&seq, &params), lp) <= 1e-12);
    }

    #[test]
    fn argmax_attains_value(seq in arb_seq(), params in arb_params()) {
        let r = starred_norm(&seq, &params).unwrap();
        let w = r.argmax.unwrap();
        let direct = morrey_core::discnorm::window_value(&seq, &w, &params);
        prop_assert!(rel_err(direct.value(), r.value.value()) <= 1e-12);
    }
}
