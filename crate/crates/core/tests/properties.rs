use std::sync::Arc;

use eapkit::certificates::{make_certificate, sup_sq_enclosure, verify_certificate};
use eapkit::constructions::{ConstructionFn, Domain, IntervalSequence, Rule};
use eapkit::fourier::{fourier_coeff, Lambda};
use eapkit::hilbert::sv_combine;
use eapkit::means::{window_mean, window_mean_closed_form, window_mean_streamed, MeanQuery, Normalization, Quantity};
use eapkit::rational::{int, ratio, to_f64, Rational};
use proptest::prelude::*;

fn cut_tent(k: usize) -> ConstructionFn {
    ConstructionFn::cut_tent(Arc::new(IntervalSequence::build(k, Rule::Corrected).unwrap()), Domain::HalfLine)
}

fn horizon() -> impl Strategy<Value = Rational> {
    // 0 < T ≤ 10^4, inside the streamed route's range
    (1i64..=40).prop_flat_map(|d| (1..=10_000 * d, Just(d))).prop_map(|(n, d)| ratio(n, d))
}

fn quantity() -> impl Strategy<Value = Quantity> {
    prop_oneof![Just(Quantity::Envelope), Just(Quantity::Norm), Just(Quantity::NormSq)]
}

/// Admissible translate times: first ≥ 1, gaps strictly above 1.
fn times(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=24, 1i64..=8), 1..=max_len).prop_map(|gaps| {
        let mut t = int(0);
        gaps.into_iter()
            .map(|(n, d)| {
                t = &t + int(1) + ratio(n, 8 * d);
                t.clone()
            })
            .collect()
    })
}

fn weights(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(1i64..=9, n).prop_map(|raw| {
        let total: i64 = raw.iter().sum();
        raw.into_iter().map(|w| ratio(w, total)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_stream(t in horizon(), q in quantity(), off in 0i64..40) {
        let query = MeanQuery::new(cut_tent(4), q, Normalization::Plus).at_offset(ratio(off, 3));
        prop_assert_eq!(window_mean_closed_form(&query, &t).unwrap(), window_mean_streamed(&query, &t).unwrap());
    }

    #[test]
    fn means_are_ordered_and_bounded(t in horizon()) {
        let f = cut_tent(5);
        let m = |q| window_mean(&MeanQuery::new(f.clone(), q, Normalization::Plus), &t).unwrap();
        let (env, norm, sq) = (m(Quantity::Envelope), m(Quantity::Norm), m(Quantity::NormSq));
        prop_assert!(int(0) <= sq && sq <= norm && norm <= env && env <= int(1));
    }

    #[test]
    fn symmetric_windows(t in horizon(), n in 1i64..5000, q in prop_oneof![Just(Quantity::Norm), Just(Quantity::NormSq)]) {
        let mean = |f: &ConstructionFn, norm, t: &Rational| window_mean(&MeanQuery::new(f.clone(), q, norm), t).unwrap();
        // nothing left of 1/2, so the left half of the window contributes zero
        let tent = ConstructionFn::tent(Domain::Line);
        prop_assert_eq!(mean(&tent, Normalization::Sym, &t), mean(&tent, Normalization::Plus, &t) / int(2));
        // a whole number of periods on each side
        let train = ConstructionFn::two_sided(Domain::Line);
        prop_assert_eq!(mean(&train, Normalization::Sym, &int(n)), mean(&train, Normalization::Plus, &int(n)));
    }

    #[test]
    fn enclosure_dominates_samples(
        (ts, w) in times(6).prop_flat_map(|ts| { let n = ts.len(); (Just(ts), weights(n)) }),
        probes in prop::collection::vec((0i64..300, 1i64..=16), 12),
    ) {
        let f = cut_tent(5);
        let bound = sup_sq_enclosure(&f, &ts, &w).unwrap();
        prop_assert!(bound.lower <= bound.upper);
        for (n, d) in probes {
            let t = ratio(n, d);
            let vals: Vec<_> = ts.iter().map(|c| f.eval(&(c + &t))).collect();
            let sample = sv_combine(w.iter().zip(vals.iter())).norm_sq();
            prop_assert!(sample <= bound.upper);
        }
    }

    #[test]
    fn equal_weights_stay_below_inverse_count(ts in times(12)) {
        for f in [cut_tent(5), ConstructionFn::two_sided(Domain::HalfLine), ConstructionFn::tent(Domain::HalfLine)] {
            let q = ts.len() as i64;
            let w = vec![ratio(1, q); ts.len()];
            let b = sup_sq_enclosure(&f, &ts, &w).unwrap();
            prop_assert!(b.upper <= ratio(1, q));
        }
    }

    #[test]
    fn certificates_verify(ts in times(10)) {
        let f = ConstructionFn::two_sided(Domain::HalfLine);
        let q = ts.len() as i64;
        // ε = 1/m for the largest m with m² < q, so that ε² > 1/q
        let m = (1..=q).take_while(|m| m * m < q).last().unwrap_or(1);
        let eps = if q == 1 { int(2) } else { ratio(1, m) };
        let cert = make_certificate(&f, &ts, &eps).unwrap();
        prop_assert!(cert.valid);
        prop_assert!(verify_certificate(&f, &cert).unwrap().valid);
    }

    #[test]
    fn coefficient_modulus_is_bounded_by_mean_norm(k in -6i64..=6, n in 2i64..300, d in 1i64..=4) {
        let f = ConstructionFn::two_sided(Domain::HalfLine);
        let t = ratio(n, d);
        let a = fourier_coeff(&f, &Lambda::two_pi(k), &t).unwrap();
        let m = window_mean(&MeanQuery::new(f, Quantity::Norm, Normalization::Plus), &t).unwrap();
        prop_assert!(a.norm_upper() <= to_f64(&m) + 1e-9);
    }
}
