use hodgekit::corpus;
use hodgekit::field::{Exact, Gq, Scalar};
use hodgekit::io::{self, JsonScalar};
use hodgekit::mhs::{deligne_bigrading, delta_split, mixed_hodge_metric};
use hodgekit::orbits::{dist_surrogate_sq, orbit_eval};
use hodgekit::weights::{admissible_pipeline, check_component_heights, check_monodromy, monodromy_filtration};
use proptest::prelude::*;

fn gq() -> impl Strategy<Value = Gq> {
    (-40i64..40, 1i64..12, -40i64..40, 1i64..12).prop_map(|(a, b, c, d)| Gq::complex(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scalar_text_round_trip(x in gq()) {
        prop_assert_eq!(Gq::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn record_json_round_trip(seed in any::<u64>()) {
        let rec = corpus::mhs_instance(&mut corpus::rng(seed), 5).unwrap();
        let v = serde_json::Value::Object(io::record_to_json(&rec, Exact).unwrap());
        let back = io::record_from_json::<Gq>(&v, Exact).unwrap();
        prop_assert_eq!(io::record_to_json(&back, Exact).unwrap(), io::record_to_json(&rec, Exact).unwrap());
        let text = io::to_pretty(&v);
        let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(reparsed, v);
    }

    #[test]
    fn shift_round_trip(seed in any::<u64>(), l in -4i32..4) {
        let rec = corpus::mhs_instance(&mut corpus::rng(seed), 5).unwrap();
        let shifted = rec.w.shift(l);
        prop_assert_eq!(shifted.shift(-l), rec.w.clone());
        for k in -6..6 {
            prop_assert_eq!(shifted.get(k), rec.w.get(k + l));
        }
    }

    #[test]
    fn bigrading_verifies_and_metric_is_hermitian(seed in any::<u64>()) {
        let rec = corpus::mhs_instance(&mut corpus::rng(seed), 5).unwrap();
        let gc = rec.validate(Exact).unwrap();
        let b = deligne_bigrading(&rec.f, &rec.w, Exact).unwrap();
        prop_assert!(b.verify(&rec.f, &rec.w, Exact).is_ok());
        let h = mixed_hodge_metric(&b, &rec.pol, &gc, Exact).unwrap();
        prop_assert_eq!(h.gram.adjoint(), h.gram.clone());
    }

    #[test]
    fn delta_split_bigrading_is_real_symmetric(seed in any::<u64>()) {
        let rec = corpus::mhs_instance(&mut corpus::rng(seed), 4).unwrap();
        let d = delta_split(&rec.f, &rec.w, Exact).unwrap();
        for (&(p, q), piece) in d.split_bigrading.pieces() {
            prop_assert_eq!(piece.conj(Exact), d.split_bigrading.get(q, p));
        }
    }

    #[test]
    fn orbit_eval_inverts(seed in any::<u64>(), z in gq()) {
        let rec = corpus::admissible_instance(&mut corpus::rng(seed), 4).unwrap();
        let n = rec.nilpotent();
        let moved = orbit_eval(&rec.f, &n, &z, Exact).unwrap();
        prop_assert_eq!(orbit_eval(&moved, &n, &z.neg(), Exact).unwrap(), rec.f.clone());
    }

    #[test]
    fn distance_to_self_vanishes(seed in any::<u64>()) {
        let rec = corpus::mhs_instance(&mut corpus::rng(seed), 5).unwrap();
        let d = dist_surrogate_sq(&rec.f, &rec.f, &rec.w, &rec.pol, Exact).unwrap();
        prop_assert!(d.is_exact_zero());
    }

    #[test]
    fn monodromy_filtration_checks(seed in any::<u64>(), n in 1usize..6) {
        let nil = corpus::random_nilpotent(&mut corpus::rng(seed), n);
        let w = monodromy_filtration(&nil, Exact).unwrap();
        prop_assert_eq!(check_monodromy(&w, &nil, Exact).unwrap(), None);
    }

    #[test]
    fn deligne_grading_has_correct_heights(seed in any::<u64>()) {
        let rec = corpus::admissible_instance(&mut corpus::rng(seed), 4).unwrap();
        let a = admissible_pipeline(&rec.f, &rec.w, &rec.nilpotent(), Exact).unwrap();
        prop_assert_eq!(check_component_heights(&a.grading, Exact), None);
        prop_assert!(a.f.preserved_by(a.y(), Exact).unwrap());
        prop_assert!(a.grading.triple.check(Exact).is_none());
    }
}
