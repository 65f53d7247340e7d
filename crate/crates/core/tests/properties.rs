use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use valim::constructions::{
    dk_product, ep_limit_valuation, prohorov_limit, uniform_tightness_check, MarginalFamily, Supplier,
};
use valim::document::{self, Document, ValuedSpec};
use valim::generate::{self, random_poset_sized, random_valuation};
use valim::order::{DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
use valim::projective::{materialize_limit, upper_adjoint, EpSystem, ValuedSystem};
use valim::valuation::{check_valuation, decompose_simple, first_difference, is_tight, mu_circ, nu_bullet};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn simple_valuations_satisfy_the_axioms(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let x = Arc::new(random_poset_sized(&mut rng, 0, 6));
        let nu = random_valuation(&mut rng, &x, 0.3);
        let t = nu.tabulate().unwrap();
        let back = check_valuation(&t).unwrap();
        prop_assert_eq!(back.weights(), nu.weights());
        prop_assert_eq!(decompose_simple(&t).unwrap(), nu.weights().to_vec());
    }

    #[test]
    fn finite_tables_are_tight(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let x = Arc::new(random_poset_sized(&mut rng, 1, 5));
        let t = random_valuation(&mut rng, &x, 0.3).tabulate().unwrap();
        prop_assert_eq!(mu_circ(&nu_bullet(&t)), t.clone());
        let report = is_tight(&t);
        prop_assert!(report.tight);
        for w in &report.witnesses {
            prop_assert!(w.compact.is_subset(&w.open));
        }
    }

    #[test]
    fn images_are_pushforwards(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let x = Arc::new(random_poset_sized(&mut rng, 1, 5));
        let y = Arc::new(random_poset_sized(&mut rng, 1, 4));
        let f = generate::random_monotone_map(&mut rng, &x, &y).unwrap();
        let nu = random_valuation(&mut rng, &x, 0.3);
        let pushed = nu.image(&f).unwrap();
        for u in y.opens().unwrap() {
            prop_assert_eq!(pushed.eval(&u), nu.eval(&f.preimage_open(&u)));
        }
    }

    #[test]
    fn the_whole_space_supports_every_valuation(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let x = Arc::new(random_poset_sized(&mut rng, 0, 6));
        let nu = random_valuation(&mut rng, &x, 0.3);
        let s = nu.support_check(&x.full_set(), DEFAULT_MAX_OPENS).unwrap();
        prop_assert_eq!(s.restricted.weights(), nu.weights());
        // so does the set of points with nonzero weight
        prop_assert!(nu.support_check(&nu.support_points(), DEFAULT_MAX_OPENS).is_ok());
    }

    #[test]
    fn upper_adjoint_is_the_largest_open_inside(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let k = rng.random_range(2..=3);
        let sys = Arc::new(generate::random_finite_system(&mut rng, k, 2, 3));
        let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        let opens = limit.space().opens().unwrap();
        for i in 0..sys.len() {
            let p = limit.projection(i);
            for w in &opens {
                let a = upper_adjoint(&limit, i, w);
                prop_assert!(p.preimage_open(&a).is_subset(w));
                for u in sys.space(i).opens().unwrap() {
                    if p.preimage_open(&u).is_subset(w) {
                        prop_assert!(u.is_subset(&a));
                    }
                }
            }
        }
    }

    #[test]
    fn ep_and_tightness_routes_agree(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let levels = rng.random_range(1..=4);
        let sys = Arc::new(generate::random_ep_chain(&mut rng, levels, 5));
        let top = random_valuation(&mut rng, sys.space(sys.top()), 0.3);
        let vs = ValuedSystem::from_top(sys.clone(), &top).unwrap();
        let ep = EpSystem::reconstruct(sys.clone()).unwrap();
        let a = ep_limit_valuation(&vs, &ep, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS).unwrap();
        let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        let cert = uniform_tightness_check(&vs, &limit, Supplier::Exhaustive, DEFAULT_MAX_OPENS).unwrap();
        let b = prohorov_limit(&vs, limit, cert, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS).unwrap();
        prop_assert_eq!(a.valuation().weights(), b.valuation().weights());
        for i in 0..sys.len() {
            prop_assert_eq!(first_difference(&a.marginal(i), vs.valuation(i), DEFAULT_MAX_OPENS).unwrap(), None);
        }
    }

    #[test]
    fn products_reproduce_their_joint(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let m = rng.random_range(1..=3);
        let factors: Vec<_> = (0..m).map(|_| Arc::new(random_poset_sized(&mut rng, 1, 3))).collect();
        let full = valim::constructions::sub_product(&factors, (1 << m) - 1).unwrap();
        let joint = random_valuation(&mut rng, &full, 0.4);
        let fam = MarginalFamily::from_joint(factors, &joint).unwrap();
        let pv = dk_product(&fam, DEFAULT_MAX_POINTS, 1 << 10, 256).unwrap();
        prop_assert_eq!(pv.valuation.weights(), joint.weights());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let x = Arc::new(random_poset_sized(&mut rng, 0, 6));
        let nu = random_valuation(&mut rng, &x, 0.3);
        let text = document::to_text(&Document::Valuation(nu.clone()));
        let back = document::parse(&text).unwrap();
        prop_assert_eq!(document::to_text(&back), text.clone());
        let Document::Valuation(again) = back else { panic!("kind changed") };
        prop_assert_eq!(again.weights(), nu.weights());

        let levels = rng.random_range(1..=4);
        let sys = Arc::new(generate::random_chain(&mut rng, levels, 4));
        let top = random_valuation(&mut rng, sys.space(sys.top()), 0.3);
        let vs = ValuedSystem::from_top(sys, &top).unwrap();
        let text = document::to_text(&Document::ValuedSystem(ValuedSpec::Explicit(vs)));
        prop_assert_eq!(document::to_text(&document::parse(&text).unwrap()), text);

        let k = rng.random_range(1..=4);
        let sys = Arc::new(generate::random_finite_system(&mut rng, k, 2, 3));
        let text = document::to_text(&Document::System(sys));
        prop_assert_eq!(document::to_text(&document::parse(&text).unwrap()), text);
    }
}
