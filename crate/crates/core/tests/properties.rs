mod common;

use common::*;
use grobfan::fan::{self, FanOptions};
use grobfan::groebner::{buchberger, gb_for_weight, Ideal};
use grobfan::io::{parse_ideal_file, FanDocument};
use grobfan::poly::{TermOrder, WeightVector};
use grobfan::polyhedra::Membership;
use grobfan::regularity::{check_graph, check_regularity, check_with_basis, cycle_basis_from_tree, replay, EdgeGraph};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_basis_ignores_generator_order(seed in any::<u64>(), w in proptest::collection::vec(1i64..20, 2)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let i = random_zero_dimensional(&mut rng);
        prop_assume!(i.nvars() == 2);
        let t = TermOrder::lex(2);
        let gb = gb_for_weight(&i, &WeightVector::from_integers(&w), &t).unwrap();
        let mut gens = i.generators().to_vec();
        gens.reverse();
        let again = gb_for_weight(&Ideal::new(gens).unwrap(), &WeightVector::from_integers(&w), &t).unwrap();
        prop_assert_eq!(&gb, &again);
        let order = t.with_leading_row(w).unwrap();
        prop_assert_eq!(buchberger(&Ideal::new(gb.polynomials()).unwrap(), &order).unwrap(), gb);
    }

    #[test]
    fn zero_dimensional_fans_embed_as_predicted(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let i = random_zero_dimensional(&mut rng);
        let g = fan::enumerate_restricted_fan(&i, &TermOrder::lex(i.nvars())).unwrap();
        prop_assert!(g.is_connected());
        let out = check_regularity(&g).unwrap();
        prop_assert!(zero_dimensional_oracle(&g, &out).is_ok());
        for c in &g.cones {
            let w = WeightVector::new(to_q(&c.representative));
            prop_assert_eq!(&gb_for_weight(&i, &w, &TermOrder::lex(i.nvars())).unwrap(), &c.key);
            prop_assert_eq!(c.cone.contains_int(&c.representative).unwrap(), Membership::Interior);
        }
    }

    #[test]
    fn verdict_does_not_depend_on_spanning_tree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let i = random_zero_dimensional(&mut rng);
        let g = EdgeGraph::from(&fan::enumerate_restricted_fan(&i, &TermOrder::lex(i.nvars())).unwrap());
        let base = check_graph(&g).unwrap();
        let basis = cycle_basis_from_tree(&g, &random_tree(&g, &mut rng)).unwrap();
        let other = check_with_basis(&g, &basis).unwrap();
        prop_assert_eq!(base.is_embedding(), other.is_embedding());
        prop_assert!(replay(&g, &other).unwrap());
    }

    #[test]
    fn parallel_and_sequential_enumeration_agree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_homogeneous(&mut rng);
        let i = Ideal::new(vec![f]).unwrap();
        let t = TermOrder::lex(i.nvars());
        let par = fan::enumerate_restricted_fan(&i, &t).unwrap();
        let seq = fan::enumerate_restricted_fan_with(&i, &t, &FanOptions { parallel: false, ..Default::default() }).unwrap();
        prop_assert_eq!(par.cones.len(), seq.cones.len());
        for (a, b) in par.cones.iter().zip(&seq.cones) {
            prop_assert_eq!(&a.key, &b.key);
        }
        prop_assert_eq!(par.edges.len(), seq.edges.len());
    }

    #[test]
    fn fan_documents_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let i = random_zero_dimensional(&mut rng);
        let vars: Vec<String> = (1..=i.nvars()).map(|k| format!("x{k}")).collect();
        let gens: Vec<String> = i.generators().iter().map(|g| grobfan::poly::format_polynomial(&ring(&vars.iter().map(String::as_str).collect::<Vec<_>>()), g)).collect();
        let text = format!("ring {}; ideal {};", vars.join(","), gens.join(", "));
        let file = parse_ideal_file(&text).unwrap();
        let g = fan::enumerate_restricted_fan(&file.ideal, &file.tiebreak_order()).unwrap();
        let json = FanDocument::new(&file, "restricted", &g).unwrap().to_json();
        let doc = FanDocument::from_json(&json).unwrap();
        prop_assert_eq!(doc.to_json(), json.clone());
        let back = doc.to_fan_graph().unwrap();
        prop_assert_eq!(FanDocument::new(&file, "restricted", &back).unwrap().to_json(), json);
    }
}
