use levelplan::drawing::{draw_from_ordering, independent_crossings};
use levelplan::gen::{generate, Bias, GeneratorConfig, Generated, Kind};
use levelplan::io::{
    canonicalize, parse_betweenness, parse_document, serialize_betweenness, serialize_document, Document, Instance,
};
use levelplan::model::{is_proper, subdivide_to_proper, validate_instance, LevelGraph};
use levelplan::oracles::{ordering_is_crossing_free, solve_betweenness, solve_tlp_exhaustive, Budget, LevelOrdering};
use levelplan::reductions::reduce_betweenness_to_tlevel;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Betweenness),
        Just(Kind::ProperTLevel),
        Just(Kind::ProperCl),
        Just(Kind::LevelConnectedCl),
    ]
}

/// A level graph with edges that may skip levels.
fn level_graph() -> impl Strategy<Value = LevelGraph> {
    (2usize..5, 1usize..4).prop_flat_map(|(levels, width)| {
        let n = levels * width;
        proptest::collection::vec((0..n, 0..n), 0..8).prop_map(move |pairs| {
            let level = |v: usize| (v / width) as i64;
            let vertices: Vec<(String, i64)> = (0..n).map(|v| (format!("x{v}"), level(v))).collect();
            let mut edges: Vec<(String, String)> = pairs
                .into_iter()
                .filter(|&(a, b)| level(a) < level(b))
                .map(|(a, b)| (format!("x{a}"), format!("x{b}")))
                .collect();
            edges.sort();
            edges.dedup();
            LevelGraph::new(vertices, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), kind in kind()) {
        let cfg = GeneratorConfig { seed, kind, ..GeneratorConfig::default() };
        match generate(&cfg).unwrap() {
            Generated::Betweenness(b) => {
                let text = serialize_betweenness(&b).unwrap();
                prop_assert_eq!(parse_betweenness(&text).unwrap(), b);
            }
            Generated::Instance(i) => {
                let d = Document::new(i);
                let text = serialize_document(&d).unwrap();
                let back = parse_document(&text).unwrap();
                prop_assert_eq!(serialize_document(&back).unwrap(), text);
                prop_assert_eq!(canonicalize(&back).unwrap(), back);
            }
        }
    }

    #[test]
    fn generator_is_deterministic_and_valid(seed in any::<u64>(), kind in kind()) {
        let cfg = GeneratorConfig { seed, kind, ..GeneratorConfig::default() };
        let a = generate(&cfg).unwrap();
        prop_assert_eq!(&a, &generate(&cfg).unwrap());
        if let Generated::Instance(i) = &a {
            let v = match i {
                Instance::Level(g) => validate_instance(g),
                Instance::TLevel(t) => validate_instance(t),
                Instance::Cl(c) => validate_instance(c),
                Instance::Sefe(s) => validate_instance(s),
            };
            prop_assert!(v.is_empty(), "{:?}", v);
        }
    }

    #[test]
    fn gadget_documents_keep_provenance(seed in any::<u64>(), drop in any::<bool>()) {
        let cfg = GeneratorConfig { seed, kind: Kind::Betweenness, n: 4, m: 2, ..GeneratorConfig::default() };
        let Generated::Betweenness(b) = generate(&cfg).unwrap() else { unreachable!() };
        let (t, prov) = reduce_betweenness_to_tlevel(&b, drop).unwrap();
        let d = Document::with_provenance(Instance::TLevel(t), prov);
        let back = parse_document(&serialize_document(&d).unwrap()).unwrap();
        prop_assert_eq!(back.provenance, d.provenance);
    }

    #[test]
    fn subdivision_is_proper(g in level_graph()) {
        let (p, map) = subdivide_to_proper(&g);
        prop_assert!(is_proper(&p));
        prop_assert_eq!(p.vertex_count(), g.vertex_count() + map.dummy_count());
        let skipped: usize = g.edges().iter().map(|&(u, v)| g.level(v) - g.level(u) - 1).sum();
        prop_assert_eq!(map.dummy_count(), skipped);
    }

    #[test]
    fn reflection_keeps_orderings_crossing_free(g in level_graph(), shuffle in any::<u64>()) {
        let (p, _) = subdivide_to_proper(&g);
        let mut levels: Vec<Vec<String>> = p
            .level_sets()
            .into_iter()
            .map(|l| l.into_iter().map(|v| p.id(v).to_string()).collect())
            .collect();
        for (i, l) in levels.iter_mut().enumerate() {
            let r = (shuffle >> (i * 3)) as usize % l.len().max(1);
            l.rotate_left(r);
        }
        let o = LevelOrdering::new(levels);
        let free = ordering_is_crossing_free(&p, &o);
        prop_assert_eq!(free, ordering_is_crossing_free(&p, &o.reflected()));
        let d = draw_from_ordering(&g, &o).unwrap();
        prop_assert_eq!(free, independent_crossings(&d).is_empty());
    }

    #[test]
    fn forced_betweenness_bias_holds(seed in any::<u64>(), sat in any::<bool>()) {
        let bias = if sat { Bias::ForceSat } else { Bias::ForceUnsat };
        let cfg = GeneratorConfig { seed, kind: Kind::Betweenness, n: 4, m: 2, bias, ..GeneratorConfig::default() };
        let Generated::Betweenness(b) = generate(&cfg).unwrap() else { unreachable!() };
        prop_assert_eq!(solve_betweenness(&b, 9).unwrap().is_some(), sat);
    }

    #[test]
    fn forced_tlevel_witness_exists(seed in any::<u64>()) {
        let cfg = GeneratorConfig { seed, kind: Kind::ProperTLevel, bias: Bias::ForceSat, ..GeneratorConfig::default() };
        let Generated::Instance(Instance::TLevel(t)) = generate(&cfg).unwrap() else { unreachable!() };
        prop_assert!(solve_tlp_exhaustive(&t, &Budget::default()).unwrap().is_some());
    }
}
