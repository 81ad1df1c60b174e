use proptest::prelude::*;
use repmeasure_core::cdawg::stats;
use repmeasure_core::oracle::build_reference_cdawg;
use repmeasure_core::{build_cdawg, measures, FamilySpec, Symbol, Text};

fn terminated(max_len: usize) -> impl Strategy<Value = Text> {
    (1u16..=6).prop_flat_map(move |sigma| {
        proptest::collection::vec(0..sigma, 0..max_len).prop_map(move |mut v| {
            v.push(sigma);
            Text::from_symbols(v).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_reference_construction(t in terminated(60)) {
        let fast = build_cdawg(&t).unwrap();
        fast.validate().unwrap();
        let reference = build_reference_cdawg(&t).unwrap();
        prop_assert!(fast.is_label_isomorphic(&reference));
        let s = stats(&fast, &t).unwrap();
        prop_assert_eq!(s.edge_count as u64, s.er);
        prop_assert_eq!(s.node_count as u64, s.mr + 1);
    }

    #[test]
    fn paths_spell_each_suffix_once(t in terminated(40)) {
        let c = build_cdawg(&t).unwrap();
        let mut spelled = c.spelled_paths();
        spelled.sort();
        let mut suffixes: Vec<Vec<Symbol>> = (0..t.len()).map(|i| t.symbols()[i..].to_vec()).collect();
        suffixes.sort();
        prop_assert_eq!(spelled, suffixes);
    }

    #[test]
    fn contains_agrees_with_scan(t in terminated(50), p in proptest::collection::vec(0u16..7, 0..8)) {
        let c = build_cdawg(&t).unwrap();
        let naive = p.is_empty() || t.symbols().windows(p.len()).any(|w| w == p.as_slice());
        prop_assert_eq!(c.contains(&p), naive);
    }
}

#[test]
fn fibonacci_prefix_size() {
    let t = FamilySpec::Fibonacci { n: 100 }.generate().unwrap().with_terminator(None).unwrap();
    let c = build_cdawg(&t).unwrap();
    assert_eq!(c.edge_count() as u64, measures(&t).er);
    let reference = build_reference_cdawg(&t).unwrap();
    assert_eq!(reference.edge_count(), c.edge_count());
}

#[test]
fn thm2_terminated_size() {
    let t = FamilySpec::Thm2 { k: 3, sigma: 3 }.generate().unwrap().with_terminator(None).unwrap();
    let c = build_cdawg(&t).unwrap();
    stats(&c, &t).unwrap();
}

#[test]
fn reversed_eq1_cdawg_grows() {
    let mut last = 0;
    for k in 2..=20 {
        let core = FamilySpec::Eq1 { k }.generate().unwrap();
        let forward_el = measures(&core).el;
        let rev = core.reversed().with_terminator(Some(1000)).unwrap();
        let edges = build_cdawg(&rev).unwrap().edge_count();
        assert!(edges > last, "k={k}");
        // The terminator perturbs the count by O(σ).
        assert!((edges as i64 - forward_el as i64).unsigned_abs() <= 2 * 2 * k as u64 + 2, "k={k}");
        last = edges;
    }
}
