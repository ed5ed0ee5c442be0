use proptest::prelude::*;

use ekrlab::hypergraph::{degree_stats, sample_independent};
use ekrlab::verifier::{
    brute_force_ekr, is_intersecting, is_trivial_clique, max_intersecting_family, max_nontrivial_clique, verify_ekr,
    verify_ekr_with, EkrVerdict, VerifierConfig,
};
use ekrlab::{Error, Hypergraph, KSet};

fn h(n: usize, k: usize, lists: &[&[usize]]) -> Hypergraph {
    let v: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
    Hypergraph::from_lists(n, k, &v).unwrap()
}

fn witness_sets(h: &Hypergraph, v: &EkrVerdict) -> Vec<KSet> {
    v.witness.as_ref().unwrap().iter().map(|&i| h.edges()[i]).collect()
}

#[test]
fn max_family_examples() {
    assert_eq!(max_intersecting_family(&Hypergraph::complete(5, 2).unwrap()).unwrap().0, 4);
    let g = h(5, 2, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5]]);
    let (omega, clique) = max_intersecting_family(&g).unwrap();
    assert_eq!(omega, 3);
    assert_eq!(clique, vec![0, 1, 2]);
    assert_eq!(max_intersecting_family(&h(5, 2, &[&[1, 2]])).unwrap().0, 1);
}

#[test]
fn verdict_examples() {
    let tri = h(5, 2, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5]]);
    let v = verify_ekr(&tri).unwrap();
    assert_eq!((v.holds, v.omega, v.delta), (false, 3, 2));
    assert_eq!(v.witness, Some(vec![0, 1, 2]));

    let star = h(6, 2, &[&[1, 2], &[1, 3], &[1, 4], &[5, 6]]);
    let v = verify_ekr(&star).unwrap();
    assert_eq!((v.holds, v.omega, v.delta), (true, 3, 3));
    assert_eq!(v.trivial_center, Some(0));

    for (n, k) in [(5, 2), (7, 3)] {
        assert!(verify_ekr(&Hypergraph::complete(n, k).unwrap()).unwrap().holds);
    }

    let empty = Hypergraph::new(6, 2, vec![]).unwrap();
    let v = brute_force_ekr(&empty).unwrap();
    assert_eq!((v.holds, v.omega, v.delta), (true, 0, 0));
    assert_eq!(verify_ekr(&empty).unwrap(), v);

    let v = verify_ekr(&h(4, 2, &[&[1, 2], &[3, 4]])).unwrap();
    assert_eq!((v.holds, v.omega, v.delta), (true, 1, 1));
}

#[test]
fn at_most_two_edges_always_hold() {
    for n in 2..=6usize {
        let all: Vec<Vec<usize>> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| vec![a, b])).collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let g = Hypergraph::from_lists(n, 2, &[all[i].clone(), all[j].clone()]).unwrap();
                assert!(brute_force_ekr(&g).unwrap().holds);
                assert!(verify_ekr(&g).unwrap().holds);
            }
        }
    }
}

#[test]
fn ekr_is_not_monotone() {
    // a path holds, closing the triangle breaks it, growing a star restores it
    let path = h(6, 2, &[&[1, 2], &[1, 3]]);
    assert!(verify_ekr(&path).unwrap().holds);
    let tri = path.with_edge(KSet::from_one_based(6, &[2, 3]).unwrap()).unwrap();
    assert!(!verify_ekr(&tri).unwrap().holds);
    let grown = tri
        .with_edge(KSet::from_one_based(6, &[1, 4]).unwrap())
        .unwrap()
        .with_edge(KSet::from_one_based(6, &[1, 5]).unwrap())
        .unwrap();
    assert!(verify_ekr(&grown).unwrap().holds);
}

#[test]
fn multisets_are_rejected() {
    let multi = Hypergraph::new(5, 2, vec![KSet::from_one_based(5, &[1, 2]).unwrap(); 2]).unwrap();
    assert!(matches!(verify_ekr(&multi), Err(Error::Argument(_))));
    assert!(verify_ekr(&multi.dedup()).unwrap().holds);
}

#[test]
fn edge_cap_is_a_resource_error() {
    let g = Hypergraph::complete(7, 3).unwrap();
    let cfg = VerifierConfig {
        max_edges: 10,
        ..VerifierConfig::default()
    };
    assert!(matches!(verify_ekr_with(&g, &cfg), Err(Error::Resource { .. })));
}

#[test]
fn nontrivial_clique_of_complete_graph_is_hilton_milner() {
    let g = Hypergraph::complete(7, 3).unwrap();
    let c = max_nontrivial_clique(&g).unwrap().unwrap();
    // C(6,2) - C(3,2) + 1
    assert_eq!(c.len(), 13);
    let sets: Vec<KSet> = c.iter().map(|&i| g.edges()[i]).collect();
    assert!(is_intersecting(&sets));
    assert_eq!(is_trivial_clique(&sets), None);
}

fn arb_simple() -> impl Strategy<Value = Hypergraph> {
    (2usize..5, 0usize..15, any::<u64>()).prop_flat_map(|(k, m, seed)| {
        (2 * k + 1..=11usize).prop_map(move |n| sample_independent(n, k, m, seed).unwrap().dedup())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_brute_force_and_witness_is_sound(g in arb_simple()) {
        let v = verify_ekr(&g).unwrap();
        let b = brute_force_ekr(&g).unwrap();
        prop_assert_eq!((v.holds, v.omega, v.delta), (b.holds, b.omega, b.delta));
        prop_assert!(v.omega >= v.delta);
        if v.holds {
            prop_assert_eq!(v.omega, v.delta);
            prop_assert!(v.witness.is_none());
        } else {
            let sets = witness_sets(&g, &v);
            prop_assert_eq!(sets.len(), v.omega);
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    prop_assert!(sets[i].intersects(&sets[j]));
                }
            }
            prop_assert!(v.omega > v.delta || is_trivial_clique(&sets).is_none());
        }
    }

    #[test]
    fn omega_grows_with_edges(g in arb_simple(), extra in any::<u64>()) {
        let omega = verify_ekr(&g).unwrap().omega;
        let more = sample_independent(g.n(), g.k(), 3, extra).unwrap();
        let mut bigger = g.clone();
        for e in more.edges() {
            if !bigger.edges().contains(e) {
                bigger = bigger.with_edge(*e).unwrap();
            }
        }
        prop_assert!(verify_ekr(&bigger).unwrap().omega >= omega);
        prop_assert_eq!(verify_ekr(&g).unwrap().delta, degree_stats(&g).delta);
    }
}
