use lifshitz_core::density::DensitySpec;
use lifshitz_core::diagrams::census::{subgraph_record, DEFAULT_SUBGRAPH_BUDGET};
use lifshitz_core::diagrams::cumulant::{cumulant_coefficient_f64, moment_by_partitions};
use lifshitz_core::diagrams::*;
use proptest::prelude::*;

fn census(n: usize, gate_free: bool) -> Vec<CensusReport> {
    enumerate_partitions(&IndexSet::symmetric(n), true, gate_free)
        .unwrap()
        .iter()
        .map(|p| {
            let g = build_feynman_graph(p).unwrap();
            classify_superficial_convergence(&g, default_epsilon(), DEFAULT_SUBGRAPH_BUDGET)
        })
        .collect()
}

#[test]
fn gate_free_pairings_are_superficially_convergent() {
    for n in 2..=4 {
        for rep in census(n, true) {
            let s = &rep.summary;
            assert!(s.superficially_convergent, "{}", rep.partition);
            assert_eq!(s.proper_nonnegative_div_not_f, 0, "{}", rep.partition);
            for r in &rep.records {
                if r.shape == Shape::GraphF {
                    assert_eq!((r.div, r.n_vertices, r.loops, r.external), (0, 2, 2, 2));
                }
                if r.n_vertices >= 2 {
                    assert!(r.l_div <= -4);
                }
                if r.whole {
                    assert_eq!(r.div, 2 - n as i64);
                    assert_eq!(r.external, 0);
                }
            }
        }
    }
}

#[test]
fn graph_f_occurs() {
    // Blocks {1,3},{2,4} at n = 4 are joined by the three lines p2, p3, p4.
    let p = Partition::new(vec![vec![1, 3], vec![2, 4], vec![6, 8], vec![7, 9]]).unwrap();
    let g = build_feynman_graph(&p).unwrap();
    let rep = classify_superficial_convergence(&g, default_epsilon(), DEFAULT_SUBGRAPH_BUDGET);
    let f: Vec<_> = rep.records.iter().filter(|r| r.shape == Shape::GraphF).collect();
    assert!(f.iter().any(|r| r.lines == vec![2, 3, 4] && r.proper));
    assert!(rep.summary.superficially_convergent);
}

#[test]
fn gates_break_convergence() {
    let set = IndexSet::symmetric(3);
    let all = enumerate_partitions(&set, true, false).unwrap();
    let gated: Vec<_> = all.iter().filter(|p| p.has_gate(&set)).collect();
    assert!(!gated.is_empty());
    for p in gated {
        let g = build_feynman_graph(p).unwrap();
        let rep = classify_superficial_convergence(&g, default_epsilon(), DEFAULT_SUBGRAPH_BUDGET);
        assert!(!rep.summary.superficially_convergent);
        let tad: Vec<_> = rep.records.iter().filter(|r| r.shape == Shape::Tadpole).collect();
        assert!(!tad.is_empty());
        assert!(tad.iter().all(|r| r.div == 1 && r.clause == Clause::Violated));
    }
}

#[test]
fn counting_identities_hold_for_every_connected_subgraph() {
    for n in 1..=4 {
        for rep in census(n, false) {
            for r in &rep.records {
                assert_eq!(r.loops + r.n_vertices - 1, r.internal);
                assert!(2 * r.internal <= 4 * r.n_vertices - r.external);
                assert!(r.div <= 4 - r.external - r.loops);
                assert_eq!(r.external % 2, 0);
                if !r.whole {
                    assert!(r.external != 0);
                }
            }
        }
    }
}

#[test]
fn reduced_delta_systems_are_equivalent() {
    for n in 1..=4 {
        for p in enumerate_partitions(&IndexSet::symmetric(n), true, false).unwrap() {
            let g = build_feynman_graph(&p).unwrap();
            let t = g.spanning_tree().unwrap();
            let orig = g.delta_system();
            let red = g.reduced_system(&t);
            assert!(orig.equivalent(&red), "{p}");
            assert_eq!(orig.rank(), n);
            assert!(orig.implies(&g.forced_delta()));
            for v in 0..g.vertex_count {
                assert!(orig.implies(&g.kirchhoff_form(v)));
            }
        }
    }
}

#[test]
fn non_pairing_partitions_build_valid_graphs() {
    let set = IndexSet::symmetric(3);
    for p in enumerate_partitions(&set, false, true).unwrap() {
        let g = build_feynman_graph(&p).unwrap();
        let t = g.spanning_tree().unwrap();
        assert_eq!(t.tree_edges.len(), p.blocks().len());
        assert!(g.delta_system().equivalent(&g.reduced_system(&t)));
    }
}

#[test]
fn whole_graph_at_two_is_log_convergent() {
    let p = Partition::new(vec![vec![1, 4], vec![2, 5]]).unwrap();
    let g = build_feynman_graph(&p).unwrap();
    let all: Vec<usize> = (0..g.edges.len()).collect();
    let r = subgraph_record(&g, &all, default_epsilon());
    assert_eq!((r.div, r.clause), (0, Clause::LogConvergent));
}

#[test]
fn mixed_site_moment_matches_quadrature() {
    let d = DensitySpec::default();
    let (lo, hi) = d.support();
    // Composite Simpson on the product density; exact up to rounding for polynomials.
    let n = 2000;
    let h = (hi - lo) / n as f64;
    let w = |i: usize| {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut s = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let a = lo + i as f64 * h;
            let b = lo + j as f64 * h;
            s += w(i) * w(j) * a * a * b.powi(4) * d.pdf(a) * d.pdf(b);
        }
    }
    s *= h * h / 9.0;
    let c = |k: usize| cumulant_coefficient_f64(k, &d).unwrap();
    let pred = moment_by_partitions(&[0, 0, 1, 1, 1, 1], &c);
    assert!((s - pred).abs() < 1e-8, "{s} vs {pred}");
    assert!((pred - 9.0 / 5.0).abs() < 1e-14);
}

#[test]
fn graph_exchange_round_trip() {
    let p = Partition::new(vec![vec![1, 5], vec![2, 4]]).unwrap();
    let g = build_feynman_graph(&p).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    let back: FeynmanGraph = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
}

proptest! {
    #[test]
    fn enumeration_is_exhaustive_and_duplicate_free(nl in 0usize..5, nr in 0usize..5) {
        let set = IndexSet::new(nl, nr);
        let all = enumerate_partitions(&set, false, false).unwrap();
        let mut sorted = all.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), all.len());
        for p in &all {
            prop_assert!(p.validate_for(&set).is_ok());
        }
        let gf = enumerate_partitions(&set, false, true).unwrap();
        prop_assert_eq!(gf.len(), all.iter().filter(|p| !p.has_gate(&set)).count());
        let pairs = enumerate_partitions(&set, true, false).unwrap();
        if set.len().is_multiple_of(2) {
            let expected: u128 = (1..=set.len() as u128 / 2).map(|k| 2 * k - 1).product();
            prop_assert_eq!(pairs.len() as u128, expected);
        } else {
            prop_assert!(pairs.is_empty());
        }
    }
}
