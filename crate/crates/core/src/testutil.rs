//! Proptest strategies and brute-force helpers shared by unit tests.

use proptest::collection::vec;
use proptest::prelude::*;

use crate::model::{GraphPair, ProblemInstance};

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = GraphPair> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                vec(prop::bool::weighted(0.3), n * n),
                vec(prop::bool::weighted(0.3), n * n),
            )
        })
        .prop_map(|(n, arcs, edges)| {
            let mut g = GraphPair::new(n);
            for i in 0..n {
                for j in 0..n {
                    if i != j && arcs[i * n + j] {
                        g.add_arc(i, j);
                    }
                    if i < j && edges[i * n + j] {
                        g.add_edge(i, j);
                    }
                }
            }
            g
        })
}

/// `reach[u][v]`: a path of at least one arc from `u` to `v`.
pub fn brute_reach(g: &GraphPair) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for (i, j) in g.arcs() {
        reach[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                let via = reach[k].clone();
                for (to, &r) in reach[i].iter_mut().zip(&via) {
                    *to |= r;
                }
            }
        }
    }
    reach
}

/// Instance from raw bits: `wants[j*m+i]` puts `i` in `W_j`, sender `k` owns
/// `i` when `owns[k*m+i]`. Unowned messages and empty senders are patched.
pub fn instance_from_bits(m: usize, wants: &[bool], senders: usize, owns: &[bool]) -> ProblemInstance {
    let want_lists: Vec<Vec<usize>> = (0..m)
        .map(|j| (0..m).filter(|&i| i != j && wants[j * m + i]).map(|i| i + 1).collect())
        .collect();
    let mut sender_lists: Vec<Vec<usize>> = (0..senders)
        .map(|k| (0..m).filter(|&i| owns[k * m + i]).map(|i| i + 1).collect())
        .collect();
    for i in 0..m {
        if !sender_lists.iter().any(|s| s.contains(&(i + 1))) {
            sender_lists[i % senders].push(i + 1);
        }
    }
    for (k, s) in sender_lists.iter_mut().enumerate() {
        if s.is_empty() {
            s.push(k % m + 1);
        }
        s.sort_unstable();
        s.dedup();
    }
    ProblemInstance::from_one_based(m, &sender_lists, &want_lists).expect("generated instance is valid")
}

pub fn arb_instance(max_m: usize) -> impl Strategy<Value = ProblemInstance> {
    (2..=max_m)
        .prop_flat_map(|m| {
            (
                Just(m),
                vec(prop::bool::weighted(0.35), m * m),
                1..=m,
                vec(prop::bool::weighted(0.4), m * m),
            )
        })
        .prop_map(|(m, wants, s, owns)| instance_from_bits(m, &wants, s, &owns))
}

pub fn arb_simplified(max_m: usize) -> impl Strategy<Value = ProblemInstance> {
    arb_instance(max_m).prop_map(|inst| inst.simplify().0)
}
