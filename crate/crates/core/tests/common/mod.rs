//! Seeded random instance generators shared by the integration tests.

#![allow(dead_code)]

use msic::ProblemInstance;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_wants(rng: &mut impl Rng, m: usize, p: f64) -> Vec<Vec<usize>> {
    (1..=m)
        .map(|r| (1..=m).filter(|&j| j != r && rng.gen_bool(p)).collect())
        .collect()
}

/// Messages paired into 2-cycles, plus a few extra wants. Leaf SCCs of
/// this shape are often semi message-connected.
fn paired_wants(rng: &mut impl Rng, m: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (1..=m).collect();
    order.shuffle(rng);
    let mut wants = random_wants(rng, m, 0.08);
    for pair in order.chunks(2) {
        if let [a, b] = *pair {
            wants[a - 1].push(b);
            wants[b - 1].push(a);
        }
    }
    for w in wants.iter_mut() {
        w.sort_unstable();
        w.dedup();
    }
    wants
}

/// Random wants and overlapping sender sets; every message is owned by at
/// least one sender. Half the draws use paired wants and small senders.
pub fn random_instance(rng: &mut impl Rng, max_m: usize) -> ProblemInstance {
    let m = rng.gen_range(2..=max_m);
    let (wants, s, p_own) = if rng.gen_bool(0.5) {
        (paired_wants(rng, m), rng.gen_range(2..=m + 1), 2.5 / m as f64)
    } else {
        let p_want = rng.gen_range(0.15..0.5);
        (random_wants(rng, m, p_want), rng.gen_range(1..=m + 1), rng.gen_range(0.1..0.5))
    };
    let mut senders: Vec<Vec<usize>> = (0..s)
        .map(|_| (1..=m).filter(|_| rng.gen_bool(p_own.min(1.0))).collect())
        .collect();
    for i in 1..=m {
        if !senders.iter().any(|set| set.contains(&i)) {
            let k = rng.gen_range(0..s);
            senders[k].push(i);
        }
    }
    for set in senders.iter_mut() {
        if set.is_empty() {
            set.push(rng.gen_range(1..=m));
        }
        set.sort_unstable();
    }
    ProblemInstance::from_one_based(m, &senders, &wants).expect("generated instance is valid")
}

/// Random wants with sender sets partitioning the messages.
pub fn partitioned_instance(rng: &mut impl Rng, max_m: usize) -> ProblemInstance {
    let m = rng.gen_range(2..=max_m);
    let p_want = rng.gen_range(0.2..0.6);
    let wants = random_wants(rng, m, p_want);
    let s = rng.gen_range(1..=m);
    let mut order: Vec<usize> = (1..=m).collect();
    order.shuffle(rng);
    let mut senders: Vec<Vec<usize>> = order[..s].iter().map(|&i| vec![i]).collect();
    for &i in &order[s..] {
        let k = rng.gen_range(0..s);
        senders[k].push(i);
    }
    for set in senders.iter_mut() {
        set.sort_unstable();
    }
    ProblemInstance::from_one_based(m, &senders, &wants).expect("generated instance is valid")
}
