//! Breaking all leaf SCCs of the information-flow digraph, and the resulting
//! lower bound on the optimal codelength.
//!
//! The working state `(G†, U†)` starts as a copy of the input graphs. The
//! break routine prunes message-connected leaf SCCs (step (i)), appends a dummy
//! leaf to each message-disconnected one (step (ii)) and adds an arc out of
//! each degenerated semi leaf SCC (steps (iii-a)/(iii-b)). The driver runs it
//! once, then iterates: prune one message-connected leaf SCC if any exists
//! (iv-0), otherwise pick a semi leaf SCC, make it message-connected and break
//! again (iv-a/b/c). Only pruning lowers `V_out`, once per call of step (i),
//! so the final `V_out(G†)` equals `V_out(G) - N_connected - N_iv`.
//!
//! Every arbitrary choice has a deterministic default (smallest vertex,
//! smallest-member SCC). [`SearchMode::Exhaustive`] instead explores all
//! choices breadth-first over phase-2 iterations and returns a run with the
//! fewest iterations.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{classify, message_components, scc_decompose, Analysis, DegeneracyWitness, LeafClass, SccReport};
use crate::model::GraphPair;
use crate::one_based;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    Deterministic,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneLimit {
    All,
    Once,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundOptions {
    pub mode: SearchMode,
    /// Upper limit on graph states visited by the exhaustive search before it
    /// gives up and falls back to the deterministic run.
    pub state_budget: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            mode: SearchMode::Deterministic,
            state_budget: 200_000,
        }
    }
}

impl BoundOptions {
    pub fn exhaustive() -> Self {
        BoundOptions {
            mode: SearchMode::Exhaustive,
            ..Default::default()
        }
    }
}

/// One applied step, with the vertices, arcs and edges it touched.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "step")]
pub enum Step {
    #[serde(rename = "(i)")]
    Prune {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
        #[serde(serialize_with = "one_based::vertex")]
        vertex: usize,
        #[serde(serialize_with = "one_based::pairs")]
        removed_arcs: Vec<(usize, usize)>,
    },
    #[serde(rename = "(ii)")]
    AppendDummy {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
        #[serde(serialize_with = "one_based::vertex")]
        dummy: usize,
        #[serde(serialize_with = "one_based::pairs")]
        added_arcs: Vec<(usize, usize)>,
    },
    #[serde(rename = "(iii-a)")]
    ArcToNonLeaf {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
        witness: DegeneracyWitness,
        #[serde(serialize_with = "one_based::pairs")]
        added_arcs: Vec<(usize, usize)>,
    },
    #[serde(rename = "(iii-b)")]
    ArcToLeaf {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
        witness: DegeneracyWitness,
        #[serde(serialize_with = "one_based::pairs")]
        added_arcs: Vec<(usize, usize)>,
    },
    #[serde(rename = "(iv-0)")]
    PruneOneConnected,
    #[serde(rename = "(iv-a)")]
    SelectSemi {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
    },
    #[serde(rename = "(iv-b)")]
    ConnectMessages {
        #[serde(serialize_with = "one_based::vertices")]
        scc: Vec<usize>,
        #[serde(serialize_with = "one_based::pairs")]
        added_edges: Vec<(usize, usize)>,
    },
    #[serde(rename = "(iv-c)")]
    BreakAgain,
}

impl Step {
    pub fn tag(&self) -> &'static str {
        match self {
            Step::Prune { .. } => "(i)",
            Step::AppendDummy { .. } => "(ii)",
            Step::ArcToNonLeaf { .. } => "(iii-a)",
            Step::ArcToLeaf { .. } => "(iii-b)",
            Step::PruneOneConnected => "(iv-0)",
            Step::SelectSemi { .. } => "(iv-a)",
            Step::ConnectMessages { .. } => "(iv-b)",
            Step::BreakAgain => "(iv-c)",
        }
    }
}

/// Result of a complete run.
#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmTrace {
    pub mode: SearchMode,
    /// Exhaustive search exceeded its budget; this is the deterministic run.
    pub fell_back: bool,
    pub states_explored: usize,
    /// `V_out` of the input digraph.
    pub initial_v_out: usize,
    /// Final `(G†, U†)`.
    #[serde(skip)]
    pub state: GraphPair,
    pub log: Vec<Step>,
    /// Prunes during phase 1: the message-connected leaf SCCs of the input.
    pub n_connected: usize,
    /// Phase-2 iterations.
    pub n_iv: usize,
    /// Leaf SCCs left after phase 1.
    pub n_remaining: usize,
    pub dummy_count: usize,
}

fn leaf_report_check(g: &GraphPair, scc: &[usize]) -> Result<SccReport> {
    let report = scc_decompose(g);
    if report.leaf_sccs().any(|s| s == scc) {
        Ok(report)
    } else {
        Err(Error::NotLeafScc(scc.iter().map(|v| v + 1).collect()))
    }
}

fn sorted(scc: &[usize]) -> Vec<usize> {
    let mut v = scc.to_vec();
    v.sort_unstable();
    v
}

/// Step (i): removes every arc leaving `v`, a member of leaf SCC `scc`.
pub fn prune_scc(g: &mut GraphPair, scc: &[usize], v: usize) -> Result<Step> {
    let scc = sorted(scc);
    leaf_report_check(g, &scc)?;
    if !scc.contains(&v) {
        return Err(Error::VertexNotInScc {
            vertex: v + 1,
            scc: scc.iter().map(|u| u + 1).collect(),
        });
    }
    Ok(prune_unchecked(g, scc, v))
}

fn prune_unchecked(g: &mut GraphPair, scc: Vec<usize>, v: usize) -> Step {
    let removed_arcs = g.remove_out_arcs(v).into_iter().map(|w| (v, w)).collect();
    Step::Prune {
        scc,
        vertex: v,
        removed_arcs,
    }
}

/// Step (ii): appends a dummy leaf fed by the smallest vertex of a
/// message-disconnected leaf SCC. Returns the dummy's index.
pub fn append_dummy(g: &mut GraphPair, scc: &[usize]) -> Result<(usize, Step)> {
    let scc = sorted(scc);
    let class = Analysis::new(g).classify_leaf_scc(&scc)?.class;
    if class != LeafClass::MessageDisconnected {
        return Err(Error::NotMessageDisconnected(scc.iter().map(|v| v + 1).collect()));
    }
    Ok(append_dummy_unchecked(g, scc))
}

fn append_dummy_unchecked(g: &mut GraphPair, scc: Vec<usize>) -> (usize, Step) {
    let source = scc[0];
    let dummy = g.add_dummy();
    g.add_arc(source, dummy);
    (
        dummy,
        Step::AppendDummy {
            scc,
            dummy,
            added_arcs: vec![(source, dummy)],
        },
    )
}

/// Step (iii): adds an arc out of a degenerated semi leaf SCC, from the
/// smallest vertex of the witness part. The target is the non-leaf member of
/// `V_S''` when there is one (iii-a), otherwise its smallest member (iii-b).
/// The witness is re-verified first.
pub fn add_degenerate_arc(g: &mut GraphPair, scc: &[usize], witness: &DegeneracyWitness) -> Result<Step> {
    let scc = sorted(scc);
    if !Analysis::new(g).witness_holds(&scc, witness) {
        return Err(Error::StaleWitness(scc.iter().map(|v| v + 1).collect()));
    }
    let source = *witness.part.iter().min().expect("witness part is non-empty");
    degenerate_arc_unchecked(g, scc, witness.clone(), source)
}

fn degenerate_arc_unchecked(
    g: &mut GraphPair,
    scc: Vec<usize>,
    witness: DegeneracyWitness,
    source: usize,
) -> Result<Step> {
    match witness.non_leaf {
        Some(target) => {
            g.add_arc(source, target);
            Ok(Step::ArcToNonLeaf {
                scc,
                witness,
                added_arcs: vec![(source, target)],
            })
        }
        None => {
            // A semi leaf SCC always has an m-neighbour outside, so an
            // all-leaf V_S'' that covers it is never empty.
            let Some(&target) = witness.outside.iter().min() else {
                return Err(Error::StaleWitness(scc.iter().map(|v| v + 1).collect()));
            };
            g.add_arc(source, target);
            Ok(Step::ArcToLeaf {
                scc,
                witness,
                added_arcs: vec![(source, target)],
            })
        }
    }
}

/// Step (iv-b): chains the message-graph components inside a semi leaf SCC
/// through their smallest vertices. Returns the added edges.
pub fn make_message_connected(g: &mut GraphPair, scc: &[usize]) -> Result<Vec<(usize, usize)>> {
    let scc = sorted(scc);
    let class = Analysis::new(g).classify_leaf_scc(&scc)?.class;
    match class {
        LeafClass::MessageConnected => Err(Error::AlreadyConnected(scc.iter().map(|v| v + 1).collect())),
        c if c.is_semi() => Ok(connect_unchecked(g, &scc)),
        _ => Err(Error::NotSemi(scc.iter().map(|v| v + 1).collect())),
    }
}

fn connect_unchecked(g: &mut GraphPair, scc: &[usize]) -> Vec<(usize, usize)> {
    let comps = message_components(g, &scc.iter().copied().collect());
    let edges: Vec<(usize, usize)> = comps.windows(2).map(|w| (w[0][0], w[1][0])).collect();
    for &(i, j) in &edges {
        g.add_edge(i, j);
    }
    edges
}

#[derive(Debug, Clone)]
struct Partial {
    g: GraphPair,
    log: Vec<Step>,
    prunes: usize,
}

struct Explorer {
    branch: bool,
    budget: usize,
    visited: usize,
}

struct OverBudget;

impl Explorer {
    fn tick(&mut self) -> Result<(), OverBudget> {
        self.visited += 1;
        if self.branch && self.visited > self.budget {
            Err(OverBudget)
        } else {
            Ok(())
        }
    }

    /// All outcomes of the break routine from `start`. Without branching
    /// there is exactly one.
    fn break_outcomes(&mut self, start: Partial, limit: PruneLimit) -> Result<Vec<Partial>, OverBudget> {
        let report = classify(&start.g);
        let connected: Vec<Vec<usize>> = report
            .with_class(LeafClass::MessageConnected)
            .map(|(s, _)| s.to_vec())
            .collect();
        let groups: Vec<Vec<Vec<usize>>> = match limit {
            PruneLimit::All => vec![connected],
            PruneLimit::Once if connected.is_empty() => vec![Vec::new()],
            PruneLimit::Once if self.branch => connected.into_iter().map(|s| vec![s]).collect(),
            PruneLimit::Once => vec![vec![connected[0].clone()]],
        };

        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for group in groups {
            // one prune vertex per SCC in the group
            let mut starts = vec![start.clone()];
            for scc in &group {
                let choices: &[usize] = if self.branch { scc } else { &scc[..1] };
                starts = starts
                    .into_iter()
                    .flat_map(|p| {
                        choices.iter().map(move |&v| {
                            let mut q = p.clone();
                            let step = prune_unchecked(&mut q.g, scc.clone(), v);
                            q.log.push(step);
                            q.prunes += 1;
                            q
                        })
                    })
                    .collect();
            }
            for p in starts {
                self.settle(p, true, &mut seen, &mut out)?;
            }
        }
        Ok(out)
    }

    /// The while-loops of the break routine. `fresh` marks the top of the
    /// outer loop, where dummies are appended before degenerated SCCs are
    /// handled.
    fn settle(
        &mut self,
        mut p: Partial,
        fresh: bool,
        seen: &mut HashSet<(GraphPair, bool)>,
        out: &mut Vec<Partial>,
    ) -> Result<(), OverBudget> {
        if !seen.insert((p.g.clone(), fresh)) {
            return Ok(());
        }
        self.tick()?;

        let mut report = classify(&p.g);
        if fresh {
            let disconnected: Vec<Vec<usize>> = report
                .with_class(LeafClass::MessageDisconnected)
                .map(|(s, _)| s.to_vec())
                .collect();
            if disconnected.is_empty() && report.count(LeafClass::SemiDegenerated) == 0 {
                out.push(p);
                return Ok(());
            }
            if !disconnected.is_empty() {
                for scc in disconnected {
                    let (_, step) = append_dummy_unchecked(&mut p.g, scc);
                    p.log.push(step);
                }
                report = classify(&p.g);
            }
        }

        let degenerated: Vec<Vec<usize>> = report
            .with_class(LeafClass::SemiDegenerated)
            .map(|(s, _)| s.to_vec())
            .collect();
        if degenerated.is_empty() {
            return self.settle(p, true, seen, out);
        }

        let analysis = Analysis::new(&p.g);
        let mut actions = Vec::new();
        for scc in &degenerated {
            let witnesses = analysis.all_witnesses(scc).expect("degenerated SCC is semi");
            for w in witnesses {
                // Arc sources only matter for (iii-a): an arc into a leaf
                // grounds the whole SCC whichever member it leaves from.
                let sources: Vec<usize> = if self.branch && w.non_leaf.is_some() {
                    w.part.clone()
                } else {
                    vec![w.part[0]]
                };
                for u in sources {
                    actions.push((scc.clone(), w.clone(), u));
                }
                if !self.branch {
                    break;
                }
            }
            if !self.branch {
                break;
            }
        }
        for (scc, w, u) in actions {
            let mut q = p.clone();
            let step = degenerate_arc_unchecked(&mut q.g, scc, w, u).expect("canonical witness has a target");
            q.log.push(step);
            self.settle(q, false, seen, out)?;
        }
        Ok(())
    }

    /// All outcomes of one phase-2 iteration.
    fn iteration_outcomes(&mut self, p: Partial) -> Result<Vec<Partial>, OverBudget> {
        let report = classify(&p.g);
        if report.count(LeafClass::MessageConnected) > 0 {
            let mut q = p;
            q.log.push(Step::PruneOneConnected);
            return self.break_outcomes(q, PruneLimit::Once);
        }
        let semis: Vec<Vec<usize>> = report.leaf_sccs().map(<[usize]>::to_vec).collect();
        let picks = if self.branch { &semis[..] } else { &semis[..1] };
        let mut out = Vec::new();
        for scc in picks {
            let mut q = p.clone();
            q.log.push(Step::SelectSemi { scc: scc.clone() });
            let added_edges = connect_unchecked(&mut q.g, scc);
            q.log.push(Step::ConnectMessages {
                scc: scc.clone(),
                added_edges,
            });
            q.log.push(Step::BreakAgain);
            out.extend(self.break_outcomes(q, PruneLimit::All)?);
        }
        Ok(out)
    }
}

fn finish(
    initial_v_out: usize,
    p: Partial,
    n_connected: usize,
    n_iv: usize,
    n_remaining: usize,
    mode: SearchMode,
    states_explored: usize,
) -> AlgorithmTrace {
    AlgorithmTrace {
        mode,
        fell_back: false,
        states_explored,
        initial_v_out,
        dummy_count: p.g.dummy_count(),
        state: p.g,
        log: p.log,
        n_connected,
        n_iv,
        n_remaining,
    }
}

fn run_deterministic(g: &GraphPair) -> AlgorithmTrace {
    let mut ex = Explorer {
        branch: false,
        budget: usize::MAX,
        visited: 0,
    };
    let start = Partial {
        g: g.clone(),
        log: Vec::new(),
        prunes: 0,
    };
    let mut p = ex
        .break_outcomes(start, PruneLimit::All)
        .ok()
        .and_then(|mut v| v.pop())
        .expect("deterministic break yields one outcome");
    let n_connected = p.prunes;
    let n_remaining = scc_decompose(&p.g).num_leaf_sccs();

    let mut n_iv = 0;
    let mut leaves = n_remaining;
    while leaves > 0 {
        p = ex
            .iteration_outcomes(p)
            .ok()
            .and_then(|mut v| v.pop())
            .expect("deterministic iteration yields one outcome");
        n_iv += 1;
        let now = scc_decompose(&p.g).num_leaf_sccs();
        assert!(now < leaves, "phase-2 iteration did not reduce the leaf SCC count");
        leaves = now;
    }
    finish(g.v_out(), p, n_connected, n_iv, n_remaining, SearchMode::Deterministic, ex.visited)
}

fn run_exhaustive(g: &GraphPair, budget: usize) -> Result<AlgorithmTrace, OverBudget> {
    let mut ex = Explorer {
        branch: true,
        budget,
        visited: 0,
    };
    let start = Partial {
        g: g.clone(),
        log: Vec::new(),
        prunes: 0,
    };
    // (outcome, n_remaining after phase 1, n_connected)
    let mut visited: HashSet<GraphPair> = HashSet::new();
    let mut layer: Vec<(Partial, usize)> = Vec::new();
    for p in ex.break_outcomes(start, PruneLimit::All)? {
        if visited.insert(p.g.clone()) {
            let remaining = scc_decompose(&p.g).num_leaf_sccs();
            layer.push((p, remaining));
        }
    }
    let n_connected = layer.first().map_or(0, |(p, _)| p.prunes);

    let mut depth = 0;
    loop {
        if let Some((p, remaining)) = layer
            .iter()
            .find(|(p, _)| scc_decompose(&p.g).num_leaf_sccs() == 0)
            .cloned()
        {
            return Ok(finish(
                g.v_out(),
                p,
                n_connected,
                depth,
                remaining,
                SearchMode::Exhaustive,
                ex.visited,
            ));
        }
        let mut next = Vec::new();
        for (p, remaining) in layer {
            for q in ex.iteration_outcomes(p)? {
                if visited.insert(q.g.clone()) {
                    next.push((q, remaining));
                }
            }
        }
        assert!(!next.is_empty(), "phase 2 stalled with leaf SCCs left");
        layer = next;
        depth += 1;
    }
}

/// Runs the full leaf-SCC breaking algorithm on simplified graphs.
pub fn run_algorithm1(g: &GraphPair, mode: SearchMode) -> AlgorithmTrace {
    run_algorithm1_with(g, &BoundOptions { mode, ..Default::default() })
}

pub fn run_algorithm1_with(g: &GraphPair, opts: &BoundOptions) -> AlgorithmTrace {
    match opts.mode {
        SearchMode::Deterministic => run_deterministic(g),
        SearchMode::Exhaustive => match run_exhaustive(g, opts.state_budget) {
            Ok(trace) => trace,
            Err(OverBudget) => {
                log::warn!(
                    "exhaustive search exceeded {} states; using the deterministic run",
                    opts.state_budget
                );
                let mut trace = run_deterministic(g);
                trace.fell_back = true;
                trace
            }
        },
    }
}

/// `V_out(G) - (N_connected + N_iv)`, cross-checked against `V_out(G†)`.
pub fn lower_bound(trace: &AlgorithmTrace) -> Result<usize> {
    let actual = trace.state.v_out();
    let counted = trace
        .initial_v_out
        .checked_sub(trace.n_connected + trace.n_iv)
        .ok_or(Error::CountMismatch {
            counted: 0,
            actual,
        })?;
    if counted != actual {
        return Err(Error::CountMismatch { counted, actual });
    }
    Ok(counted)
}

/// The sender-blind bound: prune every leaf SCC at its smallest vertex and
/// count the remaining non-leaf vertices.
pub fn lower_bound_prune_all(g: &GraphPair) -> usize {
    let mut g = g.clone();
    loop {
        let report = scc_decompose(&g);
        if report.leaf_sccs.is_empty() {
            return g.v_out();
        }
        let firsts: Vec<usize> = report.leaf_sccs().map(|s| s[0]).collect();
        for v in firsts {
            g.remove_out_arcs(v);
        }
    }
}
