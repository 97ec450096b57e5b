//! Strongly connected components, groundedness and the classification of
//! leaf SCCs against the message graph.
//!
//! A leaf SCC is a strongly connected component with at least two vertices
//! and no arc leaving it. Each leaf SCC falls in exactly one class:
//!
//! * message-connected: `U` restricted to the SCC is connected;
//! * message-disconnected: two of its vertices are not joined by any path of
//!   the whole `U`;
//! * semi: everything else, i.e. connected in `U` only through outside
//!   vertices. Semi SCCs are further split by [`is_degenerated`].

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::GraphPair;
use crate::one_based;

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafClass {
    MessageConnected,
    MessageDisconnected,
    SemiDegenerated,
    SemiNonDegenerated,
}

impl LeafClass {
    pub fn is_semi(self) -> bool {
        matches!(self, LeafClass::SemiDegenerated | LeafClass::SemiNonDegenerated)
    }
}

/// Proof that a semi leaf SCC `S` is degenerated: a part `S'` of `S` with no
/// message-graph edge to `S \ S'`, and an outside set `V_S''` holding at most
/// one non-leaf vertex, such that every m-neighbour of `S'` lies in `V_S''` or
/// is a predecessor of a vertex in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegeneracyWitness {
    #[serde(serialize_with = "one_based::vertices")]
    pub part: Vec<usize>,
    #[serde(serialize_with = "one_based::vertices")]
    pub outside: Vec<usize>,
    /// The single non-leaf member of `outside`, if any.
    #[serde(serialize_with = "one_based::opt_vertex")]
    pub non_leaf: Option<usize>,
    /// `part` has no m-neighbours at all, so the covering condition holds
    /// trivially.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: LeafClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DegeneracyWitness>,
}

/// SCC decomposition of `G` with the leaf SCCs flagged and, once classified,
/// one [`Classification`] per leaf SCC.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccReport {
    /// Sorted vertex lists, ordered by smallest member.
    #[serde(serialize_with = "one_based::vertex_sets")]
    pub sccs: Vec<Vec<usize>>,
    #[serde(skip)]
    pub component_of: Vec<usize>,
    /// Indices into `sccs`.
    pub leaf_sccs: Vec<usize>,
    /// Parallel to `leaf_sccs`; empty until classified.
    pub classes: Vec<Classification>,
}

impl SccReport {
    pub fn leaf_scc(&self, k: usize) -> &[usize] {
        &self.sccs[self.leaf_sccs[k]]
    }

    pub fn leaf_sccs(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.leaf_sccs.iter().map(move |&c| self.sccs[c].as_slice())
    }

    pub fn num_leaf_sccs(&self) -> usize {
        self.leaf_sccs.len()
    }

    /// Leaf SCCs of the given class, in report order.
    pub fn with_class(&self, class: LeafClass) -> impl Iterator<Item = (&[usize], &Classification)> + '_ {
        self.leaf_sccs
            .iter()
            .zip(&self.classes)
            .filter(move |(_, c)| c.class == class)
            .map(move |(&k, c)| (self.sccs[k].as_slice(), c))
    }

    pub fn count(&self, class: LeafClass) -> usize {
        self.classes.iter().filter(|c| c.class == class).count()
    }
}

/// Tarjan's algorithm, iterative. Components come out sorted internally and
/// ordered by smallest member.
pub fn tarjan_scc(g: &GraphPair) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let succ: Vec<Vec<usize>> = g.vertices().map(|v| g.successors(v).iter().copied().collect()).collect();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut comps = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// SCC partition with leaf SCCs flagged; `classes` is left empty.
pub fn scc_decompose(g: &GraphPair) -> SccReport {
    let sccs = tarjan_scc(g);
    let mut component_of = vec![0; g.n()];
    for (c, comp) in sccs.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let leaf_sccs = sccs
        .iter()
        .enumerate()
        .filter(|(c, comp)| {
            comp.len() >= 2
                && comp
                    .iter()
                    .all(|&v| g.successors(v).iter().all(|&w| component_of[w] == *c))
        })
        .map(|(c, _)| c)
        .collect();
    SccReport {
        sccs,
        component_of,
        leaf_sccs,
        classes: Vec::new(),
    }
}

/// Vertices reachable from `v` by a path of at least one arc.
pub fn reachable_from(g: &GraphPair, v: usize) -> VertexSet {
    let mut seen = VertexSet::new();
    let mut queue: VecDeque<usize> = g.successors(v).iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        if seen.insert(u) {
            queue.extend(g.successors(u).iter().copied());
        }
    }
    seen
}

/// All `j` with a directed path `j ⇝ i` of at least one arc. `i` itself is
/// included only when it lies on a cycle.
pub fn predecessors(g: &GraphPair, i: usize) -> VertexSet {
    let pred = g.predecessor_lists();
    let mut seen = VertexSet::new();
    let mut queue: VecDeque<usize> = pred[i].iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        if seen.insert(u) {
            queue.extend(pred[u].iter().copied());
        }
    }
    seen
}

/// Leaves together with every predecessor of a leaf.
pub fn grounded_set(g: &GraphPair) -> VertexSet {
    let pred = g.predecessor_lists();
    let mut seen: VertexSet = g.leaves().collect();
    let mut queue: VecDeque<usize> = seen.iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        for &p in &pred[u] {
            if seen.insert(p) {
                queue.push_back(p);
            }
        }
    }
    seen
}

/// Every vertex is grounded, checked vertex by vertex.
pub fn is_grounded_direct(g: &GraphPair) -> bool {
    grounded_set(g).len() == g.n()
}

/// Every vertex is grounded, checked on the condensation: the digraph is
/// grounded iff no supernode (SCC of two or more vertices) is a sink.
pub fn is_grounded_condensation(g: &GraphPair) -> bool {
    scc_decompose(g).leaf_sccs.is_empty()
}

pub fn is_grounded_digraph(g: &GraphPair) -> bool {
    let grounded = is_grounded_condensation(g);
    debug_assert_eq!(grounded, is_grounded_direct(g));
    grounded
}

/// Vertices outside `vs` adjacent in `U` to some member of `vs`.
pub fn m_neighbors(g: &GraphPair, vs: &VertexSet) -> VertexSet {
    vs.iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|u| !vs.contains(u))
        .collect()
}

/// Connected components of `U` restricted to `within`, each sorted and
/// ordered by smallest member.
pub fn message_components(g: &GraphPair, within: &VertexSet) -> Vec<Vec<usize>> {
    let mut seen = VertexSet::new();
    let mut comps = Vec::new();
    for &start in within {
        if seen.contains(&start) {
            continue;
        }
        seen.insert(start);
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if within.contains(&w) && seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Component label of every vertex in the whole message graph.
pub fn message_component_labels(g: &GraphPair) -> Vec<usize> {
    let all: VertexSet = g.vertices().collect();
    let mut label = vec![0; g.n()];
    for (c, comp) in message_components(g, &all).iter().enumerate() {
        for &v in comp {
            label[v] = c;
        }
    }
    label
}

/// Reachability and groundedness of one graph state, shared by all leaf SCC
/// classifications of that state.
pub struct Analysis<'a> {
    g: &'a GraphPair,
    reach: Vec<VertexSet>,
    grounded: Vec<bool>,
    labels: Vec<usize>,
}

impl<'a> Analysis<'a> {
    pub fn new(g: &'a GraphPair) -> Self {
        let reach = g.vertices().map(|v| reachable_from(g, v)).collect();
        let grounded_vs = grounded_set(g);
        let grounded = g.vertices().map(|v| grounded_vs.contains(&v)).collect();
        Analysis {
            g,
            reach,
            grounded,
            labels: message_component_labels(g),
        }
    }

    pub fn graph(&self) -> &GraphPair {
        self.g
    }

    /// Whether `j` is a predecessor of `i`.
    pub fn is_predecessor(&self, j: usize, i: usize) -> bool {
        self.reach[j].contains(&i)
    }

    pub fn is_grounded(&self, v: usize) -> bool {
        self.grounded[v]
    }

    fn check_leaf_scc(&self, scc: &[usize]) -> Result<VertexSet> {
        let set: VertexSet = scc.iter().copied().collect();
        let ok = set.len() >= 2
            && set.len() == scc.len()
            && set.iter().all(|&v| v < self.g.n())
            && set.iter().all(|&v| self.g.successors(v).is_subset(&set))
            && set.iter().all(|&v| set.iter().all(|&w| v == w || self.reach[v].contains(&w)));
        if ok {
            Ok(set)
        } else {
            Err(Error::NotLeafScc(scc.iter().map(|v| v + 1).collect()))
        }
    }

    pub fn classify_leaf_scc(&self, scc: &[usize]) -> Result<Classification> {
        let set = self.check_leaf_scc(scc)?;
        let inner = message_components(self.g, &set);
        if inner.len() == 1 {
            return Ok(Classification {
                class: LeafClass::MessageConnected,
                witness: None,
            });
        }
        let first = self.labels[scc[0]];
        if scc.iter().any(|&v| self.labels[v] != first) {
            return Ok(Classification {
                class: LeafClass::MessageDisconnected,
                witness: None,
            });
        }
        let witness = self.first_witness(&set, &inner);
        Ok(Classification {
            class: if witness.is_some() {
                LeafClass::SemiDegenerated
            } else {
                LeafClass::SemiNonDegenerated
            },
            witness,
        })
    }

    fn semi_parts(&self, scc: &[usize]) -> Result<(VertexSet, Vec<Vec<usize>>)> {
        let set = self.check_leaf_scc(scc)?;
        let inner = message_components(self.g, &set);
        let first = self.labels[scc[0]];
        if inner.len() < 2 || scc.iter().any(|&v| self.labels[v] != first) {
            return Err(Error::NotSemi(scc.iter().map(|v| v + 1).collect()));
        }
        Ok((set, inner))
    }

    /// Candidate non-leaf members `w` of `V_S''` that make `part` covered,
    /// with `None` (all-leaf `V_S''`) first when it suffices. When `None`
    /// suffices every outside non-leaf vertex works as well.
    fn covering_options(&self, scc: &VertexSet, part: &VertexSet) -> (Vec<Option<usize>>, bool) {
        let neighbors = m_neighbors(self.g, part);
        let vacuous = neighbors.is_empty();
        let ungrounded: Vec<usize> = neighbors.into_iter().filter(|&x| !self.grounded[x]).collect();
        let mut options = Vec::new();
        if ungrounded.is_empty() {
            options.push(None);
        }
        for w in self.g.vertices() {
            if scc.contains(&w) || self.g.is_leaf(w) {
                continue;
            }
            if ungrounded.iter().all(|&x| x == w || self.is_predecessor(x, w)) {
                options.push(Some(w));
            }
        }
        (options, vacuous)
    }

    fn make_witness(&self, scc: &VertexSet, part: Vec<usize>, non_leaf: Option<usize>, vacuous: bool) -> DegeneracyWitness {
        let mut outside: Vec<usize> = self.g.leaves().filter(|v| !scc.contains(v)).collect();
        if let Some(w) = non_leaf {
            outside.push(w);
            outside.sort_unstable();
        }
        DegeneracyWitness {
            part,
            outside,
            non_leaf,
            vacuous,
        }
    }

    // Covering is monotone in the part: a witness for a union of components
    // restricts to a witness for each component in it. So single components
    // are the only parts worth trying.
    fn first_witness(&self, scc: &VertexSet, inner: &[Vec<usize>]) -> Option<DegeneracyWitness> {
        inner.iter().find_map(|comp| {
            let part: VertexSet = comp.iter().copied().collect();
            let (options, vacuous) = self.covering_options(scc, &part);
            options
                .first()
                .map(|&w| self.make_witness(scc, comp.clone(), w, vacuous))
        })
    }

    /// Deterministic degeneracy test for a semi leaf SCC: components of
    /// `U[scc]` in order of smallest member, all-leaf `V_S''` before adding a
    /// non-leaf vertex, non-leaf candidates in increasing order.
    pub fn is_degenerated(&self, scc: &[usize]) -> Result<Option<DegeneracyWitness>> {
        let (set, inner) = self.semi_parts(scc)?;
        Ok(self.first_witness(&set, &inner))
    }

    /// Every canonical witness of a semi leaf SCC: one per (component, option)
    /// pair, in the same order as [`Analysis::is_degenerated`] tries them.
    pub fn all_witnesses(&self, scc: &[usize]) -> Result<Vec<DegeneracyWitness>> {
        let (set, inner) = self.semi_parts(scc)?;
        let mut out = Vec::new();
        for comp in &inner {
            let part: VertexSet = comp.iter().copied().collect();
            let (options, vacuous) = self.covering_options(&set, &part);
            for w in options {
                out.push(self.make_witness(&set, comp.clone(), w, vacuous));
            }
        }
        Ok(out)
    }

    /// Checks an arbitrary witness against the definition.
    pub fn witness_holds(&self, scc: &[usize], witness: &DegeneracyWitness) -> bool {
        let Ok((set, _)) = self.semi_parts(scc) else {
            return false;
        };
        let part: VertexSet = witness.part.iter().copied().collect();
        if part.is_empty() || part.len() == set.len() || !part.is_subset(&set) {
            return false;
        }
        let crosses = part
            .iter()
            .any(|&v| self.g.neighbors(v).iter().any(|u| set.contains(u) && !part.contains(u)));
        if crosses {
            return false;
        }
        let outside: VertexSet = witness.outside.iter().copied().collect();
        if outside.iter().any(|v| *v >= self.g.n() || set.contains(v)) {
            return false;
        }
        let non_leaves: Vec<usize> = outside.iter().copied().filter(|&v| !self.g.is_leaf(v)).collect();
        if non_leaves.len() > 1 || non_leaves.first().copied() != witness.non_leaf {
            return false;
        }
        m_neighbors(self.g, &part).iter().all(|&x| {
            outside.contains(&x) || outside.iter().any(|&o| self.is_predecessor(x, o))
        })
    }

    /// Decomposition plus classification of every leaf SCC.
    pub fn classify(&self) -> SccReport {
        let mut report = scc_decompose(self.g);
        report.classes = report
            .leaf_sccs
            .iter()
            .map(|&c| {
                self.classify_leaf_scc(&report.sccs[c])
                    .expect("decomposition produced a non-leaf SCC")
            })
            .collect();
        report
    }
}

pub fn classify(g: &GraphPair) -> SccReport {
    Analysis::new(g).classify()
}

pub fn classify_leaf_scc(g: &GraphPair, scc: &[usize]) -> Result<Classification> {
    Analysis::new(g).classify_leaf_scc(scc)
}

pub fn is_degenerated(g: &GraphPair, scc: &[usize]) -> Result<Option<DegeneracyWitness>> {
    Analysis::new(g).is_degenerated(scc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::testutil::{arb_graph, brute_reach};
    use proptest::prelude::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().map(|v| v - 1).collect()
    }

    fn path3() -> GraphPair {
        GraphPair::from_parts(3, pairs(&[(1, 2), (2, 3)]), []).unwrap()
    }

    /// EX-A after pruning {1,2} at vertex 1, with the edge (1,2) added as
    /// the connecting step does before pruning.
    fn ex_a_mid() -> GraphPair {
        let mut g = graphs(&ex_a());
        g.add_edge(0, 1);
        g.remove_out_arcs(0);
        g
    }

    #[test]
    fn decomposes_worked_example() {
        let r = scc_decompose(&graphs(&ex_a()));
        assert_eq!(r.sccs, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(r.leaf_sccs, vec![0, 1, 2]);
    }

    #[test]
    fn decomposes_cycle_and_path() {
        let r = scc_decompose(&graphs(&ex_b()));
        assert_eq!(r.sccs, vec![vec![0, 1, 2]]);
        assert_eq!(r.leaf_sccs, vec![0]);

        let r = scc_decompose(&path3());
        assert_eq!(r.sccs, vec![vec![0], vec![1], vec![2]]);
        assert!(r.leaf_sccs.is_empty());
    }

    #[test]
    fn predecessors_examples() {
        assert_eq!(predecessors(&path3(), 2), set(&[1, 2]));
        assert_eq!(predecessors(&graphs(&ex_a()), 1), set(&[1, 2]));
        let lone = GraphPair::from_parts(2, [], []).unwrap();
        assert!(predecessors(&lone, 0).is_empty());
    }

    #[test]
    fn grounded_examples() {
        assert_eq!(grounded_set(&path3()), set(&[1, 2, 3]));
        let g = graphs(&ex_a());
        assert!(grounded_set(&g).is_empty());
        let mut cut = g.clone();
        cut.remove_out_arcs(0);
        assert_eq!(grounded_set(&cut), set(&[1, 2]));
    }

    #[test]
    fn grounded_digraph_examples() {
        assert!(!is_grounded_digraph(&graphs(&ex_a())));
        assert!(is_grounded_digraph(&path3()));
        assert!(is_grounded_digraph(&GraphPair::new(4)));
    }

    #[test]
    fn m_neighbor_examples() {
        let g = graphs(&ex_a());
        assert_eq!(m_neighbors(&g, &set(&[1])), set(&[3, 5]));
        assert_eq!(m_neighbors(&g, &set(&[2])), set(&[3, 4, 5, 6]));
        assert!(m_neighbors(&g, &set(&[1, 2, 3, 4, 5, 6])).is_empty());
    }

    #[test]
    fn classifies_worked_example_as_semi_non_degenerated() {
        let g = graphs(&ex_a());
        let report = classify(&g);
        assert_eq!(report.classes.len(), 3);
        for c in &report.classes {
            assert_eq!(c.class, LeafClass::SemiNonDegenerated);
        }
        let a = Analysis::new(&g);
        assert_eq!(a.is_degenerated(&[0, 1]).unwrap(), None);
        assert!(a.all_witnesses(&[0, 1]).unwrap().is_empty());
    }

    #[test]
    fn classifies_connected_and_disconnected() {
        let c = classify_leaf_scc(&graphs(&ex_b()), &[0, 1, 2]).unwrap();
        assert_eq!(c.class, LeafClass::MessageConnected);
        let c = classify_leaf_scc(&graphs(&ex_c()), &[0, 1]).unwrap();
        assert_eq!(c.class, LeafClass::MessageDisconnected);
    }

    #[test]
    fn classify_rejects_non_leaf_sets() {
        let g = graphs(&ex_a());
        assert!(matches!(classify_leaf_scc(&g, &[0]), Err(Error::NotLeafScc(_))));
        assert!(matches!(classify_leaf_scc(&g, &[0, 1, 2, 3]), Err(Error::NotLeafScc(_))));
        assert!(matches!(classify_leaf_scc(&path3(), &[0, 1]), Err(Error::NotLeafScc(_))));
        assert!(matches!(is_degenerated(&graphs(&ex_b()), &[0, 1, 2]), Err(Error::NotSemi(_))));
    }

    #[test]
    fn degenerated_after_first_prune() {
        let g = ex_a_mid();
        let w = is_degenerated(&g, &[2, 3]).unwrap().expect("degenerated");
        assert_eq!(w.part, vec![2]);
        assert_eq!(w.outside, vec![0, 4]);
        assert_eq!(w.non_leaf, Some(4));
        assert!(!w.vacuous);
        assert!(Analysis::new(&g).witness_holds(&[2, 3], &w));
        assert_eq!(classify_leaf_scc(&g, &[2, 3]).unwrap().class, LeafClass::SemiDegenerated);
    }

    #[test]
    fn degenerated_with_single_leaf_neighbor() {
        let g = GraphPair::from_parts(3, pairs(&[(1, 2), (2, 1)]), pairs(&[(1, 3), (2, 3)])).unwrap();
        let w = is_degenerated(&g, &[0, 1]).unwrap().expect("degenerated");
        assert_eq!(w.part, vec![0]);
        assert_eq!(w.outside, vec![2]);
        assert_eq!(w.non_leaf, None);
    }

    #[test]
    fn witness_holds_rejects_bad_witnesses() {
        let g = ex_a_mid();
        let a = Analysis::new(&g);
        let good = a.is_degenerated(&[2, 3]).unwrap().unwrap();
        let mut bad = good.clone();
        bad.outside = vec![0];
        bad.non_leaf = None;
        assert!(!a.witness_holds(&[2, 3], &bad));
        let mut bad = good.clone();
        bad.part = vec![2, 3];
        assert!(!a.witness_holds(&[2, 3], &bad));
        let mut bad = good;
        bad.outside = vec![0, 4, 5];
        assert!(!a.witness_holds(&[2, 3], &bad));
    }

    /// Definition-level degeneracy test: every proper part, every outside
    /// subset with at most one non-leaf vertex.
    fn brute_degenerated(g: &GraphPair, scc: &[usize]) -> bool {
        let a = Analysis::new(g);
        let set: VertexSet = scc.iter().copied().collect();
        let outside_pool: Vec<usize> = g.vertices().filter(|v| !set.contains(v)).collect();
        for pmask in 1..(1u32 << scc.len()) - 1 {
            let part: Vec<usize> = (0..scc.len()).filter(|b| pmask >> b & 1 == 1).map(|b| scc[b]).collect();
            for omask in 0..(1u32 << outside_pool.len()) {
                let outside: Vec<usize> =
                    (0..outside_pool.len()).filter(|b| omask >> b & 1 == 1).map(|b| outside_pool[b]).collect();
                let non_leaf: Vec<usize> = outside.iter().copied().filter(|&v| !g.is_leaf(v)).collect();
                if non_leaf.len() > 1 {
                    continue;
                }
                let w = DegeneracyWitness {
                    part: part.clone(),
                    outside,
                    non_leaf: non_leaf.first().copied(),
                    vacuous: false,
                };
                if a.witness_holds(scc, &w) {
                    return true;
                }
            }
        }
        false
    }

    proptest! {
        #[test]
        fn scc_matches_mutual_reachability(g in arb_graph(7)) {
            let report = scc_decompose(&g);
            let reach = brute_reach(&g);
            for u in g.vertices() {
                for v in g.vertices() {
                    let same = u == v || (reach[u][v] && reach[v][u]);
                    prop_assert_eq!(same, report.component_of[u] == report.component_of[v]);
                }
            }
            let mut seen: Vec<usize> = report.sccs.iter().flatten().copied().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, g.vertices().collect::<Vec<_>>());
        }

        #[test]
        fn predecessors_match_closure(g in arb_graph(7)) {
            let reach = brute_reach(&g);
            for i in g.vertices() {
                let expected: VertexSet = g.vertices().filter(|&j| reach[j][i]).collect();
                prop_assert_eq!(predecessors(&g, i), expected);
            }
        }

        #[test]
        fn grounded_tests_agree(g in arb_graph(7)) {
            prop_assert_eq!(is_grounded_direct(&g), is_grounded_condensation(&g));
        }

        #[test]
        fn leaf_sccs_hold_no_leaf_vertex(g in arb_graph(7)) {
            let report = scc_decompose(&g);
            for scc in report.leaf_sccs() {
                prop_assert!(scc.len() >= 2);
                prop_assert!(scc.iter().all(|&v| !g.is_leaf(v)));
            }
        }

        #[test]
        fn degeneracy_search_is_exact(g in arb_graph(6)) {
            let a = Analysis::new(&g);
            let report = a.classify();
            for (scc, class) in report.leaf_sccs().zip(&report.classes) {
                if !class.class.is_semi() {
                    continue;
                }
                prop_assert_eq!(class.witness.is_some(), brute_degenerated(&g, scc));
                if let Some(w) = &class.witness {
                    prop_assert!(a.witness_holds(scc, w));
                    prop_assert!(!w.vacuous);
                    // adding outside leaves keeps a witness valid
                    let mut more = w.clone();
                    more.outside = g.vertices()
                        .filter(|v| !scc.contains(v) && (g.is_leaf(*v) || Some(*v) == w.non_leaf))
                        .collect();
                    prop_assert!(a.witness_holds(scc, &more));
                }
                for w in a.all_witnesses(scc).unwrap() {
                    prop_assert!(a.witness_holds(scc, &w));
                }
            }
        }
    }
}
