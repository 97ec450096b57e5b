//! Pairwise XOR codes built from connecting trees, and the upper bound they
//! give.
//!
//! A connecting tree is a tree of the message graph whose vertex set `V^T`
//! (1) has only non-leaf vertices, (2) has no arc leaving it, and (3) avoids
//! message-connected leaf SCCs and every other connecting tree. The code sends
//! `x_i ⊕ x_j` for each tree edge, the same for a spanning tree of every
//! message-connected leaf SCC, and every other non-leaf message uncoded. Its
//! length is `V_out(G) - N_connected - N_tree`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Vec;
use crate::graphs::{classify, reachable_from, LeafClass};
use crate::model::{GraphPair, ProblemInstance, SCHEMA_VERSION};
use crate::one_based;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeSearch {
    #[default]
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeOptions {
    pub mode: TreeSearch,
    /// Exact search enumerates subsets of the eligible vertices; beyond this
    /// many it falls back to greedy.
    pub exact_limit: usize,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            mode: TreeSearch::Exact,
            exact_limit: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectingTree {
    #[serde(serialize_with = "one_based::vertices")]
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "one_based::pairs")]
    pub edges: Vec<(usize, usize)>,
}

/// Outcome of the connecting-tree search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeFamily {
    pub trees: Vec<ConnectingTree>,
    /// The family is known to be of maximum size.
    pub exact: bool,
}

impl TreeFamily {
    pub fn n_tree(&self) -> usize {
        self.trees.len()
    }
}

fn connected_leaf_sccs(g: &GraphPair) -> Vec<Vec<usize>> {
    classify(g)
        .with_class(LeafClass::MessageConnected)
        .map(|(s, _)| s.to_vec())
        .collect()
}

/// Spanning tree of `U[vs]` by Kruskal over lexicographically sorted edges,
/// or `None` if `U[vs]` is disconnected.
pub fn spanning_tree(g: &GraphPair, vs: &[usize]) -> Option<Vec<(usize, usize)>> {
    let members: BTreeSet<usize> = vs.iter().copied().collect();
    let mut parent: BTreeMap<usize, usize> = members.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let root = find(parent, p);
        parent.insert(v, root);
        root
    }
    let mut tree = Vec::new();
    for (i, j) in g.edges().filter(|(i, j)| members.contains(i) && members.contains(j)) {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent.insert(a.max(b), a.min(b));
            tree.push((i, j));
        }
    }
    (tree.len() + 1 == members.len()).then_some(tree)
}

/// Vertices that may appear in a connecting tree: non-leaf, outside
/// message-connected leaf SCCs, and not forced (through arc closure) to
/// bring in a vertex that is neither.
fn eligible_vertices(g: &GraphPair) -> Vec<usize> {
    let banned: BTreeSet<usize> = connected_leaf_sccs(g).into_iter().flatten().collect();
    let mut ok: Vec<bool> = g
        .vertices()
        .map(|v| !g.is_leaf(v) && !g.is_dummy(v) && !banned.contains(&v))
        .collect();
    loop {
        let mut changed = false;
        for v in g.vertices() {
            if ok[v] && g.successors(v).iter().any(|&w| !ok[w]) {
                ok[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    g.vertices().filter(|&v| ok[v]).collect()
}

fn mask_connected(mask: u64, adj: &[u64]) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let k = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[k] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

/// Maximum packing of pairwise-disjoint sets, branching on the lowest
/// vertex still coverable.
fn max_packing(cands: &[u64], avail: u64, min_size: u32, chosen: &mut Vec<u64>, best: &mut Vec<u64>) {
    if chosen.len() + (avail.count_ones() / min_size) as usize <= best.len() {
        return;
    }
    let usable: Vec<u64> = cands.iter().copied().filter(|c| c & !avail == 0).collect();
    if usable.is_empty() {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        return;
    }
    let union = usable.iter().fold(0, |a, c| a | c);
    let v = union & union.wrapping_neg();
    for &c in usable.iter().filter(|&&c| c & v != 0) {
        chosen.push(c);
        max_packing(cands, avail & !c, min_size, chosen, best);
        chosen.pop();
    }
    max_packing(cands, avail & !v, min_size, chosen, best);
}

fn exact_tree_sets(g: &GraphPair, elig: &[usize]) -> Vec<Vec<usize>> {
    let pos: BTreeMap<usize, usize> = elig.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let out: Vec<u64> = elig
        .iter()
        .map(|&v| g.successors(v).iter().fold(0, |m, w| m | 1 << pos[w]))
        .collect();
    let adj: Vec<u64> = elig
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| pos.get(w))
                .fold(0, |m, &k| m | 1 << k)
        })
        .collect();

    let mut cands: Vec<u64> = (1u64..1 << elig.len())
        .filter(|&mask| {
            let mut rest = mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if out[k] & !mask != 0 {
                    return false;
                }
            }
            mask_connected(mask, &adj)
        })
        .collect();
    // Swapping a set for a subset never breaks disjointness, so only
    // inclusion-minimal sets need packing.
    cands.sort_by_key(|c| (c.count_ones(), *c));
    let mut minimal: Vec<u64> = Vec::new();
    for c in cands {
        if !minimal.iter().any(|&m| m & !c == 0) {
            minimal.push(c);
        }
    }
    minimal.sort_unstable();
    let Some(min_size) = minimal.iter().map(|c| c.count_ones()).min() else {
        return Vec::new();
    };
    let mut best = Vec::new();
    max_packing(&minimal, (1u64 << elig.len()) - 1, min_size, &mut Vec::new(), &mut best);
    best.into_iter()
        .map(|mask| (0..elig.len()).filter(|k| mask >> k & 1 == 1).map(|k| elig[k]).collect())
        .collect()
}

fn greedy_tree_sets(g: &GraphPair, elig: &[usize]) -> Vec<Vec<usize>> {
    let elig_set: BTreeSet<usize> = elig.iter().copied().collect();
    let closure = |v: usize| -> BTreeSet<usize> {
        let mut c = reachable_from(g, v);
        c.insert(v);
        c
    };
    let mut used = BTreeSet::new();
    let mut sets = Vec::new();
    for &v in elig {
        if used.contains(&v) {
            continue;
        }
        let mut set = closure(v);
        let fits = |s: &BTreeSet<usize>, used: &BTreeSet<usize>| s.is_subset(&elig_set) && s.is_disjoint(used);
        if !fits(&set, &used) {
            continue;
        }
        while spanning_tree(g, &set.iter().copied().collect::<Vec<_>>()).is_none() {
            let grow = elig
                .iter()
                .copied()
                .filter(|u| !set.contains(u) && !used.contains(u))
                .filter(|u| g.neighbors(*u).iter().any(|w| set.contains(w)))
                .map(closure)
                .find(|c| fits(c, &used));
            match grow {
                Some(c) => set.extend(c),
                None => break,
            }
        }
        let members: Vec<usize> = set.iter().copied().collect();
        if spanning_tree(g, &members).is_some() {
            used.extend(members.iter().copied());
            sets.push(members);
        }
    }
    sets
}

/// Finds a family of vertex-disjoint connecting trees. Exact mode maximises
/// the family size; greedy mode grows trees from arc closures of vertices in
/// increasing order.
pub fn find_connecting_trees(g: &GraphPair, opts: &TreeOptions) -> TreeFamily {
    let elig = eligible_vertices(g);
    let exact = opts.mode == TreeSearch::Exact && elig.len() <= opts.exact_limit.min(63);
    if opts.mode == TreeSearch::Exact && !exact {
        log::warn!(
            "{} eligible vertices exceed the exact tree search limit {}; using greedy search",
            elig.len(),
            opts.exact_limit
        );
    }
    let sets = if exact {
        exact_tree_sets(g, &elig)
    } else {
        greedy_tree_sets(g, &elig)
    };
    let trees = sets
        .into_iter()
        .map(|vertices| {
            let edges = spanning_tree(g, &vertices).expect("tree vertex set is connected in U");
            ConnectingTree { vertices, edges }
        })
        .collect();
    TreeFamily { trees, exact }
}

/// Checks a connecting tree family against the three defining properties.
pub fn check_trees(g: &GraphPair, trees: &[ConnectingTree]) -> Result<()> {
    let banned: BTreeSet<usize> = connected_leaf_sccs(g).into_iter().flatten().collect();
    let mut taken = BTreeSet::new();
    for t in trees {
        let bad = |reason| Error::InvalidTree {
            vertices: t.vertices.iter().map(|v| v + 1).collect(),
            reason,
        };
        let set: BTreeSet<usize> = t.vertices.iter().copied().collect();
        if set.len() != t.vertices.len() || set.iter().any(|&v| v >= g.n()) {
            return Err(bad("malformed vertex list"));
        }
        if set.iter().any(|&v| g.is_leaf(v)) {
            return Err(bad("contains a leaf vertex"));
        }
        if set.iter().any(|&v| !g.successors(v).is_subset(&set)) {
            return Err(bad("an arc leaves the tree"));
        }
        if !set.is_disjoint(&banned) {
            return Err(bad("overlaps a message-connected leaf SCC"));
        }
        if !set.is_disjoint(&taken) {
            return Err(bad("overlaps another connecting tree"));
        }
        let edges_ok = t.edges.len() + 1 == set.len()
            && t
                .edges
                .iter()
                .all(|&(i, j)| set.contains(&i) && set.contains(&j) && g.has_edge(i, j));
        let connected = {
            let sub = GraphPair::from_parts(g.n(), [], t.edges.iter().copied()).map_err(|_| bad("bad edge"))?;
            spanning_tree(&sub, &t.vertices).is_some()
        };
        if !edges_ok || !connected {
            return Err(bad("edges do not form a spanning tree in U"));
        }
        taken.extend(set);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccTree {
    #[serde(serialize_with = "one_based::vertices")]
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "one_based::pairs")]
    pub edges: Vec<(usize, usize)>,
}

/// Which XORs and uncoded bits the pairwise scheme sends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeBlueprint {
    pub connecting_trees: Vec<ConnectingTree>,
    pub scc_spanning_trees: Vec<SccTree>,
    #[serde(serialize_with = "one_based::vertices")]
    pub uncoded: Vec<usize>,
}

impl CodeBlueprint {
    pub fn len(&self) -> usize {
        self.connecting_trees.iter().map(|t| t.edges.len()).sum::<usize>()
            + self.scc_spanning_trees.iter().map(|t| t.edges.len()).sum::<usize>()
            + self.uncoded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn plan_code(g: &GraphPair, trees: &[ConnectingTree]) -> Result<CodeBlueprint> {
    check_trees(g, trees)?;
    let sccs = connected_leaf_sccs(g);
    let scc_spanning_trees: Vec<SccTree> = sccs
        .into_iter()
        .map(|vertices| {
            let edges = spanning_tree(g, &vertices).expect("message-connected SCC spans in U");
            SccTree { vertices, edges }
        })
        .collect();
    let covered: BTreeSet<usize> = trees
        .iter()
        .flat_map(|t| t.vertices.iter())
        .chain(scc_spanning_trees.iter().flat_map(|t| t.vertices.iter()))
        .copied()
        .collect();
    let uncoded = g
        .vertices()
        .filter(|&v| !g.is_leaf(v) && !g.is_dummy(v) && !covered.contains(&v))
        .collect();
    let bp = CodeBlueprint {
        connecting_trees: trees.to_vec(),
        scc_spanning_trees,
        uncoded,
    };
    debug_assert_eq!(
        bp.len(),
        g.v_out() - bp.scc_spanning_trees.len() - trees.len()
    );
    Ok(bp)
}

/// `V_out(G) - N_connected - N_tree`.
pub fn upper_bound(g: &GraphPair, trees: &[ConnectingTree]) -> Result<usize> {
    Ok(plan_code(g, trees)?.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    TreeXor,
    SccXor,
    Uncoded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeRow {
    pub sender: usize,
    pub coeffs: Gf2Vec,
    pub kind: Option<RowKind>,
}

/// A linear code over GF(2); each row is one transmitted bit computed by
/// `sender` from its own messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearIndexCode {
    pub num_messages: usize,
    pub rows: Vec<CodeRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeRowDoc {
    /// 1-based sender number.
    pub sender: usize,
    pub coeffs: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<RowKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub num_messages: usize,
    #[serde(default)]
    pub length: Option<usize>,
    pub rows: Vec<CodeRowDoc>,
}

impl LinearIndexCode {
    pub fn new(num_messages: usize) -> Self {
        LinearIndexCode {
            num_messages,
            rows: Vec::new(),
        }
    }

    /// Appends a row with the given 0-based support.
    pub fn push(&mut self, sender: usize, support: &[usize], kind: Option<RowKind>) {
        self.rows.push(CodeRow {
            sender,
            coeffs: Gf2Vec::from_support(self.num_messages, support.iter().copied()),
            kind,
        });
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Every row only touches messages its sender owns.
    pub fn check_supports(&self, inst: &ProblemInstance) -> Result<()> {
        if self.num_messages != inst.num_messages() {
            return Err(Error::LengthMismatch {
                expected: inst.num_messages(),
                found: self.num_messages,
            });
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.sender >= inst.num_senders() {
                return Err(Error::OutOfRange {
                    path: format!("rows[{k}].sender"),
                    index: row.sender + 1,
                    max: inst.num_senders(),
                });
            }
            let owned = inst.sender(row.sender);
            if let Some(i) = row.coeffs.support().find(|i| !owned.contains(i)) {
                return Err(Error::SupportViolation {
                    row: k,
                    sender: row.sender + 1,
                    message: i + 1,
                });
            }
        }
        Ok(())
    }

    pub fn from_doc(doc: &CodeDoc) -> Result<Self> {
        let mut code = LinearIndexCode::new(doc.num_messages);
        for (k, row) in doc.rows.iter().enumerate() {
            if row.coeffs.len() != doc.num_messages {
                return Err(Error::LengthMismatch {
                    expected: doc.num_messages,
                    found: row.coeffs.len(),
                });
            }
            if let Some(p) = row.coeffs.iter().position(|&c| c > 1) {
                return Err(Error::Schema {
                    path: format!("rows[{k}].coeffs[{p}]"),
                    msg: "coefficients must be 0 or 1".into(),
                });
            }
            if row.sender == 0 {
                return Err(Error::OutOfRange {
                    path: format!("rows[{k}].sender"),
                    index: 0,
                    max: usize::MAX,
                });
            }
            code.rows.push(CodeRow {
                sender: row.sender - 1,
                coeffs: Gf2Vec::from_support(
                    doc.num_messages,
                    row.coeffs.iter().enumerate().filter(|(_, &c)| c == 1).map(|(i, _)| i),
                ),
                kind: row.kind,
            });
        }
        Ok(code)
    }

    pub fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            schema: Some(SCHEMA_VERSION),
            num_messages: self.num_messages,
            length: Some(self.len()),
            rows: self
                .rows
                .iter()
                .map(|r| CodeRowDoc {
                    sender: r.sender + 1,
                    coeffs: r.coeffs.to_bits(),
                    kind: r.kind,
                })
                .collect(),
        }
    }
}

/// Turns a blueprint into rows, each attributed to the smallest sender owning
/// its support.
pub fn assign_senders(inst: &ProblemInstance, bp: &CodeBlueprint) -> Result<LinearIndexCode> {
    let mut code = LinearIndexCode::new(inst.num_messages());
    let mut emit = |support: &[usize], kind: RowKind| -> Result<()> {
        let sender = inst
            .owner_of(support)
            .ok_or_else(|| Error::NoOwningSender(support.iter().map(|v| v + 1).collect()))?;
        code.push(sender, support, Some(kind));
        Ok(())
    };
    for t in &bp.connecting_trees {
        for &(i, j) in &t.edges {
            emit(&[i, j], RowKind::TreeXor)?;
        }
    }
    for t in &bp.scc_spanning_trees {
        for &(i, j) in &t.edges {
            emit(&[i, j], RowKind::SccXor)?;
        }
    }
    for &v in &bp.uncoded {
        emit(&[v], RowKind::Uncoded)?;
    }
    Ok(code)
}
