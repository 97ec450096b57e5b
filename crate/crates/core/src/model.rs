//! Problem instances and their graph representation.
//!
//! A uniprior multicast instance has `m` messages and `m` receivers: receiver
//! `r` knows message `r` and wants the set `W_r`. Each of the `S` senders owns
//! a subset of the messages and may only encode from that subset.
//!
//! Everything in the library is 0-based. The JSON document format is 1-based,
//! and [`ProblemInstance::from_one_based`] accepts the same convention.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Senders' message sets and receivers' wanted sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    num_messages: usize,
    senders: Vec<BTreeSet<usize>>,
    wants: Vec<BTreeSet<usize>>,
    simplified: bool,
}

/// On-disk form of an instance. Indices are 1-based and `wants[k]` lists the
/// messages wanted by receiver `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub num_messages: usize,
    pub senders: Vec<Vec<usize>>,
    pub wants: Vec<Vec<usize>>,
    /// Set on documents written after simplification; relaxes the
    /// non-empty-sender and full-coverage checks.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub simplified: bool,
    /// Messages removed by simplification (informational).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<usize>,
}

/// Parses and validates a JSON instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    ProblemInstance::from_doc(&doc)
}

fn to_set(list: &[usize], max: usize, path: &str) -> Result<BTreeSet<usize>> {
    let mut set = BTreeSet::new();
    for (k, &idx) in list.iter().enumerate() {
        if idx == 0 || idx > max {
            return Err(Error::OutOfRange {
                path: format!("{path}[{k}]"),
                index: idx,
                max,
            });
        }
        if !set.insert(idx - 1) {
            return Err(Error::Schema {
                path: format!("{path}[{k}]"),
                msg: format!("duplicate index {idx}"),
            });
        }
    }
    Ok(set)
}

impl ProblemInstance {
    /// Builds an unsimplified instance from 1-based lists.
    pub fn from_one_based(
        num_messages: usize,
        senders: &[Vec<usize>],
        wants: &[Vec<usize>],
    ) -> Result<Self> {
        Self::from_doc(&InstanceDoc {
            schema: None,
            num_messages,
            senders: senders.to_vec(),
            wants: wants.to_vec(),
            simplified: false,
            removed: Vec::new(),
        })
    }

    pub fn from_doc(doc: &InstanceDoc) -> Result<Self> {
        if let Some(v) = doc.schema {
            if v != SCHEMA_VERSION {
                return Err(Error::Schema {
                    path: "schema".into(),
                    msg: format!("unsupported schema version {v}"),
                });
            }
        }
        let m = doc.num_messages;
        if m == 0 {
            return Err(Error::Schema {
                path: "num_messages".into(),
                msg: "must be positive".into(),
            });
        }
        if doc.wants.len() != m {
            return Err(Error::Schema {
                path: "wants".into(),
                msg: format!("expected {m} receivers, found {}", doc.wants.len()),
            });
        }
        if doc.senders.is_empty() {
            return Err(Error::Schema {
                path: "senders".into(),
                msg: "at least one sender is required".into(),
            });
        }

        let mut senders = Vec::with_capacity(doc.senders.len());
        for (s, list) in doc.senders.iter().enumerate() {
            let path = format!("senders[{s}]");
            let set = to_set(list, m, &path)?;
            if set.is_empty() && !doc.simplified {
                return Err(Error::EmptySender { path });
            }
            senders.push(set);
        }

        let mut wants = Vec::with_capacity(m);
        for (r, list) in doc.wants.iter().enumerate() {
            let path = format!("wants[{r}]");
            let set = to_set(list, m, &path)?;
            if set.contains(&r) {
                return Err(Error::SelfWant {
                    path,
                    receiver: r + 1,
                });
            }
            wants.push(set);
        }

        let inst = ProblemInstance {
            num_messages: m,
            senders,
            wants,
            simplified: doc.simplified,
        };

        let owned = inst.owned_messages();
        if doc.simplified {
            let wanted = inst.wanted_messages();
            if let Some(&i) = wanted.difference(&owned).next() {
                return Err(Error::Unowned(i + 1));
            }
            if let Some(&i) = owned.difference(&wanted).next() {
                return Err(Error::Schema {
                    path: "senders".into(),
                    msg: format!("simplified instance still owns unwanted message {}", i + 1),
                });
            }
        } else if let Some(i) = (0..m).find(|i| !owned.contains(i)) {
            return Err(Error::Unowned(i + 1));
        }
        Ok(inst)
    }

    pub fn to_doc(&self) -> InstanceDoc {
        let one_based = |s: &BTreeSet<usize>| s.iter().map(|&i| i + 1).collect();
        InstanceDoc {
            schema: Some(SCHEMA_VERSION),
            num_messages: self.num_messages,
            senders: self.senders.iter().map(one_based).collect(),
            wants: self.wants.iter().map(one_based).collect(),
            simplified: self.simplified,
            removed: Vec::new(),
        }
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    pub fn num_senders(&self) -> usize {
        self.senders.len()
    }

    pub fn senders(&self) -> &[BTreeSet<usize>] {
        &self.senders
    }

    pub fn sender(&self, s: usize) -> &BTreeSet<usize> {
        &self.senders[s]
    }

    /// `W_r` for receiver `r`.
    pub fn wants(&self, r: usize) -> &BTreeSet<usize> {
        &self.wants[r]
    }

    pub fn all_wants(&self) -> &[BTreeSet<usize>] {
        &self.wants
    }

    pub fn is_simplified(&self) -> bool {
        self.simplified
    }

    /// Union of all wanted sets.
    pub fn wanted_messages(&self) -> BTreeSet<usize> {
        self.wants.iter().flatten().copied().collect()
    }

    /// Union of all sender sets.
    pub fn owned_messages(&self) -> BTreeSet<usize> {
        self.senders.iter().flatten().copied().collect()
    }

    /// Smallest sender owning every message in `support`.
    pub fn owner_of(&self, support: &[usize]) -> Option<usize> {
        self.senders
            .iter()
            .position(|set| support.iter().all(|i| set.contains(i)))
    }

    /// Drops every message nobody wants from all sender sets.
    ///
    /// Receivers are kept (a receiver whose message was dropped knows nothing)
    /// and so are senders left empty, so sender numbering stays stable.
    /// Returns the new instance and the removed messages.
    pub fn simplify(&self) -> (ProblemInstance, BTreeSet<usize>) {
        let wanted = self.wanted_messages();
        let removed: BTreeSet<usize> = self.owned_messages().difference(&wanted).copied().collect();
        let senders = self
            .senders
            .iter()
            .map(|set| set.intersection(&wanted).copied().collect())
            .collect();
        let inst = ProblemInstance {
            num_messages: self.num_messages,
            senders,
            wants: self.wants.clone(),
            simplified: true,
        };
        (inst, removed)
    }

    /// Derives the information-flow digraph and the message graph.
    pub fn build_graphs(&self) -> Result<GraphPair> {
        if !self.simplified {
            return Err(Error::NotSimplified);
        }
        let mut g = GraphPair::new(self.num_messages);
        for (j, wanted) in self.wants.iter().enumerate() {
            for &i in wanted {
                g.add_arc(i, j);
            }
        }
        for set in &self.senders {
            let members: Vec<usize> = set.iter().copied().collect();
            for (k, &i) in members.iter().enumerate() {
                for &j in &members[k + 1..] {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Returns a copy with a sender owning `a ∪ b` in place of senders `a` and
    /// `b` (the merged sender takes the smaller id).
    pub fn merge_senders(&self, a: usize, b: usize) -> ProblemInstance {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut senders = self.senders.clone();
        let taken = senders.remove(hi);
        senders[lo].extend(taken);
        ProblemInstance {
            senders,
            ..self.clone()
        }
    }
}

/// The information-flow digraph `G` (arc `i -> j` iff receiver `j` wants
/// message `i`) and the message graph `U` (edge `{i, j}` iff one sender owns
/// both) over a shared vertex set.
///
/// Vertices appended by the lower-bound algorithm are flagged as dummies; they
/// carry no message and never have outgoing arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphPair {
    succ: Vec<BTreeSet<usize>>,
    adj: Vec<BTreeSet<usize>>,
    dummy: Vec<bool>,
}

impl GraphPair {
    pub fn new(n: usize) -> Self {
        GraphPair {
            succ: vec![BTreeSet::new(); n],
            adj: vec![BTreeSet::new(); n],
            dummy: vec![false; n],
        }
    }

    /// Builds a graph pair from 0-based arc and edge lists.
    pub fn from_parts(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = GraphPair::new(n);
        let check = |i: usize, j: usize, what: &str| -> Result<()> {
            if i >= n || j >= n {
                return Err(Error::OutOfRange {
                    path: what.to_string(),
                    index: i.max(j) + 1,
                    max: n,
                });
            }
            if i == j {
                return Err(Error::Schema {
                    path: what.to_string(),
                    msg: format!("self-loop at {}", i + 1),
                });
            }
            Ok(())
        };
        for (i, j) in arcs {
            check(i, j, "arcs")?;
            g.add_arc(i, j);
        }
        for (i, j) in edges {
            check(i, j, "edges")?;
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub fn successors(&self, v: usize) -> &BTreeSet<usize> {
        &self.succ[v]
    }

    /// Neighbours of `v` in the message graph.
    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, out)| out.iter().map(move |&j| (i, j)))
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.range(i + 1..).map(move |&j| (i, j)))
    }

    pub fn num_arcs(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).sum()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(&j)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.succ[v].is_empty()
    }

    pub fn is_dummy(&self, v: usize) -> bool {
        self.dummy[v]
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy.iter().filter(|&&d| d).count()
    }

    /// Number of non-leaf vertices. Dummies are always leaves.
    pub fn v_out(&self) -> usize {
        self.vertices()
            .filter(|&v| !self.dummy[v] && !self.is_leaf(v))
            .count()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices().filter(|&v| self.is_leaf(v))
    }

    /// Adds arc `i -> j`; returns false if it was already present.
    pub fn add_arc(&mut self, i: usize, j: usize) -> bool {
        assert_ne!(i, j, "self-loop arc");
        self.succ[i].insert(j)
    }

    /// Deletes every arc leaving `v`, returning the old targets.
    pub fn remove_out_arcs(&mut self, v: usize) -> Vec<usize> {
        std::mem::take(&mut self.succ[v]).into_iter().collect()
    }

    /// Adds edge `{i, j}`; returns false if it was already present.
    pub fn add_edge(&mut self, i: usize, j: usize) -> bool {
        assert_ne!(i, j, "self-loop edge");
        self.adj[j].insert(i);
        self.adj[i].insert(j)
    }

    /// Appends a message-less dummy vertex with no arcs or edges.
    pub fn add_dummy(&mut self) -> usize {
        self.succ.push(BTreeSet::new());
        self.adj.push(BTreeSet::new());
        self.dummy.push(true);
        self.n() - 1
    }

    /// In-neighbour lists, derived on demand.
    pub fn predecessor_lists(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.n()];
        for (i, j) in self.arcs() {
            pred[j].push(i);
        }
        pred
    }
}
