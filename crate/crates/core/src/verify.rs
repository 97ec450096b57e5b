//! Decodability of linear codes and the minimum linear codelength oracle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::code::LinearIndexCode;
use crate::error::{Error, Result};
use crate::gf2::{Basis, Gf2Vec, MaskBasis};
use crate::graphs::{classify, predecessors, LeafClass};
use crate::model::{ProblemInstance, SCHEMA_VERSION};
use crate::one_based;

/// How receiver `receiver` recovers `wanted`: XOR the listed rows, plus its
/// own message if `used_prior`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeStep {
    #[serde(serialize_with = "one_based::vertex")]
    pub receiver: usize,
    #[serde(serialize_with = "one_based::vertex")]
    pub wanted: usize,
    /// 0-based row indices into the code.
    pub rows: Vec<usize>,
    pub used_prior: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeCertificate {
    pub schema: u32,
    pub entries: Vec<DecodeStep>,
}

impl DecodeCertificate {
    /// Recombines every entry and checks it lands on the unit vector.
    pub fn check(&self, code: &LinearIndexCode) -> bool {
        self.entries.iter().all(|e| {
            let mut sum = Gf2Vec::zeros(code.num_messages);
            for &k in &e.rows {
                match code.rows.get(k) {
                    Some(row) => sum ^= &row.coeffs,
                    None => return false,
                }
            }
            if e.used_prior {
                sum ^= &Gf2Vec::unit(code.num_messages, e.receiver);
            }
            sum == Gf2Vec::unit(code.num_messages, e.wanted)
        })
    }
}

/// First receiver and wanted message that the code cannot serve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodeFailure {
    #[serde(serialize_with = "one_based::vertex")]
    pub receiver: usize,
    #[serde(serialize_with = "one_based::vertex")]
    pub wanted: usize,
}

/// Checks `e_j ∈ span(rows ∪ {e_r})` for every receiver `r` and `j ∈ W_r`.
///
/// # Panics
/// If the code and instance disagree on the number of messages.
pub fn rank_decodable(
    code: &LinearIndexCode,
    inst: &ProblemInstance,
) -> std::result::Result<DecodeCertificate, DecodeFailure> {
    let m = inst.num_messages();
    assert_eq!(code.num_messages, m, "code length does not match instance");
    let l = code.len();
    let mut base = Basis::new(m, l + 1);
    for row in &code.rows {
        base.insert(&row.coeffs);
    }
    let mut entries = Vec::new();
    for r in 0..m {
        if inst.wants(r).is_empty() {
            continue;
        }
        let mut basis = base.clone();
        basis.insert(&Gf2Vec::unit(m, r));
        for &j in inst.wants(r) {
            let combo = basis
                .express(&Gf2Vec::unit(m, j))
                .ok_or(DecodeFailure { receiver: r, wanted: j })?;
            entries.push(DecodeStep {
                receiver: r,
                wanted: j,
                used_prior: combo.last() == Some(&l),
                rows: combo.into_iter().filter(|&k| k < l).collect(),
            });
        }
    }
    Ok(DecodeCertificate {
        schema: SCHEMA_VERSION,
        entries,
    })
}

pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Decodability by simulation: for every receiver, messages it wants must be
/// a function of (codeword, own message) over all assignments of the
/// messages that senders hold or rows touch.
pub fn verify_exhaustive(code: &LinearIndexCode, inst: &ProblemInstance) -> Result<bool> {
    let m = inst.num_messages();
    if code.num_messages != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: code.num_messages,
        });
    }
    let mut free = inst.owned_messages();
    for row in &code.rows {
        free.extend(row.coeffs.support());
    }
    let free: Vec<usize> = free.into_iter().collect();
    if free.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "simulated message count",
            size: free.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let assignment = |a: u32| Gf2Vec::from_support(m, (0..free.len()).filter(|b| a >> b & 1 == 1).map(|b| free[b]));
    let words: Vec<(Gf2Vec, Gf2Vec)> = (0u32..1 << free.len())
        .map(|a| {
            let x = assignment(a);
            let c = Gf2Vec::from_support(code.len(), code.rows.iter().enumerate().filter(|(_, r)| r.coeffs.dot(&x)).map(|(k, _)| k));
            (x, c)
        })
        .collect();
    for r in 0..m {
        let wants: Vec<usize> = inst.wants(r).iter().copied().collect();
        if wants.is_empty() {
            continue;
        }
        let mut seen: HashMap<(&Gf2Vec, bool), Vec<bool>> = HashMap::new();
        for (x, c) in &words {
            let wanted: Vec<bool> = wants.iter().map(|&j| x.get(j)).collect();
            match seen.get(&(c, x.get(r))) {
                Some(prev) if *prev != wanted => return Ok(false),
                Some(_) => {}
                None => {
                    seen.insert((c, x.get(r)), wanted);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Largest length tried; `None` means the number of wanted messages,
    /// which always suffices when every wanted message is owned.
    pub max_len: Option<usize>,
    pub max_messages: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_len: None,
            max_messages: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Found { length: usize, code: LinearIndexCode },
    Exhausted { max_len: usize },
}

impl OracleOutcome {
    pub fn length(&self) -> Option<usize> {
        match self {
            OracleOutcome::Found { length, .. } => Some(*length),
            OracleOutcome::Exhausted { .. } => None,
        }
    }
}

struct Search<'a> {
    rows: &'a [u64],
    /// Each receiver's own unit vector and the unit vectors it wants.
    demands: Vec<(u64, Vec<u64>)>,
}

impl Search<'_> {
    fn decodes(&self, chosen: &MaskBasis) -> bool {
        self.demands.iter().all(|(own, wants)| {
            let mut b = *chosen;
            b.insert(*own);
            wants.iter().all(|&w| b.contains(w))
        })
    }

    /// First `left`-row extension (in index order) of `picked` that decodes.
    fn extend(&self, from: usize, left: usize, basis: MaskBasis, picked: &mut Vec<usize>) -> bool {
        if left == 0 {
            return self.decodes(&basis);
        }
        for k in from..=self.rows.len().saturating_sub(left) {
            let mut b = basis;
            if !b.insert(self.rows[k]) {
                continue;
            }
            picked.push(k);
            if self.extend(k + 1, left - 1, b, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
}

/// Shortest linear code by exhaustive search over subsets of the candidate
/// rows, shortest first. Among codes of that length, returns the first in
/// lexicographic order of row indices, rows sorted by coefficient mask.
pub fn oracle_min_linear(inst: &ProblemInstance, cfg: &OracleConfig) -> Result<OracleOutcome> {
    let m = inst.num_messages();
    let limit = cfg.max_messages.min(32);
    if m > limit {
        return Err(Error::TooLarge {
            what: "message count",
            size: m,
            limit,
        });
    }
    let mut candidates: BTreeMap<u64, usize> = BTreeMap::new();
    for (s, owned) in inst.senders().iter().enumerate() {
        let full = owned.iter().fold(0u64, |a, &i| a | 1 << i);
        let mut sub = full;
        while sub != 0 {
            candidates.entry(sub).or_insert(s);
            sub = (sub - 1) & full;
        }
    }
    let rows: Vec<u64> = candidates.keys().copied().collect();
    let search = Search {
        rows: &rows,
        demands: (0..m)
            .filter(|&r| !inst.wants(r).is_empty())
            .map(|r| (1u64 << r, inst.wants(r).iter().map(|&j| 1u64 << j).collect()))
            .collect(),
    };
    let max_len = cfg.max_len.unwrap_or_else(|| inst.wanted_messages().len()).min(m);
    for len in 0..=max_len {
        let found = if len == 0 {
            search.decodes(&MaskBasis::default()).then(Vec::new)
        } else {
            (0..rows.len()).into_par_iter().find_map_first(|first| {
                let mut basis = MaskBasis::default();
                basis.insert(rows[first]);
                let mut picked = vec![first];
                search.extend(first + 1, len - 1, basis, &mut picked).then_some(picked)
            })
        };
        if let Some(picked) = found {
            let mut code = LinearIndexCode::new(m);
            for k in picked {
                let mask = rows[k];
                let support: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).collect();
                code.push(candidates[&mask], &support, None);
            }
            return Ok(OracleOutcome::Found { length: len, code });
        }
    }
    Ok(OracleOutcome::Exhausted { max_len })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma {
    /// A receiver decodes every predecessor.
    #[serde(rename = "L1")]
    Predecessors,
    /// Predecessors of leaves are decodable from the code alone.
    #[serde(rename = "L2")]
    LeafPredecessors,
    /// Vertices of message-disconnected leaf SCCs are decodable from the
    /// code alone.
    #[serde(rename = "L3")]
    DisconnectedScc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub lemma: Lemma,
    #[serde(serialize_with = "one_based::opt_vertex")]
    pub receiver: Option<usize>,
    #[serde(serialize_with = "one_based::vertex")]
    pub message: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Span facts every decodable code must satisfy. Graphs come from the
/// simplified instance.
pub fn check_lemma_consequences(code: &LinearIndexCode, inst: &ProblemInstance) -> Result<LemmaReport> {
    let g = inst.simplify().0.build_graphs()?;
    let m = inst.num_messages();
    let mut plain = Basis::new(m, code.len());
    for row in &code.rows {
        plain.insert(&row.coeffs);
    }
    let mut report = LemmaReport::default();
    let mut expect = |ok: bool, lemma, receiver, message| {
        report.checked += 1;
        if !ok {
            report.violations.push(LemmaViolation { lemma, receiver, message });
        }
    };

    for i in g.vertices() {
        let mut with_prior = Basis::new(m, code.len() + 1);
        for row in &code.rows {
            with_prior.insert(&row.coeffs);
        }
        with_prior.insert(&Gf2Vec::unit(m, i));
        for j in predecessors(&g, i) {
            if j != i {
                expect(with_prior.contains(&Gf2Vec::unit(m, j)), Lemma::Predecessors, Some(i), j);
            }
        }
    }
    for leaf in g.leaves() {
        for j in predecessors(&g, leaf) {
            if j != leaf {
                expect(plain.contains(&Gf2Vec::unit(m, j)), Lemma::LeafPredecessors, None, j);
            }
        }
    }
    let sccs = classify(&g);
    for (scc, _) in sccs.with_class(LeafClass::MessageDisconnected) {
        for &j in scc {
            expect(plain.contains(&Gf2Vec::unit(m, j)), Lemma::DisconnectedScc, None, j);
        }
    }
    Ok(report)
}
