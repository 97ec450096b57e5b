//! The full pipeline, from instance to bounds, code and optional oracle.

use std::fmt::Write;

use serde::Serialize;

use crate::bound::{lower_bound, lower_bound_prune_all, run_algorithm1_with, BoundOptions, SearchMode, Step};
use crate::code::{assign_senders, find_connecting_trees, plan_code, ConnectingTree, TreeOptions};
use crate::error::Result;
use crate::graphs::{classify, Classification, LeafClass};
use crate::model::{ProblemInstance, SCHEMA_VERSION};
use crate::one_based;
use crate::verify::{oracle_min_linear, rank_decodable, OracleConfig, OracleOutcome};

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub bound: BoundOptions,
    pub trees: TreeOptions,
    /// Run the linear oracle with this configuration.
    pub oracle: Option<OracleConfig>,
    pub include_trace: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub num_messages: usize,
    pub num_senders: usize,
    #[serde(serialize_with = "one_based::vertices")]
    pub removed_messages: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeafSccRow {
    #[serde(serialize_with = "one_based::vertices")]
    pub vertices: Vec<usize>,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    /// Shortest linear code length, if one was found within the cap.
    pub length: Option<usize>,
    pub exhausted_at: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub instance: InstanceSummary,
    pub v_out: usize,
    pub leaf_sccs: Vec<LeafSccRow>,
    pub n_connected: usize,
    pub n_remaining: usize,
    pub n_iv: usize,
    pub search_mode: SearchMode,
    pub fell_back: bool,
    pub lower_bound: usize,
    pub lower_bound_prune_all: usize,
    pub n_tree: usize,
    pub n_tree_exact: bool,
    pub connecting_trees: Vec<ConnectingTree>,
    pub upper_bound: usize,
    /// The constructed code passed the rank check.
    pub code_verified: bool,
    pub oracle: Option<OracleSummary>,
    /// The lower bound is known to be the optimal codelength: it meets the
    /// upper bound or the linear oracle.
    pub certified: bool,
    pub gap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Step>>,
}

pub fn build_report(inst: &ProblemInstance, opts: &ReportOptions) -> Result<Report> {
    let (simple, removed) = inst.simplify();
    let g = simple.build_graphs()?;
    let sccs = classify(&g);
    let trace = run_algorithm1_with(&g, &opts.bound);
    let lower = lower_bound(&trace)?;
    let family = find_connecting_trees(&g, &opts.trees);
    let blueprint = plan_code(&g, &family.trees)?;
    let code = assign_senders(&simple, &blueprint)?;
    let upper = code.len();
    let code_verified = rank_decodable(&code, &simple).is_ok();
    let oracle = opts
        .oracle
        .map(|cfg| oracle_min_linear(&simple, &cfg))
        .transpose()?
        .map(|outcome| match outcome {
            OracleOutcome::Found { length, .. } => OracleSummary {
                length: Some(length),
                exhausted_at: None,
            },
            OracleOutcome::Exhausted { max_len } => OracleSummary {
                length: None,
                exhausted_at: Some(max_len),
            },
        });
    let oracle_len = oracle.as_ref().and_then(|o| o.length);
    if let Some(len) = oracle_len {
        debug_assert!(lower <= len && len <= upper);
    }
    Ok(Report {
        schema: SCHEMA_VERSION,
        instance: InstanceSummary {
            num_messages: inst.num_messages(),
            num_senders: inst.num_senders(),
            removed_messages: removed.into_iter().collect(),
        },
        v_out: g.v_out(),
        leaf_sccs: sccs
            .leaf_sccs()
            .zip(&sccs.classes)
            .map(|(s, c)| LeafSccRow {
                vertices: s.to_vec(),
                classification: c.clone(),
            })
            .collect(),
        n_connected: trace.n_connected,
        n_remaining: trace.n_remaining,
        n_iv: trace.n_iv,
        search_mode: trace.mode,
        fell_back: trace.fell_back,
        lower_bound: lower,
        lower_bound_prune_all: lower_bound_prune_all(&g),
        n_tree: family.n_tree(),
        n_tree_exact: family.exact,
        connecting_trees: family.trees,
        upper_bound: upper,
        code_verified,
        certified: lower == upper || oracle_len == Some(lower),
        gap: upper - lower,
        oracle,
        trace: opts.include_trace.then_some(trace.log),
    })
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "messages {}  senders {}  removed {:?}",
            self.instance.num_messages,
            self.instance.num_senders,
            self.instance.removed_messages.iter().map(|v| v + 1).collect::<Vec<_>>()
        );
        let _ = writeln!(out, "V_out {}", self.v_out);
        for row in &self.leaf_sccs {
            let class = match row.classification.class {
                LeafClass::MessageConnected => "message-connected",
                LeafClass::MessageDisconnected => "message-disconnected",
                LeafClass::SemiDegenerated => "semi-degenerated",
                LeafClass::SemiNonDegenerated => "semi-non-degenerated",
            };
            let vs: Vec<usize> = row.vertices.iter().map(|v| v + 1).collect();
            let _ = writeln!(out, "leaf SCC {vs:?}  {class}");
        }
        let _ = writeln!(
            out,
            "n_connected {}  n_remaining {}  n_iv {}",
            self.n_connected, self.n_remaining, self.n_iv
        );
        let _ = writeln!(out, "lower bound {}", self.lower_bound);
        let _ = writeln!(
            out,
            "N_tree {}{}",
            self.n_tree,
            if self.n_tree_exact { "" } else { " (greedy)" }
        );
        let _ = writeln!(out, "upper bound {}", self.upper_bound);
        match &self.oracle {
            Some(OracleSummary { length: Some(l), .. }) => {
                let _ = writeln!(out, "linear optimum {l}");
            }
            Some(OracleSummary { exhausted_at: Some(l), .. }) => {
                let _ = writeln!(out, "linear optimum > {l}");
            }
            _ => {}
        }
        let _ = writeln!(out, "certified {}", self.certified);
        out
    }
}
