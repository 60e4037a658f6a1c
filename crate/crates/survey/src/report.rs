use std::time::Instant;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use plumbing::game::GoodSequence;
use plumbing::{good_initial_count, CountOptions, PlumbingGraph, SeifertInvariants};

use crate::cache::graph_hash;
use crate::SurveyError;

pub const KERNEL_ASSUMPTION: &str =
    "good initial associations are assumed linearly independent in Ker(U); the count is reported as its rank";

/// Whether the kernel of `U` has rank one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TrivialRank,
    Nontrivial,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::TrivialRank => "trivial-rank",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Skipped => "skipped",
        }
    }

    /// `count >= 2` is nontrivial; exactly one good initial is trivial only
    /// when every initial association was examined.
    pub fn from_count(count: usize, partial: bool) -> Verdict {
        match count {
            0 => Verdict::Skipped,
            1 if !partial => Verdict::TrivialRank,
            1 => Verdict::Skipped,
            _ => Verdict::Nontrivial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertSummary {
    pub center: i64,
    /// `(a_i, b_i)` in ray order.
    pub rays: Vec<(i64, i64)>,
}

impl From<&SeifertInvariants> for SeifertSummary {
    fn from(inv: &SeifertInvariants) -> Self {
        SeifertSummary {
            center: inv.center(),
            rays: inv.rays().iter().map(|r| (r.a, r.b)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub hash: String,
    pub weights: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    pub det: i128,
    pub negative_definite: bool,
    pub bad_vertices: Vec<usize>,
    /// `None` for a disconnected graph.
    pub is_homology_sphere: Option<bool>,
    pub initial_count: u64,
    pub good_initial_count: usize,
    pub partial: bool,
    pub good_initials: Vec<Vec<i64>>,
    pub verdict: Verdict,
    pub path_dependent_initials: usize,
    pub kernel_rank_assumption: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seifert: Option<SeifertSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sequences: Option<Vec<GoodSequence>>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub early_stop: Option<usize>,
    pub emit_sequences: bool,
    pub max_initials: Option<u64>,
}

pub fn analyze(g: &PlumbingGraph, opts: &AnalyzeOptions) -> Result<AnalysisReport, SurveyError> {
    let start = Instant::now();
    let det = g.determinant().to_i128().ok_or(SurveyError::Overflow)?;
    let count = good_initial_count(
        g,
        &CountOptions {
            early_stop: opts.early_stop,
            max_initials: opts.max_initials,
            keep_witnesses: opts.emit_sequences,
            ..Default::default()
        },
    )?;
    let is_homology_sphere = g.is_homology_sphere().ok();
    let good_initial_count = count.count();
    Ok(AnalysisReport {
        name: g.name().map(str::to_owned),
        hash: graph_hash(g),
        weights: g.weights().to_vec(),
        edges: g.edges().to_vec(),
        det,
        negative_definite: g.is_negative_definite(),
        bad_vertices: g.bad_vertices(),
        is_homology_sphere,
        initial_count: count.initial_count,
        good_initial_count,
        partial: count.partial,
        good_initials: count.good.iter().map(|a| a.values().to_vec()).collect(),
        verdict: Verdict::from_count(good_initial_count, count.partial),
        path_dependent_initials: count.path_dependent.len(),
        kernel_rank_assumption: KERNEL_ASSUMPTION.to_owned(),
        seifert: None,
        sequences: opts.emit_sequences.then_some(count.witnesses),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub const REPORT_CSV_HEADER: [&str; 13] = [
    "name",
    "hash",
    "weights",
    "edges",
    "det",
    "negative_definite",
    "bad_vertices",
    "is_homology_sphere",
    "initial_count",
    "good_initial_count",
    "partial",
    "good_initials",
    "verdict",
];

impl AnalysisReport {
    pub fn csv_record(&self) -> Vec<String> {
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(";");
        vec![
            self.name.clone().unwrap_or_default(),
            self.hash.clone(),
            join(&mut self.weights.iter().map(|w| w.to_string())),
            join(&mut self.edges.iter().map(|(u, v)| format!("{u}-{v}"))),
            self.det.to_string(),
            self.negative_definite.to_string(),
            join(&mut self.bad_vertices.iter().map(|v| v.to_string())),
            self.is_homology_sphere
                .map(|b| b.to_string())
                .unwrap_or_default(),
            self.initial_count.to_string(),
            self.good_initial_count.to_string(),
            self.partial.to_string(),
            join(&mut self.good_initials.iter().map(|n| format!("{n:?}"))),
            self.verdict.as_str().to_owned(),
        ]
    }
}
