//! Family enumeration and survey rows.

use log::{debug, warn};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use plumbing::contfrac::{rational, Rational};
use plumbing::game::PairingVector;
use plumbing::{
    brieskorn, central_count, enumerate_quadruples, good_initial_count, lemma1_check, CountOptions,
    Game, PlumbingGraph, SphereQuadruple,
};

use crate::cache::{graph_hash, Cache};
use crate::report::Verdict;
use crate::SurveyError;

pub const MAX_A: i64 = 200;
pub const MAX_RAYS: usize = 5;
pub const MAX_P: i64 = 40;
pub const MAX_N: usize = 8;
pub const MAX_BOUND: i64 = 200;
pub const DEFAULT_MAX_INITIALS: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub family: String,
    pub params: Vec<i64>,
    pub graph_hash: Option<String>,
    pub vertices: Option<usize>,
    pub is_homology_sphere: Option<bool>,
    pub good_initial_count: Option<usize>,
    /// The count is a lower bound.
    pub partial: bool,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub central_count: Option<usize>,
    pub unique_initial: Option<bool>,
    pub fraction_inequalities: Option<bool>,
    pub central_count_formula: Option<bool>,
    pub pairing_jump: Option<bool>,
    pub reversal: Option<bool>,
}

pub const ROW_CSV_HEADER: [&str; 15] = [
    "family",
    "params",
    "graph_hash",
    "vertices",
    "is_homology_sphere",
    "good_initial_count",
    "partial",
    "verdict",
    "reason",
    "central_count",
    "unique_initial",
    "fraction_inequalities",
    "central_count_formula",
    "pairing_jump",
    "reversal",
];

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl SurveyRow {
    fn new(family: &str, params: &[i64]) -> Self {
        SurveyRow {
            family: family.to_owned(),
            params: params.to_vec(),
            graph_hash: None,
            vertices: None,
            is_homology_sphere: None,
            good_initial_count: None,
            partial: false,
            verdict: Verdict::Skipped,
            reason: None,
            central_count: None,
            unique_initial: None,
            fraction_inequalities: None,
            central_count_formula: None,
            pairing_jump: None,
            reversal: None,
        }
    }

    fn skipped(mut self, reason: impl ToString) -> Self {
        self.verdict = Verdict::Skipped;
        self.reason = Some(reason.to_string());
        self
    }

    fn with_graph(mut self, g: &PlumbingGraph) -> Self {
        self.graph_hash = Some(graph_hash(g));
        self.vertices = Some(g.len());
        self.is_homology_sphere = g.is_homology_sphere().ok();
        self
    }

    /// Every property column that was checked holds.
    pub fn properties_hold(&self) -> bool {
        [
            self.unique_initial,
            self.fraction_inequalities,
            self.central_count_formula,
            self.pairing_jump,
            self.reversal,
        ]
        .iter()
        .all(|p| p.unwrap_or(true))
    }

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.params
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            opt(&self.graph_hash),
            opt(&self.vertices),
            opt(&self.is_homology_sphere),
            opt(&self.good_initial_count),
            self.partial.to_string(),
            self.verdict.as_str().to_owned(),
            opt(&self.reason),
            opt(&self.central_count),
            opt(&self.unique_initial),
            opt(&self.fraction_inequalities),
            opt(&self.central_count_formula),
            opt(&self.pairing_jump),
            opt(&self.reversal),
        ]
    }
}

/// Strictly increasing, pairwise coprime tuples of length `rays` in `2..=max_a`.
pub fn brieskorn_tuples(max_a: i64, rays: usize) -> Vec<Vec<i64>> {
    fn go(start: i64, max_a: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in start..=max_a {
            if cur.iter().all(|&x| x.gcd(&a) == 1) {
                cur.push(a);
                go(a + 1, max_a, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if rays > 0 {
        go(2, max_a, rays, &mut Vec::new(), &mut out);
    }
    out
}

/// Exact check of `2 - sum p/(p+1) == 1/prod(p+1)` for positive `p`.
pub fn unit_determinant_lengths(p: &[i64]) -> bool {
    let mut lhs = rational(2, 1);
    let mut prod = Rational::one();
    for &pi in p {
        lhs -= rational(pi, pi + 1);
        prod *= rational(pi + 1, 1);
    }
    !prod.is_zero() && lhs == prod.recip()
}

/// Non-decreasing tuples with `1 <= p_i <= max_p` of every length in
/// `1..=max_n` that satisfy [`unit_determinant_lengths`].
pub fn all_minus_two_solutions(max_p: i64, max_n: usize) -> Vec<Vec<i64>> {
    fn go(start: i64, max_p: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if unit_determinant_lengths(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for p in start..=max_p {
            cur.push(p);
            go(p, max_p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        go(1, max_p, n, &mut Vec::new(), &mut out);
    }
    out
}

/// The all-(−2) star with rays of lengths `p`.
pub fn all_minus_two_star(p: &[i64]) -> PlumbingGraph {
    let rays: Vec<Vec<i64>> = p.iter().map(|&len| vec![-2; len as usize]).collect();
    PlumbingGraph::star(-2, &rays)
}

fn counted(mut row: SurveyRow, g: &PlumbingGraph, opts: &CountOptions) -> SurveyRow {
    match good_initial_count(g, opts) {
        Ok(r) => {
            let count = r.count();
            row.good_initial_count = Some(count);
            row.partial = r.partial;
            row.verdict = Verdict::from_count(count, r.partial);
            if row.verdict == Verdict::Skipped {
                row.reason = Some(if count == 0 {
                    "no good initial association".to_owned()
                } else {
                    "count below threshold on a partial search".to_owned()
                });
            }
            row
        }
        Err(e) => row.skipped(e),
    }
}

pub fn brieskorn_row(a: &[i64], opts: &CountOptions) -> SurveyRow {
    let row = SurveyRow::new("brieskorn", a);
    let inv = match brieskorn(a) {
        Ok(inv) => inv,
        Err(e) => return row.skipped(e),
    };
    let g = match inv.star_graph().blow_down() {
        Ok(g) => g,
        Err(e) => return row.skipped(e),
    };
    counted(row.with_graph(&g), &g, opts)
}

pub fn all_minus_two_row(p: &[i64], opts: &CountOptions) -> SurveyRow {
    let g = all_minus_two_star(p);
    counted(SurveyRow::new("all-minus-two", p).with_graph(&g), &g, opts)
}

/// Runs the five property checks on the two-ray star of `q`.
pub fn s3_row(q: &SphereQuadruple) -> SurveyRow {
    let row = SurveyRow::new("s3", &[q.a1, q.b1, q.a2, q.b2]);
    let g = q.star_graph();
    let mut row = row.with_graph(&g);
    let (r1, r2) = q.rays();
    row.fraction_inequalities = Some(matches!(
        lemma1_check(&r1.continued_fraction(), &r2.continued_fraction()),
        Ok((true, true))
    ));
    let opts = CountOptions {
        keep_witnesses: true,
        ..Default::default()
    };
    let r = match good_initial_count(&g, &opts) {
        Ok(r) => r,
        Err(e) => return row.skipped(e),
    };
    let count = r.count();
    row.good_initial_count = Some(count);
    row.verdict = Verdict::from_count(count, r.partial);
    let n0: Vec<i64> = g.weights().iter().map(|m| m + 2).collect();
    row.unique_initial = Some(count == 1 && r.good[0].values() == &n0[..]);
    let Some(seq) = r.witnesses.first() else {
        return row.skipped("no good sequence");
    };
    let cc = central_count(seq, 0);
    row.central_count = Some(cc);
    row.central_count_formula = Some(cc as i64 == q.a1 + q.a2 - 1);
    let pv = PairingVector::for_quadruple(q);
    let jumps_ok = seq.moved.iter().enumerate().all(|(k, &v)| {
        let before = pv.pair(&seq.states[k]);
        let after = pv.pair(&seq.states[k + 1]);
        match (before, after) {
            (Ok(x), Ok(y)) => y - x == if v == 0 { 2 } else { 0 },
            _ => false,
        }
    });
    row.pairing_jump = Some(jumps_ok);
    let reversed = seq.reversed_negated();
    row.reversal = Some(Game::new(&g).replay(&reversed).is_ok() && reversed[0] == *seq.start());
    if !row.properties_hold() {
        row.reason = Some("property check failed".to_owned());
    }
    row
}

pub fn s3_rows(bound: i64) -> Vec<SurveyRow> {
    let quads = enumerate_quadruples(bound);
    quads.par_iter().map(s3_row).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Brieskorn,
    AllMinusTwo,
}

#[derive(Debug, Clone)]
pub struct SurveyConfig {
    pub mode: Mode,
    pub max_a: i64,
    pub rays: usize,
    pub max_p: i64,
    pub early_stop: Option<usize>,
    pub max_initials: Option<u64>,
    pub reverify_sample: usize,
    pub seed: u64,
}

impl SurveyConfig {
    pub fn brieskorn() -> Self {
        SurveyConfig {
            mode: Mode::Brieskorn,
            max_a: 30,
            rays: 3,
            max_p: 12,
            early_stop: Some(2),
            max_initials: Some(DEFAULT_MAX_INITIALS),
            reverify_sample: 100,
            seed: 0,
        }
    }

    pub fn all_minus_two() -> Self {
        SurveyConfig {
            mode: Mode::AllMinusTwo,
            rays: 6,
            ..Self::brieskorn()
        }
    }

    pub fn validate(&self) -> Result<(), SurveyError> {
        let bad = |msg: String| Err(SurveyError::InvalidBounds(msg));
        match self.mode {
            Mode::Brieskorn => {
                if !(2..=MAX_A).contains(&self.max_a) {
                    return bad(format!("--max-a must be in 2..={MAX_A}"));
                }
                if !(1..=MAX_RAYS).contains(&self.rays) {
                    return bad(format!("--rays must be in 1..={MAX_RAYS} for brieskorn"));
                }
            }
            Mode::AllMinusTwo => {
                if !(1..=MAX_P).contains(&self.max_p) {
                    return bad(format!("--max-p must be in 1..={MAX_P}"));
                }
                if !(1..=MAX_N).contains(&self.rays) {
                    return bad(format!("--rays must be in 1..={MAX_N} for all-minus-two"));
                }
            }
        }
        if self.early_stop == Some(0) {
            return bad("--early-stop must be positive".to_owned());
        }
        Ok(())
    }

    fn count_options(&self) -> CountOptions {
        CountOptions {
            early_stop: self.early_stop,
            max_initials: self.max_initials,
            ..Default::default()
        }
    }

    fn family(&self) -> &'static str {
        match self.mode {
            Mode::Brieskorn => "brieskorn",
            Mode::AllMinusTwo => "all-minus-two",
        }
    }

    fn params(&self) -> Vec<Vec<i64>> {
        match self.mode {
            Mode::Brieskorn => brieskorn_tuples(self.max_a, self.rays),
            Mode::AllMinusTwo => all_minus_two_solutions(self.max_p, self.rays),
        }
    }

    fn graph(&self, params: &[i64]) -> Option<PlumbingGraph> {
        match self.mode {
            Mode::Brieskorn => brieskorn(params).ok()?.star_graph().blow_down().ok(),
            Mode::AllMinusTwo => Some(all_minus_two_star(params)),
        }
    }

    fn compute(&self, params: &[i64]) -> SurveyRow {
        let opts = self.count_options();
        match self.mode {
            Mode::Brieskorn => brieskorn_row(params, &opts),
            Mode::AllMinusTwo => all_minus_two_row(params, &opts),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOutcome {
    pub rows: Vec<SurveyRow>,
    pub cache_hits: usize,
    pub computed: usize,
    pub reverified: usize,
    /// Keys whose cached row disagreed with a fresh computation.
    pub mismatches: Vec<String>,
}

impl SurveyOutcome {
    pub fn skipped(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Skipped)
            .count()
    }
}

/// Computes every row of the configured family, reusing and extending `cache`.
pub fn run_survey(cfg: &SurveyConfig, cache: &mut Cache) -> Result<SurveyOutcome, SurveyError> {
    cfg.validate()?;
    let family = cfg.family();
    let params = cfg.params();
    let keys: Vec<Option<String>> = params
        .par_iter()
        .map(|p| {
            cfg.graph(p)
                .map(|g| Cache::key(family, &graph_hash(&g), cfg.early_stop))
        })
        .collect();

    let cached: Vec<Option<SurveyRow>> = params
        .iter()
        .zip(&keys)
        .map(|(p, k)| {
            k.as_ref()
                .and_then(|k| cache.get(k))
                .filter(|row| row.params == *p)
                .cloned()
        })
        .collect();
    let hits: Vec<usize> = (0..params.len()).filter(|&i| cached[i].is_some()).collect();

    let sample: Vec<usize> = {
        let mut rng = StdRng::seed_from_u64(cfg.seed);
        let amount = cfg.reverify_sample.min(hits.len());
        rand::seq::index::sample(&mut rng, hits.len(), amount)
            .into_iter()
            .map(|i| hits[i])
            .collect()
    };

    let todo: Vec<usize> = (0..params.len())
        .filter(|&i| cached[i].is_none())
        .chain(sample.iter().copied())
        .collect();
    let fresh: Vec<(usize, SurveyRow)> = todo
        .par_iter()
        .map(|&i| (i, cfg.compute(&params[i])))
        .collect();

    let mut outcome = SurveyOutcome {
        cache_hits: hits.len(),
        reverified: sample.len(),
        ..Default::default()
    };
    let mut rows = cached;
    let mut new_entries = Vec::new();
    for (i, row) in fresh {
        match &rows[i] {
            Some(old) => {
                if *old != row {
                    let key = keys[i].clone().unwrap_or_default();
                    warn!("cached row for {key} differs from a fresh computation");
                    outcome.mismatches.push(key.clone());
                    new_entries.push((key, row.clone()));
                    rows[i] = Some(row);
                }
            }
            None => {
                outcome.computed += 1;
                if let Some(key) = &keys[i] {
                    if row.verdict != Verdict::Skipped {
                        new_entries.push((key.clone(), row.clone()));
                    }
                }
                rows[i] = Some(row);
            }
        }
    }
    debug!("{} new cache entries", new_entries.len());
    cache.append(new_entries)?;
    outcome.rows = rows
        .into_iter()
        .map(|r| r.expect("every row computed or cached"))
        .collect();
    Ok(outcome)
}
