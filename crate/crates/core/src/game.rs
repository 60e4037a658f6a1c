//! The association game on a negative definite plumbing tree.
//!
//! An association assigns to every vertex `v` an integer `n(v)` with the
//! parity of the weight `m(v)` and `|n(v)| <= -m(v)`. It is *initial* if
//! `m(v) < n(v) <= -m(v)` everywhere and *final* if `m(v) <= n(v) < -m(v)`
//! everywhere. A move at a vertex sitting at its upper bound flips it to
//! `m(v)` and adds 2 to each neighbor. Initial associations that reach a
//! final one by moves are *good*; for a graph with at most one bad vertex,
//! the good initial associations generate the kernel of `U` on `HF^+`
//! with `Z/2` coefficients.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PlumbingGraph, VertexId};
use crate::seifert::SphereQuadruple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("association has {got} entries, graph has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("value {value} at vertex {vertex} violates parity or |n| <= -m")]
    OutOfBounds { vertex: VertexId, value: i64 },
    #[error("vertex {0} cannot be moved")]
    IllegalMove(VertexId),
    #[error("graph has {0} bad vertices; the count is only meaningful with at most one")]
    TooManyBadVertices(usize),
    #[error("vertex {vertex} has weight {weight}; the bound needs every weight <= -2")]
    WeightTooLarge { vertex: VertexId, weight: i64 },
    #[error("vectors of length {0} and {1} cannot be paired")]
    DimensionMismatch(usize, usize),
    #[error("{0} initial associations exceed the search budget of {1}")]
    TooManyInitials(u64, u64),
    #[error("state {index} is not reached from the previous one by a move")]
    BrokenSequence { index: usize },
    #[error("sequence does not start initial or does not end final")]
    BadEndpoints,
}

/// Integer labels on the vertices of a fixed graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Association(Vec<i64>);

impl Association {
    /// Checks parity and bounds against `g`.
    pub fn new(g: &PlumbingGraph, values: Vec<i64>) -> Result<Self, GameError> {
        if values.len() != g.len() {
            return Err(GameError::WrongLength {
                expected: g.len(),
                got: values.len(),
            });
        }
        for (vertex, (&value, &m)) in values.iter().zip(g.weights()).enumerate() {
            if (value - m).rem_euclid(2) != 0 || value.abs() > -m {
                return Err(GameError::OutOfBounds { vertex, value });
            }
        }
        Ok(Association(values))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise negation; maps final associations to initial ones.
    pub fn negated(&self) -> Association {
        Association(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Association {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Associations `n_0, ..., n_N` from an initial to a final one, with the
/// vertex moved at each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodSequence {
    pub states: Vec<Association>,
    pub moved: Vec<VertexId>,
}

impl GoodSequence {
    pub fn start(&self) -> &Association {
        &self.states[0]
    }

    pub fn end(&self) -> &Association {
        self.states.last().expect("sequence is nonempty")
    }

    /// Number of moves.
    pub fn len(&self) -> usize {
        self.moved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moved.is_empty()
    }

    /// `-n_N, ..., -n_0`.
    pub fn reversed_negated(&self) -> Vec<Association> {
        self.states.iter().rev().map(Association::negated).collect()
    }
}

/// Tie-breaking order for moves explored from a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MoveOrder {
    #[default]
    Ascending,
    Descending,
}

struct Search {
    witness: Option<GoodSequence>,
    first_move_path_ok: bool,
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    /// Reaches a final association; `next` is the move toward it, `None`
    /// when the state is itself final.
    Good {
        next: Option<VertexId>,
    },
    Bad,
}

/// Memoized reachability for one graph. Grows with the number of states
/// visited and never evicts.
#[derive(Debug, Default)]
pub struct Memo {
    outcomes: HashMap<Vec<i64>, Outcome>,
}

impl Memo {
    fn record_good(&mut self, states: &[Vec<i64>], moved: &[VertexId]) {
        for (k, s) in states.iter().enumerate() {
            self.outcomes.insert(
                s.clone(),
                Outcome::Good {
                    next: moved.get(k).copied(),
                },
            );
        }
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// The game on a fixed graph.
#[derive(Debug, Clone, Copy)]
pub struct Game<'g> {
    graph: &'g PlumbingGraph,
    order: MoveOrder,
}

impl<'g> Game<'g> {
    pub fn new(graph: &'g PlumbingGraph) -> Self {
        Game {
            graph,
            order: MoveOrder::Ascending,
        }
    }

    pub fn with_order(mut self, order: MoveOrder) -> Self {
        self.order = order;
        self
    }

    pub fn graph(&self) -> &'g PlumbingGraph {
        self.graph
    }

    pub fn is_initial(&self, n: &Association) -> bool {
        is_initial_values(self.graph, &n.0)
    }

    pub fn is_final(&self, n: &Association) -> bool {
        is_final_values(self.graph, &n.0)
    }

    /// Vertices at their upper bound whose move keeps every neighbor within
    /// bounds, in the game's move order.
    pub fn legal_moves(&self, n: &Association) -> Vec<VertexId> {
        let mut moves = Vec::new();
        self.for_each_move(&n.0, |v| moves.push(v));
        moves
    }

    fn for_each_move(&self, n: &[i64], mut f: impl FnMut(VertexId)) {
        let g = self.graph;
        let legal = |v: VertexId| {
            n[v] == -g.weight(v) && g.neighbors(v).iter().all(|&w| n[w] + 2 <= -g.weight(w))
        };
        match self.order {
            MoveOrder::Ascending => (0..g.len()).filter(|&v| legal(v)).for_each(&mut f),
            MoveOrder::Descending => (0..g.len()).rev().filter(|&v| legal(v)).for_each(&mut f),
        }
    }

    pub fn apply_move(&self, n: &Association, v: VertexId) -> Result<Association, GameError> {
        let g = self.graph;
        if v >= g.len()
            || n.0[v] != -g.weight(v)
            || g.neighbors(v).iter().any(|&w| n.0[w] + 2 > -g.weight(w))
        {
            return Err(GameError::IllegalMove(v));
        }
        Ok(Association(step(g, &n.0, v)))
    }

    /// Looks for a good sequence starting at `n0`.
    ///
    /// A single path taking the first legal move at every step is tried
    /// first; if it ends final it is returned as the witness. Otherwise the
    /// whole reachable state space is searched breadth-first, so `None` means
    /// no sequence of moves from `n0` reaches a final association.
    pub fn completes_to_good(&self, n0: &Association) -> Option<GoodSequence> {
        self.completes_to_good_with(n0, &mut Memo::default())
    }

    /// As [`Game::completes_to_good`], reusing and extending `memo`.
    pub fn completes_to_good_with(
        &self,
        n0: &Association,
        memo: &mut Memo,
    ) -> Option<GoodSequence> {
        self.search(n0, memo).witness
    }

    fn search(&self, n0: &Association, memo: &mut Memo) -> Search {
        if let Some(seq) = self.first_move_path(n0, memo) {
            return Search {
                witness: Some(seq),
                first_move_path_ok: true,
            };
        }
        let witness = self.breadth_first(n0, memo);
        Search {
            witness,
            first_move_path_ok: false,
        }
    }

    /// Follows the first legal move (or a memoized good successor) until a
    /// final association, a known bad state, or a dead end.
    fn first_move_path(&self, n0: &Association, memo: &mut Memo) -> Option<GoodSequence> {
        let g = self.graph;
        let mut states = vec![n0.0.clone()];
        let mut moved = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let cur = states.last().unwrap();
            // cycles only occur when M(G) is singular
            if !seen.insert(cur.clone()) {
                return None;
            }
            if is_final_values(g, cur) {
                break;
            }
            let v = match memo.outcomes.get(cur) {
                Some(Outcome::Good { next: Some(v) }) => *v,
                Some(Outcome::Good { next: None }) => unreachable!("final states are caught above"),
                Some(Outcome::Bad) => return None,
                None => {
                    let mut first = None;
                    self.for_each_move(cur, |v| {
                        first.get_or_insert(v);
                    });
                    first?
                }
            };
            let next = step(g, cur, v);
            moved.push(v);
            states.push(next);
        }
        memo.record_good(&states, &moved);
        Some(GoodSequence {
            states: states.into_iter().map(Association).collect(),
            moved,
        })
    }

    fn breadth_first(&self, n0: &Association, memo: &mut Memo) -> Option<GoodSequence> {
        let g = self.graph;
        // arena of discovered states with back pointers
        let mut states: Vec<Vec<i64>> = vec![n0.0.clone()];
        let mut parent: Vec<Option<(usize, VertexId)>> = vec![None];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(n0.0.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut hit = None;
        while let Some(i) = queue.pop_front() {
            if is_final_values(g, &states[i]) {
                hit = Some(i);
                break;
            }
            match memo.outcomes.get(&states[i]) {
                Some(Outcome::Good { .. }) => {
                    hit = Some(i);
                    break;
                }
                Some(Outcome::Bad) => continue,
                None => {}
            }
            let mut next = Vec::new();
            self.for_each_move(&states[i], |v| next.push(v));
            for v in next {
                let t = step(g, &states[i], v);
                if let Entry::Vacant(e) = index.entry(t) {
                    let j = states.len();
                    states.push(e.key().clone());
                    e.insert(j);
                    parent.push(Some((i, v)));
                    queue.push_back(j);
                }
            }
        }
        let Some(end) = hit else {
            for s in states {
                memo.outcomes.insert(s, Outcome::Bad);
            }
            return None;
        };

        // path from n0 to the hit
        let mut chain = vec![end];
        let mut moved = Vec::new();
        while let Some((p, v)) = parent[*chain.last().unwrap()] {
            moved.push(v);
            chain.push(p);
        }
        chain.reverse();
        moved.reverse();
        let mut seq: Vec<Vec<i64>> = chain.iter().map(|&i| states[i].clone()).collect();

        // continue along memoized successors
        let mut cur = seq.last().unwrap().clone();
        while !is_final_values(g, &cur) {
            let Some(Outcome::Good { next: Some(v) }) = memo.outcomes.get(&cur).copied() else {
                unreachable!("memoized good state without a successor");
            };
            cur = step(g, &cur, v);
            moved.push(v);
            seq.push(cur.clone());
        }
        memo.record_good(&seq, &moved);
        Some(GoodSequence {
            states: seq.into_iter().map(Association).collect(),
            moved,
        })
    }

    /// Follows a single path, always taking the first legal move, until no
    /// move is left or a final association is reached. Returns whether it
    /// ended final.
    pub fn greedy_reaches_final(&self, n0: &Association) -> bool {
        let g = self.graph;
        let mut cur = n0.0.clone();
        let mut seen = HashSet::new();
        loop {
            if is_final_values(g, &cur) {
                return true;
            }
            if !seen.insert(cur.clone()) {
                return false;
            }
            let mut first = None;
            self.for_each_move(&cur, |v| {
                first.get_or_insert(v);
            });
            match first {
                Some(v) => cur = step(g, &cur, v),
                None => return false,
            }
        }
    }

    /// Checks that `states` is a good sequence and returns its moved vertices.
    pub fn replay(&self, states: &[Association]) -> Result<Vec<VertexId>, GameError> {
        let (first, last) = match (states.first(), states.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(GameError::BadEndpoints),
        };
        for s in states {
            Association::new(self.graph, s.0.clone())?;
        }
        if !self.is_initial(first) || !self.is_final(last) {
            return Err(GameError::BadEndpoints);
        }
        let mut moved = Vec::with_capacity(states.len().saturating_sub(1));
        for (k, pair) in states.windows(2).enumerate() {
            let v = self
                .legal_moves(&pair[0])
                .into_iter()
                .find(|&v| step(self.graph, &pair[0].0, v) == pair[1].0)
                .ok_or(GameError::BrokenSequence { index: k + 1 })?;
            moved.push(v);
        }
        Ok(moved)
    }
}

fn is_initial_values(g: &PlumbingGraph, n: &[i64]) -> bool {
    n.iter().zip(g.weights()).all(|(&x, &m)| m < x && x <= -m)
}

fn is_final_values(g: &PlumbingGraph, n: &[i64]) -> bool {
    n.iter().zip(g.weights()).all(|(&x, &m)| m <= x && x < -m)
}

fn step(g: &PlumbingGraph, n: &[i64], v: VertexId) -> Vec<i64> {
    let mut t = n.to_vec();
    t[v] = g.weight(v);
    for &w in g.neighbors(v) {
        t[w] += 2;
    }
    t
}

/// Options for [`good_initial_count`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    /// Stop once this many good initial associations are known.
    pub early_stop: Option<usize>,
    /// Refuse to enumerate more initial associations than this.
    pub max_initials: Option<u64>,
    pub order: MoveOrder,
    /// Keep a witness sequence for every good initial association.
    pub keep_witnesses: bool,
}

/// Result of [`good_initial_count`].
#[derive(Debug, Clone)]
pub struct GoodInitials {
    /// Number of initial associations, `prod(-m(v))`, saturating.
    pub initial_count: u64,
    /// Good initial associations found, sorted.
    pub good: Vec<Association>,
    /// Witnesses in the order of `good`, when requested.
    pub witnesses: Vec<GoodSequence>,
    /// Set when the early stop fired before every initial was examined.
    pub partial: bool,
    /// Good initials from which always taking the first legal move gets stuck.
    pub path_dependent: Vec<Association>,
    /// Number of states held by the memo at the end.
    pub states_visited: usize,
}

impl GoodInitials {
    pub fn count(&self) -> usize {
        self.good.len()
    }
}

/// `prod_v (-m(v))`, saturating at `u64::MAX`; zero if some weight is `>= 0`.
pub fn initial_count(g: &PlumbingGraph) -> u64 {
    g.weights().iter().fold(1u64, |acc, &m| {
        if m >= 0 {
            0
        } else {
            acc.saturating_mul((-m) as u64)
        }
    })
}

/// Counts initial associations that complete to good sequences.
///
/// Without an early stop every initial association is examined in
/// lexicographic order. With `early_stop = K` the search first walks upward
/// from the minimal initial association `m + 2` through the covers of good
/// ones, trying only the first-move path from each, and then falls back to
/// the full enumeration; it returns as soon as `K` good ones are known.
pub fn good_initial_count(
    g: &PlumbingGraph,
    opts: &CountOptions,
) -> Result<GoodInitials, GameError> {
    let bad = g.bad_vertices().len();
    if bad > 1 {
        return Err(GameError::TooManyBadVertices(bad));
    }
    if !g.is_negative_definite() {
        log::warn!("graph {g} is not negative definite; the count has no kernel interpretation");
    }
    let total = initial_count(g);
    let mut search = Collector {
        game: Game::new(g).with_order(opts.order),
        memo: Memo::default(),
        good: BTreeSet::new(),
        witnesses: HashMap::new(),
        path_dependent: Vec::new(),
        keep_witnesses: opts.keep_witnesses,
    };
    let stop = opts.early_stop.unwrap_or(usize::MAX);

    let mut partial = false;
    if opts.early_stop.is_some() && total > 0 {
        let lowest: Vec<i64> = g.weights().iter().map(|&m| m + 2).collect();
        let mut seen = HashSet::from([lowest.clone()]);
        let mut queue = VecDeque::from([lowest]);
        while let Some(n) = queue.pop_front() {
            if search.good.len() >= stop {
                break;
            }
            if search.probe(n.clone()) {
                for v in 0..n.len() {
                    if n[v] + 2 <= -g.weight(v) {
                        let mut up = n.clone();
                        up[v] += 2;
                        if seen.insert(up.clone()) {
                            queue.push_back(up);
                        }
                    }
                }
            }
        }
        partial = search.good.len() >= stop;
    }

    if !partial {
        if let Some(limit) = opts.max_initials {
            if total > limit {
                return Err(GameError::TooManyInitials(total, limit));
            }
        }
        if total > 0 {
            let mut n: Vec<i64> = g.weights().iter().map(|&m| m + 2).collect();
            loop {
                if !search.good.contains(&n) && search.test(n.clone()) && search.good.len() >= stop
                {
                    partial = true;
                    break;
                }
                if !advance(g, &mut n) {
                    break;
                }
            }
        }
    }

    let Collector {
        memo,
        good,
        mut witnesses,
        path_dependent,
        ..
    } = search;
    let good: Vec<Association> = good.into_iter().map(Association).collect();
    let witnesses = if opts.keep_witnesses {
        good.iter()
            .map(|a| witnesses.remove(&a.0).expect("witness recorded"))
            .collect()
    } else {
        Vec::new()
    };
    Ok(GoodInitials {
        initial_count: total,
        good,
        witnesses,
        partial,
        path_dependent,
        states_visited: memo.len(),
    })
}

struct Collector<'g> {
    game: Game<'g>,
    memo: Memo,
    good: BTreeSet<Vec<i64>>,
    witnesses: HashMap<Vec<i64>, GoodSequence>,
    path_dependent: Vec<Association>,
    keep_witnesses: bool,
}

impl Collector<'_> {
    /// Cheap check: only the first-move path. `false` is inconclusive.
    fn probe(&mut self, n: Vec<i64>) -> bool {
        let a = Association(n);
        let Some(seq) = self.game.first_move_path(&a, &mut self.memo) else {
            return false;
        };
        if self.keep_witnesses {
            self.witnesses.insert(a.0.clone(), seq);
        }
        self.good.insert(a.0);
        true
    }

    /// Conclusive check.
    fn test(&mut self, n: Vec<i64>) -> bool {
        let a = Association(n);
        let Search {
            witness,
            first_move_path_ok,
        } = self.game.search(&a, &mut self.memo);
        let Some(seq) = witness else {
            return false;
        };
        if !first_move_path_ok && !self.game.greedy_reaches_final(&a) {
            log::info!(
                "graph {}: first-move path from good initial {a} gets stuck",
                self.game.graph
            );
            self.path_dependent.push(a.clone());
        }
        if self.keep_witnesses {
            self.witnesses.insert(a.0.clone(), seq);
        }
        self.good.insert(a.0);
        true
    }
}

/// Next initial association in lexicographic order (vertex 0 most
/// significant). Returns false after the last one.
fn advance(g: &PlumbingGraph, n: &mut [i64]) -> bool {
    for v in (0..n.len()).rev() {
        let m = g.weight(v);
        if n[v] + 2 <= -m {
            n[v] += 2;
            return true;
        }
        n[v] = m + 2;
    }
    false
}

/// `prod_w (-1 - m(w))`: a lower bound for the number of good initial
/// associations when every weight is at most `-2`, since every association
/// strictly inside the bounds is both initial and final.
pub fn d_lower_bound(g: &PlumbingGraph) -> Result<u64, GameError> {
    let mut d = 1u64;
    for (vertex, &weight) in g.weights().iter().enumerate() {
        if weight > -2 {
            return Err(GameError::WeightTooLarge { vertex, weight });
        }
        d = d.saturating_mul((-1 - weight) as u64);
    }
    Ok(d)
}

/// `<x|y> = sum_w x(w) y(w)`.
pub fn pairing(x: &[i64], y: &[i64]) -> Result<i64, GameError> {
    if x.len() != y.len() {
        return Err(GameError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).map(|(a, b)| a * b).sum())
}

/// Test vector on a two-ray sphere star, in the star's vertex order
/// (center, first ray outward, second ray outward): `C_1 B_i` on the first
/// ray, `A_1 D_j` on the second, `-A_1 C_1` at the center.
///
/// Its pairing with an association jumps by 2 when the center moves and is
/// unchanged by any other move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingVector {
    pub values: Vec<i64>,
}

impl PairingVector {
    pub fn for_quadruple(q: &SphereQuadruple) -> Self {
        let (r1, r2) = q.rays();
        let first = r1.continued_fraction().convergents();
        let second = r2.continued_fraction().convergents();
        let (a1, c1) = (first.a(1), second.a(1));
        let mut values = vec![-a1 * c1];
        values.extend(first.rows().iter().map(|&(_, b)| c1 * b));
        values.extend(second.rows().iter().map(|&(_, d)| a1 * d));
        PairingVector { values }
    }

    pub fn pair(&self, n: &Association) -> Result<i64, GameError> {
        pairing(&self.values, n.values())
    }
}

/// Occurrences of `center` among the moved vertices.
pub fn central_count(seq: &GoodSequence, center: VertexId) -> usize {
    seq.moved.iter().filter(|&&v| v == center).count()
}
