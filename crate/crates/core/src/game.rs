//! The parity telepathy game: the referee picks a vertex for Alice and one
//! of its two hyperedges for Bob. Alice answers a color for her vertex, Bob
//! colors every member of his hyperedge. They win when Bob's colors multiply
//! to the hyperedge sign and agree with Alice on the shared vertex.
//!
//! Quantum players share `n` Bell pairs, `(1/√2ⁿ) Σ|i⟩|i⟩`. Alice measures
//! her vertex's observable. By default Bob measures the transpose of each
//! observable in his hyperedge, using `(A ⊗ I)Ψ = (I ⊗ Aᵀ)Ψ`; with
//! `literal` set he measures the observables themselves, which only wins
//! with certainty when every observable is real.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ClassicalRealization, Signing};
use crate::pauli::{PauliError, PauliOperator};
use crate::realization::QuantumRealization;
use crate::sign::Sign;

/// Largest per-side qubit count the state-vector simulator accepts.
pub const MAX_STATE_QUBITS: usize = 6;
/// Largest vertex count for exhaustive classical search.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 24;

const PRUNE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("measured operator {0} is not an observable")]
    NotObservable(String),
    #[error("{n} qubits per side exceeds the simulator limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("{vertices} vertices is too many for exhaustive search (limit {max})")]
    TooLarge { vertices: usize, max: usize },
    #[error("strategy does not fit the arrangement: {0}")]
    StrategyShape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Alice,
    Bob,
}

/// Amplitudes over `|a⟩|b⟩` at index `a·2ⁿ + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedState {
    n: usize,
    amps: Vec<Complex64>,
}

impl SharedState {
    /// `n` maximally entangled pairs.
    pub fn bell_pairs(n: usize) -> Result<Self, GameError> {
        if n > MAX_STATE_QUBITS {
            return Err(GameError::TooManyQubits { n, max: MAX_STATE_QUBITS });
        }
        let side = 1usize << n;
        let mut amps = vec![Complex64::new(0.0, 0.0); side * side];
        let c = 1.0 / (side as f64).sqrt();
        for i in 0..side {
            amps[i * side + i] = Complex64::new(c, 0.0);
        }
        Ok(SharedState { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply(&self, p: &PauliOperator, side: Side) -> SharedState {
        let dim = 1usize << self.n;
        let action: Vec<(usize, Complex64)> = (0..dim)
            .map(|k| {
                let (t, ph) = p.apply_to_basis(k);
                let c = ph.to_complex();
                (t, Complex64::new(c.re as f64, c.im as f64))
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (a, b) = (idx / dim, idx % dim);
            match side {
                Side::Alice => {
                    let (t, c) = action[a];
                    out[t * dim + b] += c * amp;
                }
                Side::Bob => {
                    let (t, c) = action[b];
                    out[a * dim + t] += c * amp;
                }
            }
        }
        SharedState { n: self.n, amps: out }
    }

    /// Both outcomes of measuring `p` on one side, with their Born
    /// probabilities and renormalized post-states. Outcomes of probability
    /// zero have no post-state.
    pub fn outcomes(&self, p: &PauliOperator, side: Side) -> Result<[(Sign, f64, Option<SharedState>); 2], GameError> {
        if p.n_qubits() != self.n {
            return Err(PauliError::DimensionMismatch { left: self.n, right: p.n_qubits() }.into());
        }
        if !p.is_observable() {
            return Err(GameError::NotObservable(p.to_string()));
        }
        let moved = self.apply(p, side);
        let branch = |sign: Sign| {
            let s = sign.to_i8() as f64;
            let amps: Vec<Complex64> = self.amps.iter().zip(&moved.amps).map(|(a, m)| (a + m * s) * 0.5).collect();
            let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let post = (prob > PRUNE).then(|| {
                let scale = 1.0 / prob.sqrt();
                SharedState { n: self.n, amps: amps.into_iter().map(|a| a * scale).collect() }
            });
            (sign, prob, post)
        };
        Ok([branch(Sign::Plus), branch(Sign::Minus)])
    }
}

/// Projective measurement of `p` on one side; the outcome is sampled by the
/// Born rule.
pub fn measure<R: Rng + ?Sized>(
    state: &SharedState,
    p: &PauliOperator,
    side: Side,
    rng: &mut R,
) -> Result<(Sign, SharedState), GameError> {
    let [plus, minus] = state.outcomes(p, side)?;
    let (first, second) = if rng.gen::<f64>() * (plus.1 + minus.1) < plus.1 { (plus, minus) } else { (minus, plus) };
    // A pruned branch can only be drawn through rounding; fall back to the other.
    let (sign, _, post) = if first.2.is_some() { first } else { second };
    Ok((sign, post.expect("some outcome has positive probability")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query {
    pub vertex: usize,
    pub hyperedge: usize,
}

/// All `2·|V|` queries, by vertex then by hyperedge index.
pub fn all_queries(a: &Arrangement) -> Vec<Query> {
    (0..a.vertex_count())
        .flat_map(|v| {
            let [h0, h1] = a.hyperedges_of(v);
            [Query { vertex: v, hyperedge: h0.min(h1) }, Query { vertex: v, hyperedge: h0.max(h1) }]
        })
        .collect()
}

/// Uniform vertex, then one of its two hyperedges uniformly.
pub fn referee_draw<R: Rng + ?Sized>(a: &Arrangement, rng: &mut R) -> Query {
    let vertex = rng.gen_range(0..a.vertex_count());
    let hyperedge = a.hyperedges_of(vertex)[rng.gen_range(0..2)];
    Query { vertex, hyperedge }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub query: Query,
    pub alice_color: Sign,
    /// Bob's color for each member, in the hyperedge's stored order.
    pub bob_coloring: Vec<Sign>,
    pub parity_ok: bool,
    pub consistency_ok: bool,
}

impl Transcript {
    fn judge(a: &Arrangement, s: &Signing, query: Query, alice_color: Sign, bob_coloring: Vec<Sign>) -> Self {
        let members = a.hyperedge(query.hyperedge).members();
        let at = members.iter().position(|&u| u == query.vertex).expect("queried vertex lies on the hyperedge");
        Transcript {
            query,
            alice_color,
            parity_ok: Sign::product(bob_coloring.iter().copied()) == s.sign(query.hyperedge),
            consistency_ok: bob_coloring[at] == alice_color,
            bob_coloring,
        }
    }

    pub fn won(&self) -> bool {
        self.parity_ok && self.consistency_ok
    }
}

/// A deterministic classical strategy: one color per vertex for Alice and,
/// for every hyperedge, one color per member (stored order) for Bob.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalStrategy {
    pub alice: Vec<Sign>,
    pub bob: Vec<Vec<Sign>>,
}

impl ClassicalStrategy {
    /// Both players answer from the same vertex labelling.
    pub fn from_labels(a: &Arrangement, labels: &[Sign]) -> Self {
        ClassicalStrategy {
            alice: labels.to_vec(),
            bob: a.hyperedges().iter().map(|h| h.members().iter().map(|&v| labels[v]).collect()).collect(),
        }
    }

    pub fn from_realization(a: &Arrangement, r: &ClassicalRealization) -> Self {
        Self::from_labels(a, r.labels())
    }

    pub fn constant(a: &Arrangement, sign: Sign) -> Self {
        Self::from_labels(a, &vec![sign; a.vertex_count()])
    }

    fn check_shape(&self, a: &Arrangement) -> Result<(), GameError> {
        if self.alice.len() != a.vertex_count() {
            return Err(GameError::StrategyShape(format!("{} Alice colors for {} vertices", self.alice.len(), a.vertex_count())));
        }
        if self.bob.len() != a.hyperedge_count()
            || self.bob.iter().zip(a.hyperedges()).any(|(c, h)| c.len() != h.len())
        {
            return Err(GameError::StrategyShape("Bob's colorings do not match the hyperedges".into()));
        }
        Ok(())
    }

    pub fn play(&self, a: &Arrangement, s: &Signing, q: Query) -> Transcript {
        Transcript::judge(a, s, q, self.alice[q.vertex], self.bob[q.hyperedge].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Quantum { realization: QuantumRealization, literal: bool },
    Classical(ClassicalStrategy),
}

impl Strategy {
    pub fn quantum(realization: QuantumRealization) -> Self {
        Strategy::Quantum { realization, literal: false }
    }

    fn check_shape(&self, a: &Arrangement) -> Result<(), GameError> {
        match self {
            Strategy::Classical(c) => c.check_shape(a),
            Strategy::Quantum { realization, .. } => {
                if realization.operators().len() != a.vertex_count() {
                    return Err(GameError::StrategyShape("one operator per vertex required".into()));
                }
                if realization.n_qubits() > MAX_STATE_QUBITS {
                    return Err(GameError::TooManyQubits { n: realization.n_qubits(), max: MAX_STATE_QUBITS });
                }
                Ok(())
            }
        }
    }
}

/// The measurement sequence for one quantum round: Alice first, then Bob
/// in the hyperedge's stored order.
fn quantum_schedule(a: &Arrangement, r: &QuantumRealization, literal: bool, q: Query) -> Vec<(PauliOperator, Side)> {
    let bob_op = |v: usize| if literal { r.operator(v).clone() } else { r.operator(v).transpose() };
    std::iter::once((r.operator(q.vertex).clone(), Side::Alice))
        .chain(a.hyperedge(q.hyperedge).members().iter().map(|&u| (bob_op(u), Side::Bob)))
        .collect()
}

/// One quantum round with sampled measurement outcomes.
pub fn play_quantum<R: Rng + ?Sized>(
    a: &Arrangement,
    s: &Signing,
    r: &QuantumRealization,
    literal: bool,
    q: Query,
    rng: &mut R,
) -> Result<Transcript, GameError> {
    let mut state = SharedState::bell_pairs(r.n_qubits())?;
    let mut outcomes = Vec::new();
    for (op, side) in quantum_schedule(a, r, literal, q) {
        let (o, post) = measure(&state, &op, side, rng)?;
        outcomes.push(o);
        state = post;
    }
    Ok(Transcript::judge(a, s, q, outcomes[0], outcomes[1..].to_vec()))
}

/// Exact distribution of joint outcomes for a measurement sequence, by
/// enumerating every branch of positive probability.
pub fn branch_distribution(
    state: &SharedState,
    schedule: &[(PauliOperator, Side)],
) -> Result<BTreeMap<Vec<Sign>, f64>, GameError> {
    fn walk(
        state: &SharedState,
        schedule: &[(PauliOperator, Side)],
        prefix: &mut Vec<Sign>,
        weight: f64,
        out: &mut BTreeMap<Vec<Sign>, f64>,
    ) -> Result<(), GameError> {
        let Some(((op, side), rest)) = schedule.split_first() else {
            *out.entry(prefix.clone()).or_insert(0.0) += weight;
            return Ok(());
        };
        for (sign, prob, post) in state.outcomes(op, *side)? {
            if let Some(post) = post {
                prefix.push(sign);
                walk(&post, rest, prefix, weight * prob, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    walk(state, schedule, &mut Vec::new(), 1.0, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub vertex: String,
    pub hyperedge: String,
    pub win_probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plays: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub win_probability: f64,
    pub ci: Option<[f64; 2]>,
    pub per_query_breakdown: Vec<QueryResult>,
}

/// Win probability of a single query, exactly.
pub fn query_win_probability(a: &Arrangement, s: &Signing, strategy: &Strategy, q: Query) -> Result<f64, GameError> {
    match strategy {
        Strategy::Classical(c) => Ok(if c.play(a, s, q).won() { 1.0 } else { 0.0 }),
        Strategy::Quantum { realization, literal } => {
            let state = SharedState::bell_pairs(realization.n_qubits())?;
            let dist = branch_distribution(&state, &quantum_schedule(a, realization, *literal, q))?;
            Ok(dist
                .into_iter()
                .filter(|(outcomes, _)| Transcript::judge(a, s, q, outcomes[0], outcomes[1..].to_vec()).won())
                .map(|(_, p)| p)
                .sum())
        }
    }
}

/// Exact win probability averaged over the uniform query distribution.
pub fn exact_win_probability(a: &Arrangement, s: &Signing, strategy: &Strategy) -> Result<GameReport, GameError> {
    strategy.check_shape(a)?;
    let queries = all_queries(a);
    let mut breakdown = Vec::with_capacity(queries.len());
    let mut total = 0.0;
    for q in queries.iter().copied() {
        let p = query_win_probability(a, s, strategy, q)?;
        total += p;
        breakdown.push(QueryResult {
            vertex: a.vertex_id(q.vertex).to_string(),
            hyperedge: a.hyperedge(q.hyperedge).id().to_string(),
            win_probability: p,
            plays: None,
        });
    }
    Ok(GameReport { win_probability: total / queries.len() as f64, ci: None, per_query_breakdown: breakdown })
}

/// Normal-approximation 95% interval for a binomial rate, clamped to [0, 1].
pub fn wald_interval(wins: u64, trials: u64) -> [f64; 2] {
    let p = wins as f64 / trials as f64;
    let half = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    [(p - half).max(0.0), (p + half).min(1.0)]
}

/// Seeded simulation of `trials` rounds. Identical seeds give identical
/// reports.
pub fn monte_carlo(
    a: &Arrangement,
    s: &Signing,
    strategy: &Strategy,
    trials: u64,
    seed: u64,
) -> Result<GameReport, GameError> {
    assert!(trials >= 1, "at least one trial");
    strategy.check_shape(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let queries = all_queries(a);
    let mut tally: BTreeMap<Query, (u64, u64)> = queries.iter().map(|&q| (q, (0, 0))).collect();
    let mut wins = 0;
    for _ in 0..trials {
        let q = referee_draw(a, &mut rng);
        let t = match strategy {
            Strategy::Classical(c) => c.play(a, s, q),
            Strategy::Quantum { realization, literal } => play_quantum(a, s, realization, *literal, q, &mut rng)?,
        };
        let entry = tally.get_mut(&q).expect("drawn query is listed");
        entry.0 += 1;
        if t.won() {
            entry.1 += 1;
            wins += 1;
        }
    }
    let breakdown = queries
        .iter()
        .map(|q| {
            let (plays, won) = tally[q];
            QueryResult {
                vertex: a.vertex_id(q.vertex).to_string(),
                hyperedge: a.hyperedge(q.hyperedge).id().to_string(),
                win_probability: if plays == 0 { 0.0 } else { won as f64 / plays as f64 },
                plays: Some(plays),
            }
        })
        .collect();
    Ok(GameReport {
        win_probability: wins as f64 / trials as f64,
        ci: Some(wald_interval(wins, trials)),
        per_query_breakdown: breakdown,
    })
}

/// Best deterministic classical strategy, by trying every Alice coloring and
/// letting Bob best-respond on each hyperedge among all its colorings.
/// Returns the winning probability and a strategy achieving it.
pub fn optimal_classical_strategy(a: &Arrangement, s: &Signing) -> Result<(f64, ClassicalStrategy), GameError> {
    let n = a.vertex_count();
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(GameError::TooLarge { vertices: n, max: MAX_EXHAUSTIVE_VERTICES });
    }
    let color = |mask: u64, i: usize| Sign::from_bool_negative(mask >> i & 1 == 1);
    let mut best: Option<(usize, u64)> = None;
    for alice in 0u64..1 << n {
        let mut score = 0;
        for (h, edge) in a.hyperedges().iter().enumerate() {
            score += best_response(edge.members(), s.sign(h), |v| color(alice, v)).0;
        }
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, alice));
        }
    }
    let (score, alice) = best.expect("at least one coloring");
    let alice_colors: Vec<Sign> = (0..n).map(|v| color(alice, v)).collect();
    let bob = a
        .hyperedges()
        .iter()
        .enumerate()
        .map(|(h, edge)| {
            let (_, mask) = best_response(edge.members(), s.sign(h), |v| alice_colors[v]);
            (0..edge.len()).map(|i| color(mask, i)).collect()
        })
        .collect();
    Ok((score as f64 / (2 * n) as f64, ClassicalStrategy { alice: alice_colors, bob }))
}

/// Bob's coloring of one hyperedge (as a bit mask over member positions)
/// that wins the most of its queries, and that count.
fn best_response(members: &[usize], sign: Sign, alice: impl Fn(usize) -> Sign) -> (usize, u64) {
    let mut best = (0, 0);
    for mask in 0u64..1 << members.len() {
        let colors = (0..members.len()).map(|i| Sign::from_bool_negative(mask >> i & 1 == 1));
        if Sign::product(colors.clone()) != sign {
            continue;
        }
        let agree = colors.zip(members).filter(|(c, &v)| *c == alice(v)).count();
        if agree > best.0 {
            best = (agree, mask);
        }
    }
    best
}

/// Value of the best deterministic classical strategy.
pub fn best_classical_value(a: &Arrangement, s: &Signing) -> Result<f64, GameError> {
    Ok(optimal_classical_strategy(a, s)?.0)
}
