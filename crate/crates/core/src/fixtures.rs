//! Reference instances with known values, shared by tests, benches and the CLI.

use crate::geometry::{HalfSpace, PiecewiseValueStructure, Polytope, ValuePiece};
use crate::lp::Relation;
use crate::model::{Belief, PersuasionGame, RawGame};
use crate::rational::{frac, int, Rational};

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn binary_prior(high: Rational) -> Vec<Rational> {
    vec![high.clone(), int(1) - high]
}

/// Salesman and consumer: a product of quality H or L sells at 5 and is
/// worth 10 or 0, so buying pays +5 / −5. The salesman earns 1 per sale.
pub fn salesman(prior_high: Rational) -> PersuasionGame {
    PersuasionGame::validate(RawGame {
        types: labels(&["H", "L"]),
        actions: labels(&["buy", "pass"]),
        receiver_payoffs: vec![vec![int(5), int(-5)], vec![int(0), int(0)]],
        sender_values: vec![int(1), int(0)],
        prior: binary_prior(prior_high),
    })
    .expect("valid fixture")
}

/// A seller prices a zero-cost good for a buyer valued uniformly in {1,2,3};
/// an influencer (the Sender) wants a low price and values price p at 4 − p.
/// The seller's payoff from price p against valuation v is p if v ≥ p.
pub fn pricing() -> PersuasionGame {
    PersuasionGame::validate(RawGame {
        types: labels(&["v1", "v2", "v3"]),
        actions: labels(&["p1", "p2", "p3"]),
        receiver_payoffs: vec![
            vec![int(1), int(1), int(1)],
            vec![int(0), int(2), int(2)],
            vec![int(0), int(0), int(3)],
        ],
        sender_values: vec![int(3), int(2), int(1)],
        prior: vec![frac(1, 3), frac(1, 3), frac(1, 3)],
    })
    .expect("valid fixture")
}

/// Binary types, three actions with Sender values 0, 1/4, 1. Indifference
/// points sit at μ(H) = 1/5 (a1/a2) and μ(H) = 2/3 (a2/a3).
pub fn three_action_binary(prior_high: Rational) -> PersuasionGame {
    PersuasionGame::validate(RawGame {
        types: labels(&["H", "L"]),
        actions: labels(&["a1", "a2", "a3"]),
        receiver_payoffs: vec![
            vec![int(-4), int(1)],
            vec![int(0), int(0)],
            vec![int(1), int(-2)],
        ],
        sender_values: vec![int(0), frac(1, 4), int(1)],
        prior: binary_prior(prior_high),
    })
    .expect("valid fixture")
}

/// Abstract three-type value function: 7/3 at the θ₁ vertex; on the face
/// μ(θ₁) = 0 it is 2, 3, 1 for μ(θ₂) in [0, 1/2), [1/2, 3/4], (3/4, 1];
/// zero elsewhere.
pub fn kinked_abstract(prior: Belief) -> PiecewiseValueStructure {
    let h = |c: [i64; 3], rel: Relation, rhs: Rational| HalfSpace::new(c.iter().map(|&x| int(x)).collect(), rel, rhs);
    let piece = |label: &str, hs: Vec<HalfSpace>, v: Rational| ValuePiece {
        label: label.into(),
        tie_set: Vec::new(),
        region: Polytope::new(3, hs).expect("dimension 3"),
        vmin: v.clone(),
        vmax: v,
    };
    let face = || h([1, 0, 0], Relation::Eq, int(0));
    PiecewiseValueStructure::from_pieces(
        vec![
            piece("zero", vec![], int(0)),
            piece("vertex", vec![h([1, 0, 0], Relation::Eq, int(1))], frac(7, 3)),
            piece("low", vec![face(), h([0, 1, 0], Relation::Le, frac(1, 2))], int(2)),
            piece(
                "mid",
                vec![face(), h([0, 1, 0], Relation::Ge, frac(1, 2)), h([0, 1, 0], Relation::Le, frac(3, 4))],
                int(3),
            ),
            piece("high", vec![face(), h([0, 1, 0], Relation::Ge, frac(3, 4))], int(1)),
        ],
        prior,
    )
    .expect("valid fixture")
}

pub fn kinked_abstract_prior() -> Belief {
    Belief::new(vec![frac(1, 2), frac(1, 6), frac(1, 3)]).expect("on simplex")
}

pub fn single_action() -> PersuasionGame {
    PersuasionGame::validate(RawGame {
        types: labels(&["a", "b"]),
        actions: labels(&["only"]),
        receiver_payoffs: vec![vec![int(1), int(-1)]],
        sender_values: vec![int(2)],
        prior: vec![frac(1, 3), frac(2, 3)],
    })
    .expect("valid fixture")
}

/// Two actions with identical Receiver payoffs but different Sender values:
/// neither is ever uniquely optimal.
pub fn duplicated_action() -> PersuasionGame {
    PersuasionGame::validate(RawGame {
        types: labels(&["a", "b"]),
        actions: labels(&["x", "x2", "y"]),
        receiver_payoffs: vec![vec![int(1), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]],
        sender_values: vec![int(1), int(2), int(0)],
        prior: vec![frac(1, 2), frac(1, 2)],
    })
    .expect("valid fixture")
}

/// Seeded random game with 2 to `max_types` types, 2 to `max_actions`
/// actions, integer payoffs in [−5, 5] and a full-support prior with
/// weights drawn from 1..=9.
pub fn random_game(seed: u64, max_types: usize, max_actions: usize) -> PersuasionGame {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_types.max(2));
    let k = rng.gen_range(2..=max_actions.max(2));
    let mut draw = || int(rng.gen_range(-5..=5));
    let receiver_payoffs = (0..k).map(|_| (0..n).map(|_| draw()).collect()).collect();
    let sender_values = (0..k).map(|_| draw()).collect();
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    PersuasionGame::validate(RawGame {
        types: (0..n).map(|i| format!("t{i}")).collect(),
        actions: (0..k).map(|i| format!("a{i}")).collect(),
        receiver_payoffs,
        sender_values,
        prior: weights.iter().map(|&w| frac(w, total)).collect(),
    })
    .expect("valid random game")
}
