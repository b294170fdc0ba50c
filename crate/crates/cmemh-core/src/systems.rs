//! Stock reaction networks used by tests, benches, and examples.

use std::collections::BTreeMap;

use crate::reaction_system::{PropensitySpec, ReactionSystem};

fn spec(rate: f64, orders: Vec<u32>, factors: &[&str]) -> PropensitySpec {
    PropensitySpec {
        rate,
        reactant_orders: orders,
        param_factors: factors.iter().map(|s| s.to_string()).collect(),
    }
}

/// Schlogl bistable network: one species, four reactions, cap 900.
///
/// `a1 = (c1/2) N1 x(x-1)`, `a2 = (c2/6) x(x-1)(x-2)`,
/// `a3 = c3 N2`, `a4 = c4 x`.
pub fn schlogl() -> ReactionSystem {
    let mut params = BTreeMap::new();
    params.insert("N1".to_string(), 1e5);
    params.insert("N2".to_string(), 2e5);
    ReactionSystem::new(
        vec![900],
        vec![vec![1], vec![-1], vec![1], vec![-1]],
        vec![
            spec(3e-7, vec![2], &["N1"]),
            spec(1e-4, vec![3], &[]),
            spec(1e-3, vec![0], &["N2"]),
            spec(3.5, vec![1], &[]),
        ],
        params,
    )
    .expect("schlogl system is well formed")
}

/// Reversible isomer network with both caps equal: `X1 <-> X2`,
/// `a1 = c1 x1`, `a2 = c2 x2`. Conserves `x1 + x2`.
pub fn isomer(cap: u32, c1: f64, c2: f64) -> ReactionSystem {
    ReactionSystem::new(
        vec![cap, cap],
        vec![vec![-1, 1], vec![1, -1]],
        vec![spec(c1, vec![1, 0], &[]), spec(c2, vec![0, 1], &[])],
        BTreeMap::new(),
    )
    .expect("isomer system is well formed")
}

/// Lotka-Volterra predator-prey network at full scale: caps 2000 x 2000,
/// constant food pool `Y`.
pub fn lotka() -> ReactionSystem {
    let mut params = BTreeMap::new();
    params.insert("Y".to_string(), 1e5);
    ReactionSystem::new(
        vec![2000, 2000],
        vec![vec![1, 0], vec![-1, 1], vec![0, -1], vec![-1, 0]],
        vec![
            spec(2e-4, vec![1, 0], &["Y"]),
            spec(0.01, vec![1, 1], &[]),
            spec(10.0, vec![0, 1], &[]),
            spec(10.0, vec![1, 0], &[]),
        ],
        params,
    )
    .expect("lotka system is well formed")
}

/// Lotka-Volterra scaled down to caps 200 x 200 with rates rebalanced so the
/// deterministic equilibrium sits at (100, 100) and boundary mass stays
/// negligible over short horizons.
pub fn lotka_reduced() -> ReactionSystem {
    let mut params = BTreeMap::new();
    params.insert("Y".to_string(), 1e5);
    ReactionSystem::new(
        vec![200, 200],
        vec![vec![1, 0], vec![-1, 1], vec![0, -1], vec![-1, 0]],
        vec![
            spec(1e-5, vec![1, 0], &["Y"]),
            spec(0.001, vec![1, 1], &[]),
            spec(0.1, vec![0, 1], &[]),
            spec(0.9, vec![1, 0], &[]),
        ],
        params,
    )
    .expect("reduced lotka system is well formed")
}

/// Single-species pure birth process with constant propensity.
pub fn pure_birth(cap: u32, rate: f64) -> ReactionSystem {
    ReactionSystem::new(
        vec![cap],
        vec![vec![1]],
        vec![spec(rate, vec![0], &[])],
        BTreeMap::new(),
    )
    .expect("pure birth system is well formed")
}

/// Isomer with caps `[1, 1]`. Restricted to the conserved pair
/// `{(1,0), (0,1)}` this is an exact two-state Markov chain with forward
/// rate `c1` and backward rate `c2`.
pub fn two_state(c1: f64, c2: f64) -> ReactionSystem {
    isomer(1, c1, c2)
}

/// Single-species system whose only reaction has zero rate.
pub fn inert(cap: u32) -> ReactionSystem {
    ReactionSystem::new(
        vec![cap],
        vec![vec![1]],
        vec![spec(0.0, vec![0], &[])],
        BTreeMap::new(),
    )
    .expect("inert system is well formed")
}
