//! Well-stirred reaction networks on a truncated state space.
//!
//! A [`ReactionSystem`] holds per-species molecule caps, stoichiometry
//! columns, and mass-action propensity specifications. States are vectors of
//! molecule counts; the linear state index enumerates the truncated box in
//! lexicographic order with species 0 varying fastest.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Molecule counts, one entry per species.
pub type State = Vec<u32>;

/// One-based linear index of a state, in `[1, Q]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateIndex(u64);

impl StateIndex {
    pub fn new(value: u64) -> Self {
        StateIndex(value)
    }

    /// The one-based index value.
    pub fn get(self) -> u64 {
        self.0
    }

    /// Zero-based offset for array addressing.
    pub fn offset(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl std::fmt::Display for StateIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Mass-action propensity in falling-factorial form.
///
/// The value at state `x` is
/// `rate * (product of named parameters) * prod_i x_i (x_i - 1) ... (x_i - m_i + 1) / m_i!`
/// where `m_i` is the reactant order of species `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PropensitySpec {
    /// Rate constant `c_r`.
    pub rate: f64,
    /// Reactant order per species.
    pub reactant_orders: Vec<u32>,
    /// Names of constant parameters multiplied into the rate.
    pub param_factors: Vec<String>,
}

/// A reaction network with truncated state space.
#[derive(Clone, Debug)]
pub struct ReactionSystem {
    caps: Vec<u32>,
    stoich: Vec<Vec<i32>>,
    reactions: Vec<PropensitySpec>,
    params: BTreeMap<String, f64>,
    // Derived at construction.
    strides: Vec<u64>,
    state_count: u64,
    base_rates: Vec<f64>,
    shifts: Vec<i64>,
}

impl PartialEq for ReactionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.caps == other.caps
            && self.stoich == other.stoich
            && self.reactions == other.reactions
            && self.params == other.params
    }
}

impl ReactionSystem {
    /// Builds a system from caps, stoichiometry columns (one per reaction,
    /// species-major), propensity specs, and named parameters.
    ///
    /// Only structural consistency is enforced here; value-level invariants
    /// are reported by [`ReactionSystem::validate`].
    pub fn new(
        caps: Vec<u32>,
        stoich: Vec<Vec<i32>>,
        reactions: Vec<PropensitySpec>,
        params: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let n = caps.len();
        if n == 0 {
            return Err(Error::Shape("system must have at least one species".into()));
        }
        if stoich.len() != reactions.len() {
            return Err(Error::Shape(format!(
                "{} stoichiometry columns but {} reactions",
                stoich.len(),
                reactions.len()
            )));
        }
        for (r, column) in stoich.iter().enumerate() {
            if column.len() != n {
                return Err(Error::Shape(format!(
                    "stoichiometry column {} has {} rows, expected {}",
                    r,
                    column.len(),
                    n
                )));
            }
        }
        for (r, spec) in reactions.iter().enumerate() {
            if spec.reactant_orders.len() != n {
                return Err(Error::Shape(format!(
                    "reaction {} has {} reactant orders, expected {}",
                    r,
                    spec.reactant_orders.len(),
                    n
                )));
            }
        }

        let mut strides = Vec::with_capacity(n);
        let mut state_count: u64 = 1;
        for &cap in &caps {
            strides.push(state_count);
            state_count = state_count
                .checked_mul(cap as u64 + 1)
                .ok_or_else(|| Error::StateCountOverflow(caps.clone()))?;
        }

        let base_rates = reactions
            .iter()
            .map(|spec| {
                let mut c = spec.rate;
                for name in &spec.param_factors {
                    c *= params.get(name).copied().unwrap_or(f64::NAN);
                }
                for &m in &spec.reactant_orders {
                    c /= factorial(m);
                }
                c
            })
            .collect();

        let shifts = stoich
            .iter()
            .map(|column| {
                column
                    .iter()
                    .zip(&strides)
                    .map(|(&v, &s)| v as i64 * s as i64)
                    .sum()
            })
            .collect();

        Ok(ReactionSystem {
            caps,
            stoich,
            reactions,
            params,
            strides,
            state_count,
            base_rates,
            shifts,
        })
    }

    pub fn num_species(&self) -> usize {
        self.caps.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn stoich_column(&self, r: usize) -> &[i32] {
        &self.stoich[r]
    }

    pub fn reactions(&self) -> &[PropensitySpec] {
        &self.reactions
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Total number of states `Q` in the truncated box.
    pub fn state_count(&self) -> u64 {
        self.state_count
    }

    pub fn within_caps(&self, x: &[u32]) -> bool {
        x.len() == self.caps.len() && x.iter().zip(&self.caps).all(|(&xi, &cap)| xi <= cap)
    }

    /// Value-level diagnostics; an empty list means the system is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        for (i, &cap) in self.caps.iter().enumerate() {
            if cap == 0 {
                diags.push(format!("species {}: cap must be at least 1", i));
            }
        }
        for (r, column) in self.stoich.iter().enumerate() {
            for (i, &v) in column.iter().enumerate() {
                if v.unsigned_abs() > self.caps[i] {
                    diags.push(format!(
                        "reaction {}: stoichiometry {} for species {} exceeds cap {}",
                        r, v, i, self.caps[i]
                    ));
                }
            }
        }
        for (r, spec) in self.reactions.iter().enumerate() {
            if !spec.rate.is_finite() || spec.rate < 0.0 {
                diags.push(format!(
                    "reaction {}: rate constant {} must be finite and non-negative",
                    r, spec.rate
                ));
            }
            for name in &spec.param_factors {
                if !self.params.contains_key(name) {
                    diags.push(format!("reaction {}: unknown parameter '{}'", r, name));
                }
            }
        }
        for (name, &value) in &self.params {
            if !value.is_finite() || value < 0.0 {
                diags.push(format!(
                    "parameter '{}' = {} must be finite and non-negative",
                    name, value
                ));
            }
        }
        diags
    }

    /// Linear index of a state: strides ascend with species, species 0
    /// fastest, plus one.
    pub fn state_index(&self, x: &[u32]) -> Result<StateIndex> {
        if !self.within_caps(x) {
            return Err(Error::OutOfCaps {
                state: x.to_vec(),
                caps: self.caps.clone(),
            });
        }
        let idx: u64 = x
            .iter()
            .zip(&self.strides)
            .map(|(&xi, &s)| xi as u64 * s)
            .sum();
        Ok(StateIndex(idx + 1))
    }

    /// Inverse of [`ReactionSystem::state_index`].
    pub fn state_from_index(&self, idx: StateIndex) -> Result<State> {
        if idx.get() < 1 || idx.get() > self.state_count {
            return Err(Error::IndexOutOfRange {
                index: idx.get(),
                q: self.state_count,
            });
        }
        let mut rem = idx.get() - 1;
        let mut x = vec![0u32; self.caps.len()];
        for i in (0..self.caps.len()).rev() {
            x[i] = (rem / self.strides[i]) as u32;
            rem %= self.strides[i];
        }
        Ok(x)
    }

    /// Signed index change `d_r` caused by one firing of reaction `r`:
    /// `I(x) - I(x - v_r)`.
    pub fn index_shift(&self, r: usize) -> i64 {
        self.shifts[r]
    }

    /// Propensity of reaction `r` at state `x`.
    pub fn propensity(&self, r: usize, x: &[u32]) -> f64 {
        let spec = &self.reactions[r];
        let mut a = self.base_rates[r];
        for (&xi, &m) in x.iter().zip(&spec.reactant_orders) {
            if m == 0 {
                continue;
            }
            if xi < m {
                return 0.0;
            }
            for k in 0..m {
                a *= (xi - k) as f64;
            }
        }
        a
    }

    /// Sum of all propensities at `x`.
    pub fn total_propensity(&self, x: &[u32]) -> f64 {
        (0..self.reactions.len()).map(|r| self.propensity(r, x)).sum()
    }

    /// Expected state change over a step of length `tau`:
    /// `sum_r v_r a_r(x) tau`.
    pub fn expected_jump(&self, x: &[u32], tau: f64) -> Vec<f64> {
        let mut jump = vec![0.0; self.caps.len()];
        for (r, column) in self.stoich.iter().enumerate() {
            let weight = self.propensity(r, x) * tau;
            for (j, &v) in column.iter().enumerate() {
                jump[j] += v as f64 * weight;
            }
        }
        jump
    }
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(|k| k as f64).product()
}
