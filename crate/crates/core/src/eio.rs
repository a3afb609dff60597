//! The extensional input-output model truncated to a `B × B` grid.
//!
//! A system is a set of `(input, output)` pairs; refinement is subset
//! inclusion. Every subset of the grid is a system, so the universe holds
//! `2^(B²)` systems and `B` is capped at [`MAX_BOUND`].
//!
//! The `T_k` setups observe `k` pairs at once: `α_k(S) = S^k`, ordered
//! tuples drawn from `S`. A requirement refutable with `k` observed pairs is
//! refutable with `k + 1`, and determinism needs two. (Sampling a curve at
//! three points never rules out a circle; four points can. The grid model
//! does not attempt to reproduce that geometric aside.)

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::algorithmic::Oracle;
use crate::order::{combine, Combine, Requirement, SystemModel};
use crate::setup::{SetupError, TestSetup};

pub const MAX_BOUND: usize = 4;
/// Largest observation domain `|grid|^k` accepted by [`tk_setup`].
pub const MAX_TK_OBSERVATIONS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EioError {
    #[error("bound {0} is outside 1..={MAX_BOUND}")]
    BoundTooLarge(usize),
    #[error(
        "T_{k} over a {bound}x{bound} grid has {size} observations (cap {MAX_TK_OBSERVATIONS})"
    )]
    ObservationSpaceTooLarge { k: usize, bound: usize, size: u128 },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("unknown requirement `{0}`")]
    UnknownRequirementName(String),
    #[error("chain of length {len} needs bound {needed}, universe has {bound}")]
    BoundTooSmallForChain {
        len: usize,
        needed: usize,
        bound: usize,
    },
    #[error("pair ({0},{1}) lies outside the grid")]
    OutOfGrid(u64, u64),
    #[error(transparent)]
    Setup(#[from] SetupError),
}

/// All subsets of the `bound × bound` grid, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EioUniverse {
    bound: usize,
    model: SystemModel,
}

pub fn build_universe(bound: usize) -> Result<EioUniverse, EioError> {
    if bound == 0 || bound > MAX_BOUND {
        return Err(EioError::BoundTooLarge(bound));
    }
    let atoms: Vec<String> = (0..bound)
        .flat_map(|i| (0..bound).map(move |o| pair_id(i as u64, o as u64)))
        .collect();
    let model = SystemModel::powerset(&atoms).expect("grid within powerset cap");
    Ok(EioUniverse { bound, model })
}

fn pair_id(i: u64, o: u64) -> String {
    format!("({i},{o})")
}

impl EioUniverse {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn grid_size(&self) -> usize {
        self.bound * self.bound
    }

    fn bit(&self, input: u64, output: u64) -> Option<usize> {
        let b = self.bound as u64;
        (input < b && output < b).then(|| (input * b + output) as usize)
    }

    /// Pairs of the system stored at element index `element`.
    pub fn pairs(&self, element: usize) -> impl Iterator<Item = (u64, u64)> + '_ {
        let b = self.bound;
        (0..self.grid_size())
            .filter(move |bit| element & (1 << bit) != 0)
            .map(move |bit| ((bit / b) as u64, (bit % b) as u64))
    }

    pub fn system(&self, element: usize) -> EioSystem {
        EioSystem {
            pairs: self.pairs(element).collect(),
        }
    }

    /// Element index of a system, if it fits in the grid.
    pub fn element_of(&self, system: &EioSystem) -> Result<usize, EioError> {
        system.pairs.iter().try_fold(0usize, |acc, &(i, o)| {
            self.bit(i, o)
                .map(|bit| acc | (1 << bit))
                .ok_or(EioError::OutOfGrid(i, o))
        })
    }

    /// Requirement whose members satisfy `pred`.
    pub fn requirement(
        &self,
        name: impl Into<String>,
        mut pred: impl FnMut(&EioSystem) -> bool,
    ) -> Requirement {
        Requirement::from_predicate(&self.model, name, |e| pred(&self.system(e)))
    }

    /// The obligation "exhibits `(input, output)`".
    pub fn exhibits(&self, input: u64, output: u64) -> Result<Requirement, EioError> {
        let bit = self
            .bit(input, output)
            .ok_or(EioError::OutOfGrid(input, output))?;
        Ok(Requirement::from_predicate(
            &self.model,
            format!("exhibits{}", pair_id(input, output)),
            |e| e & (1 << bit) != 0,
        ))
    }
}

/// A system as an explicit pair set, independent of any grid bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EioSystem {
    pub pairs: BTreeSet<(u64, u64)>,
}

impl EioSystem {
    pub fn new(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        EioSystem {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn outputs(&self, input: u64) -> impl Iterator<Item = u64> + '_ {
        self.pairs
            .range((input, 0)..=(input, u64::MAX))
            .map(|&(_, o)| o)
    }

    /// At most one output per input.
    pub fn is_deterministic(&self) -> bool {
        self.pairs
            .iter()
            .zip(self.pairs.iter().skip(1))
            .all(|(a, b)| a.0 != b.0)
    }

    /// Some output for every input below `bound`.
    pub fn is_total(&self, bound: u64) -> bool {
        (0..bound).all(|i| self.outputs(i).next().is_some())
    }

    /// Every output is produced for at least two distinct inputs.
    pub fn is_output_anonymous(&self) -> bool {
        self.pairs
            .iter()
            .all(|&(i, o)| self.pairs.iter().any(|&(j, p)| p == o && j != i))
    }

    /// No pair `(i, 0)` with `i` odd.
    pub fn never_zero_on_odd(&self) -> bool {
        !self.pairs.iter().any(|&(i, o)| o == 0 && i % 2 == 1)
    }
}

impl fmt::Display for EioSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|&(i, o)| pair_id(i, o)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The named requirements available in every universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Determinism,
    Totality,
    TotalFunction,
    AnonymityZigzag,
    NeverZeroOdd,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Determinism,
        Builtin::Totality,
        Builtin::TotalFunction,
        Builtin::AnonymityZigzag,
        Builtin::NeverZeroOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Determinism => "determinism",
            Builtin::Totality => "totality",
            Builtin::TotalFunction => "total_function",
            Builtin::AnonymityZigzag => "anonymity_zigzag",
            Builtin::NeverZeroOdd => "never_zero_odd",
        }
    }
}

impl FromStr for Builtin {
    type Err = EioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| EioError::UnknownRequirementName(s.to_string()))
    }
}

pub fn builtin_requirement(universe: &EioUniverse, which: Builtin) -> Requirement {
    let bound = universe.bound as u64;
    let name = which.name();
    match which {
        Builtin::Determinism => universe.requirement(name, EioSystem::is_deterministic),
        Builtin::Totality => universe.requirement(name, |s| s.is_total(bound)),
        Builtin::TotalFunction => {
            let det = builtin_requirement(universe, Builtin::Determinism);
            let tot = builtin_requirement(universe, Builtin::Totality);
            combine(Combine::Meet, &det, &tot)
                .expect("same universe")
                .renamed(name)
        }
        Builtin::AnonymityZigzag => universe.requirement(name, EioSystem::is_output_anonymous),
        Builtin::NeverZeroOdd => universe.requirement(name, EioSystem::never_zero_on_odd),
    }
}

/// `T_k`: observations are ordered `k`-tuples of grid pairs, `α_k(S) = S^k`.
pub fn tk_setup(universe: &EioUniverse, k: usize) -> Result<TestSetup, EioError> {
    if k == 0 {
        return Err(EioError::ZeroK);
    }
    let grid = universe.grid_size();
    let size = (grid as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > MAX_TK_OBSERVATIONS as u128 {
        return Err(EioError::ObservationSpaceTooLarge {
            k,
            bound: universe.bound,
            size,
        });
    }
    let size = size as usize;
    let b = universe.bound as u64;
    let pair_of = |bit: usize| pair_id(bit as u64 / b, bit as u64 % b);
    let observations: Vec<String> = (0..size)
        .map(|mut code| {
            let mut digits = vec![0; k];
            for d in digits.iter_mut().rev() {
                *d = code % grid;
                code /= grid;
            }
            if k == 1 {
                pair_of(digits[0])
            } else {
                let parts: Vec<String> = digits.into_iter().map(pair_of).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let alpha = (0..universe.model.len())
        .map(|element| {
            let bits: Vec<usize> = (0..grid).filter(|bit| element & (1 << bit) != 0).collect();
            let mut row = FixedBitSet::with_capacity(size);
            if !bits.is_empty() {
                // Odometer over bits^k.
                let mut pos = vec![0usize; k];
                'tuples: loop {
                    row.insert(pos.iter().fold(0, |acc, &p| acc * grid + bits[p]));
                    for slot in (0..k).rev() {
                        pos[slot] += 1;
                        if pos[slot] < bits.len() {
                            continue 'tuples;
                        }
                        pos[slot] = 0;
                    }
                    break;
                }
            }
            row
        })
        .collect();
    let sorted = observations.windows(2).all(|w| w[0] < w[1]);
    debug_assert!(sorted, "single-digit pair ids sort in tuple order");
    Ok(TestSetup::from_sorted(
        format!("t{k}"),
        &universe.model,
        observations,
        alpha,
    )?)
}

/// The ascending chain `S_0 = {(0,0)}`, `S_j = S_{j-1} ∪ {(j, ⌊j/2⌋)}`.
pub fn chain_example(len: usize) -> Vec<EioSystem> {
    let mut out = Vec::with_capacity(len);
    let mut current = EioSystem::default();
    for j in 0..len as u64 {
        current.pairs.insert((j, j / 2));
        out.push(current.clone());
    }
    out
}

/// The first `len` chain systems as elements of `universe`.
pub fn chain_in_universe(universe: &EioUniverse, len: usize) -> Result<Vec<usize>, EioError> {
    let needed = len.max(1);
    if needed > universe.bound {
        return Err(EioError::BoundTooSmallForChain {
            len,
            needed,
            bound: universe.bound,
        });
    }
    chain_example(len)
        .iter()
        .map(|s| universe.element_of(s))
        .collect()
}

/// A finite set of observed pairs, as produced by a live black box.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairObservation(pub BTreeSet<(u64, u64)>);

impl PairObservation {
    pub fn single(input: u64, output: u64) -> Self {
        PairObservation([(input, output)].into_iter().collect())
    }

    /// Identifier of this observation in [`tk_setup`] with `k = 1`.
    pub fn t1_id(&self) -> Option<String> {
        match self.0.iter().collect::<Vec<_>>().as_slice() {
            [&(i, o)] => Some(pair_id(i, o)),
            _ => None,
        }
    }
}

impl fmt::Display for PairObservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&(i, o)| pair_id(i, o)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Irremediable observations of "never output 0 for an odd input": those
/// showing some `(i, 0)` with `i` odd. Decided in `cost` steps.
pub fn odd_input_zero_oracle(cost: usize) -> Oracle<PairObservation> {
    Oracle::from_predicate("odd-zero", cost, |t: &PairObservation| {
        t.0.iter().any(|&(i, o)| o == 0 && i % 2 == 1)
    })
}

/// Irremediable observations of "never output 0".
pub fn any_zero_oracle(cost: usize) -> Oracle<PairObservation> {
    Oracle::from_predicate("zero", cost, |t: &PairObservation| {
        t.0.iter().any(|&(_, o)| o == 0)
    })
}
