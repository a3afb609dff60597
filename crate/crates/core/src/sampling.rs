//! Seeded random models, setups and requirements for property checks.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assumptions::{refutable_under, residual_prohibition, AssumptionContext};
use crate::order::{
    build_model, classify, combine, down_closure, up_closure, Combine, Requirement, SystemModel,
};
use crate::setup::{is_refutable, is_verifiable, reflexive_setup, TestSetup};

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A bounded poset with between 2 and `max_elements` elements, named
/// `bot`, `e1`, ..., `top`. Inner elements get random strict relations
/// consistent with their index order.
pub fn random_model(rng: &mut impl Rng, max_elements: usize) -> SystemModel {
    assert!(max_elements >= 2, "a bounded poset needs two elements");
    let n = rng.gen_range(2..=max_elements);
    let inner: Vec<String> = (1..n - 1).map(|i| format!("e{i}")).collect();
    let density = rng.gen_range(0.1..0.7);
    let mut pairs = Vec::new();
    for (i, a) in inner.iter().enumerate() {
        pairs.push(("bot".to_string(), a.clone()));
        pairs.push((a.clone(), "top".to_string()));
        for b in &inner[i + 1..] {
            if rng.gen_bool(density) {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    if inner.is_empty() {
        pairs.push(("bot".to_string(), "top".to_string()));
    }
    let elements = std::iter::once("bot".to_string())
        .chain(inner)
        .chain(std::iter::once("top".to_string()));
    build_model(elements, pairs, "bot", "top").expect("index order is acyclic")
}

/// Each element independently, with probability one half.
pub fn random_requirement(rng: &mut impl Rng, model: &SystemModel, name: &str) -> Requirement {
    Requirement::from_predicate(model, name, |_| rng.gen_bool(0.5))
}

fn sparse(rng: &mut impl Rng, model: &SystemModel, name: &str) -> Requirement {
    let p = rng.gen_range(0.0..0.4);
    Requirement::from_predicate(model, name, |_| rng.gen_bool(p))
}

pub fn random_up_set(rng: &mut impl Rng, model: &SystemModel, name: &str) -> Requirement {
    let seed = sparse(rng, model, name);
    up_closure(model, &seed).expect("same model")
}

pub fn random_down_set(rng: &mut impl Rng, model: &SystemModel, name: &str) -> Requirement {
    let seed = sparse(rng, model, name);
    down_closure(model, &seed).expect("same model")
}

/// Mixes unconstrained sets with up-sets and down-sets so that every
/// requirement type shows up often.
pub fn mixed_requirement(rng: &mut impl Rng, model: &SystemModel, name: &str) -> Requirement {
    match rng.gen_range(0..3) {
        0 => random_requirement(rng, model, name),
        1 => random_up_set(rng, model, name),
        _ => random_down_set(rng, model, name),
    }
}

/// An order-preserving setup: each observation is produced exactly by the
/// systems in a random up-set.
pub fn random_setup(rng: &mut impl Rng, model: &SystemModel) -> TestSetup {
    if rng.gen_bool(0.15) {
        return reflexive_setup(model);
    }
    let m = rng.gen_range(1..=6);
    let producers: Vec<Requirement> = (0..m)
        .map(|_| random_up_set(rng, model, "producers"))
        .collect();
    let observations: Vec<String> = (0..m).map(|t| format!("o{t}")).collect();
    let alpha = (0..model.len())
        .map(|s| (0..m).filter(|&t| producers[t].contains(s)).collect())
        .collect();
    TestSetup::from_indices("sampled", model, observations, alpha).expect("up-sets are monotone")
}

/// `{ S | α(S) ∩ W = ∅ }` for a random observation set `W`; refutable by
/// construction.
pub fn refutable_requirement(rng: &mut impl Rng, setup: &TestSetup, name: &str) -> Requirement {
    let n = setup.observations().len();
    let w: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    Requirement::from_predicate(setup.model(), name, |s| {
        w.iter().all(|&t| !setup.alpha(s).contains(t))
    })
}

/// Outcome of one randomized property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyTally {
    pub name: &'static str,
    pub trials: usize,
    /// Instances where the property's premise held.
    pub applicable: usize,
    pub violations: usize,
}

impl fmt::Display for PropertyTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "property={} trials={} applicable={} violations={}",
            self.name, self.trials, self.applicable, self.violations
        )
    }
}

/// Runs the structural theorems on `trials` random instances each.
pub fn check_theorems(seed: u64, trials: usize, max_elements: usize) -> Vec<PropertyTally> {
    let mut rng = rng(seed);
    let mut tallies = vec![
        tally("obligation-and-prohibition-only-if-trivial"),
        tally("refutable-implies-prohibition"),
        tally("verifiable-implies-obligation"),
        tally("prohibition-refutable-in-reflexive"),
        tally("meet-of-refutable-is-refutable"),
        tally("residual-agrees-within-assumption"),
    ];
    for _ in 0..trials {
        let model = random_model(&mut rng, max_elements);
        let setup = random_setup(&mut rng, &model);
        let r = mixed_requirement(&mut rng, &model, "R");
        let c = classify(&model, &r).expect("same model");

        record(
            &mut tallies[0],
            c.is_obligation && c.is_prohibition,
            c.is_trivial,
        );
        let refutable = is_refutable(&setup, &r).expect("same model").holds;
        record(&mut tallies[1], refutable, c.is_prohibition);
        let verifiable = is_verifiable(&setup, &r).expect("same model").holds;
        record(&mut tallies[2], verifiable, c.is_obligation);
        if c.is_prohibition {
            let reflexive = reflexive_setup(&model);
            record(
                &mut tallies[3],
                true,
                is_refutable(&reflexive, &r).expect("same model").holds,
            );
        } else {
            tallies[3].trials += 1;
        }

        let r1 = refutable_requirement(&mut rng, &setup, "R1");
        let r2 = refutable_requirement(&mut rng, &setup, "R2");
        let meet = combine(Combine::Meet, &r1, &r2).expect("same model");
        record(
            &mut tallies[4],
            true,
            is_refutable(&setup, &meet).expect("same model").holds,
        );

        let a = mixed_requirement(&mut rng, &model, "A");
        let ctx = AssumptionContext::new(&setup, &r, &a).expect("same model");
        let holds = refutable_under(&ctx).expect("same model").holds;
        let residual = residual_prohibition(&model, &r, &a).expect("same model");
        let agrees = a
            .members()
            .ones()
            .all(|s| residual.contains(s) == r.contains(s));
        record(&mut tallies[5], holds, agrees);
    }
    tallies
}

fn tally(name: &'static str) -> PropertyTally {
    PropertyTally {
        name,
        trials: 0,
        applicable: 0,
        violations: 0,
    }
}

fn record(t: &mut PropertyTally, premise: bool, conclusion: bool) {
    t.trials += 1;
    if premise {
        t.applicable += 1;
        if !conclusion {
            t.violations += 1;
        }
    }
}
