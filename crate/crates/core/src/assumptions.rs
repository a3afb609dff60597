//! Refutation under assumptions about the system under test.
//!
//! An assumption `A` is a set of systems taken as given. Knowing `S ∈ A`
//! shrinks the set of systems an observation could have come from to
//! `α̂(t) ∩ A`, which can make non-prohibitions refutable. Within `A`, such
//! a requirement behaves exactly like the prohibition `⌊A ∩ R⌋`.

use std::fmt;

use crate::order::{combine, down_closure, Combine, Requirement, SystemModel};
use crate::setup::{
    conclusive, irremediable, is_verifiable, RefutabilityReport, SetupError, TestSetup,
};

/// A setup, a requirement and an assumption over one model.
#[derive(Clone, Debug)]
pub struct AssumptionContext {
    pub setup: TestSetup,
    pub requirement: Requirement,
    pub assumption: Requirement,
}

impl AssumptionContext {
    pub fn new(
        setup: &TestSetup,
        requirement: &Requirement,
        assumption: &Requirement,
    ) -> Result<Self, SetupError> {
        setup.check(requirement)?;
        setup.check(assumption)?;
        Ok(AssumptionContext {
            setup: setup.clone(),
            requirement: requirement.clone(),
            assumption: assumption.clone(),
        })
    }
}

/// Every `S ∈ A ∖ R` has an observation `t` with `α̂(t) ∩ A ∩ R = ∅`.
pub fn refutable_under(ctx: &AssumptionContext) -> Result<RefutabilityReport, SetupError> {
    let a = ctx.assumption.members();
    let r = ctx.requirement.members();
    let mut both = a.clone();
    both.intersect_with(r);
    let omega = irremediable(&ctx.setup, &both);
    let violators = a.ones().filter(|&s| !r.contains(s));
    Ok(RefutabilityReport::collect(&ctx.setup, violators, &omega))
}

/// `P_{R|A} = ⌊A ∩ R⌋`.
pub fn residual_prohibition(
    model: &SystemModel,
    r: &Requirement,
    a: &Requirement,
) -> Result<Requirement, SetupError> {
    let meet = combine(Combine::Meet, a, r)?;
    Ok(down_closure(model, &meet)?.renamed(format!("residual({}|{})", r.name(), a.name())))
}

/// Result of trying to verify `S ∈ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    /// An observation of `S` whose `α̂` lies inside `A`.
    Witness(String),
    /// `A` is verifiable, but no observation of `S` proves membership.
    NoWitness,
    /// `A` is not verifiable in the setup; `blocker` is a satisfier of `A`
    /// that no observation can confirm.
    AssumptionNotVerifiable { blocker: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// `S ∉ R`, with `S ∈ A` confirmed by observation.
    Unconditional,
    /// `S ∉ R`, provided the named assumption holds.
    ConditionalOn(String),
    /// No refutation witness; nothing is claimed.
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Unconditional => f.write_str("violates (unconditional)"),
            Conclusion::ConditionalOn(a) => write!(f, "violates (conditional on {a})"),
            Conclusion::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignReport {
    pub system: String,
    pub residual: Requirement,
    /// An observation of `S` whose `α̂` misses the residual prohibition.
    pub refutation: Option<String>,
    pub verification: Verification,
    pub conclusion: Conclusion,
}

/// Refutes `S ∈ ⌊A ∩ R⌋`, then tries to verify `S ∈ A`. Absence of
/// witnesses is never read as satisfaction.
pub fn reduction_campaign(
    setup: &TestSetup,
    r: &Requirement,
    a: &Requirement,
    system: usize,
) -> Result<CampaignReport, SetupError> {
    setup.check(r)?;
    setup.check(a)?;
    let model = setup.model();
    let residual = residual_prohibition(model, r, a)?;
    let omega = irremediable(setup, residual.members());
    let refutation = setup
        .alpha(system)
        .intersection(&omega)
        .next()
        .map(|t| setup.observations()[t].clone());

    let verifiable = is_verifiable(setup, a)?;
    let verification = match verifiable.blockers.iter().next() {
        Some(blocker) => Verification::AssumptionNotVerifiable {
            blocker: blocker.clone(),
        },
        None => {
            let proofs = conclusive(setup, a.members());
            match setup.alpha(system).intersection(&proofs).next() {
                Some(t) => Verification::Witness(setup.observations()[t].clone()),
                None => Verification::NoWitness,
            }
        }
    };

    let conclusion = match (&refutation, &verification) {
        (None, _) => Conclusion::Inconclusive,
        (Some(_), Verification::Witness(_)) => Conclusion::Unconditional,
        (Some(_), _) => Conclusion::ConditionalOn(a.name().to_string()),
    };
    Ok(CampaignReport {
        system: model.id(system).to_string(),
        residual,
        refutation,
        verification,
        conclusion,
    })
}

/// Named requirement/assumption pairs over the input-output grid.
pub mod scenarios {
    use crate::eio::{builtin_requirement, Builtin, EioError, EioUniverse};
    use crate::order::{combine, Combine, Requirement};

    #[derive(Clone, Debug)]
    pub struct Scenario {
        pub name: &'static str,
        pub requirement: Requirement,
        pub assumption: Requirement,
    }

    fn total_function(universe: &EioUniverse) -> Requirement {
        builtin_requirement(universe, Builtin::TotalFunction)
    }

    /// The obligation "exhibits `(1,0)`" under totality and determinism.
    pub fn exhibits_under_total_function(universe: &EioUniverse) -> Result<Scenario, EioError> {
        Ok(Scenario {
            name: "exhibits-under-total-function",
            requirement: universe.exhibits(1, 0)?,
            assumption: total_function(universe),
        })
    }

    /// Lookup of client `client` must answer `phone`; tested assuming a
    /// total, deterministic implementation.
    pub fn phone_lookup(
        universe: &EioUniverse,
        client: u64,
        phone: u64,
    ) -> Result<Scenario, EioError> {
        Ok(Scenario {
            name: "phone-lookup",
            requirement: universe.exhibits(client, phone)?.renamed("lookup"),
            assumption: total_function(universe),
        })
    }

    /// A coffee machine (input 0 = coin, output 0 = coffee) is expected to
    /// be deterministic, so "only ever serves coffee for a coin" is a
    /// prohibition that testing can refute.
    pub fn vending_machine(universe: &EioUniverse) -> Result<Scenario, EioError> {
        universe.exhibits(0, 0)?;
        let requirement = universe.requirement("coffee-only", |s| s.outputs(0).all(|o| o == 0));
        Ok(Scenario {
            name: "vending-machine",
            requirement,
            assumption: Requirement::all(universe.model(), "anything"),
        })
    }

    /// A slot machine must be able to pay out (output 0 for a coin), yet it
    /// is nondeterministic by design, so nothing narrows the obligation.
    pub fn slot_machine(universe: &EioUniverse) -> Result<Scenario, EioError> {
        Ok(Scenario {
            name: "slot-machine",
            requirement: universe.exhibits(0, 0)?.renamed("can-win"),
            assumption: Requirement::all(universe.model(), "anything"),
        })
    }

    /// A Mealy-machine step "on input `i` output `o`", read as "exhibits
    /// `(i,o)`" and "no other output for `i`", under totality and
    /// determinism.
    pub fn mealy_output(
        universe: &EioUniverse,
        input: u64,
        output: u64,
    ) -> Result<Scenario, EioError> {
        let oblige = universe.exhibits(input, output)?;
        let forbid =
            universe.requirement("only-prescribed", |s| s.outputs(input).all(|o| o == output));
        let requirement = combine(Combine::Meet, &oblige, &forbid)
            .expect("same universe")
            .renamed("mealy-step");
        Ok(Scenario {
            name: "mealy-output",
            requirement,
            assumption: total_function(universe),
        })
    }

    /// If `(1,0)` is exhibited, no other odd input may yield 0; otherwise
    /// every input other than 1 must yield 0. The assumption is that
    /// `(1,0)` is exhibited.
    pub fn conditional_zero(universe: &EioUniverse) -> Result<Scenario, EioError> {
        let bound = universe.bound() as u64;
        let assumption = universe.exhibits(1, 0)?.renamed("exhibits(1,0)");
        let requirement = universe.requirement("conditional-zero", |s| {
            if s.pairs.contains(&(1, 0)) {
                !(3..bound).step_by(2).any(|i| s.pairs.contains(&(i, 0)))
            } else {
                (0..bound)
                    .filter(|&i| i != 1)
                    .all(|i| s.pairs.contains(&(i, 0)))
            }
        });
        Ok(Scenario {
            name: "conditional-zero",
            requirement,
            assumption,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::scenarios::*;
    use super::*;
    use crate::eio::{build_universe, builtin_requirement, tk_setup, Builtin, EioSystem};
    use crate::order::classify;
    use crate::setup::is_refutable;

    fn ctx(setup: &TestSetup, r: &Requirement, a: &Requirement) -> AssumptionContext {
        AssumptionContext::new(setup, r, a).unwrap()
    }

    #[test]
    fn obligation_refutable_under_total_function() {
        let u = build_universe(2).unwrap();
        let t1 = tk_setup(&u, 1).unwrap();
        let sc = exhibits_under_total_function(&u).unwrap();
        assert!(
            refutable_under(&ctx(&t1, &sc.requirement, &sc.assumption))
                .unwrap()
                .holds
        );
        let all = Requirement::all(u.model(), "all");
        let plain = refutable_under(&ctx(&t1, &sc.requirement, &all)).unwrap();
        assert!(!plain.holds);
        assert_eq!(plain, is_refutable(&t1, &sc.requirement).unwrap());
        let none = Requirement::none(u.model(), "none");
        assert!(
            refutable_under(&ctx(&t1, &sc.requirement, &none))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn residual_has_six_systems() {
        let u = build_universe(2).unwrap();
        let sc = exhibits_under_total_function(&u).unwrap();
        let p = residual_prohibition(u.model(), &sc.requirement, &sc.assumption).unwrap();
        let mut got = p.member_ids(u.model());
        got.sort();
        let mut want = vec![
            "{}",
            "{(0,0)}",
            "{(0,1)}",
            "{(1,0)}",
            "{(0,0),(1,0)}",
            "{(0,1),(1,0)}",
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(classify(u.model(), &p).unwrap().is_prohibition);
        let all = Requirement::all(u.model(), "all");
        assert_eq!(
            residual_prohibition(u.model(), &sc.requirement, &all)
                .unwrap()
                .len(),
            16
        );
    }

    #[test]
    fn scenario_facts() {
        let u = build_universe(2).unwrap();
        let t1 = tk_setup(&u, 1).unwrap();
        let holds = |sc: &Scenario| {
            refutable_under(&ctx(&t1, &sc.requirement, &sc.assumption))
                .unwrap()
                .holds
        };
        let phone = phone_lookup(&u, 1, 1).unwrap();
        assert!(holds(&phone));
        assert!(!is_refutable(&t1, &phone.requirement).unwrap().holds);
        assert!(holds(&vending_machine(&u).unwrap()));
        assert!(!holds(&slot_machine(&u).unwrap()));
        assert!(holds(&mealy_output(&u, 0, 1).unwrap()));
    }

    #[test]
    fn reduction_on_conditional_zero() {
        let u = build_universe(4).unwrap();
        let t1 = tk_setup(&u, 1).unwrap();
        let sc = conditional_zero(&u).unwrap();
        assert!(!classify(u.model(), &sc.requirement).unwrap().is_prohibition);
        let s = u.element_of(&EioSystem::new([(1, 0), (3, 0)])).unwrap();
        let rep = reduction_campaign(&t1, &sc.requirement, &sc.assumption, s).unwrap();
        assert_eq!(rep.refutation.as_deref(), Some("(3,0)"));
        assert_eq!(rep.verification, Verification::Witness("(1,0)".into()));
        assert_eq!(rep.conclusion, Conclusion::Unconditional);

        let det = builtin_requirement(&u, Builtin::Determinism);
        let rep = reduction_campaign(&t1, &sc.requirement, &det, s).unwrap();
        assert!(matches!(
            rep.verification,
            Verification::AssumptionNotVerifiable { .. }
        ));

        let good = u.element_of(&EioSystem::new([(1, 0), (2, 1)])).unwrap();
        let rep = reduction_campaign(&t1, &sc.requirement, &sc.assumption, good).unwrap();
        assert_eq!(rep.refutation, None);
        assert_eq!(rep.conclusion, Conclusion::Inconclusive);
    }
}
