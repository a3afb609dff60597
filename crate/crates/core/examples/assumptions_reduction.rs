//! Refuting under an assumption, the residual prohibition, and the
//! two-step campaign that also verifies the assumption.

use testability::assumptions::{
    reduction_campaign, refutable_under, residual_prohibition, scenarios, AssumptionContext,
};
use testability::eio::{build_universe, tk_setup, EioSystem};

fn main() {
    let u2 = build_universe(2).unwrap();
    let t1 = tk_setup(&u2, 1).unwrap();
    let s = scenarios::exhibits_under_total_function(&u2).unwrap();
    let ctx = AssumptionContext::new(&t1, &s.requirement, &s.assumption).unwrap();
    println!(
        "{}: refutable under assumption = {}",
        s.name,
        refutable_under(&ctx).unwrap().holds
    );
    let residual = residual_prohibition(u2.model(), &s.requirement, &s.assumption).unwrap();
    println!("residual: {:?}", residual.member_ids(u2.model()));

    let u4 = build_universe(4).unwrap();
    let t1 = tk_setup(&u4, 1).unwrap();
    let s = scenarios::conditional_zero(&u4).unwrap();
    let system = u4.element_of(&EioSystem::new([(1, 0), (3, 0)])).unwrap();
    let report = reduction_campaign(&t1, &s.requirement, &s.assumption, system).unwrap();
    println!(
        "{}: refutation={:?} verification={:?}",
        s.name, report.refutation, report.verification
    );
    println!("conclusion: {}", report.conclusion);
}
