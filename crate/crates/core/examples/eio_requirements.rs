//! Requirements over input-output relations on a small grid, checked in
//! setups observing one and two pairs.

use testability::eio::{build_universe, builtin_requirement, chain_example, tk_setup, Builtin};
use testability::order::classify;
use testability::setup::{is_refutable, is_verifiable};

fn main() {
    let u = build_universe(2).unwrap();
    let t1 = tk_setup(&u, 1).unwrap();
    let t2 = tk_setup(&u, 2).unwrap();
    println!(
        "{} systems, t1 has {} observations, t2 has {}",
        u.model().len(),
        t1.observations().len(),
        t2.observations().len()
    );

    for b in Builtin::ALL {
        let r = builtin_requirement(&u, b);
        let c = classify(u.model(), &r).unwrap();
        println!(
            "{:<17} members={:<2} obligation={:<5} prohibition={:<5} semi_monotone={:<5} refutable(t1)={:<5} refutable(t2)={:<5} verifiable(t1)={}",
            b.name(),
            r.len(),
            c.is_obligation,
            c.is_prohibition,
            c.is_semi_monotone,
            is_refutable(&t1, &r).unwrap().holds,
            is_refutable(&t2, &r).unwrap().holds,
            is_verifiable(&t1, &r).unwrap().holds,
        );
    }

    for (j, s) in chain_example(6).iter().enumerate() {
        println!(
            "S_{j} = {:?} anonymous={}",
            s.pairs,
            s.is_output_anonymous()
        );
    }
}
