//! Safety, liveness and their decomposition over lasso behaviors, and
//! refutability of sets of behaviors from finitely many finite prefixes.

use testability::setup::is_verifiable;
use testability::temporal::{
    build_temporal_universe, decompose, exhibits_symbol, is_hyper_safety, is_liveness, is_safety,
    nabla, named_property, LassoWord, UniverseParams,
};

fn main() {
    let w: LassoWord = "ab(ab)^w".parse().unwrap();
    println!("ab(ab)^w canonicalizes to {w}");

    // Safety is judged through prefixes up to the depth. Shallow depths
    // hide bad prefixes, deep ones let every lasso be told apart.
    for depth in [2, 4] {
        let u = build_temporal_universe(&UniverseParams::new(&['a', 'b'], 1, 2, depth)).unwrap();
        println!("depth {depth}");
        for spec in ["never:b", "eventually:b", "infinitely:a"] {
            let phi = named_property(&u, spec).unwrap();
            let safety = is_safety(&u, &phi).unwrap();
            let (safe, live) = decompose(&u, &phi).unwrap();
            println!(
                "  {spec:<13} safety={:<5} liveness={:<5} safe_part={} live_part={}",
                safety.holds,
                is_liveness(&u, &phi).unwrap().holds,
                safe.member_names(&u).len(),
                live.member_names(&u).len(),
            );
            println!("  {:<13} bad prefixes {:?}", "", safety.bad_prefixes);
            println!("  {:<13} irremediable {:?}", "", nabla(&u, &phi).unwrap());
        }
    }

    let small = build_temporal_universe(&UniverseParams::new(&['a', 'b'], 0, 2, 4)).unwrap();
    let exhibits = exhibits_symbol(&small, 'b').unwrap();
    println!(
        "exhibits(b): hyper-safety={} verifiable={}",
        is_hyper_safety(&small, &exhibits).unwrap(),
        is_verifiable(small.tstar().unwrap(), &exhibits)
            .unwrap()
            .holds,
    );
}
