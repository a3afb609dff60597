//! A monitor that lets an observation through once it is confirmed to be
//! remediable, compared with the set of irremediable observations.

use testability::algorithmic::{finite_co_omega_oracle, items, omega_set, weak_enforce, Decision};
use testability::eio::{build_universe, builtin_requirement, tk_setup, Builtin};

fn main() {
    let u = build_universe(2).unwrap();
    let t1 = tk_setup(&u, 1).unwrap();
    let r = builtin_requirement(&u, Builtin::NeverZeroOdd);
    println!("irremediable: {:?}", omega_set(&t1, &r).unwrap());

    let stream = items(t1.observations().to_vec());
    let run = weak_enforce(
        Box::new(stream),
        &finite_co_omega_oracle(&t1, &r).unwrap(),
        200,
    )
    .unwrap();
    for d in &run.decisions {
        match d {
            Decision::Permit {
                observation,
                probe_steps,
            } => {
                println!("permit {observation} after {probe_steps} probe steps")
            }
            Decision::Stall { observation } => println!("stall  {observation}"),
        }
    }
}
