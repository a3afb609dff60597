//! The refutation search on scripted systems: a witness behind a branch
//! that never finishes, and a system with nothing to find.

use testability::algorithmic::{algorithm1, BoxEnumerator, Dovetail, Scripted, Tail};
use testability::eio::{odd_input_zero_oracle, PairObservation};

fn main() {
    let system: BoxEnumerator<PairObservation> = Box::new(Dovetail::new([
        Box::new(Scripted::<PairObservation>::stall()) as BoxEnumerator<_>,
        Box::new(Scripted::yields_at(
            2,
            PairObservation::single(3, 0),
            Tail::Stall,
        )),
    ]));
    let verdict = algorithm1(system, &odd_input_zero_oracle(1), 100).unwrap();
    for record in &verdict.log {
        println!("{record}");
    }
    println!(
        "{:?} witness={:?} steps={}",
        verdict.outcome,
        verdict.witness.map(|w| w.to_string()),
        verdict.steps_used
    );

    let clean: BoxEnumerator<PairObservation> = Box::new(Scripted::new(
        [
            Some(PairObservation::single(1, 1)),
            None,
            Some(PairObservation::single(3, 2)),
        ],
        Tail::Stall,
    ));
    let verdict = algorithm1(clean, &odd_input_zero_oracle(1), 50).unwrap();
    println!("{:?} after {} steps", verdict.outcome, verdict.steps_used);
}
