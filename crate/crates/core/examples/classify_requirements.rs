//! Classifies every requirement over a four-element diamond.

use testability::order::{build_model, classify, down_closure, up_closure, Requirement};

fn main() {
    let model = build_model(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        "bot",
        "top",
    )
    .unwrap();

    for mask in 0u32..16 {
        let ids = (0..4)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| model.ids()[i].clone());
        let r = Requirement::new(&model, format!("R{mask}"), ids).unwrap();
        let c = classify(&model, &r).unwrap();
        println!(
            "{:<18} obligation={:<5} prohibition={:<5} semi_monotone={:<5} up={:?} down={:?}",
            format!("{:?}", r.member_ids(&model)),
            c.is_obligation,
            c.is_prohibition,
            c.is_semi_monotone,
            up_closure(&model, &r).unwrap().member_ids(&model),
            down_closure(&model, &r).unwrap().member_ids(&model),
        );
    }
}
