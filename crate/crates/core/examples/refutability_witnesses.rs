//! Refutation and verification witnesses in a hand-written setup, and
//! the same requirement in the reflexive setup.

use std::collections::{BTreeMap, BTreeSet};

use testability::order::{build_model, Requirement};
use testability::setup::{
    alpha_hat, build_setup, is_more_permissive, is_refutable, is_verifiable, reflexive_setup,
};

fn main() {
    let model = build_model(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        "bot",
        "top",
    )
    .unwrap();
    let alpha: BTreeMap<String, BTreeSet<String>> = [
        ("bot", vec![]),
        ("a", vec!["x"]),
        ("b", vec!["y"]),
        ("top", vec!["x", "y"]),
    ]
    .into_iter()
    .map(|(s, ts)| (s.to_string(), ts.into_iter().map(String::from).collect()))
    .collect();
    let coarse = build_setup("coarse", &model, ["x", "y"], &alpha).unwrap();
    for t in ["x", "y"] {
        println!(
            "alpha_hat({t}) = {:?}",
            alpha_hat(&coarse, t).unwrap().member_ids(&model)
        );
    }

    let no_b = Requirement::new(&model, "noB", ["bot", "a"]).unwrap();
    let report = is_refutable(&coarse, &no_b).unwrap();
    println!(
        "noB refutable in coarse: {} {:?}",
        report.holds, report.witnesses
    );

    let has_a = Requirement::new(&model, "hasA", ["a", "top"]).unwrap();
    let report = is_verifiable(&coarse, &has_a).unwrap();
    println!(
        "hasA verifiable in coarse: {} {:?}",
        report.holds, report.witnesses
    );

    let only_bot = Requirement::new(&model, "onlyBot", ["bot"]).unwrap();
    println!(
        "onlyBot refutable in coarse: {}, in reflexive: {}",
        is_refutable(&coarse, &only_bot).unwrap().holds,
        is_refutable(&reflexive_setup(&model), &only_bot)
            .unwrap()
            .holds,
    );
    let cmp = is_more_permissive(&reflexive_setup(&model), &coarse, &model, 12).unwrap();
    println!("reflexive at least as permissive as coarse: {}", cmp.holds);
}
