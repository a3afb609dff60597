mod common;

use common::{members, Poset, Table};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use testability::algorithmic::{BoxEnumerator, Dovetail, Scripted, Step, Tail};
use testability::assumptions::{refutable_under, AssumptionContext};
use testability::eio::{build_universe, builtin_requirement, tk_setup, Builtin};
use testability::order::{classify, down_closure, up_closure, Requirement};
use testability::setup::{is_more_permissive, is_refutable};
use testability::temporal::LassoWord;

fn naive_unroll(stem: &str, cycle: &str, n: usize) -> String {
    stem.chars().chain(cycle.chars().cycle()).take(n).collect()
}

fn instance(seed: u64) -> (Poset, Table, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Poset::random(&mut rng, 2, 8);
    let t = Table::random(&mut rng, &p);
    (p, t, rng)
}

proptest! {
    #[test]
    fn lasso_canonical_form_keeps_the_word(stem in "[ab]{0,4}", cycle in "[ab]{1,4}") {
        let w = LassoWord::new(&stem, &cycle).unwrap();
        for n in 0..24 {
            prop_assert_eq!(w.unroll(n), naive_unroll(&stem, &cycle, n));
        }
        prop_assert!(w.stem().len() <= stem.len());
        prop_assert!(w.cycle().len() <= cycle.len());
        prop_assert_eq!(LassoWord::new(&w.stem(), &w.cycle()).unwrap(), w.clone());
        prop_assert_eq!(w.to_string().parse::<LassoWord>().unwrap(), w);
    }

    #[test]
    fn lassos_are_equal_iff_their_words_are(
        s1 in "[ab]{0,3}", c1 in "[ab]{1,3}", s2 in "[ab]{0,3}", c2 in "[ab]{1,3}",
    ) {
        let horizon = s1.len().max(s2.len()) + 2 * c1.len() * c2.len();
        let same = naive_unroll(&s1, &c1, horizon) == naive_unroll(&s2, &c2, horizon);
        prop_assert_eq!(LassoWord::new(&s1, &c1).unwrap() == LassoWord::new(&s2, &c2).unwrap(), same);
    }

    #[test]
    fn closures_match_the_relation(seed in any::<u64>()) {
        let (p, _, mut rng) = instance(seed);
        let model = p.model();
        let set = p.random_set(&mut rng);
        let r = p.requirement(&model, "R", &set);
        let up = up_closure(&model, &r).unwrap();
        let down = down_closure(&model, &r).unwrap();
        prop_assert_eq!(members(&p, &model, &up), p.up(&set));
        prop_assert_eq!(members(&p, &model, &down), p.down(&set));
        let again = up_closure(&model, &up).unwrap();
        prop_assert_eq!(again.members(), up.members());
        prop_assert!(r.is_subset(&up) && r.is_subset(&down));
    }

    #[test]
    fn semi_monotone_flips_at_most_twice_on_chains(seed in any::<u64>()) {
        let (p, _, mut rng) = instance(seed);
        let model = p.model();
        let set = p.random_set(&mut rng);
        let c = classify(&model, &p.requirement(&model, "R", &set)).unwrap();
        if !c.is_semi_monotone {
            return Ok(());
        }
        // Greedy maximal chains from bottom: always step to a cover.
        for start in 0..p.len() {
            let mut chain = vec![0];
            let mut cur = 0;
            let mut first = Some(start);
            while cur != p.len() - 1 {
                let covers: Vec<usize> = (0..p.len())
                    .filter(|&j| j != cur && p.leq[cur][j])
                    .filter(|&j| !(0..p.len()).any(|k| k != cur && k != j && p.leq[cur][k] && p.leq[k][j]))
                    .collect();
                cur = match first.take().filter(|s| covers.contains(s)) {
                    Some(s) => s,
                    None => covers[0],
                };
                chain.push(cur);
            }
            let flips = chain.windows(2).filter(|w| set[w[0]] != set[w[1]]).count();
            prop_assert!(flips <= 2, "chain {chain:?} flips {flips} times");
        }
    }

    #[test]
    fn refutable_under_everything_is_refutable(seed in any::<u64>()) {
        let (p, t, mut rng) = instance(seed);
        let model = p.model();
        let setup = t.setup(&p, &model);
        let r = p.requirement(&model, "R", &p.random_set(&mut rng));
        let all = Requirement::all(&model, "all");
        let under = refutable_under(&AssumptionContext::new(&setup, &r, &all).unwrap()).unwrap();
        prop_assert_eq!(under, is_refutable(&setup, &r).unwrap());
    }

    #[test]
    fn stronger_assumptions_keep_witnesses(seed in any::<u64>()) {
        let (p, t, mut rng) = instance(seed);
        let model = p.model();
        let setup = t.setup(&p, &model);
        let r = p.requirement(&model, "R", &p.random_set(&mut rng));
        let a2_set = p.random_set(&mut rng);
        let a1_set: Vec<bool> = a2_set.iter().map(|&x| x && rand::Rng::gen_bool(&mut rng, 0.6)).collect();
        let a1 = p.requirement(&model, "A1", &a1_set);
        let a2 = p.requirement(&model, "A2", &a2_set);
        let wide = refutable_under(&AssumptionContext::new(&setup, &r, &a2).unwrap()).unwrap();
        let narrow = refutable_under(&AssumptionContext::new(&setup, &r, &a1).unwrap()).unwrap();
        for s in a1.member_ids(&model) {
            if wide.witnesses.contains_key(s) {
                prop_assert!(narrow.witnesses.contains_key(s), "{s} lost its witness");
            }
        }
    }

    #[test]
    fn dovetail_follows_the_stage_schedule(yields in prop::collection::vec(1usize..8, 1..5)) {
        let enums: Vec<BoxEnumerator<usize>> = yields
            .iter()
            .enumerate()
            .map(|(i, &y)| Box::new(Scripted::yields_at(y, i, Tail::Stall)) as BoxEnumerator<usize>)
            .collect();
        let mut d = Dovetail::new(enums);

        // Independent replay: stage k gives k steps to each of the first k.
        let mut expected = vec![0usize; yields.len()];
        let mut own = vec![0usize; yields.len()];
        let mut tick = 0;
        let mut stage = 1;
        while expected.contains(&0) {
            for i in 0..stage.min(yields.len()) {
                for _ in 0..stage {
                    tick += 1;
                    own[i] += 1;
                    if own[i] == yields[i] {
                        expected[i] = tick;
                    }
                }
            }
            stage += 1;
        }
        let mut seen = vec![0usize; yields.len()];
        for t in 1..=tick {
            let step = d.tick().unwrap().unwrap();
            if let Step::Yielded(i) = step.step {
                prop_assert_eq!(step.source, i);
                seen[i] = t;
            }
        }
        prop_assert_eq!(seen, expected);
    }
}

#[test]
fn larger_tuples_refute_more() {
    let u = build_universe(2).unwrap();
    let t1 = tk_setup(&u, 1).unwrap();
    let t2 = tk_setup(&u, 2).unwrap();
    assert!(is_more_permissive(&t2, &t1, u.model(), 16).unwrap().holds);
    assert!(!is_more_permissive(&t1, &t2, u.model(), 16).unwrap().holds);
    let det = builtin_requirement(&u, Builtin::Determinism);
    assert!(!is_refutable(&t1, &det).unwrap().holds);
    assert!(is_refutable(&t2, &det).unwrap().holds);
}

#[test]
fn never_zero_odd_is_single_pair_refutable() {
    let u = build_universe(4).unwrap();
    let r = builtin_requirement(&u, Builtin::NeverZeroOdd);
    assert!(is_refutable(&tk_setup(&u, 1).unwrap(), &r).unwrap().holds);
}
