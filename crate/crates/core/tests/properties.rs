//! Property tests over the survey, network, knowledge and profile layers.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use classnet_core::knowledge::{entity_ids, populate, run_rules, standard_rules, write_back_metrics, FactBatch};
use classnet_core::metrics::annotate;
use classnet_core::network::Networks;
use classnet_core::profile::{find_influencers, find_mediators, tertile_bands};
use classnet_core::study::{synthetic_classroom, Study};
use classnet_core::survey::{
    build_profiles, score_audit, score_kidscreen, standard_questionnaire, AnswerRecord, AnswerValue, PersonId,
    QuestionnaireEvent, Roster, RosterEntry,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn roster(n: usize) -> Roster {
    Roster {
        entries: (0..n)
            .map(|i| RosterEntry {
                id: PersonId(i as u32),
                pseudonym: format!("P{i}"),
                age: None,
                gender: Default::default(),
                class: String::new(),
            })
            .collect(),
    }
}

fn network_answers(question: &str, values: &[(usize, usize, i64)]) -> Vec<AnswerRecord> {
    let event = QuestionnaireEvent {
        questionnaire: "classnet".into(),
        date: NaiveDate::from_ymd_opt(2017, 3, 1).unwrap(),
    };
    values
        .iter()
        .map(|&(u, v, w)| AnswerRecord {
            person: PersonId(u as u32),
            event: event.clone(),
            question: question.into(),
            value: AnswerValue::Int(w),
            target: Some(PersonId(v as u32)),
        })
        .collect()
}

/// Random friendship weights; `None` means the pair was left unanswered.
fn weight_matrix() -> impl Strategy<Value = Vec<Vec<Option<i64>>>> {
    (2usize..9).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(proptest::option::of(1i64..=5), n), n))
}

fn random_batch(seed: u64) -> FactBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    let c = synthetic_classroom(n, seed).unwrap();
    let keep = rng.gen_range(0.3..=1.0);
    let answers: Vec<AnswerRecord> = c.answers.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    let profiles = build_profiles(&c.roster, &c.questionnaire, &answers);
    populate("School", &c.roster, &c.questionnaire, &answers, &profiles)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn friends_are_mutual_strong_ties(w in weight_matrix()) {
        let n = w.len();
        let mut values = Vec::new();
        for (u, row) in w.iter().enumerate() {
            for (v, x) in row.iter().enumerate() {
                if let (true, Some(x)) = (u != v, x) {
                    values.push((u, v, *x));
                }
            }
        }
        let q = standard_questionnaire("classnet");
        let nets = Networks::build(&network_answers("friendship", &values), &roster(n), &q).unwrap();
        let at = |u: usize, v: usize| w[u][v].filter(|_| u != v).unwrap_or(0);
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                prop_assert_eq!(nets.friends.has_tie(u, v), at(u, v) >= 4 && at(v, u) >= 4);
                prop_assert_eq!(nets.partners.has_tie(u, v), at(u, v) >= 3);
                prop_assert_eq!(nets.acquaintances.has_tie(u, v), at(u, v) >= 2);
                if nets.friends.has_tie(u, v) {
                    prop_assert!(nets.partners.has_tie(u, v) && nets.partners.has_tie(v, u));
                }
                if nets.partners.has_tie(u, v) {
                    prop_assert!(nets.acquaintances.has_tie(u, v));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rules_reach_an_order_independent_fixpoint(seed in any::<u64>(), shuffle in any::<u64>()) {
        let batch = random_batch(seed);
        let rules = standard_rules();
        let mut a = batch.load().unwrap();
        let report = run_rules(&mut a, &rules).unwrap();

        let again = run_rules(&mut a.clone(), &rules).unwrap();
        prop_assert!(again.is_empty());

        let mut shuffled = batch.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        shuffled.entities.shuffle(&mut rng);
        shuffled.assertions.shuffle(&mut rng);
        let mut b = shuffled.load().unwrap();
        run_rules(&mut b, &rules).unwrap();
        prop_assert_eq!(&a, &b);

        for d in &report.derived {
            let rule = rules.iter().find(|r| r.name == d.rule).unwrap();
            prop_assert!(rule.body_holds(&a, &d.binding), "{} fired without support", d.rule);
            prop_assert!(a.contains(&d.assertion));
        }
    }

    #[test]
    fn write_back_count_is_nodes_times_metrics_plus_graph_metrics(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let c = synthetic_classroom(n, seed).unwrap();
        let nets = Networks::build(&c.answers, &c.roster, &c.questionnaire).unwrap();
        let profiles = build_profiles(&c.roster, &c.questionnaire, &c.answers);
        let mut store = populate("School", &c.roster, &c.questionnaire, &c.answers, &profiles).load().unwrap();
        let persons: BTreeMap<usize, _> = c.roster.ids().map(|p| (p.index(), entity_ids::person(p))).collect();
        for (name, g) in nets.iter() {
            let before = store.entity_count();
            let written = write_back_metrics(&mut store, &annotate(g), &persons, &entity_ids::network(name)).unwrap();
            prop_assert_eq!(written, n * 7 + 6);
            prop_assert_eq!(store.entity_count() - before, n * 7 + 6);
        }
    }

    #[test]
    fn scores_ignore_item_order(items in proptest::collection::vec(0i64..=4, 10), k in proptest::collection::vec(1i64..=5, 27), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = items.clone();
        a.shuffle(&mut rng);
        prop_assert_eq!(score_audit(&items).unwrap().score, score_audit(&a).unwrap().score);
        let mut b = k.clone();
        b.shuffle(&mut rng);
        prop_assert_eq!(score_kidscreen(&k).unwrap().total, score_kidscreen(&b).unwrap().total);
    }

    #[test]
    fn bands_depend_on_ranks_only(values in proptest::collection::vec(-50i32..50, 1..40), scale in 1i32..20, shift in -100i32..100) {
        let x: Vec<f64> = values.iter().map(|&v| f64::from(v)).collect();
        let affine: Vec<f64> = x.iter().map(|v| v * f64::from(scale) + f64::from(shift)).collect();
        let cubed: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let bands = tertile_bands(&x);
        prop_assert_eq!(&bands, &tertile_bands(&affine));
        prop_assert_eq!(&bands, &tertile_bands(&cubed));
    }

    #[test]
    fn influencers_and_mediators_respect_their_gates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=10);
        let c = synthetic_classroom(n, seed).unwrap();
        let nets = Networks::build(&c.answers, &c.roster, &c.questionnaire).unwrap();
        let profiles = build_profiles(&c.roster, &c.questionnaire, &c.answers);
        for ego in c.roster.ids() {
            let own = profiles[ego.index()].audit.as_ref().map(|a| a.zone);
            for i in find_influencers(ego, &nets, &profiles).unwrap() {
                prop_assert!(own.is_some());
                prop_assert!(Some(i.zone) > own);
                prop_assert_ne!(i.person, ego);
            }
            for m in find_mediators(ego, &nets).unwrap() {
                prop_assert_ne!(m.person, ego);
                prop_assert!(m.share > 0.0);
            }
        }
    }

    #[test]
    fn bundles_round_trip(seed in any::<u64>()) {
        let c = synthetic_classroom(5, seed).unwrap();
        let mut s = Study::new("s", "Round trip", NaiveDate::from_ymd_opt(2017, 3, 1).unwrap(), seed);
        s.roster = c.roster;
        s.add_responses(&c.answers).unwrap();
        s.analyze().unwrap();
        prop_assert_eq!(Study::from_bundle(&s.to_bundle()).unwrap(), s);
    }
}
