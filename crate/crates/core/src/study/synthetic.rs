//! Seeded synthetic classrooms for demos, benchmarks and tests.

use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::anonymize::{anonymize, AnonymizeError};
use crate::survey::{
    standard_questionnaire, AnswerRecord, AnswerValue, Gender, ItemRole, PersonId, Question, QuestionKind,
    Questionnaire, QuestionnaireEvent, Roster, RosterEntry,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticClassroom {
    pub roster: Roster,
    pub questionnaire: Questionnaire,
    pub answers: Vec<AnswerRecord>,
}

const TOWNS: [&str; 4] = ["Murcia", "Cartagena", "Lorca", "Molina de Segura"];
const GROUP_SIZE: usize = 5;

struct Student {
    group: usize,
    /// 0 abstains, 3 drinks heavily.
    drinking: i64,
}

fn pick(rng: &mut ChaCha8Rng, q: &Question) -> i64 {
    q.options[rng.gen_range(0..q.options.len())].value
}

fn audit_item(rng: &mut ChaCha8Rng, q: &Question, drinking: i64) -> i64 {
    let values: Vec<i64> = q.options.iter().map(|o| o.value).collect();
    let top = values.len() as i64 - 1;
    let centre = (drinking * top + 1) / 3;
    let idx = (centre + rng.gen_range(-1..=1)).clamp(0, top);
    if drinking == 0 {
        values[0]
    } else {
        values[idx as usize]
    }
}

/// A complete response set for `n` students answering the standard
/// questionnaire. Students fall into small groups with strong ties inside
/// and weak ties across; drinking levels are shared loosely within groups.
pub fn synthetic_classroom(n: usize, seed: u64) -> Result<SyntheticClassroom, AnonymizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("Student {i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pseudonyms = anonymize(&refs, seed)?;
    let group_levels: Vec<i64> = (0..n.div_ceil(GROUP_SIZE)).map(|_| rng.gen_range(0..=3)).collect();

    let mut entries = Vec::with_capacity(n);
    let mut students = Vec::with_capacity(n);
    for (i, pseudonym) in pseudonyms.into_iter().enumerate() {
        let group = i / GROUP_SIZE;
        let drinking = (group_levels[group] + rng.gen_range(-1..=1)).clamp(0, 3);
        entries.push(RosterEntry {
            id: PersonId(i as u32),
            pseudonym,
            age: Some(rng.gen_range(15..=19)),
            gender: if rng.gen_bool(0.5) { Gender::Female } else { Gender::Male },
            class: "1A".into(),
        });
        students.push(Student { group, drinking });
    }

    let questionnaire = standard_questionnaire("classnet");
    let event = QuestionnaireEvent {
        questionnaire: questionnaire.id.clone(),
        date: NaiveDate::from_ymd_opt(2017, 3, 1).expect("valid date"),
    };
    let mut answers = Vec::new();
    for (p, me) in students.iter().enumerate() {
        let mut push = |question: &str, value: AnswerValue, target: Option<usize>| {
            answers.push(AnswerRecord {
                person: PersonId(p as u32),
                event: event.clone(),
                question: question.to_owned(),
                value,
                target: target.map(|t| PersonId(t as u32)),
            })
        };
        for q in &questionnaire.questions {
            match &q.role {
                ItemRole::FriendshipNetwork => {
                    for (t, other) in students.iter().enumerate().filter(|(t, _)| *t != p) {
                        let w = if other.group == me.group {
                            rng.gen_range(3..=5)
                        } else if rng.gen_bool(0.15) {
                            rng.gen_range(2..=4)
                        } else {
                            1
                        };
                        push(&q.id, AnswerValue::Int(w), Some(t));
                    }
                }
                ItemRole::ConsumptionNetwork => {
                    for (t, other) in students.iter().enumerate().filter(|(t, _)| *t != p) {
                        let together = me.drinking > 0 && other.drinking > 0 && other.group == me.group;
                        let yes = together && rng.gen_bool(0.7);
                        push(&q.id, AnswerValue::Int(i64::from(yes)), Some(t));
                    }
                }
                ItemRole::Audit { .. } => {
                    let v = audit_item(&mut rng, q, me.drinking);
                    push(&q.id, AnswerValue::Int(v), None);
                }
                ItemRole::UsualPlace => {
                    let v = if me.drinking == 0 { 0 } else { rng.gen_range(1..=5) };
                    push(&q.id, AnswerValue::Int(v), None);
                }
                ItemRole::FirstDrinkAge => {
                    if me.drinking > 0 {
                        push(&q.id, AnswerValue::Int(rng.gen_range(12..=16)), None);
                    }
                }
                ItemRole::PlaceOfBirth => {
                    push(&q.id, AnswerValue::Text(TOWNS[rng.gen_range(0..TOWNS.len())].into()), None);
                }
                ItemRole::FriendsOutside => push(&q.id, AnswerValue::Int(rng.gen_range(0..=10)), None),
                ItemRole::DrinkingMatesOutside => {
                    push(&q.id, AnswerValue::Int(rng.gen_range(0..=3) * me.drinking), None)
                }
                _ => match q.kind {
                    QuestionKind::Numeric => push(&q.id, AnswerValue::Int(rng.gen_range(0..=5)), None),
                    QuestionKind::Text => push(&q.id, AnswerValue::Text("-".into()), None),
                    _ => {
                        let v = pick(&mut rng, q);
                        push(&q.id, AnswerValue::Int(v), None)
                    }
                },
            }
        }
    }
    Ok(SyntheticClassroom {
        roster: Roster { entries },
        questionnaire,
        answers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survey::validate_response_set;

    #[test]
    fn valid_and_reproducible() {
        let c = synthetic_classroom(38, 11).unwrap();
        assert_eq!(c, synthetic_classroom(38, 11).unwrap());
        assert_eq!(c.roster.len(), 38);
        let report = validate_response_set(&c.answers, &c.roster, &c.questionnaire);
        assert!(!report.is_blocking(), "{report:?}");
    }
}
