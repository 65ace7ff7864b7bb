use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    score_audit, score_fas, score_kidscreen, AnswerRecord, AnswerValue, AuditResult, FasItem, FasResult, Gender,
    ItemRole, KidscreenResult, PersonId, Questionnaire, Roster, AUDIT_ITEMS, KIDSCREEN_ITEMS,
};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DrinkingHabits {
    pub first_drink_age: Option<u32>,
    /// AUDIT item 1 value (0 never .. 4 four or more times a week).
    pub frequency: Option<u8>,
    /// AUDIT item 2 value (0 one or two .. 4 ten or more).
    pub drinks_per_occasion: Option<u8>,
    /// `usual_place` option value; 0 means the person does not drink.
    pub usual_place: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonProfile {
    pub person: PersonId,
    pub pseudonym: String,
    pub age: Option<u32>,
    pub gender: Gender,
    pub class: String,
    pub place_of_birth: Option<String>,
    pub friends_outside: Option<u32>,
    pub drinking_mates_outside: Option<u32>,
    /// 0 never, 1 less than monthly, 2 monthly, 3 weekly, 4 daily or almost daily.
    pub family_drinking_frequency: Option<u8>,
    pub audit: Option<AuditResult>,
    pub fas: Option<FasResult>,
    pub kidscreen: Option<KidscreenResult>,
    pub self_efficacy: Option<u32>,
    /// Raw ESTUDES answers by substance.
    pub estudes: BTreeMap<String, i64>,
    pub habits: DrinkingHabits,
    /// Human-readable notes about voided or incomplete results.
    pub flags: Vec<String>,
}

impl PersonProfile {
    /// Substances reported with any use.
    pub fn estudes_flags(&self) -> BTreeSet<&str> {
        self.estudes
            .iter()
            .filter(|(_, v)| **v > 0)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Collects every answer of one person by role. Answers are assumed to be
/// validated; with several records for a question the earliest event wins.
struct PersonAnswers<'a> {
    by_role: BTreeMap<&'a ItemRole, &'a AnswerValue>,
}

impl<'a> PersonAnswers<'a> {
    fn int(&self, role: &ItemRole) -> Option<i64> {
        self.by_role.get(role).and_then(|v| v.as_int())
    }

    fn count(&self, role: &ItemRole) -> Option<u32> {
        self.int(role).and_then(|v| u32::try_from(v).ok())
    }

    fn small(&self, role: &ItemRole) -> Option<u8> {
        self.int(role).and_then(|v| u8::try_from(v).ok())
    }

    fn items(&self, roles: impl Iterator<Item = ItemRole>) -> Result<Vec<i64>, usize> {
        let mut values = Vec::new();
        let mut missing = 0;
        for role in roles {
            match self.int(&role) {
                Some(v) => values.push(v),
                None => missing += 1,
            }
        }
        if missing == 0 {
            Ok(values)
        } else {
            Err(missing)
        }
    }
}

fn instrument<T, E: std::fmt::Display>(
    name: &str,
    items: Result<Vec<i64>, usize>,
    score: impl FnOnce(&[i64]) -> Result<T, E>,
    flags: &mut Vec<String>,
) -> Option<T> {
    match items {
        Ok(values) => match score(&values) {
            Ok(r) => Some(r),
            Err(e) => {
                flags.push(format!("{name}: {e}"));
                None
            }
        },
        Err(missing) => {
            flags.push(format!("{name}: {missing} item(s) unanswered, result withheld"));
            None
        }
    }
}

/// One profile per roster member, in roster order.
pub fn build_profiles(roster: &Roster, questionnaire: &Questionnaire, answers: &[AnswerRecord]) -> Vec<PersonProfile> {
    let mut sorted: Vec<&AnswerRecord> = answers.iter().filter(|a| a.target.is_none()).collect();
    sorted.sort_by(|a, b| (a.person, &a.event, &a.question).cmp(&(b.person, &b.event, &b.question)));
    let mut per_person: BTreeMap<PersonId, PersonAnswers> = BTreeMap::new();
    for a in sorted {
        let Some(q) = questionnaire.question(&a.question) else {
            continue;
        };
        per_person
            .entry(a.person)
            .or_insert_with(|| PersonAnswers { by_role: BTreeMap::new() })
            .by_role
            .entry(&q.role)
            .or_insert(&a.value);
    }
    let empty = PersonAnswers { by_role: BTreeMap::new() };

    roster
        .entries
        .iter()
        .map(|entry| {
            let ans = per_person.get(&entry.id).unwrap_or(&empty);
            let mut flags = Vec::new();
            let has = |pred: fn(&ItemRole) -> bool| questionnaire.questions.iter().any(|q| pred(&q.role));

            let audit = if has(|r| matches!(r, ItemRole::Audit { .. })) {
                let items = ans.items((1..=AUDIT_ITEMS as u8).map(|item| ItemRole::Audit { item }));
                instrument("AUDIT", items, score_audit, &mut flags)
            } else {
                None
            };
            let fas = if has(|r| matches!(r, ItemRole::Fas { .. })) {
                let items = ans.items(FasItem::ALL.into_iter().map(|item| ItemRole::Fas { item }));
                instrument("FAS II", items, score_fas, &mut flags)
            } else {
                None
            };
            let kidscreen = if has(|r| matches!(r, ItemRole::Kidscreen { .. })) {
                let items = ans.items((1..=KIDSCREEN_ITEMS as u8).map(|item| ItemRole::Kidscreen { item }));
                instrument("KIDSCREEN-27", items, score_kidscreen, &mut flags)
            } else {
                None
            };

            let efficacy_roles: Vec<ItemRole> = questionnaire
                .questions
                .iter()
                .filter(|q| matches!(q.role, ItemRole::SelfEfficacy { .. }))
                .map(|q| q.role.clone())
                .collect();
            let self_efficacy = if efficacy_roles.is_empty() {
                None
            } else {
                instrument(
                    "self-efficacy",
                    ans.items(efficacy_roles.into_iter()),
                    |v: &[i64]| Ok::<u32, String>(v.iter().sum::<i64>() as u32),
                    &mut flags,
                )
            };

            let estudes = ans
                .by_role
                .iter()
                .filter_map(|(role, value)| match (role, value.as_int()) {
                    (ItemRole::Estudes { substance }, Some(v)) => Some((substance.clone(), v)),
                    _ => None,
                })
                .collect();

            let place_of_birth = match ans.by_role.get(&ItemRole::PlaceOfBirth) {
                Some(AnswerValue::Text(s)) if !s.trim().is_empty() => Some(s.trim().to_owned()),
                _ => None,
            };

            PersonProfile {
                person: entry.id,
                pseudonym: entry.pseudonym.clone(),
                age: entry.age,
                gender: entry.gender,
                class: entry.class.clone(),
                place_of_birth,
                friends_outside: ans.count(&ItemRole::FriendsOutside),
                drinking_mates_outside: ans.count(&ItemRole::DrinkingMatesOutside),
                family_drinking_frequency: ans.small(&ItemRole::FamilyDrinkingFrequency),
                audit,
                fas,
                kidscreen,
                self_efficacy,
                estudes,
                habits: DrinkingHabits {
                    first_drink_age: ans.count(&ItemRole::FirstDrinkAge),
                    frequency: ans.small(&ItemRole::Audit { item: 1 }),
                    drinks_per_occasion: ans.small(&ItemRole::Audit { item: 2 }),
                    usual_place: ans.small(&ItemRole::UsualPlace),
                },
                flags,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::survey::{standard_questionnaire, AuditZone, QuestionnaireEvent, RosterEntry};

    fn answer(person: u32, question: &str, value: AnswerValue) -> AnswerRecord {
        AnswerRecord {
            person: PersonId(person),
            event: QuestionnaireEvent {
                questionnaire: "q".into(),
                date: NaiveDate::from_ymd_opt(2017, 3, 1).unwrap(),
            },
            question: question.into(),
            value,
            target: None,
        }
    }

    fn roster() -> Roster {
        Roster {
            entries: vec![RosterEntry {
                id: PersonId(0),
                pseudonym: "Barron".into(),
                age: Some(15),
                gender: Gender::Female,
                class: "3B".into(),
            }],
        }
    }

    #[test]
    fn scores_and_habits() {
        let q = standard_questionnaire("q");
        let mut answers = Vec::new();
        for (i, v) in [2, 2, 1, 1, 1, 1, 1, 1, 0, 0].iter().enumerate() {
            answers.push(answer(0, &format!("audit_{}", i + 1), AnswerValue::Int(*v)));
        }
        for (id, v) in [("fas_car", 1), ("fas_bedroom", 1), ("fas_holidays", 2), ("fas_computers", 3)] {
            answers.push(answer(0, id, AnswerValue::Int(v)));
        }
        answers.push(answer(0, "first_drink_age", AnswerValue::Int(14)));
        answers.push(answer(0, "place_of_birth", AnswerValue::Text("Murcia".into())));
        answers.push(answer(0, "estudes_tobacco", AnswerValue::Int(2)));
        answers.push(answer(0, "estudes_cannabis", AnswerValue::Int(0)));

        let p = &build_profiles(&roster(), &q, &answers)[0];
        let audit = p.audit.as_ref().unwrap();
        assert_eq!((audit.score, audit.zone), (10, AuditZone::II));
        assert_eq!(p.fas.unwrap().score, 7);
        assert_eq!(p.habits.first_drink_age, Some(14));
        assert_eq!(p.habits.frequency, Some(2));
        assert_eq!(p.place_of_birth.as_deref(), Some("Murcia"));
        assert_eq!(p.estudes_flags().into_iter().collect::<Vec<_>>(), vec!["tobacco"]);
        // No KIDSCREEN or self-efficacy answers: withheld and flagged.
        assert!(p.kidscreen.is_none());
        assert!(p.self_efficacy.is_none());
        assert_eq!(p.flags.len(), 2);
    }

    #[test]
    fn missing_audit_item_voids_the_score() {
        let q = standard_questionnaire("q");
        let answers: Vec<_> = (1..=9).map(|i| answer(0, &format!("audit_{i}"), AnswerValue::Int(4))).collect();
        let p = &build_profiles(&roster(), &q, &answers)[0];
        assert!(p.audit.is_none());
        assert!(p.flags.iter().any(|f| f.starts_with("AUDIT: 1 item")));
    }
}
