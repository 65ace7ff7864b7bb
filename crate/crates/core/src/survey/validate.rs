use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{AnswerRecord, PersonId, Questionnaire, Roster};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MissingItem {
    pub person: PersonId,
    pub question: String,
}

/// A record that cannot be used. `index` is its position in the submitted list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerIssue {
    pub index: usize,
    pub person: PersonId,
    pub question: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PersonId>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Duplicate {
    pub person: PersonId,
    pub question: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PersonId>,
    pub dates: Vec<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Roster members with no answer at all.
    pub missing_respondents: Vec<PersonId>,
    /// Unanswered non-network items of respondents. Network items may be
    /// left blank: a blank means no contact.
    pub missing_items: Vec<MissingItem>,
    pub unknown_targets: Vec<AnswerIssue>,
    pub duplicates: Vec<Duplicate>,
    pub invalid_answers: Vec<AnswerIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.missing_items.is_empty() && !self.is_blocking()
    }

    /// Whether the answers cannot be analyzed. Missing test items only void
    /// the affected instrument score.
    pub fn is_blocking(&self) -> bool {
        !(self.missing_respondents.is_empty()
            && self.unknown_targets.is_empty()
            && self.duplicates.is_empty()
            && self.invalid_answers.is_empty())
    }
}

pub fn validate_response_set(answers: &[AnswerRecord], roster: &Roster, questionnaire: &Questionnaire) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut answered: BTreeMap<PersonId, BTreeSet<&str>> = BTreeMap::new();
    let mut seen: BTreeMap<(PersonId, &str, Option<PersonId>), Vec<NaiveDate>> = BTreeMap::new();

    for (index, a) in answers.iter().enumerate() {
        let issue = |reason: &str| AnswerIssue {
            index,
            person: a.person,
            question: a.question.clone(),
            target: a.target,
            reason: reason.to_owned(),
        };
        if !roster.contains(a.person) {
            report.invalid_answers.push(issue("respondent is not on the roster"));
            continue;
        }
        if a.event.questionnaire != questionnaire.id {
            report.invalid_answers.push(issue("answer belongs to another questionnaire"));
            continue;
        }
        let Some(q) = questionnaire.question(&a.question) else {
            report.invalid_answers.push(issue("unknown question"));
            continue;
        };
        match (q.is_network(), a.target) {
            (true, None) => {
                report.invalid_answers.push(issue("network question answered without a target"));
                continue;
            }
            (false, Some(_)) => {
                report.invalid_answers.push(issue("target given for a non-network question"));
                continue;
            }
            (true, Some(t)) if t == a.person => {
                report.invalid_answers.push(issue("respondent named as their own target"));
                continue;
            }
            (true, Some(t)) if !roster.contains(t) => {
                report.unknown_targets.push(issue("target is not on the roster"));
                continue;
            }
            _ => {}
        }
        if !q.accepts(&a.value) {
            report.invalid_answers.push(issue("value is not an allowed option"));
            continue;
        }
        answered.entry(a.person).or_default().insert(q.id.as_str());
        seen.entry((a.person, q.id.as_str(), a.target)).or_default().push(a.event.date);
    }

    for ((person, question, target), mut dates) in seen {
        if dates.len() > 1 {
            dates.sort_unstable();
            report.duplicates.push(Duplicate {
                person,
                question: question.to_owned(),
                target,
                dates,
            });
        }
    }

    for id in roster.ids() {
        match answered.get(&id) {
            None => report.missing_respondents.push(id),
            Some(done) => {
                for q in questionnaire.questions.iter().filter(|q| !q.is_network()) {
                    if !done.contains(q.id.as_str()) {
                        report.missing_items.push(MissingItem {
                            person: id,
                            question: q.id.clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survey::{standard_questionnaire, AnswerValue, Gender, QuestionnaireEvent, RosterEntry};

    fn roster(n: u32) -> Roster {
        Roster {
            entries: (0..n)
                .map(|i| RosterEntry {
                    id: PersonId(i),
                    pseudonym: format!("P{i}"),
                    age: Some(15),
                    gender: Gender::Female,
                    class: "1A".into(),
                })
                .collect(),
        }
    }

    fn event(day: u32) -> QuestionnaireEvent {
        QuestionnaireEvent {
            questionnaire: "q".into(),
            date: NaiveDate::from_ymd_opt(2017, 3, day).unwrap(),
        }
    }

    fn complete(n: u32) -> Vec<AnswerRecord> {
        let q = standard_questionnaire("q");
        let mut out = Vec::new();
        for p in 0..n {
            for question in &q.questions {
                let value = match question.kind {
                    crate::survey::QuestionKind::Text => AnswerValue::Text("Granada".into()),
                    crate::survey::QuestionKind::Numeric => AnswerValue::Int(2),
                    _ => AnswerValue::Int(question.options[0].value),
                };
                if question.is_network() {
                    for t in (0..n).filter(|&t| t != p) {
                        out.push(AnswerRecord {
                            person: PersonId(p),
                            event: event(1),
                            question: question.id.clone(),
                            value: value.clone(),
                            target: Some(PersonId(t)),
                        });
                    }
                } else {
                    out.push(AnswerRecord {
                        person: PersonId(p),
                        event: event(1),
                        question: question.id.clone(),
                        value,
                        target: None,
                    });
                }
            }
        }
        out
    }

    #[test]
    fn complete_set_is_clean() {
        let report = validate_response_set(&complete(3), &roster(3), &standard_questionnaire("q"));
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn flags_problems() {
        let q = standard_questionnaire("q");
        let mut answers = complete(3);
        let mut unknown = answers.iter().find(|a| a.question == "friendship").unwrap().clone();
        unknown.target = Some(PersonId(9));
        answers.push(unknown);
        let mut dup = answers[0].clone();
        dup.event = event(8);
        answers.push(dup);
        answers.retain(|a| !(a.person == PersonId(1) && a.question == "audit_3"));
        let mut own = answers.iter().find(|a| a.question == "friendship").unwrap().clone();
        own.target = Some(own.person);
        answers.push(own);

        let report = validate_response_set(&answers, &roster(4), &q);
        assert_eq!(report.missing_respondents, vec![PersonId(3)]);
        assert_eq!(report.unknown_targets.len(), 1);
        assert_eq!(report.duplicates.len(), 1);
        assert_eq!(report.duplicates[0].dates.len(), 2);
        assert_eq!(
            report.missing_items,
            vec![MissingItem {
                person: PersonId(1),
                question: "audit_3".into()
            }]
        );
        assert_eq!(report.invalid_answers.len(), 1);
        assert!(report.is_blocking());
    }

    #[test]
    fn missing_items_alone_do_not_block() {
        let mut answers = complete(2);
        answers.retain(|a| a.question != "kidscreen_5");
        let report = validate_response_set(&answers, &roster(2), &standard_questionnaire("q"));
        assert!(!report.is_blocking());
        assert_eq!(report.missing_items.len(), 2);
    }
}
