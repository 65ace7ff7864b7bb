//! Questionnaire definition, answer capture, roster handling and instrument
//! scoring.

mod instruments;
mod profiles;
mod questionnaire;
mod validate;

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use instruments::{
    score_audit, score_fas, score_kidscreen, AuditResult, AuditZone, FasBand, FasResult, KidscreenResult,
    KidscreenScale, ScoreError, AUDIT_ITEMS, FAS_RANGES, KIDSCREEN_ITEMS,
};
pub use profiles::{build_profiles, DrinkingHabits, PersonProfile};
pub use questionnaire::{standard_questionnaire, FasItem, TIE_SCALE};
pub use validate::{validate_response_set, AnswerIssue, Duplicate, MissingItem, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PersonId(pub u32);

impl PersonId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Female,
    Male,
    #[default]
    Unspecified,
}

impl Gender {
    pub fn parse(s: &str) -> Gender {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "female" | "girl" | "woman" => Gender::Female,
            "m" | "male" | "boy" | "man" => Gender::Male,
            _ => Gender::Unspecified,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Unspecified => "unspecified",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub id: PersonId,
    pub pseudonym: String,
    #[serde(default)]
    pub age: Option<u32>,
    #[serde(default)]
    pub gender: Gender,
    #[serde(default)]
    pub class: String,
}

/// Study participants. Ids are dense: entry `i` has id `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Roster {
    pub entries: Vec<RosterEntry>,
}

impl Roster {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: PersonId) -> Option<&RosterEntry> {
        self.entries.get(id.index())
    }

    pub fn contains(&self, id: PersonId) -> bool {
        id.index() < self.entries.len()
    }

    pub fn by_pseudonym(&self, pseudonym: &str) -> Option<&RosterEntry> {
        self.entries.iter().find(|e| e.pseudonym == pseudonym)
    }

    pub fn ids(&self) -> impl Iterator<Item = PersonId> + '_ {
        self.entries.iter().map(|e| e.id)
    }
}

/// One row of an uploaded roster CSV (`pseudonym,full_name,age,gender,class`).
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct RosterRow {
    #[serde(default)]
    pub pseudonym: String,
    #[serde(default)]
    pub full_name: String,
    #[serde(default, deserialize_with = "csv::invalid_option")]
    pub age: Option<u32>,
    #[serde(default)]
    pub gender: String,
    #[serde(default)]
    pub class: String,
}

#[derive(Debug, Error)]
pub enum RosterError {
    #[error("roster CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("roster row {row}: {message}")]
    Row { row: usize, message: String },
}

pub fn parse_roster_csv(text: &str) -> Result<Vec<RosterRow>, RosterError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<RosterRow>().enumerate() {
        let row = row?;
        if row.pseudonym.is_empty() && row.full_name.is_empty() {
            return Err(RosterError::Row {
                row: i + 2,
                message: "either pseudonym or full_name is required".into(),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionKind {
    Choice,
    Likert,
    Numeric,
    Text,
    NetworkGenerating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerOption {
    pub label: String,
    pub value: i64,
}

/// What an item feeds in the analysis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ItemRole {
    /// Items 1 and 2 also provide drinking frequency and drinks per occasion.
    Audit { item: u8 },
    Fas { item: FasItem },
    Kidscreen { item: u8 },
    Estudes { substance: String },
    SelfEfficacy { item: u8 },
    FriendshipNetwork,
    ConsumptionNetwork,
    PlaceOfBirth,
    FriendsOutside,
    DrinkingMatesOutside,
    FamilyDrinkingFrequency,
    FirstDrinkAge,
    UsualPlace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub text: String,
    pub kind: QuestionKind,
    #[serde(default)]
    pub options: Vec<AnswerOption>,
    #[serde(default)]
    pub repeat_over_roster: bool,
    #[serde(flatten)]
    pub role: ItemRole,
}

impl Question {
    pub fn is_network(&self) -> bool {
        self.kind == QuestionKind::NetworkGenerating
    }

    pub fn accepts(&self, value: &AnswerValue) -> bool {
        match (self.kind, value) {
            (QuestionKind::Text, AnswerValue::Text(_)) => true,
            (QuestionKind::Numeric, AnswerValue::Int(v)) => *v >= 0,
            (_, AnswerValue::Int(v)) => self.options.iter().any(|o| o.value == *v),
            _ => false,
        }
    }

    pub fn option_label(&self, value: i64) -> Option<&str> {
        self.options.iter().find(|o| o.value == value).map(|o| o.label.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Questionnaire {
    pub id: String,
    pub title: String,
    pub questions: Vec<Question>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuestionnaireError {
    #[error("duplicate question id {0:?}")]
    DuplicateQuestion(String),
    #[error("question {0:?}: network-generating questions must repeat over the roster, and only they may")]
    RosterRepeat(String),
    #[error("question {0:?}: the friendship question must use the five-level contact scale")]
    TieScale(String),
    #[error("question {0:?}: the consumption question must be a yes/no (1/0) item")]
    YesNoScale(String),
    #[error("question {0:?}: choice and Likert questions need options")]
    NoOptions(String),
}

impl Questionnaire {
    pub fn question(&self, id: &str) -> Option<&Question> {
        self.questions.iter().find(|q| q.id == id)
    }

    pub fn with_role(&self, role: &ItemRole) -> Option<&Question> {
        self.questions.iter().find(|q| &q.role == role)
    }

    pub fn validate(&self) -> Result<(), QuestionnaireError> {
        let mut seen = std::collections::BTreeSet::new();
        for q in &self.questions {
            if !seen.insert(q.id.as_str()) {
                return Err(QuestionnaireError::DuplicateQuestion(q.id.clone()));
            }
            if q.is_network() != q.repeat_over_roster {
                return Err(QuestionnaireError::RosterRepeat(q.id.clone()));
            }
            if matches!(q.kind, QuestionKind::Choice | QuestionKind::Likert) && q.options.is_empty() {
                return Err(QuestionnaireError::NoOptions(q.id.clone()));
            }
            match q.role {
                ItemRole::FriendshipNetwork => {
                    let values: Vec<i64> = q.options.iter().map(|o| o.value).collect();
                    if !q.is_network() || values != [1, 2, 3, 4, 5] {
                        return Err(QuestionnaireError::TieScale(q.id.clone()));
                    }
                }
                ItemRole::ConsumptionNetwork => {
                    let mut values: Vec<i64> = q.options.iter().map(|o| o.value).collect();
                    values.sort_unstable();
                    if !q.is_network() || values != [0, 1] {
                        return Err(QuestionnaireError::YesNoScale(q.id.clone()));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// A questionnaire completed at a certain date.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuestionnaireEvent {
    pub questionnaire: String,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnswerValue {
    Int(i64),
    Text(String),
}

impl AnswerValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            AnswerValue::Int(v) => Some(*v),
            AnswerValue::Text(_) => None,
        }
    }
}

/// One person's answer to one question at one questionnaire event. Network
/// questions carry the classmate the answer is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnswerRecord {
    pub person: PersonId,
    pub event: QuestionnaireEvent,
    pub question: String,
    pub value: AnswerValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PersonId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roster_csv() {
        let rows = parse_roster_csv("pseudonym,full_name,age,gender,class\n,Ana Pérez,17,F,1A\nGay,,x,M,1A\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].full_name, "Ana Pérez");
        assert_eq!(rows[0].age, Some(17));
        assert_eq!(rows[1].age, None);
        assert!(parse_roster_csv("pseudonym,full_name,age,gender,class\n,,17,F,1A\n").is_err());
    }

    #[test]
    fn standard_questionnaire_is_valid() {
        let q = standard_questionnaire("q1");
        q.validate().unwrap();
        let friendship = q.with_role(&ItemRole::FriendshipNetwork).unwrap();
        assert!(friendship.repeat_over_roster);
        assert_eq!(friendship.options.len(), 5);
    }

    #[test]
    fn questionnaire_invariants_rejected() {
        let mut q = standard_questionnaire("q1");
        let i = q.questions.iter().position(|q| q.role == ItemRole::FriendshipNetwork).unwrap();
        q.questions[i].options.pop();
        assert!(matches!(q.validate(), Err(QuestionnaireError::TieScale(_))));

        let mut q = standard_questionnaire("q1");
        q.questions[0].repeat_over_roster = true;
        assert!(matches!(q.validate(), Err(QuestionnaireError::RosterRepeat(_))));
    }

    #[test]
    fn answer_record_json() {
        let json = r#"{"person":3,"event":{"questionnaire":"q1","date":"2017-03-01"},"question":"friendship","value":4,"target":5}"#;
        let a: AnswerRecord = serde_json::from_str(json).unwrap();
        assert_eq!(a.target, Some(PersonId(5)));
        assert_eq!(a.value, AnswerValue::Int(4));
        assert_eq!(serde_json::to_string(&a).unwrap(), json);
    }
}
