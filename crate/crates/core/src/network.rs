//! Analysis graphs built from validated answers.
//!
//! Node ids equal roster person ids, labels are pseudonyms. Tie-level
//! thresholds: acquaintance >= 2, partner >= 3 (both directed, unilateral),
//! friend = reciprocated >= 4.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AttrValue, Attributes, GraphError, SocialGraph};
use crate::survey::{AnswerRecord, ItemRole, PersonId, PersonProfile, Questionnaire, Roster};

pub const ACQUAINTANCE_MIN_WEIGHT: u8 = 2;
pub const PARTNER_MIN_WEIGHT: u8 = 3;
pub const FRIEND_MIN_WEIGHT: u8 = 4;

pub const FRIENDSHIP: &str = "friendship";
pub const ACQUAINTANCES: &str = "acquaintances";
pub const PARTNERS: &str = "partners";
pub const FRIENDS: &str = "friends";
pub const CONSUMPTION: &str = "consumption";

/// Every graph produced by the analysis, in listing order.
pub const NETWORK_NAMES: [&str; 5] = [FRIENDSHIP, ACQUAINTANCES, PARTNERS, FRIENDS, CONSUMPTION];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("questionnaire has no {0} question")]
    MissingQuestion(&'static str),
    #[error("answer of person {person} about {target} targets someone outside the roster")]
    UnknownTarget { person: PersonId, target: PersonId },
    #[error("answer from person {0}, who is not on the roster")]
    UnknownRespondent(PersonId),
    #[error("network answer of person {person} has no target")]
    MissingTarget { person: PersonId },
    #[error("friendship answer of person {person} about {target} has weight {value}, expected 1..=5")]
    InvalidWeight { person: PersonId, target: PersonId, value: String },
    #[error("consumption answer of person {person} about {target} is {value}, expected 0 or 1")]
    NonBoolean { person: PersonId, target: PersonId, value: String },
    #[error("no profile for node {0:?}")]
    MissingProfile(String),
}

pub fn roster_graph(roster: &Roster, name: &str, directed: bool, weighted: bool) -> Result<SocialGraph, NetworkError> {
    let mut g = SocialGraph::new(name, directed, weighted);
    for entry in &roster.entries {
        g.add_node(&entry.pseudonym, Attributes::new())?;
    }
    Ok(g)
}

fn network_answers<'a>(
    answers: &'a [AnswerRecord],
    roster: &Roster,
    question: &'a str,
) -> impl Iterator<Item = Result<(&'a AnswerRecord, PersonId), NetworkError>> + 'a {
    let n = roster.len();
    answers.iter().filter(move |a| a.question == question).map(move |a| {
        let target = a.target.ok_or(NetworkError::MissingTarget { person: a.person })?;
        if a.person.index() >= n {
            return Err(NetworkError::UnknownRespondent(a.person));
        }
        if target.index() >= n {
            return Err(NetworkError::UnknownTarget {
                person: a.person,
                target,
            });
        }
        Ok((a, target))
    })
}

fn question_id<'a>(questionnaire: &'a Questionnaire, role: ItemRole, what: &'static str) -> Result<&'a str, NetworkError> {
    questionnaire
        .with_role(&role)
        .map(|q| q.id.as_str())
        .ok_or(NetworkError::MissingQuestion(what))
}

/// Directed, weighted. Answers of weight 1 (and missing answers) mean no contact
/// and produce no tie.
pub fn build_friendship(
    answers: &[AnswerRecord],
    roster: &Roster,
    questionnaire: &Questionnaire,
) -> Result<SocialGraph, NetworkError> {
    let qid = question_id(questionnaire, ItemRole::FriendshipNetwork, "friendship")?;
    let mut g = roster_graph(roster, FRIENDSHIP, true, true)?;
    for item in network_answers(answers, roster, qid) {
        let (a, target) = item?;
        let weight = a
            .value
            .as_int()
            .and_then(|v| u8::try_from(v).ok())
            .filter(|w| (1..=5).contains(w))
            .ok_or_else(|| NetworkError::InvalidWeight {
                person: a.person,
                target,
                value: format!("{:?}", a.value),
            })?;
        if weight >= ACQUAINTANCE_MIN_WEIGHT {
            g.add_tie(a.person.index(), target.index(), Some(weight))?;
        }
    }
    Ok(g)
}

/// The five analysis graphs of a classroom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Networks {
    pub friendship: SocialGraph,
    pub acquaintances: SocialGraph,
    pub partners: SocialGraph,
    pub friends: SocialGraph,
    pub consumption: SocialGraph,
}

impl Networks {
    pub fn build(answers: &[AnswerRecord], roster: &Roster, questionnaire: &Questionnaire) -> Result<Networks, NetworkError> {
        let friendship = build_friendship(answers, roster, questionnaire)?;
        let levels = derive_tie_levels(&friendship)?;
        Ok(Networks {
            friendship,
            acquaintances: levels.acquaintances,
            partners: levels.partners,
            friends: levels.friends,
            consumption: build_consumption(answers, roster, questionnaire)?,
        })
    }

    pub fn get(&self, name: &str) -> Option<&SocialGraph> {
        self.iter().find(|(n, _)| *n == name).map(|(_, g)| g)
    }

    /// In [`NETWORK_NAMES`] order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &SocialGraph)> {
        [
            (FRIENDSHIP, &self.friendship),
            (ACQUAINTANCES, &self.acquaintances),
            (PARTNERS, &self.partners),
            (FRIENDS, &self.friends),
            (CONSUMPTION, &self.consumption),
        ]
        .into_iter()
    }

    pub fn try_map<E>(&self, mut f: impl FnMut(&SocialGraph) -> Result<SocialGraph, E>) -> Result<Networks, E> {
        Ok(Networks {
            friendship: f(&self.friendship)?,
            acquaintances: f(&self.acquaintances)?,
            partners: f(&self.partners)?,
            friends: f(&self.friends)?,
            consumption: f(&self.consumption)?,
        })
    }

    /// Directed graph of ties of weight 4 or more: who names whom as a friend.
    pub fn naming(&self) -> SocialGraph {
        self.friendship
            .filter_min_weight(FRIEND_MIN_WEIGHT)
            .expect("friendship graph is weighted")
    }

    pub fn node_count(&self) -> usize {
        self.friendship.node_count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TieLevels {
    pub acquaintances: SocialGraph,
    pub partners: SocialGraph,
    pub friends: SocialGraph,
}

pub fn derive_tie_levels(friendship: &SocialGraph) -> Result<TieLevels, NetworkError> {
    let mut acquaintances = friendship.filter_min_weight(ACQUAINTANCE_MIN_WEIGHT)?;
    acquaintances.set_name(ACQUAINTANCES);
    let mut partners = friendship.filter_min_weight(PARTNER_MIN_WEIGHT)?;
    partners.set_name(PARTNERS);
    let mut friends = friendship.mutual_projection(FRIEND_MIN_WEIGHT)?;
    friends.set_name(FRIENDS);
    Ok(TieLevels {
        acquaintances,
        partners,
        friends,
    })
}

/// Directed, unweighted: `u -> v` iff `u` would go out for a drink with `v`.
pub fn build_consumption(
    answers: &[AnswerRecord],
    roster: &Roster,
    questionnaire: &Questionnaire,
) -> Result<SocialGraph, NetworkError> {
    let qid = question_id(questionnaire, ItemRole::ConsumptionNetwork, "consumption")?;
    let mut g = roster_graph(roster, CONSUMPTION, true, false)?;
    for item in network_answers(answers, roster, qid) {
        let (a, target) = item?;
        match a.value.as_int() {
            Some(1) => g.add_tie(a.person.index(), target.index(), None)?,
            Some(0) => {}
            _ => {
                return Err(NetworkError::NonBoolean {
                    person: a.person,
                    target,
                    value: format!("{:?}", a.value),
                })
            }
        }
    }
    Ok(g)
}

/// Sets `gender`, `audit_zone`, `audit_score` and `fas_band` on every node.
/// Absent instrument results leave the matching attribute unset. Either all
/// nodes are updated or none.
pub fn attach_attributes(g: &SocialGraph, profiles: &[PersonProfile]) -> Result<SocialGraph, NetworkError> {
    let mut matched = Vec::with_capacity(g.node_count());
    for node in g.nodes() {
        let profile = profiles
            .iter()
            .find(|p| p.person.index() == node.id)
            .ok_or_else(|| NetworkError::MissingProfile(node.label.clone()))?;
        matched.push(profile);
    }
    let mut out = g.clone();
    for (id, p) in matched.into_iter().enumerate() {
        out.set_attr(id, "gender", AttrValue::Text(p.gender.as_str().to_owned()))?;
        if let Some(audit) = &p.audit {
            out.set_attr(id, "audit_zone", AttrValue::Text(audit.zone.roman().to_owned()))?;
            out.set_attr(id, "audit_score", AttrValue::Int(i64::from(audit.score)))?;
        }
        if let Some(fas) = &p.fas {
            out.set_attr(id, "fas_band", AttrValue::Text(fas.band.as_str().to_owned()))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::survey::{
        build_profiles, standard_questionnaire, AnswerValue, Gender, QuestionnaireEvent, RosterEntry,
    };

    fn roster(names: &[&str]) -> Roster {
        Roster {
            entries: names
                .iter()
                .enumerate()
                .map(|(i, n)| RosterEntry {
                    id: PersonId(i as u32),
                    pseudonym: n.to_string(),
                    age: Some(15),
                    gender: if i % 2 == 0 { Gender::Female } else { Gender::Male },
                    class: "1A".into(),
                })
                .collect(),
        }
    }

    fn net(question: &str, person: u32, target: u32, value: i64) -> AnswerRecord {
        AnswerRecord {
            person: PersonId(person),
            event: QuestionnaireEvent {
                questionnaire: "q".into(),
                date: NaiveDate::from_ymd_opt(2017, 3, 1).unwrap(),
            },
            question: question.into(),
            value: AnswerValue::Int(value),
            target: Some(PersonId(target)),
        }
    }

    #[test]
    fn friendship_weights() {
        let q = standard_questionnaire("q");
        let r = roster(&["A", "B", "C"]);
        let answers = [net("friendship", 0, 1, 4), net("friendship", 0, 2, 1), net("friendship", 1, 0, 5)];
        let g = build_friendship(&answers, &r, &q).unwrap();
        assert_eq!(g.tie(0, 1), Some(Some(4)));
        assert_eq!(g.tie(0, 2), None);
        // C answered nothing about anyone.
        assert_eq!(g.tie(2, 0), None);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.name(), "friendship");
    }

    #[test]
    fn tie_levels() {
        let q = standard_questionnaire("q");
        let r = roster(&["A", "B", "C", "D"]);
        let answers = [
            net("friendship", 0, 1, 4),
            net("friendship", 1, 0, 5),
            net("friendship", 1, 2, 3),
            net("friendship", 2, 1, 3),
            net("friendship", 2, 3, 2),
        ];
        let levels = derive_tie_levels(&build_friendship(&answers, &r, &q).unwrap()).unwrap();
        assert!(levels.friends.has_tie(0, 1));
        assert_eq!(levels.friends.tie_count(), 1);
        assert!(levels.partners.has_tie(1, 2) && levels.partners.has_tie(2, 1));
        assert!(!levels.friends.has_tie(1, 2));
        assert!(levels.acquaintances.has_tie(2, 3));
        assert!(!levels.acquaintances.has_tie(3, 2));
        assert!(!levels.partners.has_tie(2, 3));
        assert_eq!(
            [levels.acquaintances.name(), levels.partners.name(), levels.friends.name()],
            [ACQUAINTANCES, PARTNERS, FRIENDS]
        );
    }

    #[test]
    fn consumption() {
        let q = standard_questionnaire("q");
        let r = roster(&["A", "B"]);
        let g = build_consumption(&[net("consumption", 0, 1, 1), net("consumption", 1, 0, 0)], &r, &q).unwrap();
        assert!(g.has_tie(0, 1) && !g.has_tie(1, 0));
        assert!(!g.is_weighted());
        let none = build_consumption(&[], &r, &q).unwrap();
        assert_eq!((none.node_count(), none.tie_count()), (2, 0));
        assert!(matches!(
            build_consumption(&[net("consumption", 0, 1, 3)], &r, &q),
            Err(NetworkError::NonBoolean { .. })
        ));
        assert!(matches!(
            build_consumption(&[net("consumption", 0, 7, 1)], &r, &q),
            Err(NetworkError::UnknownTarget { .. })
        ));
    }

    #[test]
    fn attributes() {
        let q = standard_questionnaire("q");
        let r = roster(&["A", "B"]);
        let mut answers = Vec::new();
        for i in 1..=10 {
            let mut a = net("x", 0, 0, 1);
            a.question = format!("audit_{i}");
            a.target = None;
            answers.push(a);
        }
        let profiles = build_profiles(&r, &q, &answers);
        let g = build_friendship(&[], &r, &q).unwrap();
        let attributed = attach_attributes(&g, &profiles).unwrap();
        let a = &attributed.nodes()[0];
        assert_eq!(a.attrs["audit_zone"], AttrValue::Text("II".into()));
        assert_eq!(a.attrs["audit_score"], AttrValue::Int(10));
        assert_eq!(a.attrs["gender"], AttrValue::Text("female".into()));
        assert!(!attributed.nodes()[1].attrs.contains_key("audit_zone"));

        let err = attach_attributes(&g, &profiles[..1]).unwrap_err();
        assert_eq!(err, NetworkError::MissingProfile("B".into()));
    }
}
