use std::collections::BTreeSet;

use super::{Assertion, EntityId, EntityKind, Literal, Object, Predicate, Store, StoreError};
use crate::network::{ACQUAINTANCE_MIN_WEIGHT, NETWORK_NAMES};
use crate::survey::{AnswerRecord, AnswerValue as Value, ItemRole, PersonProfile, Questionnaire, Roster};

/// Naming scheme for entities created from study data.
pub mod entity_ids {
    use super::EntityId;
    use crate::survey::{AnswerRecord, PersonId, QuestionnaireEvent};

    pub fn person(id: PersonId) -> EntityId {
        EntityId(format!("person/{id}"))
    }

    pub fn network(name: &str) -> EntityId {
        EntityId(format!("network/{name}"))
    }

    pub fn school() -> EntityId {
        EntityId("school".into())
    }

    pub fn class(name: &str) -> EntityId {
        EntityId(format!("class/{name}"))
    }

    pub fn questionnaire(id: &str) -> EntityId {
        EntityId(format!("questionnaire/{id}"))
    }

    pub fn question(id: &str) -> EntityId {
        EntityId(format!("question/{id}"))
    }

    pub fn option(question: &str, value: i64) -> EntityId {
        EntityId(format!("option/{question}/{value}"))
    }

    pub fn event(e: &QuestionnaireEvent) -> EntityId {
        EntityId(format!("event/{}/{}", e.questionnaire, e.date.format("%Y-%m-%d")))
    }

    pub fn answer(a: &AnswerRecord) -> EntityId {
        let target = a.target.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        EntityId(format!(
            "answer/{}/{}/{}/{}",
            a.person,
            a.question,
            target,
            a.event.date.format("%Y-%m-%d")
        ))
    }
}

/// Entities and assertions to load into a store, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactBatch {
    pub entities: Vec<(EntityId, EntityKind)>,
    pub assertions: Vec<Assertion>,
}

impl FactBatch {
    fn entity(&mut self, id: EntityId, kind: EntityKind) -> EntityId {
        self.entities.push((id.clone(), kind));
        id
    }

    fn fact(&mut self, s: &EntityId, p: Predicate, o: impl Into<Object>) {
        self.assertions.push(Assertion::new(s, p, o));
    }

    pub fn load(&self) -> Result<Store, StoreError> {
        let mut store = Store::new();
        self.load_into(&mut store)?;
        Ok(store)
    }

    pub fn load_into(&self, store: &mut Store) -> Result<(), StoreError> {
        for (id, kind) in &self.entities {
            store.add_entity(id.clone(), *kind)?;
        }
        for a in &self.assertions {
            store.assert_fact(a.clone())?;
        }
        Ok(())
    }
}

fn int(v: impl Into<i64>) -> Object {
    Object::Literal(Literal::Int(v.into()))
}

fn text(s: &str) -> Object {
    Object::Literal(Literal::Str(s.to_owned()))
}

/// Facts describing a classroom study: school and class, people with their
/// scored instruments, the questionnaire with its options, events, answers
/// and the networks the questionnaire generates.
pub fn populate(
    school_name: &str,
    roster: &Roster,
    questionnaire: &Questionnaire,
    answers: &[AnswerRecord],
    profiles: &[PersonProfile],
) -> FactBatch {
    use Predicate::*;
    let mut b = FactBatch::default();

    let school = b.entity(entity_ids::school(), EntityKind::School);
    b.fact(&school, Name, text(school_name));
    let classes: BTreeSet<&str> = roster.entries.iter().map(|e| e.class.as_str()).filter(|c| !c.is_empty()).collect();
    for c in &classes {
        let id = b.entity(entity_ids::class(c), EntityKind::ClassOnSchool);
        b.fact(&id, Name, text(c));
        b.fact(&id, ClassOfSchool, school.clone());
    }

    for e in &roster.entries {
        let p = b.entity(entity_ids::person(e.id), EntityKind::Person);
        b.fact(&p, Name, text(&e.pseudonym));
        b.fact(&p, Gender, text(e.gender.as_str()));
        if let Some(age) = e.age {
            b.fact(&p, Age, int(age));
        }
        if !e.class.is_empty() {
            b.fact(&p, MemberOf, entity_ids::class(&e.class));
        }
    }
    for prof in profiles {
        let p = entity_ids::person(prof.person);
        if let Some(place) = &prof.place_of_birth {
            b.fact(&p, PlaceOfBirth, text(place));
        }
        if let Some(v) = prof.friends_outside {
            b.fact(&p, FriendsOutside, int(v));
        }
        if let Some(v) = prof.drinking_mates_outside {
            b.fact(&p, DrinkingMatesOutside, int(v));
        }
        if let Some(v) = prof.family_drinking_frequency {
            b.fact(&p, FamilyDrinkingFrequency, int(v));
        }
        if let Some(a) = &prof.audit {
            b.fact(&p, AuditScore, int(a.score));
            b.fact(&p, AuditZone, text(a.zone.roman()));
        }
        if let Some(f) = &prof.fas {
            b.fact(&p, FasScore, int(f.score));
            b.fact(&p, FasBand, text(f.band.as_str()));
        }
        if let Some(k) = &prof.kidscreen {
            b.fact(&p, KidscreenTotal, int(k.total));
        }
        if let Some(s) = prof.self_efficacy {
            b.fact(&p, SelfEfficacy, int(s));
        }
    }

    let qn = b.entity(entity_ids::questionnaire(&questionnaire.id), EntityKind::Questionnaire);
    b.fact(&qn, Title, text(&questionnaire.title));
    for name in NETWORK_NAMES {
        let net = b.entity(entity_ids::network(name), EntityKind::Network);
        b.fact(&net, NetworkName, text(name));
        b.fact(&qn, GeneratesNetwork, net);
    }
    for q in &questionnaire.questions {
        let kind = if q.is_network() {
            EntityKind::QuestionSNA
        } else {
            EntityKind::Question
        };
        let qid = b.entity(entity_ids::question(&q.id), kind);
        b.fact(&qn, HasQuestion, qid.clone());
        b.fact(&qid, QuestionText, text(&q.text));
        let generated = match q.role {
            ItemRole::FriendshipNetwork => Some(("friendship", i64::from(ACQUAINTANCE_MIN_WEIGHT))),
            ItemRole::ConsumptionNetwork => Some(("consumption", 1)),
            _ => None,
        };
        if let Some((net, threshold)) = generated {
            b.fact(&qid, GeneratesNetwork, entity_ids::network(net));
            b.fact(&qid, TieThreshold, int(threshold));
        }
        for o in &q.options {
            let oid = b.entity(entity_ids::option(&q.id, o.value), EntityKind::Answer);
            b.fact(&qid, HasOption, oid.clone());
            b.fact(&oid, OptionLabel, text(&o.label));
            b.fact(&oid, OptionValue, int(o.value));
        }
    }

    let events: BTreeSet<_> = answers.iter().map(|a| &a.event).collect();
    for e in events {
        let ev = b.entity(entity_ids::event(e), EntityKind::QuestionnairePastEvent);
        b.fact(&ev, OfQuestionnaire, entity_ids::questionnaire(&e.questionnaire));
        b.fact(&ev, EventDate, Literal::Date(e.date));
    }
    for a in answers {
        let aid = b.entity(entity_ids::answer(a), EntityKind::AnswerOfPersonToQuestion);
        let p = entity_ids::person(a.person);
        let ev = entity_ids::event(&a.event);
        b.fact(&p, AnsweredAt, ev.clone());
        b.fact(&p, Answered, aid.clone());
        b.fact(&aid, ToQuestion, entity_ids::question(&a.question));
        b.fact(&aid, InEvent, ev);
        match &a.value {
            Value::Int(v) => {
                b.fact(&aid, AnswerValue, int(*v));
                let has_option = questionnaire
                    .question(&a.question)
                    .is_some_and(|q| q.options.iter().any(|o| o.value == *v));
                if has_option {
                    b.fact(&aid, SelectedOption, entity_ids::option(&a.question, *v));
                }
            }
            Value::Text(s) => b.fact(&aid, AnswerValue, text(s)),
        }
        if let Some(t) = a.target {
            b.fact(&aid, AboutPerson, entity_ids::person(t));
        }
    }
    b
}
