//! Typed fact store over people, questionnaires and network analysis, with
//! a forward-chaining rule engine and metric write-back.

mod facts;
mod populate;
mod rules;
mod writeback;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use facts::{parse_fact_file, write_fact_file, FactFileError};
pub use populate::{entity_ids, populate, FactBatch};
pub use rules::{run_rules, standard_rules, Cmp, Derivation, DerivationReport, Guard, HeadTemplate, Rule, RuleError};
pub use writeback::{concept_id, write_back_metrics, WriteBackError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

impl EntityId {
    pub fn new(s: impl Into<String>) -> Self {
        EntityId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_owned())
    }
}

macro_rules! entity_kinds {
    ($($kind:ident),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum EntityKind {
            $($kind),*
        }

        impl EntityKind {
            pub const ALL: &'static [EntityKind] = &[$(EntityKind::$kind),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(EntityKind::$kind => stringify!($kind)),*
                }
            }

            pub fn parse(s: &str) -> Option<EntityKind> {
                match s {
                    $(stringify!($kind) => Some(EntityKind::$kind),)*
                    _ => None,
                }
            }
        }
    };
}

entity_kinds!(
    Person,
    ClassOnSchool,
    School,
    Course,
    CourseLevel,
    GroupOfClass,
    AcademicCategory,
    Questionnaire,
    Question,
    QuestionSNA,
    QuestionnairePastEvent,
    Answer,
    AnswerOfPersonToQuestion,
    Network,
    SNAConcept,
    SNACharacteristic,
    Relationship,
);

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a predicate's object must be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Range {
    Entity(&'static [EntityKind]),
    Str,
    Int,
    Real,
    Date,
    /// Any literal (answer values are numbers or free text).
    Literal,
}

macro_rules! predicates {
    ($($var:ident => $name:literal, [$($dom:ident),*], $range:expr;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum Predicate {
            $($var),*
        }

        impl Predicate {
            pub const ALL: &'static [Predicate] = &[$(Predicate::$var),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Predicate::$var => $name),*
                }
            }

            pub fn parse(s: &str) -> Result<Predicate, StoreError> {
                match s {
                    $($name => Ok(Predicate::$var),)*
                    _ => Err(StoreError::UnknownPredicate(s.to_owned())),
                }
            }

            /// Allowed subject kinds.
            pub fn domain(self) -> &'static [EntityKind] {
                use EntityKind::*;
                match self {
                    $(Predicate::$var => &[$($dom),*]),*
                }
            }

            pub fn range(self) -> Range {
                #[allow(unused_imports)]
                use EntityKind::*;
                match self {
                    $(Predicate::$var => $range),*
                }
            }
        }
    };
}

predicates! {
    // People
    Name => "name", [Person, School, ClassOnSchool, Course, CourseLevel, GroupOfClass, AcademicCategory], Range::Str;
    Age => "age", [Person], Range::Int;
    Gender => "gender", [Person], Range::Str;
    PlaceOfBirth => "placeOfBirth", [Person], Range::Str;
    MemberOf => "memberOf", [Person], Range::Entity(&[ClassOnSchool]);
    ClassOfSchool => "classOfSchool", [ClassOnSchool], Range::Entity(&[School]);
    ClassOfCourse => "classOfCourse", [ClassOnSchool], Range::Entity(&[Course]);
    CourseAtLevel => "courseAtLevel", [Course], Range::Entity(&[CourseLevel]);
    MemberOfGroup => "memberOfGroup", [Person], Range::Entity(&[GroupOfClass]);
    GroupOf => "groupOf", [GroupOfClass], Range::Entity(&[ClassOnSchool]);
    HasAcademicCategory => "hasAcademicCategory", [Person], Range::Entity(&[AcademicCategory]);
    FriendsOutside => "friendsOutside", [Person], Range::Int;
    DrinkingMatesOutside => "drinkingMatesOutside", [Person], Range::Int;
    FamilyDrinkingFrequency => "familyDrinkingFrequency", [Person], Range::Int;
    AuditScore => "auditScore", [Person], Range::Int;
    AuditZone => "auditZone", [Person], Range::Str;
    FasScore => "fasScore", [Person], Range::Int;
    FasBand => "fasBand", [Person], Range::Str;
    KidscreenTotal => "kidscreenTotal", [Person], Range::Int;
    SelfEfficacy => "selfEfficacy", [Person], Range::Int;
    // Questionnaire
    Title => "title", [Questionnaire], Range::Str;
    HasQuestion => "hasQuestion", [Questionnaire], Range::Entity(&[Question, QuestionSNA]);
    QuestionText => "questionText", [Question, QuestionSNA], Range::Str;
    TieThreshold => "tieThreshold", [QuestionSNA], Range::Int;
    HasOption => "hasOption", [Question, QuestionSNA], Range::Entity(&[Answer]);
    OptionLabel => "optionLabel", [Answer], Range::Str;
    OptionValue => "optionValue", [Answer], Range::Int;
    OfQuestionnaire => "ofQuestionnaire", [QuestionnairePastEvent], Range::Entity(&[Questionnaire]);
    EventDate => "eventDate", [QuestionnairePastEvent], Range::Date;
    AnsweredAt => "answeredAt", [Person], Range::Entity(&[QuestionnairePastEvent]);
    Answered => "answered", [Person], Range::Entity(&[AnswerOfPersonToQuestion]);
    ToQuestion => "toQuestion", [AnswerOfPersonToQuestion], Range::Entity(&[Question, QuestionSNA]);
    InEvent => "inEvent", [AnswerOfPersonToQuestion], Range::Entity(&[QuestionnairePastEvent]);
    AnswerValue => "answerValue", [AnswerOfPersonToQuestion], Range::Literal;
    SelectedOption => "selectedOption", [AnswerOfPersonToQuestion], Range::Entity(&[Answer]);
    AboutPerson => "aboutPerson", [AnswerOfPersonToQuestion], Range::Entity(&[Person]);
    // Networks
    GeneratesNetwork => "generatesNetwork", [Questionnaire, QuestionSNA], Range::Entity(&[Network]);
    NetworkName => "networkName", [Network], Range::Str;
    MemberOfNetwork => "memberOfNetwork", [Person], Range::Entity(&[Network]);
    RelationshipFrom => "relationshipFrom", [Relationship], Range::Entity(&[Person]);
    RelationshipTo => "relationshipTo", [Relationship], Range::Entity(&[Person]);
    RelationshipIn => "relationshipIn", [Relationship], Range::Entity(&[Network]);
    RelationshipWeight => "relationshipWeight", [Relationship], Range::Int;
    CharacteristicOf => "characteristicOf", [SNACharacteristic], Range::Entity(&[Person]);
    CharacteristicIn => "characteristicIn", [SNACharacteristic], Range::Entity(&[Network]);
    CharacteristicType => "characteristicType", [SNACharacteristic], Range::Str;
    HasCharacteristic => "hasCharacteristic", [Person], Range::Entity(&[SNACharacteristic]);
    EvidencedBy => "evidencedBy", [SNACharacteristic], Range::Entity(&[AnswerOfPersonToQuestion]);
    ConceptOfPerson => "conceptOfPerson", [SNAConcept], Range::Entity(&[Person]);
    ConceptInNetwork => "conceptInNetwork", [SNAConcept], Range::Entity(&[Network]);
    ConceptOfNetwork => "conceptOfNetwork", [SNAConcept], Range::Entity(&[Network]);
    Metric => "metric", [SNAConcept], Range::Str;
    MetricValue => "metricValue", [SNAConcept], Range::Real;
    HasSNAConcept => "hasSNAConcept", [Person, Network], Range::Entity(&[SNAConcept]);
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Literal {
    Str(String),
    Int(i64),
    Real(f64),
    Date(NaiveDate),
    Bool(bool),
}

impl Literal {
    fn rank(&self) -> u8 {
        match self {
            Literal::Str(_) => 0,
            Literal::Int(_) => 1,
            Literal::Real(_) => 2,
            Literal::Date(_) => 3,
            Literal::Bool(_) => 4,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Literal::Int(v) => Some(*v as f64),
            Literal::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Literal::Str(_) => "str",
            Literal::Int(_) => "int",
            Literal::Real(_) => "real",
            Literal::Date(_) => "date",
            Literal::Bool(_) => "bool",
        }
    }
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Literal {}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Literal::Str(a), Literal::Str(b)) => a.cmp(b),
            (Literal::Int(a), Literal::Int(b)) => a.cmp(b),
            (Literal::Real(a), Literal::Real(b)) => a.total_cmp(b),
            (Literal::Date(a), Literal::Date(b)) => a.cmp(b),
            (Literal::Bool(a), Literal::Bool(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Str(s) => f.write_str(s),
            Literal::Int(v) => write!(f, "{v}"),
            Literal::Real(v) => write!(f, "{v}"),
            Literal::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Literal::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Object {
    Entity(EntityId),
    Literal(Literal),
}

impl Object {
    pub fn entity(id: impl Into<String>) -> Object {
        Object::Entity(EntityId(id.into()))
    }

    pub fn as_entity(&self) -> Option<&EntityId> {
        match self {
            Object::Entity(e) => Some(e),
            Object::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Object::Literal(l) => Some(l),
            Object::Entity(_) => None,
        }
    }
}

impl From<Literal> for Object {
    fn from(l: Literal) -> Self {
        Object::Literal(l)
    }
}

impl From<EntityId> for Object {
    fn from(e: EntityId) -> Self {
        Object::Entity(e)
    }
}

impl std::hash::Hash for Literal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Literal::Str(s) => s.hash(state),
            Literal::Int(v) => v.hash(state),
            Literal::Real(v) => v.to_bits().hash(state),
            Literal::Date(d) => d.hash(state),
            Literal::Bool(b) => b.hash(state),
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Entity(e) => write!(f, "{e}"),
            Object::Literal(l) => write!(f, "{l:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assertion {
    pub subject: EntityId,
    pub predicate: Predicate,
    pub object: Object,
}

impl Assertion {
    pub fn new(subject: impl Into<EntityId>, predicate: Predicate, object: impl Into<Object>) -> Self {
        Assertion {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        EntityId(s)
    }
}

impl From<&EntityId> for EntityId {
    fn from(e: &EntityId) -> Self {
        e.clone()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("entity {id} already exists as {existing}, not {requested}")]
    KindConflict {
        id: EntityId,
        existing: EntityKind,
        requested: EntityKind,
    },
    #[error("{predicate} does not apply to {kind} subject {subject}")]
    Domain {
        predicate: Predicate,
        subject: EntityId,
        kind: EntityKind,
    },
    #[error("{predicate} cannot take object {object}")]
    Range { predicate: Predicate, object: String },
}

/// Entities plus a set of assertions, indexed by predicate in both
/// directions. Inserting an existing assertion is a no-op.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Store {
    entities: BTreeMap<EntityId, EntityKind>,
    forward: BTreeMap<Predicate, BTreeMap<EntityId, BTreeSet<Object>>>,
    backward: BTreeMap<Predicate, BTreeMap<Object, BTreeSet<EntityId>>>,
    len: usize,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    /// Number of assertions.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn entities(&self) -> impl Iterator<Item = (&EntityId, EntityKind)> {
        self.entities.iter().map(|(id, k)| (id, *k))
    }

    pub fn entities_of(&self, kind: EntityKind) -> impl Iterator<Item = &EntityId> {
        self.entities.iter().filter(move |(_, k)| **k == kind).map(|(id, _)| id)
    }

    pub fn kind_of(&self, id: &EntityId) -> Option<EntityKind> {
        self.entities.get(id).copied()
    }

    /// Declares an entity. Re-declaring with the same kind is a no-op.
    pub fn add_entity(&mut self, id: impl Into<EntityId>, kind: EntityKind) -> Result<EntityId, StoreError> {
        let id = id.into();
        match self.entities.get(&id) {
            Some(&existing) if existing != kind => Err(StoreError::KindConflict {
                id,
                existing,
                requested: kind,
            }),
            Some(_) => Ok(id),
            None => {
                self.entities.insert(id.clone(), kind);
                Ok(id)
            }
        }
    }

    pub fn check(&self, a: &Assertion) -> Result<(), StoreError> {
        let kind = self
            .kind_of(&a.subject)
            .ok_or_else(|| StoreError::UnknownEntity(a.subject.clone()))?;
        if !a.predicate.domain().contains(&kind) {
            return Err(StoreError::Domain {
                predicate: a.predicate,
                subject: a.subject.clone(),
                kind,
            });
        }
        let ok = match (a.predicate.range(), &a.object) {
            (Range::Entity(kinds), Object::Entity(e)) => {
                let k = self.kind_of(e).ok_or_else(|| StoreError::UnknownEntity(e.clone()))?;
                kinds.contains(&k)
            }
            (Range::Str, Object::Literal(Literal::Str(_)))
            | (Range::Int, Object::Literal(Literal::Int(_)))
            | (Range::Real, Object::Literal(Literal::Real(_)))
            | (Range::Date, Object::Literal(Literal::Date(_)))
            | (Range::Literal, Object::Literal(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(StoreError::Range {
                predicate: a.predicate,
                object: a.object.to_string(),
            })
        }
    }

    /// Returns whether the assertion was new.
    pub fn assert_fact(&mut self, a: Assertion) -> Result<bool, StoreError> {
        self.check(&a)?;
        let objects = self.forward.entry(a.predicate).or_default().entry(a.subject.clone()).or_default();
        if !objects.insert(a.object.clone()) {
            return Ok(false);
        }
        self.backward
            .entry(a.predicate)
            .or_default()
            .entry(a.object)
            .or_default()
            .insert(a.subject);
        self.len += 1;
        Ok(true)
    }

    /// Like [`Store::assert_fact`] with the predicate given by name.
    pub fn assert_named(&mut self, subject: &str, predicate: &str, object: Object) -> Result<bool, StoreError> {
        let predicate = Predicate::parse(predicate)?;
        self.assert_fact(Assertion::new(subject, predicate, object))
    }

    pub fn retract(&mut self, a: &Assertion) -> bool {
        let removed = self
            .forward
            .get_mut(&a.predicate)
            .and_then(|m| m.get_mut(&a.subject))
            .is_some_and(|objs| objs.remove(&a.object));
        if removed {
            if let Some(subjects) = self.backward.get_mut(&a.predicate).and_then(|m| m.get_mut(&a.object)) {
                subjects.remove(&a.subject);
            }
            self.len -= 1;
        }
        removed
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.forward
            .get(&a.predicate)
            .and_then(|m| m.get(&a.subject))
            .is_some_and(|objs| objs.contains(&a.object))
    }

    pub fn objects(&self, subject: &EntityId, predicate: Predicate) -> impl Iterator<Item = &Object> {
        self.forward
            .get(&predicate)
            .and_then(|m| m.get(subject))
            .into_iter()
            .flatten()
    }

    pub fn object(&self, subject: &EntityId, predicate: Predicate) -> Option<&Object> {
        self.objects(subject, predicate).next()
    }

    pub fn subjects(&self, predicate: Predicate, object: &Object) -> impl Iterator<Item = &EntityId> {
        self.backward
            .get(&predicate)
            .and_then(|m| m.get(object))
            .into_iter()
            .flatten()
    }

    /// Every assertion in (predicate, subject, object) order.
    pub fn assertions(&self) -> impl Iterator<Item = Assertion> + '_ {
        self.forward.iter().flat_map(|(p, by_subject)| {
            by_subject.iter().flat_map(move |(s, objs)| {
                objs.iter().map(move |o| Assertion {
                    subject: s.clone(),
                    predicate: *p,
                    object: o.clone(),
                })
            })
        })
    }

    pub fn with_predicate(&self, predicate: Predicate) -> impl Iterator<Item = (&EntityId, &Object)> {
        self.forward
            .get(&predicate)
            .into_iter()
            .flat_map(|m| m.iter().flat_map(|(s, objs)| objs.iter().map(move |o| (s, o))))
    }

    pub fn query(&self, patterns: &[Pattern]) -> Vec<Binding> {
        let mut out: Vec<Binding> = Vec::new();
        join(self, patterns, &mut vec![false; patterns.len()], Binding::new(), &mut |b| out.push(b));
        out.sort();
        out.dedup();
        out
    }
}

/// A pattern position: a variable or a fixed value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(String),
    Value(Object),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn entity(id: &str) -> Term {
        Term::Value(Object::entity(id))
    }

    pub fn lit(l: Literal) -> Term {
        Term::Value(Object::Literal(l))
    }

    fn resolve<'a>(&'a self, b: &'a Binding) -> Option<&'a Object> {
        match self {
            Term::Var(v) => b.get(v),
            Term::Value(o) => Some(o),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub subject: Term,
    pub predicate: Predicate,
    pub object: Term,
}

impl Pattern {
    pub fn new(subject: Term, predicate: Predicate, object: Term) -> Self {
        Pattern {
            subject,
            predicate,
            object,
        }
    }

    /// `"?p"` is a variable, anything else an entity id.
    pub fn parse(subject: &str, predicate: &str, object: &str) -> Result<Pattern, StoreError> {
        let term = |s: &str| match s.strip_prefix('?') {
            Some(v) => Term::var(v),
            None => Term::entity(s),
        };
        Ok(Pattern::new(term(subject), Predicate::parse(predicate)?, term(object)))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.object].into_iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Value(_) => None,
        })
    }
}

/// Variable name to value.
pub type Binding = BTreeMap<String, Object>;

fn bind(b: &Binding, term: &Term, value: &Object) -> Option<Binding> {
    match term {
        Term::Value(o) => (o == value).then(|| b.clone()),
        Term::Var(v) => match b.get(v) {
            Some(existing) if existing != value => None,
            Some(_) => Some(b.clone()),
            None => {
                let mut next = b.clone();
                next.insert(v.clone(), value.clone());
                Some(next)
            }
        },
    }
}

/// Candidate bindings for one pattern under `b`.
pub(crate) fn match_pattern(store: &Store, p: &Pattern, b: &Binding, mut f: impl FnMut(Binding)) {
    let subject = p.subject.resolve(b);
    let object = p.object.resolve(b);
    match (subject, object) {
        (Some(Object::Entity(s)), Some(o)) => {
            if store.contains(&Assertion::new(s, p.predicate, o.clone())) {
                f(b.clone());
            }
        }
        (Some(Object::Literal(_)), _) => {}
        (Some(Object::Entity(s)), None) => {
            for o in store.objects(s, p.predicate) {
                if let Some(next) = bind(b, &p.object, o) {
                    f(next);
                }
            }
        }
        (None, Some(o)) => {
            for s in store.subjects(p.predicate, o) {
                if let Some(next) = bind(b, &p.subject, &Object::Entity(s.clone())) {
                    f(next);
                }
            }
        }
        (None, None) => {
            for (s, o) in store.with_predicate(p.predicate) {
                if let Some(next) = bind(b, &p.subject, &Object::Entity(s.clone())).and_then(|nb| bind(&nb, &p.object, o)) {
                    f(next);
                }
            }
        }
    }
}

fn bound_score(p: &Pattern, b: &Binding) -> u8 {
    let s = p.subject.resolve(b).is_some();
    let o = p.object.resolve(b).is_some();
    match (s, o) {
        (true, true) => 3,
        (true, false) => 2,
        (false, true) => 1,
        (false, false) => 0,
    }
}

/// Nested-loop join picking the most constrained remaining pattern first.
pub(crate) fn join(store: &Store, patterns: &[Pattern], used: &mut Vec<bool>, b: Binding, emit: &mut dyn FnMut(Binding)) {
    let next = (0..patterns.len())
        .filter(|&i| !used[i])
        .max_by_key(|&i| (bound_score(&patterns[i], &b), std::cmp::Reverse(i)));
    let Some(i) = next else {
        emit(b);
        return;
    };
    used[i] = true;
    match_pattern(store, &patterns[i], &b, |nb| join(store, patterns, used, nb, emit));
    used[i] = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Store {
        let mut s = Store::new();
        s.add_entity("class1", EntityKind::ClassOnSchool).unwrap();
        for p in ["p1", "p2", "p3"] {
            s.add_entity(p, EntityKind::Person).unwrap();
            s.assert_fact(Assertion::new(p, Predicate::MemberOf, Object::entity("class1"))).unwrap();
        }
        s
    }

    #[test]
    fn set_semantics() {
        let mut s = small();
        let before = s.len();
        assert!(!s.assert_fact(Assertion::new("p1", Predicate::MemberOf, Object::entity("class1"))).unwrap());
        assert_eq!(s.len(), before);
    }

    #[test]
    fn vocabulary_and_reference_checks() {
        let mut s = small();
        assert_eq!(
            s.assert_named("p1", "likes", Object::entity("p2")),
            Err(StoreError::UnknownPredicate("likes".into()))
        );
        assert!(matches!(
            s.assert_fact(Assertion::new("p1", Predicate::MemberOf, Object::entity("nowhere"))),
            Err(StoreError::UnknownEntity(_))
        ));
        assert!(matches!(
            s.assert_fact(Assertion::new("ghost", Predicate::Age, Literal::Int(3))),
            Err(StoreError::UnknownEntity(_))
        ));
        assert!(matches!(
            s.assert_fact(Assertion::new("class1", Predicate::Age, Literal::Int(3))),
            Err(StoreError::Domain { .. })
        ));
        assert!(matches!(
            s.assert_fact(Assertion::new("p1", Predicate::Age, Literal::Str("x".into()))),
            Err(StoreError::Range { .. })
        ));
        assert!(matches!(
            s.add_entity("p1", EntityKind::School),
            Err(StoreError::KindConflict { .. })
        ));
    }

    #[test]
    fn literal_reads_back() {
        let mut s = small();
        s.assert_named("p1", "age", Literal::Int(17).into()).unwrap();
        let rows = s.query(&[Pattern::parse("p1", "age", "?a").unwrap()]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0]["a"], Object::Literal(Literal::Int(17)));
    }

    #[test]
    fn query_examples() {
        let s = small();
        let rows = s.query(&[Pattern::parse("?p", "memberOf", "class1").unwrap()]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0]["p"], Object::entity("p1"));
        assert!(s.query(&[Pattern::parse("?p", "memberOf", "p1").unwrap()]).is_empty());
        assert!(Pattern::parse("?p", "unknown", "x").is_err());
    }

    #[test]
    fn vocabulary_is_consistent() {
        assert_eq!(EntityKind::ALL.len(), 17);
        for p in Predicate::ALL {
            assert_eq!(Predicate::parse(p.name()), Ok(*p));
            assert!(!p.domain().is_empty());
        }
        for k in EntityKind::ALL {
            assert_eq!(EntityKind::parse(k.as_str()), Some(*k));
        }
        assert!(Literal::Real(f64::NAN) == Literal::Real(f64::NAN));
        assert!(Literal::Int(3) < Literal::Real(0.0));
    }
}
