//! Study lifecycle: roster import, answer collection, analysis snapshots and
//! the JSON bundle a study is stored in.

mod anonymize;
mod synthetic;

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use anonymize::{anonymize, anonymize_with, AnonymizeError, IdentityFile, SURNAMES};
pub use synthetic::{synthetic_classroom, SyntheticClassroom};

use crate::graph::GraphError;
use crate::knowledge::{
    entity_ids, populate, run_rules, standard_rules, write_back_metrics, write_fact_file, RuleError, StoreError,
    WriteBackError,
};
use crate::metrics::annotate;
use crate::network::{attach_attributes, NetworkError, Networks};
use crate::profile::{compute_social_profiles, ProfileError, SocialProfile};
use crate::report::{render_report, ReportText};
use crate::survey::{
    build_profiles, standard_questionnaire, validate_response_set, AnswerRecord, Gender, PersonId, PersonProfile,
    Questionnaire, QuestionnaireEvent, Roster, RosterEntry, RosterRow, ValidationReport,
};
use crate::vocabulary::GraphMetric;

pub const BUNDLE_SCHEMA: &str = "classnet.study/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyStatus {
    Draft,
    Collecting,
    Analyzed,
}

impl StudyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            StudyStatus::Draft => "draft",
            StudyStatus::Collecting => "collecting",
            StudyStatus::Analyzed => "analyzed",
        }
    }
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("cannot {action} while the study is {status}")]
    WrongStatus { status: &'static str, action: &'static str },
    #[error("the answers do not validate")]
    Validation(Box<ValidationReport>),
    #[error("roster: {0}")]
    Roster(String),
    #[error(transparent)]
    Anonymize(#[from] AnonymizeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    WriteBack(#[from] WriteBackError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("bundle: {0}")]
    Bundle(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub directed: bool,
    pub nodes: usize,
    pub ties: usize,
    pub density: Option<f64>,
    pub diameter: Option<f64>,
    pub components: Option<f64>,
    pub communities: Option<f64>,
    pub modularity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub respondents: usize,
    pub answers: usize,
    pub graphs: Vec<GraphSummary>,
    pub missing_items: usize,
    pub facts: usize,
    pub entities: usize,
    pub concepts_written: usize,
    pub derived: usize,
    pub minted: usize,
    pub rule_rounds: usize,
}

/// Everything one run of the pipeline produces. Graphs carry node
/// attributes and metric annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub seed: u64,
    pub summary: AnalysisSummary,
    pub validation: ValidationReport,
    pub networks: Networks,
    pub profiles: Vec<PersonProfile>,
    pub social: Vec<SocialProfile>,
    pub reports: Vec<ReportText>,
    /// The knowledge store after write-back and rule evaluation, as a fact file.
    pub facts: String,
}

impl Analysis {
    pub fn person(&self, id: PersonId) -> Option<(&PersonProfile, &SocialProfile, &ReportText)> {
        let i = id.index();
        Some((self.profiles.get(i)?, self.social.get(i)?, self.reports.get(i)?))
    }
}

/// Runs the whole analysis. The output depends only on the arguments.
pub fn analyze(
    school: &str,
    roster: &Roster,
    questionnaire: &Questionnaire,
    answers: &[AnswerRecord],
    seed: u64,
) -> Result<Analysis, StudyError> {
    let validation = validate_response_set(answers, roster, questionnaire);
    if validation.is_blocking() {
        return Err(StudyError::Validation(Box::new(validation)));
    }
    let profiles = build_profiles(roster, questionnaire, answers);
    let networks = Networks::build(answers, roster, questionnaire)?
        .try_map(|g| attach_attributes(g, &profiles).map(|g| annotate(&g)))?;

    let mut store = populate(school, roster, questionnaire, answers, &profiles).load()?;
    let persons: BTreeMap<usize, _> = roster.ids().map(|p| (p.index(), entity_ids::person(p))).collect();
    let mut concepts_written = 0;
    for (name, g) in networks.iter() {
        concepts_written += write_back_metrics(&mut store, g, &persons, &entity_ids::network(name))?;
    }
    let derivation = run_rules(&mut store, &standard_rules())?;

    let social = compute_social_profiles(&networks);
    let reports = profiles
        .iter()
        .zip(&social)
        .map(|(p, s)| render_report(p, s, &networks, &profiles))
        .collect::<Result<Vec<_>, _>>()?;

    let graphs = networks
        .iter()
        .map(|(name, g)| GraphSummary {
            name: name.to_owned(),
            directed: g.is_directed(),
            nodes: g.node_count(),
            ties: g.tie_count(),
            density: g.annotation(GraphMetric::Density),
            diameter: g.annotation(GraphMetric::Diameter),
            components: g.annotation(GraphMetric::ComponentCount),
            communities: g.annotation(GraphMetric::CommunityCount),
            modularity: g.annotation(GraphMetric::Modularity),
        })
        .collect();
    let respondents: BTreeSet<PersonId> = answers.iter().map(|a| a.person).collect();
    let summary = AnalysisSummary {
        respondents: respondents.len(),
        answers: answers.len(),
        graphs,
        missing_items: validation.missing_items.len(),
        facts: store.len(),
        entities: store.entity_count(),
        concepts_written,
        derived: derivation.derived.len(),
        minted: derivation.minted.len(),
        rule_rounds: derivation.rounds,
    };
    Ok(Analysis {
        seed,
        summary,
        validation,
        networks,
        profiles,
        social,
        reports,
        facts: write_fact_file(&store),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisVersion {
    pub version: u32,
    pub analysis: Analysis,
}

/// A network question listed once per classmate the respondent rates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedTarget {
    pub id: PersonId,
    pub pseudonym: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedQuestion {
    #[serde(flatten)]
    pub question: crate::survey::Question,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<ExpandedTarget>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedQuestionnaire {
    pub id: String,
    pub title: String,
    pub questions: Vec<ExpandedQuestion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study {
    pub schema: String,
    pub id: String,
    pub title: String,
    pub created: NaiveDate,
    /// Keys pseudonym assignment.
    pub seed: u64,
    pub roster: Roster,
    pub questionnaire: Questionnaire,
    pub events: Vec<QuestionnaireEvent>,
    pub answers: Vec<AnswerRecord>,
    pub results: Vec<AnalysisVersion>,
    pub status: StudyStatus,
}

impl Study {
    pub fn new(id: &str, title: &str, created: NaiveDate, seed: u64) -> Study {
        Study {
            schema: BUNDLE_SCHEMA.into(),
            id: id.into(),
            title: title.into(),
            created,
            seed,
            roster: Roster::default(),
            questionnaire: standard_questionnaire("classnet"),
            events: Vec::new(),
            answers: Vec::new(),
            results: Vec::new(),
            status: StudyStatus::Draft,
        }
    }

    fn wrong(&self, action: &'static str) -> StudyError {
        StudyError::WrongStatus {
            status: self.status.as_str(),
            action,
        }
    }

    /// Replaces the roster. Rows without a pseudonym get one from the
    /// default pool. Returns the real names for the identity file.
    pub fn import_roster(&mut self, rows: &[RosterRow]) -> Result<IdentityFile, StudyError> {
        if self.status != StudyStatus::Draft {
            return Err(self.wrong("replace the roster"));
        }
        let given: BTreeSet<String> = rows.iter().map(|r| r.pseudonym.clone()).filter(|p| !p.is_empty()).collect();
        let unnamed: Vec<&str> = rows
            .iter()
            .filter(|r| r.pseudonym.is_empty())
            .map(|r| r.full_name.as_str())
            .collect();
        let mut generated = anonymize_with(&SURNAMES, &unnamed, &given, self.seed)?.into_iter();
        let mut entries = Vec::with_capacity(rows.len());
        let mut identity = IdentityFile::default();
        let mut seen = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            let pseudonym = if row.pseudonym.is_empty() {
                generated.next().expect("one pseudonym per unnamed row")
            } else {
                row.pseudonym.clone()
            };
            if !seen.insert(pseudonym.clone()) {
                return Err(StudyError::Roster(format!("duplicate pseudonym {pseudonym:?}")));
            }
            if pseudonym.chars().any(|c| c == '"' || c.is_control()) {
                return Err(StudyError::Roster(format!("pseudonym {pseudonym:?} contains a quote or control character")));
            }
            if !row.full_name.is_empty() {
                identity.names.insert(pseudonym.clone(), row.full_name.clone());
            }
            entries.push(RosterEntry {
                id: PersonId(i as u32),
                pseudonym,
                age: row.age,
                gender: Gender::parse(&row.gender),
                class: row.class.clone(),
            });
        }
        self.roster = Roster { entries };
        Ok(identity)
    }

    pub fn expanded_questionnaire(&self) -> ExpandedQuestionnaire {
        let targets: Vec<ExpandedTarget> = self
            .roster
            .entries
            .iter()
            .map(|e| ExpandedTarget {
                id: e.id,
                pseudonym: e.pseudonym.clone(),
            })
            .collect();
        ExpandedQuestionnaire {
            id: self.questionnaire.id.clone(),
            title: self.questionnaire.title.clone(),
            questions: self
                .questionnaire
                .questions
                .iter()
                .map(|q| ExpandedQuestion {
                    question: q.clone(),
                    targets: if q.repeat_over_roster { targets.clone() } else { Vec::new() },
                })
                .collect(),
        }
    }

    /// Adds a batch of answers. Records already stored are ignored. The batch
    /// is rejected as a whole if the combined answers contain unusable
    /// records or duplicates; missing respondents and items are only
    /// reported.
    pub fn add_responses(&mut self, batch: &[AnswerRecord]) -> Result<ValidationReport, StudyError> {
        if self.roster.is_empty() {
            return Err(self.wrong("accept answers without a roster"));
        }
        let mut combined: BTreeSet<AnswerRecord> = self.answers.iter().cloned().collect();
        combined.extend(batch.iter().cloned());
        let combined: Vec<AnswerRecord> = combined.into_iter().collect();
        let report = validate_response_set(&combined, &self.roster, &self.questionnaire);
        if !(report.unknown_targets.is_empty() && report.duplicates.is_empty() && report.invalid_answers.is_empty()) {
            return Err(StudyError::Validation(Box::new(report)));
        }
        let events: BTreeSet<QuestionnaireEvent> = combined.iter().map(|a| a.event.clone()).collect();
        self.events = events.into_iter().collect();
        self.answers = combined;
        self.status = StudyStatus::Collecting;
        Ok(report)
    }

    /// Analyzes the current answers and stores the result as a new version.
    pub fn analyze(&mut self) -> Result<&AnalysisVersion, StudyError> {
        if self.status == StudyStatus::Draft {
            return Err(self.wrong("analyze"));
        }
        let analysis = analyze(&self.title, &self.roster, &self.questionnaire, &self.answers, self.seed)?;
        let version = self.results.len() as u32 + 1;
        self.results.push(AnalysisVersion { version, analysis });
        self.status = StudyStatus::Analyzed;
        Ok(self.results.last().expect("just pushed"))
    }

    pub fn latest(&self) -> Option<&AnalysisVersion> {
        self.results.last()
    }

    pub fn person_by_pseudonym(&self, pseudonym: &str) -> Option<PersonId> {
        self.roster.by_pseudonym(pseudonym).map(|e| e.id)
    }

    pub fn to_bundle(&self) -> String {
        serde_json::to_string_pretty(self).expect("study serializes")
    }

    pub fn from_bundle(text: &str) -> Result<Study, StudyError> {
        let study: Study = serde_json::from_str(text).map_err(|e| StudyError::Bundle(e.to_string()))?;
        if study.schema != BUNDLE_SCHEMA {
            return Err(StudyError::Bundle(format!(
                "unsupported schema {:?}, expected {BUNDLE_SCHEMA:?}",
                study.schema
            )));
        }
        Ok(study)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NETWORK_NAMES;
    use crate::survey::parse_roster_csv;

    fn date() -> NaiveDate {
        NaiveDate::from_ymd_opt(2017, 3, 1).unwrap()
    }

    #[test]
    fn lifecycle() {
        let c = synthetic_classroom(6, 3).unwrap();
        let mut s = Study::new("s1", "Test", date(), 3);
        assert!(matches!(s.analyze(), Err(StudyError::WrongStatus { .. })));
        s.roster = c.roster.clone();
        let report = s.add_responses(&c.answers[..10]).unwrap();
        assert_eq!(report.missing_respondents.len(), 5);
        assert_eq!(s.status, StudyStatus::Collecting);
        assert!(matches!(s.analyze(), Err(StudyError::Validation(_))));
        s.add_responses(&c.answers).unwrap();
        s.add_responses(&c.answers).unwrap();
        assert_eq!(s.answers.len(), c.answers.len());
        let v1 = s.analyze().unwrap().clone();
        let v2 = s.analyze().unwrap().clone();
        assert_eq!((v1.version, v2.version), (1, 2));
        assert_eq!(serde_json::to_string(&v1.analysis).unwrap(), serde_json::to_string(&v2.analysis).unwrap());
        let names: Vec<&str> = v1.analysis.summary.graphs.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, NETWORK_NAMES);
        assert!(matches!(s.import_roster(&[]), Err(StudyError::WrongStatus { .. })));

        let back = Study::from_bundle(&s.to_bundle()).unwrap();
        assert_eq!(back, s);
        assert!(Study::from_bundle(&s.to_bundle().replace(BUNDLE_SCHEMA, "other/9")).is_err());
    }

    #[test]
    fn roster_import_keeps_names_out() {
        let rows = parse_roster_csv("pseudonym,full_name,age,gender,class\n,Ana Pérez,17,F,1A\nGay,Luis Gil,16,M,1A\n,Eva Ruiz,,F,1A\n")
            .unwrap();
        let mut s = Study::new("s", "T", date(), 9);
        let identity = s.import_roster(&rows).unwrap();
        assert_eq!(s.roster.entries[1].pseudonym, "Gay");
        assert_eq!(identity.names.len(), 3);
        assert_eq!(identity.names["Gay"], "Luis Gil");
        let bundle = s.to_bundle();
        for real in identity.names.values() {
            assert!(!bundle.contains(real.as_str()));
        }
        let dup = parse_roster_csv("pseudonym,full_name,age,gender,class\nGay,,,,\nGay,,,,\n").unwrap();
        assert!(matches!(s.import_roster(&dup), Err(StudyError::Roster(_))));
    }
}
