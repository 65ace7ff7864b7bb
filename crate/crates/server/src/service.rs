//! Study store shared by the HTTP API and the CLI.
//!
//! Each study lives in `<data_dir>/<id>.study.json`; real names, when kept,
//! go to `<data_dir>/<id>.identity.json`, which nothing here ever reads back.
//! Writers for one study are serialized by a per-study lock. Readers get the
//! last committed snapshot.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;
use classnet_core::graph::SocialGraph;
use classnet_core::interchange::{export_csv, export_pajek};
use classnet_core::profile::{find_influencers, find_mediators, Influencer, Mediator, SocialProfile};
use classnet_core::report::ReportText;
use classnet_core::study::{
    Analysis, AnalysisSummary, ExpandedQuestionnaire, Study, StudyError, StudyStatus,
};
use classnet_core::survey::{parse_roster_csv, AnswerRecord, PersonId, PersonProfile, RosterEntry, ValidationReport};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{message}")]
    Invalid {
        message: String,
        report: Option<Box<ValidationReport>>,
    },
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Internal(String),
}

impl From<StudyError> for ServiceError {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::WrongStatus { .. } => ServiceError::Conflict(e.to_string()),
            StudyError::Validation(report) => ServiceError::Invalid {
                message: "the answers do not validate".into(),
                report: Some(report),
            },
            StudyError::Roster(_) | StudyError::Anonymize(_) => ServiceError::Invalid {
                message: e.to_string(),
                report: None,
            },
            other => ServiceError::Internal(other.to_string()),
        }
    }
}

fn io(context: &str, e: impl std::fmt::Display) -> ServiceError {
    ServiceError::Internal(format!("{context}: {e}"))
}

pub type Result<T> = std::result::Result<T, ServiceError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Pajek,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyInfo {
    pub id: String,
    pub title: String,
    pub created: NaiveDate,
    pub status: StudyStatus,
    pub seed: u64,
    pub roster_size: usize,
    pub answers: usize,
    pub versions: usize,
}

impl From<&Study> for StudyInfo {
    fn from(s: &Study) -> Self {
        StudyInfo {
            id: s.id.clone(),
            title: s.title.clone(),
            created: s.created,
            status: s.status,
            seed: s.seed,
            roster_size: s.roster.len(),
            answers: s.answers.len(),
            versions: s.results.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOutcome {
    pub version: u32,
    pub summary: AnalysisSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub profile: PersonProfile,
    pub social: SocialProfile,
    pub report: ReportText,
}

pub struct Service {
    dir: PathBuf,
    snapshots: RwLock<HashMap<String, Arc<Study>>>,
    writers: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    creating: Mutex<()>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Writes `contents` to a temporary file in the same directory and renames
/// it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

impl Service {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Service> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io(&format!("creating {}", dir.display()), e))?;
        Ok(Service {
            dir,
            snapshots: RwLock::new(HashMap::new()),
            writers: Mutex::new(HashMap::new()),
            creating: Mutex::new(()),
        })
    }

    pub fn data_dir(&self) -> &Path {
        &self.dir
    }

    fn bundle_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.study.json"))
    }

    pub fn identity_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.identity.json"))
    }

    fn writer(&self, id: &str) -> Arc<Mutex<()>> {
        self.writers.lock().entry(id.to_owned()).or_default().clone()
    }

    fn commit(&self, study: Study) -> Result<Arc<Study>> {
        write_atomic(&self.bundle_path(&study.id), study.to_bundle().as_bytes())
            .map_err(|e| io(&format!("saving study {}", study.id), e))?;
        let study = Arc::new(study);
        self.snapshots.write().insert(study.id.clone(), study.clone());
        Ok(study)
    }

    /// The last committed state of a study.
    pub fn get(&self, id: &str) -> Result<Arc<Study>> {
        if let Some(s) = self.snapshots.read().get(id) {
            return Ok(s.clone());
        }
        let missing = || ServiceError::NotFound(format!("no study {id:?}"));
        if !valid_id(id) {
            return Err(missing());
        }
        let text = match fs::read_to_string(self.bundle_path(id)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(missing()),
            Err(e) => return Err(io(&format!("reading study {id}"), e)),
        };
        let study = Arc::new(Study::from_bundle(&text)?);
        Ok(self.snapshots.write().entry(id.to_owned()).or_insert(study).clone())
    }

    /// Applies `f` to a copy of the study and commits the copy if `f` succeeds.
    fn update<T>(&self, id: &str, f: impl FnOnce(&mut Study) -> Result<T>) -> Result<(T, Arc<Study>)> {
        let lock = self.writer(id);
        let _guard = lock.lock();
        let mut study = (*self.get(id)?).clone();
        let out = f(&mut study)?;
        Ok((out, self.commit(study)?))
    }

    pub fn list(&self) -> Result<Vec<StudyInfo>> {
        let mut ids: Vec<String> = fs::read_dir(&self.dir)
            .map_err(|e| io("listing studies", e))?
            .filter_map(|e| e.ok()?.file_name().into_string().ok())
            .filter_map(|n| n.strip_suffix(".study.json").map(str::to_owned))
            .collect();
        ids.sort();
        ids.iter().map(|id| Ok(StudyInfo::from(&*self.get(id)?))).collect()
    }

    pub fn create(&self, title: &str, seed: Option<u64>, created: NaiveDate) -> Result<StudyInfo> {
        if title.trim().is_empty() {
            return Err(ServiceError::BadRequest("a study needs a title".into()));
        }
        let _guard = self.creating.lock();
        let mut n = 1;
        while self.bundle_path(&format!("study-{n}")).exists() {
            n += 1;
        }
        let id = format!("study-{n}");
        let study = Study::new(&id, title, created, seed.unwrap_or_else(rand::random));
        Ok(StudyInfo::from(&*self.commit(study)?))
    }

    /// Imports a roster CSV. Real names go to the identity file only when
    /// `keep_identity` is set; the returned entries never contain them.
    pub fn import_roster(&self, id: &str, csv: &str, keep_identity: bool) -> Result<Vec<RosterEntry>> {
        let rows = parse_roster_csv(csv).map_err(|e| ServiceError::Invalid {
            message: e.to_string(),
            report: None,
        })?;
        let (identity, study) = self.update(id, |s| Ok(s.import_roster(&rows)?))?;
        let path = self.identity_path(id);
        if keep_identity && !identity.names.is_empty() {
            let text = serde_json::to_string_pretty(&identity).expect("identity serializes");
            write_atomic(&path, text.as_bytes()).map_err(|e| io("saving identity file", e))?;
        } else if path.exists() {
            fs::remove_file(&path).map_err(|e| io("removing stale identity file", e))?;
        }
        Ok(study.roster.entries.clone())
    }

    pub fn questionnaire(&self, id: &str) -> Result<ExpandedQuestionnaire> {
        Ok(self.get(id)?.expanded_questionnaire())
    }

    pub fn add_responses(&self, id: &str, answers: &[AnswerRecord]) -> Result<ValidationReport> {
        Ok(self.update(id, |s| Ok(s.add_responses(answers)?))?.0)
    }

    pub fn analyze(&self, id: &str) -> Result<AnalyzeOutcome> {
        let (outcome, _) = self.update(id, |s| {
            let v = s.analyze()?;
            Ok(AnalyzeOutcome {
                version: v.version,
                summary: v.analysis.summary.clone(),
            })
        })?;
        Ok(outcome)
    }

    /// The study together with its latest analysis.
    pub fn analyzed(&self, id: &str) -> Result<Arc<Study>> {
        let study = self.get(id)?;
        if study.latest().is_none() {
            return Err(ServiceError::Conflict(format!("study {id:?} has not been analyzed")));
        }
        Ok(study)
    }

    pub fn graph_names(&self, id: &str) -> Result<Vec<String>> {
        let study = self.analyzed(id)?;
        Ok(latest(&study).networks.iter().map(|(n, _)| n.to_owned()).collect())
    }

    pub fn graph(&self, id: &str, name: &str) -> Result<SocialGraph> {
        let study = self.analyzed(id)?;
        latest(&study)
            .networks
            .get(name)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(format!("no graph {name:?}")))
    }

    pub fn export(&self, id: &str, name: &str, format: ExportFormat) -> Result<String> {
        let g = self.graph(id, name)?;
        Ok(match format {
            ExportFormat::Pajek => export_pajek(&g),
            ExportFormat::Csv => export_csv(&g),
        })
    }

    fn person(study: &Study, pid: u32) -> Result<PersonId> {
        let p = PersonId(pid);
        if !study.roster.contains(p) {
            return Err(ServiceError::NotFound(format!("no person {pid}")));
        }
        Ok(p)
    }

    pub fn individual(&self, id: &str, pid: u32) -> Result<Individual> {
        let study = self.analyzed(id)?;
        let p = Self::person(&study, pid)?;
        let (profile, social, report) = latest(&study)
            .person(p)
            .ok_or_else(|| ServiceError::NotFound(format!("no analysis results for person {pid}")))?;
        Ok(Individual {
            profile: profile.clone(),
            social: social.clone(),
            report: report.clone(),
        })
    }

    pub fn individual_by_pseudonym(&self, id: &str, pseudonym: &str) -> Result<Individual> {
        let study = self.get(id)?;
        let p = study
            .person_by_pseudonym(pseudonym)
            .ok_or_else(|| ServiceError::NotFound(format!("no person named {pseudonym:?}")))?;
        self.individual(id, p.0)
    }

    pub fn mediators(&self, id: &str, pid: u32) -> Result<Vec<Mediator>> {
        let study = self.analyzed(id)?;
        let p = Self::person(&study, pid)?;
        find_mediators(p, &latest(&study).networks).map_err(|e| ServiceError::NotFound(e.to_string()))
    }

    pub fn influencers(&self, id: &str, pid: u32) -> Result<Vec<Influencer>> {
        let study = self.analyzed(id)?;
        let p = Self::person(&study, pid)?;
        let a = latest(&study);
        find_influencers(p, &a.networks, &a.profiles).map_err(|e| ServiceError::NotFound(e.to_string()))
    }
}

fn latest(study: &Study) -> &Analysis {
    &study.latest().expect("checked by Service::analyzed").analysis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        write_atomic(&path, b"first version, longer").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn ids_are_sequential_and_checked() {
        let dir = tempfile::tempdir().unwrap();
        let svc = Service::open(dir.path()).unwrap();
        let day = NaiveDate::from_ymd_opt(2017, 3, 1).unwrap();
        assert_eq!(svc.create("A", Some(1), day).unwrap().id, "study-1");
        assert_eq!(svc.create("B", Some(1), day).unwrap().id, "study-2");
        assert!(matches!(svc.get("../etc"), Err(ServiceError::NotFound(_))));
        assert!(matches!(svc.create(" ", None, day), Err(ServiceError::BadRequest(_))));
        let reopened = Service::open(dir.path()).unwrap();
        assert_eq!(reopened.list().unwrap().len(), 2);
    }
}
