//! HTTP contract tests against an in-process router.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use classnet::api::router;
use classnet::cli::{self, Cli};
use classnet::service::Service;
use classnet_core::study::synthetic_classroom;
use clap::Parser;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const ROSTER: &str = "pseudonym,full_name,age,gender,class\n,Ana Pérez Gil,17,F,1A\n,Luis Martín Sanz,16,M,1A\n,Eva Ruiz Soto,17,F,1A\n";
const REAL_NAMES: [&str; 3] = ["Ana Pérez Gil", "Luis Martín Sanz", "Eva Ruiz Soto"];

struct Api {
    app: Router,
    dir: tempfile::TempDir,
}

impl Api {
    fn new() -> Api {
        let dir = tempfile::tempdir().unwrap();
        let svc = Arc::new(Service::open(dir.path()).unwrap());
        Api {
            app: router(svc, None),
            dir,
        }
    }

    async fn call(&self, method: &str, uri: &str, body: Option<String>) -> (StatusCode, String) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json")
            .body(body.map(Body::from).unwrap_or_else(Body::empty))
            .unwrap();
        let res = self.app.clone().oneshot(req).await.unwrap();
        let status = res.status();
        let bytes = res.into_body().collect().await.unwrap().to_bytes();
        (status, String::from_utf8(bytes.to_vec()).unwrap())
    }

    async fn json(&self, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let (s, text) = self.call(method, uri, body.map(|b| b.to_string())).await;
        (s, serde_json::from_str(&text).unwrap_or(Value::String(text)))
    }

    /// A three-student study with complete answers, not yet analyzed.
    async fn collecting(&self) -> String {
        let (s, info) = self.json("POST", "/studies", Some(json!({"title": "Smoke", "seed": 5}))).await;
        assert_eq!(s, StatusCode::CREATED);
        let id = info["id"].as_str().unwrap().to_owned();
        let (s, _) = self.call("POST", &format!("/studies/{id}/roster"), Some(ROSTER.into())).await;
        assert_eq!(s, StatusCode::OK);
        let answers = serde_json::to_value(synthetic_classroom(3, 2).unwrap().answers).unwrap();
        let (s, report) = self.json("POST", &format!("/studies/{id}/responses"), Some(answers)).await;
        assert_eq!(s, StatusCode::OK, "{report}");
        id
    }
}

#[tokio::test]
async fn smoke_pipeline_lists_the_five_graphs() {
    let api = Api::new();
    let id = api.collecting().await;
    let (s, first) = api.call("POST", &format!("/studies/{id}/analyze"), None).await;
    assert_eq!(s, StatusCode::OK);
    let (s, names) = api.json("GET", &format!("/studies/{id}/graphs"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(names, json!(["friendship", "acquaintances", "partners", "friends", "consumption"]));

    let (_, second) = api.call("POST", &format!("/studies/{id}/analyze"), None).await;
    let strip = |t: &str| {
        let mut v: Value = serde_json::from_str(t).unwrap();
        v.as_object_mut().unwrap().remove("version");
        v
    };
    assert_eq!(strip(&first), strip(&second));

    let (s, g) = api.json("GET", &format!("/studies/{id}/graphs/friends"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(g["nodes"].as_array().unwrap().len(), 3);
    assert!(g["annotations"]["density"].is_number());
    assert!(g["nodes"][0]["attrs"]["audit_zone"].is_string());

    let (s, ind) = api.json("GET", &format!("/studies/{id}/individuals/1"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(ind["report"]["friendship_paragraph"].as_str().unwrap().contains("declares to have"));
    for tool in ["mediators", "influencers"] {
        let (s, list) = api.json("GET", &format!("/studies/{id}/individuals/1/{tool}"), None).await;
        assert_eq!(s, StatusCode::OK);
        assert!(list.is_array());
    }
    let (s, net) = api.call("GET", &format!("/studies/{id}/export/friends.net"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(net.starts_with("*Vertices 3\n"));
}

#[tokio::test]
async fn error_statuses() {
    let api = Api::new();
    assert_eq!(api.call("GET", "/studies/nope/graphs", None).await.0, StatusCode::NOT_FOUND);
    let (_, info) = api.json("POST", "/studies", Some(json!({"title": "E"}))).await;
    let id = info["id"].as_str().unwrap().to_owned();
    assert_eq!(api.call("POST", &format!("/studies/{id}/analyze"), None).await.0, StatusCode::CONFLICT);
    assert_eq!(api.call("GET", &format!("/studies/{id}/graphs"), None).await.0, StatusCode::CONFLICT);

    api.call("POST", &format!("/studies/{id}/roster"), Some(ROSTER.into())).await;
    // Student 2 never answers.
    let answers: Vec<_> = synthetic_classroom(3, 2)
        .unwrap()
        .answers
        .into_iter()
        .filter(|a| a.person.0 != 2)
        .collect();
    let (s, _) = api
        .json("POST", &format!("/studies/{id}/responses"), Some(serde_json::to_value(&answers).unwrap()))
        .await;
    assert_eq!(s, StatusCode::OK);
    let (s, body) = api.json("POST", &format!("/studies/{id}/analyze"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["report"]["missing_respondents"], json!([2]));

    let mut bad = serde_json::to_value(&answers[..1]).unwrap();
    bad[0]["value"] = json!(99);
    let (s, body) = api.json("POST", &format!("/studies/{id}/responses"), Some(bad)).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["report"]["invalid_answers"].as_array().unwrap().len(), 1);

    assert_eq!(api.call("GET", &format!("/studies/{id}/individuals/0"), None).await.0, StatusCode::CONFLICT);
}

#[tokio::test]
async fn real_names_never_leave_the_identity_file() {
    let api = Api::new();
    let id = api.collecting().await;
    api.call("POST", &format!("/studies/{id}/analyze"), None).await;
    let identity = std::fs::read_to_string(api.dir.path().join(format!("{id}.identity.json"))).unwrap();
    for name in REAL_NAMES {
        assert!(identity.contains(name));
    }

    let mut seen = String::new();
    for uri in [
        format!("/studies/{id}"),
        format!("/studies/{id}/questionnaire"),
        format!("/studies/{id}/graphs"),
        format!("/studies/{id}/export/friendship.net"),
        format!("/studies/{id}/export/friendship.csv"),
    ] {
        seen.push_str(&api.call("GET", &uri, None).await.1);
    }
    for name in ["friendship", "acquaintances", "partners", "friends", "consumption"] {
        seen.push_str(&api.call("GET", &format!("/studies/{id}/graphs/{name}"), None).await.1);
    }
    for pid in 0..3 {
        for suffix in ["", "/mediators", "/influencers"] {
            seen.push_str(&api.call("GET", &format!("/studies/{id}/individuals/{pid}{suffix}"), None).await.1);
        }
    }
    seen.push_str(&std::fs::read_to_string(api.dir.path().join(format!("{id}.study.json"))).unwrap());
    for name in REAL_NAMES {
        for part in name.split(' ') {
            assert!(!seen.contains(part), "{part} leaked");
        }
    }
}

#[tokio::test]
async fn cli_matches_the_http_api() {
    let api = Api::new();
    let id = api.collecting().await;
    let data_dir = api.dir.path().to_str().unwrap().to_owned();
    let run = |args: &[&str]| {
        let mut argv = vec!["classnet", "--data-dir", &data_dir];
        argv.extend_from_slice(args);
        let mut out = Vec::new();
        cli::run(&Cli::parse_from(argv), &mut out).unwrap();
        String::from_utf8(out).unwrap()
    };

    let summary = run(&["analyze", &id]);
    // A fresh router so the HTTP side rereads what the CLI committed.
    let api2 = Api {
        app: router(Arc::new(Service::open(api.dir.path()).unwrap()), None),
        dir: tempfile::tempdir().unwrap(),
    };
    for name in ["friendship", "friends"] {
        let (_, g) = api2.json("GET", &format!("/studies/{id}/graphs/{name}"), None).await;
        let density = format!("{:.4}", g["annotations"]["density"].as_f64().unwrap());
        let line = summary.lines().find(|l| l.starts_with(&format!("{name} "))).unwrap();
        assert!(line.contains(&density), "{line} vs {density}");
    }

    let exported = run(&["export", &id, "friends", "--format", "pajek"]);
    let (_, served) = api2.call("GET", &format!("/studies/{id}/export/friends.net"), None).await;
    assert_eq!(exported, served);
    let csv = run(&["export", &id, "friends", "--format", "csv"]);
    assert!(csv.starts_with("src_label,dst_label,weight\n"));

    let (_, roster) = api2.json("GET", &format!("/studies/{id}/questionnaire"), None).await;
    let friendship = roster["questions"].as_array().unwrap().iter().find(|q| q["id"] == "friendship").unwrap();
    let pseudonym = friendship["targets"][0]["pseudonym"].as_str().unwrap().to_owned();
    let report = run(&["report", &id, &pseudonym]);
    let paragraphs: Vec<&str> = report.trim_end().split("\n\n").collect();
    assert_eq!(paragraphs.len(), 2);
    assert!(paragraphs[0].starts_with(&pseudonym));
}

#[test]
fn cli_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cli = Cli::parse_from(["classnet", "--data-dir", dir.path().to_str().unwrap(), "analyze", "study-9"]);
    assert!(cli::run(&cli, &mut Vec::new()).is_err());
    let demo = Cli::parse_from(["classnet", "--data-dir", dir.path().to_str().unwrap(), "study", "demo", "--students", "6"]);
    let mut out = Vec::new();
    cli::run(&demo, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().trim(), "study-1");
}
