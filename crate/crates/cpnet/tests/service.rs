use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use cpnet::formats::{net_to_json, parse_net};
use cpnet::service::{router, AppState, ServiceConfig};
use cpnet_core::{CpNet, Outcome, SwapInstance};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const SINGLE_EDGE: &str = include_str!("fixtures/single_edge.json");
const PARTIAL: &str = include_str!("fixtures/partial.json");

fn app(config: ServiceConfig) -> Router {
    router(AppState::load(config).unwrap())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn pending(view: &Value) -> SwapInstance {
    let q = &view["query"];
    let vec = |k: &str| q[k].as_array().unwrap().iter().map(|d| d.as_u64().unwrap() as u8).collect::<Vec<_>>();
    SwapInstance::new(Outcome::from(vec("first")), Outcome::from(vec("second"))).unwrap()
}

/// What a person holding `target` in mind answers.
fn choice(target: &CpNet, x: &SwapInstance) -> &'static str {
    if target.evaluate(x) {
        "first"
    } else if target.evaluate(&x.reversed()) {
        "second"
    } else {
        "unknown"
    }
}

async fn drive(app: &Router, id: &str, target: &CpNet, mut view: Value) -> (Value, Vec<SwapInstance>) {
    let mut seen = Vec::new();
    while view["status"] == "awaiting_answer" {
        let x = pending(&view);
        assert!(!seen.contains(&x) && !seen.contains(&x.reversed()), "{x} presented twice");
        seen.push(x.clone());
        let (code, next) = call(app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": choice(target, &x) }))).await;
        assert_eq!(code, StatusCode::OK, "{next}");
        view = next;
    }
    (view, seen)
}

fn tree_request(n: usize, completeness: &str) -> Value {
    json!({ "spec": { "n": n, "m": 2, "k": 1, "completeness": completeness }, "learner": "tree" })
}

#[tokio::test]
async fn tree_session_recovers_a_single_edge() {
    let app = app(ServiceConfig::default());
    let target = parse_net(SINGLE_EDGE, None).unwrap();
    let (code, view) = call(&app, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
    assert_eq!(code, StatusCode::CREATED);
    assert_eq!(view["query"]["attributes"], json!(["A", "B", "C"]));
    assert_eq!(view["allows_unknown"], false);
    let id = view["id"].as_str().unwrap().to_string();
    let (done, seen) = drive(&app, &id, &target, view).await;
    assert_eq!(done["status"], "done");
    assert!(seen.len() <= 8);
    let (code, model) = call(&app, "GET", &format!("/sessions/{id}/model"), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(model["net"], serde_json::to_value(net_to_json(&target)).unwrap());
    assert!(model["dot"].as_str().unwrap().contains("v0 -> v1;"));
}

#[tokio::test]
async fn kbounded_session_with_names() {
    let app = app(ServiceConfig::default());
    let target = parse_net(include_str!("fixtures/running_example.json"), None).unwrap();
    let req = json!({
        "spec": { "n": 3, "m": 2, "k": 2 },
        "learner": "kbounded",
        "universal": { "m": 2, "z": 2, "k": 2, "vectors": [[0, 0], [0, 1], [1, 0], [1, 1]] },
        "names": { "attributes": ["main", "wine", "dessert"], "values": [["fish", "meat"], ["white", "red"], ["cake", "fruit"]] }
    });
    let (code, view) = call(&app, "POST", "/sessions", Some(req)).await;
    assert_eq!(code, StatusCode::CREATED);
    assert_eq!(view["query"]["attributes"][1], "wine");
    assert_eq!(view["query"]["first_names"].as_array().unwrap().len(), 3);
    let id = view["id"].as_str().unwrap().to_string();
    let (done, _) = drive(&app, &id, &target, view).await;
    assert_eq!(done["net"], serde_json::to_value(net_to_json(&target)).unwrap());
}

#[tokio::test]
async fn incomplete_sessions_accept_unknown() {
    let app = app(ServiceConfig::default());
    let target = parse_net(PARTIAL, None).unwrap();
    let (_, view) = call(&app, "POST", "/sessions", Some(tree_request(2, "incomplete"))).await;
    assert_eq!(view["allows_unknown"], true);
    let id = view["id"].as_str().unwrap().to_string();
    let (done, seen) = drive(&app, &id, &target, view).await;
    assert_eq!(done["status"], "done");
    assert!(seen.len() <= 8);
    assert_eq!(done["net"], serde_json::to_value(net_to_json(&target)).unwrap());
}

#[tokio::test]
async fn error_contract() {
    let app = app(ServiceConfig::default());
    let (code, _) = call(&app, "GET", "/sessions/missing", None).await;
    assert_eq!(code, StatusCode::NOT_FOUND);
    let (code, _) = call(&app, "POST", "/sessions/missing/answer", Some(json!({ "answer": "first" }))).await;
    assert_eq!(code, StatusCode::NOT_FOUND);

    let (_, view) = call(&app, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
    let id = view["id"].as_str().unwrap().to_string();
    let answer = format!("/sessions/{id}/answer");
    let (code, _) = call(&app, "POST", &answer, Some(json!({ "answer": "unknown" }))).await;
    assert_eq!(code, StatusCode::UNPROCESSABLE_ENTITY);
    let (code, _) = call(&app, "GET", &format!("/sessions/{id}/model"), None).await;
    assert_eq!(code, StatusCode::CONFLICT);

    // the same click sent twice: the second carries a stale sequence number
    let (code, _) = call(&app, "POST", &answer, Some(json!({ "answer": "first", "seq": 0 }))).await;
    assert_eq!(code, StatusCode::OK);
    let (code, _) = call(&app, "POST", &answer, Some(json!({ "answer": "first", "seq": 0 }))).await;
    assert_eq!(code, StatusCode::CONFLICT);

    let (code, view) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!((code, view["status"].clone()), (StatusCode::OK, json!("aborted")));
    let (code, _) = call(&app, "POST", &answer, Some(json!({ "answer": "first" }))).await;
    assert_eq!(code, StatusCode::CONFLICT);

    let (code, _) = call(&app, "POST", "/sessions", Some(json!({ "spec": { "n": 3, "m": 2, "k": 2 }, "learner": "tree" }))).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
    let weak = json!({ "spec": { "n": 3, "m": 2, "k": 2 }, "learner": "kbounded",
        "universal": { "m": 2, "z": 2, "k": 1, "vectors": [[0, 0], [1, 1]] } });
    let (code, _) = call(&app, "POST", "/sessions", Some(weak)).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn answers_after_completion_conflict() {
    let app = app(ServiceConfig::default());
    let target = parse_net(SINGLE_EDGE, None).unwrap();
    let (_, view) = call(&app, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
    let id = view["id"].as_str().unwrap().to_string();
    drive(&app, &id, &target, view).await;
    let (code, _) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "first" }))).await;
    assert_eq!(code, StatusCode::CONFLICT);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = ServiceConfig { data_dir: Some(dir.path().to_path_buf()), session_timeout: Duration::from_secs(3600) };
    let target = parse_net(SINGLE_EDGE, None).unwrap();
    let first = app(config.clone());
    let (_, mut view) = call(&first, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
    let id = view["id"].as_str().unwrap().to_string();
    for _ in 0..3 {
        let x = pending(&view);
        view = call(&first, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": choice(&target, &x) }))).await.1;
    }
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{id}.json"))).unwrap()).unwrap();
    assert_eq!(stored["transcript"]["kind"], "human");
    assert_eq!(stored["transcript"]["distinct"], 3);

    let second = app(config);
    let (code, restored) = call(&second, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(restored, view);
    let (done, _) = drive(&second, &id, &target, restored).await;
    assert_eq!(done["net"], serde_json::to_value(net_to_json(&target)).unwrap());
}

#[tokio::test]
async fn replaying_a_transcript_repeats_the_session() {
    let target = parse_net(SINGLE_EDGE, None).unwrap();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let app = app(ServiceConfig::default());
        let (_, view) = call(&app, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
        let id = view["id"].as_str().unwrap().to_string();
        runs.push(drive(&app, &id, &target, view).await);
    }
    assert_eq!(runs[0].1, runs[1].1);
    assert_eq!(runs[0].0["net"], runs[1].0["net"]);
}

#[tokio::test]
async fn idle_sessions_time_out() {
    let app = app(ServiceConfig { data_dir: None, session_timeout: Duration::ZERO });
    let (_, view) = call(&app, "POST", "/sessions", Some(tree_request(3, "complete"))).await;
    let id = view["id"].as_str().unwrap().to_string();
    let (_, view) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(view["status"], "aborted");
}
