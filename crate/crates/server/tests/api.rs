use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use loa_core::agent::{loa_decide, AgentConfig};
use loa_core::parser::{FactSet, Perception};
use loa_core::rulebook::Rulebook;
use loa_server::{app, app_with_store, ServerConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let builder = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => builder.header("content-type", "application/json").body(Body::from(b.to_string())).unwrap(),
        None => builder.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

async fn create(app: &Router, rulebook: &str) -> Value {
    let (status, v) = send(
        app,
        "POST",
        "/api/sessions",
        Some(json!({"game": "coin_collector", "rulebook": rulebook, "layout": "fix_a"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{v}");
    v
}

async fn step(app: &Router, id: &str, command: &str) -> (StatusCode, Value) {
    send(app, "POST", &format!("/api/sessions/{id}/step"), Some(json!({ "command": command }))).await
}

fn recommended(payload: &Value) -> Vec<String> {
    payload["recommendations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["recommended"] == json!(true))
        .map(|r| r["action"].as_str().unwrap().to_string())
        .collect()
}

fn error_code(v: &Value) -> &str {
    v["error"]["code"].as_str().unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored payload. Set `UPDATE_GOLDEN=1` to rewrite.
fn check_golden(name: &str, mut actual: Value) {
    if let Some(obj) = actual.as_object_mut() {
        obj.remove("id");
    }
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
    }
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(actual, expected, "golden file {name} differs");
}

fn node<'a>(payload: &'a Value, id: &str) -> &'a Value {
    payload["lnn"]["nodes"].as_array().unwrap().iter().find(|n| n["id"] == json!(id)).unwrap()
}

#[tokio::test]
async fn create_and_step_match_golden_files() {
    let app = app(&ServerConfig::default());
    let created = create(&app, "avoid_revisit").await;
    assert_eq!(recommended(&created), vec!["go north"]);
    assert_eq!(created["observation"], "= Room A =\nYou are in room A. There is an exit to the north.");
    assert_eq!(node(&created, "go(north)")["truth"], "true");
    check_golden("fix_a_create.json", created.clone());

    let (status, stepped) = step(&app, created["id"].as_str().unwrap(), "go north").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(stepped["reward"], json!(0.0));
    assert_eq!(recommended(&stepped), vec!["go east"]);
    check_golden("fix_a_step_go_north.json", stepped);
}

#[tokio::test]
async fn full_fixture_game() {
    let app = app(&ServerConfig::default());
    let created = create(&app, "simple_nav").await;
    let id = created["id"].as_str().unwrap();
    let (_, b) = step(&app, id, "go north").await;
    let obs = b["observation"].as_str().unwrap();
    assert!(obs.contains("east") && obs.contains("south"));
    assert_eq!(recommended(&b), vec!["go east", "go south"]);
    step(&app, id, "go east").await;
    let (_, c) = step(&app, id, "take coin").await;
    assert_eq!((c["reward"].clone(), c["score"].clone(), c["done"].clone()), (json!(1.0), json!(1), json!(true)));
    let (status, err) = step(&app, id, "go west").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(error_code(&err), "session_done");

    let (_, view) = send(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(view["history"].as_array().unwrap().len(), 3);
    assert_eq!(view["done"], json!(true));
    assert_eq!(view["facts"], json!(["found(west)", "visited(west)"]));
}

#[tokio::test]
async fn invalid_command_leaves_state_unchanged() {
    let app = app(&ServerConfig::default());
    let created = create(&app, "avoid_revisit").await;
    let id = created["id"].as_str().unwrap();
    let (status, p) = step(&app, id, "dance").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(p["observation"], "Sorry, I don't understand that command.");
    assert_eq!(recommended(&p), vec!["go north"]);
    let (_, view) = send(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(view["facts"], json!(["found(north)"]));
}

#[tokio::test]
async fn constraint_rulebook_flags_contradiction_at_room_b() {
    let app = app(&ServerConfig::default());
    let created = create(&app, "constraint_revisit").await;
    let id = created["id"].as_str().unwrap();
    let (_, b) = step(&app, id, "go north").await;
    assert_eq!(recommended(&b), vec!["go east"]);
    assert_eq!(node(&b, "go(south)")["truth"], "contradiction");
    let (_, lnn) = send(&app, "GET", &format!("/api/sessions/{id}/lnn"), None).await;
    assert_eq!(lnn, b["lnn"]);
}

#[tokio::test]
async fn recommendations_agree_with_offline_decisions() {
    let app = app(&ServerConfig::default());
    let commands = ["go north", "go south", "jump", "go north", "go east", "go west", "go east", "take coin"];
    for rb_name in ["simple_nav", "avoid_revisit", "constraint_revisit"] {
        let created = create(&app, rb_name).await;
        let id = created["id"].as_str().unwrap();
        let rb = Rulebook::builtin(rb_name).unwrap();
        let mut graph = rb.compile().unwrap();
        let mut perception = Perception::new(created["observation"].as_str().unwrap());
        let offline = |graph: &mut _, facts: &FactSet| {
            serde_json::to_value(loa_decide(graph, facts, &AgentConfig::default()).unwrap().recommendations).unwrap()
        };
        assert_eq!(created["recommendations"], offline(&mut graph, &perception.facts()));
        for cmd in commands {
            let (status, p) = step(&app, id, cmd).await;
            if status != StatusCode::OK {
                break;
            }
            perception.observe(&loa_core::game::parse_command(cmd), p["observation"].as_str().unwrap());
            assert_eq!(p["recommendations"], offline(&mut graph, &perception.facts()), "{rb_name} after {cmd}");
        }
    }
}

#[tokio::test]
async fn replayed_sessions_produce_identical_payloads() {
    let app = app(&ServerConfig::default());
    let commands = ["go north", "go south", "go north", "go east", "take coin"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let mut created = create(&app, "avoid_revisit").await;
        let id = created["id"].as_str().unwrap().to_string();
        created.as_object_mut().unwrap().remove("id");
        let mut bytes = vec![created.to_string()];
        for c in commands {
            bytes.push(step(&app, &id, c).await.1.to_string());
        }
        runs.push(bytes);
    }
    assert_eq!(runs[0], runs[1]);
}

#[tokio::test]
async fn errors_use_the_envelope() {
    let app = app(&ServerConfig::default());
    let (s, v) = send(&app, "POST", "/api/sessions", Some(json!({"game": "zork", "rulebook": "simple_nav"}))).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_game"));
    let (s, v) =
        send(&app, "POST", "/api/sessions", Some(json!({"game": "coin_collector", "rulebook": "nonsense"}))).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_rulebook"));
    let (s, v) = send(&app, "POST", "/api/sessions", Some(json!({"rulebook": 3}))).await;
    assert_eq!((s, error_code(&v)), (StatusCode::BAD_REQUEST, "bad_request"));
    let (s, v) = send(
        &app,
        "POST",
        "/api/sessions",
        Some(json!({"game": "coin_collector", "rulebook": "simple_nav", "chain_length": 0})),
    )
    .await;
    assert_eq!((s, error_code(&v)), (StatusCode::BAD_REQUEST, "bad_request"));
    let (s, v) = step(&app, "no-such-id", "go north").await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_session"));
    let (s, v) = send(&app, "GET", "/api/sessions/no-such-id/lnn", None).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_session"));
    let (s, v) = send(&app, "GET", "/api/runs/missing", None).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_run"));
    assert!(v["error"]["message"].is_string());
}

#[tokio::test]
async fn two_creates_get_distinct_ids() {
    let app = app(&ServerConfig::default());
    let a = create(&app, "simple_nav").await;
    let b = create(&app, "simple_nav").await;
    assert_ne!(a["id"], b["id"]);
}

#[tokio::test]
async fn generated_layout_sessions() {
    let app = app(&ServerConfig::default());
    let req =
        json!({"game": "coin_collector", "rulebook": "avoid_revisit", "chain_length": 5, "branches": 2, "seed": 3});
    let (s, v) = send(&app, "POST", "/api/sessions", Some(req)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(recommended(&v).len(), 1);
}

#[tokio::test]
async fn concurrent_step_is_rejected_as_busy() {
    let (app, store) = app_with_store(&ServerConfig::default());
    let created = create(&app, "simple_nav").await;
    let id = created["id"].as_str().unwrap();
    let session = store.get(id).unwrap();
    let held = session.lock().await;
    let (s, v) = step(&app, id, "go north").await;
    assert_eq!((s, error_code(&v)), (StatusCode::CONFLICT, "session_busy"));
    drop(held);
    let (s, _) = step(&app, id, "go north").await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn distinct_sessions_step_in_parallel() {
    let app = app(&ServerConfig::default());
    let mut ids = Vec::new();
    for _ in 0..8 {
        ids.push(create(&app, "avoid_revisit").await["id"].as_str().unwrap().to_string());
    }
    let tasks: Vec<_> = ids
        .into_iter()
        .map(|id| {
            let app = app.clone();
            tokio::spawn(async move {
                let mut last = Value::Null;
                for c in ["go north", "go east", "take coin"] {
                    last = step(&app, &id, c).await.1;
                }
                last
            })
        })
        .collect();
    for t in tasks {
        assert_eq!(t.await.unwrap()["score"], json!(1));
    }
}

#[tokio::test]
async fn games_catalog() {
    let app = app(&ServerConfig::default());
    let (s, v) = send(&app, "GET", "/api/games", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["games"][0]["id"], "coin_collector");
    assert_eq!(v["games"][0]["rulebooks"], json!(["simple_nav", "avoid_revisit", "constraint_revisit"]));
}

#[tokio::test]
async fn runs_are_read_from_the_runs_directory() {
    let dir = tempfile::tempdir().unwrap();
    let lines: String =
        (0..10).map(|i| format!("{{\"episode\":{i},\"steps\":{},\"return\":1.0,\"solved\":true}}\n", 10 - i)).collect();
    std::fs::write(dir.path().join("tabq-seed0.jsonl"), lines).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let config = ServerConfig { runs_dir: Some(dir.path().to_path_buf()), ..ServerConfig::default() };
    let app = app(&config);
    let (_, list) = send(&app, "GET", "/api/runs", None).await;
    assert_eq!(list["runs"].as_array().unwrap().len(), 1);
    assert_eq!(list["runs"][0]["id"], "tabq-seed0");
    assert_eq!(list["runs"][0]["median_steps"], json!(5.5));
    let (s, run) = send(&app, "GET", "/api/runs/tabq-seed0", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(run["metrics"].as_array().unwrap().len(), 10);
    assert_eq!(run["first_quintile_median"], json!(9.5));
    let (s, v) = send(&app, "GET", "/api/runs/..%2Fsecret", None).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "unknown_run"));
}

#[tokio::test]
async fn static_files_are_served_from_the_ui_dir() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>ui</html>").unwrap();
    let config = ServerConfig { ui_dir: Some(dir.path().to_path_buf()), ..ServerConfig::default() };
    let app = app(&config);
    let resp = app.clone().oneshot(Request::builder().uri("/").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<html>ui</html>");
    let (s, v) = send(&app, "GET", "/api/nowhere", None).await;
    assert_eq!((s, error_code(&v)), (StatusCode::NOT_FOUND, "not_found"));
}
