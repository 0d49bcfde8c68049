use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use silting_service::{router, AppState, Session};

fn app() -> (Router, Arc<AppState>) {
    let st = Arc::new(AppState::new(None));
    (router(st.clone()), st)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

async fn create(app: &Router, builtin: &str) -> (String, Value) {
    let (status, v) = call(app, "POST", "/sessions", Some(json!({ "builtin": builtin }))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    (v["session_id"].as_str().unwrap().to_string(), v)
}

fn labels(node: &Value) -> Vec<String> {
    node["summands"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn create_a2_has_two_classes() {
    let (app, _) = app();
    let (_, v) = create(&app, "a2").await;
    assert_eq!(labels(&v["root"]), ["P1", "P2"]);
    assert_eq!(v["certificate"]["status"], "Verified");
}

#[tokio::test]
async fn state_lists_classes_and_mutations() {
    let (app, _) = app();
    let (id, _) = create(&app, "a2").await;
    let (status, v) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    let classes = v["current"]["summands"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0]["graded_dims"], json!([{ "degree": 0, "dims": [1, 0] }]));
    assert_eq!(classes[0]["gamma"], json!([1, 0]));
    assert_eq!(v["available_mutations"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn mutate_then_undo() {
    let (app, _) = app();
    let (id, _) = create(&app, "a2").await;
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P1", "direction": "left" }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(labels(&v["node"]), ["P1[1]", "P2"]);
    assert_eq!(v["edge"]["source"], 0);
    assert_eq!(v["edge"]["target"], 1);
    assert_eq!(v["edge"]["label"], "P1");

    let (_, g) = call(&app, "GET", &format!("/sessions/{id}/graph"), None).await;
    assert_eq!(g["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(g["edges"].as_array().unwrap().len(), 1);

    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["current"]["id"], 0);
    assert_eq!(labels(&v["current"]), ["P1", "P2"]);
    let (_, g) = call(&app, "GET", &format!("/sessions/{id}/graph"), None).await;
    assert_eq!(g["nodes"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn right_mutation_records_the_left_arrow() {
    let (app, _) = app();
    let (id, _) = create(&app, "a2").await;
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P2", "direction": "right" }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["edge"]["source"], 1);
    assert_eq!(v["edge"]["target"], 0);
}

#[tokio::test]
async fn compare_nodes() {
    let (app, _) = app();
    let (id, _) = create(&app, "ab0").await;
    call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P1", "direction": "left" }))).await;
    let (status, v) = call(&app, "GET", &format!("/sessions/{id}/compare?a=0&b=1"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["relation"], "greater");
    let (_, v) = call(&app, "GET", &format!("/sessions/{id}/compare?a=1&b=0"), None).await;
    assert_eq!(v["relation"], "less");
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/compare?a=0&b=7"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/compare?a=x&b=0"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn mod_shift_graph_collapses_shifts() {
    let (app, _) = app();
    let (id, _) = create(&app, "dual-numbers").await;
    for _ in 0..2 {
        let (_, st) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
        let class = st["current"]["summands"][0]["summand_class"].clone();
        let (status, _) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": class, "direction": "left" }))).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (_, g) = call(&app, "GET", &format!("/sessions/{id}/graph?mod_shift=false"), None).await;
    assert_eq!(g["nodes"].as_array().unwrap().len(), 3);
    let (_, g) = call(&app, "GET", &format!("/sessions/{id}/graph?mod_shift=true"), None).await;
    assert_eq!(g["nodes"].as_array().unwrap().len(), 1);
    assert_eq!(g["mod_shift"], true);
}

#[tokio::test]
async fn errors() {
    let (app, _) = app();
    let (status, v) = call(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(v["error"], "UnknownSession");
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({ "vertices": ["1"], "arrows": [{ "name": "x", "from": "1", "to": "1" }], "relations": [], "path_length_cap": 4 }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    assert_eq!(v["error"], "MalformedAlgebra");
    let (status, _) = call(&app, "POST", "/sessions", Some(json!({ "builtin": "nonsense" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (id, _) = create(&app, "a2").await;
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P7", "direction": "left" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "InvalidSummandClass");
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P1", "direction": "up" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn busy_session_times_out_with_conflict() {
    let st = Arc::new(AppState::with_timeout(None, Duration::from_millis(50)));
    let app = router(st.clone());
    let (id, _) = create(&app, "a2").await;
    let guard = st.lock(&id).await.unwrap();
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": "P1", "direction": "left" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["error"], "SessionBusy");
    drop(guard);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_mutations_are_serialized() {
    let (app, st) = app();
    let (id, _) = create(&app, "a3").await;
    let mut tasks = Vec::new();
    for k in 0..12 {
        let (app, id) = (app.clone(), id.clone());
        let class = ["P1", "P2", "P3"][k % 3];
        tasks.push(tokio::spawn(async move {
            call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(json!({ "summand_class": class, "direction": "left" }))).await
        }));
    }
    let mut ok = 0;
    for t in tasks {
        let (status, _) = t.await.unwrap();
        // A class label can vanish from the current node after another mutation.
        assert!(status == StatusCode::OK || status == StatusCode::UNPROCESSABLE_ENTITY, "{status}");
        ok += usize::from(status == StatusCode::OK);
    }
    let s = st.lock(&id).await.unwrap();
    assert_eq!(s.history.len(), ok);
    let n = s.graph.nodes.len();
    assert!(s.graph.edges.iter().all(|e| e.source < n && e.target < n));
    let mut keys: Vec<_> = s.graph.nodes.iter().map(|n| n.summands.clone()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), n);
}

#[tokio::test]
async fn replaying_the_log_reproduces_the_graph() {
    let (app, st) = app();
    let (id, _) = create(&app, "ab0").await;
    let steps = [("P1", "left"), ("P2", "left"), ("undo", ""), ("undo", ""), ("P2", "left"), ("P1", "right")];
    for (class, dir) in steps {
        if class == "undo" {
            call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
        } else {
            let (_, st) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
            let cur = &st["current"]["summands"];
            let name = cur.as_array().unwrap().iter().find(|s| s["label"].as_str().unwrap().starts_with(class)).unwrap_or(&cur[0]);
            let body = json!({ "summand_class": name["summand_class"], "direction": dir });
            let (status, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), Some(body)).await;
            assert_eq!(status, StatusCode::OK, "{v}");
        }
    }
    let (_, graph) = call(&app, "GET", &format!("/sessions/{id}/graph"), None).await;
    let s = st.lock(&id).await.unwrap();
    let again = Session::replay("copy".into(), s.reg.clone(), &s.log).unwrap();
    assert_eq!(again.current, s.current);
    assert_eq!(again.history, s.history);
    assert_eq!(again.graph_view(false), graph);
}
