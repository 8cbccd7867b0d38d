//! HTTP endpoints through the router and the WebSocket protocol over a
//! real socket.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use futures_util::{SinkExt, StreamExt};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tokio_tungstenite::tungstenite::Message;
use tower::ServiceExt;

use proactive_cli::service::{router, serve};
use proactive_cli::Engine;
use proactive_core::gestures::{synth, TraceRecord};
use proactive_core::simulator::{bundled_suite_dir, load_suite};

fn engine() -> Arc<Engine> {
    Arc::new(Engine::rule_based().with_scenarios(load_suite(&bundled_suite_dir()).unwrap()))
}

fn snapshot(id: &str) -> Value {
    let text = std::fs::read_to_string(bundled_suite_dir().join(format!("{id}.json"))).unwrap();
    serde_json::from_str::<Value>(&text).unwrap()["snapshot"].clone()
}

async fn call(method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = router(engine()).oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

#[tokio::test]
async fn suggest_grocery_rush_is_binary() {
    let (status, body) = call(
        "POST",
        "/suggest",
        Some(json!({"v": 1, "snapshot": snapshot("12-grocery-rush")})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["v"], 1);
    assert_eq!(body["suggestion"]["query_type"], "binary");
    assert_eq!(body["plan"]["presentation"], "audio_only");

    let (_, again) = call(
        "POST",
        "/suggest",
        Some(json!({"v": 1, "snapshot": snapshot("12-grocery-rush")})),
    )
    .await;
    assert_eq!(body, again);
}

#[tokio::test]
async fn suggest_rejects_bad_requests() {
    let (status, body) = call(
        "POST",
        "/suggest",
        Some(json!({"snapshot": snapshot("12-grocery-rush")})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "unsupported_version");

    let mut snap = snapshot("12-grocery-rush");
    snap["mood"] = "tired".into();
    let (status, body) = call(
        "POST",
        "/suggest",
        Some(json!({"v": 1, "snapshot": snap.clone()})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "invalid_context");
    let (status, _) = call(
        "POST",
        "/suggest",
        Some(json!({"v": 1, "snapshot": snap, "lenient": true})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);

    let request = Request::post("/suggest")
        .body(Body::from("not json"))
        .unwrap();
    let response = router(engine()).oneshot(request).await.unwrap();
    assert_eq!(response.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn suggest_from_scene_text() {
    let body =
        json!({"v": 1, "scene": "sitting in a restaurant I've never been to, reading the menu"});
    let (status, body) = call("POST", "/suggest", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["suggestion"]["query_type"], "multi_choice");
}

#[tokio::test]
async fn respond_maps_value_to_action() {
    let (status, body) = call(
        "POST",
        "/respond",
        Some(json!({"v": 1, "scenario_id": "01-menu-unfamiliar", "value": "option2"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["selected_action"], "Vegetarian options");
    assert!(body["text"]
        .as_str()
        .unwrap()
        .contains("Vegetarian options"));

    let (_, body) = call(
        "POST",
        "/respond",
        Some(json!({"v": 1, "scenario_id": "12-grocery-rush", "value": "no"})),
    )
    .await;
    assert_eq!(body["selected_action"], Value::Null);

    let (status, body) = call(
        "POST",
        "/respond",
        Some(json!({"v": 1, "scenario_id": "12-grocery-rush", "value": "option1"})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "illegal_value");

    let (status, _) = call(
        "POST",
        "/respond",
        Some(json!({"v": 1, "scenario_id": "nope", "value": "yes"})),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn listings() {
    let (status, body) = call("GET", "/scenarios", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["v"], 1);
    let list = body["scenarios"].as_array().unwrap();
    assert_eq!(list.len(), 12);
    assert_eq!(list[0]["id"], "01-menu-unfamiliar");

    let (status, body) = call("GET", "/policy", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["policy"]["gating_rules"].is_array());
}

type Socket =
    tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn connect() -> Socket {
    let (tx, rx) = tokio::sync::oneshot::channel();
    tokio::spawn(serve(engine(), 0, move |addr| {
        let _ = tx.send(addr);
    }));
    let addr = rx.await.unwrap();
    let (socket, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/session"))
        .await
        .unwrap();
    socket
}

async fn send(socket: &mut Socket, seq: u64, kind: &str, payload: Value) {
    let frame = json!({"v": 1, "seq": seq, "kind": kind, "payload": payload});
    socket
        .send(Message::Text(frame.to_string().into()))
        .await
        .unwrap();
}

async fn recv(socket: &mut Socket) -> Value {
    loop {
        match socket.next().await.unwrap().unwrap() {
            Message::Text(t) => return serde_json::from_str(&t).unwrap(),
            _ => continue,
        }
    }
}

#[tokio::test]
async fn session_runs_prompt_decision_response() {
    let mut ws = connect().await;
    send(
        &mut ws,
        1,
        "scenario_start",
        json!({"scenario_id": "12-grocery-rush"}),
    )
    .await;
    let prompt = recv(&mut ws).await;
    assert_eq!(prompt["kind"], "prompt");
    assert_eq!(prompt["v"], 1);
    assert_eq!(prompt["payload"]["suggestion"]["query_type"], "binary");
    let gaze_reason = prompt["payload"]["plan"]["suppressed"]
        .as_array()
        .unwrap()
        .iter()
        .find(|n| n["modality"] == "gaze")
        .unwrap()["reason"]
        .clone();
    assert!(gaze_reason.as_str().unwrap().contains("audio-only"));

    send(
        &mut ws,
        2,
        "input_event",
        json!({"input": {"modality": "gaze", "value": "yes", "t": 50}}),
    )
    .await;
    let error = recv(&mut ws).await;
    assert_eq!(error["kind"], "error");
    assert_eq!(error["payload"]["code"], "modality_disabled");
    assert_eq!(error["payload"]["echo_seq"], 2);

    let nod: Vec<TraceRecord> = synth::nod(0, 3, 0.1, 100)
        .into_iter()
        .map(TraceRecord::Head)
        .collect();
    send(&mut ws, 3, "input_event", json!({"samples": nod})).await;
    let decision = recv(&mut ws).await;
    let response = recv(&mut ws).await;
    assert_eq!(decision["kind"], "decision");
    assert_eq!(decision["payload"]["input"]["value"], "yes");
    assert_eq!(response["kind"], "response");
    assert!(!response["payload"]["text"].as_str().unwrap().is_empty());
    let seqs: Vec<u64> = [&prompt, &error, &decision, &response]
        .iter()
        .map(|m| m["seq"].as_u64().unwrap())
        .collect();
    assert_eq!(seqs, [1, 2, 3, 4]);

    ws.send(Message::Text("{broken".into())).await.unwrap();
    let error = recv(&mut ws).await;
    assert_eq!(error["payload"]["code"], "malformed");
    send(
        &mut ws,
        4,
        "scenario_start",
        json!({"snapshot": snapshot("06-museum-crowded")}),
    )
    .await;
    let prompt = recv(&mut ws).await;
    assert_eq!(prompt["payload"]["suggestion"]["query_type"], "icon");
}

#[tokio::test]
async fn concurrent_sessions_have_independent_seq() {
    let mut a = connect().await;
    let mut b = connect().await;
    send(
        &mut a,
        10,
        "scenario_start",
        json!({"scenario_id": "01-menu-unfamiliar"}),
    )
    .await;
    send(
        &mut b,
        1,
        "scenario_start",
        json!({"scenario_id": "04-cooking-hands"}),
    )
    .await;
    let pa = recv(&mut a).await;
    let pb = recv(&mut b).await;
    assert_eq!((pa["seq"].as_u64(), pb["seq"].as_u64()), (Some(1), Some(1)));
    assert_eq!(pa["payload"]["scenario_id"], "01-menu-unfamiliar");
    assert_eq!(pb["payload"]["scenario_id"], "04-cooking-hands");

    send(
        &mut b,
        2,
        "input_event",
        json!({"input": {"modality": "voice", "value": "yes", "t": 10}}),
    )
    .await;
    send(
        &mut a,
        11,
        "input_event",
        json!({"input": {"modality": "voice", "value": "option1", "t": 10}}),
    )
    .await;
    let (da, ra) = (recv(&mut a).await, recv(&mut a).await);
    let (db, rb) = (recv(&mut b).await, recv(&mut b).await);
    assert_eq!((da["seq"].as_u64(), ra["seq"].as_u64()), (Some(2), Some(3)));
    assert_eq!((db["seq"].as_u64(), rb["seq"].as_u64()), (Some(2), Some(3)));
    assert_eq!(ra["payload"]["selected_action"], "Top dishes");
}
