use std::collections::BTreeSet;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

use railgrid::circuit::{Circuit, Inventory};
use railgrid::constructibility::{check_pair, is_constructible};
use railgrid::geometry::{Cell, Direction, PieceMode, TurnCode, WidthConfig};
use railgrid::record::read_records;
use railgrid_designer::journal::{replay, Journal};
use railgrid_designer::{router, AppState, Move, Session};

fn app() -> Router {
    router(Arc::new(AppState::new(6, None)))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>, Option<String>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes, ctype)
}

async fn json_call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, bytes, _) = call(app, method, uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn create(app: &Router, body: Value) -> String {
    let (status, v) = json_call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

fn dir_move(d: u8) -> Value {
    json!({"kind": "direction", "direction": d})
}

fn turn_move(k: u8) -> Value {
    json!({"kind": "turn", "turn": k})
}

#[tokio::test]
async fn create_validates_inventory() {
    let app = app();
    let (status, v) = json_call(&app, "POST", "/sessions", Some(json!({"caps": [4, 4, 4, 4, 4, 4]}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["available"], 24);
    assert_eq!(v["status"], "open");

    let (status, v) = json_call(&app, "POST", "/sessions", Some(json!({}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["available"], Value::Null);

    for bad in [
        json!({"caps": [4, 4, -1, 4, 4, 4]}),
        json!({"caps": [4, 4]}),
        json!({"caps": "four"}),
        json!({"caps": [4, 4, 4, 4, 4, 4], "colour": "red"}),
        json!({"rail_width": 0.7}),
    ] {
        let (status, _) = json_call(&app, "POST", "/sessions", Some(bad.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{bad}");
    }
    let (status, _, _) = call(&app, "POST", "/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
}

#[tokio::test]
async fn empty_inventory_has_no_moves() {
    let app = app();
    let id = create(&app, json!({"caps": [0, 0, 0, 0, 0, 0]})).await;
    let (status, v) = json_call(&app, "GET", &format!("/sessions/{id}/moves"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v, json!([]));
}

#[tokio::test]
async fn unknown_sessions_are_404() {
    let app = app();
    for uri in [
        "/sessions/not-a-uuid",
        "/sessions/00000000-0000-4000-8000-000000000000/moves",
        "/sessions/00000000-0000-4000-8000-000000000000/closure",
        "/sessions/00000000-0000-4000-8000-000000000000/render",
        "/sessions/00000000-0000-4000-8000-000000000000/export",
    ] {
        let (status, _) = json_call(&app, "GET", uri, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
    }
    let (status, _) = json_call(&app, "POST", "/sessions/00000000-0000-4000-8000-000000000000/moves", Some(dir_move(0))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = json_call(&app, "DELETE", "/sessions/00000000-0000-4000-8000-000000000000/moves/last", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn four_piece_loop_flow() {
    let app = app();
    let id = create(&app, json!({"caps": [4, 4, 4, 4, 4, 4]})).await;
    let base = format!("/sessions/{id}");

    let (_, moves) = json_call(&app, "GET", &format!("{base}/moves"), None).await;
    assert_eq!(moves.as_array().unwrap().len(), 8);
    let (status, _) = json_call(&app, "GET", &format!("{base}/export"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(2))).await;
    assert_eq!(status, StatusCode::OK);
    let (_, moves) = json_call(&app, "GET", &format!("{base}/moves"), None).await;
    assert_eq!(moves.as_array().unwrap().len(), 5);

    let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(4))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(json!({"kind": "warp"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    for _ in 0..2 {
        let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(2))).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (_, c) = json_call(&app, "GET", &format!("{base}/closure?max=3"), None).await;
    assert_eq!(c, json!({"closable": true, "min_pieces": 1}));
    let (_, moves) = json_call(&app, "GET", &format!("{base}/moves"), None).await;
    let closing: Vec<&Value> = moves.as_array().unwrap().iter().filter(|m| m["closes"] == true).collect();
    assert_eq!(closing.len(), 1);
    assert_eq!(closing[0]["move"], turn_move(2));

    let (status, v) = json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(2))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "closed");
    assert_eq!(v["placed"].as_array().unwrap().len(), 4);
    assert_eq!(v["remaining"][1], 0);

    let (_, moves) = json_call(&app, "GET", &format!("{base}/moves"), None).await;
    assert_eq!(moves, json!([]));
    let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(0))).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, bytes, _) = call(&app, "GET", &format!("{base}/export"), None).await;
    assert_eq!(status, StatusCode::OK);
    let circuits = read_records(bytes.as_slice()).unwrap();
    assert_eq!(circuits[0].piece_codes(), vec![2, 2, 2, 2]);
    assert!(is_constructible(&circuits[0], &WidthConfig::default()));

    let (status, v) = json_call(&app, "DELETE", &format!("{base}/moves/last"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "open");
    assert_eq!(v["placed"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn undo_restores_and_empty_undo_conflicts() {
    let app = app();
    let id = create(&app, json!({})).await;
    let base = format!("/sessions/{id}");
    let (status, _) = json_call(&app, "DELETE", &format!("{base}/moves/last"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(1))).await;
    let (_, before) = json_call(&app, "GET", &base, None).await;
    json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(7))).await;
    let (_, after) = json_call(&app, "DELETE", &format!("{base}/moves/last"), None).await;
    assert_eq!(before, after);
}

#[tokio::test]
async fn closure_bounds() {
    let app = app();
    let id = create(&app, json!({})).await;
    let base = format!("/sessions/{id}");
    let (status, _) = json_call(&app, "GET", &format!("{base}/closure?max=7"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, c) = json_call(&app, "GET", &format!("{base}/closure"), None).await;
    assert_eq!(c, json!({"closable": true, "min_pieces": 4}));
    json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(0))).await;
    for _ in 0..5 {
        json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(0))).await;
    }
    let (_, c) = json_call(&app, "GET", &format!("{base}/closure?max=5"), None).await;
    assert_eq!(c, json!({"closable": false, "min_pieces": null}));
}

#[tokio::test]
async fn render_is_svg_and_deterministic() {
    let app = app();
    let id = create(&app, json!({})).await;
    let base = format!("/sessions/{id}");
    json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(0))).await;
    json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(1))).await;
    let (status, a, ctype) = call(&app, "GET", &format!("{base}/render"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("image/svg+xml"));
    let (_, b, _) = call(&app, "GET", &format!("{base}/render"), None).await;
    assert_eq!(a, b);
    let svg = String::from_utf8(a).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("class=\"head\""));
}

#[tokio::test]
async fn cors_headers_present() {
    let app = app();
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/sessions")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

/// Completion search by brute force over appended headings.
fn oracle_min_pieces(s: &Session, max: usize) -> Option<usize> {
    let width = WidthConfig::default();
    (1..=max).find(|&k| {
        (0..8usize.pow(k as u32)).any(|mut code| {
            let mut dirs = s.directions().to_vec();
            for _ in 0..k {
                dirs.push(Direction::ALL[code % 8]);
                code /= 8;
            }
            let n = dirs.len();
            let end = dirs.iter().fold(Cell::ORIGIN, |c, d| c.step(*d));
            let legal = (0..n).all(|i| {
                TurnCode::between(dirs[(i + n - 1) % n], dirs[i]).is_some_and(|t| s.mode().allows(t))
            });
            end == Cell::ORIGIN
                && legal
                && Circuit::from_directions(&dirs, PieceMode::Standard)
                    .is_ok_and(|c| s.inventory().check(&c) && is_constructible(&c, &width))
        })
    })
}

#[test]
fn closure_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..60 {
        let inv = if trial % 2 == 0 { Inventory::unbounded() } else { Inventory::easyloop() };
        let mut s = Session::new(inv, PieceMode::Standard, WidthConfig::default());
        s.apply(Move::Direction { direction: rng.random_range(0..8) }).unwrap();
        let steps = rng.random_range(0..5);
        for _ in 0..steps {
            let moves = s.legal_moves();
            if moves.is_empty() {
                break;
            }
            s.apply(moves[rng.random_range(0..moves.len())].action).unwrap();
        }
        if s.status() == railgrid_designer::Status::Closed {
            continue;
        }
        let max = 4;
        assert_eq!(s.closure(max).min_pieces, oracle_min_pieces(&s, max), "{:?}", s.directions());
    }
}

fn check_invariants(s: &Session) {
    let squares = s.squares();
    let junctions: Vec<(i32, i32)> = squares.windows(2).map(|w| (w[0].x + w[1].x, w[0].y + w[1].y)).collect();
    assert_eq!(junctions.iter().collect::<BTreeSet<_>>().len(), junctions.len(), "junctions repeat");
    let placed = s.placed();
    for (i, p) in placed.iter().enumerate() {
        for q in &placed[i + 1..] {
            if p.square == q.square {
                assert!(check_pair(p, q, s.width()).is_none(), "pair violation");
            }
        }
    }
    assert!(s.inventory().admits(&s.usage()));
    if let Some(c) = s.circuit() {
        assert!(is_constructible(&c, s.width()));
        assert!(s.inventory().check(&c));
    }
}

#[tokio::test]
async fn fuzzed_sessions_keep_invariants() {
    let app = app();
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    for trial in 0..40 {
        let caps = if trial % 3 == 0 { json!(null) } else { json!([3, 4, 2, 4, 2, 2]) };
        let id = create(&app, json!({"caps": caps})).await;
        let base = format!("/sessions/{id}");
        let mut mirror = Session::new(
            if trial % 3 == 0 { Inventory::unbounded() } else { Inventory::from_caps([Some(3), Some(4), Some(2), Some(4), Some(2), Some(2), None, None]) },
            PieceMode::Standard,
            WidthConfig::default(),
        );
        for _ in 0..40 {
            let r = rng.random_range(0..10);
            if r == 0 {
                let (status, _) = json_call(&app, "DELETE", &format!("{base}/moves/last"), None).await;
                assert!(!status.is_server_error());
                mirror.undo();
            } else if r == 1 {
                let bogus = turn_move(rng.random_range(0..10));
                let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(bogus.clone())).await;
                assert!(!status.is_server_error());
                if status == StatusCode::OK {
                    let mv: Move = serde_json::from_value(bogus).unwrap();
                    mirror.apply(mv).unwrap();
                }
            } else {
                let (status, moves) = json_call(&app, "GET", &format!("{base}/moves"), None).await;
                assert_eq!(status, StatusCode::OK);
                let moves = moves.as_array().unwrap().clone();
                if moves.is_empty() {
                    continue;
                }
                let pick = moves[rng.random_range(0..moves.len())]["move"].clone();
                let (status, _) = json_call(&app, "POST", &format!("{base}/moves"), Some(pick.clone())).await;
                assert_eq!(status, StatusCode::OK);
                mirror.apply(serde_json::from_value(pick).unwrap()).unwrap();
            }
            check_invariants(&mirror);
            let (_, snap) = json_call(&app, "GET", &base, None).await;
            let dirs: Vec<u8> = mirror.directions().iter().map(|d| d.index()).collect();
            assert_eq!(snap["directions"], json!(dirs));
        }
        let (status, bytes, _) = call(&app, "GET", &format!("{base}/export"), None).await;
        if status == StatusCode::OK {

            let c = read_records(bytes.as_slice()).unwrap();
            assert!(is_constructible(&c[0], &WidthConfig::default()));
        } else {
            assert_eq!(status, StatusCode::CONFLICT);
        }
    }

}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_moves_are_serialized() {
    let app = app();
    let id = create(&app, json!({})).await;
    let base = format!("/sessions/{id}");
    json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(0))).await;
    let mut handles = Vec::new();
    for _ in 0..16 {
        let app = app.clone();
        let uri = format!("{base}/moves");
        handles.push(tokio::spawn(async move { json_call(&app, "POST", &uri, Some(turn_move(0))).await.0 }));
    }
    let mut ok = 0;
    for h in handles {
        let status = h.await.unwrap();
        assert!(status == StatusCode::OK || status == StatusCode::CONFLICT);
        ok += (status == StatusCode::OK) as usize;
    }
    let (_, snap) = json_call(&app, "GET", &base, None).await;
    assert_eq!(snap["directions"].as_array().unwrap().len(), 1 + ok);
}

#[tokio::test]
async fn journal_replays_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("journal.jsonl");
    let app = router(Arc::new(AppState::new(6, Some(Journal::open(&path).unwrap()))));
    let id = create(&app, json!({"caps": [4, 4, 4, 4, 4, 4]})).await;
    let base = format!("/sessions/{id}");
    json_call(&app, "POST", &format!("{base}/moves"), Some(dir_move(2))).await;
    for _ in 0..3 {
        json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(2))).await;
    }
    json_call(&app, "DELETE", &format!("{base}/moves/last"), None).await;
    json_call(&app, "POST", &format!("{base}/moves"), Some(turn_move(4))).await;
    let (_, before) = json_call(&app, "GET", &base, None).await;

    let restored = replay(&path).unwrap();
    assert_eq!(restored.len(), 1);
    let app2 = router(Arc::new(AppState::new(6, None).with_sessions(restored)));
    let (status, after) = json_call(&app2, "GET", &base, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before, after);
}
