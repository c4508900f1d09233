use std::collections::BTreeSet;
use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use mailmood_core::lexicon::{AffectLabel, LabelSet, WordLexicon};
use mailmood_core::mail::{parse_mbox, Gender, MailMessage};
use mailmood_core::text::{count_text, AffectCounts};
use mailmood_core::tracking::{Demographics, PersonalIndex};
use mailmood_dashboard::{router, AppState};
use serde_json::Value;
use tower::ServiceExt;

const OWNER: &str = "me@home.org";

fn lexicon() -> WordLexicon {
    use AffectLabel::*;
    [
        ("happy".to_string(), LabelSet::from([Joy, Positive])),
        ("sad".to_string(), LabelSet::from([Sadness, Negative])),
        ("afraid".to_string(), LabelSet::from([Fear, Negative])),
    ]
    .into_iter()
    .collect()
}

fn message(id: &str, from: &str, to: &str, date: &str, body: &str) -> String {
    format!("From {from} Mon Jan  1 00:00:00 2001\nMessage-ID: <{id}@mail.example>\nFrom: {from}\nTo: {to}\nDate: {date}\n\n{body}\n\n")
}

fn fixture() -> Vec<MailMessage> {
    let text = [
        message("m1", OWNER, "alice@x.org", "Tue, 2 Jan 2001 10:00:00 +0000", "happy happy sad"),
        message("m2", OWNER, "bob@y.org", "Wed, 3 Jan 2001 10:00:00 +0000", "I am afraid"),
        message("m3", OWNER, "alice@x.org, bob@y.org", "Mon, 1 Jan 2001 10:00:00 +0000", "happy now"),
        message("m4", OWNER, "dan@z.org", "Thu, 4 Jan 2001 10:00:00 +0000", ""),
        message("m5", "carol@w.org", OWNER, "Fri, 5 Jan 2001 10:00:00 +0000", "so sad and afraid of the dark tonight"),
        message("m6", "alice@x.org", OWNER, "Sat, 6 Jan 2001 10:00:00 +0000", "happy to hear"),
    ]
    .concat();
    let parsed = parse_mbox(&text);
    assert_eq!(parsed.malformed, 0);
    parsed.messages
}

fn index() -> PersonalIndex {
    PersonalIndex::build(&fixture(), OWNER, &lexicon())
}

fn app() -> Router {
    router(
        AppState::ready(
            index(),
            Demographics {
                gender: Some(Gender::Female),
                age: Some(41),
            },
        ),
        None,
    )
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    let resp = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn close(v: &Value, expected: f64) {
    let x = v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"));
    assert!((x - expected).abs() < 1e-9, "{x} != {expected}");
}

#[tokio::test]
async fn health_reports_readiness() {
    let state = AppState::new(Demographics::default());
    let app = router(state.clone(), None);
    let (status, body) = get(&app, "/api/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["ready"], false);
    state.install(index());
    let (_, body) = get(&app, "/api/health").await;
    assert_eq!(body["ready"], true);
}

#[tokio::test]
async fn data_endpoints_wait_for_index() {
    let state = AppState::new(Demographics::default());
    let app = router(state.clone(), None);
    for uri in [
        "/api/mailbox/summary",
        "/api/correspondent/alice@x.org",
        "/api/correspondent/alice@x.org/timeline",
        "/api/export/anonymous",
    ] {
        assert_eq!(get(&app, uri).await.0, StatusCode::SERVICE_UNAVAILABLE, "{uri}");
    }
    state.install(index());
    assert_eq!(get(&app, "/api/mailbox/summary").await.0, StatusCode::OK);
}

#[tokio::test]
async fn summary_lists_sent_to_peers_by_count() {
    let (status, body) = get(&app(), "/api/mailbox/summary").await;
    assert_eq!(status, StatusCode::OK);
    let peers: Vec<&str> = body
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["peer_address"].as_str().unwrap())
        .collect();
    // carol only wrote to the owner
    assert_eq!(peers, ["alice@x.org", "bob@y.org", "dan@z.org"]);
    assert_eq!(body[0]["sent_count"], 2);
    assert_eq!(body[0]["received_count"], 1);
    assert_eq!(body[2]["sent_count"], 1);
}

#[tokio::test]
async fn correspondent_matches_hand_computation() {
    let app = app();
    // sent baseline: joy 3, sadness 1, fear 1 -> 60/20/20
    let (status, alice) = get(&app, "/api/correspondent/alice@x.org").await;
    assert_eq!(status, StatusCode::OK);
    // alice: joy 3, sadness 1 -> 75/25; positive 3, negative 1
    close(&alice["polarity_pct"]["positive"], 75.0);
    close(&alice["polarity_pct"]["negative"], 25.0);
    close(&alice["emotion_diff"]["joy"], 15.0);
    close(&alice["emotion_diff"]["sadness"], 5.0);
    close(&alice["emotion_diff"]["fear"], -20.0);
    close(&alice["emotion_diff"]["anger"], 0.0);
    assert_eq!(alice["diff_empty"], false);

    let (_, bob) = get(&app, "/api/correspondent/BOB@y.org").await;
    close(&bob["emotion_diff"]["joy"], -10.0);
    close(&bob["emotion_diff"]["fear"], 30.0);
    close(&bob["emotion_diff"]["sadness"], -20.0);
    close(&bob["polarity_pct"]["positive"], 50.0);

    let (_, dan) = get(&app, "/api/correspondent/dan@z.org").await;
    assert_eq!(dan["diff_empty"], true);
    assert_eq!(dan["polarity_empty"], true);
}

#[tokio::test]
async fn correspondent_has_exactly_eight_emotion_keys() {
    let (_, body) = get(&app(), "/api/correspondent/alice@x.org").await;
    let keys: BTreeSet<&str> = body["emotion_diff"].as_object().unwrap().keys().map(String::as_str).collect();
    let expected: BTreeSet<&str> = AffectLabel::EMOTIONS.iter().map(|l| l.as_str()).collect();
    assert_eq!(keys, expected);
    assert_eq!(keys.len(), 8);
}

#[tokio::test]
async fn sole_correspondent_has_zero_diff() {
    let text = [
        message("a", OWNER, "solo@x.org", "Mon, 1 Jan 2001 10:00:00 +0000", "happy sad"),
        message("b", OWNER, "solo@x.org", "Tue, 2 Jan 2001 10:00:00 +0000", "afraid"),
    ]
    .concat();
    let idx = PersonalIndex::build(&parse_mbox(&text).messages, OWNER, &lexicon());
    let app = router(AppState::ready(idx, Demographics::default()), None);
    let (_, body) = get(&app, "/api/correspondent/solo@x.org").await;
    for (_, v) in body["emotion_diff"].as_object().unwrap() {
        close(v, 0.0);
    }
}

#[tokio::test]
async fn unknown_address_is_404_with_suggestions() {
    let app = app();
    let (status, body) = get(&app, "/api/correspondent/alicia@x.org").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["suggestions"][0], "alice@x.org");
    assert_eq!(get(&app, "/api/correspondent/nobody@q.org/timeline").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn received_only_peer_is_known_but_zero() {
    let (status, body) = get(&app(), "/api/correspondent/carol@w.org").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["sent_count"], 0);
}

#[tokio::test]
async fn timeline_is_time_ordered_and_keeps_empty_mail() {
    let app = app();
    let (status, body) = get(&app, "/api/correspondent/alice@x.org/timeline").await;
    assert_eq!(status, StatusCode::OK);
    let ids: Vec<&str> = body.as_array().unwrap().iter().map(|p| p["message_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["<m3@mail.example>", "<m1@mail.example>"]);
    let ts: Vec<&str> = body.as_array().unwrap().iter().map(|p| p["timestamp"].as_str().unwrap()).collect();
    let mut sorted = ts.clone();
    sorted.sort();
    assert_eq!(ts, sorted);

    let (_, dan) = get(&app, "/api/correspondent/dan@z.org/timeline").await;
    assert_eq!(dan.as_array().unwrap().len(), 1);
    assert_eq!(dan[0]["empty"], true);
}

#[tokio::test]
async fn export_counts_equal_mailbox_counts() {
    let (status, body) = get(&app(), "/api/export/anonymous").await;
    assert_eq!(status, StatusCode::OK);
    let msgs = fixture();
    let all: AffectCounts = msgs.iter().map(|m| count_text(&m.body, &lexicon())).sum();
    let b = &body["buckets"]["all"];
    assert_eq!(b["message_count"], msgs.len() as u64);
    assert_eq!(b["total_tokens"], all.total_tokens);
    for l in AffectLabel::ALL {
        assert_eq!(b["labels"][l.as_str()], all.get(l), "{l:?}");
    }
    assert_eq!(body["buckets"]["sent"]["message_count"], 4);
    assert_eq!(body["buckets"]["received"]["message_count"], 2);
    assert_eq!(body["gender"], "female");
    assert_eq!(body["age"], 41);
    assert!(!body.to_string().contains('@'));
}

#[tokio::test]
async fn export_of_empty_mailbox_is_zero() {
    let idx = PersonalIndex::build(&[], OWNER, &lexicon());
    let app = router(AppState::ready(idx, Demographics::default()), None);
    let (status, body) = get(&app, "/api/export/anonymous").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["buckets"]["all"]["message_count"], 0);
    assert_eq!(body["buckets"]["all"]["labels"]["joy"], 0);
    assert!(body.get("gender").is_none());
}

#[tokio::test]
async fn api_equals_index_bit_for_bit() {
    let idx = index();
    let app = app();
    let (_, summary) = get(&app, "/api/mailbox/summary").await;
    assert_eq!(summary, serde_json::to_value(idx.summaries()).unwrap());
    for s in idx.summaries() {
        let (_, c) = get(&app, &format!("/api/correspondent/{}", s.peer_address)).await;
        assert_eq!(c, serde_json::to_value(s).unwrap());
        let (_, t) = get(&app, &format!("/api/correspondent/{}/timeline", s.peer_address)).await;
        assert_eq!(t, serde_json::to_value(idx.timeline(&s.peer_address).unwrap()).unwrap());
    }
}

#[tokio::test]
async fn responses_do_not_depend_on_request_order() {
    let uris = [
        "/api/mailbox/summary",
        "/api/correspondent/bob@y.org",
        "/api/correspondent/alice@x.org/timeline",
        "/api/export/anonymous",
    ];
    let app = app();
    let mut forward = Vec::new();
    for u in uris {
        forward.push(get(&app, u).await.1);
    }
    let handles: Vec<_> = uris
        .iter()
        .rev()
        .map(|u| {
            let app = app.clone();
            let u = u.to_string();
            tokio::spawn(async move { get(&app, &u).await.1 })
        })
        .collect();
    let mut backward = Vec::new();
    for h in handles {
        backward.push(h.await.unwrap());
    }
    backward.reverse();
    assert_eq!(forward, backward);
}

#[tokio::test]
async fn root_serves_placeholder_or_static_bundle() {
    let resp = app()
        .oneshot(Request::get("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);

    let dir = std::env::temp_dir().join(format!("mailmood-static-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<p>bundle</p>").unwrap();
    let app = router(AppState::ready(index(), Demographics::default()), Some(dir.clone()));
    let resp = app.oneshot(Request::get("/").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    assert_eq!(&bytes[..], b"<p>bundle</p>");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn state_is_shareable() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Arc<AppState>>();
}
