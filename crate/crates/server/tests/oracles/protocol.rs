//! Transport parity and executor serialization checks.
#![allow(dead_code)]

use std::io::{BufRead, BufReader, Cursor};
use std::sync::mpsc;
use std::thread;

use cutscene_server::client::HttpClient;
use cutscene_server::{stdio, RpcHandler};
use serde_json::{json, Value};

pub const SCRIPT: [&str; 11] = [
    r#"{"jsonrpc":"2.0","id":1,"method":"initialize","params":{}}"#,
    r#"{"jsonrpc":"2.0","id":2,"method":"tools/list"}"#,
    r#"{"jsonrpc":"2.0","id":3,"method":"tools/call","params":{"name":"add_character","arguments":{"name":"MIRA","identifier":"char_001","location":[-60,0,0]}}}"#,
    r#"{"jsonrpc":"2.0","id":"four","method":"tools/call","params":{"name":"add_camera","arguments":{"camera_name":"Cam_A"}}}"#,
    r#"{"jsonrpc":"2.0","id":5,"method":"tools/call","params":{"name":"add_character","arguments":{"name":"MIRA","identifier":"char_001"}}}"#,
    "{\"jsonrpc\":\"2.0\",\"id\":6,",
    r#"{"jsonrpc":"2.0","id":7,"method":"tools/teleport","params":{}}"#,
    r#"{"jsonrpc":"2.0","method":"ping"}"#,
    r#"{"jsonrpc":"2.0","id":9,"method":"tools/call","params":{"arguments":{}}}"#,
    r#"{"id":10,"method":"tools/list"}"#,
    r#"{"jsonrpc":"2.0","id":11,"method":"trajectory/export","params":{}}"#,
];

fn over_stdio(h: &RpcHandler) -> Result<Vec<Value>, String> {
    let mut out = Vec::new();
    stdio::serve(h, Cursor::new(SCRIPT.join("\n") + "\n"), &mut out).map_err(|e| e.to_string())?;
    out.lines()
        .map(|l| serde_json::from_str(&l.map_err(|e| e.to_string())?).map_err(|e| e.to_string()))
        .collect()
}

/// Run the script over HTTP while listening on the event stream. Returns
/// the POST responses and the envelopes seen on the stream.
fn over_http(h: RpcHandler) -> Result<(Vec<Value>, Vec<Value>), String> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().expect("runtime");
        let _ = rt.block_on(cutscene_server::http::serve(h, ([127, 0, 0, 1], 0).into(), move |addr| {
            let _ = tx.send(addr);
        }));
    });
    let base = format!("http://{}", rx.recv().map_err(|e| e.to_string())?);
    let events = ureq::get(&format!("{base}/events")).call().map_err(|e| e.to_string())?;
    let mut stream = BufReader::new(events.into_body().into_reader());

    let client = HttpClient::new(&base);
    let mut responses = Vec::new();
    for line in SCRIPT {
        let text = client.send_text(line).map_err(|e| e.to_string())?;
        if !text.is_empty() {
            responses.push(serde_json::from_str(&text).map_err(|e| e.to_string())?);
        }
    }
    let mut streamed = Vec::new();
    while streamed.iter().filter(|v: &&Value| v.get("method").is_none()).count() < responses.len() {
        let mut line = String::new();
        if stream.read_line(&mut line).map_err(|e| e.to_string())? == 0 {
            return Err("event stream closed early".into());
        }
        if let Some(data) = line.trim_end().strip_prefix("data:") {
            streamed.push(serde_json::from_str(data.trim()).map_err(|e| e.to_string())?);
        }
    }
    Ok((responses, streamed))
}

fn code(v: &Value) -> Option<i64> {
    v["error"]["code"].as_i64()
}

/// The same script over stdio and HTTP/SSE against two fresh handlers.
pub fn check_transport_parity(make: &dyn Fn() -> RpcHandler) -> Result<(), String> {
    let (a, b) = (make(), make());
    let via_stdio = over_stdio(&a)?;
    let (via_http, streamed) = over_http(b.clone())?;
    if via_stdio.len() != 10 {
        return Err(format!("stdio answered {} of 10 requests", via_stdio.len()));
    }
    if via_stdio != via_http {
        let at = via_stdio.iter().zip(&via_http).position(|(x, y)| x != y);
        return Err(format!("stdio and HTTP envelopes differ at response {at:?}"));
    }
    let responses: Vec<&Value> = streamed.iter().filter(|v| v.get("method").is_none()).collect();
    if responses.iter().copied().ne(via_http.iter()) {
        return Err("event stream envelopes differ from the POST responses".into());
    }
    let notified = streamed.iter().filter(|v| v["method"] == "notifications/tool_call").count();
    if notified != 3 {
        return Err(format!("{notified} tool-call notifications for 3 tool calls"));
    }
    if code(&via_stdio[5]) != Some(-32700) {
        return Err(format!("malformed frame answered {}", via_stdio[5]));
    }
    if code(&via_stdio[6]) != Some(-32601) {
        return Err(format!("unknown method answered {}", via_stdio[6]));
    }
    if code(&via_stdio[7]) != Some(-32602) || code(&via_stdio[8]) != Some(-32600) {
        return Err("invalid params or invalid request misreported".into());
    }
    if via_stdio[3]["id"] != "four" || via_stdio[4]["result"]["isError"] != true {
        return Err("string id or domain error envelope wrong".into());
    }
    let (ta, tb) = (a.executor().trajectory(None), b.executor().trajectory(None));
    match (ta, tb) {
        (Ok(ta), Ok(tb)) if ta == tb && ta.len() == 3 => Ok(()),
        (ta, tb) => Err(format!("trajectories differ: {ta:?} vs {tb:?}")),
    }
}

/// `submitters` threads each add `per_thread` cameras at once. The
/// executor must record them with strictly increasing indices, in the
/// same order the bindings landed.
pub fn check_serialized(h: &RpcHandler, submitters: usize, per_thread: usize) -> Result<(), String> {
    let exec = h.executor().clone();
    let threads: Vec<_> = (0..submitters)
        .map(|t| {
            let exec = exec.clone();
            thread::spawn(move || {
                (0..per_thread).all(|i| {
                    exec.call_tool(None, "add_camera", &json!({"camera_name": format!("C{t}_{i}")}))
                        .is_ok_and(|r| r.is_ok())
                })
            })
        })
        .collect();
    for t in threads {
        if !t.join().map_err(|_| "submitter panicked")? {
            return Err("a concurrent call failed".into());
        }
    }
    let traj = exec.trajectory(None).map_err(|e| e.to_string())?;
    if traj.len() != submitters * per_thread {
        return Err(format!("{} calls recorded, {} made", traj.len(), submitters * per_thread));
    }
    if let Some(w) = traj.windows(2).find(|w| w[0].index >= w[1].index) {
        return Err(format!("index {} followed by {}", w[0].index, w[1].index));
    }
    let doc = exec.sequence_document(None).map_err(|e| e.to_string())?;
    let landed: Vec<&Value> = doc["bindings"].as_array().ok_or("no bindings")?.iter().map(|b| &b["name"]).collect();
    let recorded: Vec<&Value> = traj.iter().map(|r| &r.args["camera_name"]).collect();
    if landed != recorded {
        return Err("binding order differs from trajectory order".into());
    }
    Ok(())
}
