use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn oac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oac"))
        .args(args)
        .output()
        .unwrap()
}

fn oac_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_oac"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn core_tests() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

fn golden(stem: &str) -> String {
    core_tests()
        .join(format!("golden/{stem}.nt"))
        .display()
        .to_string()
}

fn fixture(name: &str) -> String {
    core_tests()
        .join(format!("fixtures/validation/{name}.nt"))
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oac-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn validate_exit_codes() {
    let ok = oac(&["validate", &golden("extended_properties")]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(!stdout(&ok).contains("ERROR"));

    let broken = oac(&["validate", &fixture("two_bodies")]);
    assert_eq!(code(&broken), 1);
    assert!(stdout(&broken).lines().any(|l| l.starts_with("ERROR E001")));

    assert_eq!(code(&oac(&["validate", "/definitely/not/here.nt"])), 2);
    let garbage = oac_stdin(&["validate", "-"], "not n-triples\n");
    assert_eq!(code(&garbage), 2);
    assert!(stderr(&garbage).contains("line 1"));
}

#[test]
fn validate_is_deterministic_and_mirrors_json() {
    let path = fixture("two_bodies");
    let a = oac(&["validate", &path]);
    let b = oac(&["validate", &path]);
    assert_eq!(a.stdout, b.stdout);
    let json = oac(&["--json", "validate", &path]);
    assert_eq!(code(&json), 1);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let text_codes: Vec<String> = stdout(&a)
        .lines()
        .filter(|l| l.starts_with("ERROR") || l.starts_with("WARNING"))
        .map(|l| l.split(' ').nth(1).unwrap().to_string())
        .collect();
    let json_codes: Vec<String> = v["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["code"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(text_codes, json_codes);
    assert_eq!(oac(&["validate", "--format", "json", &path]).stdout, json.stdout);
}

#[test]
fn convert() {
    let path = golden("inline_body");
    let ttl = oac(&["convert", &path, "--to", "turtle"]);
    assert_eq!(code(&ttl), 0);
    assert!(stdout(&ttl).contains("@prefix oac: <http://www.openannotation.org/ns/> ."));

    let nt = oac(&["convert", &path]);
    assert_eq!(stdout(&nt), std::fs::read_to_string(&path).unwrap());

    let mut shuffled: Vec<&str> = std::str::from_utf8(&nt.stdout).unwrap().lines().collect();
    shuffled.reverse();
    let again = oac_stdin(
        &["convert", "-", "--to", "ntriples"],
        &(shuffled.join("\n") + "\n"),
    );
    assert_eq!(again.stdout, nt.stdout);

    let bad = oac_stdin(
        &["convert", "-"],
        "<http://a> <http://b> <http://c> .\n<http://a> <http://b>\n",
    );
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("line 2"), "{}", stderr(&bad));
}

#[test]
fn frag_commands() {
    let parsed = oac(&[
        "frag",
        "parse",
        "http://www.example.net/foo.png#xywh=160,120,320,240",
    ]);
    assert_eq!(stdout(&parsed), "spatial pixel 160 120 320 240\n");

    let made = oac(&["frag", "make", "http://www.example.net/foo.mpg", "--t", "10,20"]);
    assert_eq!(stdout(&made), "http://www.example.net/foo.mpg#t=npt:10,20\n");

    let abutting = oac(&[
        "frag",
        "overlap",
        "http://x.example/v.mp4#t=0,10",
        "http://x.example/v.mp4#t=10,20",
    ]);
    assert_eq!(stdout(&abutting), "false\n");
    let crossing = oac(&[
        "frag",
        "overlap",
        "http://x.example/v.mp4#t=0,10.5",
        "http://x.example/v.mp4#t=10,20",
    ]);
    assert_eq!(stdout(&crossing), "true\n");

    let pdf = oac(&[
        "frag",
        "parse",
        "http://www.example.net/foo.pdf#page=10&viewrect=20,100,50,60",
    ]);
    assert_eq!(stdout(&pdf), "pdf 10 20 100 50 60\n");
    let anchor = oac(&[
        "frag",
        "parse",
        "--media-type",
        "text/html",
        "http://www.example.net/foo.html#namedSection",
    ]);
    assert_eq!(stdout(&anchor), "anchor namedSection\n");

    let bad = oac(&["frag", "parse", "http://x.example/a.png#xywh=1,2,x,4"]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("offset"), "{}", stderr(&bad));

    let json = oac(&[
        "--json",
        "frag",
        "parse",
        "http://www.example.net/foo.png#xywh=160,120,320,240",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["selectors"][0]["family"], "spatial");
    assert_eq!(v["selectors"][0]["w"], 320.0);
}

#[test]
fn new_annotations() {
    let args = [
        "new",
        "--uri",
        "http://example.org/annotations/n1",
        "--target",
        "http://example.org/images/i.png",
        "--inline-body",
        "I like this image!",
        "--seed",
        "11",
    ];
    let first = oac(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert!(stdout(&first).contains("<http://www.w3.org/2008/content#chars> \"I like this image!\" ."));
    assert_eq!(oac(&args).stdout, first.stdout);

    let validated = oac_stdin(&["validate", "-"], &stdout(&first));
    assert_eq!(code(&validated), 0);

    let missing = oac(&["new", "--body", "http://example.org/b"]);
    assert_eq!(code(&missing), 2);

    let minted = oac(&[
        "new",
        "--target",
        "http://example.org/t",
        "--seed",
        "5",
        "--to",
        "turtle",
    ]);
    assert!(stdout(&minted).contains("urn:uuid:"));
    assert_eq!(
        oac(&[
            "new",
            "--target",
            "http://example.org/t",
            "--seed",
            "5",
            "--to",
            "turtle"
        ])
        .stdout,
        minted.stdout
    );
}

fn archive_json(dir: &Path) -> PathBuf {
    let path = dir.join("archive.json");
    std::fs::write(
        &path,
        r#"{
  "http://cnn.com/": [
    {"datetime": "2011-03-10T00:00:00Z", "snapshot": "http://archive.example/20110310/http://cnn.com/"},
    {"datetime": "2011-03-12T00:00:00Z", "snapshot": "http://archive.example/20110312/http://cnn.com/"},
    {"datetime": "2011-03-14T00:00:00Z", "snapshot": "http://archive.example/20110314/http://cnn.com/"}
  ]
}"#,
    )
    .unwrap();
    path
}

#[test]
fn temporal_commands() {
    assert_eq!(
        stdout(&oac(&["temporal", "classify", &golden("uniform_time")])),
        "UniformTime 2011-03-12T11:45:00Z\n"
    );
    assert_eq!(
        stdout(&oac(&["temporal", "classify", &golden("baseline")])),
        "Timeless\n"
    );

    let dir = scratch("temporal");
    let index = archive_json(&dir);
    let index = index.to_str().unwrap();
    let resolve = |at: &str| {
        oac(&[
            "temporal",
            "resolve",
            "http://cnn.com/",
            "--index",
            index,
            "--at",
            at,
        ])
    };
    assert_eq!(
        stdout(&resolve("2011-03-12T11:45:00Z")),
        "http://archive.example/20110312/http://cnn.com/\n"
    );
    assert_eq!(
        stdout(&resolve("2011-03-11T00:00:00Z")),
        "http://archive.example/20110310/http://cnn.com/\n"
    );
    assert_eq!(
        stdout(&resolve("Mon, 14 Mar 2011 09:00:00 GMT")),
        "http://archive.example/20110314/http://cnn.com/\n"
    );
    assert_eq!(code(&resolve("last tuesday")), 2);
    assert_eq!(
        code(&oac(&[
            "temporal",
            "resolve",
            "http://nytimes.com/",
            "--index",
            index,
            "--at",
            "2011-03-12T00:00:00Z"
        ])),
        2
    );
    std::fs::remove_dir_all(dir).unwrap();
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port()
}

fn http(port: u16, request: &str) -> String {
    let deadline = Instant::now() + Duration::from_secs(10);
    loop {
        match TcpStream::connect(("127.0.0.1", port)) {
            Ok(mut stream) => {
                stream.write_all(request.as_bytes()).unwrap();
                let mut out = String::new();
                stream.read_to_string(&mut out).unwrap();
                return out;
            }
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => panic!("server never came up: {e}"),
        }
    }
}

fn encode(uri: &str) -> String {
    uri.bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

#[test]
fn serve_end_to_end() {
    let dir = scratch("serve");
    archive_json(&dir);
    let port = free_port();
    let config = dir.join("server.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"listen": "127.0.0.1:{port}", "base_uri": "http://localhost:{port}/", "archive_index": "archive.json", "store_snapshot": "store.nt"}}"#
        ),
    )
    .unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_oac"))
        .args(["serve", "--config", config.to_str().unwrap()])
        .stderr(Stdio::piped())
        .stdout(Stdio::null())
        .spawn()
        .unwrap();

    let body = std::fs::read_to_string(golden("extended_properties")).unwrap();
    let created = http(
        port,
        &format!(
            "POST /annotations HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/n-triples\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        ),
    );
    assert!(created.starts_with("HTTP/1.1 201"), "{created}");

    let got = http(
        port,
        &format!(
            "GET /annotations/{} HTTP/1.1\r\nHost: localhost\r\nAccept: application/n-triples\r\nConnection: close\r\n\r\n",
            encode("http://example.org/annotations/A-2")
        ),
    );
    assert!(got.starts_with("HTTP/1.1 200"), "{got}");
    assert!(got.ends_with(&body));

    let gate = http(
        port,
        &format!(
            "GET /timegate/{} HTTP/1.1\r\nHost: localhost\r\nAccept-Datetime: Sat, 12 Mar 2011 11:45:00 GMT\r\nConnection: close\r\n\r\n",
            encode("http://cnn.com/")
        ),
    );
    assert!(gate.starts_with("HTTP/1.1 302"), "{gate}");
    assert!(
        gate.contains("location: http://archive.example/20110312/http://cnn.com/"),
        "{gate}"
    );

    Command::new("kill")
        .args(["-INT", &child.id().to_string()])
        .status()
        .unwrap();
    let status = child.wait().unwrap();
    let mut log = String::new();
    child.stderr.take().unwrap().read_to_string(&mut log).unwrap();
    assert!(status.success(), "{status:?}\n{log}");
    assert_eq!(log.matches("POST /annotations").count(), 1, "{log}");
    assert_eq!(log.matches("GET /annotations/").count(), 1, "{log}");
    assert_eq!(log.matches("GET /timegate/").count(), 1, "{log}");

    let snapshot = std::fs::read_to_string(dir.join("store.nt")).unwrap();
    assert_eq!(snapshot, body);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn serve_rejects_bad_config() {
    let dir = scratch("badconfig");
    let config = dir.join("server.json");
    std::fs::write(&config, r#"{"listen": "127.0.0.1:0"}"#).unwrap();
    let out = oac(&["serve", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&oac(&["serve", "--config", "/no/such/config.json"])), 2);

    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port();
    std::fs::write(
        &config,
        format!(r#"{{"listen": "127.0.0.1:{port}", "base_uri": "http://localhost/"}}"#),
    )
    .unwrap();
    let out = oac(&["serve", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("cannot bind"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&oac(&[])), 2);
    assert_eq!(code(&oac(&["frobnicate"])), 2);
    assert_eq!(code(&oac(&["convert", "x.nt", "--to", "rdfxml"])), 2);
}
