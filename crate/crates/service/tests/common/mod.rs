//! Spawns the `rights` binary against a temporary data directory.
#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::time::Duration;

use reqwest::blocking::{Client, RequestBuilder, Response};

pub const CONTROLLER: &str = "https://acme.example/";
pub const FIXED_START: &str = "2024-03-01T09:00:00Z";

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Write a fixed-clock config pointing at `dir/data` and return its path.
pub fn write_config(dir: &Path) -> PathBuf {
    let path = dir.join("rights.toml");
    let text = format!(
        "listen_address = \"127.0.0.1:0\"\ndata_directory = {:?}\ncontroller_iri = \"{CONTROLLER}\"\nclock_mode = \"fixed\"\nfixed_start = \"{FIXED_START}\"\nfixed_step_seconds = 60\n",
        dir.join("data").display().to_string()
    );
    std::fs::write(&path, text).unwrap();
    path
}

pub struct Server {
    child: Child,
    pub base: String,
    pub client: Client,
}

impl Server {
    pub fn start(config: &Path) -> Server {
        let mut child = Command::new(env!("CARGO_BIN_EXE_rights"))
            .args(["serve", "--config"])
            .arg(config)
            .env("RIGHTS_LOG", "warn")
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .expect("spawn rights");
        let mut line = String::new();
        BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
        let addr = line
            .trim()
            .strip_prefix("listening on ")
            .unwrap_or_else(|| panic!("unexpected first line {line:?}"))
            .to_string();
        Server {
            child,
            base: format!("http://{addr}"),
            client: Client::builder().timeout(Duration::from_secs(10)).build().unwrap(),
        }
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub fn get(&self, path: &str) -> RequestBuilder {
        self.client.get(self.url(path))
    }

    pub fn post(&self, path: &str) -> RequestBuilder {
        self.client.post(self.url(path))
    }

    pub fn submit(&self, body: &str) -> Response {
        self.post("/requests")
            .header("content-type", "text/turtle")
            .header("x-agent-iri", "https://people.example/alice")
            .body(body.to_string())
            .send()
            .unwrap()
    }

    pub fn decide(&self, id: &str, action: &str, body: serde_json::Value) -> Response {
        self.post(&format!("/requests/{id}/{action}"))
            .header("x-agent-iri", "https://acme.example/dpo")
            .json(&body)
            .send()
            .unwrap()
    }

    /// SIGKILL, no graceful shutdown.
    pub fn kill(mut self) {
        self.child.kill().unwrap();
        self.child.wait().unwrap();
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
