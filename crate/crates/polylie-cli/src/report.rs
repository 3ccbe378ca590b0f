use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    TooLarge,
    /// Reported for information only; does not affect the exit code.
    Info,
}

/// One line of the report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub expected: String,
    pub computed: String,
    pub elapsed_ms: u64,
    pub version_hash: String,
}

/// Serializes records through a single writer and remembers the worst
/// verdict seen.
pub struct Reporter {
    out: Box<dyn Write>,
    version: String,
    failed: bool,
    too_large: bool,
}

impl Reporter {
    pub fn new(path: Option<&Path>) -> io::Result<Reporter> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Reporter { out, version: polylie::cache::version_hash(), failed: false, too_large: false })
    }

    pub fn emit(&mut self, suite: &str, params: &Params, verdict: Verdict, expected: String, computed: String, started: Instant) -> io::Result<()> {
        match verdict {
            Verdict::Fail => self.failed = true,
            Verdict::TooLarge => self.too_large = true,
            _ => {}
        }
        let rec = ReportRecord {
            suite: suite.to_string(),
            params: params.0.clone(),
            verdict,
            expected,
            computed,
            elapsed_ms: started.elapsed().as_millis() as u64,
            version_hash: self.version.clone(),
        };
        serde_json::to_writer(&mut self.out, &rec)?;
        self.out.write_all(b"\n")?;
        self.out.flush()
    }

    /// Records a boolean check with expected value `true`.
    pub fn check(&mut self, suite: &str, params: &Params, ok: bool, computed: String, started: Instant) -> io::Result<()> {
        let v = if ok { Verdict::Pass } else { Verdict::Fail };
        self.emit(suite, params, v, "pass".into(), computed, started)
    }

    pub fn exit_code(&self) -> i32 {
        if self.too_large {
            3
        } else if self.failed {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new() -> Params {
        Params::default()
    }

    pub fn with(mut self, k: &str, v: impl ToString) -> Params {
        self.0.insert(k.to_string(), v.to_string());
        self
    }
}
