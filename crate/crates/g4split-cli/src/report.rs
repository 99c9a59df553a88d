use std::time::Duration;

use serde_json::{json, Map, Value};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Value,
}

/// A command's result plus its named checks. The result object is emitted at
/// the top level; run metadata goes under "run".
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, config: Value) -> Self {
        RunReport { command: command.into(), config, result: json!({}), checks: vec![], seed: None }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Value) {
        self.checks.push(Check { name: name.into(), passed, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self, elapsed: Duration) -> Value {
        let mut out = match &self.result {
            Value::Object(m) => m.clone(),
            v => {
                let mut m = Map::new();
                m.insert("result".into(), v.clone());
                m
            }
        };
        out.insert(
            "run".into(),
            json!({
                "command": self.command,
                "config": self.config,
                "seed": self.seed,
                "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "witness": c.witness})).collect::<Vec<_>>(),
                "passed": self.passed(),
                "elapsed_ms": elapsed.as_millis() as u64,
            }),
        );
        Value::Object(out)
    }

    pub fn to_text(&self, elapsed: Duration) -> String {
        let mut s = format!("{}\n", self.command);
        if let Some(seed) = self.seed {
            s += &format!("seed {seed}\n");
        }
        for c in &self.checks {
            let w = c.witness.to_string();
            let w = if w.len() > 160 { format!("{}...", &w[..w.char_indices().nth(157).map_or(w.len(), |(i, _)| i)]) } else { w };
            s += &format!("{} {}  {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, w);
        }
        s += &format!(
            "{} ({} checks, {} ms)\n",
            if self.passed() { "all checks passed" } else { "some checks failed" },
            self.checks.len(),
            elapsed.as_millis()
        );
        s
    }
}
