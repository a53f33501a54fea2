use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use ratdyn::MapParams;
use serde::{Deserialize, Serialize};

/// One line of the run log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    /// `None` for commands that draw their own parameters.
    pub params: Option<MapParams>,
    /// Resolved flag values, keyed by flag name without the leading dashes.
    pub settings: BTreeMap<String, String>,
    pub outputs: serde_json::Value,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunRecord {
    pub fn new(
        command: &str,
        params: Option<MapParams>,
        settings: BTreeMap<String, String>,
        outputs: serde_json::Value,
    ) -> Self {
        RunRecord {
            command: command.to_string(),
            params,
            settings,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }

    /// Arguments (without the program name) that rerun this command.
    pub fn replay_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        if let Some(p) = &self.params {
            argv.push("--params".into());
            argv.push(p.to_string());
        }
        for (k, v) in &self.settings {
            argv.push(format!("--{k}"));
            argv.push(v.clone());
        }
        argv
    }

    pub fn append_to(&self, path: &Path) -> std::io::Result<()> {
        let line = serde_json::to_string(self).map_err(std::io::Error::other)?;
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(f, "{line}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_argv_lists_params_then_settings() {
        let p = ratdyn::presets::fast_convergence();
        let settings = BTreeMap::from([("tol".to_string(), "1e-10".to_string()), ("max-iter".to_string(), "5".to_string())]);
        let r = RunRecord::new("orbit", Some(p), settings, serde_json::Value::Null);
        let argv = r.replay_argv();
        assert_eq!(argv[0], "orbit");
        assert_eq!(argv[1], "--params");
        assert_eq!(argv[2].parse::<MapParams>().unwrap(), p);
        assert_eq!(&argv[3..], ["--max-iter", "5", "--tol", "1e-10"]);
        assert!(r.timestamp.ends_with('Z'));
    }
}
