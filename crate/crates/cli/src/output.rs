//! Config loading and report files.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use shapeinv::config::KeyValues;

use crate::args::Flags;
use crate::Failure;

pub const DEFAULT_OUT: &str = "shapeinv-out";

/// Validated configuration of one run plus where its files go.
pub struct Run {
    pub config: KeyValues,
    pub out: PathBuf,
    pub input_hash: String,
}

impl Run {
    /// Reads `--config`, overlays the flags, checks keys against `allowed`
    /// and creates the output directory.
    pub fn load(args: &impl Flags, allowed: &[&str]) -> Result<Self, Failure> {
        let common = args.common();
        let mut config = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
                KeyValues::parse(&text).map_err(|e| Failure::Config(e.to_string()))?
            }
            None => KeyValues::new(),
        };
        config.overlay(&args.flags());
        if let Some(out) = &common.out {
            config.set("out", out);
        }
        let mut keys: Vec<&str> = allowed.to_vec();
        keys.push("out");
        config.reject_unknown(&keys).map_err(|e| Failure::Config(e.to_string()))?;
        let out = PathBuf::from(config.get("out").unwrap_or(DEFAULT_OUT));
        fs::create_dir_all(&out)?;
        let input_hash = hex(&Sha256::digest(config.to_text().as_bytes()));
        Ok(Self { config, out, input_hash })
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, Failure> {
        Ok(self.config.parsed(key).map_err(|e| Failure::Config(e.to_string()))?.unwrap_or(default))
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        self.config.parsed(key).map_err(|e| Failure::Config(e.to_string()))
    }

    pub fn flag(&self, key: &str) -> Result<bool, Failure> {
        self.get(key, false)
    }

    fn config_json(&self) -> Value {
        let map: Map<String, Value> =
            self.config.keys().map(|k| (k.to_string(), Value::String(self.config.get(k).unwrap_or("").to_string()))).collect();
        Value::Object(map)
    }

    /// Writes `value` as pretty JSON with the run config and input hash.
    pub fn write_json(&self, name: &str, value: Value) -> Result<PathBuf, Failure> {
        let mut obj = match value {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        obj.insert("config".into(), self.config_json());
        obj.insert("input_sha256".into(), Value::String(self.input_hash.clone()));
        let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json value serializes") + "\n";
        self.write_text(name, &text)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf, Failure> {
        let path = self.out.join(name);
        fs::write(&path, text)?;
        Ok(path)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn show(path: &Path) {
    println!("wrote {}", path.display());
}
