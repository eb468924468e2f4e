use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::format::{json_error, Format};

/// Everything needed to regenerate one output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// One of `region-jd`, `region-xd`, `simulate`, `rdfun`, `verify`.
    pub command: String,
    pub input_path: PathBuf,
    /// Every command parameter after defaults were applied.
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl RunManifest {
    pub fn new(command: &str, input_path: PathBuf, params: &impl Serialize, seed: u64) -> Self {
        let params = match serde_json::to_value(params).expect("params serialize") {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        RunManifest { command: command.into(), input_path, params, seed, output_path: None, format: None }
    }

    /// The parameter block decoded as the command's own type.
    pub fn params_as<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        let obj = Value::Object(self.params.clone().into_iter().collect());
        serde_json::from_value(obj).map_err(|e| CliError::Usage(format!("bad parameters for {}: {e}", self.command)))
    }

    pub fn check_input(&self) -> Result<()> {
        if self.input_path.is_file() {
            Ok(())
        } else {
            Err(CliError::Io {
                path: self.input_path.clone(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "pmf file not found"),
            })
        }
    }
}

/// The manifest written next to an output, tagged with the tool version.
#[derive(Serialize, Deserialize)]
struct Sidecar {
    #[serde(default)]
    version: String,
    #[serde(flatten)]
    manifest: RunManifest,
}

/// `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

pub fn write_sidecar(m: &RunManifest, out: &Path) -> Result<PathBuf> {
    let side = Sidecar { version: env!("CARGO_PKG_VERSION").into(), manifest: m.clone() };
    let mut text = serde_json::to_string_pretty(&side).expect("manifest serializes");
    text.push('\n');
    let path = sidecar_path(out);
    std::fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(path)
}

pub fn load_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let side: Sidecar = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
    Ok(side.manifest)
}
