use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::io::Io;

/// Named tolerances a subcommand ran with, as strings.
pub type Tolerances = BTreeMap<String, String>;

/// What a run read, wrote and took. Outputs are only listed once written,
/// and each input hash can be recomputed from the file at its path.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub input_hashes: BTreeMap<String, String>,
    pub module_versions: BTreeMap<String, String>,
    pub tolerances: Tolerances,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: String,
}

impl RunManifest {
    pub fn new(command: Vec<String>, io: &Io, tolerances: Tolerances, elapsed: Duration) -> Self {
        let module_versions = BTreeMap::from([
            ("mylab-core".to_string(), mylab::VERSION.to_string()),
            ("mylab-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ]);
        Self {
            command,
            input_hashes: io.inputs.iter().cloned().collect(),
            module_versions,
            tolerances,
            outputs: io.outputs.clone(),
            wall_clock_seconds: format!("{:.3}", elapsed.as_secs_f64()),
        }
    }
}

/// Shorthand for building [`Tolerances`].
pub fn tolerances<const N: usize>(pairs: [(&str, String); N]) -> Tolerances {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
