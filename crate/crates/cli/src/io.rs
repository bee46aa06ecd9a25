use std::path::{Path, PathBuf};
use std::sync::Arc;

use mylab::radial::{Grid, KahlerProfile};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Root of the bundled example data. `MYLAB_CORPUS` wins over the copy
/// shipped next to the sources.
pub fn corpus_root() -> PathBuf {
    match std::env::var_os("MYLAB_CORPUS") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// Records every file read and written, for the run manifest.
#[derive(Default)]
pub struct Io {
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<String>,
}

impl Io {
    /// Finds `name` as given, then under the corpus in `subdir`, then at the
    /// corpus root.
    pub fn resolve(&self, name: &Path, subdir: &str) -> Result<PathBuf, CliError> {
        if name.exists() {
            return Ok(name.to_path_buf());
        }
        if name.is_relative() {
            let root = corpus_root();
            for cand in [root.join(subdir).join(name), root.join(name)] {
                if cand.exists() {
                    return Ok(cand);
                }
            }
        }
        Err(CliError::io(name, "file not found (also looked in the corpus)"))
    }

    /// Reads a file found by [`Io::resolve`] and records its hash.
    pub fn read(&mut self, name: &Path, subdir: &str) -> Result<(PathBuf, String), CliError> {
        let path = self.resolve(name, subdir)?;
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        self.inputs.push((path.display().to_string(), sha256_hex(text.as_bytes())));
        Ok((path, text))
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    /// Pretty JSON to `out`, or to stdout when no path is given.
    pub fn emit<T: Serialize>(&mut self, out: Option<&Path>, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable output");
        text.push('\n');
        self.emit_text(out, &text)
    }

    pub fn emit_text(&mut self, out: Option<&Path>, text: &str) -> Result<(), CliError> {
        match out {
            Some(p) => self.write(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Decimal form used for every floating-point output.
pub fn dec(x: f64) -> String {
    format!("{x:e}")
}

/// Reads a two-column CSV `t,<name>` into `(t, values)`.
pub fn read_columns(text: &str, path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| CliError::parse(path, e))?.clone();
    let want = ["t", column];
    if headers.len() != 2 || headers.iter().zip(want).any(|(h, w)| h != w) {
        return Err(CliError::parse(path, format!("expected header \"t,{column}\"")));
    }
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e))?;
        let num = |i: usize| {
            rec[i].parse::<f64>().map_err(|e| CliError::parse(path, format!("row {}: {e}", line + 2)))
        };
        t.push(num(0)?);
        v.push(num(1)?);
    }
    Ok((t, v))
}

/// Values of a sampled radial function at the nodes of `grid`.
///
/// Samples already on the grid are taken as they are. Otherwise they must
/// lie on a uniform mesh of at least eight even intervals covering
/// `[-T, T]`, and are interpolated with the mesh's degree-7 stencil.
pub fn resample(t: &[f64], v: &[f64], grid: &Grid, path: &Path) -> Result<Vec<f64>, CliError> {
    let on_grid = t.len() == grid.len() && t.iter().zip(grid.t()).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + b.abs()));
    if on_grid {
        return Ok(v.to_vec());
    }
    let intervals = t.len().saturating_sub(1);
    if intervals < 8 || intervals % 2 != 0 {
        return Err(CliError::parse(path, "samples off the grid need an even number (≥ 8) of intervals"));
    }
    let (lo, hi) = (t[0], t[intervals]);
    if (lo + hi).abs() > 1e-9 * hi.abs() || hi <= 0.0 {
        return Err(CliError::parse(path, "samples must cover a symmetric range [-T, T]"));
    }
    let h = (hi - lo) / intervals as f64;
    if t.iter().enumerate().any(|(i, &x)| (x - (lo + i as f64 * h)).abs() > 1e-9 * (1.0 + x.abs())) {
        return Err(CliError::parse(path, "samples are not on a uniform mesh"));
    }
    if hi < grid.t_max() * (1.0 - 1e-12) {
        return Err(CliError::parse(path, format!("samples cover |t| ≤ {hi}, grid needs {}", grid.t_max())));
    }
    let source = Grid::new(hi, intervals);
    Ok(grid.t().iter().map(|&x| source.interpolate(v, x)).collect())
}

pub fn write_profile_csv(p: &KahlerProfile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "phi"]).expect("in-memory write");
    for (t, phi) in p.grid().t().iter().zip(p.phi()) {
        w.write_record([dec(*t), dec(*phi)]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

/// Quadrature grid from the `--nodes` (intervals) and `--T` flags.
pub fn grid(nodes: usize, t_max: f64) -> Result<Arc<Grid>, CliError> {
    if nodes < 8 || nodes % 2 != 0 {
        return Err(CliError::usage("--nodes", "must be an even number of intervals, at least 8"));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::usage("--T", "must be positive"));
    }
    Ok(Arc::new(Grid::new(t_max, nodes)))
}
