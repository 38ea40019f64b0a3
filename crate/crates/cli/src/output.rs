//! Files written by a run. Every file created through an [`OutputSet`] is
//! deleted again unless the set is committed, so a failed run leaves no
//! partial output behind.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qcycle::observables::ObservableRecord;
use qcycle::WidthState;
use serde::Serialize;

use crate::CliError;

/// Column header of every trajectory CSV.
pub const CSV_HEADER: &str = "t,s,omega,xi,xi_dot,n_exc,fidelity,heat,phase";

/// Seventeen significant digits; a positive infinity is written as `inf`.
pub fn fmt_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// One CSV row for `state` with its instantaneous frequency and phase;
/// `time_scale` converts physical time to unit-rate time.
pub fn csv_row(state: &WidthState, omega: f64, phase: f64, time_scale: f64) -> String {
    let r = ObservableRecord::new(state, omega, phase);
    [
        r.t,
        r.t / time_scale,
        r.omega,
        state.xi,
        state.xi_dot,
        r.n_exc,
        r.fidelity,
        r.heat,
        r.phase,
    ]
    .iter()
    .map(|&v| fmt_float(v))
    .collect::<Vec<_>>()
    .join(",")
}

pub struct OutputSet {
    dir: PathBuf,
    created: Vec<PathBuf>,
    created_dir: bool,
    committed: bool,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Result<OutputSet, CliError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(OutputSet {
            dir: dir.to_path_buf(),
            created: Vec::new(),
            created_dir,
            committed: false,
        })
    }

    /// Writes `name` inside the output directory line by line.
    pub fn write_lines<I, S>(&mut self, name: &str, lines: I) -> Result<PathBuf, CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let path = self.dir.join(name);
        self.created.push(path.clone());
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        for line in lines {
            w.write_all(line.as_ref().as_bytes())
                .and_then(|_| w.write_all(b"\n"))
                .map_err(|e| CliError::io(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Numeric(format!("cannot encode {name}: {e}")))?;
        self.write_lines(name, [text])
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.created)
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for path in &self.created {
            let _ = fs::remove_file(path);
        }
        if self.created_dir {
            // only succeeds if nothing else was put there meanwhile
            let _ = fs::remove_dir(&self.dir);
        }
    }
}
