use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Shortest text that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// CSV file opened with a `#schema:` line and a provenance comment.
pub struct CsvOut {
    inner: csv::Writer<BufWriter<File>>,
}

impl CsvOut {
    /// `schema` is a list of `(column, type)`.
    pub fn create(path: &Path, schema: &[(&str, &str)], config_hash: &str, seed: u64) -> Result<Self, CliError> {
        let mut f = BufWriter::new(File::create(path)?);
        let cols: Vec<String> = schema.iter().map(|(c, t)| format!("{c}:{t}")).collect();
        writeln!(f, "#schema: {}", cols.join(","))?;
        writeln!(f, "# config_hash={config_hash} seed={seed}")?;
        let mut inner = csv::Writer::from_writer(f);
        inner.write_record(schema.iter().map(|(c, _)| *c))?;
        Ok(CsvOut { inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Output directory of one run plus the manifest entries collected so far.
pub struct Run {
    pub dir: PathBuf,
    pub config_hash: String,
    pub seed: u64,
    files: Vec<String>,
}

impl Run {
    pub fn new(dir: PathBuf, config_hash: String, seed: u64) -> Result<Self, CliError> {
        fs::create_dir_all(&dir)?;
        Ok(Run {
            dir,
            config_hash,
            seed,
            files: Vec::new(),
        })
    }

    pub fn csv(&mut self, name: &str, schema: &[(&str, &str)]) -> Result<CsvOut, CliError> {
        self.files.push(name.to_string());
        CsvOut::create(&self.dir.join(name), schema, &self.config_hash, self.seed)
    }

    /// Writes `run.manifest` as `key=value` lines.
    pub fn manifest(&self, subcommand: &str, extra: &[(&str, String)]) -> Result<(), CliError> {
        let mut f = BufWriter::new(File::create(self.dir.join("run.manifest"))?);
        writeln!(f, "toolkit=supou")?;
        writeln!(f, "toolkit_version={}", supou::VERSION)?;
        writeln!(f, "subcommand={subcommand}")?;
        writeln!(f, "config_hash={}", self.config_hash)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "threads={}", rayon::current_num_threads())?;
        for (k, v) in extra {
            writeln!(f, "{k}={v}")?;
        }
        writeln!(f, "files={}", self.files.join(";"))?;
        f.flush()?;
        Ok(())
    }
}
