use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliResult;

/// Where a run writes its files.
pub struct Output {
    pub dir: PathBuf,
    main_csv: Option<String>,
}

impl Output {
    /// `--out` names a directory, or a `.csv` file for the main table with
    /// the other files written next to it.
    pub fn new(out: &Path) -> CliResult<Self> {
        let is_csv = out
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let (dir, main_csv) = if is_csv {
            let dir = match out.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let name = out.file_name().map(|n| n.to_string_lossy().into_owned());
            (dir, name)
        } else {
            (out.to_path_buf(), None)
        };
        fs::create_dir_all(&dir)?;
        Ok(Output { dir, main_csv })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Path of the main table, `default` unless `--out` named a file.
    pub fn main_path(&self, default: &str) -> PathBuf {
        self.dir.join(self.main_csv.as_deref().unwrap_or(default))
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let p = self.path(name);
        fs::write(&p, contents)?;
        Ok(p)
    }
}

/// Writes rows of already formatted fields.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `v` rounded to 10 significant digits without trailing zeros.
pub fn sig10(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let s = format!("{v:.9e}");
    let rounded: f64 = s.parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let t = format!("{rounded:.decimals$}");
        if t.contains('.') {
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            t
        }
    } else {
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}
