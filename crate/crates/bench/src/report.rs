//! CSV output. Reports start with `# ` comment lines recording every
//! adjustment made to the requested configuration, followed by a header
//! row and one row per record.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{BenchError, Result};

pub trait Row {
    fn header() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn render_csv<R: Row>(notes: &[String], rows: &[R]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for n in notes {
        writeln!(buf, "# {n}").expect("write to memory");
    }
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(R::header())?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))
}

/// Writes to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            let f = File::create(path).map_err(BenchError::io(path))?;
            let mut w = BufWriter::new(f);
            w.write_all(bytes)
                .and_then(|_| w.flush())
                .map_err(BenchError::io(path))
        }
        None => {
            let mut w = io::stdout().lock();
            w.write_all(bytes)
                .and_then(|_| w.flush())
                .map_err(BenchError::io("<stdout>"))
        }
    }
}
