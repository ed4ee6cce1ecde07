//! Where and how results are written.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Sink {
    path: Option<PathBuf>,
    format: Format,
}

impl Sink {
    pub fn new(path: Option<PathBuf>, format: Format) -> Self {
        Self { path, format }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    fn writer(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    /// Header-first CSV, or a JSON array of objects.
    pub fn rows<T: Serialize>(&self, rows: &[T]) -> Result<(), Failure> {
        let out = self.writer()?;
        match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for r in rows {
                    w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
                }
                w.flush()?;
            }
            Format::Json => write_json(out, rows)?,
        }
        Ok(())
    }

    /// Documents with no tabular form are written as JSON in either format.
    pub fn json<T: Serialize>(&self, doc: &T) -> Result<(), Failure> {
        write_json(self.writer()?, doc)
    }
}

fn write_json<T: Serialize + ?Sized>(mut out: Box<dyn Write>, doc: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
