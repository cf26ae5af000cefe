//! Material property database.
//!
//! The on-disk format is line oriented:
//!
//! ```text
//! # comment
//! [material]
//! name = Copper
//! conductivity = 386
//! effusivity = 3.64e4
//! source = J. P. Holman, Heat Transfer, McGraw-Hill, 1990
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every `[material]`
//! header opens a record; the following `key = value` lines belong to it.
//! `name`, `conductivity` [W/(m·K)] and `effusivity` [J/(m²·s^½·K)] are
//! required, `source` is optional. Names must be unique ignoring case and
//! both numbers must be finite and positive.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::thermal::ThermalProps;

const BUNDLED: &str = include_str!("../data/materials.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub conductivity: f64,
    pub effusivity: f64,
    pub source: String,
}

impl MaterialRecord {
    /// Diffusivity follows as `λ²/e²`.
    pub fn to_thermal_props(&self) -> Result<ThermalProps> {
        ThermalProps::from_conductivity_effusivity(self.conductivity, self.effusivity)
    }
}

/// Immutable, ordered collection of materials.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDb {
    records: Vec<MaterialRecord>,
}

impl MaterialDb {
    /// The five reference materials shipped with the crate.
    pub fn bundled() -> Self {
        parse_db(BUNDLED).expect("bundled material database is valid")
    }

    pub fn records(&self) -> &[MaterialRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Result<&MaterialRecord> {
        self.records
            .iter()
            .find(|r| r.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn props(&self, name: &str) -> Result<ThermalProps> {
        self.get(name)?.to_thermal_props()
    }
}

pub fn load_db(path: impl AsRef<Path>) -> Result<MaterialDb> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_db(&text)
}

pub fn write_db(db: &MaterialDb, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_db(db)).map_err(|e| Error::io(path, e))
}

pub fn format_db(db: &MaterialDb) -> String {
    let mut out = String::from("# thermotact material database, format version 1.\n");
    for r in &db.records {
        let _ = write!(
            out,
            "\n[material]\nname = {}\nconductivity = {:?}\neffusivity = {:?}\n",
            r.name, r.conductivity, r.effusivity
        );
        if !r.source.is_empty() {
            let _ = writeln!(out, "source = {}", r.source);
        }
    }
    out
}

#[derive(Default)]
struct Pending {
    header_line: usize,
    name: Option<(String, usize)>,
    conductivity: Option<f64>,
    effusivity: Option<f64>,
    source: Option<String>,
}

impl Pending {
    fn finish(self) -> Result<(MaterialRecord, usize)> {
        let missing = |key: &str| Error::Parse {
            line: self.header_line,
            message: format!("material block is missing required key `{key}`"),
        };
        let (name, name_line) = self.name.clone().ok_or_else(|| missing("name"))?;
        let conductivity = self.conductivity.ok_or_else(|| missing("conductivity"))?;
        let effusivity = self.effusivity.ok_or_else(|| missing("effusivity"))?;
        Ok((
            MaterialRecord {
                name,
                conductivity,
                effusivity,
                source: self.source.unwrap_or_default(),
            },
            name_line,
        ))
    }
}

/// Parses the text format. Every error names the offending line.
pub fn parse_db(text: &str) -> Result<MaterialDb> {
    let mut records = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut current: Option<Pending> = None;

    let mut push = |pending: Pending, records: &mut Vec<MaterialRecord>| -> Result<()> {
        let (rec, line) = pending.finish()?;
        let key = rec.name.to_lowercase();
        if let Some(&first_line) = seen.get(&key) {
            return Err(Error::DuplicateMaterial {
                name: rec.name,
                line,
                first_line,
            });
        }
        seen.insert(key, line);
        records.push(rec);
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            if line != "[material]" {
                return Err(parse_err(
                    line_no,
                    format!("unknown section header `{line}`"),
                ));
            }
            if let Some(p) = current.take() {
                push(p, &mut records)?;
            }
            current = Some(Pending {
                header_line: line_no,
                ..Pending::default()
            });
            continue;
        }
        let Some(block) = current.as_mut() else {
            return Err(parse_err(line_no, "key outside of a [material] block"));
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(parse_err(line_no, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" => {
                if value.is_empty() {
                    return Err(parse_err(line_no, "field `name` is empty"));
                }
                set_once(&mut block.name, (value.to_string(), line_no), key, line_no)?;
            }
            "conductivity" => {
                let v = positive_number(value, key, line_no)?;
                set_once(&mut block.conductivity, v, key, line_no)?;
            }
            "effusivity" => {
                let v = positive_number(value, key, line_no)?;
                set_once(&mut block.effusivity, v, key, line_no)?;
            }
            "source" => set_once(&mut block.source, value.to_string(), key, line_no)?,
            other => return Err(parse_err(line_no, format!("unknown field `{other}`"))),
        }
    }
    if let Some(p) = current.take() {
        push(p, &mut records)?;
    }
    if records.is_empty() {
        return Err(parse_err(
            text.lines().count().max(1),
            "database contains no materials",
        ));
    }
    Ok(MaterialDb { records })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(parse_err(
            line,
            format!("field `{key}` given twice in one block"),
        ));
    }
    *slot = Some(value);
    Ok(())
}

fn positive_number(value: &str, key: &str, line: usize) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| parse_err(line, format!("field `{key}`: `{value}` is not a number")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(parse_err(
            line,
            format!("field `{key}` must be finite and > 0, got {value}"),
        ));
    }
    Ok(v)
}
