//! Assignment files: exact `p/q` entries, with rounded decimals for display.

use std::path::Path;

use rawlsian_core::ratio::{decimal_half_even, format_q, parse_q};
use rawlsian_core::{Assignment, PreferenceProfile, Q};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::problem::{finish_csv, read_text, to_json, write_record, Format, SCHEMA_VERSION};

pub const DECIMAL_PLACES: usize = 6;

pub fn decimal(value: &Q) -> String {
    decimal_half_even(value, DECIMAL_PLACES)
}

/// An exact value with its display rounding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub exact: String,
    pub decimal: String,
}

impl From<&Q> for Cell {
    fn from(value: &Q) -> Self {
        Cell { exact: format_q(value), decimal: decimal(value) }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentFile {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    agents: Vec<String>,
    objects: Vec<String>,
    /// Authoritative rows of `p/q` strings.
    entries: Vec<Vec<String>>,
    /// Display only; ignored on input.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    decimals: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedAssignment {
    pub rule: Option<String>,
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    pub assignment: Assignment,
}

impl NamedAssignment {
    pub fn for_profile(profile: &PreferenceProfile, rule: Option<String>, assignment: Assignment) -> Self {
        NamedAssignment {
            rule,
            agents: profile.agents().to_vec(),
            objects: profile.objects().to_vec(),
            assignment,
        }
    }

    /// Errors unless agent and object names match the profile's, in order.
    pub fn check_against(&self, profile: &PreferenceProfile, origin: &str) -> Result<()> {
        if self.agents != profile.agents() {
            return Err(CliError::schema(
                origin,
                format!("assignment agents {:?} do not match problem agents {:?}", self.agents, profile.agents()),
            ));
        }
        if self.objects != profile.objects() {
            return Err(CliError::schema(
                origin,
                format!("assignment objects {:?} do not match problem objects {:?}", self.objects, profile.objects()),
            ));
        }
        Ok(())
    }
}

pub fn read_assignment(path: &Path, format: Option<Format>) -> Result<NamedAssignment> {
    let text = read_text(path)?;
    parse_assignment(&text, format.unwrap_or_else(|| Format::from_path(path)), &path.display().to_string())
}

pub fn parse_assignment(text: &str, format: Format, origin: &str) -> Result<NamedAssignment> {
    let file = match format {
        Format::Json => {
            let file: AssignmentFile =
                serde_json::from_str(text).map_err(|e| CliError::schema(origin, e.to_string()))?;
            if file.schema_version != SCHEMA_VERSION {
                return Err(CliError::schema(
                    origin,
                    format!("schema_version: unsupported version {}, expected {SCHEMA_VERSION}", file.schema_version),
                ));
            }
            file
        }
        Format::Csv => csv_file(text, origin)?,
    };
    let n = file.agents.len();
    if file.objects.len() != n {
        return Err(CliError::schema(
            origin,
            format!("non-square assignment: {n} agents but {} objects", file.objects.len()),
        ));
    }
    if file.entries.len() != n {
        return Err(CliError::schema(origin, format!("entries: expected {n} rows, found {}", file.entries.len())));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::schema(origin, format!("entries[{i}]: expected {n} values, found {}", row.len())));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(o, v)| {
                parse_q(v).ok_or_else(|| CliError::schema(origin, format!("entries[{i}][{o}]: '{v}' is not a rational")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    let assignment = Assignment::new(rows).map_err(|e| CliError::schema(origin, format!("entries: {e}")))?;
    Ok(NamedAssignment { rule: file.rule, agents: file.agents, objects: file.objects, assignment })
}

/// Header `agent,<objects>`, then one row per agent.
fn csv_file(text: &str, origin: &str) -> Result<AssignmentFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::schema(origin, format!("header: {e}")))?;
    let objects: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut agents = Vec::new();
    let mut entries = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::schema(origin, format!("row {}: {e}", k + 1)))?;
        let mut fields = record.iter().map(str::to_string);
        agents.push(fields.next().unwrap_or_default());
        entries.push(fields.collect());
    }
    Ok(AssignmentFile { schema_version: SCHEMA_VERSION, rule: None, agents, objects, entries, decimals: Vec::new() })
}

pub fn emit_assignment(named: &NamedAssignment, format: Format) -> Result<String> {
    let rows = named.assignment.rows();
    let entries: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(format_q).collect()).collect();
    match format {
        Format::Json => {
            let file = AssignmentFile {
                schema_version: SCHEMA_VERSION,
                rule: named.rule.clone(),
                agents: named.agents.clone(),
                objects: named.objects.clone(),
                entries,
                decimals: rows.iter().map(|r| r.iter().map(decimal).collect()).collect(),
            };
            Ok(to_json(&file))
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> = std::iter::once("agent".to_string()).chain(named.objects.iter().cloned()).collect();
            write_record(&mut writer, &header)?;
            for (agent, row) in named.agents.iter().zip(entries) {
                let record: Vec<String> = std::iter::once(agent.clone()).chain(row).collect();
                write_record(&mut writer, &record)?;
            }
            finish_csv(writer)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rawlsian_core::rawlsian;

    #[test]
    fn round_trips_exactly() {
        let p = PreferenceProfile::from_letters(&["abc", "abc", "bca"]).unwrap();
        let named = NamedAssignment::for_profile(&p, Some("rawlsian".into()), rawlsian(&p).unwrap());
        for format in [Format::Json, Format::Csv] {
            let text = emit_assignment(&named, format).unwrap();
            let back = parse_assignment(&text, format, "x").unwrap();
            assert_eq!(back.assignment, named.assignment);
            back.check_against(&p, "x").unwrap();
        }
    }

    #[test]
    fn decimals_round_half_even() {
        let q = |a, b| rawlsian_core::ratio::q(a, b);
        assert_eq!(decimal(&q(1, 3)), "0.333333");
        assert_eq!(decimal(&q(2, 3)), "0.666667");
        assert_eq!(decimal(&q(1, 2_000_000)), "0.000000");
        assert_eq!(decimal(&q(3, 2_000_000)), "0.000002");
        assert_eq!(Cell::from(&q(1, 2)), Cell { exact: "1/2".into(), decimal: "0.500000".into() });
    }

    #[test]
    fn rejects_non_bistochastic_entries() {
        let text = "agent,a,b\n1,1/2,1/2\n2,1/2,1/3\n";
        let err = parse_assignment(text, Format::Csv, "y.csv").unwrap_err();
        assert!(err.to_string().starts_with("y.csv: entries:"), "{err}");
        let text = "agent,a,b\n1,1/2,x\n2,1/2,1/2\n";
        assert!(parse_assignment(text, Format::Csv, "y.csv").unwrap_err().to_string().contains("entries[0][1]"));
    }
}
