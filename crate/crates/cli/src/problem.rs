//! Problem files: agents, objects, strict preferences and optional
//! cardinal utilities, as JSON or CSV.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use rawlsian_core::ratio::{format_q, parse_q};
use rawlsian_core::rules::CardinalUtilityProfile;
use rawlsian_core::PreferenceProfile;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, anything else JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    schema_version: u32,
    agents: Vec<String>,
    objects: Vec<String>,
    /// Object names per agent, best first.
    preferences: Vec<Vec<String>>,
    /// `u[i][o]` as rationals, columns in `objects` order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    utilities: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub profile: PreferenceProfile,
    pub utilities: Option<CardinalUtilityProfile>,
}

impl Problem {
    pub fn new(profile: PreferenceProfile) -> Self {
        Problem { profile, utilities: None }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

/// Reads a problem, taking the format from the extension unless given.
pub fn read_problem(path: &Path, format: Option<Format>) -> Result<Problem> {
    let text = read_text(path)?;
    parse_problem(&text, format.unwrap_or_else(|| Format::from_path(path)), &path.display().to_string())
}

pub fn parse_problem(text: &str, format: Format, origin: &str) -> Result<Problem> {
    match format {
        Format::Json => parse_json(text, origin),
        Format::Csv => parse_csv(text, origin),
    }
}

fn parse_json(text: &str, origin: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::schema(origin, e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::schema(
            origin,
            format!("schema_version: unsupported version {}, expected {SCHEMA_VERSION}", file.schema_version),
        ));
    }
    let n = file.agents.len();
    if n == 0 {
        return Err(CliError::schema(origin, "agents: at least one agent is required"));
    }
    if file.objects.len() != n {
        return Err(CliError::schema(
            origin,
            format!("non-square problem: {n} agents but {} objects", file.objects.len()),
        ));
    }
    distinct_names(&file.agents, "agents", origin)?;
    let index = distinct_names(&file.objects, "objects", origin)?;
    if file.preferences.len() != n {
        return Err(CliError::schema(
            origin,
            format!("preferences: expected {n} lists, found {}", file.preferences.len()),
        ));
    }
    let orders = file
        .preferences
        .iter()
        .enumerate()
        .map(|(i, list)| resolve_order(list, &index, &file.objects, &format!("preferences[{i}]"), origin))
        .collect::<Result<Vec<_>>>()?;
    let profile = PreferenceProfile::with_names(file.agents, file.objects, orders)?;
    let utilities = match file.utilities {
        None => None,
        Some(rows) => Some(parse_utilities(&profile, rows, origin)?),
    };
    Ok(Problem { profile, utilities })
}

fn parse_utilities(profile: &PreferenceProfile, rows: Vec<Vec<String>>, origin: &str) -> Result<CardinalUtilityProfile> {
    let n = profile.n();
    if rows.len() != n {
        return Err(CliError::schema(origin, format!("utilities: expected {n} rows, found {}", rows.len())));
    }
    let mut u = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::schema(
                origin,
                format!("utilities[{i}]: expected {n} values, found {}", row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(o, v)| {
                parse_q(v).ok_or_else(|| CliError::schema(origin, format!("utilities[{i}][{o}]: '{v}' is not a rational")))
            })
            .collect::<Result<Vec<_>>>()?;
        u.push(parsed);
    }
    CardinalUtilityProfile::new(profile, u).map_err(|e| CliError::schema(origin, format!("utilities: {e}")))
}

fn distinct_names<'a>(names: &'a [String], field: &str, origin: &str) -> Result<HashMap<&'a str, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        if name.trim().is_empty() {
            return Err(CliError::schema(origin, format!("{field}[{k}]: empty name")));
        }
        if index.insert(name.as_str(), k).is_some() {
            return Err(CliError::schema(origin, format!("{field}[{k}]: '{name}' appears twice")));
        }
    }
    Ok(index)
}

/// Maps a list of object names to indices, rejecting repeats, unknown and
/// missing objects.
fn resolve_order(
    list: &[String],
    index: &HashMap<&str, usize>,
    objects: &[String],
    location: &str,
    origin: &str,
) -> Result<Vec<usize>> {
    let mut seen = vec![false; objects.len()];
    let mut order = Vec::with_capacity(list.len());
    for name in list {
        let &o = index
            .get(name.as_str())
            .ok_or_else(|| CliError::schema(origin, format!("{location}: unknown object '{name}'")))?;
        if seen[o] {
            return Err(CliError::schema(origin, format!("{location}: object '{name}' listed twice")));
        }
        seen[o] = true;
        order.push(o);
    }
    if let Some(o) = seen.iter().position(|s| !s) {
        return Err(CliError::schema(origin, format!("{location}: object '{}' missing", objects[o])));
    }
    Ok(order)
}

/// One row per agent (named `1..=n` by position) listing objects best
/// first, under a mandatory header. Objects are indexed in sorted order.
fn parse_csv(text: &str, origin: &str) -> Result<Problem> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let width = reader.headers().map_err(|e| CliError::schema(origin, format!("header: {e}")))?.len();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| CliError::schema(origin, format!("row {row}: {e}")))?;
        let names: Vec<String> = record.iter().map(str::to_string).collect();
        if names.len() != width {
            return Err(CliError::schema(
                origin,
                format!("row {row}: expected {width} objects, found {}", names.len()),
            ));
        }
        let mut distinct = BTreeSet::new();
        if let Some(dup) = names.iter().find(|n| !distinct.insert(n.as_str())) {
            return Err(CliError::schema(origin, format!("row {row}: object '{dup}' listed twice")));
        }
        rows.push(names);
    }
    if rows.is_empty() {
        return Err(CliError::schema(origin, "no agent rows after the header"));
    }
    if rows.len() != width {
        return Err(CliError::schema(
            origin,
            format!("non-square problem: {} agents but {width} objects per row", rows.len()),
        ));
    }
    let objects: Vec<String> = rows[0].iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let index: HashMap<&str, usize> = objects.iter().enumerate().map(|(k, o)| (o.as_str(), k)).collect();
    let orders = rows
        .iter()
        .enumerate()
        .map(|(k, list)| resolve_order(list, &index, &objects, &format!("row {}", k + 1), origin))
        .collect::<Result<Vec<_>>>()?;
    let agents = (1..=rows.len()).map(|i| i.to_string()).collect();
    Ok(Problem::new(PreferenceProfile::with_names(agents, objects, orders)?))
}

pub fn emit_problem(problem: &Problem, format: Format) -> Result<String> {
    let p = &problem.profile;
    let preferences: Vec<Vec<String>> =
        (0..p.n()).map(|i| p.order(i).iter().map(|&o| p.objects()[o].clone()).collect()).collect();
    match format {
        Format::Json => {
            let utilities = problem.utilities.as_ref().map(|u| {
                (0..p.n()).map(|i| (0..p.n()).map(|o| format_q(u.get(i, o))).collect()).collect()
            });
            let file = ProblemFile {
                schema_version: SCHEMA_VERSION,
                agents: p.agents().to_vec(),
                objects: p.objects().to_vec(),
                preferences,
                utilities,
            };
            Ok(to_json(&file))
        }
        Format::Csv => {
            if problem.utilities.is_some() {
                return Err(CliError::Usage("the CSV problem format cannot carry utilities; use JSON".into()));
            }
            let mut writer = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> = (1..=p.n()).map(|k| format!("rank_{k}")).collect();
            write_record(&mut writer, &header)?;
            for row in &preferences {
                write_record(&mut writer, row)?;
            }
            finish_csv(writer)
        }
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub(crate) fn write_record(writer: &mut csv::Writer<Vec<u8>>, row: &[String]) -> Result<()> {
    writer.write_record(row).map_err(|e| CliError::Usage(format!("csv output: {e}")))
}

pub(crate) fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| CliError::Usage(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}
