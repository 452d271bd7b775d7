//! Plain-text instance and schedule files.
//!
//! An instance file starts with `shape d n`, followed by one line per shape
//! in priority order: `d` coordinates, then one rate (or `d` rates for
//! `rect` and `box`). A schedule file lists `victim eliminator time` sorted
//! by time and ends with `survivor 1`. Indices in files are 1-based. Blank
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, ShapeKind, TouchTime};
use crate::schedule::{Elimination, EliminationSchedule};

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{token}'")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [shape, d, n] = head[..] else {
        return Err(parse_err(hl, "header must be 'shape d n'"));
    };
    let kind: ShapeKind = shape.parse().map_err(|_| parse_err(hl, format!("unknown shape '{shape}'")))?;
    let d: usize = field(hl, d, "dimension")?;
    let n: usize = field(hl, n, "count")?;
    if d == 0 {
        return Err(parse_err(hl, "dimension must be positive"));
    }
    let width = if kind.per_axis_rates() { d } else { 1 };
    let mut centers = Vec::with_capacity(n * d);
    let mut rates = Vec::with_capacity(n * width);
    let mut count = 0;
    for (ln, line) in lines {
        if count == n {
            return Err(parse_err(ln, format!("more than {n} shapes")));
        }
        let values = line
            .split_whitespace()
            .map(|t| field::<f64>(ln, t, "number"))
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != d + width {
            return Err(parse_err(
                ln,
                format!("expected {} values, found {}", d + width, values.len()),
            ));
        }
        centers.extend_from_slice(&values[..d]);
        rates.extend_from_slice(&values[d..]);
        count += 1;
    }
    if count != n {
        return Err(parse_err(text.lines().count().max(1), format!("expected {n} shapes, found {count}")));
    }
    Instance::new(kind, d, centers, rates)
}

/// Numbers use the shortest decimal that reads back to the same value.
pub fn format_instance(instance: &Instance) -> String {
    let mut out = format!("{} {} {}\n", instance.kind(), instance.dim(), instance.len());
    for i in 0..instance.len() {
        let mut first = true;
        for v in instance.center(i).iter().chain(instance.rates(i)) {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<EliminationSchedule> {
    let mut records = Vec::new();
    let mut survivor_seen = false;
    for (ln, line) in content_lines(text) {
        if survivor_seen {
            return Err(parse_err(ln, "content after survivor line"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[..] {
            ["survivor", s] => {
                if field::<usize>(ln, s, "survivor")? != 1 {
                    return Err(parse_err(ln, "survivor must be shape 1"));
                }
                survivor_seen = true;
            }
            [v, e, t] => {
                let victim: usize = field(ln, v, "victim")?;
                let eliminator: usize = field(ln, e, "eliminator")?;
                let time: f64 = field(ln, t, "time")?;
                if victim == 0 || eliminator == 0 {
                    return Err(parse_err(ln, "indices are 1-based"));
                }
                let time = TouchTime::new(time).ok_or_else(|| parse_err(ln, "negative time"))?;
                records.push(Elimination {
                    victim: victim - 1,
                    eliminator: eliminator - 1,
                    time,
                });
            }
            _ => return Err(parse_err(ln, "expected 'victim eliminator time'")),
        }
    }
    if !survivor_seen {
        return Err(parse_err(text.lines().count().max(1), "missing 'survivor 1' line"));
    }
    EliminationSchedule::new(records.len() + 1, records)
}

/// Times carry 17 significant digits, enough to read back exactly.
pub fn format_schedule(schedule: &EliminationSchedule) -> String {
    let mut out = String::new();
    for r in schedule.records() {
        writeln!(out, "{} {} {:.16e}", r.victim + 1, r.eliminator + 1, r.time.value()).unwrap();
    }
    writeln!(out, "survivor {}", schedule.survivor() + 1).unwrap();
    out
}

/// JSON mirror of a schedule file, with the same 1-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub n: usize,
    pub records: Vec<RecordJson>,
    pub survivor: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordJson {
    pub victim: usize,
    pub eliminator: usize,
    pub time: f64,
}

impl From<&EliminationSchedule> for ScheduleJson {
    fn from(s: &EliminationSchedule) -> Self {
        ScheduleJson {
            n: s.len(),
            records: s
                .records()
                .iter()
                .map(|r| RecordJson {
                    victim: r.victim + 1,
                    eliminator: r.eliminator + 1,
                    time: r.time.value(),
                })
                .collect(),
            survivor: s.survivor() + 1,
        }
    }
}

pub fn schedule_to_json(schedule: &EliminationSchedule) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ScheduleJson::from(schedule))?)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    Ok(fs::write(path, format_instance(instance))?)
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<EliminationSchedule> {
    parse_schedule(&fs::read_to_string(path)?)
}

pub fn write_schedule(path: impl AsRef<Path>, schedule: &EliminationSchedule) -> Result<()> {
    Ok(fs::write(path, format_schedule(schedule))?)
}
