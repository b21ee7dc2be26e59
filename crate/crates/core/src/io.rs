//! Plain-text instance and schedule files.
//!
//! Instance: first data line `m n`, then `n` lines `id weight p(1) .. p(m)`.
//! Schedule: first data line `n`, then `n` lines `id start allot`.
//! Fields are whitespace separated and lines starting with `#` are comments.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Instance, MoldableTask, Placement, Schedule};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(idx, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((idx + 1, line.split_whitespace().collect()))
        }
    })
}

fn field<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = data_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `m n` header"))?;
    if header.len() != 2 {
        return Err(Error::parse(line, "header must be `m n`"));
    }
    let m: usize = field(line, header[0], "processor count")?;
    let n: usize = field(line, header[1], "task count")?;

    let mut tasks = Vec::with_capacity(n);
    for (line, toks) in lines.by_ref().take(n) {
        if toks.len() != m + 2 {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", m + 2, toks.len()),
            ));
        }
        let id: usize = field(line, toks[0], "task id")?;
        let weight: f64 = field(line, toks[1], "weight")?;
        let profile = toks[2..]
            .iter()
            .map(|t| field(line, t, "processing time"))
            .collect::<Result<Vec<f64>>>()?;
        let task =
            MoldableTask::new(id, weight, profile).map_err(|e| Error::parse(line, e.to_string()))?;
        tasks.push(task);
    }
    if tasks.len() != n {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {n} tasks, found {}", tasks.len()),
        ));
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "trailing data after last task"));
    }
    Instance::new(m, tasks)
}

pub fn format_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", instance.m(), instance.n());
    for task in instance.tasks() {
        let _ = write!(out, "{} {}", task.id, task.weight);
        for p in task.profile() {
            let _ = write!(out, " {p}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut lines = data_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n` header"))?;
    if header.len() != 1 {
        return Err(Error::parse(line, "header must be `n`"));
    }
    let n: usize = field(line, header[0], "placement count")?;
    let mut placements = Vec::with_capacity(n);
    for (line, toks) in lines.by_ref().take(n) {
        if toks.len() != 3 {
            return Err(Error::parse(line, "expected `id start allot`"));
        }
        placements.push(Placement::new(
            field(line, toks[0], "task id")?,
            field(line, toks[1], "start time")?,
            field(line, toks[2], "allotment")?,
        ));
    }
    if placements.len() != n {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {n} placements, found {}", placements.len()),
        ));
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "trailing data after last placement"));
    }
    Ok(Schedule::new(placements))
}

/// Placements are written in task-id order.
pub fn format_schedule(schedule: &Schedule) -> String {
    let mut placements = schedule.placements.clone();
    placements.sort_by_key(|p| p.task);
    let mut out = String::new();
    let _ = writeln!(out, "{}", placements.len());
    for p in placements {
        let _ = writeln!(out, "{} {} {}", p.task, p.start, p.allot);
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_instance(instance)).map_err(|e| Error::io(path, e))
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_schedule(&text)
}

pub fn write_schedule(path: impl AsRef<Path>, schedule: &Schedule) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_schedule(schedule)).map_err(|e| Error::io(path, e))
}
