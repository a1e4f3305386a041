//! Plain-text incidence files.
//!
//! ```text
//! # optional comments; "# label: <text>" names the structure
//! <num_points> <num_lines>
//! <p0> <p1> ...      one line per geometry line, strictly increasing indices
//! ```
//!
//! [`to_text`] writes lines in lexicographic order, so equal structures
//! serialize to identical bytes.

use std::fs;
use std::path::Path;

use super::{GeometryError, IncidenceStructure, Result};

const LABEL_PREFIX: &str = "# label:";

pub fn to_text(inc: &IncidenceStructure) -> String {
    let canonical = inc.canonical();
    let mut out = String::new();
    if let Some(label) = inc.label() {
        out.push_str(LABEL_PREFIX);
        out.push(' ');
        out.push_str(label);
        out.push('\n');
    }
    out.push_str(&format!("{} {}\n", canonical.num_points(), canonical.num_lines()));
    for line in canonical.lines() {
        let row: Vec<String> = line.iter().map(usize::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<IncidenceStructure> {
    let err = |line: usize, message: String| GeometryError::Parse { line, message };

    let mut label = None;
    let mut header: Option<(usize, usize)> = None;
    let mut lines: Vec<Vec<usize>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(LABEL_PREFIX) {
            label = Some(rest.trim().to_string());
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<usize> = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| err(lineno, format!("expected a non-negative integer, found {tok:?}")))
            })
            .collect::<Result<_>>()?;

        let Some((num_points, num_lines)) = header else {
            if fields.len() != 2 {
                return Err(err(lineno, "header must be `<num_points> <num_lines>`".into()));
            }
            header = Some((fields[0], fields[1]));
            continue;
        };
        if lines.len() == num_lines {
            return Err(err(lineno, format!("more than the declared {num_lines} lines")));
        }
        if let Some(&p) = fields.iter().find(|&&p| p >= num_points) {
            return Err(err(lineno, format!("point index {p} out of range (num_points = {num_points})")));
        }
        if fields.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(lineno, "point indices must be strictly increasing".into()));
        }
        lines.push(fields);
    }

    let Some((num_points, num_lines)) = header else {
        return Err(err(text.lines().count().max(1), "missing header".into()));
    };
    if lines.len() != num_lines {
        return Err(err(text.lines().count().max(1), format!("declared {num_lines} lines but found {}", lines.len())));
    }
    let inc = IncidenceStructure::new(num_points, lines)?;
    Ok(match label {
        Some(l) => inc.with_label(l),
        None => inc,
    })
}

pub fn save(inc: &IncidenceStructure, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_text(inc))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<IncidenceStructure> {
    let text = fs::read_to_string(path)?;
    parse(&text)
}
