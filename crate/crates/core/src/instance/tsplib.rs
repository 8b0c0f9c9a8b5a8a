//! Reader and writer for the subset of the TSPLIB `.tsp` format we support:
//! EUC_2D / GEO coordinates and EXPLICIT matrices in FULL_MATRIX,
//! LOWER_DIAG_ROW or UPPER_ROW layout.

use super::{EdgeWeightKind, Instance, InstanceData, InstanceError};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    FullMatrix,
    LowerDiagRow,
    UpperRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    NodeCoords,
    EdgeWeights,
    Skipped,
}

#[derive(Default)]
struct Raw {
    name: Option<String>,
    comment: Option<String>,
    dimension: Option<usize>,
    weight_type: Option<EdgeWeightKind>,
    weight_format: Option<WeightFormat>,
    // (line number, tokens) per coordinate line
    coord_lines: Option<Vec<(usize, Vec<String>)>>,
    weights: Option<Vec<(usize, String)>>,
}

fn is_keyword_line(line: &str) -> bool {
    line.trim_start().chars().next().is_some_and(|c| c.is_ascii_alphabetic())
}

fn split_key_value(line: &str) -> (String, Option<String>) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim().to_ascii_uppercase(), Some(v.trim().to_string())),
        None => {
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or("").to_ascii_uppercase();
            let rest: Vec<&str> = parts.collect();
            let value = (!rest.is_empty()).then(|| rest.join(" "));
            (key, value)
        }
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64, InstanceError> {
    token.parse::<f64>().map_err(|_| InstanceError::Syntax {
        line,
        message: format!("expected a number, found '{token}'"),
    })
}

/// Parses a TSPLIB `.tsp` document.
///
/// Header keywords may appear in any order (including after a data
/// section); the `EOF` marker is optional.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut raw = Raw::default();
    let mut section = Section::None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !is_keyword_line(trimmed) {
            match section {
                Section::NodeCoords => raw
                    .coord_lines
                    .get_or_insert_with(Vec::new)
                    .push((lineno, trimmed.split_whitespace().map(str::to_string).collect())),
                Section::EdgeWeights => raw
                    .weights
                    .get_or_insert_with(Vec::new)
                    .extend(trimmed.split_whitespace().map(|t| (lineno, t.to_string()))),
                Section::Skipped => {}
                Section::None => {
                    return Err(InstanceError::Syntax {
                        line: lineno,
                        message: "data outside of a section".into(),
                    })
                }
            }
            continue;
        }

        let (key, value) = split_key_value(trimmed);
        let require_value = |v: Option<String>| {
            v.filter(|s| !s.is_empty()).ok_or_else(|| InstanceError::Syntax {
                line: lineno,
                message: format!("keyword {key} has no value"),
            })
        };
        section = Section::None;
        match key.as_str() {
            "EOF" => break,
            "NAME" => raw.name = Some(value.unwrap_or_default()),
            "COMMENT" => raw.comment = value,
            "TYPE" => {
                let v = require_value(value)?;
                if !v.eq_ignore_ascii_case("TSP") {
                    return Err(InstanceError::UnsupportedFormat { keyword: "TYPE", value: v });
                }
            }
            "DIMENSION" => {
                let v = require_value(value)?;
                let n = v.parse::<usize>().map_err(|_| InstanceError::Syntax {
                    line: lineno,
                    message: format!("invalid DIMENSION '{v}'"),
                })?;
                raw.dimension = Some(n);
            }
            "EDGE_WEIGHT_TYPE" => {
                let v = require_value(value)?;
                raw.weight_type = Some(match v.to_ascii_uppercase().as_str() {
                    "EUC_2D" => EdgeWeightKind::Euc2d,
                    "GEO" => EdgeWeightKind::Geo,
                    "EXPLICIT" => EdgeWeightKind::Explicit,
                    _ => return Err(InstanceError::UnsupportedFormat { keyword: "EDGE_WEIGHT_TYPE", value: v }),
                });
            }
            "EDGE_WEIGHT_FORMAT" => {
                let v = require_value(value)?;
                raw.weight_format = Some(match v.to_ascii_uppercase().as_str() {
                    "FULL_MATRIX" => WeightFormat::FullMatrix,
                    "LOWER_DIAG_ROW" => WeightFormat::LowerDiagRow,
                    "UPPER_ROW" => WeightFormat::UpperRow,
                    _ => return Err(InstanceError::UnsupportedFormat { keyword: "EDGE_WEIGHT_FORMAT", value: v }),
                });
            }
            "NODE_COORD_TYPE" => {
                let v = require_value(value)?;
                if !v.eq_ignore_ascii_case("TWOD_COORDS") {
                    return Err(InstanceError::UnsupportedFormat { keyword: "NODE_COORD_TYPE", value: v });
                }
            }
            "DISPLAY_DATA_TYPE" => {}
            "NODE_COORD_SECTION" => {
                raw.coord_lines.get_or_insert_with(Vec::new);
                section = Section::NodeCoords;
            }
            "EDGE_WEIGHT_SECTION" => {
                raw.weights.get_or_insert_with(Vec::new);
                section = Section::EdgeWeights;
            }
            "DISPLAY_DATA_SECTION" => section = Section::Skipped,
            _ => {
                return Err(InstanceError::UnsupportedFormat {
                    keyword: "keyword",
                    value: key,
                })
            }
        }
    }

    let n = raw.dimension.ok_or(InstanceError::MissingField("DIMENSION"))?;
    if n < 2 {
        return Err(InstanceError::DimensionTooSmall(n));
    }
    let kind = match raw.weight_type {
        Some(k) => k,
        None if raw.weights.is_some() => EdgeWeightKind::Explicit,
        None if raw.coord_lines.is_some() => EdgeWeightKind::Euc2d,
        None => return Err(InstanceError::MissingField("EDGE_WEIGHT_TYPE")),
    };

    let data = match kind {
        EdgeWeightKind::Explicit => {
            let tokens = raw.weights.ok_or(InstanceError::MissingField("EDGE_WEIGHT_SECTION"))?;
            let format = raw.weight_format.ok_or(InstanceError::MissingField("EDGE_WEIGHT_FORMAT"))?;
            InstanceData::Explicit(expand_weights(n, format, &tokens)?)
        }
        EdgeWeightKind::Euc2d | EdgeWeightKind::Geo => {
            let lines = raw.coord_lines.ok_or(InstanceError::MissingField("NODE_COORD_SECTION"))?;
            InstanceData::Coords(read_coords(n, &lines)?)
        }
    };

    let inst = Instance {
        name: raw.name.unwrap_or_default(),
        comment: raw.comment,
        dimension: n,
        kind,
        data,
    };
    inst.validate()?;
    Ok(inst)
}

fn read_coords(n: usize, lines: &[(usize, Vec<String>)]) -> Result<Vec<(f64, f64)>, InstanceError> {
    if lines.len() != n {
        return Err(InstanceError::CountMismatch {
            what: "NODE_COORD_SECTION",
            expected: n,
            found: lines.len(),
        });
    }
    let mut coords: Vec<Option<(f64, f64)>> = vec![None; n];
    for (lineno, tokens) in lines {
        if tokens.len() != 3 {
            return Err(InstanceError::Syntax {
                line: *lineno,
                message: format!("expected 'index x y', found {} fields", tokens.len()),
            });
        }
        let index = tokens[0].parse::<usize>().ok().filter(|&i| (1..=n).contains(&i)).ok_or_else(|| {
            InstanceError::Syntax {
                line: *lineno,
                message: format!("node index '{}' outside 1..={n}", tokens[0]),
            }
        })?;
        let slot = &mut coords[index - 1];
        if slot.is_some() {
            return Err(InstanceError::Syntax {
                line: *lineno,
                message: format!("node {index} listed twice"),
            });
        }
        *slot = Some((parse_number(&tokens[1], *lineno)?, parse_number(&tokens[2], *lineno)?));
    }
    Ok(coords.into_iter().map(|c| c.expect("n distinct indices fill every slot")).collect())
}

fn expand_weights(n: usize, format: WeightFormat, tokens: &[(usize, String)]) -> Result<Vec<f64>, InstanceError> {
    let expected = match format {
        WeightFormat::FullMatrix => n * n,
        WeightFormat::LowerDiagRow => n * (n + 1) / 2,
        WeightFormat::UpperRow => n * (n - 1) / 2,
    };
    if tokens.len() != expected {
        return Err(InstanceError::CountMismatch {
            what: "EDGE_WEIGHT_SECTION",
            expected,
            found: tokens.len(),
        });
    }
    let values = tokens
        .iter()
        .map(|(line, t)| parse_number(t, *line))
        .collect::<Result<Vec<_>, _>>()?;

    let mut m = vec![0.0; n * n];
    let mut it = values.into_iter();
    match format {
        WeightFormat::FullMatrix => m = it.collect(),
        WeightFormat::LowerDiagRow => {
            for i in 0..n {
                for j in 0..=i {
                    let v = it.next().expect("count checked");
                    m[i * n + j] = v;
                    m[j * n + i] = v;
                }
            }
        }
        WeightFormat::UpperRow => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().expect("count checked");
                    m[i * n + j] = v;
                    m[j * n + i] = v;
                }
            }
        }
    }
    Ok(m)
}

/// Writes an instance in TSPLIB form. Coordinates use the shortest
/// representation that parses back to the same `f64`.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", inst.name);
    if let Some(c) = &inst.comment {
        let _ = writeln!(out, "COMMENT : {c}");
    }
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {}", inst.dimension);
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", inst.kind.keyword());
    match &inst.data {
        InstanceData::Coords(coords) => {
            out.push_str("NODE_COORD_SECTION\n");
            for (i, (x, y)) in coords.iter().enumerate() {
                let _ = writeln!(out, "{} {x:?} {y:?}", i + 1);
            }
        }
        InstanceData::Explicit(m) => {
            out.push_str("EDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n");
            for row in m.chunks(inst.dimension) {
                let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
    }
    out.push_str("EOF\n");
    out
}
