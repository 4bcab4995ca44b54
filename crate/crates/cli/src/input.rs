//! Readers and writers for the text input formats.
//!
//! Filtration file: one cell per line in filtration order,
//! `<dim> <v0> ... <v_dim> [w=<weight>] [f=<value>]`. Faces must precede
//! their cofaces. `#` starts a comment.
//!
//! Coordinates file: `<vertex> <x0> ... <x_n>` per line.
//!
//! Volume header: `key value...` lines with keys `dims`, `spacing`
//! (optional), `format` (`text`, `f32le` or `f64le`) and `data`, a path
//! relative to the header.

use std::fmt::Write as _;
use std::path::Path;

use persistent_cycles::cubical::ScalarGrid;
use persistent_cycles::geometry::Coordinates;
use persistent_cycles::{CellComplex, CellId, Filtration};

use crate::report::CliError;

#[derive(Debug)]
pub struct FiltrationFile {
    pub complex: CellComplex,
    pub filtration: Filtration,
    /// Present when every line carries `f=`.
    pub values: Option<Vec<f64>>,
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_filtration(path: &Path) -> Result<FiltrationFile, CliError> {
    parse_filtration(&read(path)?).map_err(|e| e.in_file(path))
}

pub fn parse_filtration(text: &str) -> Result<FiltrationFile, CliError> {
    let mut k = CellComplex::new_simplicial();
    let mut order = Vec::new();
    let mut values = Vec::new();
    let mut valued = None;
    for (n, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::parse(msg).at_line(n + 1);
        let mut dim = None;
        let mut verts = Vec::new();
        let mut weight = None;
        let mut value = None;
        for tok in line.split_whitespace() {
            if let Some(w) = tok.strip_prefix("w=") {
                weight = Some(
                    w.parse::<f64>()
                        .map_err(|_| at(format!("bad weight {w:?}")))?,
                );
            } else if let Some(f) = tok.strip_prefix("f=") {
                value = Some(
                    f.parse::<f64>()
                        .map_err(|_| at(format!("bad value {f:?}")))?,
                );
            } else if weight.is_some() || value.is_some() {
                return Err(at(format!("unexpected token {tok:?} after attributes")));
            } else {
                let x = tok
                    .parse::<usize>()
                    .map_err(|_| at(format!("bad integer {tok:?}")))?;
                if dim.is_none() {
                    dim = Some(x);
                } else {
                    verts.push(x);
                }
            }
        }
        let dim = dim.ok_or_else(|| at("missing dimension".into()))?;
        if verts.len() != dim + 1 {
            return Err(at(format!(
                "a {dim}-cell needs {} vertices, got {}",
                dim + 1,
                verts.len()
            )));
        }
        match (valued, value) {
            (None, v) => valued = Some(v.is_some()),
            (Some(true), None) | (Some(false), Some(_)) => {
                return Err(at("either every line or no line carries f=".into()));
            }
            _ => {}
        }
        if let Some(v) = value {
            if !v.is_finite() {
                return Err(at(format!("value {v} is not finite")));
            }
            values.push(v);
        }
        let id = k.add_cell(&verts, weight).map_err(|e| at(e.to_string()))?;
        order.push(id);
    }
    let filtration = Filtration::new(&k, order).map_err(|e| CliError::parse(e.to_string()))?;
    Ok(FiltrationFile {
        complex: k,
        filtration,
        values: valued.unwrap_or(false).then_some(values),
    })
}

/// Formats a filtration in the file format read by [`parse_filtration`].
pub fn format_filtration(k: &CellComplex, f: &Filtration, values: Option<&[f64]>) -> String {
    let mut out = String::new();
    for (i, &c) in f.order().iter().enumerate() {
        write_cell(&mut out, k, c);
        if let Some(w) = k.weight(c) {
            let _ = write!(out, " w={w}");
        }
        if let Some(v) = values {
            let _ = write!(out, " f={}", v[i]);
        }
        out.push('\n');
    }
    out
}

fn write_cell(out: &mut String, k: &CellComplex, c: CellId) {
    let _ = write!(out, "{}", c.dim);
    for v in k.vertices(c) {
        let _ = write!(out, " {v}");
    }
}

pub fn read_coordinates(path: &Path) -> Result<Coordinates, CliError> {
    parse_coordinates(&read(path)?).map_err(|e| e.in_file(path))
}

pub fn parse_coordinates(text: &str) -> Result<Coordinates, CliError> {
    let mut coords: Option<Coordinates> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::parse(msg).at_line(n + 1);
        let mut toks = line.split_whitespace();
        let v = toks.next().unwrap_or_default();
        let v: usize = v.parse().map_err(|_| at(format!("bad vertex {v:?}")))?;
        let p: Vec<f64> = toks
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| at(format!("bad coordinate {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        if p.is_empty() {
            return Err(at(format!("vertex {v} has no coordinates")));
        }
        let c = coords.get_or_insert_with(|| Coordinates::new(p.len()));
        if c.get(v).is_some() {
            return Err(at(format!("vertex {v} listed twice")));
        }
        c.insert(v, &p).map_err(|e| at(e.to_string()))?;
    }
    coords.ok_or_else(|| CliError::parse("no coordinates".into()))
}

pub fn read_volume(path: &Path) -> Result<ScalarGrid, CliError> {
    let text = read(path)?;
    let mut dims = None;
    let mut spacing = [1.0; 3];
    let mut format = "text".to_string();
    let mut data = None;
    for (n, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::parse(msg).at_line(n + 1).in_file(path);
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "dims" => {
                let xs: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| at(format!("bad size {t:?}"))))
                    .collect::<Result<_, _>>()?;
                dims = Some(
                    <[usize; 3]>::try_from(xs).map_err(|_| at("dims needs three sizes".into()))?,
                );
            }
            "spacing" => {
                let xs: Vec<f64> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| at(format!("bad spacing {t:?}"))))
                    .collect::<Result<_, _>>()?;
                spacing = <[f64; 3]>::try_from(xs)
                    .map_err(|_| at("spacing needs three numbers".into()))?;
            }
            "format" => match rest {
                "text" | "f32le" | "f64le" => format = rest.to_string(),
                _ => return Err(at(format!("unknown format {rest:?}"))),
            },
            "data" => data = Some(rest.to_string()),
            _ => return Err(at(format!("unknown key {key:?}"))),
        }
    }
    let missing = |k: &str| CliError::parse(format!("volume header lacks `{k}`")).in_file(path);
    let dims = dims.ok_or_else(|| missing("dims"))?;
    let data = path
        .parent()
        .unwrap_or(Path::new("."))
        .join(data.ok_or_else(|| missing("data"))?);
    let n = dims.iter().product::<usize>();
    let values = match format.as_str() {
        "text" => {
            let text = read(&data)?;
            text.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| CliError::parse(format!("bad sample {t:?}")).in_file(&data))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        f => {
            let bytes = std::fs::read(&data).map_err(|e| CliError::io(&data, e))?;
            let width = if f == "f32le" { 4 } else { 8 };
            if bytes.len() != n * width {
                return Err(CliError::parse(format!(
                    "expected {} bytes, found {}",
                    n * width,
                    bytes.len()
                ))
                .in_file(&data));
            }
            let chunks = bytes.chunks_exact(width);
            if width == 4 {
                chunks
                    .map(|b| f64::from(f32::from_le_bytes(b.try_into().expect("4-byte chunk"))))
                    .collect()
            } else {
                chunks
                    .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
                    .collect()
            }
        }
    };
    if values.len() != n {
        return Err(
            CliError::parse(format!("expected {n} samples, found {}", values.len())).in_file(&data),
        );
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::parse(format!("sample {v} is not finite")).in_file(&data));
    }
    ScalarGrid::with_spacing(dims, values, spacing)
        .map_err(|e| CliError::precondition(e.to_string()))
}
