//! Wire formats: group specifications, matrices, modular spaces, and
//! induced-element coefficient files.
//!
//! Matrices are row-major nested arrays; a complex entry is a `[re, im]`
//! pair, a bare number is real. Groups are referenced either inline
//! (`{"name", "order", "labels", "table"}`) or as a constructor string:
//! `cyclic:n`, `dihedral:k`, `quaternion`, `product(a,b)`.

use nalgebra::Complex;
use serde_json::{json, Value};

use crate::group::{direct_product, make_cyclic, make_dihedral, make_quaternion, FiniteGroup};
use crate::linalg::{Mat, Scalar};
use crate::space::{Field, ModularSpace};
use crate::{Error, Result};

/// Parses a group constructor string; whitespace-insensitive.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    parse_spec_inner(&s)
}

fn parse_spec_inner(s: &str) -> Result<FiniteGroup> {
    if s == "quaternion" {
        return Ok(make_quaternion());
    }
    if let Some(rest) = s.strip_prefix("cyclic:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad cyclic order {rest:?}")))?;
        return make_cyclic(n).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(rest) = s.strip_prefix("dihedral:") {
        let k: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad dihedral parameter {rest:?}")))?;
        return make_dihedral(k).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(rest) = s.strip_prefix("product(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse("unclosed product".into()))?;
        // split at the top-level comma
        let mut depth = 0usize;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let i = split.ok_or_else(|| Error::Parse("product needs two factors".into()))?;
        let a = parse_spec_inner(&inner[..i])?;
        let b = parse_spec_inner(&inner[i + 1..])?;
        return Ok(direct_product(&a, &b));
    }
    Err(Error::Parse(format!("unrecognized group spec {s:?}")))
}

/// Parses a comma-separated element index list, e.g. "0,2".
pub fn parse_elements(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad element index {p:?}")))
        })
        .collect()
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({
        "name": g.name(),
        "order": g.order(),
        "labels": g.labels(),
        "table": g.table(),
    })
}

pub fn group_from_json(v: &Value) -> Result<FiniteGroup> {
    if let Some(s) = v.as_str() {
        return parse_group_spec(s);
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("group must be a spec string or an object".into()))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("group")
        .to_string();
    let table: Vec<Vec<usize>> = serde_json::from_value(
        obj.get("table")
            .cloned()
            .ok_or_else(|| Error::Parse("group object needs a table".into()))?,
    )?;
    let labels: Vec<String> = match obj.get("labels") {
        Some(l) => serde_json::from_value(l.clone())?,
        None => (0..table.len()).map(|i| i.to_string()).collect(),
    };
    FiniteGroup::from_table(name, labels, table).map_err(|e| Error::Parse(e.to_string()))
}

fn entry_to_json(z: &Scalar) -> Value {
    if z.im.abs() <= 1e-15 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

fn entry_from_json(v: &Value) -> Result<Scalar> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex::new(x, 0.0));
    }
    if let Some(pair) = v.as_array() {
        if pair.len() == 2 {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("matrix entry parts must be numbers".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("matrix entry parts must be numbers".into()))?;
            return Ok(Complex::new(re, im));
        }
    }
    Err(Error::Parse(
        "matrix entry must be a number or [re, im]".into(),
    ))
}

pub fn matrix_to_json(m: &Mat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| entry_to_json(&m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value) -> Result<Mat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix must have at least one row".into()));
    }
    let mut data = Vec::new();
    let ncols = rows[0]
        .as_array()
        .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?
        .len();
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
        if cells.len() != ncols {
            return Err(Error::Parse("matrix rows have unequal lengths".into()));
        }
        for cell in cells {
            data.push(entry_from_json(cell)?);
        }
    }
    Ok(Mat::from_row_slice(rows.len(), ncols, &data))
}

/// Space schema:
/// `{"field": "R"|"C", "dim": d, "basis": [matrix], "H": groupref,
///   "theta": [matrix per subgroup element]}`.
pub fn space_to_json(space: &ModularSpace) -> Value {
    json!({
        "field": match space.field { Field::Real => "R", Field::Complex => "C" },
        "dim": space.ambient_dim,
        "basis": space.basis.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "H": group_to_json(&space.h_group),
        "theta": space.theta.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn space_from_json(v: &Value) -> Result<ModularSpace> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("space must be an object".into()))?;
    let field = match obj.get("field").and_then(Value::as_str) {
        Some("R") => Field::Real,
        Some("C") => Field::Complex,
        other => return Err(Error::Parse(format!("bad field {other:?}"))),
    };
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("space needs a dim".into()))? as usize;
    let basis = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("space needs a basis array".into()))?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let h_group = group_from_json(
        obj.get("H")
            .ok_or_else(|| Error::Parse("space needs an H group".into()))?,
    )?;
    let theta = obj
        .get("theta")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("space needs a theta array".into()))?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    ModularSpace::new(field, dim, basis, h_group, theta)
}

/// A level-n grid of coefficient tuples.
pub type CoeffGrid = Vec<Vec<Vec<Mat>>>;

/// Coefficient file: either `{"coeffs": [matrix, ...]}` for a level-1
/// element or `{"entries": [[{"coeffs": ...}, ...], ...]}` for a grid.
pub fn coeffs_from_json(v: &Value) -> Result<CoeffGrid> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("coefficients must be an object".into()))?;
    if let Some(c) = obj.get("coeffs") {
        let mats = c
            .as_array()
            .ok_or_else(|| Error::Parse("coeffs must be an array of matrices".into()))?
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        return Ok(vec![vec![mats]]);
    }
    if let Some(e) = obj.get("entries") {
        let grid = e
            .as_array()
            .ok_or_else(|| Error::Parse("entries must be an array of rows".into()))?;
        let mut out = Vec::new();
        for row in grid {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("entries rows must be arrays".into()))?;
            let mut cells = Vec::new();
            for cell in row {
                let c = cell
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("each entry needs a coeffs array".into()))?;
                cells.push(c.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?);
            }
            out.push(cells);
        }
        return Ok(out);
    }
    Err(Error::Parse(
        "coefficient file needs coeffs or entries".into(),
    ))
}

pub fn element_to_json(space_ref: &Value, coeffs: &[Mat]) -> Value {
    json!({
        "space": space_ref,
        "coeffs": coeffs.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}
