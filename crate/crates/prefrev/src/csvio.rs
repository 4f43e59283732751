//! CSV ingestion and emission for relation instances.
//!
//! Format: the header row lists the attribute names in schema order. `D`
//! values are raw or single-quoted strings (quoting allows embedded commas);
//! `Q` values are decimals or `p/q` fractions. Duplicate rows are collapsed
//! with a warning, matching set semantics.

use crate::error::{Error, Result};
use crate::rational::{parse_rat, render_rat};
use crate::schema::{AttrDomain, Schema, TupleValue, Value};
use crate::winnow::RelationInstance;

fn split_fields(line: &str) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for c in line.chars() {
        match c {
            '\'' => quoted = !quoted,
            ',' if !quoted => {
                fields.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if quoted {
        return Err(Error::Csv("unterminated quote".into()));
    }
    fields.push(cur.trim().to_string());
    Ok(fields)
}

fn parse_field(raw: &str, domain: AttrDomain) -> Result<Value> {
    match domain {
        // Quotes were already stripped by the field splitter.
        AttrDomain::D => Ok(Value::D(raw.to_string())),
        AttrDomain::Q => match parse_rat(raw) {
            Some(q) => Ok(Value::Q(q)),
            None => Err(Error::Csv(format!("malformed rational `{raw}`"))),
        },
    }
}

/// Reads an instance from CSV text. Returns the instance (duplicates
/// collapsed, names `t1..tn` assigned by input row) and human-readable
/// warnings for collapsed duplicates.
pub fn read_instance_csv(schema: &Schema, text: &str) -> Result<(RelationInstance, Vec<String>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(header) = lines.next() else {
        return Err(Error::Csv("missing header row".into()));
    };
    let names: Vec<String> = split_fields(header)?;
    let expected: Vec<&str> = schema.attrs().iter().map(|a| a.name.as_str()).collect();
    if names != expected {
        return Err(Error::Csv(format!(
            "header `{}` does not match schema attributes `{}`",
            names.join(","),
            expected.join(",")
        )));
    }
    let mut tuples = Vec::new();
    let mut tuple_names = Vec::new();
    let mut warnings = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields = split_fields(line)?;
        if fields.len() != schema.arity() {
            return Err(Error::Csv(format!(
                "row {} has {} fields, expected {}",
                row + 1,
                fields.len(),
                schema.arity()
            )));
        }
        let values: Result<Vec<Value>> = fields
            .iter()
            .enumerate()
            .map(|(i, f)| parse_field(f, schema.attr_domain(i)))
            .collect();
        let tuple = TupleValue::new(schema, values?)?;
        if tuples.contains(&tuple) {
            warnings.push(format!("duplicate tuple collapsed: {tuple}"));
            continue;
        }
        tuple_names.push(format!("t{}", row + 1));
        tuples.push(tuple);
    }
    let instance = RelationInstance::with_names(schema.clone(), tuples, tuple_names)?;
    Ok((instance, warnings))
}

fn render_field(value: &Value) -> String {
    match value {
        Value::D(s) => {
            if s.contains(',') || s.contains('\'') || s != s.trim() {
                format!("'{s}'")
            } else {
                s.clone()
            }
        }
        Value::Q(q) => render_rat(q),
    }
}

/// Writes an instance as CSV, header first, rows in instance order.
pub fn write_instance_csv(r: &RelationInstance) -> String {
    let mut out = String::new();
    let header: Vec<&str> = r.schema().attrs().iter().map(|a| a.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for t in r.tuples() {
        let row: Vec<String> = t.values().iter().map(render_field).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn car() -> Schema {
        Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap()
    }

    #[test]
    fn reads_fig_one() {
        let (inst, warnings) = read_instance_csv(&car(), "make,year\nVW,2002\nVW,1997\nKia,1997\n").unwrap();
        assert!(warnings.is_empty());
        assert_eq!(inst.len(), 3);
        assert_eq!(inst.name_of(0), "t1");
        assert_eq!(inst.tuples()[2].value(0), &Value::D("Kia".into()));
        assert_eq!(inst.tuples()[0].value(1), &Value::Q(rat_int(2002)));
    }

    #[test]
    fn round_trips_bytes() {
        let text = "make,year\nVW,2002\nKia,1997\n";
        let (inst, _) = read_instance_csv(&car(), text).unwrap();
        assert_eq!(write_instance_csv(&inst), text);
    }

    #[test]
    fn quoted_fields_and_fractions() {
        let (inst, _) = read_instance_csv(&car(), "make,year\n'Aston, Martin',1999/2\n").unwrap();
        assert_eq!(inst.tuples()[0].value(0), &Value::D("Aston, Martin".into()));
        assert_eq!(inst.tuples()[0].value(1), &Value::Q(crate::rational::rat_frac(1999, 2)));
    }

    #[test]
    fn duplicate_rows_warn() {
        let (inst, warnings) = read_instance_csv(&car(), "make,year\nVW,2002\nVW,2002\n").unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn header_mismatch_is_an_error() {
        assert!(read_instance_csv(&car(), "year,make\n2002,VW\n").is_err());
        assert!(read_instance_csv(&car(), "").is_err());
    }
}
