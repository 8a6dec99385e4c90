use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FiniteAlgebra, Sentence};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct RawOperation {
    name: String,
    arity: usize,
    table: Value,
}

#[derive(Deserialize)]
struct RawDocument {
    name: String,
    size: usize,
    #[serde(default)]
    operations: Vec<RawOperation>,
    #[serde(default)]
    axioms: Vec<String>,
}

#[derive(Serialize)]
struct OutOperation<'a> {
    name: &'a str,
    arity: usize,
    table: Value,
}

#[derive(Serialize)]
struct OutDocument<'a> {
    name: &'a str,
    size: usize,
    operations: Vec<OutOperation<'a>>,
}

/// An algebra file together with any class axioms it lists.
#[derive(Debug, Clone)]
pub struct AlgebraDocument {
    pub algebra: FiniteAlgebra,
    pub axioms: Vec<Sentence>,
}

fn entry(v: &Value, op: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Malformed(format!("operation `{op}`: table entry {v} is not a natural number")))
}

fn flatten(op: &RawOperation, n: usize) -> Result<Vec<usize>> {
    let name = op.name.as_str();
    match (&op.table, op.arity) {
        (Value::Number(_), 0) => Ok(vec![entry(&op.table, name)?]),
        (Value::Array(rows), 2) if rows.iter().any(Value::is_array) => {
            if rows.len() != n {
                return Err(Error::TableLength {
                    op: name.into(),
                    arity: 2,
                    expected: n,
                    found: rows.len(),
                });
            }
            let mut out = Vec::with_capacity(n * n);
            for row in rows {
                let row = row.as_array().ok_or_else(|| {
                    Error::Malformed(format!("operation `{name}`: mixed nested and flat rows"))
                })?;
                if row.len() != n {
                    return Err(Error::TableLength {
                        op: name.into(),
                        arity: 2,
                        expected: n * n,
                        found: rows.iter().map(|r| r.as_array().map_or(1, Vec::len)).sum(),
                    });
                }
                for v in row {
                    out.push(entry(v, name)?);
                }
            }
            Ok(out)
        }
        (Value::Array(flat), _) => flat.iter().map(|v| entry(v, name)).collect(),
        _ => Err(Error::Malformed(format!(
            "operation `{name}`: table must be a list (or a number for arity 0)"
        ))),
    }
}

/// Parses an algebra document, including its optional `axioms` list.
pub fn parse_document(text: &str) -> Result<AlgebraDocument> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut ops = Vec::with_capacity(raw.operations.len());
    for op in &raw.operations {
        ops.push((op.name.clone(), op.arity, flatten(op, raw.size)?));
    }
    let algebra = FiniteAlgebra::new(raw.name, raw.size, ops)?;
    let axioms = raw
        .axioms
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<Sentence>>>()?;
    Ok(AlgebraDocument { algebra, axioms })
}

/// Parses the JSON algebra file format.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    Ok(parse_document(text)?.algebra)
}

/// Renders an algebra in the file format; binary tables are nested.
pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    let n = a.size();
    let operations = a
        .signature()
        .ops()
        .iter()
        .zip(a.tables())
        .map(|(sym, t)| OutOperation {
            name: &sym.name,
            arity: sym.arity,
            table: match sym.arity {
                0 => Value::from(t[0]),
                2 => Value::from(t.chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>()),
                _ => Value::from(t.clone()),
            },
        })
        .collect();
    serde_json::to_string(&OutDocument {
        name: a.name(),
        size: n,
        operations,
    })
    .expect("algebra serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: &str = r#"{"name":"Z4","size":4,"operations":[
        {"name":"+","arity":2,"table":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}]}"#;

    #[test]
    fn parses_nested_table() {
        let a = parse_algebra(Z4).unwrap();
        assert_eq!(a.size(), 4);
        assert_eq!(a.apply(0, &[3, 2]), 1);
    }

    #[test]
    fn flat_and_constant_forms() {
        let text = r#"{"name":"S","size":2,"operations":[
            {"name":".","arity":2,"table":[0,0,0,1]},
            {"name":"0","arity":0,"table":0},
            {"name":"1","arity":0,"table":[1]}]}"#;
        let a = parse_algebra(text).unwrap();
        assert_eq!(a.signature().len(), 3);
        assert_eq!(a.constant("1"), Some(1));
    }

    #[test]
    fn rejects_bad_documents() {
        let out_of_range = Z4.replace("[3,0,1,2]", "[3,0,1,4]");
        let e = parse_algebra(&out_of_range).unwrap_err();
        assert!(e.to_string().starts_with("entry out of range"));
        let short = Z4.replace("[3,0,1,2]", "[3,0,1]");
        assert!(matches!(parse_algebra(&short), Err(Error::TableLength { .. })));
        let dup = r#"{"name":"D","size":1,"operations":[
            {"name":"c","arity":0,"table":0},{"name":"c","arity":0,"table":0}]}"#;
        assert!(matches!(parse_algebra(dup), Err(Error::DuplicateOperation(_))));
        assert!(matches!(parse_algebra("{"), Err(Error::Malformed(_))));
        let neg = Z4.replace("[3,0,1,2]", "[3,0,1,-2]");
        assert!(matches!(parse_algebra(&neg), Err(Error::Malformed(_))));
        let ternary_nested = r#"{"name":"T","size":1,"operations":[
            {"name":"t","arity":3,"table":[[0]]}]}"#;
        assert!(parse_algebra(ternary_nested).is_err());
    }

    #[test]
    fn roundtrip() {
        let a = parse_algebra(Z4).unwrap();
        assert_eq!(parse_algebra(&algebra_to_json(&a)).unwrap(), a);
    }
}
