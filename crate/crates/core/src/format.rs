//! Shared helpers for the line-oriented text formats and exact-fraction strings.

use crate::boolfn::{BooleanFunction, TruthTable};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Drops a trailing `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses `key=value` words.
pub fn key_values<'a>(words: impl Iterator<Item = &'a str>, line: usize) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key=value, found {w:?}")))?;
        out.insert(k, v);
    }
    Ok(out)
}

pub fn required_usize(kv: &BTreeMap<&str, &str>, key: &str, line: usize) -> Result<usize> {
    kv.get(key)
        .ok_or_else(|| Error::parse(line, format!("missing {key}=")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("{key}= expects a non-negative integer")))
}

/// `n/d`, or `n` when the denominator is one.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A function record parsed from `fn <name> arity=<k> table=<...>`.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionRecord {
    Boolean { name: String, function: BooleanFunction },
    Weighted { name: String, table: TruthTable<BigRational> },
}

impl FunctionRecord {
    pub fn name(&self) -> &str {
        match self {
            FunctionRecord::Boolean { name, .. } | FunctionRecord::Weighted { name, .. } => name,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            FunctionRecord::Boolean { function, .. } => function.arity(),
            FunctionRecord::Weighted { table, .. } => table.arity(),
        }
    }

    /// Exact rational table of the record.
    pub fn to_rational(&self) -> TruthTable<BigRational> {
        match self {
            FunctionRecord::Boolean { function, .. } => function.to_table(),
            FunctionRecord::Weighted { table, .. } => table.clone(),
        }
    }

    /// Boolean view; a rational table with 0/1 entries also qualifies.
    pub fn to_boolean(&self) -> Result<BooleanFunction> {
        match self {
            FunctionRecord::Boolean { function, .. } => Ok(function.clone()),
            FunctionRecord::Weighted { table, .. } => table.to_boolean(),
        }
    }
}

/// Text record for a Boolean function.
pub fn function_to_text(name: &str, f: &BooleanFunction) -> String {
    format!("fn {name} arity={} table={}", f.arity(), f.to_bitstring())
}

/// Text record for a rational table.
pub fn table_to_text(name: &str, t: &TruthTable<BigRational>) -> String {
    let entries: Vec<String> = t.values().iter().map(rational_to_string).collect();
    format!("fn {name} arity={} table=[{}]", t.arity(), entries.join(","))
}

/// Parses one `fn` record (the words after the `fn` keyword are in `line`).
pub fn parse_function_line(line: &str, line_no: usize) -> Result<FunctionRecord> {
    let mut words = line.split_whitespace();
    if words.next() != Some("fn") {
        return Err(Error::parse(line_no, "expected `fn <name> arity=<k> table=<...>`"));
    }
    let name = words
        .next()
        .ok_or_else(|| Error::parse(line_no, "missing function name"))?
        .to_string();
    let rest: Vec<&str> = words.collect();
    let joined = rest.join(" ");
    let kv = key_values(joined.split_whitespace(), line_no)?;
    let arity = required_usize(&kv, "arity", line_no)?;
    let table = kv
        .get("table")
        .ok_or_else(|| Error::parse(line_no, "missing table="))?;
    if let Some(inner) = table.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::parse(line_no, "unterminated rational table"))?;
        let values = inner
            .split(',')
            .map(|s| parse_rational(s).map_err(|e| Error::parse(line_no, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let table = TruthTable::new(arity, values).map_err(|e| Error::parse(line_no, e.to_string()))?;
        Ok(FunctionRecord::Weighted { name, table })
    } else {
        let function = BooleanFunction::from_bitstring(table).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if function.arity() != arity {
            return Err(Error::parse(
                line_no,
                format!("arity={arity} but table has arity {}", function.arity()),
            ));
        }
        Ok(FunctionRecord::Boolean { name, function })
    }
}

/// Parses every `fn` record in a file (comments and blank lines allowed).
pub fn parse_functions(text: &str) -> Result<Vec<FunctionRecord>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        out.push(parse_function_line(line, no + 1)?);
    }
    Ok(out)
}

/// Parses a function given on a command line: a `fn` record, a bitstring, or a known name.
pub fn parse_function_spec(spec: &str) -> Result<BooleanFunction> {
    let spec = spec.trim();
    if spec.starts_with("fn ") {
        return parse_function_line(spec, 1)?.to_boolean();
    }
    if !spec.is_empty() && spec.chars().all(|c| c == '0' || c == '1') {
        return BooleanFunction::from_bitstring(spec);
    }
    BooleanFunction::named(spec).ok_or_else(|| Error::Domain(format!("unknown function {spec:?}")))
}

/// `BinaryWeights<BigRational>` as four `"n/d"` strings in index order.
pub(crate) mod serde_rational_binary {
    use crate::boolfn::BinaryWeights;
    use num_rational::BigRational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &BinaryWeights<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        super::serde_rational_vec::serialize(&g.to_array(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BinaryWeights<BigRational>, D::Error> {
        let v = super::serde_rational_vec::deserialize(d)?;
        let [a, b, c, e]: [BigRational; 4] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("binary weights need four entries"))?;
        Ok(BinaryWeights::new(a, b, c, e))
    }
}

pub(crate) mod serde_rational_vec {
    use super::{parse_rational, rational_to_string};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rational_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let r = parse_rational("6/8").unwrap();
        assert_eq!(rational_to_string(&r), "3/4");
        assert_eq!(rational_to_string(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn function_records() {
        let rec = parse_function_line("fn imp arity=2 table=1101", 1).unwrap();
        assert_eq!(rec.to_boolean().unwrap(), BooleanFunction::implies());
        assert_eq!(function_to_text("imp", &BooleanFunction::implies()), "fn imp arity=2 table=1101");
        let w = parse_function_line("fn g arity=1 table=[1/2,3]", 4).unwrap();
        assert_eq!(w.arity(), 1);
        assert!(w.to_boolean().is_err());
        assert_eq!(table_to_text("g", &w.to_rational()), "fn g arity=1 table=[1/2,3]");
        assert!(matches!(
            parse_function_line("fn bad arity=3 table=0110", 7),
            Err(Error::Parse { line: 7, .. })
        ));
    }

    #[test]
    fn function_specs() {
        assert_eq!(parse_function_spec("0111").unwrap(), BooleanFunction::or());
        assert_eq!(parse_function_spec("implies").unwrap(), BooleanFunction::implies());
        assert_eq!(parse_function_spec("fn x arity=2 table=0110").unwrap(), BooleanFunction::xor());
        assert!(parse_function_spec("nope").is_err());
    }
}
