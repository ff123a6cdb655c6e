//! Input documents. The format reference is `docs/FORMAT.md`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use nilentropy_core::{AlgebraEndomorphism, IntMatrix, NilpotentAlgebra, RatMatrix};

/// Where and why a document was rejected. `line` is 1-based; 0 when the
/// position is unknown.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {field}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

/// Rational number, read as an integer or a `[numerator, denominator]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn to_big(self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    fn normalized(num: i64, den: i64) -> Self {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        // |num / g| <= |num| and 0 < |den / g| <= |den|, so both fit again,
        // except for a sign flip of i64::MIN.
        let n = r.numer().try_into().unwrap_or(num);
        let d = r.denom().try_into().unwrap_or(den);
        Rational { num: n, den: d }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Pair(Vec<i64>),
        }
        match Raw::deserialize(d).map_err(|_| {
            de::Error::custom("expected an integer or a [numerator, denominator] pair")
        })? {
            Raw::Int(n) => Ok(Rational { num: n, den: 1 }),
            Raw::Pair(v) if v.len() == 2 => {
                if v[1] == 0 {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(Rational::normalized(v[0], v[1]))
            }
            Raw::Pair(v) => Err(de::Error::custom(format!(
                "rational pair has {} entries, expected 2",
                v.len()
            ))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.num)?;
        seq.serialize_element(&self.den)?;
        seq.end()
    }
}

/// `[i, j, k, numerator, denominator]`: the `e_k` coefficient of
/// `[e_i, e_j]`, with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Rational,
}

impl<'de> Deserialize<'de> for BracketEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        if v.len() != 5 {
            return Err(de::Error::custom(format!(
                "bracket entry has {} integers, expected [i, j, k, numerator, denominator]",
                v.len()
            )));
        }
        let index = |x: i64, name: &str| {
            usize::try_from(x)
                .ok()
                .filter(|&u| u >= 1)
                .ok_or_else(|| de::Error::custom(format!("index {name} = {x} must be at least 1")))
        };
        let (i, j, k) = (index(v[0], "i")?, index(v[1], "j")?, index(v[2], "k")?);
        if v[4] == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(BracketEntry {
            i,
            j,
            k,
            value: Rational::normalized(v[3], v[4]),
        })
    }
}

impl Serialize for BracketEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(5))?;
        seq.serialize_element(&self.i)?;
        seq.serialize_element(&self.j)?;
        seq.serialize_element(&self.k)?;
        seq.serialize_element(&self.value.num)?;
        seq.serialize_element(&self.value.den)?;
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDocument {
    /// Integer square matrix, row-major.
    Matrix { rows: Vec<Vec<i64>> },
    /// Nilpotent algebra by structure constants and an endomorphism whose
    /// columns are the images of the basis vectors.
    AlgebraEndo {
        dimension: usize,
        brackets: Vec<BracketEntry>,
        endomorphism: Vec<Vec<Rational>>,
    },
    /// Affine torus map `x ↦ Ax + b`, with an optional cover lattice whose
    /// columns generate the sublattice.
    TorusMap {
        rows: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translation: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cover: Option<Vec<Vec<i64>>>,
    },
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDocument::Matrix { .. } => "matrix",
            InputDocument::AlgebraEndo { .. } => "algebra_endo",
            InputDocument::TorusMap { .. } => "torus_map",
        }
    }
}

impl fmt::Display for InputDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Parses and validates a document.
#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Matrix,
    AlgebraEndo,
    TorusMap,
}

#[derive(Deserialize)]
struct Tagged {
    kind: Kind,
}

#[derive(Deserialize)]
struct MatrixFields {
    rows: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct AlgebraFields {
    dimension: usize,
    brackets: Vec<BracketEntry>,
    endomorphism: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct TorusFields {
    rows: Vec<Vec<i64>>,
    #[serde(default)]
    translation: Option<Vec<f64>>,
    #[serde(default)]
    cover: Option<Vec<Vec<i64>>>,
}

fn deserialize_at<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let segments: Option<Vec<Segment>> = e
            .path()
            .iter()
            .map(|s| match s {
                serde_path_to_error::Segment::Seq { index } => Some(Segment::Index(*index)),
                serde_path_to_error::Segment::Map { key } => Some(Segment::Key(key.clone())),
                _ => None,
            })
            .collect();
        let inner = e.into_inner();
        let start = segments
            .filter(|s| !s.is_empty())
            .and_then(|s| locate(text, &s));
        ParseError {
            line: start.unwrap_or(inner.line()),
            field: if path == "." { "document".into() } else { path },
            message: strip_position(&inner.to_string()),
        }
    })
}

pub fn parse_document(text: &str) -> Result<InputDocument, ParseError> {
    let doc = match deserialize_at::<Tagged>(text)?.kind {
        Kind::Matrix => {
            let f: MatrixFields = deserialize_at(text)?;
            InputDocument::Matrix { rows: f.rows }
        }
        Kind::AlgebraEndo => {
            let f: AlgebraFields = deserialize_at(text)?;
            InputDocument::AlgebraEndo {
                dimension: f.dimension,
                brackets: f.brackets,
                endomorphism: f.endomorphism,
            }
        }
        Kind::TorusMap => {
            let f: TorusFields = deserialize_at(text)?;
            InputDocument::TorusMap {
                rows: f.rows,
                translation: f.translation,
                cover: f.cover,
            }
        }
    };
    validate(text, &doc)?;
    Ok(doc)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(at) => msg[..at].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Clone, Debug)]
enum Segment {
    Key(String),
    Index(usize),
}

fn error_at(text: &str, path: &[Segment], message: impl Into<String>) -> ParseError {
    let field = path
        .iter()
        .map(|s| match s {
            Segment::Key(k) => k.to_string(),
            Segment::Index(i) => format!("[{i}]"),
        })
        .collect::<Vec<_>>()
        .join(".")
        .replace(".[", "[");
    ParseError {
        line: locate(text, path).unwrap_or(0),
        field,
        message: message.into(),
    }
}

fn validate_square(text: &str, key: &'static str, rows: &[Vec<i64>]) -> Result<(), ParseError> {
    if rows.is_empty() {
        return Err(error_at(
            text,
            &[Segment::Key(key.into())],
            "matrix has no rows",
        ));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != rows.len() {
            return Err(error_at(
                text,
                &[Segment::Key(key.into()), Segment::Index(r)],
                format!("row has {} entries, expected {}", row.len(), rows.len()),
            ));
        }
    }
    Ok(())
}

fn validate(text: &str, doc: &InputDocument) -> Result<(), ParseError> {
    match doc {
        InputDocument::Matrix { rows } => validate_square(text, "rows", rows),
        InputDocument::AlgebraEndo {
            dimension,
            brackets,
            endomorphism,
        } => {
            let d = *dimension;
            if d == 0 {
                return Err(error_at(
                    text,
                    &[Segment::Key("dimension".into())],
                    "must be positive",
                ));
            }
            for (n, b) in brackets.iter().enumerate() {
                let at = [Segment::Key("brackets".into()), Segment::Index(n)];
                for (name, idx) in [("i", b.i), ("j", b.j), ("k", b.k)] {
                    if idx > d {
                        return Err(error_at(
                            text,
                            &at,
                            format!("index {name} = {idx} exceeds dimension {d}"),
                        ));
                    }
                }
                if b.i == b.j {
                    return Err(error_at(text, &at, "bracket of a basis vector with itself"));
                }
                if brackets[..n]
                    .iter()
                    .any(|o| (o.i, o.j, o.k) == (b.i, b.j, b.k))
                {
                    return Err(error_at(text, &at, "duplicate entry"));
                }
            }
            if endomorphism.len() != d {
                return Err(error_at(
                    text,
                    &[Segment::Key("endomorphism".into())],
                    format!("has {} rows, expected {d}", endomorphism.len()),
                ));
            }
            for (r, row) in endomorphism.iter().enumerate() {
                if row.len() != d {
                    return Err(error_at(
                        text,
                        &[Segment::Key("endomorphism".into()), Segment::Index(r)],
                        format!("row has {} entries, expected {d}", row.len()),
                    ));
                }
            }
            Ok(())
        }
        InputDocument::TorusMap {
            rows,
            translation,
            cover,
        } => {
            validate_square(text, "rows", rows)?;
            let d = rows.len();
            if let Some(t) = translation {
                if t.len() != d {
                    return Err(error_at(
                        text,
                        &[Segment::Key("translation".into())],
                        format!("has {} entries, expected {d}", t.len()),
                    ));
                }
                if let Some(i) = t.iter().position(|v| !(0.0..1.0).contains(v)) {
                    return Err(error_at(
                        text,
                        &[Segment::Key("translation".into()), Segment::Index(i)],
                        format!("{} is outside [0, 1)", t[i]),
                    ));
                }
            }
            if let Some(c) = cover {
                validate_square(text, "cover", c)?;
                if c.len() != d {
                    return Err(error_at(
                        text,
                        &[Segment::Key("cover".into())],
                        format!("is {}x{}, expected {d}x{d}", c.len(), c.len()),
                    ));
                }
            }
            Ok(())
        }
    }
}

/// 1-based line of the value at `path`, found by a shallow scan of the
/// (already validated) JSON text.
fn locate(text: &str, path: &[Segment]) -> Option<usize> {
    let b = text.as_bytes();
    let mut pos = 0;
    for seg in path {
        skip_ws(b, &mut pos);
        match seg {
            Segment::Key(key) => {
                expect(b, &mut pos, b'{')?;
                loop {
                    skip_ws(b, &mut pos);
                    let start = pos;
                    skip_value(b, &mut pos)?;
                    let name = text.get(start + 1..pos - 1)?;
                    skip_ws(b, &mut pos);
                    expect(b, &mut pos, b':')?;
                    skip_ws(b, &mut pos);
                    if name == *key {
                        break;
                    }
                    skip_value(b, &mut pos)?;
                    skip_ws(b, &mut pos);
                    expect(b, &mut pos, b',')?;
                }
            }
            Segment::Index(n) => {
                expect(b, &mut pos, b'[')?;
                for _ in 0..*n {
                    skip_ws(b, &mut pos);
                    skip_value(b, &mut pos)?;
                    skip_ws(b, &mut pos);
                    expect(b, &mut pos, b',')?;
                }
                skip_ws(b, &mut pos);
            }
        }
    }
    Some(text[..pos].matches('\n').count() + 1)
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn expect(b: &[u8], pos: &mut usize, c: u8) -> Option<()> {
    (b.get(*pos) == Some(&c)).then(|| *pos += 1)
}

fn skip_string(b: &[u8], pos: &mut usize) -> Option<()> {
    *pos += 1;
    while *b.get(*pos)? != b'"' {
        *pos += if b[*pos] == b'\\' { 2 } else { 1 };
    }
    *pos += 1;
    Some(())
}

fn skip_value(b: &[u8], pos: &mut usize) -> Option<()> {
    match *b.get(*pos)? {
        b'"' => skip_string(b, pos),
        b'{' | b'[' => {
            let mut depth = 0usize;
            loop {
                match *b.get(*pos)? {
                    b'"' => {
                        skip_string(b, pos)?;
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            *pos += 1;
                            return Some(());
                        }
                    }
                    _ => {}
                }
                *pos += 1;
            }
        }
        _ => {
            while b
                .get(*pos)
                .is_some_and(|c| !matches!(c, b',' | b']' | b'}') && !c.is_ascii_whitespace())
            {
                *pos += 1;
            }
            Some(())
        }
    }
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows)
}

/// Algebra and endomorphism of an `algebra_endo` document. Each listed entry
/// `[e_i, e_j]_k = c` also sets `[e_j, e_i]_k = -c` unless that entry is
/// listed itself.
pub fn algebra_from_document(
    dimension: usize,
    brackets: &[BracketEntry],
    endomorphism: &[Vec<Rational>],
) -> (NilpotentAlgebra, AlgebraEndomorphism) {
    let mut alg = NilpotentAlgebra::abelian(dimension);
    for b in brackets {
        let (i, j, k) = (b.i - 1, b.j - 1, b.k - 1);
        alg.set_structure_constant(i, j, k, b.value.to_big());
        if !brackets.iter().any(|o| (o.i, o.j, o.k) == (b.j, b.i, b.k)) {
            alg.set_structure_constant(j, i, k, -b.value.to_big());
        }
    }
    let m = RatMatrix::from_fn(dimension, dimension, |r, c| endomorphism[r][c].to_big());
    (alg, AlgebraEndomorphism::new(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: &str = r#"{
  "kind": "algebra_endo",
  "dimension": 3,
  "brackets": [
    [1, 2, 3, 1, 1]
  ],
  "endomorphism": [
    [2, 0, 0],
    [0, 3, 0],
    [0, 0, [12, 2]]
  ]
}"#;

    #[test]
    fn parses_each_kind() {
        let doc = parse_document(r#"{"kind": "matrix", "rows": [[2, 1], [1, 1]]}"#).unwrap();
        assert_eq!(
            doc,
            InputDocument::Matrix {
                rows: vec![vec![2, 1], vec![1, 1]]
            }
        );

        match parse_document(HEISENBERG).unwrap() {
            InputDocument::AlgebraEndo {
                brackets,
                endomorphism,
                ..
            } => {
                assert_eq!(brackets.len(), 1);
                assert_eq!(endomorphism[2][2], Rational { num: 6, den: 1 });
            }
            other => panic!("{other:?}"),
        }

        let doc = parse_document(
            r#"{"kind": "torus_map", "rows": [[2, 1], [1, 1]], "translation": [0.5, 0], "cover": [[2, 0], [0, 2]]}"#,
        )
        .unwrap();
        assert_eq!(doc.kind(), "torus_map");
    }

    #[test]
    fn bad_bracket_index_names_the_entry() {
        let text = HEISENBERG.replace("[1, 2, 3, 1, 1]", "[1, 2, 3, 1, 1],\n    [1, 4, 3, 1, 1]");
        let err = parse_document(&text).unwrap_err();
        assert_eq!(err.field, "brackets[1]");
        assert_eq!(err.line, 6);
        assert!(
            err.message.contains("index j = 4 exceeds dimension 3"),
            "{err}"
        );

        let text = HEISENBERG.replace("[1, 2, 3, 1, 1]", "[1, 0, 3, 1, 1]");
        let err = parse_document(&text).unwrap_err();
        assert_eq!(err.field, "brackets[0]");
        assert_eq!(err.line, 5);
    }

    #[test]
    fn structural_errors_carry_path_and_line() {
        let err = parse_document("{\n \"kind\": \"matrix\",\n \"rows\": [[1, 2], [3, \"x\"]]\n}")
            .unwrap_err();
        assert_eq!(err.field, "rows[1][1]");
        assert_eq!(err.line, 3);

        let err = parse_document(r#"{"kind": "polygon"}"#).unwrap_err();
        assert!(err.message.contains("unknown variant"), "{err}");

        let text = HEISENBERG.replace("[12, 2]", "[1, 0]");
        let err = parse_document(&text).unwrap_err();
        assert!(err.message.contains("zero denominator"));
        assert_eq!(err.line, 10);
    }

    #[test]
    fn shape_errors() {
        let err = parse_document("{\"kind\": \"matrix\",\n\"rows\": [[1, 2],\n [3]]}").unwrap_err();
        assert_eq!((err.field.as_str(), err.line), ("rows[1]", 3));
        let err = parse_document(r#"{"kind": "torus_map", "rows": [[2]], "translation": [1.5]}"#)
            .unwrap_err();
        assert_eq!(err.field, "translation[0]");
    }

    #[test]
    fn antisymmetric_partner_is_filled() {
        let doc = parse_document(HEISENBERG).unwrap();
        let InputDocument::AlgebraEndo {
            dimension,
            brackets,
            endomorphism,
        } = doc
        else {
            unreachable!()
        };
        let (alg, _) = algebra_from_document(dimension, &brackets, &endomorphism);
        assert_eq!(alg, NilpotentAlgebra::heisenberg());
    }

    #[test]
    fn echo_round_trips() {
        let doc = parse_document(HEISENBERG).unwrap();
        let again = parse_document(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again);
    }
}
