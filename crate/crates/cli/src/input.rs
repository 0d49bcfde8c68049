use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use silting_core::complex::{shift, Complex, ComplexFile};
use silting_core::decompose::{ObjId, Registry};
use silting_core::{build_algebra, Field, Presentation};

use crate::error::CliError;

pub fn parse_field(text: &str) -> Result<Field, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
        return Ok(Field::Rational);
    }
    let c: u64 = t.parse().map_err(|_| CliError::input("BadField", format!("cannot parse field {text:?}")))?;
    Field::from_characteristic(c).map_err(|e| CliError::input("BadField", e.to_string()))
}

/// A presentation file, or the name of a builtin algebra.
pub fn load_registry(spec: Option<&str>, field: Option<Field>) -> Result<Registry, CliError> {
    let spec = spec.ok_or_else(|| CliError::input("NoAlgebra", "no algebra given (use --algebra)"))?;
    let pres = if Path::new(spec).is_file() {
        let text = read(spec)?;
        Presentation::from_json(&text, field)?
    } else {
        Presentation::builtin(spec, field.unwrap_or_default())?
    };
    Ok(Registry::new(Arc::new(build_algebra(&pres)?)))
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{path}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summand {
    #[serde(default)]
    pub label: Option<String>,
    pub complex: ComplexFile,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Wrapped(Summand),
    Bare(ComplexFile),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ObjectFile {
    Object { summands: Vec<Entry> },
    One(ComplexFile),
    Many(Vec<Entry>),
}

pub fn vertex(reg: &Registry, text: &str) -> Result<usize, CliError> {
    let alg = reg.algebra();
    let t = text.trim();
    if let Some(v) = (0..alg.n_vertices()).find(|&v| alg.vertex_label(v) == t) {
        return Ok(v);
    }
    match t.parse::<usize>() {
        Ok(i) if i >= 1 && i <= alg.n_vertices() => Ok(i - 1),
        _ => Err(CliError::input("InvalidVertex", format!("unknown vertex {text:?}"))),
    }
}

pub fn vertex_list(reg: &Registry, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| vertex(reg, s)).collect()
}

fn inline_term(reg: &Registry, token: &str) -> Result<Complex, CliError> {
    let bad = || CliError::input("BadObject", format!("cannot parse object term {token:?}"));
    let t = token.trim();
    let (head, s) = match t.find('[') {
        Some(i) => {
            let inner = t[i..].strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            (&t[..i], inner.trim().parse::<i32>().map_err(|_| bad())?)
        }
        None => (t, 0),
    };
    let base = if head == "A" {
        Complex::regular(reg.algebra())
    } else if let Some(v) = head.strip_prefix('P') {
        Complex::projective(vertex(reg, v)?)
    } else {
        return Err(bad());
    };
    Ok(shift(&base, s))
}

/// An object is a JSON file (one complex, a list, or `{"summands": [...]}`)
/// or an inline sum such as `P1[1]+P2` or `A[-1]`.
pub fn parse_object(reg: &Registry, spec: &str) -> Result<Vec<Complex>, CliError> {
    let alg = reg.algebra();
    if Path::new(spec).is_file() {
        let text = read(spec)?;
        let file: ObjectFile = serde_json::from_str(&text)
            .map_err(|e| CliError::input("BadObject", format!("{spec}: not a complex file: {e}")))?;
        let entries = match file {
            ObjectFile::Object { summands } | ObjectFile::Many(summands) => summands,
            ObjectFile::One(c) => vec![Entry::Bare(c)],
        };
        return entries
            .iter()
            .map(|e| {
                let cf = match e {
                    Entry::Wrapped(s) => &s.complex,
                    Entry::Bare(c) => c,
                };
                Ok(cf.interpret(alg)?)
            })
            .collect();
    }
    spec.split('+').map(|t| inline_term(reg, t)).collect()
}

/// Indecomposable summands of the sum of all given objects.
pub fn summands(reg: &Registry, specs: &[String]) -> Result<Vec<ObjId>, CliError> {
    let mut out = Vec::new();
    for s in specs {
        for c in parse_object(reg, s)? {
            out.extend(reg.decompose(&c)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Summands in the order given, each required to be indecomposable.
pub fn sequence(reg: &Registry, specs: &[String]) -> Result<Vec<ObjId>, CliError> {
    let mut out = Vec::new();
    for s in specs {
        for c in parse_object(reg, s)? {
            let parts = reg.decompose(&c)?;
            if parts.len() != 1 {
                return Err(CliError::input("NotIndecomposable", format!("{s} has {} summands", parts.len())));
            }
            out.push(parts[0]);
        }
    }
    Ok(out)
}

pub fn summand_json(reg: &Registry, id: ObjId) -> Summand {
    Summand { label: Some(reg.label(id)), complex: ComplexFile::of(reg.algebra(), &reg.object(id)) }
}
