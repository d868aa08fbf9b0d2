//! File formats and textual descriptors.
//!
//! * field descriptor: `n=6` or `n=6,modulus=0x43`; JSON form
//!   `{"n": 6, "modulus": "0x43"}`
//! * function-spec file (JSON):
//!   `{"field": {"n": 6, "modulus": "0x43"}, "terms": [{"coeff": "0x01", "exp": 3}]}`
//! * table file: one hex value per line, in index order `0..2^n`

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, FieldSpec};
use crate::function::{FunctionTable, Term, UnivariatePoly, VBFunction};

pub fn parse_hex(s: &str) -> Result<u32> {
    let s = s.trim();
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("bad hex value {s:?}: {e}")))
}

fn parse_num(s: &str) -> Result<u32> {
    let s = s.trim();
    if s.starts_with("0x") || s.starts_with("0X") {
        parse_hex(s)
    } else {
        s.parse()
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
    }
}

/// Parses `n=6[,modulus=0x43]`. A bare integer is accepted as `n`.
pub fn parse_field_descriptor(text: &str) -> Result<FieldCtx> {
    let mut n = None;
    let mut modulus = None;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('=') {
            Some(("n", v)) => n = Some(parse_num(v)?),
            Some(("modulus" | "m", v)) => modulus = Some(parse_hex(v)?),
            None => n = Some(parse_num(part)?),
            Some((k, _)) => return Err(Error::Parse(format!("unknown field key {k:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("field descriptor needs n".into()))?;
    FieldCtx::new(n, modulus)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub n: u32,
    pub modulus: String,
}

impl From<FieldSpec> for FieldDescriptor {
    fn from(s: FieldSpec) -> Self {
        FieldDescriptor {
            n: s.n,
            modulus: format!("0x{:X}", s.modulus),
        }
    }
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.n, Some(parse_hex(&self.modulus)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub coeff: String,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpecFile {
    pub field: FieldDescriptor,
    pub terms: Vec<TermEntry>,
}

impl FunctionSpecFile {
    pub fn from_function(f: &VBFunction) -> Option<Self> {
        let poly = f.poly()?;
        let mut terms: Vec<TermEntry> = poly
            .terms()
            .iter()
            .map(|t| TermEntry {
                coeff: format!("0x{:02x}", t.coeff.0),
                exp: t.exp.0,
            })
            .collect();
        if !poly.constant().is_zero() {
            terms.insert(
                0,
                TermEntry {
                    coeff: format!("0x{:02x}", poly.constant().0),
                    exp: 0,
                },
            );
        }
        Some(FunctionSpecFile {
            field: f.field().spec().into(),
            terms,
        })
    }

    /// Builds the function. Exponent 0 is the constant term; other exponents
    /// are reduced modulo 2^n - 1 into `[1, 2^n - 1]`.
    pub fn build(&self) -> Result<VBFunction> {
        let ctx = Arc::new(self.field.build()?);
        let order = ctx.order();
        let mut constant = Elem::ZERO;
        let mut terms = Vec::new();
        for t in &self.terms {
            let coeff = ctx.check(Elem(parse_hex(&t.coeff)?))?;
            if t.exp == 0 {
                constant += coeff;
            } else {
                let r = t.exp % order;
                terms.push(Term {
                    coeff,
                    exp: crate::field::Exp(if r == 0 { order } else { r }),
                });
            }
        }
        Ok(VBFunction::from_poly(
            ctx,
            UnivariatePoly::new(terms, constant),
        ))
    }
}

pub fn parse_spec_file(json: &str) -> Result<VBFunction> {
    serde_json::from_str::<FunctionSpecFile>(json)?.build()
}

/// Reads a table file: blank lines and `#` comments are skipped.
pub fn parse_table(ctx: &Arc<FieldCtx>, text: &str) -> Result<VBFunction> {
    let lut = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_hex(l).map(Elem))
        .collect::<Result<Vec<_>>>()?;
    VBFunction::from_table(ctx.clone(), FunctionTable::new(ctx, lut)?)
}

pub fn write_table(f: &VBFunction) -> String {
    let width = (f.field().n() as usize).div_ceil(4);
    f.table()
        .iter()
        .map(|v| format!("0x{:0width$x}\n", v.0, width = width))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{known, KnownFunction};

    #[test]
    fn field_descriptors() {
        assert_eq!(
            parse_field_descriptor("n=6").unwrap().spec(),
            FieldSpec {
                n: 6,
                modulus: 0x43
            }
        );
        assert_eq!(
            parse_field_descriptor("n=3,modulus=0xB")
                .unwrap()
                .spec()
                .modulus,
            0xB
        );
        assert_eq!(parse_field_descriptor("6").unwrap().n(), 6);
        assert!(matches!(
            parse_field_descriptor("n=3,modulus=0x9"),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(parse_field_descriptor("q=3").is_err());
        let d: FieldDescriptor = FieldSpec { n: 3, modulus: 0xB }.into();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"n":3,"modulus":"0xB"}"#
        );
    }

    #[test]
    fn spec_file_round_trip() {
        let ctx = Arc::new(FieldCtx::new(6, None).unwrap());
        let f = known(&ctx, KnownFunction::DillonTrinomial { u: Elem(5) }).unwrap();
        let spec = FunctionSpecFile::from_function(&f).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json
            .starts_with(r#"{"field":{"n":6,"modulus":"0x43"},"terms":[{"coeff":"0x01","exp":3}"#));
        assert_eq!(parse_spec_file(&json).unwrap(), f);
    }

    #[test]
    fn spec_file_constant_and_reduction() {
        let json = r#"{"field":{"n":3,"modulus":"0xB"},"terms":[{"coeff":"0x1","exp":0},{"coeff":"0x1","exp":10}]}"#;
        let f = parse_spec_file(json).unwrap();
        let ctx = f.field().clone();
        for x in ctx.elements() {
            assert_eq!(f.at(x), ctx.pow(x, 3) + Elem::ONE);
        }
        let bad = r#"{"field":{"n":3,"modulus":"0xB"},"terms":[{"coeff":"0x10","exp":1}]}"#;
        assert!(parse_spec_file(bad).is_err());
    }

    #[test]
    fn table_file_round_trip() {
        let ctx = Arc::new(FieldCtx::new(4, None).unwrap());
        let f = known(&ctx, KnownFunction::Inverse).unwrap();
        let text = write_table(&f);
        assert_eq!(text.lines().count(), 16);
        assert_eq!(parse_table(&ctx, &text).unwrap(), f);
        assert!(parse_table(&ctx, "0x1\n0x2\n").is_err());
    }
}
