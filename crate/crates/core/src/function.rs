//! Vectorial Boolean functions on GF(2^n).
//!
//! The lookup table is the canonical identity of a function; the univariate
//! polynomial, when known, is carried as metadata and kept consistent with
//! the table.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Exp, FieldCtx};

/// One monomial `coeff * x^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Elem,
    pub exp: Exp,
}

/// Univariate polynomial with distinct exponents and nonzero coefficients,
/// terms sorted by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnivariatePoly {
    terms: Vec<Term>,
    constant: Elem,
}

impl UnivariatePoly {
    /// Combines like terms by coefficient addition and drops zeros.
    pub fn new(terms: impl IntoIterator<Item = Term>, constant: Elem) -> Self {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.exp);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        UnivariatePoly {
            terms: merged,
            constant,
        }
    }

    /// `x^e`.
    pub fn monomial(exp: Exp) -> Self {
        Self::new(
            [Term {
                coeff: Elem::ONE,
                exp,
            }],
            Elem::ZERO,
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant(&self) -> Elem {
        self.constant
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.terms.iter().map(|t| t.exp.0).collect()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.terms
            .iter()
            .map(|t| ctx.mul(t.coeff, ctx.pow_exp(x, t.exp)))
            .fold(self.constant, |a, b| a + b)
    }

    /// Maximum binary weight over the exponents present.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exp.weight()).max().unwrap_or(0)
    }
}

/// `lut[i] = f(Elem(i))`, length exactly 2^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    lut: Vec<Elem>,
}

impl FunctionTable {
    pub fn new(ctx: &FieldCtx, lut: Vec<Elem>) -> Result<Self> {
        if lut.len() != ctx.size() {
            return Err(Error::Parse(format!(
                "table has {} entries, GF(2^{}) needs {}",
                lut.len(),
                ctx.n(),
                ctx.size()
            )));
        }
        if let Some(bad) = lut.iter().find(|v| !ctx.contains(**v)) {
            return Err(Error::ElementOutOfRange(bad.0));
        }
        Ok(FunctionTable { lut })
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.lut
    }

    pub fn len(&self) -> usize {
        self.lut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lut.is_empty()
    }
}

/// A function GF(2^n) -> GF(2^n).
#[derive(Clone, Debug)]
pub struct VBFunction {
    field: Arc<FieldCtx>,
    poly: Option<UnivariatePoly>,
    table: FunctionTable,
}

impl PartialEq for VBFunction {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.table == other.table
    }
}

impl VBFunction {
    pub fn from_poly(field: Arc<FieldCtx>, poly: UnivariatePoly) -> Self {
        let lut = field.elements().map(|x| poly.eval(&field, x)).collect();
        VBFunction {
            field,
            poly: Some(poly),
            table: FunctionTable { lut },
        }
    }

    pub fn from_table(field: Arc<FieldCtx>, table: FunctionTable) -> Result<Self> {
        if table.len() != field.size() {
            return Err(Error::FieldMismatch {
                expected: field.n(),
                actual: table.len().trailing_zeros(),
            });
        }
        Ok(VBFunction {
            field,
            poly: None,
            table,
        })
    }

    pub fn from_fn(field: Arc<FieldCtx>, f: impl Fn(Elem) -> Elem) -> Self {
        let lut = field.elements().map(f).collect();
        VBFunction {
            field,
            poly: None,
            table: FunctionTable { lut },
        }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn poly(&self) -> Option<&UnivariatePoly> {
        self.poly.as_ref()
    }

    pub fn table(&self) -> &[Elem] {
        &self.table.lut
    }

    /// Table lookup.
    #[inline]
    pub fn at(&self, x: Elem) -> Elem {
        self.table.lut[x.0 as usize]
    }

    /// Term-sum evaluation when a polynomial is attached, else table lookup.
    pub fn evaluate(&self, x: Elem) -> Elem {
        match &self.poly {
            Some(p) => p.eval(&self.field, x),
            None => self.at(x),
        }
    }

    /// Coordinate function `bit` of the output as a 0/1 truth table.
    pub fn output_bit(&self, bit: u32) -> Vec<u8> {
        self.table
            .lut
            .iter()
            .map(|y| ((y.0 >> bit) & 1) as u8)
            .collect()
    }

    /// Degree read off the truth table through the Möbius transform.
    pub fn degree_from_table(&self) -> u32 {
        (0..self.field.n())
            .map(|bit| {
                mobius_anf(&self.output_bit(bit))
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == 1)
                    .map(|(m, _)| m.count_ones())
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Algebraic degree. With a polynomial attached both routes are computed
    /// and must agree.
    pub fn algebraic_degree(&self) -> u32 {
        let from_table = self.degree_from_table();
        if let Some(p) = &self.poly {
            assert_eq!(
                p.degree(),
                from_table,
                "polynomial and table degrees disagree"
            );
        }
        from_table
    }

    /// Drops the polynomial, keeping only the table.
    pub fn table_only(&self) -> VBFunction {
        VBFunction {
            field: self.field.clone(),
            poly: None,
            table: self.table.clone(),
        }
    }

    /// `self + other` pointwise.
    pub fn add(&self, other: &VBFunction) -> Result<VBFunction> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.n(),
                actual: other.field.n(),
            });
        }
        let poly = match (&self.poly, &other.poly) {
            (Some(a), Some(b)) => Some(UnivariatePoly::new(
                a.terms.iter().chain(b.terms.iter()).copied(),
                a.constant + b.constant,
            )),
            _ => None,
        };
        let lut = self
            .table()
            .iter()
            .zip(other.table())
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(VBFunction {
            field: self.field.clone(),
            poly,
            table: FunctionTable { lut },
        })
    }
}

/// Binary Möbius transform of a 0/1 truth table of length 2^m: truth table
/// to ANF coefficients (and back, it is an involution).
pub fn mobius_anf(bits: &[u8]) -> Vec<u8> {
    assert!(
        bits.len().is_power_of_two(),
        "length must be a power of two"
    );
    let mut v: Vec<u8> = bits.iter().map(|b| b & 1).collect();
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (l, u) in lo.iter().zip(hi.iter_mut()) {
                *u ^= *l;
            }
        }
        h *= 2;
    }
    v
}
