//! CCZ invariants through the code attached to a function.
//!
//! For `f` on GF(2^n) the matrix with columns `(1, x_i, f(x_i))`,
//! `i = 0..2^n`, spans a binary code of length 2^n. CCZ-equivalent
//! functions give equivalent codes, so the dimension and weight
//! distribution of that code, together with the differential and Walsh
//! spectra, form a fingerprint. Agreement of fingerprints is only
//! evidence of equivalence; a mismatch refutes it.
//!
//! For quadratic APN functions the code and spectra above coincide across
//! many inequivalent classes, so the bundle also carries the differential
//! and Walsh spectra of the ortho-derivative. Those are EA invariants, and
//! for quadratic APN functions EA and CCZ equivalence coincide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::affine::{gf2_rank, AffineMap};
use crate::analysis::{
    diff_uniformity_exhaustive, ortho_derivative, walsh_spectrum, DifferentialSpectrum,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Exp};
use crate::function::VBFunction;

pub const DEFAULT_WEIGHT_BUDGET: u32 = 25;

/// Row layout of [`CodeMatrix`], recorded in reports.
pub const ROW_LAYOUT: &str = "row 0 = all-ones; rows 1..=n = bit i of x_i; rows n+1..=2n = bit i of f(x_i); column j = element with bit pattern j";

/// `2n + 1` packed rows of length 2^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeMatrix {
    n: u32,
    len: usize,
    rows: Vec<Vec<u64>>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

impl CodeMatrix {
    /// Matrix from explicit rows of 0/1 values.
    pub fn from_rows(n: u32, len: usize, rows: &[Vec<u8>]) -> Self {
        let packed = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), len);
                let mut p = vec![0u64; words_for(len)];
                for (j, &b) in r.iter().enumerate() {
                    if b & 1 == 1 {
                        set_bit(&mut p, j);
                    }
                }
                p
            })
            .collect();
        CodeMatrix {
            n,
            len,
            rows: packed,
        }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bit(&self, row: usize, col: usize) -> u8 {
        ((self.rows[row][col / 64] >> (col % 64)) & 1) as u8
    }

    /// Rows as hex strings, least significant word first, each word as 16
    /// hex digits big-endian.
    pub fn to_hex_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|w| format!("{w:016x}"))
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect()
    }
}

pub fn build_code(f: &VBFunction) -> CodeMatrix {
    let n = f.field().n();
    let len = f.field().size();
    let words = words_for(len);
    let mut rows = vec![vec![0u64; words]; 2 * n as usize + 1];
    for (j, y) in f.table().iter().enumerate() {
        set_bit(&mut rows[0], j);
        for i in 0..n as usize {
            if (j >> i) & 1 == 1 {
                set_bit(&mut rows[1 + i], j);
            }
            if (y.0 >> i) & 1 == 1 {
                set_bit(&mut rows[1 + n as usize + i], j);
            }
        }
    }
    CodeMatrix { n, len, rows }
}

/// Reduced basis of the row span.
fn row_basis(m: &CodeMatrix) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = m.rows.clone();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for col in 0..m.len {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = rows.iter().position(|r| r[w] & b != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(p);
        for r in rows.iter_mut().chain(basis.iter_mut()) {
            if r[w] & b != 0 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        basis.push(pivot);
    }
    basis
}

/// GF(2) rank of the rows.
pub fn code_dimension(m: &CodeMatrix) -> u32 {
    row_basis(m).len() as u32
}

/// Number of codewords of each weight `0..=len` in the row span, by Gray-code
/// walk over the span: one row XOR and one popcount pass per step.
pub fn weight_enumerator(m: &CodeMatrix, budget: u32) -> Result<Vec<u64>> {
    let basis = row_basis(m);
    let rank = basis.len() as u32;
    if rank > budget {
        return Err(Error::BudgetExceeded { rank, budget });
    }
    let mut counts = vec![0u64; m.len + 1];
    let mut word = vec![0u64; words_for(m.len)];
    counts[0] = 1;
    for step in 1u64..(1u64 << rank) {
        let flip = step.trailing_zeros() as usize;
        for (x, y) in word.iter_mut().zip(&basis[flip]) {
            *x ^= y;
        }
        let w: u32 = word.iter().map(|x| x.count_ones()).sum();
        counts[w as usize] += 1;
    }
    Ok(counts)
}

/// The fingerprint compared by [`compare_invariants`].
///
/// `algebraic_degree` is reported for context only; it is not a CCZ
/// invariant and is never used to separate functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBundle {
    pub field: crate::field::FieldSpec,
    pub code_dimension: u32,
    /// Sparse: weight -> count, zero counts omitted.
    pub weight_enumerator: BTreeMap<u32, u64>,
    pub diff_spectrum: DifferentialSpectrum,
    pub walsh_values: BTreeMap<u32, u64>,
    /// Present only for quadratic APN functions.
    pub ortho_derivative: Option<OrthoSpectra>,
    pub algebraic_degree: u32,
}

/// Spectra of the ortho-derivative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrthoSpectra {
    pub diff_histogram: BTreeMap<u32, u64>,
    pub walsh_values: BTreeMap<u32, u64>,
}

pub fn ortho_spectra(f: &VBFunction) -> Option<OrthoSpectra> {
    let pi = ortho_derivative(f)?;
    Some(OrthoSpectra {
        diff_histogram: diff_uniformity_exhaustive(&pi).histogram,
        walsh_values: walsh_spectrum(&pi).values,
    })
}

impl InvariantBundle {
    /// Canonical JSON (fixed field order, sorted maps).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("bundle serializes")
    }

    /// SHA-256 over the CCZ-invariant components only.
    pub fn content_hash(&self) -> String {
        let key = serde_json::json!({
            "code_dimension": self.code_dimension,
            "weight_enumerator": self.weight_enumerator,
            "diff_spectrum": self.diff_spectrum,
            "walsh_values": self.walsh_values,
            "ortho_derivative": self.ortho_derivative,
        });
        hex::encode(Sha256::digest(key.to_string().as_bytes()))
    }
}

pub fn invariant_bundle(f: &VBFunction) -> Result<InvariantBundle> {
    invariant_bundle_with_budget(f, DEFAULT_WEIGHT_BUDGET)
}

pub fn invariant_bundle_with_budget(f: &VBFunction, budget: u32) -> Result<InvariantBundle> {
    let code = build_code(f);
    let code_dimension = code_dimension(&code);
    let weight_enumerator = weight_enumerator(&code, budget)?
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(w, c)| (w as u32, c))
        .collect();
    Ok(InvariantBundle {
        field: f.field().spec(),
        code_dimension,
        weight_enumerator,
        diff_spectrum: diff_uniformity_exhaustive(f),
        walsh_values: walsh_spectrum(f).values,
        ortho_derivative: ortho_spectra(f),
        algebraic_degree: f.algebraic_degree(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    DiffSpectrum,
    WalshValues,
    CodeDimension,
    WeightEnumerator,
    OrthoDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    /// Proven CCZ-inequivalent: the named component differs.
    Distinguished(Component),
    /// All computed invariants agree. Necessary-condition evidence only.
    Indistinguishable,
}

impl EquivalenceVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, EquivalenceVerdict::Distinguished(_))
    }
}

pub fn compare_bundles(a: &InvariantBundle, b: &InvariantBundle) -> Result<EquivalenceVerdict> {
    if a.field.n != b.field.n {
        return Err(Error::FieldMismatch {
            expected: a.field.n,
            actual: b.field.n,
        });
    }
    let first = if a.diff_spectrum != b.diff_spectrum {
        Some(Component::DiffSpectrum)
    } else if a.walsh_values != b.walsh_values {
        Some(Component::WalshValues)
    } else if a.code_dimension != b.code_dimension {
        Some(Component::CodeDimension)
    } else if a.weight_enumerator != b.weight_enumerator {
        Some(Component::WeightEnumerator)
    } else if a.ortho_derivative != b.ortho_derivative {
        Some(Component::OrthoDerivative)
    } else {
        None
    };
    Ok(first.map_or(
        EquivalenceVerdict::Indistinguishable,
        EquivalenceVerdict::Distinguished,
    ))
}

pub fn compare_invariants(f: &VBFunction, g: &VBFunction) -> Result<EquivalenceVerdict> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch {
            expected: f.field().n(),
            actual: g.field().n(),
        });
    }
    compare_bundles(&invariant_bundle(f)?, &invariant_bundle(g)?)
}

/// Looks for an invertible GF(2)-linear `L` with `f(x) = L(x^d)` for every
/// `x`. Such an `L` is an EA equivalence between `f` and `x^d`.
///
/// `L` is fixed on a basis drawn from the image of `x -> x^d` and checked on
/// all 2^n points. If that image does not span the space, `L` is completed on
/// standard basis vectors so that it is invertible whenever possible.
pub fn linearized_factor_check(f: &VBFunction, d: Exp) -> Option<AffineMap> {
    let ctx = f.field();
    let n = ctx.n();
    // echelon form keyed by pivot bit: (reduced y, original y, image f(x))
    let mut pivots: Vec<Option<(u32, u32, u32)>> = vec![None; n as usize];
    for x in ctx.elements() {
        let y = ctx.pow_exp(x, d).0;
        let mut r = y;
        let mut img = f.at(x).0;
        while r != 0 {
            let top = 31 - r.leading_zeros();
            match pivots[top as usize] {
                Some((pr, _, pimg)) => {
                    r ^= pr;
                    img ^= pimg;
                }
                None => break,
            }
        }
        if r != 0 {
            let top = 31 - r.leading_zeros();
            pivots[top as usize] = Some((r, y, img));
        } else if img != 0 {
            // f is not a linear function of x^d on this span
            return None;
        }
    }
    let mut domain: Vec<(u32, u32)> = pivots
        .iter()
        .flatten()
        .map(|&(r, _, img)| (r, img))
        .collect();
    // complete the image side so the map can still be invertible
    if domain.len() < n as usize {
        let images: Vec<u32> = domain.iter().map(|&(_, i)| i).collect();
        if gf2_rank(&images) < domain.len() as u32 {
            return None;
        }
        let mut img_span = images.clone();
        for bit in 0..n {
            if pivots[bit as usize].is_some() {
                continue;
            }
            let target = (0..n)
                .map(|t| 1u32 << t)
                .find(|&cand| {
                    let mut probe = img_span.clone();
                    probe.push(cand);
                    gf2_rank(&probe) == probe.len() as u32
                })
                .expect("a complement vector exists");
            img_span.push(target);
            domain.push((1 << bit, target));
        }
    }
    // solve for the images of the standard basis vectors
    let columns = solve_columns(n, &domain)?;
    let map = AffineMap::from_columns(n, &columns, Elem::ZERO);
    let reproduces = ctx
        .elements()
        .all(|x| map.apply(ctx.pow_exp(x, d)) == f.at(x));
    (reproduces && map.is_permutation()).then_some(map)
}

/// Given `L(r_i) = img_i` on a basis `{r_i}`, returns `L(e_j)` for every `j`.
fn solve_columns(n: u32, domain: &[(u32, u32)]) -> Option<Vec<Elem>> {
    // Gauss-Jordan on pairs (vector, image) until each vector is a unit vector.
    let mut rows: Vec<(u32, u32)> = domain.to_vec();
    let mut cols = vec![None; n as usize];
    for bit in (0..n).rev() {
        let mask = 1u32 << bit;
        let pos = rows.iter().position(|&(v, _)| v & mask != 0)?;
        let (pv, pi) = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if r.0 & mask != 0 {
                r.0 ^= pv;
                r.1 ^= pi;
            }
        }
        for c in cols.iter_mut().flatten() {
            let (v, i): &mut (u32, u32) = c;
            if *v & mask != 0 {
                *v ^= pv;
                *i ^= pi;
            }
        }
        cols[bit as usize] = Some((pv, pi));
    }
    cols.into_iter()
        .map(|c| {
            c.map(|(v, i)| {
                debug_assert!(v.is_power_of_two());
                Elem(i)
            })
        })
        .collect()
}
