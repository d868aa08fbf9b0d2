//! GF(2)-affine maps on the polynomial-basis coordinates of GF(2^n).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::function::VBFunction;

/// Bit-matrix rank over GF(2); `rows` are the row bitmasks.
pub fn gf2_rank(rows: &[u32]) -> u32 {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in (0..32).rev() {
        let mask = 1u32 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= p;
            }
        }
        rank += 1;
    }
    rank as u32
}

/// `x -> M x + c`. Row `i` of `M` is a bitmask whose parity against `x`
/// gives output bit `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    n: u32,
    rows: Vec<u32>,
    constant: Elem,
    is_permutation: bool,
}

impl AffineMap {
    pub fn new(n: u32, rows: Vec<u32>, constant: Elem) -> Self {
        assert_eq!(rows.len(), n as usize, "matrix must have n rows");
        let mask = (1u32 << n) - 1;
        let rows: Vec<u32> = rows.into_iter().map(|r| r & mask).collect();
        let is_permutation = gf2_rank(&rows) == n;
        AffineMap {
            n,
            rows,
            constant: Elem(constant.0 & mask),
            is_permutation,
        }
    }

    /// Linear map given by the images of the basis vectors `e_j`.
    pub fn from_columns(n: u32, columns: &[Elem], constant: Elem) -> Self {
        assert_eq!(columns.len(), n as usize);
        let rows = (0..n)
            .map(|i| {
                columns
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| (c.0 >> i) & 1 == 1)
                    .fold(0u32, |r, (j, _)| r | (1 << j))
            })
            .collect();
        Self::new(n, rows, constant)
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, (0..n).map(|i| 1 << i).collect(), Elem::ZERO)
    }

    pub fn zero(n: u32) -> Self {
        Self::new(n, vec![0; n as usize], Elem::ZERO)
    }

    /// Random invertible map when `permutation`, else any affine map.
    /// Invertible matrices are drawn by rejection sampling.
    pub fn random<R: Rng + ?Sized>(n: u32, permutation: bool, rng: &mut R) -> Self {
        let mask = (1u32 << n) - 1;
        loop {
            let rows: Vec<u32> = (0..n).map(|_| rng.gen::<u32>() & mask).collect();
            let c = Elem(rng.gen::<u32>() & mask);
            let m = Self::new(n, rows, c);
            if !permutation || m.is_permutation {
                return m;
            }
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn constant(&self) -> Elem {
        self.constant
    }

    pub fn is_permutation(&self) -> bool {
        self.is_permutation
    }

    pub fn is_linear(&self) -> bool {
        self.constant.is_zero()
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        let lin = self.rows.iter().enumerate().fold(0u32, |acc, (i, &r)| {
            acc | (((r & x.0).count_ones() & 1) << i)
        });
        Elem(lin ^ self.constant.0)
    }
}

/// `g = a1 ∘ f ∘ a2 + a`, computed on tables.
pub fn apply_ea_transform(
    f: &VBFunction,
    a1: &AffineMap,
    a2: &AffineMap,
    a: &AffineMap,
) -> Result<VBFunction> {
    let n = f.field().n();
    for m in [a1, a2, a] {
        if m.n() != n {
            return Err(Error::FieldMismatch {
                expected: n,
                actual: m.n(),
            });
        }
    }
    if !a1.is_permutation() || !a2.is_permutation() {
        return Err(Error::NotAPermutation);
    }
    Ok(VBFunction::from_fn(f.field().clone(), |x| {
        a1.apply(f.at(a2.apply(x))) + a.apply(x)
    }))
}

/// Random EA triple `(a1, a2, a)` with `a1`, `a2` invertible.
pub fn random_ea_triple<R: Rng + ?Sized>(n: u32, rng: &mut R) -> (AffineMap, AffineMap, AffineMap) {
    (
        AffineMap::random(n, true, rng),
        AffineMap::random(n, true, rng),
        AffineMap::random(n, false, rng),
    )
}
