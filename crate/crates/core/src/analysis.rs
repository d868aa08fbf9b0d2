//! Differential uniformity and Walsh spectra.
//!
//! Two independent differential verifiers are provided: a full DDT sweep
//! that works for any function, and a kernel-rank method for functions of
//! algebraic degree at most 2, whose difference maps are GF(2)-linear.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::affine::gf2_rank;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::function::VBFunction;
use crate::par;

/// Summary of the DDT over all `q != 0` and all `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferentialSpectrum {
    pub uniformity: u32,
    /// Solution count -> number of `(q, p)` pairs with that count.
    pub histogram: BTreeMap<u32, u64>,
}

impl DifferentialSpectrum {
    pub fn is_apn(&self) -> bool {
        self.uniformity == 2
    }
}

struct DdtScratch {
    hist: Vec<u64>,
    counts: Vec<u32>,
}

/// Row `q` of the DDT into `counts`.
#[inline]
fn ddt_row(table: &[Elem], q: u32, counts: &mut [u32]) {
    counts.fill(0);
    for (x, &fx) in table.iter().enumerate() {
        let d = table[x ^ q as usize].0 ^ fx.0;
        counts[d as usize] = counts[d as usize].saturating_add(1);
    }
}

/// Exact DDT statistics by a full `(q, x)` sweep.
pub fn diff_uniformity_exhaustive(f: &VBFunction) -> DifferentialSpectrum {
    let size = f.field().size();
    let table = f.table();
    let acc = par::fold_reduce(
        1..size,
        || DdtScratch {
            hist: vec![0; size + 1],
            counts: Vec::new(),
        },
        |mut acc, q| {
            if acc.counts.len() != size {
                acc.counts = vec![0; size];
            }
            ddt_row(table, q as u32, &mut acc.counts);
            debug_assert_eq!(acc.counts.iter().map(|&c| c as usize).sum::<usize>(), size);
            for &c in &acc.counts {
                acc.hist[c as usize] += 1;
            }
            acc
        },
        |mut a, b| {
            for (x, y) in a.hist.iter_mut().zip(&b.hist) {
                *x += y;
            }
            a
        },
    );
    let histogram: BTreeMap<u32, u64> = acc
        .hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k as u32, c))
        .collect();
    let uniformity = histogram.keys().next_back().copied().unwrap_or(0);
    DifferentialSpectrum {
        uniformity,
        histogram,
    }
}

/// Full DDT as CSV, rows `q = 0..2^n`, columns `p = 0..2^n`. Only for n <= 8.
pub fn ddt_csv(f: &VBFunction) -> Result<String> {
    let n = f.field().n();
    if n > 8 {
        return Err(Error::BudgetExceeded { rank: n, budget: 8 });
    }
    let size = f.field().size();
    let mut counts = vec![0u32; size];
    let mut out = String::new();
    for q in 0..size {
        ddt_row(f.table(), q as u32, &mut counts);
        let row: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Zero counts of the linear difference maps `D_q`, one per `q != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    /// `kernel_sizes[q - 1] = |{x : D_q(x) = 0}|`.
    pub kernel_sizes: Vec<u32>,
    pub max_kernel: u32,
}

impl KernelReport {
    pub fn is_apn(&self) -> bool {
        self.max_kernel == 2
    }
}

/// Kernel-rank verifier for functions of degree <= 2.
///
/// `D_q(x) = f(x+q) + f(x) + f(q) + f(0)` is GF(2)-linear in `x`, so its
/// zero set is a subspace of size `2^(n - rank)`, and every solution set of
/// `f(x+q) + f(x) = p` is empty or a coset of it.
pub fn diff_uniformity_quadratic(f: &VBFunction) -> Result<KernelReport> {
    let deg = f.algebraic_degree();
    if deg > 2 {
        return Err(Error::NotQuadratic(deg));
    }
    let n = f.field().n();
    let size = f.field().size() as u32;
    let t = f.table();
    let f0 = t[0].0;
    let d = move |q: u32, x: u32| t[(x ^ q) as usize].0 ^ t[x as usize].0 ^ t[q as usize].0 ^ f0;
    let kernel_sizes = par::map(1..size as usize, |q| {
        let q = q as u32;
        let cols: Vec<u32> = (0..n).map(|i| d(q, 1 << i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(
                    d(q, (1 << i) | (1 << j)),
                    cols[i as usize] ^ cols[j as usize],
                    "difference map is not linear for q = {q:#x}"
                );
            }
        }
        1u32 << (n - gf2_rank(&cols))
    });
    let max_kernel = kernel_sizes.iter().copied().max().unwrap_or(0);
    Ok(KernelReport {
        kernel_sizes,
        max_kernel,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Quadratic,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Method::Exhaustive),
            "quadratic" => Ok(Method::Quadratic),
            "both" => Ok(Method::Both),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

/// Outcome of [`verify`]: the uniformity found by each method that ran.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub method: Method,
    pub exhaustive_uniformity: Option<u32>,
    pub max_kernel: Option<u32>,
    pub uniformity: u32,
}

impl Verification {
    pub fn is_apn(&self) -> bool {
        self.uniformity == 2
    }
}

/// Runs the requested verifier(s). With `Method::Both` the two must agree.
pub fn verify(f: &VBFunction, method: Method) -> Result<Verification> {
    let ex = matches!(method, Method::Exhaustive | Method::Both)
        .then(|| diff_uniformity_exhaustive(f).uniformity);
    let quad = match method {
        Method::Quadratic | Method::Both => Some(diff_uniformity_quadratic(f)?.max_kernel),
        Method::Exhaustive => None,
    };
    if let (Some(e), Some(k)) = (ex, quad) {
        if e != k {
            return Err(Error::MethodDisagreement {
                exhaustive: e,
                quadratic: k,
            });
        }
    }
    let uniformity = ex.or(quad).unwrap_or(0);
    Ok(Verification {
        method,
        exhaustive_uniformity: ex,
        max_kernel: quad,
        uniformity,
    })
}

pub fn is_apn(f: &VBFunction, method: Method) -> Result<bool> {
    Ok(verify(f, method)?.is_apn())
}

/// Multiset of `|W_f(a, b)|` over all `a` and all `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub values: BTreeMap<u32, u64>,
    pub nonlinearity: u32,
    /// `sum_a W(a,b)^2 = 2^(2n)` held for every `b`.
    pub parseval: bool,
}

/// In-place fast Walsh-Hadamard transform.
pub fn fwht(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `mask[a]` has bit `i` equal to `tr(a * x^i)`, so `tr(a x) = parity(mask[a] & x)`.
pub fn trace_dual_masks(f: &VBFunction) -> Vec<u32> {
    let ctx = f.field();
    ctx.elements()
        .map(|a| (0..ctx.n()).fold(0u32, |m, i| m | (ctx.trace(ctx.mul(a, Elem(1 << i))) << i)))
        .collect()
}

fn component_transform(f: &VBFunction, b: Elem, buf: &mut Vec<i32>) {
    let ctx = f.field();
    buf.clear();
    buf.extend(
        f.table()
            .iter()
            .map(|&y| 1 - 2 * ctx.trace(ctx.mul(b, y)) as i32),
    );
    fwht(buf);
}

/// `W_f(a, b)` for every `a`, indexed by `a`.
pub fn walsh_row(f: &VBFunction, b: Elem) -> Vec<i32> {
    let mut buf = Vec::new();
    component_transform(f, b, &mut buf);
    trace_dual_masks(f)
        .iter()
        .map(|&m| buf[m as usize])
        .collect()
}

struct WalshAcc {
    values: BTreeMap<u32, u64>,
    parseval: bool,
    buf: Vec<i32>,
}

pub fn walsh_spectrum(f: &VBFunction) -> WalshSpectrum {
    let n = f.field().n();
    let size = f.field().size();
    let target = 1u64 << (2 * n);
    let acc = par::fold_reduce(
        1..size,
        || WalshAcc {
            values: BTreeMap::new(),
            parseval: true,
            buf: Vec::new(),
        },
        |mut acc, b| {
            component_transform(f, Elem(b as u32), &mut acc.buf);
            let mut sq = 0u64;
            for &w in &acc.buf {
                *acc.values.entry(w.unsigned_abs()).or_insert(0) += 1;
                sq += (w as i64 * w as i64) as u64;
            }
            acc.parseval &= sq == target;
            acc
        },
        |mut a, b| {
            for (k, v) in b.values {
                *a.values.entry(k).or_insert(0) += v;
            }
            a.parseval &= b.parseval;
            a
        },
    );
    let max = acc.values.keys().next_back().copied().unwrap_or(0);
    WalshSpectrum {
        values: acc.values,
        nonlinearity: (1u32 << (n - 1)) - max / 2,
        parseval: acc.parseval,
    }
}

/// The unique nonzero `w` with `w . r = 0` for every row, when the rows
/// have rank exactly `n - 1`.
fn orthogonal_vector(rows: &[u32], n: u32) -> Option<u32> {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for bit in 0..n {
        let mask = 1u32 << bit;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pr = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= pr;
            }
        }
        pivots.push(bit);
        rank += 1;
    }
    if rank as u32 != n - 1 {
        return None;
    }
    let free = (0..n).find(|b| !pivots.contains(b))?;
    let mut w = 1u32 << free;
    for (r, &p) in rows.iter().zip(&pivots) {
        w |= ((r >> free) & 1) << p;
    }
    Some(w)
}

/// Ortho-derivative of a quadratic APN function: `pi(a)` is the nonzero
/// element with `tr(pi(a) * y) = 0` on the image of
/// `x -> f(x+a) + f(x) + f(a) + f(0)`, and `pi(0) = 0`.
///
/// `None` unless `f` has degree at most 2 and every such image is a
/// hyperplane, which is exactly the quadratic APN case.
pub fn ortho_derivative(f: &VBFunction) -> Option<VBFunction> {
    if f.algebraic_degree() > 2 {
        return None;
    }
    let ctx = f.field();
    let n = ctx.n();
    let masks = trace_dual_masks(f);
    let mut from_mask = vec![Elem::ZERO; masks.len()];
    for (a, &m) in masks.iter().enumerate() {
        from_mask[m as usize] = Elem(a as u32);
    }
    let t = f.table();
    let f0 = t[0].0;
    let pi = par::map(1..ctx.size(), |a| {
        let cols: Vec<u32> = (0..n)
            .map(|i| {
                let x = 1usize << i;
                t[x ^ a].0 ^ t[x].0 ^ t[a].0 ^ f0
            })
            .collect();
        orthogonal_vector(&cols, n).map(|w| from_mask[w as usize])
    });
    let mut lut = Vec::with_capacity(ctx.size());
    lut.push(Elem::ZERO);
    for v in pi {
        lut.push(v?);
    }
    Some(VBFunction::from_fn(ctx.clone(), |x| lut[x.0 as usize]))
}
