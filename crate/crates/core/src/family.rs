//! The quadrinomial family over GF(2^{3k}) and a catalog of reference
//! functions.
//!
//! For integers `k, s` with `3 | k+s`, `gcd(s, 3k) = gcd(k, 3) = 1`, a
//! primitive `u` and `v, w` in GF(2^k) with `v*w != 1`,
//!
//! ```text
//! F(x) = u^(2^k) x^(2^-k + 2^(k+s)) + u x^(2^s + 1) + v x^(2^-k + 1) + w u^(2^k + 1) x^(2^(k+s) + 2^s)
//! ```
//!
//! is APN. The condition on `v, w` is implemented as `v*w != 1`, which is
//! also meaningful when either coefficient is zero.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{exp_residue, gcd, Elem, Exp, FieldCtx};
use crate::function::{Term, UnivariatePoly, VBFunction};

/// Parameters `(k, s, u, v, w)`; the field degree is `3k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: u32,
    pub s: u32,
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
}

impl FamilyParams {
    pub fn n(&self) -> u32 {
        3 * self.k
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={},s={},u=0x{:02x},v=0x{:02x},w=0x{:02x}",
            self.k, self.s, self.u.0, self.v.0, self.w.0
        )
    }
}

fn parse_int(s: &str) -> Result<u32> {
    let s = s.trim();
    let r = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u32::from_str_radix(h, 16)
    } else {
        s.parse()
    };
    r.map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

impl FromStr for FamilyParams {
    type Err = Error;

    /// Parses `k=2,s=1,u=0x02,v=0x00,w=0x00`. `v` and `w` default to 0.
    fn from_str(text: &str) -> Result<Self> {
        let (mut k, mut s, mut u) = (None, None, None);
        let (mut v, mut w) = (0, 0);
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            let val = parse_int(val)?;
            match key.trim() {
                "k" => k = Some(val),
                "s" => s = Some(val),
                "u" => u = Some(val),
                "v" => v = val,
                "w" => w = val,
                other => return Err(Error::Parse(format!("unknown parameter {other:?}"))),
            }
        }
        let missing = |name: &str| Error::Parse(format!("missing parameter {name}"));
        Ok(FamilyParams {
            k: k.ok_or_else(|| missing("k"))?,
            s: s.ok_or_else(|| missing("s"))?,
            u: Elem(u.ok_or_else(|| missing("u"))?),
            v: Elem(v),
            w: Elem(w),
        })
    }
}

/// One failed constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    KPlusSNotDivisibleBy3,
    SNotCoprimeTo3K,
    KDivisibleBy3,
    UNotPrimitive,
    VNotInSubfield,
    WNotInSubfield,
    VTimesWIsOne,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::KPlusSNotDivisibleBy3 => "3 | (k+s) fails",
            Violation::SNotCoprimeTo3K => "gcd(s,3k)=1 fails",
            Violation::KDivisibleBy3 => "(3,k)=1 fails",
            Violation::UNotPrimitive => "u is not primitive",
            Violation::VNotInSubfield => "v is not in GF(2^k)",
            Violation::WNotInSubfield => "w is not in GF(2^k)",
            Violation::VTimesWIsOne => "v*w = 1 (v = w^-1 excluded; checked as vw != 1)",
        })
    }
}

/// All violated constraints; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

fn ks_violations(k: u32, s: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(k + s).is_multiple_of(3) {
        out.push(Violation::KPlusSNotDivisibleBy3);
    }
    if gcd(s as u64, 3 * k as u64) != 1 {
        out.push(Violation::SNotCoprimeTo3K);
    }
    if k.is_multiple_of(3) {
        out.push(Violation::KDivisibleBy3);
    }
    out
}

fn require_degree(ctx: &FieldCtx, k: u32) -> Result<()> {
    if k == 0 || ctx.n() != 3 * k {
        return Err(Error::FieldMismatch {
            expected: 3 * k,
            actual: ctx.n(),
        });
    }
    Ok(())
}

/// Checks every constraint and reports all violations.
pub fn validate_params(ctx: &FieldCtx, p: &FamilyParams) -> Result<ValidationReport> {
    require_degree(ctx, p.k)?;
    let mut violations = ks_violations(p.k, p.s);
    for e in [p.u, p.v, p.w] {
        ctx.check(e)?;
    }
    if !ctx.is_primitive(p.u) {
        violations.push(Violation::UNotPrimitive);
    }
    if !ctx.in_subfield(p.v, p.k) {
        violations.push(Violation::VNotInSubfield);
    }
    if !ctx.in_subfield(p.w, p.k) {
        violations.push(Violation::WNotInSubfield);
    }
    if ctx.mul(p.v, p.w) == Elem::ONE {
        violations.push(Violation::VTimesWIsOne);
    }
    Ok(ValidationReport { violations })
}

/// The four exponents, in the order of the formula above:
/// `2^-k + 2^(k+s)`, `2^s + 1`, `2^-k + 1`, `2^(k+s) + 2^s`.
pub fn family_exponents(k: u32, s: u32) -> Result<[Exp; 4]> {
    let n = 3 * k;
    let (k, s) = (k as i64, s as i64);
    Ok([
        exp_residue(n, &[(1, -k), (1, k + s)], false)?,
        exp_residue(n, &[(1, s), (1, 0)], false)?,
        exp_residue(n, &[(1, -k), (1, 0)], false)?,
        exp_residue(n, &[(1, k + s), (1, s)], false)?,
    ])
}

/// The four coefficients `u^(2^k), u, v, w u^(2^k+1)`.
pub fn family_coefficients(ctx: &FieldCtx, p: &FamilyParams) -> [Elem; 4] {
    let u2k = ctx.frobenius(p.u, p.k as i64);
    [u2k, p.u, p.v, ctx.mul(p.w, ctx.mul(u2k, p.u))]
}

/// The four raw terms before like terms are combined.
pub fn family_terms(ctx: &FieldCtx, p: &FamilyParams) -> Result<[Term; 4]> {
    let e = family_exponents(p.k, p.s)?;
    let c = family_coefficients(ctx, p);
    Ok([0, 1, 2, 3].map(|i| Term {
        coeff: c[i],
        exp: e[i],
    }))
}

/// Builds `F` for validated parameters.
pub fn construct(ctx: &Arc<FieldCtx>, p: &FamilyParams) -> Result<VBFunction> {
    let report = validate_params(ctx, p)?;
    if !report.is_ok() {
        return Err(Error::InvalidParams(report.to_string()));
    }
    let poly = UnivariatePoly::new(family_terms(ctx, p)?, Elem::ZERO);
    Ok(VBFunction::from_poly(ctx.clone(), poly))
}

/// The full valid parameter space for fixed `(k, s)`, addressable by index
/// so it can be sharded. Order: `u` by log index, then `v`, then `w` by bit
/// pattern.
#[derive(Clone, Debug)]
pub struct ParamSpace {
    k: u32,
    s: u32,
    us: Vec<Elem>,
    vw: Vec<(Elem, Elem)>,
}

impl ParamSpace {
    pub fn new(ctx: &FieldCtx, k: u32, s: u32) -> Result<Self> {
        let bad = ks_violations(k, s);
        if !bad.is_empty() {
            let reason = bad
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::InvalidKS { k, s, reason });
        }
        require_degree(ctx, k)?;
        let us: Vec<Elem> = ctx.primitive_elements().collect();
        let sub = ctx.subfield(k)?;
        let vw = sub
            .iter()
            .flat_map(|&v| sub.iter().map(move |&w| (v, w)))
            .filter(|&(v, w)| ctx.mul(v, w) != Elem::ONE)
            .collect();
        Ok(ParamSpace { k, s, us, vw })
    }

    pub fn len(&self) -> usize {
        self.us.len() * self.vw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> FamilyParams {
        let (v, w) = self.vw[i % self.vw.len()];
        FamilyParams {
            k: self.k,
            s: self.s,
            u: self.us[i / self.vw.len()],
            v,
            w,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = FamilyParams> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

/// Streams all valid `(u, v, w)` for fixed `(k, s)`.
pub fn enumerate_params(
    ctx: &FieldCtx,
    k: u32,
    s: u32,
) -> Result<impl Iterator<Item = FamilyParams>> {
    let space = ParamSpace::new(ctx, k, s)?;
    Ok((0..space.len()).map(move |i| space.get(i)))
}

/// Zero pattern of `(v, w)` at n = 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    Quadrinomial,
    VOnly,
    WOnly,
    Binomial,
}

impl FormTag {
    pub const ALL: [FormTag; 4] = [
        FormTag::Quadrinomial,
        FormTag::VOnly,
        FormTag::WOnly,
        FormTag::Binomial,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FormTag::Quadrinomial => "quadrinomial",
            FormTag::VOnly => "v_only",
            FormTag::WOnly => "w_only",
            FormTag::Binomial => "binomial",
        }
    }

    /// Exponents of the form at n = 6 (k = 2, s = 1).
    pub fn exponents_n6(&self) -> &'static [u32] {
        match self {
            FormTag::Quadrinomial => &[3, 10, 17, 24],
            FormTag::VOnly => &[3, 17, 24],
            FormTag::WOnly => &[3, 10, 24],
            FormTag::Binomial => &[3, 24],
        }
    }
}

pub fn specialize_n6(p: &FamilyParams) -> Result<FormTag> {
    if p.n() != 6 {
        return Err(Error::WrongDegree(p.n()));
    }
    Ok(match (p.v.is_zero(), p.w.is_zero()) {
        (false, false) => FormTag::Quadrinomial,
        (false, true) => FormTag::VOnly,
        (true, false) => FormTag::WOnly,
        (true, true) => FormTag::Binomial,
    })
}

/// Reference functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum KnownFunction {
    Identity,
    /// `x^(2^i + 1)`.
    Gold {
        i: u32,
    },
    /// `x^(2^2i - 2^i + 1)`.
    Kasami {
        i: u32,
    },
    /// `x^(2^t + 3)`, n = 2t + 1.
    Welch,
    /// `x^(2^t + 2^(t/2) - 1)` for even t, `x^(2^t + 2^((3t+1)/2) - 1)` for odd t, n = 2t + 1.
    Niho,
    /// `x^(2^n - 2)`.
    Inverse,
    /// `x^(2^4t + 2^3t + 2^2t + 2^t - 1)`, n = 5t.
    Dobbertin,
    /// `x^3 + x^10 + u x^24` on GF(2^6).
    DillonTrinomial {
        u: Elem,
    },
    /// `x^(2^s + 1) + c^(2^k - 1) x^(2^ik + 2^(mk + s))`, n = 3k, `i = sk mod 3`, `m = 3 - i`,
    /// `c` primitive.
    BcflBinomial {
        s: u32,
        c: Elem,
    },
    /// `x^d`.
    Power {
        d: u32,
    },
}

impl KnownFunction {
    /// Whether the published side conditions make this function APN on
    /// GF(2^n). `None` when the catalog makes no claim.
    pub fn apn_claimed(&self, n: u32) -> Option<bool> {
        match *self {
            KnownFunction::Identity => Some(false),
            KnownFunction::Gold { i } => Some(gcd(i as u64, n as u64) == 1),
            KnownFunction::Kasami { i } => Some(gcd(i as u64, n as u64) == 1),
            KnownFunction::Welch | KnownFunction::Niho => Some(n % 2 == 1),
            KnownFunction::Inverse => Some(n % 2 == 1),
            KnownFunction::Dobbertin => Some(n.is_multiple_of(5)),
            KnownFunction::DillonTrinomial { .. } | KnownFunction::BcflBinomial { .. } => None,
            KnownFunction::Power { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            KnownFunction::Identity => "identity".into(),
            KnownFunction::Gold { i } => format!("gold:{i}"),
            KnownFunction::Kasami { i } => format!("kasami:{i}"),
            KnownFunction::Welch => "welch".into(),
            KnownFunction::Niho => "niho".into(),
            KnownFunction::Inverse => "inverse".into(),
            KnownFunction::Dobbertin => "dobbertin".into(),
            KnownFunction::DillonTrinomial { u } => format!("dillon:0x{:02x}", u.0),
            KnownFunction::BcflBinomial { s, c } => format!("bcfl:{s}:0x{:02x}", c.0),
            KnownFunction::Power { d } => format!("power:{d}"),
        }
    }
}

impl FromStr for KnownFunction {
    type Err = Error;

    /// `identity`, `gold:1`, `kasami:2`, `welch`, `niho`, `inverse`,
    /// `dobbertin`, `dillon:0x05`, `bcfl:1:0x02`, `power:5`.
    fn from_str(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let name = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let args: Vec<u32> = parts.map(parse_int).collect::<Result<_>>()?;
        let arg = |i: usize| {
            args.get(i)
                .copied()
                .ok_or_else(|| Error::Parse(format!("{name} needs {} argument(s)", i + 1)))
        };
        Ok(match name.as_str() {
            "identity" | "id" => KnownFunction::Identity,
            "gold" => KnownFunction::Gold { i: arg(0)? },
            "kasami" | "kasami-welch" => KnownFunction::Kasami { i: arg(0)? },
            "welch" => KnownFunction::Welch,
            "niho" => KnownFunction::Niho,
            "inverse" => KnownFunction::Inverse,
            "dobbertin" => KnownFunction::Dobbertin,
            "dillon" | "dillon_trinomial" => KnownFunction::DillonTrinomial { u: Elem(arg(0)?) },
            "bcfl" | "bcfl_binomial" => KnownFunction::BcflBinomial {
                s: arg(0)?,
                c: Elem(arg(1)?),
            },
            "power" => KnownFunction::Power { d: arg(0)? },
            _ => return Err(Error::Parse(format!("unknown function {text:?}"))),
        })
    }
}

fn unsupported(id: &KnownFunction, n: u32) -> Error {
    Error::UnsupportedOnThisField {
        name: id.label(),
        n,
    }
}

fn power_exp(ctx: &FieldCtx, d: u64) -> Exp {
    let r = (d % ctx.order() as u64) as u32;
    Exp(if r == 0 { ctx.order() } else { r })
}

/// Builds a reference function on `ctx`.
pub fn known(ctx: &Arc<FieldCtx>, id: KnownFunction) -> Result<VBFunction> {
    let n = ctx.n();
    let mono = |d: u64| {
        Ok(VBFunction::from_poly(
            ctx.clone(),
            UnivariatePoly::monomial(power_exp(ctx, d)),
        ))
    };
    match id {
        KnownFunction::Identity => mono(1),
        KnownFunction::Gold { i } => {
            if i == 0 || i >= n {
                return Err(unsupported(&id, n));
            }
            mono((1u64 << i) + 1)
        }
        KnownFunction::Kasami { i } => {
            if i == 0 || i >= n {
                return Err(unsupported(&id, n));
            }
            mono((1u64 << (2 * i)) - (1u64 << i) + 1)
        }
        KnownFunction::Welch => {
            if n.is_multiple_of(2) {
                return Err(unsupported(&id, n));
            }
            let t = (n - 1) / 2;
            mono((1u64 << t) + 3)
        }
        KnownFunction::Niho => {
            if n.is_multiple_of(2) {
                return Err(unsupported(&id, n));
            }
            let t = (n - 1) / 2;
            let e = if t.is_multiple_of(2) {
                (1u64 << t) + (1u64 << (t / 2)) - 1
            } else {
                (1u64 << t) + (1u64 << (3 * t).div_ceil(2)) - 1
            };
            mono(e)
        }
        KnownFunction::Inverse => mono((1u64 << n) - 2),
        KnownFunction::Dobbertin => {
            if !n.is_multiple_of(5) {
                return Err(unsupported(&id, n));
            }
            let t = n / 5;
            mono((1u64 << (4 * t)) + (1u64 << (3 * t)) + (1u64 << (2 * t)) + (1u64 << t) - 1)
        }
        KnownFunction::DillonTrinomial { u } => {
            if n != 6 {
                return Err(unsupported(&id, n));
            }
            ctx.check(u)?;
            let poly = UnivariatePoly::new(
                [
                    Term {
                        coeff: Elem::ONE,
                        exp: Exp(3),
                    },
                    Term {
                        coeff: Elem::ONE,
                        exp: Exp(10),
                    },
                    Term {
                        coeff: u,
                        exp: Exp(24),
                    },
                ],
                Elem::ZERO,
            );
            Ok(VBFunction::from_poly(ctx.clone(), poly))
        }
        KnownFunction::BcflBinomial { s, c } => {
            if !n.is_multiple_of(3) || (n / 3).is_multiple_of(3) || gcd(s as u64, n as u64) != 1 {
                return Err(unsupported(&id, n));
            }
            ctx.check(c)?;
            let k = n / 3;
            let i = (s * k) % 3;
            let m = 3 - i;
            let e2 = exp_residue(n, &[(1, (i * k) as i64), (1, (m * k + s) as i64)], false)?;
            let coeff = ctx.pow(c, (1u64 << k) - 1);
            let poly = UnivariatePoly::new(
                [
                    Term {
                        coeff: Elem::ONE,
                        exp: exp_residue(n, &[(1, s as i64), (1, 0)], false)?,
                    },
                    Term { coeff, exp: e2 },
                ],
                Elem::ZERO,
            );
            Ok(VBFunction::from_poly(ctx.clone(), poly))
        }
        KnownFunction::Power { d } => mono(d as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(n, None).unwrap())
    }

    #[test]
    fn binomial_params_are_valid() {
        let f = field(6);
        let p = FamilyParams {
            k: 2,
            s: 1,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert!(validate_params(&f, &p).unwrap().is_ok());
    }

    #[test]
    fn k_divisible_by_three_rejected() {
        let f = field(9);
        let p = FamilyParams {
            k: 3,
            s: 3,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        let r = validate_params(&f, &p).unwrap();
        assert!(r.violations.contains(&Violation::KDivisibleBy3));
        assert!(r.to_string().contains("(3,k)=1 fails"));
    }

    #[test]
    fn all_violations_reported() {
        let f = field(6);
        let p = FamilyParams {
            k: 2,
            s: 4,
            u: Elem(1),
            v: Elem(1),
            w: Elem(1),
        };
        let r = validate_params(&f, &p).unwrap();
        assert!(r.violations.contains(&Violation::SNotCoprimeTo3K));
        assert!(r.violations.contains(&Violation::UNotPrimitive));
        assert!(r.violations.contains(&Violation::VTimesWIsOne));
        assert!(r.to_string().contains("gcd(s,3k)=1 fails"));
        // 2 is outside GF(4) in this basis
        let gf4 = f.subfield(2).unwrap();
        let outside = f.elements().find(|e| !gf4.contains(e)).unwrap();
        let p = FamilyParams {
            k: 2,
            s: 1,
            u: Elem(2),
            v: outside,
            w: outside,
        };
        let r = validate_params(&f, &p).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::VNotInSubfield, Violation::WNotInSubfield]
        );
    }

    #[test]
    fn degree_mismatch() {
        let f = field(6);
        let p = FamilyParams {
            k: 1,
            s: 2,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert_eq!(
            validate_params(&f, &p),
            Err(Error::FieldMismatch {
                expected: 3,
                actual: 6
            })
        );
    }

    #[test]
    fn n6_exponents_and_coefficients() {
        assert_eq!(
            family_exponents(2, 1).unwrap(),
            [Exp(24), Exp(3), Exp(17), Exp(10)]
        );
        let f = field(6);
        let gf4 = f.subfield(2).unwrap();
        let (u, v, w) = (Elem(2), gf4[2], gf4[2]);
        let p = FamilyParams {
            k: 2,
            s: 1,
            u,
            v,
            w,
        };
        let func = construct(&f, &p).unwrap();
        let poly = func.poly().unwrap();
        assert_eq!(poly.exponents(), vec![3, 10, 17, 24]);
        let coeff = |e: u32| poly.terms().iter().find(|t| t.exp.0 == e).unwrap().coeff;
        assert_eq!(coeff(24), f.pow(u, 4));
        assert_eq!(coeff(3), u);
        assert_eq!(coeff(17), v);
        assert_eq!(coeff(10), f.mul(w, f.pow(u, 5)));
        // F(1) = u^4 + u + v + w u^5
        assert_eq!(
            func.at(Elem::ONE),
            f.pow(u, 4) + u + v + f.mul(w, f.pow(u, 5))
        );
        assert_eq!(func.algebraic_degree(), 2);
    }

    #[test]
    fn zero_coefficients_drop_terms() {
        let f = field(6);
        let p = FamilyParams {
            k: 2,
            s: 1,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert_eq!(
            construct(&f, &p).unwrap().poly().unwrap().exponents(),
            vec![3, 24]
        );
    }

    #[test]
    fn n3_exponents_collide() {
        // 2^-1 = 4 mod 7 and 2^3 = 1 mod 7, so all four exponents are 5
        assert_eq!(family_exponents(1, 2).unwrap(), [Exp(5); 4]);
        let f = field(3);
        for p in enumerate_params(&f, 1, 2).unwrap() {
            let func = construct(&f, &p).unwrap();
            let poly = func.poly().unwrap();
            assert_eq!(poly.terms().len(), 1);
            let raw = family_terms(&f, &p).unwrap();
            for x in f.elements() {
                let sum: Elem = raw
                    .iter()
                    .map(|t| f.mul(t.coeff, f.pow_exp(x, t.exp)))
                    .sum();
                assert_eq!(func.at(x), sum);
            }
        }
    }

    #[test]
    fn invalid_params_refused() {
        let f = field(6);
        let p = FamilyParams {
            k: 2,
            s: 1,
            u: Elem(1),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert!(matches!(construct(&f, &p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn enumeration_sizes() {
        let f6 = field(6);
        let all: Vec<_> = enumerate_params(&f6, 2, 1).unwrap().collect();
        assert_eq!(all.len(), 468);
        assert!(all.iter().all(|p| validate_params(&f6, p).unwrap().is_ok()));
        let f3 = field(3);
        assert_eq!(enumerate_params(&f3, 1, 2).unwrap().count(), 18);
        let f9 = field(9);
        assert!(matches!(
            enumerate_params(&f9, 3, 3),
            Err(Error::InvalidKS { .. })
        ));
        assert!(matches!(
            enumerate_params(&f9, 3, 1),
            Err(Error::InvalidKS { .. })
        ));
    }

    #[test]
    fn enumeration_order() {
        let f6 = field(6);
        let sp = ParamSpace::new(&f6, 2, 1).unwrap();
        let first = sp.get(0);
        assert_eq!(first.u, f6.generator());
        assert_eq!((first.v, first.w), (Elem::ZERO, Elem::ZERO));
        let logs: Vec<u32> = sp.iter().map(|p| f6.log(p.u).unwrap()).collect();
        assert!(logs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn form_tags() {
        let f6 = field(6);
        let mut seen = std::collections::BTreeMap::new();
        for p in enumerate_params(&f6, 2, 1).unwrap() {
            let tag = specialize_n6(&p).unwrap();
            let exps = construct(&f6, &p).unwrap().poly().unwrap().exponents();
            assert_eq!(exps, tag.exponents_n6());
            *seen.entry(tag).or_insert(0) += 1;
        }
        // (v, w) in GF(4)^2 minus vw = 1: 9 both nonzero minus 3, 3 + 3 one zero, 1 both zero
        assert_eq!(seen[&FormTag::Quadrinomial], 36 * 6);
        assert_eq!(seen[&FormTag::VOnly], 36 * 3);
        assert_eq!(seen[&FormTag::WOnly], 36 * 3);
        assert_eq!(seen[&FormTag::Binomial], 36);
        let p3 = FamilyParams {
            k: 1,
            s: 2,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert_eq!(specialize_n6(&p3), Err(Error::WrongDegree(3)));
    }

    #[test]
    fn params_notation() {
        let p: FamilyParams = "k=2,s=1,u=0x02,v=0x00,w=0x03".parse().unwrap();
        assert_eq!(
            p,
            FamilyParams {
                k: 2,
                s: 1,
                u: Elem(2),
                v: Elem(0),
                w: Elem(3)
            }
        );
        assert_eq!(p.to_string(), "k=2,s=1,u=0x02,v=0x00,w=0x03");
        assert!("k=2,s=1".parse::<FamilyParams>().is_err());
        assert!("k=2,s=1,u=2,z=1".parse::<FamilyParams>().is_err());
    }

    #[test]
    fn catalog() {
        let f6 = field(6);
        let g = known(&f6, KnownFunction::Gold { i: 1 }).unwrap();
        assert_eq!(g.poly().unwrap().exponents(), vec![3]);
        let d = known(&f6, KnownFunction::DillonTrinomial { u: Elem(2) }).unwrap();
        assert_eq!(d.poly().unwrap().exponents(), vec![3, 10, 24]);
        let f3 = field(3);
        let inv = known(&f3, KnownFunction::Inverse).unwrap();
        assert_eq!(inv.poly().unwrap().exponents(), vec![6]);
        for x in f3.elements() {
            let expect = if x.is_zero() {
                Elem::ZERO
            } else {
                f3.inv(x).unwrap()
            };
            assert_eq!(inv.at(x), expect);
        }
        assert!(known(&f6, KnownFunction::Welch).is_err());
        assert!(known(&f3, KnownFunction::DillonTrinomial { u: Elem(2) }).is_err());
        assert!(known(&f6, KnownFunction::Dobbertin).is_err());
        let f5 = field(5);
        assert!(known(&f5, KnownFunction::Dobbertin).is_ok());
        assert_eq!(
            known(&f5, KnownFunction::Welch)
                .unwrap()
                .poly()
                .unwrap()
                .exponents(),
            vec![7]
        );
    }

    #[test]
    fn known_ids_parse() {
        assert_eq!(
            "gold:2".parse::<KnownFunction>().unwrap(),
            KnownFunction::Gold { i: 2 }
        );
        assert_eq!(
            "identity".parse::<KnownFunction>().unwrap(),
            KnownFunction::Identity
        );
        assert_eq!(
            "dillon:0x05".parse::<KnownFunction>().unwrap(),
            KnownFunction::DillonTrinomial { u: Elem(5) }
        );
        assert!("gold".parse::<KnownFunction>().is_err());
        assert!("nope".parse::<KnownFunction>().is_err());
        for id in [
            KnownFunction::Gold { i: 3 },
            KnownFunction::BcflBinomial { s: 1, c: Elem(2) },
        ] {
            assert_eq!(id.label().parse::<KnownFunction>().unwrap(), id);
        }
    }
}
