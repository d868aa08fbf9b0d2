//! Step-by-step replay of the APN argument for the quadrinomial family at
//! concrete parameters.
//!
//! After substituting `x -> xq`, the difference map of `F` becomes
//!
//! ```text
//! Δ(x) = A x + B x^(2^-k) + C x^(2^s) + D x^(2^(k+s))
//! A = v q^(2^-k+1) + u q^(2^s+1)
//! B = v q^(2^-k+1) + u^(2^k) q^(2^-k+2^(k+s))
//! C = w u^(2^k+1) q^(2^(k+s)+2^s) + u q^(2^s+1)
//! D = w u^(2^k+1) q^(2^(k+s)+2^s) + u^(2^k) q^(2^-k+2^(k+s))
//! ```
//!
//! and `F` is APN iff `Δ` has only the roots 0 and 1 for every `q != 0`.
//! The argument goes through the annihilator
//! `L_θ(T) = T + θ T^(2^k) + θ^(2^k+1) T^(2^-k)` and the quantity
//! `a = u^(2^k-1) q^(2^-k+2^(k+s)-2^s-1)`; every intermediate claim is
//! checked here over all `q`.
//!
//! Two reduced equations are derived from `Δ`, named reduced-eq-A and
//! reduced-eq-B:
//!
//! ```text
//! A: (1 + a^(-2^(k-s))) x + (a^(2^-s) + a^(-2^(k-s))) x^(2^k) + (1 + a^(2^-s)) x^(2^-k)
//! B: (1 + a^(-2^-k)) x + (1 + a) x^(2^k) + (a + a^(-2^-k)) x^(2^-k)
//! ```
//!
//! reduced-eq-A is a constant multiple of `L_{A/B}(Δ/B)^(2^-s)` and
//! reduced-eq-B a constant multiple of `L_{D/C}(Δ/C)`; both proportionalities
//! are verified pointwise.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::diff_uniformity_quadratic;
use crate::error::{Error, Result};
use crate::family::{family_terms, FamilyParams};
use crate::field::{exp_residue, Elem, FieldCtx, FieldSpec};
use crate::function::{UnivariatePoly, VBFunction};
use crate::par;

pub const REDUCED_EQ_A: &str =
    "(1+a^{-2^{k-s}})x+(a^{2^{-s}}+a^{-2^{k-s}})x^{2^k}+(1+a^{2^{-s}})x^{2^{-k}}";
pub const REDUCED_EQ_B: &str = "(1+a^{-2^{-k}})x+(1+a)x^{2^k}+(a+a^{-2^{-k}})x^{2^{-k}}";
pub const COMBINED_COEFFICIENT: &str =
    "(1+a^{-2^{k-s}})(a+a^{-2^{-k}})+(1+a^{-2^{-k}})(1+a^{2^{-s}})";

/// Coefficients of `Δ` for one `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCoefficients {
    pub q: Elem,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

/// `a` computed from both exponent formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AValue {
    pub direct: Elem,
    pub factored: Elem,
    pub seventh_power: bool,
}

/// Failing instance of a check. Every populated field is needed to re-run it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Number of instances checked (q values, θ values, ...).
    pub instances: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub field: FieldSpec,
    pub params: FamilyParams,
    pub checks: Vec<CheckResult>,
}

impl ProofReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `L_θ(T) = T + θ T^(2^k) + θ^(2^k+1) T^(2^-k)`.
pub fn l_theta(ctx: &FieldCtx, theta: Elem, k: u32, t: Elem) -> Elem {
    let k = k as i64;
    let theta_2k1 = ctx.mul(theta, ctx.frobenius(theta, k));
    t + ctx.mul(theta, ctx.frobenius(t, k)) + ctx.mul(theta_2k1, ctx.frobenius(t, -k))
}

/// First `x` with `L_θ(θx + x^(2^-k)) != 0`, or `None` if it vanishes on the
/// whole field.
pub fn l_theta_annihilation(ctx: &FieldCtx, theta: Elem, k: u32) -> Option<Elem> {
    ctx.elements().find(|&x| {
        !l_theta(
            ctx,
            theta,
            k,
            ctx.mul(theta, x) + ctx.frobenius(x, -(k as i64)),
        )
        .is_zero()
    })
}

/// Names of the per-q checks in report order.
const Q_CHECKS: [&str; 15] = [
    "delta-sum-zero",
    "coefficients-nonzero",
    "delta-matches-difference-map",
    "a-exponent-formulas-agree",
    "a-not-seventh-power",
    "a-not-one",
    "ratio-ab-closed-form",
    "ratio-cd-closed-form",
    "reduced-eq-a-derivation",
    "reduced-eq-b-derivation",
    "reduced-equations-on-kernel",
    "combined-coefficient-nonzero",
    "delta-kernel-in-subfield",
    "delta-kernel-is-0-1",
    "kernel-size-matches-linear-verifier",
];

fn qidx(name: &str) -> usize {
    Q_CHECKS
        .iter()
        .position(|&c| c == name)
        .expect("known check")
}

/// Precomputed data for one parameter tuple.
#[derive(Clone, Debug)]
pub struct ProofSetting {
    ctx: Arc<FieldCtx>,
    params: FamilyParams,
    /// `x^(2^-k)`, `x^(2^s)`, `x^(2^(k+s))`, `x^(2^k)` by table.
    frob_neg_k: Vec<Elem>,
    frob_s: Vec<Elem>,
    frob_ks: Vec<Elem>,
    frob_k: Vec<Elem>,
    frob_neg_s: Vec<Elem>,
    e_k1: u64,
    e_s1: u64,
    e_kks: u64,
    e_kss: u64,
    e_a_direct: u64,
    e_a_factored: u64,
    e_ab: u64,
    e_cd: u64,
    u_2k: Elem,
    w_u_2k1: Elem,
    u_2k_minus_1: Elem,
    f: VBFunction,
}

impl ProofSetting {
    /// Accepts any parameters on GF(2^{3k}), valid or not; the checks are
    /// only claimed to pass for valid ones.
    pub fn new(ctx: &Arc<FieldCtx>, params: FamilyParams) -> Result<Self> {
        let n = ctx.n();
        if params.k == 0 || n != 3 * params.k {
            return Err(Error::FieldMismatch {
                expected: 3 * params.k,
                actual: n,
            });
        }
        for e in [params.u, params.v, params.w] {
            ctx.check(e)?;
        }
        let (k, s) = (params.k as i64, params.s as i64);
        let order = ctx.order() as i128;
        let res = |t: &[(i64, i64)]| -> Result<u64> { Ok(exp_residue(n, t, true)?.0 as u64) };
        let frob = |j: i64| {
            ctx.elements()
                .map(|x| ctx.frobenius(x, j))
                .collect::<Vec<_>>()
        };
        // (2^(k+s) - 1)(1 - 2^-k)
        let p2 = |t: i64| crate::field::pow2_mod(n, t) as i128;
        let fact = ((p2(k + s) - 1) * (1 - p2(-k))).rem_euclid(order);
        let u_2k = ctx.frobenius(params.u, k);
        let poly = UnivariatePoly::new(family_terms(ctx, &params)?, Elem::ZERO);
        Ok(ProofSetting {
            ctx: ctx.clone(),
            params,
            frob_neg_k: frob(-k),
            frob_s: frob(s),
            frob_ks: frob(k + s),
            frob_k: frob(k),
            frob_neg_s: frob(-s),
            e_k1: res(&[(1, -k), (1, 0)])?,
            e_s1: res(&[(1, s), (1, 0)])?,
            e_kks: res(&[(1, -k), (1, k + s)])?,
            e_kss: res(&[(1, k + s), (1, s)])?,
            e_a_direct: res(&[(1, -k), (1, k + s), (-1, s), (-1, 0)])?,
            e_a_factored: if fact == 0 { order as u64 } else { fact as u64 },
            e_ab: res(&[(1, s), (-1, -k)])?,
            e_cd: res(&[(1, -k), (-1, s)])?,
            u_2k,
            w_u_2k1: ctx.mul(params.w, ctx.mul(u_2k, params.u)),
            u_2k_minus_1: ctx.pow(params.u, (1u64 << params.k) - 1),
            f: VBFunction::from_poly(ctx.clone(), poly),
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    /// The family member for these parameters (built without validation).
    pub fn function(&self) -> &VBFunction {
        &self.f
    }

    pub fn delta_coefficients(&self, q: Elem) -> Result<DeltaCoefficients> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        let ctx = &*self.ctx;
        let p = &self.params;
        let t_v = ctx.mul(p.v, ctx.pow(q, self.e_k1));
        let t_u = ctx.mul(p.u, ctx.pow(q, self.e_s1));
        let t_u2k = ctx.mul(self.u_2k, ctx.pow(q, self.e_kks));
        let t_w = ctx.mul(self.w_u_2k1, ctx.pow(q, self.e_kss));
        Ok(DeltaCoefficients {
            q,
            a: t_v + t_u,
            b: t_v + t_u2k,
            c: t_w + t_u,
            d: t_w + t_u2k,
        })
    }

    #[inline]
    pub fn delta(&self, dc: &DeltaCoefficients, x: Elem) -> Elem {
        let ctx = &*self.ctx;
        let i = x.0 as usize;
        ctx.mul(dc.a, x)
            + ctx.mul(dc.b, self.frob_neg_k[i])
            + ctx.mul(dc.c, self.frob_s[i])
            + ctx.mul(dc.d, self.frob_ks[i])
    }

    pub fn compute_a(&self, q: Elem) -> Result<AValue> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        let ctx = &*self.ctx;
        let direct = ctx.mul(self.u_2k_minus_1, ctx.pow(q, self.e_a_direct));
        let factored = ctx.mul(self.u_2k_minus_1, ctx.pow(q, self.e_a_factored));
        let seventh_power =
            ctx.order().is_multiple_of(7) && ctx.pow(direct, (ctx.order() / 7) as u64) == Elem::ONE;
        Ok(AValue {
            direct,
            factored,
            seventh_power,
        })
    }

    /// All roots of `Δ` by exhaustive search.
    pub fn delta_kernel(&self, q: Elem) -> Result<Vec<Elem>> {
        let dc = self.delta_coefficients(q)?;
        Ok(self
            .ctx
            .elements()
            .filter(|&x| self.delta(&dc, x).is_zero())
            .collect())
    }

    /// `(eqA(x), eqB(x))` for the reduced equations.
    fn reduced_eqs(&self, a: Elem) -> impl Fn(Elem) -> (Elem, Elem) + '_ {
        let ctx = &*self.ctx;
        let (k, s) = (self.params.k as i64, self.params.s as i64);
        let ai = ctx.inv(a).expect("a is nonzero for q != 0");
        let one = Elem::ONE;
        let ai_ks = ctx.frobenius(ai, k - s);
        let a_s = ctx.frobenius(a, -s);
        let ai_k = ctx.frobenius(ai, -k);
        let ca = [one + ai_ks, a_s + ai_ks, one + a_s];
        let cb = [one + ai_k, one + a, a + ai_k];
        move |x| {
            let i = x.0 as usize;
            let terms = [x, self.frob_k[i], self.frob_neg_k[i]];
            let ea = (0..3).map(|j| ctx.mul(ca[j], terms[j])).sum();
            let eb = (0..3).map(|j| ctx.mul(cb[j], terms[j])).sum();
            (ea, eb)
        }
    }

    pub fn combined_coefficient(&self, a: Elem) -> Elem {
        let ctx = &*self.ctx;
        let (k, s) = (self.params.k as i64, self.params.s as i64);
        let ai = ctx.inv(a).expect("a is nonzero");
        let one = Elem::ONE;
        let ai_ks = ctx.frobenius(ai, k - s);
        let ai_k = ctx.frobenius(ai, -k);
        let a_s = ctx.frobenius(a, -s);
        ctx.mul(one + ai_ks, a + ai_k) + ctx.mul(one + ai_k, one + a_s)
    }

    /// Every per-q check for one `q`; entry `i` is the counterexample for
    /// `Q_CHECKS[i]`, `None` when it passes.
    fn check_q(&self, q: Elem, linear_kernel: Option<u32>) -> Vec<Option<Counterexample>> {
        let ctx = &*self.ctx;
        let k = self.params.k;
        let mut out: Vec<Option<Counterexample>> = vec![None; Q_CHECKS.len()];
        let at_q = |detail: &str, value: Option<Elem>, x: Option<Elem>| Counterexample {
            q: Some(q),
            x,
            value,
            detail: Some(detail.to_string()),
        };
        let dc = self.delta_coefficients(q).expect("q != 0");

        if !(dc.a + dc.b + dc.c + dc.d).is_zero() {
            out[qidx("delta-sum-zero")] =
                Some(at_q("A+B+C+D", Some(dc.a + dc.b + dc.c + dc.d), None));
        }
        let zero_coeff = [("A", dc.a), ("B", dc.b), ("C", dc.c), ("D", dc.d)]
            .into_iter()
            .find(|(_, c)| c.is_zero());
        if let Some((name, _)) = zero_coeff {
            out[qidx("coefficients-nonzero")] = Some(at_q(&format!("{name} = 0"), None, None));
        }

        // Δ(x) = F(xq + q) + F(xq) + F(q)
        let fq = self.f.at(q);
        let deltas: Vec<Elem> = ctx.elements().map(|x| self.delta(&dc, x)).collect();
        let mut kernel = Vec::new();
        for x in ctx.elements() {
            let dx = deltas[x.0 as usize];
            let xq = ctx.mul(x, q);
            let direct = self.f.at(xq + q) + self.f.at(xq) + fq;
            if dx != direct && out[qidx("delta-matches-difference-map")].is_none() {
                out[qidx("delta-matches-difference-map")] =
                    Some(at_q("Δ(x) != F(xq+q)+F(xq)+F(q)", Some(dx), Some(x)));
            }
            if dx.is_zero() {
                kernel.push(x);
            }
        }

        let av = self.compute_a(q).expect("q != 0");
        let a = av.direct;
        if av.direct != av.factored {
            out[qidx("a-exponent-formulas-agree")] =
                Some(at_q("direct != factored", Some(av.factored), None));
        }
        if av.seventh_power {
            out[qidx("a-not-seventh-power")] = Some(at_q("a is a 7th power", Some(a), None));
        }
        if a == Elem::ONE {
            out[qidx("a-not-one")] = Some(at_q("a = 1", Some(a), None));
        }

        // A/B = (v + u q^(2^s - 2^-k))^(1 - 2^k)
        let base_ab = self.params.v + ctx.mul(self.params.u, ctx.pow(q, self.e_ab));
        let e_1_minus_2k = (1 - (1i64 << k)).rem_euclid(ctx.order() as i64);
        let closed_ab = ctx.pow(base_ab, e_1_minus_2k as u64);
        let ratio_ab = if dc.b.is_zero() {
            None
        } else {
            Some(ctx.div(dc.a, dc.b).unwrap())
        };
        if base_ab.is_zero() || ratio_ab != Some(closed_ab) {
            out[qidx("ratio-ab-closed-form")] = Some(at_q("A/B != closed form", ratio_ab, None));
        }
        // C/D = (w + u^-1 q^(2^-k - 2^s))^(2^k - 1)
        let ui = ctx.inv(self.params.u).unwrap_or(Elem::ZERO);
        let base_cd = self.params.w + ctx.mul(ui, ctx.pow(q, self.e_cd));
        let closed_cd = ctx.pow(base_cd, (1u64 << k) - 1);
        let ratio_cd = if dc.d.is_zero() {
            None
        } else {
            Some(ctx.div(dc.c, dc.d).unwrap())
        };
        if base_cd.is_zero() || ratio_cd != Some(closed_cd) {
            out[qidx("ratio-cd-closed-form")] = Some(at_q("C/D != closed form", ratio_cd, None));
        }

        if a.is_zero() {
            for name in [
                "reduced-eq-a-derivation",
                "reduced-eq-b-derivation",
                "reduced-equations-on-kernel",
                "combined-coefficient-nonzero",
            ] {
                out[qidx(name)] = Some(at_q("a = 0", Some(a), None));
            }
        } else {
            let eqs = self.reduced_eqs(a);
            if let (Some(th_ab), Some(th_dc), false, false) = (
                ratio_ab,
                if dc.c.is_zero() {
                    None
                } else {
                    Some(ctx.div(dc.d, dc.c).unwrap())
                },
                dc.b.is_zero(),
                dc.c.is_zero(),
            ) {
                let (bi, ci) = (ctx.inv(dc.b).unwrap(), ctx.inv(dc.c).unwrap());
                // l_theta through the Frobenius tables
                let lt = |theta: Elem, t: Elem| {
                    let th21 = ctx.mul(theta, self.frob_k[theta.0 as usize]);
                    let i = t.0 as usize;
                    t + ctx.mul(theta, self.frob_k[i]) + ctx.mul(th21, self.frob_neg_k[i])
                };
                let lhs_a = |x: Elem| {
                    let d = ctx.mul(deltas[x.0 as usize], bi);
                    self.frob_neg_s[lt(th_ab, d).0 as usize]
                };
                let lhs_b = |x: Elem| lt(th_dc, ctx.mul(deltas[x.0 as usize], ci));
                let (eq_a, eq_b): (Vec<Elem>, Vec<Elem>) = ctx.elements().map(&eqs).unzip();
                if let Some(x) = proportionality_failure(ctx, lhs_a, |x| eq_a[x.0 as usize]) {
                    out[qidx("reduced-eq-a-derivation")] = Some(at_q(REDUCED_EQ_A, None, Some(x)));
                }
                if let Some(x) = proportionality_failure(ctx, lhs_b, |x| eq_b[x.0 as usize]) {
                    out[qidx("reduced-eq-b-derivation")] = Some(at_q(REDUCED_EQ_B, None, Some(x)));
                }
            } else {
                let c = at_q("a coefficient of Δ vanishes", None, None);
                out[qidx("reduced-eq-a-derivation")] = Some(c.clone());
                out[qidx("reduced-eq-b-derivation")] = Some(c);
            }

            if let Some(&x) = kernel.iter().find(|&&x| {
                let (ea, eb) = eqs(x);
                !ea.is_zero() || !eb.is_zero()
            }) {
                out[qidx("reduced-equations-on-kernel")] = Some(at_q(
                    "reduced equation nonzero on a root of Δ",
                    None,
                    Some(x),
                ));
            }
            if self.combined_coefficient(a).is_zero() {
                out[qidx("combined-coefficient-nonzero")] =
                    Some(at_q(COMBINED_COEFFICIENT, Some(a), None));
            }
        }
        if let Some(&x) = kernel.iter().find(|&&x| self.frob_k[x.0 as usize] != x) {
            out[qidx("delta-kernel-in-subfield")] =
                Some(at_q("root outside GF(2^k)", None, Some(x)));
        }
        if kernel != [Elem::ZERO, Elem::ONE] {
            let extra = kernel.iter().copied().find(|x| x.0 > 1);
            out[qidx("delta-kernel-is-0-1")] = Some(at_q(
                &format!("kernel has {} elements", kernel.len()),
                None,
                extra,
            ));
        }
        if let Some(lk) = linear_kernel {
            if lk as usize != kernel.len() {
                out[qidx("kernel-size-matches-linear-verifier")] = Some(at_q(
                    &format!("linear verifier {lk}, exhaustive {}", kernel.len()),
                    None,
                    None,
                ));
            }
        }
        out
    }

    fn collect(
        &self,
        names: &[&str],
        qs: &[Elem],
        per_q: &[Vec<Option<Counterexample>>],
    ) -> Vec<CheckResult> {
        names
            .iter()
            .map(|&name| {
                let i = qidx(name);
                let counterexample = per_q.iter().find_map(|r| r[i].clone());
                CheckResult {
                    name: name.to_string(),
                    pass: counterexample.is_none(),
                    instances: qs.len() as u64,
                    counterexample,
                }
            })
            .collect()
    }

    fn sweep(&self) -> (Vec<Elem>, Vec<Vec<Option<Counterexample>>>) {
        let size = self.ctx.size();
        let linear = if self.f.algebraic_degree() <= 2 {
            diff_uniformity_quadratic(&self.f)
                .ok()
                .map(|r| r.kernel_sizes)
        } else {
            None
        };
        let qs: Vec<Elem> = (1..size as u32).map(Elem).collect();
        let per_q = par::map(0..qs.len(), |i| {
            self.check_q(qs[i], linear.as_ref().map(|l| l[i]))
        });
        (qs, per_q)
    }

    fn report(&self, checks: Vec<CheckResult>) -> ProofReport {
        ProofReport {
            field: self.ctx.spec(),
            params: self.params,
            checks,
        }
    }

    /// Sweep of all `q != 0` for nonvanishing of `A, B, C, D`.
    pub fn check_nonvanishing(&self) -> ProofReport {
        let qs: Vec<Elem> = (1..self.ctx.size() as u32).map(Elem).collect();
        let first = qs.iter().find_map(|&q| {
            let dc = self.delta_coefficients(q).ok()?;
            [("A", dc.a), ("B", dc.b), ("C", dc.c), ("D", dc.d)]
                .into_iter()
                .find(|(_, c)| c.is_zero())
                .map(|(name, _)| Counterexample {
                    q: Some(q),
                    detail: Some(format!("{name} = 0")),
                    ..Default::default()
                })
        });
        self.report(vec![CheckResult {
            name: "coefficients-nonzero".into(),
            pass: first.is_none(),
            instances: qs.len() as u64,
            counterexample: first,
        }])
    }

    /// The reduced-equation checks for one `q`.
    pub fn check_reduced_equations(&self, q: Elem) -> Result<ProofReport> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        let per_q = vec![self.check_q(q, None)];
        let names = [
            "reduced-eq-a-derivation",
            "reduced-eq-b-derivation",
            "reduced-equations-on-kernel",
            "combined-coefficient-nonzero",
        ];
        Ok(self.report(self.collect(&names, &[q], &per_q)))
    }

    /// Runs the full suite: every per-q check over all `q != 0`, plus the
    /// annihilation identity for `theta_samples` seeded random θ that are
    /// `(2^k - 1)`-th powers.
    pub fn run(&self, theta_samples: usize, seed: u64) -> ProofReport {
        let (qs, per_q) = self.sweep();
        let mut checks = self.collect(&Q_CHECKS, &qs, &per_q);
        checks.push(self.theta_check(theta_samples, seed));
        self.report(checks)
    }

    fn theta_check(&self, samples: usize, seed: u64) -> CheckResult {
        let ctx = &*self.ctx;
        let k = self.params.k;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thetas: Vec<Elem> = (0..samples)
            .map(|_| {
                let y = Elem(rng.gen_range(1..ctx.size() as u32));
                ctx.pow(y, (1u64 << k) - 1)
            })
            .collect();
        let fails = par::map(0..thetas.len(), |i| {
            l_theta_annihilation(ctx, thetas[i], k).map(|x| (thetas[i], x))
        });
        let first = fails
            .into_iter()
            .flatten()
            .next()
            .map(|(t, x)| Counterexample {
                x: Some(x),
                value: Some(t),
                detail: Some("L_θ(θx + x^(2^-k)) != 0".into()),
                ..Default::default()
            });
        CheckResult {
            name: "l-theta-annihilation".into(),
            pass: first.is_none(),
            instances: samples as u64,
            counterexample: first,
        }
    }
}

/// First `x` where `lhs(x) != c * rhs(x)` for every nonzero constant `c`, or
/// `None` when such a `c` exists.
fn proportionality_failure(
    ctx: &FieldCtx,
    lhs: impl Fn(Elem) -> Elem,
    rhs: impl Fn(Elem) -> Elem,
) -> Option<Elem> {
    let mut ratio: Option<Elem> = None;
    for x in ctx.elements() {
        let (l, r) = (lhs(x), rhs(x));
        if r.is_zero() {
            if !l.is_zero() {
                return Some(x);
            }
            continue;
        }
        let c = ctx.div(l, r).expect("r != 0");
        if c.is_zero() {
            return Some(x);
        }
        match ratio {
            None => ratio = Some(c),
            Some(prev) if prev != c => return Some(x),
            _ => {}
        }
    }
    None
}

/// Full proof-step report for one tuple.
pub fn proofcheck(
    ctx: &Arc<FieldCtx>,
    params: FamilyParams,
    theta_samples: usize,
    seed: u64,
) -> Result<ProofReport> {
    Ok(ProofSetting::new(ctx, params)?.run(theta_samples, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::ParamSpace;

    fn setting(n: u32, k: u32, s: u32, idx: usize) -> ProofSetting {
        let ctx = Arc::new(FieldCtx::new(n, None).unwrap());
        let p = ParamSpace::new(&ctx, k, s).unwrap().get(idx);
        ProofSetting::new(&ctx, p).unwrap()
    }

    #[test]
    fn q_one_collapses() {
        let st = setting(6, 2, 1, 100);
        let ctx = st.field().clone();
        let p = *st.params();
        let dc = st.delta_coefficients(Elem::ONE).unwrap();
        let u4 = ctx.pow(p.u, 4);
        let wu5 = ctx.mul(p.w, ctx.pow(p.u, 5));
        assert_eq!(dc.a, p.v + p.u);
        assert_eq!(dc.b, p.v + u4);
        assert_eq!(dc.c, wu5 + p.u);
        assert_eq!(dc.d, wu5 + u4);
        assert_eq!(st.delta_coefficients(Elem::ZERO), Err(Error::ZeroQ));
        assert_eq!(st.compute_a(Elem::ZERO), Err(Error::ZeroQ));
    }

    #[test]
    fn delta_matches_difference_map_oracle() {
        let st = setting(6, 2, 1, 211);
        let ctx = st.field().clone();
        // independent evaluation through the combined polynomial
        let poly = st.function().poly().unwrap().clone();
        for q in ctx.elements().skip(1) {
            let dc = st.delta_coefficients(q).unwrap();
            assert!((dc.a + dc.b + dc.c + dc.d).is_zero());
            for x in ctx.elements() {
                let xq = ctx.mul(x, q);
                let expect = poly.eval(&ctx, xq + q) + poly.eval(&ctx, xq) + poly.eval(&ctx, q);
                assert_eq!(st.delta(&dc, x), expect);
            }
            assert!(st.delta(&dc, Elem::ZERO).is_zero());
            assert!(st.delta(&dc, Elem::ONE).is_zero());
        }
    }

    #[test]
    fn a_exponent_at_n6() {
        let st = setting(6, 2, 1, 0);
        assert_eq!(st.e_a_direct, 21);
        assert_eq!(st.e_a_factored, 21);
    }

    #[test]
    fn l_theta_examples() {
        let ctx = FieldCtx::new(6, None).unwrap();
        assert_eq!(l_theta_annihilation(&ctx, Elem::ONE, 2), None);
        let theta = ctx.pow(ctx.generator(), 3);
        assert_eq!(l_theta_annihilation(&ctx, theta, 2), None);
        // the generator itself is not a 3rd power in GF(64)
        assert!(l_theta_annihilation(&ctx, ctx.generator(), 2).is_some());
    }

    #[test]
    fn full_report_passes_n6_sample() {
        let st = setting(6, 2, 1, 300);
        let r = st.run(50, 1);
        assert!(
            r.all_pass(),
            "{:#?}",
            r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
        assert_eq!(r.checks.len(), Q_CHECKS.len() + 1);
        assert_eq!(r.check("delta-kernel-is-0-1").unwrap().instances, 63);
    }

    #[test]
    fn reduced_equation_report() {
        let st = setting(6, 2, 1, 17);
        let r = st.check_reduced_equations(Elem(9)).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.checks.len(), 4);
        let (ea, eb) = (st.reduced_eqs(st.compute_a(Elem(9)).unwrap().direct))(Elem::ZERO);
        assert!(ea.is_zero() && eb.is_zero());
    }

    #[test]
    fn non_primitive_u_recorded_not_asserted() {
        let ctx = Arc::new(FieldCtx::new(6, None).unwrap());
        let p = FamilyParams {
            k: 2,
            s: 1,
            u: Elem::ONE,
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        let st = ProofSetting::new(&ctx, p).unwrap();
        let r = st.check_nonvanishing();
        assert_eq!(r.checks.len(), 1);
        if let Some(c) = &r.checks[0].counterexample {
            // the counterexample re-verifies
            let dc = st.delta_coefficients(c.q.unwrap()).unwrap();
            assert!([dc.a, dc.b, dc.c, dc.d].iter().any(|e| e.is_zero()));
        }
        // F = x^3 + x^24 = x^3 + (x^3)^8: its kernel at q = 1 is larger than {0, 1}
        let full = st.run(5, 0);
        assert!(!full.check("delta-kernel-is-0-1").unwrap().pass);
    }

    #[test]
    fn counterexample_for_wrong_degree() {
        let ctx = Arc::new(FieldCtx::new(6, None).unwrap());
        let p = FamilyParams {
            k: 1,
            s: 2,
            u: Elem(2),
            v: Elem::ZERO,
            w: Elem::ZERO,
        };
        assert!(matches!(
            ProofSetting::new(&ctx, p),
            Err(Error::FieldMismatch { .. })
        ));
    }
}
