//! End-to-end runs over the family and the serialized reports they produce.
//!
//! Every report is wrapped in a [`Report`] envelope carrying the tool
//! version, the field and an echo of the inputs. Nothing time- or
//! thread-dependent is recorded, so a fixed input gives identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{verify, Method, Verification};
use crate::code::{
    compare_bundles, invariant_bundle, linearized_factor_check, EquivalenceVerdict, InvariantBundle,
};
use crate::error::{Error, Result};
use crate::family::{
    construct, known, specialize_n6, FamilyParams, FormTag, KnownFunction, ParamSpace,
};
use crate::field::{Elem, Exp, FieldCtx};
use crate::io::FieldDescriptor;
use crate::par;
use crate::proof::proofcheck;

pub const TOOL: &str = "quadapn";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Common envelope: `{"tool", "version", "field", "input", ...body}`.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub field: FieldDescriptor,
    pub input: serde_json::Value,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(ctx: &FieldCtx, input: serde_json::Value, body: T) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            field: ctx.spec().into(),
            input,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `count` distinct tuples of `space`, drawn with a seeded RNG and returned
/// in enumeration order.
pub fn sample_params(space: &ParamSpace, count: usize, seed: u64) -> Vec<FamilyParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, space.len(), count.min(space.len())).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| space.get(i)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleOutcome {
    pub params: String,
    pub verification: Option<Verification>,
    pub error: Option<String>,
}

impl TupleOutcome {
    pub fn is_apn(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| v.is_apn())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySweep {
    pub method: Method,
    pub tuples: usize,
    pub apn: usize,
    /// Outcomes that are not APN, in input order.
    pub failures: Vec<TupleOutcome>,
}

impl FamilySweep {
    pub fn all_apn(&self) -> bool {
        self.apn == self.tuples && self.tuples > 0
    }
}

fn verify_tuple(ctx: &Arc<FieldCtx>, p: &FamilyParams, method: Method) -> TupleOutcome {
    let res = construct(ctx, p).and_then(|f| verify(&f, method));
    match res {
        Ok(v) => TupleOutcome {
            params: p.to_string(),
            verification: Some(v),
            error: None,
        },
        Err(e) => TupleOutcome {
            params: p.to_string(),
            verification: None,
            error: Some(e.to_string()),
        },
    }
}

/// Verifies every tuple with `method`. Parallel across tuples.
pub fn sweep_params(ctx: &Arc<FieldCtx>, params: &[FamilyParams], method: Method) -> FamilySweep {
    let outcomes = par::map(0..params.len(), |i| verify_tuple(ctx, &params[i], method));
    let apn = outcomes.iter().filter(|o| o.is_apn()).count();
    FamilySweep {
        method,
        tuples: outcomes.len(),
        apn,
        failures: outcomes.into_iter().filter(|o| !o.is_apn()).collect(),
    }
}

pub fn sweep_family(ctx: &Arc<FieldCtx>, k: u32, s: u32, method: Method) -> Result<FamilySweep> {
    let space = ParamSpace::new(ctx, k, s)?;
    let params: Vec<FamilyParams> = space.iter().collect();
    Ok(sweep_params(ctx, &params, method))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofFailure {
    pub params: String,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofSweep {
    pub tuples: usize,
    pub theta_samples: usize,
    pub seed: u64,
    /// Check name -> total instances examined, summed over tuples.
    pub instances: BTreeMap<String, u64>,
    pub failures: Vec<ProofFailure>,
}

impl ProofSweep {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.tuples > 0
    }
}

/// Proof-step suite over many tuples. Tuple `i` uses seed `seed + i` for
/// its θ samples.
pub fn proof_sweep(
    ctx: &Arc<FieldCtx>,
    params: &[FamilyParams],
    theta_samples: usize,
    seed: u64,
) -> Result<ProofSweep> {
    let reports = par::map(0..params.len(), |i| {
        proofcheck(ctx, params[i], theta_samples, seed.wrapping_add(i as u64))
    });
    let mut instances = BTreeMap::new();
    let mut failures = Vec::new();
    for (p, r) in params.iter().zip(reports) {
        let r = r?;
        for c in &r.checks {
            *instances.entry(c.name.clone()).or_insert(0) += c.instances;
        }
        let bad: Vec<String> = r
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        if !bad.is_empty() {
            failures.push(ProofFailure {
                params: p.to_string(),
                checks: bad,
            });
        }
    }
    Ok(ProofSweep {
        tuples: params.len(),
        theta_samples,
        seed,
        instances,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSummary {
    pub form: FormTag,
    pub tuples: usize,
    pub expected_exponents: Vec<u32>,
    /// Distinct exponent sets seen among the constructed polynomials.
    pub observed_exponents: Vec<Vec<u32>>,
    pub representative: String,
    /// Distinct bundle hashes over all tuples of the form.
    pub bundle_hashes: Vec<String>,
}

impl FormSummary {
    pub fn exponents_match(&self) -> bool {
        self.observed_exponents == [self.expected_exponents.clone()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DillonSearch {
    pub searched: usize,
    pub apn_u: Vec<Elem>,
    pub chosen: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedBundle {
    pub label: String,
    pub hash: String,
    pub bundle: InvariantBundle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearWitness {
    pub params: String,
    pub exponent: u32,
    /// Row bitmasks of `L` in hex, row `i` giving output bit `i`.
    pub rows: Option<Vec<String>>,
    pub invertible: bool,
    /// Points `x` with `F(x) = L(x^3)`.
    pub verified_points: usize,
    /// Binomial tuples for which a witness exists.
    pub found_for: usize,
    pub binomial_tuples: usize,
}

impl LinearWitness {
    pub fn holds(&self, size: usize) -> bool {
        self.rows.is_some() && self.invertible && self.verified_points == size
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Equivalent,
    Inequivalent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictRow {
    pub subject: String,
    pub reference: String,
    pub claim: Claim,
    pub verdict: EquivalenceVerdict,
    /// `true` when the verdict does not contradict the claim; for a
    /// binomial/x^3 row it also requires the linearized witness.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct N6Report {
    pub sweep: FamilySweep,
    pub forms: Vec<FormSummary>,
    pub dillon: DillonSearch,
    pub bundles: Vec<NamedBundle>,
    pub binomial_witness: LinearWitness,
    pub verdicts: Vec<VerdictRow>,
    pub all_consistent: bool,
}

fn named(label: String, f: &crate::function::VBFunction) -> Result<NamedBundle> {
    let bundle = invariant_bundle(f)?;
    Ok(NamedBundle {
        label,
        hash: bundle.content_hash(),
        bundle,
    })
}

/// Reproduces the n = 6 classification: sweep, form tags, Dillon search,
/// bundles, binomial witness and the verdict table.
pub fn reproduce_n6() -> Result<Report<N6Report>> {
    let ctx = Arc::new(FieldCtx::new(6, None)?);
    let (k, s) = (2, 1);
    let space = ParamSpace::new(&ctx, k, s)?;
    let params: Vec<FamilyParams> = space.iter().collect();
    let sweep = sweep_params(&ctx, &params, Method::Both);

    let tags: Vec<FormTag> = params.iter().map(specialize_n6).collect::<Result<_>>()?;
    let funcs = par::map(0..params.len(), |i| construct(&ctx, &params[i]));
    let funcs: Vec<_> = funcs.into_iter().collect::<Result<_>>()?;
    let hashes = par::map(0..funcs.len(), |i| {
        invariant_bundle(&funcs[i]).map(|b| b.content_hash())
    });
    let hashes: Vec<String> = hashes.into_iter().collect::<Result<_>>()?;

    let mut forms = Vec::new();
    let mut reps = Vec::new();
    for form in FormTag::ALL {
        let members: Vec<usize> = (0..params.len()).filter(|&i| tags[i] == form).collect();
        let first = *members
            .first()
            .ok_or_else(|| Error::InvalidParams(format!("no {} tuples", form.name())))?;
        let observed: BTreeSet<Vec<u32>> = members
            .iter()
            .map(|&i| funcs[i].poly().map(|p| p.exponents()).unwrap_or_default())
            .collect();
        let bundle_hashes: BTreeSet<String> = members.iter().map(|&i| hashes[i].clone()).collect();
        forms.push(FormSummary {
            form,
            tuples: members.len(),
            expected_exponents: form.exponents_n6().to_vec(),
            observed_exponents: observed.into_iter().collect(),
            representative: params[first].to_string(),
            bundle_hashes: bundle_hashes.into_iter().collect(),
        });
        reps.push((form, first));
    }

    let apn_u: Vec<Elem> = ctx
        .elements()
        .filter(|&u| {
            known(&ctx, KnownFunction::DillonTrinomial { u })
                .and_then(|f| verify(&f, Method::Both))
                .is_ok_and(|v| v.is_apn())
        })
        .collect();
    let chosen = *apn_u
        .first()
        .ok_or_else(|| Error::InvalidParams("no APN coefficient for x^3+x^10+ux^24".into()))?;
    let dillon = DillonSearch {
        searched: ctx.size(),
        apn_u,
        chosen,
    };

    let dillon_id = KnownFunction::DillonTrinomial { u: chosen };
    let cube_id = KnownFunction::Gold { i: 1 };
    let mut bundles = Vec::new();
    for &(form, i) in &reps {
        bundles.push(named(format!("{}[{}]", form.name(), params[i]), &funcs[i])?);
    }
    bundles.push(named(dillon_id.label(), &known(&ctx, dillon_id)?)?);
    bundles.push(named("x^3".into(), &known(&ctx, cube_id)?)?);
    let dillon_bundle = bundles[4].clone();
    let cube_bundle = bundles[5].clone();

    let (_, bin_idx) = reps[3];
    let binomial = &funcs[bin_idx];
    let witness = linearized_factor_check(binomial, Exp(3));
    let verified_points = witness.as_ref().map_or(0, |l| {
        ctx.elements()
            .filter(|&x| binomial.at(x) == l.apply(ctx.pow(x, 3)))
            .count()
    });
    let bin_members: Vec<usize> = (0..params.len())
        .filter(|&i| tags[i] == FormTag::Binomial)
        .collect();
    let found_for = par::map(0..bin_members.len(), |j| {
        linearized_factor_check(&funcs[bin_members[j]], Exp(3)).is_some()
    })
    .into_iter()
    .filter(|&b| b)
    .count();
    let binomial_witness = LinearWitness {
        params: params[bin_idx].to_string(),
        exponent: 3,
        rows: witness
            .as_ref()
            .map(|l| l.rows().iter().map(|r| format!("0x{r:02x}")).collect()),
        invertible: witness.as_ref().is_some_and(|l| l.is_permutation()),
        verified_points,
        found_for,
        binomial_tuples: bin_members.len(),
    };

    let mut verdicts = Vec::new();
    let mut row =
        |subject: &NamedBundle, reference: &NamedBundle, claim: Claim, extra: bool| -> Result<()> {
            let verdict = compare_bundles(&subject.bundle, &reference.bundle)?;
            let consistent = extra
                && match claim {
                    Claim::Equivalent => !verdict.is_distinguished(),
                    Claim::Inequivalent => verdict.is_distinguished(),
                };
            verdicts.push(VerdictRow {
                subject: subject.label.clone(),
                reference: reference.label.clone(),
                claim,
                verdict,
                consistent,
            });
            Ok(())
        };
    for b in &bundles[..3] {
        row(b, &dillon_bundle, Claim::Equivalent, true)?;
    }
    for b in &bundles[..3] {
        row(b, &cube_bundle, Claim::Inequivalent, true)?;
    }
    row(
        &bundles[3],
        &cube_bundle,
        Claim::Equivalent,
        binomial_witness.holds(ctx.size()),
    )?;
    row(&bundles[3], &dillon_bundle, Claim::Inequivalent, true)?;

    let all_consistent = sweep.all_apn()
        && forms
            .iter()
            .all(|f| f.exponents_match() && f.bundle_hashes.len() == 1)
        && binomial_witness.found_for == binomial_witness.binomial_tuples
        && verdicts.iter().all(|v| v.consistent);
    let body = N6Report {
        sweep,
        forms,
        dillon,
        bundles,
        binomial_witness,
        verdicts,
        all_consistent,
    };
    Ok(Report::new(
        &ctx,
        serde_json::json!({ "command": "reproduce-n6", "k": k, "s": s }),
        body,
    ))
}
