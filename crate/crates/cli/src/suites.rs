//! Verification suites behind `loopstrata verify`.

use std::collections::{BTreeMap, BTreeSet};

use clap::ValueEnum;
use loopstrata::matrix::{
    brute_force_truncation_oracle, enumerate_orbits, newton_matrix, required_precision, truncation_type_matrix,
    OracleMode, Sampler, MAX_STATES,
};
use loopstrata::{AffineElt, Error, Levi, SigmaClass, SlopeData, TruncationType};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Matrix samples per stratum in the truncation suite.
const SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Thm11,
    Thm13,
    Thm14,
    Cor15,
    LemmaHe,
    Fundamental,
    MatrixOracle,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Thm11 => "thm11",
            Suite::Thm13 => "thm13",
            Suite::Thm14 => "thm14",
            Suite::Cor15 => "cor15",
            Suite::LemmaHe => "lemma-he",
            Suite::Fundamental => "fundamental",
            Suite::MatrixOracle => "matrix-oracle",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub property: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub group: String,
    pub mu: Vec<i64>,
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Errors that abort the run instead of failing a property.
fn is_fatal(e: &Error) -> bool {
    matches!(
        e,
        Error::BudgetExceeded { .. } | Error::InsufficientPrecision { .. } | Error::Precondition(_) | Error::Dimension(_)
    )
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    suite: &'static str,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn record(&mut self, property: &str, r: Result<(bool, String), Error>) -> Result<(), CliError> {
        let (pass, detail) = match r {
            Ok(v) => v,
            Err(e) if is_fatal(&e) => return Err(e.into()),
            Err(e) => (false, format!("{}: {e}", e.kind())),
        };
        self.checks.push(Check {
            suite: self.suite,
            property: property.to_string(),
            pass,
            detail,
        });
        Ok(())
    }
}

pub fn run(cfg: &RunConfig, suite: Suite) -> Result<Report, CliError> {
    let gl = cfg.rd.gl_size().is_some();
    let list: Vec<Suite> = match suite {
        Suite::All => {
            let mut v = vec![Suite::Thm11, Suite::Thm13, Suite::Thm14, Suite::Cor15, Suite::LemmaHe, Suite::Fundamental];
            if gl {
                v.push(Suite::MatrixOracle);
            }
            v
        }
        Suite::MatrixOracle if !gl => {
            cfg.require_gl("the matrix-oracle suite")?;
            unreachable!()
        }
        s => vec![s],
    };
    let mut checks = vec![];
    for s in list {
        let mut ctx = Ctx {
            cfg,
            suite: s.name(),
            checks: vec![],
        };
        match s {
            Suite::Thm11 => thm11(&mut ctx)?,
            Suite::Thm13 => thm13(&mut ctx)?,
            Suite::Thm14 => thm14(&mut ctx)?,
            Suite::Cor15 => cor15(&mut ctx)?,
            Suite::LemmaHe => lemma_he(&mut ctx)?,
            Suite::Fundamental => fundamental(&mut ctx)?,
            Suite::MatrixOracle => matrix_oracle(&mut ctx)?,
            Suite::All => unreachable!(),
        }
        checks.extend(ctx.checks);
    }
    let passed = checks.iter().all(|c| c.pass);
    Ok(Report {
        group: cfg.rd.name().to_string(),
        mu: cfg.mu.clone(),
        suite: suite.name(),
        checks,
        passed,
    })
}

fn thm11(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let types = rd.strata_types(&cfg.mu)?;
    let r = types.iter().try_fold((true, 0usize), |(ok, k), t| {
        let got = rd.truncation_type_affine(&rd.w_tau(t.w, &t.mu))?;
        Ok::<_, Error>((ok && &got == t, k + 1))
    });
    ctx.record("w-tau-has-its-own-type", r.map(|(ok, k)| (ok, format!("{k} strata"))))?;
    let Some(n) = rd.gl_size() else { return Ok(()) };
    let mut sampler = Sampler::new(cfg.field.clone(), n, 4, cfg.seed);
    let mut bad = vec![];
    let mut total = 0;
    for t in &types {
        let prec = cfg.precision.unwrap_or(4).max(required_precision(&t.mu));
        for _ in 0..SAMPLES {
            let g = sampler.in_iwahori_coset(rd, &rd.w_tau(t.w, &t.mu))?;
            let g = g.sigma_conj(&sampler.k())?.truncate(prec);
            total += 1;
            match truncation_type_matrix(rd, &g) {
                Ok((got, _)) if &got == t => {}
                Ok((got, _)) => bad.push(format!("{} gave {}", t.display(rd), got.display(rd))),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{total} samples of K-σ-conjugated I·wτ_μ·I")
    } else {
        format!("{} of {total} wrong, first: {}", bad.len(), bad[0])
    };
    ctx.record("matrix-truncation-on-iwahori-cosets", Ok((bad.is_empty(), detail)))
}

fn thm13(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let atlas = rd.closure_poset_jobs(&cfg.mu, cfg.budget, cfg.jobs)?;
    let pre = atlas.is_reflexive() && atlas.is_transitive();
    ctx.record("closure-is-preorder", Ok((pre, format!("{} strata", atlas.strata.len()))))?;
    let v = &atlas.antisymmetry_violations;
    ctx.record("closure-is-antisymmetric", Ok((v.is_empty(), format!("{} violating pairs", v.len()))))?;
    let mut pairs = 0;
    let mut bad = 0;
    for (i, a) in atlas.strata.iter().enumerate() {
        for (j, b) in atlas.strata.iter().enumerate() {
            if a.ty.mu == b.ty.mu {
                pairs += 1;
                if atlas.closure[i][j] != rd.closure_leq_same_mu(a.ty.w, b.ty.w, &a.ty.mu) {
                    bad += 1;
                }
            }
        }
    }
    ctx.record("same-mu-criterion-agrees", Ok((bad == 0, format!("{pairs} pairs, {bad} disagreements"))))?;
    let mins: Vec<&TruncationType> = atlas.strata.iter().filter(|s| s.minimal).map(|s| &s.ty).collect();
    let r = (|| {
        let mut open = 0;
        for a in &mins {
            for b in &mins {
                if rd.minimal_closure_vs_class_order(a, b)?.discrepancy {
                    open += 1;
                }
            }
        }
        Ok((true, format!("{} minimal strata, {open} pairs with ⪯ but no closure", mins.len())))
    })();
    ctx.record("closure-implies-class-order", r)
}

fn thm14(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let mut checked = 0;
    let mut fails = vec![];
    for t in rd.strata_types(&cfg.mu)? {
        let rep = rd.verify_thm_main(t.w, &t.mu, cfg.budget)?;
        checked += rep.checked;
        for (y, m) in rep.failures {
            fails.push(format!("{} in cone of {} has type {}", rd.format_affine(&y), t.display(rd), m.display(rd)));
        }
    }
    let detail = match fails.first() {
        None => format!("{checked} cone elements"),
        Some(f) => format!("{} failures, first: {f}", fails.len()),
    };
    ctx.record("minimal-type-in-closure", Ok((fails.is_empty(), detail)))
}

fn cor15(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let types = rd.strata_types(&cfg.mu)?;
    let r = types.iter().try_fold(0usize, |k, t| {
        rd.generic_via_minimal(t.w, &t.mu, cfg.budget)?;
        Ok(k + 1)
    });
    ctx.record("generic-equals-max-minimal", r.map(|k| (true, format!("{k} strata"))))?;
    let r = types.iter().try_fold((true, 0usize), |(ok, k), t| {
        let gen = rd.generic_class(t.w, &t.mu, cfg.budget)?;
        let cone = rd.lower_cone(&rd.w_tau(t.w, &t.mu), cfg.budget)?;
        let all = cone.iter().all(|y| rd.leq_b(&rd.class_of(y), &gen));
        Ok((ok && all, k + cone.len()))
    });
    ctx.record("generic-dominates-cone", r.map(|(ok, k)| (ok, format!("{k} cone elements"))))
}

fn cone_union(ctx: &Ctx) -> Result<Vec<AffineElt>, Error> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let mut set = BTreeSet::new();
    for t in rd.strata_types(&cfg.mu)? {
        set.extend(rd.lower_cone(&rd.w_tau(t.w, &t.mu), cfg.budget)?);
    }
    Ok(set.into_iter().collect())
}

fn lemma_he(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let elems = cone_union(ctx)?;
    let ns = rd.semisimple_rank();
    let levis: Vec<Levi> = (0u32..1 << ns)
        .map(|mask| Levi::standard(rd, &(0..ns).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>()))
        .collect();
    let needed = (elems.len() * elems.len() * levis.len()) as u128;
    if needed > cfg.budget.saturating_mul(64) {
        return Err(Error::BudgetExceeded {
            what: "conjugation triples".into(),
            needed,
            budget: cfg.budget,
        }
        .into());
    }
    let mut bad = 0;
    let mut triples = 0;
    for m in &levis {
        let xs: Vec<&AffineElt> = elems.iter().filter(|x| rd.is_left_min_affine(m, x)).collect();
        for y in &elems {
            for x in &xs {
                triples += 1;
                let (a, b) = rd.conj_dominates(y, x, m);
                if a != b {
                    bad += 1;
                }
            }
        }
    }
    ctx.record("conj-dominates-flags-agree", Ok((bad == 0, format!("{triples} triples, {bad} disagreements"))))?;
    let small: Vec<&AffineElt> = elems.iter().filter(|y| rd.alength(y) <= 4).collect();
    let mut bad = 0;
    let mut pairs = 0;
    for y in &small {
        let below = rd.lower_cone(y, cfg.budget)?;
        for z in &small {
            pairs += 1;
            let allowed: BTreeSet<AffineElt> = below.iter().map(|yp| rd.amul(yp, z)).collect();
            if !rd.demazure_set(y, z).is_subset(&allowed) {
                bad += 1;
            }
        }
    }
    ctx.record("demazure-product-below", Ok((bad == 0, format!("{pairs} pairs, {bad} counterexamples"))))
}

fn fundamental(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    if let Some(n) = rd.gl_size() {
        let slopes: Vec<SlopeData> = SlopeData::all_up_to(n).into_iter().filter(|s| s.height() == n).collect();
        let mut not_fund = vec![];
        let mut wrong = vec![];
        for s in &slopes {
            let (x, p) = rd.minimal_dieudonne_element(s)?;
            if !rd.is_fundamental(&x, &p) {
                not_fund.push(format!("{:?}", s.pairs()));
            }
            let m = rd.minimal_dieudonne(s, cfg.field.clone())?;
            if newton_matrix(&m)? != s.newton() || rd.newton_point(&x) != s.newton() {
                wrong.push(format!("{:?}", s.pairs()));
            }
        }
        let d = format!("{} slope data, failing: [{}]", slopes.len(), not_fund.join(" "));
        ctx.record("minimal-dieudonne-is-fundamental", Ok((not_fund.is_empty(), d)))?;
        let d = format!("{} slope data, failing: [{}]", slopes.len(), wrong.join(" "));
        ctx.record("minimal-dieudonne-slopes", Ok((wrong.is_empty(), d)))?;
    }
    let lo = *cfg.mu.iter().min().unwrap_or(&0);
    let hi = *cfg.mu.iter().max().unwrap_or(&0);
    let kappa = rd.kappa_of_coweight(&cfg.mu);
    let mut by_class: BTreeMap<SigmaClass, BTreeSet<AffineElt>> = BTreeMap::new();
    for p in rd.semistandard_parabolics() {
        for z in rd.fundamental_elements_in_box(&p, lo, hi) {
            if rd.kappa(&z) == kappa {
                by_class.entry(rd.class_of(&z)).or_default().insert(z);
            }
        }
    }
    let r = (|| {
        let mut pairs = 0;
        for set in by_class.values() {
            for x in set {
                for y in set {
                    rd.fundamental_conj_witness(x, y)?;
                    pairs += 1;
                }
            }
        }
        Ok((true, format!("{} classes, {pairs} pairs", by_class.len())))
    })();
    ctx.record("fundamental-pairs-conjugate", r)
}

fn matrix_oracle(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let rd = &cfg.rd;
    let n = cfg.require_gl("the matrix-oracle suite")?;
    let shift = -cfg.mu.last().copied().unwrap_or(0);
    let mu: Vec<i64> = cfg.mu.iter().map(|a| a + shift).collect();
    let depth = cfg.precision.unwrap_or_else(|| required_precision(&mu));
    let states = (cfg.field.size() as u128).checked_pow((n * n) as u32 * depth as u32);
    if states.is_some_and(|k| k <= MAX_STATES as u128) {
        let rep = enumerate_orbits(rd, cfg.field.clone(), &mu, depth)?;
        let expected = rd.mu_w(&mu).len();
        let ok = rep.consistent(&mu) && rep.orbits.len() == expected;
        let types: Vec<String> = rep
            .orbits
            .iter()
            .flat_map(|o| o.types.iter().map(|t| t.display(rd).to_string()))
            .collect();
        let d = format!("{} elements, {} orbits (expected {expected}): {}", rep.elements, rep.orbits.len(), types.join(" "));
        return ctx.record("orbits-match-matrix-types", Ok((ok, d)));
    }
    let mut sampler = Sampler::new(cfg.field.clone(), n, depth, cfg.seed);
    let (mut agree, mut inconclusive, mut bad) = (0, 0, vec![]);
    for w in rd.mu_w(&mu) {
        let t = TruncationType { w, mu: mu.clone() };
        for k in 0..8u64 {
            let g = sampler.in_iwahori_coset(rd, &rd.w_tau(w, &mu))?.truncate(depth.max(required_precision(&mu)));
            let mode = OracleMode::Randomized {
                trials: 2048,
                seed: cfg.seed.wrapping_add(k),
            };
            match brute_force_truncation_oracle(rd, &g, depth, mode) {
                Ok(o) if o == t => agree += 1,
                Ok(o) => bad.push(format!("{} found as {}", t.display(rd), o.display(rd))),
                Err(Error::Inconclusive(_)) => inconclusive += 1,
                Err(e) => return Err(e.into()),
            }
            let (m, _) = truncation_type_matrix(rd, &g)?;
            if m != t {
                bad.push(format!("{} computed as {}", t.display(rd), m.display(rd)));
            }
        }
    }
    let d = format!("randomized: {agree} agree, {inconclusive} inconclusive, {} disagree", bad.len());
    ctx.record("oracle-agrees-with-matrix-types", Ok((bad.is_empty(), d)))
}
