//! Identity suites over a model and its primary table. Each suite returns
//! a witness count and the first counterexample; the report text is
//! deterministic for fixed options.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{CorrelatorKey, Engine, EngineConfig, Insertion, PrimaryTable, UnstableRoute};
use crate::error::{Error, Result};
use crate::fixtures::wdvv_p2;
use crate::geometry::{CohClass, GeometryModel};
use crate::moduli::{psi_integral_genus0, TautRecord, TautTable};
use crate::novikov::{CurveClass, TruncationPolicy};
use crate::phase::{PhaseIndex, PhaseSpace};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Thm22,
    Gamma0Independence,
    Eq11Oracle,
    Divisor,
    Dilaton,
    Eq24,
    Cor13,
    Permutation,
    Dimension,
    JChoice,
    Path25,
    Beta0Collapse,
    Vanishing,
    Wdvv,
    Enumerative,
    Cache,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::Thm22,
        Suite::Gamma0Independence,
        Suite::Eq11Oracle,
        Suite::Divisor,
        Suite::Dilaton,
        Suite::Eq24,
        Suite::Cor13,
        Suite::Permutation,
        Suite::Dimension,
        Suite::JChoice,
        Suite::Path25,
        Suite::Beta0Collapse,
        Suite::Vanishing,
        Suite::Wdvv,
        Suite::Enumerative,
        Suite::Cache,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm22 => "thm22",
            Suite::Gamma0Independence => "gamma0-independence",
            Suite::Eq11Oracle => "eq11-oracle",
            Suite::Divisor => "divisor",
            Suite::Dilaton => "dilaton",
            Suite::Eq24 => "eq24",
            Suite::Cor13 => "cor13",
            Suite::Permutation => "permutation",
            Suite::Dimension => "dimension",
            Suite::JChoice => "j-choice",
            Suite::Path25 => "path25",
            Suite::Beta0Collapse => "beta0-collapse",
            Suite::Vanishing => "vanishing",
            Suite::Wdvv => "wdvv",
            Suite::Enumerative => "enumerative",
            Suite::Cache => "cache",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Config(format!("unknown suite {s:?}; expected all or one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub policy: TruncationPolicy,
    /// Random queries per sampled suite.
    pub samples: usize,
    pub seed: u64,
    /// Largest number of marks in the point-target oracle suite.
    pub nmax: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            policy: TruncationPolicy {
                max_beta_degree: 2,
                max_x_degree: 4,
                max_descendant: 2,
            },
            samples: 200,
            seed: 0x5eed,
            nmax: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub model: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
    /// Set when the suite does not apply to the model.
    pub skipped: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("{:<20} {:<8}", self.suite.name(), self.model);
        if let Some(why) = &self.skipped {
            return write!(f, "{head} skip ({why})");
        }
        if self.passed() {
            write!(f, "{head} pass checked={}", self.checked)
        } else {
            write!(
                f,
                "{head} FAIL checked={} failures={} first: {}",
                self.checked,
                self.failures,
                self.counterexample.as_deref().unwrap_or("?")
            )
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub results: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(SuiteResult::passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteResult> {
        self.results.iter().find(|r| !r.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let failed = self.results.iter().filter(|r| !r.passed()).count();
        if failed == 0 {
            write!(f, "all {} suites passed", self.results.len())
        } else {
            write!(f, "{failed} of {} suites failed", self.results.len())
        }
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }
}

enum Outcome {
    Done(Tally),
    Skip(String),
}

pub fn run_suites(suites: &[Suite], model: &GeometryModel, table: &PrimaryTable, opts: &VerifyOptions) -> Result<VerifyReport> {
    let results = suites
        .iter()
        .map(|&s| run_suite(s, model, table, opts))
        .collect::<Result<_>>()?;
    Ok(VerifyReport { results })
}

pub fn run_suite(suite: Suite, model: &GeometryModel, table: &PrimaryTable, opts: &VerifyOptions) -> Result<SuiteResult> {
    let engine = Engine::new(model.clone(), table.clone(), EngineConfig::default())?;
    // every suite gets its own stream so selections do not shift each other
    let seed = opts.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut sampler = Sampler::new(&engine, opts, seed)?;
    let outcome = match suite {
        Suite::Thm22 => thm22(&engine, opts)?,
        Suite::Gamma0Independence => gamma0_independence(model, table, opts)?,
        Suite::Eq11Oracle => eq11_oracle(&engine, opts)?,
        Suite::Divisor => divisor(&mut sampler, opts)?,
        Suite::Dilaton => dilaton(&mut sampler, opts)?,
        Suite::Eq24 => eq24(&engine, &mut sampler, opts)?,
        Suite::Cor13 => cor13(&mut sampler, opts)?,
        Suite::Permutation => permutation(&mut sampler, opts)?,
        Suite::Dimension => dimension(model, table, &mut sampler, opts)?,
        Suite::JChoice => j_choice(&mut sampler, opts)?,
        Suite::Path25 => path25(&engine, opts)?,
        Suite::Beta0Collapse => beta0_collapse(&engine)?,
        Suite::Vanishing => vanishing(model, table)?,
        Suite::Wdvv => wdvv(&engine, opts)?,
        Suite::Enumerative => enumerative(&engine, opts)?,
        Suite::Cache => cache(model, table, &mut sampler, opts)?,
    };
    let mut out = SuiteResult {
        suite,
        model: model.name().to_string(),
        checked: 0,
        failures: 0,
        counterexample: None,
        skipped: None,
    };
    match outcome {
        Outcome::Done(t) => {
            out.checked = t.checked;
            out.failures = t.failures;
            out.counterexample = t.first;
        }
        Outcome::Skip(why) => out.skipped = Some(why),
    }
    Ok(out)
}

fn show(beta: &CurveClass, ins: &[Insertion]) -> String {
    let parts: Vec<String> = ins.iter().map(|x| format!("tau({},{}):{}", x.d, x.e, x.a)).collect();
    format!("beta={beta} [{}]", parts.join(", "))
}

/// Random dimension-matching genus-zero queries.
struct Sampler<'e> {
    engine: &'e Engine,
    classes: Vec<CurveClass>,
    rng: ChaCha8Rng,
    /// Cap on the total psi/phi degree of a sample.
    cap: i64,
}

impl<'e> Sampler<'e> {
    fn new(engine: &'e Engine, opts: &VerifyOptions, seed: u64) -> Result<Self> {
        let model = engine.model();
        let classes = if model.lattice_rank() == 0 {
            vec![CurveClass::zero(0)]
        } else {
            model.qbound(opts.policy.max_beta_degree)?.classes()
        };
        Ok(Sampler {
            engine,
            classes,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cap: 4,
        })
    }

    fn beta(&mut self) -> CurveClass {
        self.classes.choose(&mut self.rng).expect("zero class is always present").clone()
    }

    /// One attempt at `n` insertions in class `beta`; `with_e` spreads the
    /// degree over both `d` and `e`.
    fn attempt(&mut self, beta: &CurveClass, n: usize, with_e: bool) -> Result<Option<Vec<Insertion>>> {
        let model = self.engine.model();
        let a: Vec<usize> = (0..n).map(|_| self.rng.gen_range(0..model.rank())).collect();
        let c1 = model.c1_pairing(beta)?.to_integer().to_i64().unwrap_or(i64::MAX / 2);
        let deg: i64 = a.iter().map(|&x| i64::from(model.degree(x))).sum();
        let target = i64::from(model.dimension()) + c1 + n as i64 - 3 - deg;
        if target < 0 || target > self.cap || n == 0 && target > 0 {
            return Ok(None);
        }
        let mut ins: Vec<Insertion> = a.into_iter().map(Insertion::primary).collect();
        for _ in 0..target {
            let i = self.rng.gen_range(0..n);
            if with_e && self.rng.gen_bool(0.5) {
                ins[i].e += 1;
            } else {
                ins[i].d += 1;
            }
        }
        Ok(Some(ins))
    }

    /// A matching query with `n` drawn from `ns`, subject to `keep`.
    fn draw(
        &mut self,
        ns: std::ops::RangeInclusive<usize>,
        with_e: bool,
        keep: impl Fn(&CurveClass, &[Insertion]) -> bool,
    ) -> Result<(CurveClass, Vec<Insertion>)> {
        for _ in 0..20_000 {
            let beta = self.beta();
            let n = self.rng.gen_range(ns.clone());
            if let Some(ins) = self.attempt(&beta, n, with_e)? {
                if keep(&beta, &ins) {
                    return Ok((beta, ins));
                }
            }
        }
        Err(Error::domain(format!("no dimension-matching queries of the requested shape on {}", self.engine.model().name())))
    }
}

fn thm22(engine: &Engine, opts: &VerifyOptions) -> Result<Outcome> {
    let space = PhaseSpace::new(engine, opts.policy)?;
    let report = space.verify_theorem22()?;
    let mut t = Tally::default();
    t.check(report.transform_weight_raising, || "T is not identity plus a level-raising part".into());
    t.check(report.transform_inverse_ok, || "T times its Neumann inverse is not the identity".into());
    let f_terms = report.f_terms;
    for _ in 0..f_terms.saturating_sub(report.mismatches.len()) {
        t.check(true, String::new);
    }
    for (m, f, g) in &report.mismatches {
        t.check(false, || {
            let names: Vec<String> = m.iter().map(PhaseIndex::to_string).collect();
            format!("coefficient of {}: F^st = {f}, G(Tx) = {g}", names.join(" "))
        });
    }
    for s in &report.substitutions {
        t.check(s.passed(), || {
            let names: Vec<String> = s.monomial.iter().map(PhaseIndex::to_string).collect();
            format!("substitution on {}: {} vs {}", names.join(" "), s.lhs, s.rhs)
        });
    }
    Ok(Outcome::Done(t))
}

fn gamma0_independence(model: &GeometryModel, table: &PrimaryTable, opts: &VerifyOptions) -> Result<Outcome> {
    if model.lattice_rank() == 0 {
        return Ok(Outcome::Skip("no curve classes".into()));
    }
    let base = Engine::new(model.clone(), table.clone(), EngineConfig::default())?;
    let tripled = Engine::new(
        model.clone(),
        table.clone(),
        EngineConfig {
            gamma0: Some(model.ample().scale(&Q::from_integer(3.into()))),
            ..EngineConfig::default()
        },
    )?;
    let dilaton = Engine::new(
        model.clone(),
        table.clone(),
        EngineConfig {
            unstable_route: UnstableRoute::Dilaton,
            ..EngineConfig::default()
        },
    )?;
    let classes = model.qbound(opts.policy.max_beta_degree)?.classes();
    let r = model.rank();
    let dmax = opts.policy.max_descendant;
    let mut t = Tally::default();
    for beta in &classes {
        for a in 0..r {
            let ga = model.basis_class(a);
            for b in 0..r {
                let gb = model.basis_class(b);
                for d1 in 0..=dmax {
                    for d2 in 0..=dmax {
                        let x = base.two_point(beta, (d1, &ga), (d2, &gb))?;
                        let y = tripled.two_point(beta, (d1, &ga), (d2, &gb))?;
                        t.check(x == y, || format!("<tau_{d1} D{a}, tau_{d2} D{b}>_{beta}: {x} vs {y}"));
                    }
                }
            }
            for d in 0..=dmax {
                let x = base.descendant_correlator(0, beta, &[(d, a)])?;
                let y = tripled.descendant_correlator(0, beta, &[(d, a)])?;
                let z = dilaton.descendant_correlator(0, beta, &[(d, a)])?;
                t.check(x == y && x == z, || format!("<tau_{d} D{a}>_{beta}: {x}, {y}, {z}"));
            }
        }
        let x = base.descendant_correlator(0, beta, &[])?;
        let y = tripled.descendant_correlator(0, beta, &[])?;
        let z = dilaton.descendant_correlator(0, beta, &[])?;
        t.check(x == y && x == z, || format!("<>_{beta}: {x}, {y}, {z}"));
    }
    let s1 = PhaseSpace::new(&base, opts.policy)?;
    let s3 = PhaseSpace::new(&tripled, opts.policy)?;
    for d in 0..=dmax {
        for a in 0..r {
            for b in 0..r {
                let (ga, gb) = (model.basis_class(a), model.basis_class(b));
                let x = s1.two_point_via_25(d, &ga, &gb)?;
                let y = s3.two_point_via_25(d, &ga, &gb)?;
                t.check(x == y, || format!("antiderivative route <tau_{d} D{a}, D{b}>: {x} vs {y}"));
            }
        }
    }
    Ok(Outcome::Done(t))
}

fn exponent_vectors(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn eq11_oracle(engine: &Engine, opts: &VerifyOptions) -> Result<Outcome> {
    let model = engine.model();
    if model.dimension() != 0 {
        return Ok(Outcome::Skip("needs the point target".into()));
    }
    let z = CurveClass::zero(model.lattice_rank());
    let one = model.identity();
    let mut t = Tally::default();
    for n in 3..=opts.nmax {
        for e in exponent_vectors(n, (n - 3) as u32) {
            let ins: Vec<(u32, usize)> = e.iter().map(|&x| (x, one)).collect();
            let v = engine.modified_correlator(&z, &ins)?;
            let w = psi_integral_genus0(&e);
            t.check(v == w, || format!("exponents {e:?}: recursion {v}, closed form {w}"));
        }
    }
    Ok(Outcome::Done(t))
}

fn divisor(s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let engine = s.engine;
    let divisors = engine.model().divisor_indices();
    if divisors.is_empty() {
        return Ok(Outcome::Skip("no degree-one classes".into()));
    }
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let (beta, ins) = s.draw(0..=4, false, |b, ins| !b.is_zero() || ins.len() >= 3)?;
        let h = *divisors.choose(&mut s.rng).expect("nonempty");
        let key = CorrelatorKey::genus0(beta.clone(), ins.clone());
        let (l, r) = engine.divisor_check(&engine.model().basis_class(h), &key)?;
        t.check(l == r, || format!("D{h} into {}: {l} vs {r}", show(&beta, &ins)));
    }
    Ok(Outcome::Done(t))
}

fn dilaton(s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let engine = s.engine;
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let (beta, ins) = s.draw(0..=4, false, |b, ins| !b.is_zero() || ins.len() >= 2)?;
        let key = CorrelatorKey::genus0(beta.clone(), ins.clone());
        let (l, r) = engine.dilaton_check(&key)?;
        t.check(l == r, || format!("tau_1 1 into {}: {l} vs {r}", show(&beta, &ins)));
    }
    Ok(Outcome::Done(t))
}

fn random_class(rng: &mut ChaCha8Rng, rank: usize) -> CohClass {
    loop {
        let c = CohClass((0..rank).map(|_| Q::from_integer(rng.gen_range(-2i64..=2).into())).collect());
        if !c.is_zero() {
            return c;
        }
    }
}

/// `<gamma0, tau_d g1, g2> = <tau_{d-1} g1, gamma0 · g2>` as series.
fn eq24(engine: &Engine, s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let model = engine.model();
    if model.lattice_rank() == 0 {
        return Ok(Outcome::Skip("no curve classes".into()));
    }
    let space = PhaseSpace::new(engine, opts.policy)?;
    let gamma0 = engine.gamma0();
    let dmax = opts.policy.max_descendant.max(1);
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let d = s.rng.gen_range(1..=dmax);
        let g1 = random_class(&mut s.rng, model.rank());
        let g2 = random_class(&mut s.rng, model.rank());
        let lhs = space.summed_correlator(&[(0, gamma0), (d, &g1), (0, &g2)])?;
        let product = space.quantum_product(gamma0, &g2)?;
        let mut rhs = lhs.scale(&Q::zero());
        for a in 0..model.rank() {
            if product.coeff(a).is_zero() {
                continue;
            }
            let two = space.summed_correlator(&[(d - 1, &g1), (0, &model.basis_class(a))])?;
            rhs = rhs.try_add(&product.coeff(a).try_mul(&two)?)?;
        }
        t.check(lhs == rhs, || format!("d={d} g1={g1:?} g2={g2:?}: {lhs} vs {rhs}"));
    }
    Ok(Outcome::Done(t))
}

fn cor13(s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let engine = s.engine;
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let (beta, ins) = s.draw(3..=3, false, |_, _| true)?;
        let pairs: Vec<(u32, usize)> = ins.iter().map(|x| (x.d, x.a)).collect();
        let explicit = engine.three_point_descendant(&beta, &pairs)?;
        let general = engine.generalized_correlator(&beta, &ins)?;
        t.check(explicit == general, || format!("{}: {explicit} vs {general}", show(&beta, &ins)));
    }
    Ok(Outcome::Done(t))
}

fn permutation(s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let engine = s.engine;
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let (beta, ins) = s.draw(3..=5, true, |_, _| true)?;
        let v = engine.generalized_correlator(&beta, &ins)?;
        let mut shuffled = ins.clone();
        shuffled.shuffle(&mut s.rng);
        let w = engine.evaluate_in_order(&beta, &shuffled)?;
        t.check(v == w, || format!("{} reordered as {}: {v} vs {w}", show(&beta, &ins), show(&beta, &shuffled)));
    }
    Ok(Outcome::Done(t))
}

/// Without the shortcut, mismatched queries still come out zero and matched
/// ones agree with the shortcut engine.
fn dimension(model: &GeometryModel, table: &PrimaryTable, s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let slow = Engine::new(
        model.clone(),
        table.clone(),
        EngineConfig {
            dimension_shortcut: false,
            ..EngineConfig::default()
        },
    )?;
    let mut t = Tally::default();
    for k in 0..opts.samples {
        let (beta, mut ins) = s.draw(3..=4, k % 2 == 0, |_, _| true)?;
        let v = slow.generalized_correlator(&beta, &ins)?;
        let w = s.engine.generalized_correlator(&beta, &ins)?;
        t.check(v == w, || format!("{}: {v} without shortcut, {w} with", show(&beta, &ins)));
        let i = s.rng.gen_range(0..ins.len());
        if ins[i].d > 0 && s.rng.gen_bool(0.5) {
            ins[i].d -= 1;
        } else {
            ins[i].d += 1;
        }
        let v = slow.generalized_correlator(&beta, &ins)?;
        t.check(v.is_zero(), || format!("{} has the wrong dimension but gave {v}", show(&beta, &ins)));
    }
    Ok(Outcome::Done(t))
}

fn j_choice(s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let engine = s.engine;
    let mut t = Tally::default();
    let mut k = 0;
    while t.checked < opts.samples {
        k += 1;
        if k % 2 == 0 {
            let (beta, ins) = s.draw(3..=5, true, |_, ins| ins.iter().filter(|x| x.d > 0).count() >= 2)?;
            let v = engine.generalized_correlator(&beta, &ins)?;
            for j in (0..ins.len()).filter(|&j| ins[j].d > 0) {
                let w = engine.generalized_at(&beta, &ins, j)?;
                t.check(v == w, || format!("{} reduced at mark {j}: {w} vs {v}", show(&beta, &ins)));
            }
        } else {
            let (beta, ins) = s.draw(4..=5, true, |_, ins| ins.iter().all(|x| x.d == 0) && ins.iter().any(|x| x.e > 0))?;
            let v = engine.generalized_correlator(&beta, &ins)?;
            let n = ins.len();
            let i = (0..n).find(|&i| ins[i].e > 0).expect("some e > 0");
            for j in (0..n).filter(|&j| j != i) {
                for l in (j + 1..n).filter(|&l| l != i) {
                    let w = engine.modified_step(&beta, &ins, i, j, l)?;
                    t.check(v == w, || format!("{} expanded at {i} with ({j},{l}): {w} vs {v}", show(&beta, &ins)));
                }
            }
        }
    }
    Ok(Outcome::Done(t))
}

fn path25(engine: &Engine, opts: &VerifyOptions) -> Result<Outcome> {
    let model = engine.model();
    let space = PhaseSpace::new(engine, opts.policy)?;
    let mut t = Tally::default();
    for d in 0..=opts.policy.max_descendant {
        for a in 0..model.rank() {
            for b in 0..model.rank() {
                let (ga, gb) = (model.basis_class(a), model.basis_class(b));
                let x = space.two_point_via_25(d, &ga, &gb)?;
                let y = space.summed_correlator(&[(d, &ga), (0, &gb)])?;
                t.check(x == y, || format!("<tau_{d} D{a}, D{b}>: antiderivatives {x}, summation {y}"));
            }
        }
    }
    Ok(Outcome::Done(t))
}

/// Sorted multisets of `items` of each size in `sizes` whose weights sum to at most `budget`.
fn bounded_multisets<T: Clone>(items: &[(T, u32)], sizes: std::ops::RangeInclusive<usize>, budget: u32) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[(T, u32)], start: usize, left: usize, budget: u32, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..items.len() {
            if items[k].1 > budget {
                continue;
            }
            cur.push(items[k].0.clone());
            rec(items, k, left - 1, budget - items[k].1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in sizes {
        rec(items, 0, n, budget, &mut Vec::new(), &mut out);
    }
    out
}

fn beta0_collapse(engine: &Engine) -> Result<Outcome> {
    let model = engine.model();
    let z = CurveClass::zero(model.lattice_rank());
    let mut options = Vec::new();
    for d in 0..=3u32 {
        for e in 0..=3 - d {
            for a in 0..model.rank() {
                options.push((Insertion::new(d, e, a), d + e));
            }
        }
    }
    let mut t = Tally::default();
    for ins in bounded_multisets(&options, 3..=5, 3) {
        let v = engine.generalized_correlator(&z, &ins)?;
        let pairs: Vec<(u32, usize)> = ins.iter().map(|x| (x.d + x.e, x.a)).collect();
        let w = engine.descendant_correlator(0, &z, &pairs)?;
        t.check(v == w, || format!("{}: {v} vs {w}", show(&z, &ins)));
    }
    Ok(Outcome::Done(t))
}

/// A table with value `1` for every tautological integral in genus
/// `1..=gmax` with at most `nmax` marks and at most `lambda_len` lambda
/// factors; enough to make the degree-zero vanishing purely structural.
pub fn unit_taut_table(gmax: u32, nmax: usize, lambda_len: usize) -> Result<TautTable> {
    let mut table = TautTable::new();
    for g in 1..=gmax {
        for n in 0..=nmax {
            let dim = 3 * g as usize - 3 + n;
            let psis = exponent_vectors(n, dim as u32);
            let lambdas = (0..=lambda_len).flat_map(|len| bounded_multisets(&(1..=g).map(|i| (i, i)).collect::<Vec<_>>(), len..=len, dim as u32));
            let lambdas: Vec<Vec<u32>> = lambdas.collect();
            for psi in psis.iter().filter(|p| p.windows(2).all(|w| w[0] >= w[1])) {
                let used: u32 = psi.iter().sum();
                for lambda in &lambdas {
                    if used + lambda.iter().sum::<u32>() != dim as u32 {
                        continue;
                    }
                    table.insert(&TautRecord {
                        g,
                        n,
                        psi: psi.clone(),
                        lambda: lambda.clone(),
                        value: Q::from_integer(1.into()),
                    })?;
                }
            }
        }
    }
    Ok(table)
}

/// Whether a degree-zero correlator may be nonzero: genus zero with the
/// multinomial count, genus one with at most one degree-one class, or
/// genus at least two in dimension at most three with the matching count.
fn vanishing_cases(g: u32, n: usize, delta: u32, psi: u32, deg: u32) -> bool {
    let n = n as i64;
    let (psi, deg, delta, g) = (i64::from(psi), i64::from(deg), i64::from(delta), i64::from(g));
    match g {
        0 => n >= 3 && psi == n - 3 && deg == delta,
        1 => n >= 1 && ((psi == n && deg == 0) || (psi == n - 1 && deg == 1)),
        _ => deg <= delta && delta <= 3 && psi + deg == (g - 1) * (3 - delta) + n,
    }
}

fn vanishing(model: &GeometryModel, table: &PrimaryTable) -> Result<Outcome> {
    let delta = model.dimension();
    if delta > 3 {
        return Ok(Outcome::Skip("dimension above three".into()));
    }
    let engine = Engine::new(model.clone(), table.clone(), EngineConfig::default())?.with_taut_table(unit_taut_table(2, 5, delta as usize)?);
    let z = CurveClass::zero(model.lattice_rank());
    let mut t = Tally::default();
    for g in 0..=2u32 {
        let mut nonzero = 0usize;
        for n in 0..=5usize {
            let budget = (3 * g as usize + n).saturating_sub(2) as u32;
            let mut options = Vec::new();
            for d in 0..=budget {
                for a in 0..model.rank() {
                    options.push(((d, a), d));
                }
            }
            for ins in bounded_multisets(&options, n..=n, budget) {
                let v = engine.descendant_correlator(g, &z, &ins)?;
                let psi: u32 = ins.iter().map(|x| x.0).sum();
                let deg: u32 = ins.iter().map(|x| model.degree(x.1)).sum();
                let allowed = vanishing_cases(g, n, delta, psi, deg);
                t.check(allowed || v.is_zero(), || format!("g={g} {ins:?} gave {v} outside the listed cases"));
                nonzero += usize::from(!v.is_zero());
            }
        }
        // a scan that only ever sees zeros proves nothing
        t.check(nonzero > 0, || format!("no nonzero degree-zero values in genus {g}"));
    }
    Ok(Outcome::Done(t))
}

fn wdvv(engine: &Engine, opts: &VerifyOptions) -> Result<Outcome> {
    let space = PhaseSpace::new(engine, opts.policy)?;
    let phi = space.primary_potential_phi()?;
    let report = space.wdvv_check(&phi)?;
    let mut t = Tally {
        checked: report.checked - report.failures.len(),
        ..Tally::default()
    };
    for f in &report.failures {
        t.check(false, || f.clone());
    }
    Ok(Outcome::Done(t))
}

fn enumerative(engine: &Engine, opts: &VerifyOptions) -> Result<Outcome> {
    let model = engine.model();
    if model.dimension() != 2 || model.rank() != 3 || model.lattice_rank() != 1 {
        return Ok(Outcome::Skip("plane counts need a plane-like model".into()));
    }
    let dmax = opts.policy.max_beta_degree.max(1) as u32;
    let space = PhaseSpace::new(engine, opts.policy)?;
    let oracle = wdvv_p2(dmax)?;
    let point = model.basis_class(2);
    let mut t = Tally::default();
    for d in 1..=dmax {
        let items = vec![(0, &point); 3 * d as usize - 1];
        let series = space.summed_correlator(&items)?;
        let beta = CurveClass(vec![d]);
        let want = oracle.get(d).cloned().unwrap_or_default();
        let got = series.coeff(&beta);
        t.check(got == want, || format!("N_{d}: engine {got}, recursion {want}"));
        let stray = series.terms().filter(|(b, _)| **b != beta).count();
        t.check(stray == 0, || format!("{} points picked up other degrees: {series}", 3 * d - 1));
    }
    Ok(Outcome::Done(t))
}

fn cache(model: &GeometryModel, table: &PrimaryTable, s: &mut Sampler, opts: &VerifyOptions) -> Result<Outcome> {
    let cold = Engine::new(
        model.clone(),
        table.clone(),
        EngineConfig {
            use_cache: false,
            ..EngineConfig::default()
        },
    )?;
    s.cap = 3;
    let mut t = Tally::default();
    for _ in 0..opts.samples {
        let (beta, ins) = s.draw(3..=4, true, |_, _| true)?;
        let v = s.engine.generalized_correlator(&beta, &ins)?;
        let w = cold.generalized_correlator(&beta, &ins)?;
        t.check(v == w, || format!("{}: cached {v}, uncached {w}", show(&beta, &ins)));
    }
    t.check(cold.cache_len() == 0, || "uncached engine stored values".into());
    Ok(Outcome::Done(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load_fixture;

    fn small() -> VerifyOptions {
        VerifyOptions {
            policy: TruncationPolicy {
                max_beta_degree: 2,
                max_x_degree: 4,
                max_descendant: 2,
            },
            samples: 20,
            seed: 7,
            nmax: 6,
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("thm23".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_small() {
        for name in ["point", "P1", "P2"] {
            let f = load_fixture(name).unwrap();
            let report = run_suites(&Suite::ALL, &f.model, &f.table, &small()).unwrap();
            assert!(report.passed(), "{name}:\n{report}");
        }
    }

    #[test]
    fn cases_of_the_vanishing_list() {
        assert!(vanishing_cases(0, 3, 1, 0, 1));
        assert!(!vanishing_cases(0, 2, 0, 0, 0));
        assert!(vanishing_cases(1, 1, 2, 1, 0));
        assert!(vanishing_cases(1, 2, 2, 1, 1));
        assert!(!vanishing_cases(1, 0, 2, 0, 0));
        assert!(vanishing_cases(2, 0, 3, 0, 0));
        assert!(!vanishing_cases(2, 1, 4, 0, 0));
    }

    #[test]
    fn unit_table_answers_every_point_query() {
        let t = unit_taut_table(2, 3, 2).unwrap();
        assert_eq!(t.get(1, &[1], &[]), Some(&Q::from_integer(1.into())));
        assert_eq!(t.get(2, &[], &[1, 2]), Some(&Q::from_integer(1.into())));
        assert!(t.get(2, &[], &[3]).is_none());
    }
}
