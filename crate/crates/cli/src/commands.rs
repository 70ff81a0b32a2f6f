//! Subcommand bodies. Each returns a report or a failure with its exit code.

use std::fs;
use std::path::{Path, PathBuf};

use betanormal::algebraic::{FieldElement, PisotNumber};
use betanormal::beta::{inscribed_beta_adic, BetaSystem, ExactInterval, Word};
use betanormal::generators::{generate, parse_base, write_jsonl, GeneratorConfig};
use betanormal::normality::{
    block_frequency_deviation, blichfeldt_bound, extreme_discrepancy, non_normal_census, orbit_points,
    simple_discrepancy, ConstantsBundle,
};
use betanormal::poly::{rat, Rat};
use betanormal::Error;

use crate::output::{decimal, parse_number, Field, Record, Report};

/// Process exit codes.
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Output produced before the failure, still printed.
    pub report: Option<Report>,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), report: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PolynomialSyntax(_)
            | Error::ZeroDegree
            | Error::NotMonic(_)
            | Error::Reducible(_)
            | Error::IrreducibilityUnverified(_)
            | Error::NoRealRootAboveOne
            | Error::NotPisot(_) => EXIT_CERTIFICATION,
            Error::FeasibilityViolated(_) | Error::NoCandidateAccepted(_) => EXIT_BOUND,
            Error::OrbitBudgetExceeded(_)
            | Error::EnumerationBudgetExceeded { .. }
            | Error::CandidateBudgetExceeded { .. }
            | Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_ERROR,
        };
        Failure::new(code, e.to_string())
    }
}

pub type Outcome = Result<Report, Failure>;

/// Settings shared by every subcommand.
pub struct Ctx {
    pub digits: usize,
    pub seed_config: Option<PathBuf>,
}

impl Ctx {
    fn rat(&self, r: &Rat) -> Field {
        Field::rat(r, self.digits)
    }

    fn fe(&self, x: &FieldElement) -> Field {
        Field::field(x, self.digits)
    }
}

fn number(s: &str, what: &str) -> Result<Rat, Failure> {
    parse_number(s).ok_or_else(|| Failure::new(EXIT_ERROR, format!("cannot parse {what} `{s}`")))
}

fn system(base: &str) -> Result<BetaSystem, Failure> {
    Ok(BetaSystem::new(&parse_base(base)?)?)
}

fn text(s: impl Into<String>) -> Field {
    Field::Text(s.into())
}

fn int(n: impl TryInto<i128>) -> Field {
    Field::Int(n.try_into().unwrap_or(i128::MAX))
}

pub fn certify(ctx: &Ctx, base: &str) -> Outcome {
    let b = parse_base(base)?;
    let (lo, hi) = b.enclosure(64);
    let mut r = Report::default();
    r.push("base", text(b.to_string()));
    r.push("pisot", Field::Bool(true));
    r.push("degree", int(b.degree()));
    r.push("real_embeddings", int(b.real_embeddings()));
    r.push("complex_pairs", int(b.complex_pairs()));
    r.push("root", text(decimal(&((&lo + &hi) / rat(2)), ctx.digits)));
    r.push("root_lower", ctx.rat(&lo));
    r.push("root_upper", ctx.rat(&hi));
    let moduli = b.conjugates().iter().map(|c| ctx.rat(&c.modulus_upper())).collect();
    r.push("conjugate_modulus_upper", Field::List(moduli));
    Ok(r)
}

pub fn expansion(ctx: &Ctx, base: &str) -> Outcome {
    let sys = system(base)?;
    let e = sys.expansion();
    let md = sys.max_digit();
    let mut r = Report::default();
    r.push("base", text(sys.base().to_string()));
    r.push("d1", text(e.d1_text(md)));
    r.push("d1_finite", Field::Bool(e.d1_finite));
    r.push("dstar", text(e.dstar_text(md)));
    r.push("dstar_preperiod", text(e.dstar_preperiod.render(md)));
    r.push("dstar_period", text(e.dstar_period.render(md)));
    r.push("orbit_size", int(e.orbit.len()));
    r.push("m_zero", int(e.m_zero));
    r.push("blichfeldt_bound", ctx.rat(&blichfeldt_bound(sys.base())));
    r.rows = e
        .orbit
        .iter()
        .enumerate()
        .map(|(i, x)| vec![("index".to_string(), int(i)), ("point".to_string(), ctx.fe(x))])
        .collect();
    Ok(r)
}

pub fn words(ctx: &Ctx, base: &str, n: usize, list: bool, limit: u64) -> Outcome {
    let sys = system(base)?;
    let mut r = Report::default();
    r.push("base", text(sys.base().to_string()));
    r.push("n", int(n));
    r.push("count", Field::Big(sys.count_words(n).to_string()));
    let beta_n = FieldElement::beta(sys.base()).pow(n as u64);
    r.push("beta_pow_n", ctx.fe(&beta_n));
    if list {
        let md = sys.max_digit();
        r.rows = sys
            .automaton()
            .enumerate(n, limit)?
            .into_iter()
            .map(|(w, s)| vec![("word".to_string(), text(w.render(md))), ("state".to_string(), int(s))])
            .collect();
    }
    Ok(r)
}

pub fn cylinder(ctx: &Ctx, base: &str, word: &str) -> Outcome {
    let sys = system(base)?;
    let w = Word::parse(word)?;
    let c = sys.cylinder(&w)?;
    let mut r = Report::default();
    r.push("base", text(sys.base().to_string()));
    r.push("word", text(w.render(sys.max_digit())));
    r.push("order", int(c.order()));
    r.push("state", int(c.state));
    r.push("left", ctx.fe(&c.left));
    r.push("right", ctx.fe(&c.right()));
    r.push("lebesgue", ctx.fe(&c.lebesgue));
    r.push("beta_pow_minus_n", ctx.fe(&c.scale));
    r.push("bounds_hold", Field::Bool(sys.lebesgue_bounds_hold(&c, sys.m_zero())));
    r.push("parry", ctx.fe(&sys.parry().of_cylinder(&c)));
    Ok(r)
}

pub fn measure(ctx: &Ctx, base: &str, k: usize, limit: u64) -> Outcome {
    let sys = system(base)?;
    let md = sys.max_digit();
    let a = sys.automaton();
    let mut total = FieldElement::zero(sys.base());
    let mut rows = Vec::new();
    for (w, _) in a.enumerate(k, limit)? {
        let mu = sys.parry().markov(a, w.digits());
        let mut shifted = FieldElement::zero(sys.base());
        for d in 0..=md {
            let mut aw = vec![d];
            aw.extend_from_slice(w.digits());
            if sys.is_admissible(&aw) {
                shifted = &shifted + &sys.parry().markov(a, &aw);
            }
        }
        total = &total + &mu;
        rows.push(vec![
            ("word".to_string(), text(w.render(md))),
            ("mu".to_string(), ctx.fe(&mu)),
            ("invariant".to_string(), Field::Bool(shifted == mu)),
        ]);
    }
    let mut r = Report::default();
    r.push("base", text(sys.base().to_string()));
    r.push("k", int(k));
    r.push("total", ctx.fe(&total));
    r.push("total_is_one", Field::Bool(total == FieldElement::one(sys.base())));
    r.rows = rows;
    Ok(r)
}

pub fn constants(ctx: &Ctx, base: &str, eps: &str, k: usize, blichfeldt: bool) -> Outcome {
    let sys = system(base)?;
    let eps = number(eps, "epsilon")?;
    let c = ConstantsBundle::new(&sys, &eps, k, blichfeldt);
    let mut r = Report::default();
    r.push("base", text(c.base.clone()));
    r.push("eps", ctx.rat(&c.eps));
    r.push("k", int(c.k));
    r.push("m_exact", int(c.m_exact));
    r.push("m_blichfeldt", ctx.rat(&c.m_blichfeldt));
    r.push("m_used", int(c.m_used));
    r.push("eta_lower", ctx.rat(&c.eta_lower));
    r.push("eta_upper", ctx.rat(&c.eta_upper));
    r.push("c_big", ctx.rat(&c.c_big));
    r.push("c_corollary", ctx.fe(&c.c_corollary));
    r.push("n0", int(c.n0));
    r.push("words_k", Field::Big(c.words_k.to_string()));
    Ok(r)
}

/// `"a"` or an inclusive range `"a..b"`.
pub fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::new(EXIT_ERROR, format!("bad range `{s}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn census(ctx: &Ctx, base: &str, n: &str, eps: &str, k: usize) -> Outcome {
    let sys = system(base)?;
    let eps = number(eps, "epsilon")?;
    let (n0, n1) = parse_range(n)?;
    let m = sys.m_zero();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in n0..=n1 {
        let c = non_normal_census(&sys, n, &eps, k, m)?;
        if !c.passes() {
            violations.push(n);
        }
        rows.push(vec![
            ("n".to_string(), int(n)),
            ("words".to_string(), Field::Big(c.words.to_string())),
            ("non_normal".to_string(), int(c.count)),
            ("mass".to_string(), ctx.fe(&c.mass)),
            ("mass_bound_upper".to_string(), Field::Float(c.mass_bound.1)),
            ("count_bound_upper".to_string(), Field::Float(c.count_bound.1)),
            ("applies".to_string(), Field::Bool(c.applies)),
            ("mass_ok".to_string(), Field::Bool(c.mass_ok)),
            ("count_ok".to_string(), Field::Bool(c.count_ok)),
        ]);
    }
    let mut r = Report::default();
    r.push("base", text(sys.base().to_string()));
    r.push("eps", ctx.rat(&eps));
    r.push("k", int(k));
    r.push("m", int(m));
    r.rows = rows;
    if violations.is_empty() {
        Ok(r)
    } else {
        let list = violations.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
        Err(Failure { code: EXIT_BOUND, message: format!("bound violated at n = {list}"), report: Some(r) })
    }
}

pub fn inscribe(ctx: &Ctx, base: &str, lo: &str, hi: &str) -> Outcome {
    let sys = system(base)?;
    let (lo, hi) = (number(lo, "left end")?, number(hi, "right end")?);
    let b = sys.base();
    let interval = ExactInterval::new(FieldElement::from_rat(b, &lo), FieldElement::from_rat(b, &hi))?;
    let m = sys.m_zero();
    let found = inscribed_beta_adic(&sys, &interval, m)?;
    let c = found.cylinder;
    let factor = if b.is_integer() {
        FieldElement::from_int(b, 2 * b.floor() as i64)
    } else {
        sys.pow(m as i64 + 4).scale(&rat(2))
    };
    let ratio_ok = (&c.lebesgue * &factor).try_cmp(&interval.length())? != std::cmp::Ordering::Less;
    let mut r = Report::default();
    r.push("base", text(b.to_string()));
    r.push("interval_lo", ctx.rat(&lo));
    r.push("interval_hi", ctx.rat(&hi));
    r.push("word", text(c.word.render(sys.max_digit())));
    r.push("order", int(c.order()));
    r.push("left", ctx.fe(&c.left));
    r.push("lebesgue", ctx.fe(&c.lebesgue));
    r.push("ratio_bound_met", Field::Bool(ratio_ok));
    r.push("examined", int(found.examined));
    Ok(r)
}

fn read_config(ctx: &Ctx, path: Option<&Path>) -> Result<GeneratorConfig, Failure> {
    let path = path
        .or(ctx.seed_config.as_deref())
        .ok_or_else(|| Failure::new(EXIT_ERROR, "generate needs a config path or --seed-config"))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    Ok(GeneratorConfig::from_json(&text)?)
}

pub fn generate_cmd(ctx: &Ctx, config: Option<&Path>, out: &Path, target: Option<usize>) -> Outcome {
    let mut cfg = read_config(ctx, config)?;
    if let Some(t) = target {
        cfg.target_digits = t;
    }
    let res = generate(&cfg)?;
    let io = |e: std::io::Error| Failure::new(EXIT_ERROR, format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    let mut rows = Vec::new();
    for s in &res.streams {
        let name = format!("digits_{}.txt", s.position);
        fs::write(out.join(&name), format!("{}\n", s.render())).map_err(io)?;
        rows.push(vec![
            ("position".to_string(), int(s.position)),
            ("base".to_string(), text(s.base.clone())),
            ("digits".to_string(), int(s.digits.len())),
            ("file".to_string(), text(name)),
        ]);
    }
    let mut trace = Vec::new();
    write_jsonl(&mut trace, &res.trace)?;
    fs::write(out.join("trace.jsonl"), trace).map_err(io)?;
    let checks: usize = res.trace.iter().map(|t| t.checks.len()).sum();
    let passed = res.trace.iter().all(|t| t.checks.iter().all(|c| c.passed));
    let ledger_ok = res.trace.iter().all(|t| t.ledger.as_ref().is_none_or(|l| l.holds));
    let mut r = Report::default();
    r.push("kind", text(res.kind.clone()));
    r.push("mode", text(res.mode.clone()));
    r.push("steps", int(res.steps));
    r.push("ops", int(res.ops));
    r.push("block_checks", int(checks));
    r.push("all_blocks_pass", Field::Bool(passed));
    r.push("ledger_holds", Field::Bool(ledger_ok));
    r.push("exhausted", text(res.exhausted.clone().unwrap_or_default()));
    r.rows = rows;
    match res.exhausted {
        Some(msg) => Err(Failure { code: EXIT_BUDGET, message: msg, report: Some(r) }),
        None => Ok(r),
    }
}

/// Prefix lengths `step, 2 step, ..., n`.
fn checkpoints(n: usize, step: usize) -> Vec<usize> {
    let step = step.max(1);
    let mut v: Vec<usize> = (1..=n / step).map(|i| i * step).collect();
    if v.last() != Some(&n) {
        v.push(n);
    }
    v
}

pub fn analyze(ctx: &Ctx, path: &Path, base: &str, n: usize, step: Option<usize>, k: usize) -> Outcome {
    let raw = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    let digits = Word::parse(&raw)?;
    let b: PisotNumber = parse_base(base)?;
    let sys = BetaSystem::new(&b)?;
    digits.check_digits(sys.max_digit())?;
    if digits.len() < n {
        return Err(Error::InsufficientDigits { have: digits.len(), need: n }.into());
    }
    let marks = checkpoints(n, step.unwrap_or((n / 10).max(1)));
    let mut rows: Vec<Record> = Vec::new();
    let mut r = Report::default();
    r.push("base", text(b.to_string()));
    r.push("digits_available", int(digits.len()));
    r.push("n", int(n));
    if b.is_integer() {
        let radix = sys.max_digit() + 1;
        let pts = orbit_points(digits.digits(), radix, n)?;
        r.push("truncation_error", ctx.rat(&pts.error_bound));
        for &m in &marks {
            let d = extreme_discrepancy(&pts.points[..m]);
            let s = simple_discrepancy(&digits.digits()[..m], radix)?;
            rows.push(vec![
                ("prefix".to_string(), int(m)),
                ("discrepancy".to_string(), ctx.rat(&d)),
                ("discrepancy_lower".to_string(), ctx.rat(&(&d - &pts.error_bound).max(Rat::from_integer(0.into())))),
                ("discrepancy_upper".to_string(), ctx.rat(&(&d + &pts.error_bound))),
                ("simple_discrepancy".to_string(), ctx.rat(&s)),
            ]);
        }
    } else {
        if !sys.is_admissible(&digits.digits()[..n]) {
            return Err(Error::Inadmissible(format!("prefix of length {n}")).into());
        }
        for &m in &marks {
            let (w, dev) = block_frequency_deviation(&sys, &digits.digits()[..m], k)?;
            rows.push(vec![
                ("prefix".to_string(), int(m)),
                ("k".to_string(), int(k)),
                ("deviation".to_string(), Field::Float(dev)),
                ("worst_block".to_string(), text(w.render(sys.max_digit()))),
            ]);
        }
    }
    r.rows = rows;
    Ok(r)
}
