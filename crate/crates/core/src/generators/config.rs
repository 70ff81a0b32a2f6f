use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::PisotNumber;
use crate::error::{Error, Result};
use crate::poly::{rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Bhs,
    Pisot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Faithful,
    Scaled,
}

/// Logarithm used for `t_{i+1} = ⌈log(i+1)⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TLog {
    #[default]
    Natural,
    Binary,
}

/// Step schedules for scaled runs. Entry `i - 1` applies to step `i + 1`;
/// the last entry repeats.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub t: Vec<usize>,
    /// Rationals such as `"1/8"`.
    pub eps: Vec<String>,
    pub k: Vec<usize>,
    pub n: Vec<usize>,
}

fn pick<T: Clone>(v: &[T], step: u64) -> Option<T> {
    let idx = (step as usize).saturating_sub(2);
    v.get(idx).or(v.last()).cloned()
}

impl Profile {
    pub fn t_at(&self, step: u64) -> Option<usize> {
        pick(&self.t, step)
    }

    pub fn eps_at(&self, step: u64) -> Result<Option<Rat>> {
        pick(&self.eps, step).map(|s| parse_rat(&s)).transpose()
    }

    pub fn k_at(&self, step: u64) -> Option<usize> {
        pick(&self.k, step)
    }

    pub fn n_at(&self, step: u64) -> Option<usize> {
        pick(&self.n, step)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t.is_empty() || self.eps.is_empty() || self.k.is_empty() || self.n.is_empty() {
            return Err(Error::InvalidConfig("scaled profile needs t, eps, k and n schedules".into()));
        }
        if self.t.windows(2).any(|w| w[1] < w[0]) || self.t.contains(&0) {
            return Err(Error::InvalidConfig("profile t must be positive and non-decreasing".into()));
        }
        if self.k.contains(&0) || self.n.contains(&0) {
            return Err(Error::InvalidConfig("profile k and n must be positive".into()));
        }
        for e in &self.eps {
            let e = parse_rat(e)?;
            if e <= Rat::zero() {
                return Err(Error::InvalidConfig(format!("profile eps {e} must be positive")));
            }
        }
        Ok(())
    }
}

/// Declared cost of computing `f(j)`: `per_value + per_index * j` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cost {
    #[serde(default = "one")]
    pub per_value: u64,
    #[serde(default)]
    pub per_index: u64,
}

fn one() -> u64 {
    1
}

impl Default for Cost {
    fn default() -> Self {
        Cost { per_value: 1, per_index: 0 }
    }
}

/// Non-decreasing unbounded function `f` with a declared evaluation cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FSpec {
    /// `Σ coeffs[j] i^j`, rational coefficients, constant term first.
    Polynomial {
        coeffs: Vec<String>,
        #[serde(default)]
        cost: Cost,
    },
    /// `f(i) = values[i - 1]`, the last value repeating.
    Table {
        values: Vec<String>,
        #[serde(default)]
        cost: Cost,
    },
    Constant {
        value: String,
        #[serde(default)]
        cost: Cost,
    },
}

impl Default for FSpec {
    fn default() -> Self {
        FSpec::square()
    }
}

impl FSpec {
    /// `f(i) = i²`.
    pub fn square() -> Self {
        FSpec::Polynomial { coeffs: vec!["0".into(), "0".into(), "1".into()], cost: Cost::default() }
    }

    fn cost(&self) -> Cost {
        match self {
            FSpec::Polynomial { cost, .. } | FSpec::Table { cost, .. } | FSpec::Constant { cost, .. } => *cost,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FSpec::Polynomial { coeffs, .. } if coeffs.is_empty() => {
                Err(Error::InvalidConfig("f_spec polynomial has no coefficients".into()))
            }
            FSpec::Table { values, .. } if values.is_empty() => {
                Err(Error::InvalidConfig("f_spec table is empty".into()))
            }
            FSpec::Polynomial { coeffs: v, .. } | FSpec::Table { values: v, .. } => {
                v.iter().try_for_each(|c| parse_rat(c).map(drop))
            }
            FSpec::Constant { value, .. } => parse_rat(value).map(drop),
        }
    }

    pub fn eval(&self, i: u64) -> Result<Rat> {
        match self {
            FSpec::Polynomial { coeffs, .. } => {
                let x = rat(i as i64);
                let mut acc = Rat::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &x + parse_rat(c)?;
                }
                Ok(acc)
            }
            FSpec::Table { values, .. } => {
                let idx = (i as usize).saturating_sub(1).min(values.len() - 1);
                parse_rat(&values[idx])
            }
            FSpec::Constant { value, .. } => parse_rat(value),
        }
    }

    /// Largest `m` in `1..=max(i, 1)` whose first `m` values fit in `i`
    /// cost units (at least 1, since `f(1)` is given), and `f(m)`.
    pub fn within_budget(&self, i: u64) -> Result<(u64, Rat)> {
        let c = self.cost();
        let mut spent = 0u64;
        let mut m = 0u64;
        while m < i.max(1) {
            let next = c.per_value.saturating_add(c.per_index.saturating_mul(m + 1));
            if spent.saturating_add(next) > i {
                break;
            }
            spent += next;
            m += 1;
        }
        let m = m.max(1);
        Ok((m, self.eval(m)?))
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidConfig(format!("cannot parse rational `{s}`"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Run configuration, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub kind: Kind,
    /// Base specifications (integers or polynomials); ignored for BHS.
    #[serde(default)]
    pub bases: Vec<String>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub profile: Option<Profile>,
    pub target_digits: usize,
    #[serde(default)]
    pub f_spec: FSpec,
    /// Reserved; randomised runs are not supported and `true` is rejected.
    #[serde(default)]
    pub seeded: bool,
    #[serde(default)]
    pub t_log: TLog,
    /// Step limit for one run.
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    /// Candidates handed to the acceptance test per step.
    #[serde(default = "default_candidate_budget")]
    pub candidate_budget: u64,
    /// Search-tree nodes per step.
    #[serde(default = "default_node_budget")]
    pub node_budget: u64,
    /// Record wall-clock times in the trace; off keeps traces reproducible.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_max_steps() -> u64 {
    64
}

fn default_candidate_budget() -> u64 {
    100_000
}

fn default_node_budget() -> u64 {
    50_000_000
}

impl GeneratorConfig {
    pub fn bhs(target_digits: usize, f_spec: FSpec) -> Self {
        GeneratorConfig {
            kind: Kind::Bhs,
            bases: Vec::new(),
            mode: Mode::Faithful,
            profile: None,
            target_digits,
            f_spec,
            seeded: false,
            t_log: TLog::Natural,
            max_steps: default_max_steps(),
            candidate_budget: default_candidate_budget(),
            node_budget: default_node_budget(),
            record_timing: false,
        }
    }

    pub fn pisot(bases: &[&str], mode: Mode, profile: Option<Profile>, target_digits: usize) -> Self {
        GeneratorConfig {
            kind: Kind::Pisot,
            bases: bases.iter().map(|s| s.to_string()).collect(),
            mode,
            profile,
            ..GeneratorConfig::bhs(target_digits, FSpec::square())
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: GeneratorConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeded {
            return Err(Error::InvalidConfig("seeded runs are not supported".into()));
        }
        self.f_spec.validate()?;
        if self.kind == Kind::Pisot {
            if self.bases.is_empty() {
                return Err(Error::InvalidConfig("pisot runs need at least one base".into()));
            }
            for b in &self.bases {
                parse_base(b)?;
            }
            if self.mode == Mode::Scaled {
                self.profile
                    .as_ref()
                    .ok_or_else(|| Error::InvalidConfig("scaled mode needs a profile".into()))?
                    .validate()?;
            }
        }
        Ok(())
    }

    pub fn raw_bases(&self) -> Result<Vec<PisotNumber>> {
        self.bases.iter().map(|b| parse_base(b)).collect()
    }
}

/// A base written as an integer, a name (`phi`, `plastic`, `tribonacci`)
/// or a monic integer polynomial in `x`.
pub fn parse_base(text: &str) -> Result<PisotNumber> {
    let t = text.trim();
    match t {
        "phi" | "golden" => return Ok(PisotNumber::golden()),
        "plastic" => return Ok(PisotNumber::plastic()),
        "tribonacci" => return Ok(PisotNumber::tribonacci()),
        _ => {}
    }
    if let Ok(b) = t.parse::<u32>() {
        return PisotNumber::integer(b);
    }
    PisotNumber::parse(t)
}

/// `⌈log(i)⌉` in the configured logarithm, at least 1.
pub fn t_of(i: u64, log: TLog) -> usize {
    if i <= 1 {
        return 1;
    }
    let v = match log {
        TLog::Binary => crate::real::ceil_log2(&BigInt::from(i)) as usize,
        TLog::Natural => {
            let x = BigInt::from(i);
            crate::real::certified_ceil(|bits| crate::real::ln_rat(&Rat::from_integer(x.clone()), bits))
                .to_usize()
                .unwrap()
        }
    };
    v.max(1)
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig::bhs(500, FSpec::square())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn f_spec_budget() {
        let f = FSpec::square();
        assert_eq!(f.within_budget(1).unwrap(), (1, rat(1)));
        assert_eq!(f.within_budget(5).unwrap(), (5, rat(25)));
        let g = FSpec::Polynomial { coeffs: vec!["1/2".into()], cost: Cost { per_value: 1, per_index: 1 } };
        // costs 2, 3, 4, ...
        assert_eq!(g.within_budget(6).unwrap().0, 2);
        assert_eq!(g.eval(9).unwrap(), ratio(1, 2));
        assert!(num_traits::One::is_one(&FSpec::Table { values: vec!["1".into()], cost: Cost::default() }.eval(7).unwrap()));
    }

    #[test]
    fn t_values() {
        assert_eq!(t_of(1, TLog::Natural), 1);
        assert_eq!(t_of(2, TLog::Natural), 1);
        assert_eq!(t_of(3, TLog::Natural), 2);
        assert_eq!(t_of(7, TLog::Natural), 2);
        assert_eq!(t_of(8, TLog::Natural), 3);
        assert_eq!(t_of(5, TLog::Binary), 3);
    }

    #[test]
    fn config_json() {
        let c = GeneratorConfig::from_json(
            r#"{"kind":"pisot","bases":["phi","x^3-x-1"],"mode":"scaled",
               "profile":{"t":[1,1,2],"eps":["1/8"],"k":[1],"n":[300]},"target_digits":100}"#,
        )
        .unwrap();
        assert_eq!(c.raw_bases().unwrap().len(), 2);
        assert!(GeneratorConfig::from_json(r#"{"kind":"bhs","target_digits":5,"seeded":true}"#).is_err());
        assert!(GeneratorConfig::from_json(r#"{"kind":"pisot","target_digits":5}"#).is_err());
    }
}
