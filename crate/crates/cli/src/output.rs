//! Reports and their JSON, CSV and text renderings.

use std::io::{self, Write};

use betanormal::algebraic::FieldElement;
use betanormal::poly::Rat;
use clap::ValueEnum;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One output value. Exact values carry their decimal rendering.
#[derive(Debug, Clone)]
pub enum Field {
    Text(String),
    Int(i128),
    Big(String),
    Bool(bool),
    Float(f64),
    Exact { exact: String, decimal: String },
    List(Vec<Field>),
}

impl Field {
    pub fn rat(r: &Rat, digits: usize) -> Field {
        Field::Exact { exact: r.to_string(), decimal: decimal(r, digits) }
    }

    pub fn field(x: &FieldElement, digits: usize) -> Field {
        if let Some(r) = x.as_rat() {
            return Field::rat(&r, digits);
        }
        Field::Exact { exact: x.to_string(), decimal: decimal_field(x, digits) }
    }

    fn json(&self) -> Value {
        match self {
            Field::Text(s) | Field::Big(s) => json!(s),
            Field::Int(i) => json!(i),
            Field::Bool(b) => json!(b),
            Field::Float(f) => json!(f),
            Field::Exact { exact, decimal } => json!({ "exact": exact, "decimal": decimal }),
            Field::List(v) => Value::Array(v.iter().map(Field::json).collect()),
        }
    }

    fn text(&self) -> String {
        match self {
            Field::Text(s) | Field::Big(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Float(f) => format!("{f}"),
            Field::Exact { exact, decimal } if exact == decimal => exact.clone(),
            Field::Exact { exact, decimal } if exact.len() > 48 => format!("~{decimal}"),
            Field::Exact { exact, decimal } => format!("{exact} (~{decimal})"),
            Field::List(v) => v.iter().map(Field::text).collect::<Vec<_>>().join(", "),
        }
    }

    /// CSV cells: exact values take two columns.
    fn cells(&self) -> Vec<String> {
        match self {
            Field::Exact { exact, decimal } => vec![exact.clone(), decimal.clone()],
            Field::List(v) => vec![v.iter().map(Field::text).collect::<Vec<_>>().join(";")],
            f => vec![f.text()],
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Field::Exact { .. })
    }
}

pub type Record = Vec<(String, Field)>;

/// Summary fields plus an optional table of rows sharing one layout.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub summary: Record,
    pub rows: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, key: &str, f: Field) {
        self.summary.push((key.to_string(), f));
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let mut obj = object(&self.summary);
                if !self.rows.is_empty() {
                    obj.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Object(object(r))).collect()));
                }
                serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))?;
                writeln!(out)
            }
            Format::Csv => {
                let table: Vec<&Record> = if self.rows.is_empty() { vec![&self.summary] } else { self.rows.iter().collect() };
                let mut w = csv::Writer::from_writer(out);
                let mut header = Vec::new();
                for (k, f) in table[0] {
                    header.push(k.clone());
                    if f.is_exact() {
                        header.push(format!("{k}_decimal"));
                    }
                }
                w.write_record(&header)?;
                for r in table {
                    w.write_record(r.iter().flat_map(|(_, f)| f.cells()))?;
                }
                w.flush()
            }
            Format::Text => {
                let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, f) in &self.summary {
                    writeln!(out, "{k:<width$}  {}", f.text())?;
                }
                if !self.rows.is_empty() {
                    if !self.summary.is_empty() {
                        writeln!(out)?;
                    }
                    let cols: Vec<&String> = self.rows[0].iter().map(|(k, _)| k).collect();
                    let cells: Vec<Vec<String>> =
                        self.rows.iter().map(|r| r.iter().map(|(_, f)| f.text()).collect()).collect();
                    let widths: Vec<usize> = (0..cols.len())
                        .map(|i| cells.iter().map(|r| r[i].len()).chain([cols[i].len()]).max().unwrap())
                        .collect();
                    let line = |vals: Vec<&str>| {
                        vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ")
                    };
                    writeln!(out, "{}", line(cols.iter().map(|s| s.as_str()).collect()).trim_end())?;
                    for r in &cells {
                        writeln!(out, "{}", line(r.iter().map(|s| s.as_str()).collect()).trim_end())?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn object(r: &Record) -> Map<String, Value> {
    r.iter().map(|(k, f)| (k.clone(), f.json())).collect()
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Decimal rendering of `r` rounded to `digits` significant digits,
/// in scientific notation outside `[1e-6, 1e15)`.
pub fn decimal(r: &Rat, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1) as i64;
    let neg = r.is_negative();
    let a = r.abs();
    // exponent estimate from bit lengths, then corrected
    let mut e = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(pow10(k as u32))
        } else {
            Rat::new(1.into(), pow10((-k) as u32))
        }
    };
    while ten(e) > a {
        e -= 1;
    }
    while ten(e + 1) <= a {
        e += 1;
    }
    let scaled = &a * ten(digits - 1 - e);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut m = if &rem * 2 >= *scaled.denom() { q + 1 } else { q };
    if m == pow10(digits as u32) {
        m /= 10;
        e += 1;
    }
    let mut s = m.to_str_radix(10);
    while s.len() > 1 && s.ends_with('0') {
        s.pop();
    }
    let sign = if neg { "-" } else { "" };
    if !(-6..15).contains(&e) {
        let (h, t) = s.split_at(1);
        let t = if t.is_empty() { String::new() } else { format!(".{t}") };
        return format!("{sign}{h}{t}e{e}");
    }
    let body = if e >= 0 {
        let int_len = e as usize + 1;
        if s.len() <= int_len {
            format!("{s}{}", "0".repeat(int_len - s.len()))
        } else {
            format!("{}.{}", &s[..int_len], &s[int_len..])
        }
    } else {
        format!("0.{}{s}", "0".repeat((-e - 1) as usize))
    };
    format!("{sign}{body}")
}

pub fn decimal_field(x: &FieldElement, digits: usize) -> String {
    if let Some(r) = x.as_rat() {
        return decimal(&r, digits);
    }
    let bits = (digits as f64 * 3.33) as u32 + 24;
    let mut b = bits;
    loop {
        let iv = x.enclose(b);
        let lo = decimal(iv.lo(), digits);
        if lo == decimal(iv.hi(), digits) || b > 8 * bits {
            return lo;
        }
        b *= 2;
    }
}

/// Parses `"a/b"`, `"a"` or a terminating decimal such as `"0.25"`.
pub fn parse_number(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((i, f)) = s.split_once('.') {
        if s.contains('/') {
            return None;
        }
        let neg = i.starts_with('-');
        let digits = format!("{}{}", i.trim_start_matches('-'), f);
        let n: BigInt = digits.parse().ok()?;
        let n = if neg { -n } else { n };
        return Some(Rat::new(n, pow10(f.len() as u32)));
    }
    betanormal::generators::parse_rat(s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use betanormal::poly::ratio;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(decimal(&ratio(2, 3), 3), "0.667");
        assert_eq!(decimal(&ratio(-5, 2), 12), "-2.5");
        assert_eq!(decimal(&ratio(1, 65536), 4), "0.00001526");
        assert_eq!(decimal(&ratio(1, 1 << 40), 3), "9.09e-13");
        assert_eq!(decimal(&ratio(999, 1000), 2), "1");
        assert_eq!(decimal(&Rat::from_integer(pow10(20)), 3), "1e20");
        assert_eq!(decimal(&ratio(1234, 1), 12), "1234");
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_number("3/8"), Some(ratio(3, 8)));
        assert_eq!(parse_number("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse_number("x"), None);
    }
}
