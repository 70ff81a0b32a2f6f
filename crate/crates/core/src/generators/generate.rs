use serde::Serialize;

use super::bhs::{bhs_init, bhs_step, Budgets};
use super::config::{GeneratorConfig, Kind, Mode};
use super::pisot::{pisot_init, pisot_step};
use super::trace::StepTrace;
use crate::beta::Word;
use crate::error::{Error, Result};

/// Digits of `X` in one base position.
#[derive(Debug, Clone, Serialize)]
pub struct DigitStream {
    pub position: usize,
    pub base: String,
    pub max_digit: u32,
    pub digits: Word,
}

impl DigitStream {
    pub fn render(&self) -> String {
        self.digits.render(self.max_digit)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorOutput {
    pub kind: String,
    pub mode: String,
    pub steps: u64,
    pub ops: u64,
    pub streams: Vec<DigitStream>,
    #[serde(skip)]
    pub trace: Vec<StepTrace>,
    /// Set when a budget ran out before the target; the output is partial.
    pub exhausted: Option<String>,
}

impl GeneratorOutput {
    pub fn first_len(&self) -> usize {
        self.streams.first().map_or(0, |s| s.digits.len())
    }
}

fn partial(e: Error) -> Result<String> {
    match e {
        Error::CandidateBudgetExceeded { .. } => Ok(e.to_string()),
        e => Err(e),
    }
}

/// Runs steps until the first digit stream reaches `target_digits`, the
/// step limit is hit or a search budget runs out.
pub fn generate(config: &GeneratorConfig) -> Result<GeneratorOutput> {
    config.validate()?;
    let budgets = Budgets {
        candidates: config.candidate_budget,
        nodes: config.node_budget,
        record_timing: config.record_timing,
    };
    let mut trace = Vec::new();
    let mut exhausted = None;
    match config.kind {
        Kind::Bhs => {
            let mut st = bhs_init();
            while st.digits[0].len() < config.target_digits {
                if st.i >= config.max_steps {
                    exhausted = Some(Error::BudgetExhausted { steps: st.i }.to_string());
                    break;
                }
                match bhs_step(&st, &config.f_spec, budgets) {
                    Ok((next, tr)) => {
                        st = next;
                        trace.push(tr);
                    }
                    Err(e) => {
                        exhausted = Some(partial(e)?);
                        break;
                    }
                }
            }
            let streams = st
                .digits
                .iter()
                .enumerate()
                .map(|(idx, w)| DigitStream {
                    position: idx + 1,
                    base: (idx + 2).to_string(),
                    max_digit: idx as u32 + 1,
                    digits: w.clone(),
                })
                .collect();
            Ok(GeneratorOutput {
                kind: "bhs".into(),
                mode: "faithful".into(),
                steps: st.i,
                ops: st.ops,
                streams,
                trace,
                exhausted,
            })
        }
        Kind::Pisot => {
            let raw = config.raw_bases()?;
            let mut st = pisot_init(&raw, config.mode, config.profile.clone(), config.t_log)?;
            while st.digits[0].len() < config.target_digits {
                if st.i >= config.max_steps {
                    exhausted = Some(Error::BudgetExhausted { steps: st.i }.to_string());
                    break;
                }
                match pisot_step(&st, budgets) {
                    Ok((next, tr)) => {
                        st = next;
                        trace.push(tr);
                    }
                    Err(e) => {
                        exhausted = Some(partial(e)?);
                        break;
                    }
                }
            }
            let streams = st
                .digits
                .iter()
                .enumerate()
                .map(|(idx, w)| DigitStream {
                    position: idx + 1,
                    base: st.label(idx + 1),
                    max_digit: st.system(idx + 1).max_digit(),
                    digits: w.clone(),
                })
                .collect();
            Ok(GeneratorOutput {
                kind: "pisot".into(),
                mode: match config.mode {
                    Mode::Faithful => "faithful".into(),
                    Mode::Scaled => "scaled".into(),
                },
                steps: st.i,
                ops: st.ops,
                streams,
                trace,
                exhausted,
            })
        }
    }
}
