use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{redexes, step, Calculus, Redex, RewriteConfig, RewriteError};
use crate::syntax::Judgement;

/// Safety cap for `σπα`, which always terminates.
pub const SPA_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Non-α redexes leftmost-outermost until none is left, then one α step.
    Leftmost,
    /// The last redex of the enumeration.
    Rightmost,
    /// Uniform choice driven by a seed.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NormalForm,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub redex: Redex,
    pub result: Judgement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: Judgement,
    pub steps: Vec<Step>,
    pub status: Status,
}

impl Trace {
    pub fn last(&self) -> &Judgement {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// The start followed by every intermediate result.
    pub fn judgements(&self) -> impl Iterator<Item = &Judgement> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct JsonStep {
            rule: String,
            position: Vec<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            fresh: Option<String>,
            result: String,
        }
        #[derive(Serialize)]
        struct JsonTrace {
            start: String,
            steps: Vec<JsonStep>,
            status: Status,
        }
        let t = JsonTrace {
            start: self.start.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| JsonStep {
                    rule: s.redex.rule.to_string(),
                    position: s.redex.position.iter().map(|p| p.to_string()).collect(),
                    fresh: s.redex.fresh.as_ref().map(|v| v.to_string()),
                    result: s.result.to_string(),
                })
                .collect(),
            status: self.status,
        };
        serde_json::to_value(t).expect("plain data")
    }
}

fn choose(rs: Vec<Redex>, strategy: Strategy, rng: &mut Option<ChaCha8Rng>) -> Option<Redex> {
    match strategy {
        Strategy::Leftmost => {
            let first_plain = rs.iter().position(|r| !r.rule.is_alpha());
            let i = first_plain.or(if rs.is_empty() { None } else { Some(0) })?;
            rs.into_iter().nth(i)
        }
        Strategy::Rightmost => rs.into_iter().last(),
        Strategy::Random(_) => {
            if rs.is_empty() {
                return None;
            }
            let rng = rng.as_mut().expect("seeded");
            let i = rng.gen_range(0..rs.len());
            rs.into_iter().nth(i)
        }
    }
}

/// Reduces until no redex is left or `max_steps` steps were taken.
pub fn normalize(
    j: &Judgement,
    calc: Calculus,
    strategy: Strategy,
    max_steps: usize,
    cfg: &RewriteConfig,
) -> Trace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cur = j.clone();
    let mut steps = Vec::new();
    loop {
        let rs = redexes(&cur, calc, cfg);
        let Some(r) = choose(rs, strategy, &mut rng) else {
            return Trace {
                start: j.clone(),
                steps,
                status: Status::NormalForm,
            };
        };
        if steps.len() >= max_steps {
            return Trace {
                start: j.clone(),
                steps,
                status: Status::BudgetExhausted,
            };
        }
        let next = step(&cur, &r).expect("enumerated redexes contract");
        steps.push(Step {
            redex: r,
            result: next.clone(),
        });
        cur = next;
    }
}

/// `σπα` normalization with the default strategy. Hitting the cap means a bug.
pub fn normalize_spa(j: &Judgement, cfg: &RewriteConfig) -> Result<Trace, RewriteError> {
    let t = normalize(j, Calculus::Spa, Strategy::Leftmost, SPA_STEP_CAP, cfg);
    match t.status {
        Status::NormalForm => Ok(t),
        Status::BudgetExhausted => Err(RewriteError::InternalLimit(SPA_STEP_CAP)),
    }
}

pub fn normalize_lpi(
    j: &Judgement,
    max_steps: usize,
    strategy: Strategy,
    cfg: &RewriteConfig,
) -> Trace {
    normalize(j, Calculus::Lpi, strategy, max_steps, cfg)
}
