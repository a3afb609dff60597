use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::order::Requirement;
use crate::setup::{irremediable, SetupError, TestSetup};

use super::{items, AlgorithmicError, BoxEnumerator, Dovetail, Oracle, Step, Tick};

/// `{ t ∈ T | α̂(t) ∩ R = ∅ }`, in observation order.
pub fn omega_set(setup: &TestSetup, r: &Requirement) -> Result<Vec<String>, SetupError> {
    setup.check(r)?;
    let omega = irremediable(setup, r.members());
    Ok(omega
        .ones()
        .map(|t| setup.observations()[t].clone())
        .collect())
}

/// Enumerates the exact `Ω_R` of a finite setup, one observation per step.
pub fn finite_omega_oracle(
    setup: &TestSetup,
    r: &Requirement,
) -> Result<Oracle<String>, SetupError> {
    let omega = omega_set(setup, r)?;
    Ok(Oracle::from_items(format!("omega({})", r.name()), omega))
}

/// Enumerates `T ∖ Ω_R` of a finite setup, one observation per step.
pub fn finite_co_omega_oracle(
    setup: &TestSetup,
    r: &Requirement,
) -> Result<Oracle<String>, SetupError> {
    setup.check(r)?;
    let omega = irremediable(setup, r.members());
    let rest: Vec<String> = (0..setup.observations().len())
        .filter(|&t| !omega.contains(t))
        .map(|t| setup.observations()[t].clone())
        .collect();
    Ok(Oracle::from_items(format!("co-omega({})", r.name()), rest))
}

/// Enumerates `α(S)` for one element of a finite setup.
pub fn observation_stream(setup: &TestSetup, element: usize) -> BoxEnumerator<String> {
    let ids: Vec<String> = setup
        .alpha_ids(element)
        .into_iter()
        .map(String::from)
        .collect();
    Box::new(items(ids))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Yielded,
    Working,
    Exhausted,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Yielded => "Yielded",
            EventKind::Working => "Working",
            EventKind::Exhausted => "Exhausted",
        })
    }
}

/// One scheduler step. Enumerator 0 is the input side; enumerator `k > 0`
/// probes the `k`-th distinct observation it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRecord {
    pub step: usize,
    pub source: usize,
    pub event: EventKind,
    pub item: Option<String>,
}

impl fmt::Display for LogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} enum={} event={} item={}",
            self.step,
            self.source,
            self.event,
            self.item.as_deref().unwrap_or("-")
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refuted,
    /// Inconclusive: no confirmation within the budget.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct CampaignVerdict<T> {
    pub outcome: Outcome,
    pub witness: Option<T>,
    pub steps_used: usize,
    pub log: Vec<LogRecord>,
}

/// Shared engine: the input enumerator and one probe per distinct input
/// item, all under a single dovetail.
struct Race<'o, T> {
    oracle: &'o Oracle<T>,
    dovetail: Dovetail<T>,
    /// Candidate for each probe, indexed by `source - 1`.
    candidates: Vec<T>,
    seen: HashMap<T, usize>,
    steps: usize,
    log: Vec<LogRecord>,
}

enum RaceEvent<T> {
    Confirmed {
        probe: usize,
        item: T,
        probe_steps: usize,
    },
    Nothing,
    Done,
}

impl<'o, T> Race<'o, T>
where
    T: Clone + Eq + Hash + fmt::Display + Send + Sync + 'static,
{
    fn new(input: BoxEnumerator<T>, oracle: &'o Oracle<T>) -> Self {
        Race {
            oracle,
            dovetail: Dovetail::new([input]),
            candidates: Vec::new(),
            seen: HashMap::new(),
            steps: 0,
            log: Vec::new(),
        }
    }

    fn advance(&mut self) -> Result<RaceEvent<T>, AlgorithmicError> {
        let Some(Tick {
            source,
            own_step,
            step,
        }) = self.dovetail.tick()?
        else {
            return Ok(RaceEvent::Done);
        };
        self.steps += 1;
        let (event, item) = match &step {
            Step::Yielded(t) => (EventKind::Yielded, Some(t.to_string())),
            Step::Working => (EventKind::Working, None),
            Step::Exhausted => (EventKind::Exhausted, None),
        };
        self.log.push(LogRecord {
            step: self.steps,
            source,
            event,
            item,
        });
        match step {
            Step::Yielded(t) if source == 0 => {
                if !self.seen.contains_key(&t) {
                    let probe = self.dovetail.push(self.oracle.probe(&t));
                    self.seen.insert(t.clone(), probe);
                    self.candidates.push(t);
                }
                Ok(RaceEvent::Nothing)
            }
            Step::Yielded(_) => Ok(RaceEvent::Confirmed {
                probe: source,
                item: self.candidates[source - 1].clone(),
                probe_steps: own_step,
            }),
            _ => Ok(RaceEvent::Nothing),
        }
    }
}

/// Searches for an observation of the system that the oracle confirms as
/// irremediable. Stops at the first confirmation in scheduler order, or
/// after `budget` steps, or when nothing is left to run.
pub fn algorithm1<T>(
    system: BoxEnumerator<T>,
    omega: &Oracle<T>,
    budget: usize,
) -> Result<CampaignVerdict<T>, AlgorithmicError>
where
    T: Clone + Eq + Hash + fmt::Display + Send + Sync + 'static,
{
    if budget == 0 {
        return Err(AlgorithmicError::ZeroBudget);
    }
    let mut race = Race::new(system, omega);
    while race.steps < budget {
        match race.advance()? {
            RaceEvent::Confirmed { item, .. } => {
                return Ok(CampaignVerdict {
                    outcome: Outcome::Refuted,
                    witness: Some(item),
                    steps_used: race.steps,
                    log: race.log,
                })
            }
            RaceEvent::Nothing => {}
            RaceEvent::Done => break,
        }
    }
    Ok(CampaignVerdict {
        outcome: Outcome::BudgetExhausted,
        witness: None,
        steps_used: race.steps,
        log: race.log,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<T> {
    /// Confirmed outside `Ω` after this many steps of its own probe.
    Permit { observation: T, probe_steps: usize },
    /// Still unconfirmed when the budget ran out.
    Stall { observation: T },
}

impl<T> Decision<T> {
    pub fn observation(&self) -> &T {
        match self {
            Decision::Permit { observation, .. } | Decision::Stall { observation } => observation,
        }
    }

    pub fn is_permit(&self) -> bool {
        matches!(self, Decision::Permit { .. })
    }
}

#[derive(Clone, Debug)]
pub struct MonitorRun<T> {
    /// One decision per distinct observation, in arrival order.
    pub decisions: Vec<Decision<T>>,
    pub steps_used: usize,
    pub log: Vec<LogRecord>,
}

/// Monitors a stream of observations, permitting each one once the oracle
/// for `T ∖ Ω` confirms it. Observations never confirmed stay stalled.
pub fn weak_enforce<T>(
    monitor_input: BoxEnumerator<T>,
    co_omega: &Oracle<T>,
    budget: usize,
) -> Result<MonitorRun<T>, AlgorithmicError>
where
    T: Clone + Eq + Hash + fmt::Display + Send + Sync + 'static,
{
    if budget == 0 {
        return Err(AlgorithmicError::ZeroBudget);
    }
    let mut race = Race::new(monitor_input, co_omega);
    let mut permitted: HashMap<usize, usize> = HashMap::new();
    while race.steps < budget {
        match race.advance()? {
            RaceEvent::Confirmed {
                probe, probe_steps, ..
            } => {
                permitted.entry(probe).or_insert(probe_steps);
            }
            RaceEvent::Nothing => {}
            RaceEvent::Done => break,
        }
    }
    let decisions = race
        .candidates
        .iter()
        .enumerate()
        .map(|(k, t)| match permitted.get(&(k + 1)) {
            Some(&probe_steps) => Decision::Permit {
                observation: t.clone(),
                probe_steps,
            },
            None => Decision::Stall {
                observation: t.clone(),
            },
        })
        .collect();
    Ok(MonitorRun {
        decisions,
        steps_used: race.steps,
        log: race.log,
    })
}
