//! Recursively enumerable sets as steppable computations.
//!
//! An [`Enumerator`] is advanced one abstract step at a time and may yield
//! an item, keep working, or report that it has nothing more to give. Sets
//! whose membership is only semi-decidable are represented by an [`Oracle`]
//! that hands out a membership probe per candidate; a probe yields the
//! candidate back once membership is confirmed and otherwise never does.
//!
//! [`Dovetail`] interleaves enumerators fairly, [`algorithm1`] races the
//! observations of a system against the irremediable observations of a
//! requirement, and [`weak_enforce`] runs the dual race against the
//! complement.

mod campaign;
mod dovetail;
mod subprocess;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use campaign::{
    algorithm1, finite_co_omega_oracle, finite_omega_oracle, observation_stream, omega_set,
    weak_enforce, CampaignVerdict, Decision, EventKind, LogRecord, MonitorRun, Outcome,
};
pub use dovetail::{Dovetail, Tick};
pub use subprocess::{subprocess_enumerator, SubprocessEnumerator, DEFAULT_QUANTUM};

#[derive(Debug, Error)]
pub enum AlgorithmicError {
    #[error("budget must allow at least one step")]
    ZeroBudget,
    #[error("command is empty")]
    EmptyCommand,
    #[error("could not parse command `{command}`: {reason}")]
    BadCommand { command: String, reason: String },
    #[error("failed to spawn `{command}`: {source}")]
    SpawnFailure {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("black box answered input {input} with `{line}`, expected a decimal integer")]
    ProtocolViolation { input: u64, line: String },
    #[error("reading from black box failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome of one computation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<T> {
    Yielded(T),
    Working,
    Exhausted,
}

/// A computation that progressively yields members of a set. Once it
/// returns [`Step::Exhausted`] it keeps doing so. Items may repeat.
pub trait Enumerator: Send {
    type Item;

    fn step(&mut self) -> Result<Step<Self::Item>, AlgorithmicError>;
}

impl<E: Enumerator + ?Sized> Enumerator for Box<E> {
    type Item = E::Item;

    fn step(&mut self) -> Result<Step<Self::Item>, AlgorithmicError> {
        (**self).step()
    }
}

pub type BoxEnumerator<T> = Box<dyn Enumerator<Item = T>>;

/// What a [`Scripted`] enumerator does once its script runs out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    Exhaust,
    Stall,
}

/// Replays a fixed schedule: `Some(item)` yields, `None` is a working step.
#[derive(Clone, Debug)]
pub struct Scripted<T> {
    script: VecDeque<Option<T>>,
    tail: Tail,
}

impl<T> Scripted<T> {
    pub fn new(script: impl IntoIterator<Item = Option<T>>, tail: Tail) -> Self {
        Scripted {
            script: script.into_iter().collect(),
            tail,
        }
    }

    /// Never yields and never finishes.
    pub fn stall() -> Self {
        Self::new([], Tail::Stall)
    }

    /// Works for `own_step - 1` steps, then yields `item` at step `own_step`.
    pub fn yields_at(own_step: usize, item: T, tail: Tail) -> Self {
        assert!(own_step >= 1, "steps are counted from 1");
        let mut script: VecDeque<Option<T>> = (1..own_step).map(|_| None).collect();
        script.push_back(Some(item));
        Scripted { script, tail }
    }
}

impl<T: Send> Enumerator for Scripted<T> {
    type Item = T;

    fn step(&mut self) -> Result<Step<T>, AlgorithmicError> {
        Ok(match self.script.pop_front() {
            Some(Some(item)) => Step::Yielded(item),
            Some(None) => Step::Working,
            None => match self.tail {
                Tail::Exhaust => Step::Exhausted,
                Tail::Stall => Step::Working,
            },
        })
    }
}

/// Yields one item of an iterator per step.
pub struct Items<I> {
    iter: I,
    done: bool,
}

pub fn items<I>(iter: I) -> Items<I::IntoIter>
where
    I: IntoIterator,
{
    Items {
        iter: iter.into_iter(),
        done: false,
    }
}

impl<I> Enumerator for Items<I>
where
    I: Iterator + Send,
{
    type Item = I::Item;

    fn step(&mut self) -> Result<Step<I::Item>, AlgorithmicError> {
        if self.done {
            return Ok(Step::Exhausted);
        }
        Ok(match self.iter.next() {
            Some(item) => Step::Yielded(item),
            None => {
                self.done = true;
                Step::Exhausted
            }
        })
    }
}

type Factory<T> = Arc<dyn Fn() -> BoxEnumerator<T> + Send + Sync>;
type Predicate<T> = Arc<dyn Fn(&T) -> bool + Send + Sync>;

#[derive(Clone)]
enum OracleKind<T> {
    Enumerated(Factory<T>),
    Decided { cost: usize, member: Predicate<T> },
}

/// A semi-decidable set, consulted through per-candidate probes.
#[derive(Clone)]
pub struct Oracle<T> {
    name: String,
    kind: OracleKind<T>,
}

impl<T> fmt::Debug for Oracle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle").field("name", &self.name).finish()
    }
}

impl<T> Oracle<T>
where
    T: Clone + PartialEq + Send + Sync + 'static,
{
    /// The set enumerated by fresh runs of `factory`. A probe replays the
    /// enumeration until it meets the candidate.
    pub fn from_enumeration(
        name: impl Into<String>,
        factory: impl Fn() -> BoxEnumerator<T> + Send + Sync + 'static,
    ) -> Self {
        Oracle {
            name: name.into(),
            kind: OracleKind::Enumerated(Arc::new(factory)),
        }
    }

    /// A finite set, enumerated in the given order, one item per step.
    pub fn from_items(name: impl Into<String>, members: Vec<T>) -> Self {
        let members = Arc::new(members);
        Self::from_enumeration(name, move || {
            let members = Arc::clone(&members);
            Box::new(items((0..members.len()).map(move |i| members[i].clone())))
        })
    }

    /// A decidable set whose membership check takes `cost` steps.
    pub fn from_predicate(
        name: impl Into<String>,
        cost: usize,
        member: impl Fn(&T) -> bool + Send + Sync + 'static,
    ) -> Self {
        Oracle {
            name: name.into(),
            kind: OracleKind::Decided {
                cost: cost.max(1),
                member: Arc::new(member),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// A computation that yields `candidate` iff membership is confirmed.
    pub fn probe(&self, candidate: &T) -> BoxEnumerator<T> {
        match &self.kind {
            OracleKind::Enumerated(factory) => Box::new(ScanProbe {
                target: candidate.clone(),
                source: factory(),
                done: false,
            }),
            OracleKind::Decided { cost, member } => {
                let verdict = member(candidate);
                let mut script: Vec<Option<T>> = (1..*cost).map(|_| None).collect();
                if verdict {
                    script.push(Some(candidate.clone()));
                } else {
                    script.push(None);
                }
                Box::new(Scripted::new(script, Tail::Exhaust))
            }
        }
    }
}

struct ScanProbe<T> {
    target: T,
    source: BoxEnumerator<T>,
    done: bool,
}

impl<T: PartialEq + Clone + Send> Enumerator for ScanProbe<T> {
    type Item = T;

    fn step(&mut self) -> Result<Step<T>, AlgorithmicError> {
        if self.done {
            return Ok(Step::Exhausted);
        }
        Ok(match self.source.step()? {
            Step::Yielded(item) if item == self.target => {
                self.done = true;
                Step::Yielded(item)
            }
            Step::Yielded(_) | Step::Working => Step::Working,
            Step::Exhausted => {
                self.done = true;
                Step::Exhausted
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drain<T>(e: &mut dyn Enumerator<Item = T>, steps: usize) -> Vec<Step<T>> {
        (0..steps).map(|_| e.step().unwrap()).collect()
    }

    #[test]
    fn scripted_replays_then_follows_tail() {
        let mut e = Scripted::new([None, Some(1), Some(2)], Tail::Exhaust);
        assert_eq!(
            drain(&mut e, 5),
            [
                Step::Working,
                Step::Yielded(1),
                Step::Yielded(2),
                Step::Exhausted,
                Step::Exhausted
            ]
        );
        let mut s = Scripted::<u8>::stall();
        assert!(drain(&mut s, 10).iter().all(|s| *s == Step::Working));
    }

    #[test]
    fn items_stay_exhausted() {
        let mut e = items(vec!['x']);
        assert_eq!(
            drain(&mut e, 3),
            [Step::Yielded('x'), Step::Exhausted, Step::Exhausted]
        );
    }

    #[test]
    fn enumerated_probe_confirms_members_only() {
        let o = Oracle::from_items("evens", vec![0u32, 2, 4]);
        let mut p = o.probe(&4);
        assert_eq!(
            drain(&mut *p, 4),
            [
                Step::Working,
                Step::Working,
                Step::Yielded(4),
                Step::Exhausted
            ]
        );
        let mut q = o.probe(&3);
        assert!(!drain(&mut *q, 10)
            .iter()
            .any(|s| matches!(s, Step::Yielded(_))));
    }

    #[test]
    fn decided_probe_costs_its_steps() {
        let o = Oracle::from_predicate("odd", 4, |x: &u32| x % 2 == 1);
        let mut p = o.probe(&3);
        assert_eq!(
            drain(&mut *p, 5),
            [
                Step::Working,
                Step::Working,
                Step::Working,
                Step::Yielded(3),
                Step::Exhausted
            ]
        );
        let mut q = o.probe(&2);
        assert!(!drain(&mut *q, 10)
            .iter()
            .any(|s| matches!(s, Step::Yielded(_))));
    }
}
