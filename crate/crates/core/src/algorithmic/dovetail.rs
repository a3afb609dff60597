use super::{AlgorithmicError, BoxEnumerator, Enumerator, Step};

struct Slot<T> {
    inner: BoxEnumerator<T>,
    steps: usize,
    exhausted: bool,
}

/// One scheduler tick: which constituent ran, its own step count after
/// running, and what it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tick<T> {
    pub source: usize,
    pub own_step: usize,
    pub step: Step<T>,
}

/// Stage-wise interleaving. Stage `k` (from 1) runs `k` consecutive steps
/// on each of the first `k` constituents in list order. Exhausted
/// constituents are skipped without consuming a tick. An item yielded by
/// constituent `i` at its own step `s` is emitted no later than stage
/// `max(i, s) + 1`.
pub struct Dovetail<T> {
    slots: Vec<Slot<T>>,
    stage: usize,
    position: usize,
    in_block: usize,
    live: usize,
}

impl<T> Dovetail<T> {
    pub fn new(enumerators: impl IntoIterator<Item = BoxEnumerator<T>>) -> Self {
        let mut d = Dovetail {
            slots: Vec::new(),
            stage: 1,
            position: 0,
            in_block: 0,
            live: 0,
        };
        for e in enumerators {
            d.push(e);
        }
        d
    }

    /// Appends a constituent; returns its index. It joins the schedule from
    /// the first stage large enough to include it.
    pub fn push(&mut self, e: BoxEnumerator<T>) -> usize {
        self.slots.push(Slot {
            inner: e,
            steps: 0,
            exhausted: false,
        });
        self.live += 1;
        self.slots.len() - 1
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn own_steps(&self, source: usize) -> usize {
        self.slots[source].steps
    }

    /// Runs the next scheduled step, or `None` once every constituent is
    /// exhausted.
    pub fn tick(&mut self) -> Result<Option<Tick<T>>, AlgorithmicError> {
        if self.live == 0 {
            return Ok(None);
        }
        loop {
            if self.position >= self.stage.min(self.slots.len()) {
                self.stage += 1;
                self.position = 0;
                self.in_block = 0;
                continue;
            }
            if self.slots[self.position].exhausted || self.in_block >= self.stage {
                self.position += 1;
                self.in_block = 0;
                continue;
            }
            self.in_block += 1;
            let source = self.position;
            let slot = &mut self.slots[source];
            let step = slot.inner.step()?;
            slot.steps += 1;
            if matches!(step, Step::Exhausted) {
                slot.exhausted = true;
                self.live -= 1;
            }
            return Ok(Some(Tick {
                source,
                own_step: slot.steps,
                step,
            }));
        }
    }
}

/// `dovetail([e0, e1, ...])` as a plain enumerator.
impl<T: Send> Enumerator for Dovetail<T> {
    type Item = T;

    fn step(&mut self) -> Result<Step<T>, AlgorithmicError> {
        Ok(match self.tick()? {
            None => Step::Exhausted,
            Some(Tick {
                step: Step::Yielded(item),
                ..
            }) => Step::Yielded(item),
            Some(_) => Step::Working,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithmic::{Scripted, Tail};

    fn boxed<T: Send + 'static>(s: Scripted<T>) -> BoxEnumerator<T> {
        Box::new(s)
    }

    fn sources(d: &mut Dovetail<u32>, ticks: usize) -> Vec<usize> {
        (0..ticks)
            .map(|_| d.tick().unwrap().unwrap().source)
            .collect()
    }

    #[test]
    fn stage_schedule_with_three_stallers() {
        let mut d = Dovetail::new((0..3).map(|_| boxed(Scripted::<u32>::stall())));
        // stage 1: 0 | stage 2: 0 0 1 1 | stage 3: 0 0 0 1 1 1 2 2 2
        assert_eq!(
            sources(&mut d, 15),
            [0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 2, 2, 2, 0]
        );
    }

    #[test]
    fn single_enumerator_passes_through() {
        let mut d = Dovetail::new([boxed(Scripted::new(
            [Some(1), None, Some(2)],
            Tail::Exhaust,
        ))]);
        let out: Vec<Step<u32>> = (0..5).map(|_| d.step().unwrap()).collect();
        assert_eq!(
            out,
            [
                Step::Yielded(1),
                Step::Working,
                Step::Yielded(2),
                Step::Working,
                Step::Exhausted
            ]
        );
    }

    #[test]
    fn stalled_head_does_not_starve_later_items() {
        let mut d = Dovetail::new([
            boxed(Scripted::stall()),
            boxed(Scripted::yields_at(3, 7u32, Tail::Stall)),
        ]);
        let mut ticks = 0;
        loop {
            ticks += 1;
            if let Step::Yielded(v) = d.step().unwrap() {
                assert_eq!(v, 7);
                break;
            }
            assert!(ticks < 100);
        }
        // 0 | 0 0 1 1 | 0 0 0 1 -> the third own step of #1 is tick 9.
        assert_eq!(ticks, 9);
    }

    #[test]
    fn finite_constituents_are_fully_emitted() {
        let mut d = Dovetail::new([
            boxed(Scripted::new([Some(1), Some(2)], Tail::Exhaust)),
            boxed(Scripted::new([Some(3)], Tail::Exhaust)),
        ]);
        let mut out = Vec::new();
        loop {
            match d.step().unwrap() {
                Step::Yielded(v) => out.push(v),
                Step::Working => {}
                Step::Exhausted => break,
            }
        }
        // 0:1 | 0:2 0:exh 1:3 1:exh
        assert_eq!(out, [1, 2, 3]);
    }

    #[test]
    fn pushed_members_join_current_stage() {
        let mut d = Dovetail::new([boxed(Scripted::<u32>::stall())]);
        assert_eq!(sources(&mut d, 2), [0, 0]);
        d.push(boxed(Scripted::stall()));
        // Stage 2 continues with the second step of #0, then #1 twice.
        assert_eq!(sources(&mut d, 3), [0, 1, 1]);
    }
}
