use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use crate::eio::PairObservation;

use super::{AlgorithmicError, Enumerator, Step};

pub const DEFAULT_QUANTUM: Duration = Duration::from_millis(10);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Pending,
    /// Output closed without an answer. Indistinguishable from divergence.
    Silent,
    Answered,
}

struct Exchange {
    input: u64,
    child: Child,
    _stdin: Option<ChildStdin>,
    answer: Receiver<String>,
    state: State,
}

/// A black box driven over the line protocol, one fresh process per
/// scheduled input. Each step waits at most one quantum on one pending
/// exchange, visiting exchanges round-robin in schedule order.
pub struct SubprocessEnumerator {
    exchanges: Vec<Exchange>,
    cursor: usize,
    quantum: Duration,
}

/// Spawns one process per input in `schedule` and sends it that input.
/// `command` is split into words like a shell would, but no shell runs.
pub fn subprocess_enumerator(
    command: &str,
    schedule: &[u64],
    quantum: Duration,
) -> Result<SubprocessEnumerator, AlgorithmicError> {
    let argv = shell_words::split(command).map_err(|e| AlgorithmicError::BadCommand {
        command: command.to_string(),
        reason: e.to_string(),
    })?;
    let Some((program, args)) = argv.split_first() else {
        return Err(AlgorithmicError::EmptyCommand);
    };
    let mut out = SubprocessEnumerator {
        exchanges: Vec::with_capacity(schedule.len()),
        cursor: 0,
        quantum,
    };
    for &input in schedule {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| AlgorithmicError::SpawnFailure {
                command: command.to_string(),
                source,
            })?;
        let mut stdin = child.stdin.take();
        if let Some(pipe) = stdin.as_mut() {
            // A process that exits before reading is simply silent.
            let _ = writeln!(pipe, "{input}").and_then(|_| pipe.flush());
        }
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let mut line = String::new();
            if let Ok(n) = BufReader::new(stdout).read_line(&mut line) {
                if n > 0 {
                    let _ = tx.send(line);
                }
            }
        });
        out.exchanges.push(Exchange {
            input,
            child,
            _stdin: stdin,
            answer: rx,
            state: State::Pending,
        });
    }
    Ok(out)
}

impl SubprocessEnumerator {
    pub fn len(&self) -> usize {
        self.exchanges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exchanges.is_empty()
    }

    fn next_open(&self) -> Option<usize> {
        let n = self.exchanges.len();
        (0..n)
            .map(|k| (self.cursor + k) % n)
            .find(|&e| self.exchanges[e].state != State::Answered)
    }
}

impl Enumerator for SubprocessEnumerator {
    type Item = PairObservation;

    fn step(&mut self) -> Result<Step<PairObservation>, AlgorithmicError> {
        let Some(e) = self.next_open() else {
            return Ok(Step::Exhausted);
        };
        self.cursor = (e + 1) % self.exchanges.len();
        let ex = &mut self.exchanges[e];
        if ex.state == State::Silent {
            return Ok(Step::Working);
        }
        match ex.answer.recv_timeout(self.quantum) {
            Ok(line) => {
                let text = line.trim();
                let output: u64 =
                    text.parse()
                        .map_err(|_| AlgorithmicError::ProtocolViolation {
                            input: ex.input,
                            line: text.to_string(),
                        })?;
                ex.state = State::Answered;
                let _ = ex.child.kill();
                Ok(Step::Yielded(PairObservation::single(ex.input, output)))
            }
            Err(RecvTimeoutError::Timeout) => Ok(Step::Working),
            Err(RecvTimeoutError::Disconnected) => {
                ex.state = State::Silent;
                Ok(Step::Working)
            }
        }
    }
}

impl Drop for SubprocessEnumerator {
    fn drop(&mut self) {
        for ex in &mut self.exchanges {
            let _ = ex.child.kill();
            let _ = ex.child.wait();
        }
    }
}
