//! Elimination schedules and the shared tie-breaking rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::TouchTime;

/// One elimination: `victim` disappears at `time` on touching `eliminator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub victim: usize,
    pub eliminator: usize,
    pub time: TouchTime,
}

/// Best eliminator found so far for one victim.
///
/// Candidates are ordered by `(time, eliminator)`, so equal touch times go
/// to the higher-priority eliminator. Every solver funnels its choices
/// through this type, which keeps schedules comparable even when touch
/// times tie.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Best {
    pub time: f64,
    pub by: usize,
}

impl Best {
    pub const NONE: Best = Best {
        time: f64::INFINITY,
        by: usize::MAX,
    };

    #[inline]
    pub fn beats(&self, time: f64, by: usize) -> bool {
        time < self.time || (time == self.time && by < self.by)
    }

    #[inline]
    pub fn offer(&mut self, time: f64, by: usize) {
        if self.beats(time, by) {
            *self = Best { time, by };
        }
    }

    pub fn eliminator(&self) -> Option<usize> {
        (self.by != usize::MAX).then_some(self.by)
    }
}

/// The elimination order of an instance: `n - 1` records sorted by time,
/// and the survivor (always shape 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationSchedule {
    len: usize,
    records: Vec<Elimination>,
    survivor: usize,
}

impl EliminationSchedule {
    /// Assembles a schedule from per-shape results of a solver. Shape 0 must
    /// have no eliminator; every other shape must have one.
    pub(crate) fn from_best(best: &[Best]) -> Self {
        let mut records: Vec<Elimination> = best
            .iter()
            .enumerate()
            .skip(1)
            .map(|(victim, b)| Elimination {
                victim,
                eliminator: b.eliminator().expect("every non-survivor has an eliminator"),
                time: TouchTime::new(b.time).expect("touch times are nonnegative"),
            })
            .collect();
        sort_records(&mut records);
        EliminationSchedule {
            len: best.len(),
            records,
            survivor: 0,
        }
    }

    /// Records taken as given, in the given order. For corrupting
    /// schedules in tests.
    #[cfg(test)]
    pub(crate) fn unchecked(len: usize, records: Vec<Elimination>) -> Self {
        EliminationSchedule {
            len,
            records,
            survivor: 0,
        }
    }

    /// Builds a schedule from loaded records, checking every invariant.
    pub fn new(len: usize, mut records: Vec<Elimination>) -> Result<Self> {
        sort_records(&mut records);
        let s = EliminationSchedule {
            len,
            records,
            survivor: 0,
        };
        s.check_invariants()?;
        Ok(s)
    }

    /// Number of shapes, including the survivor.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn records(&self) -> &[Elimination] {
        &self.records
    }

    pub fn survivor(&self) -> usize {
        self.survivor
    }

    /// Victims in elimination order.
    pub fn victims(&self) -> impl Iterator<Item = usize> + '_ {
        self.records.iter().map(|r| r.victim)
    }

    /// Elimination time of every shape, indexed by shape (survivor: never).
    pub fn times(&self) -> Vec<TouchTime> {
        let mut out = vec![TouchTime::NEVER; self.len];
        for r in &self.records {
            out[r.victim] = r.time;
        }
        out
    }

    /// Eliminator of every shape, indexed by shape.
    pub fn eliminators(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.len];
        for r in &self.records {
            out[r.victim] = Some(r.eliminator);
        }
        out
    }

    /// Checks record count, victim uniqueness, priority and liveness of every
    /// eliminator at its elimination time.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSchedule(msg));
        if self.len > 0 && self.records.len() != self.len - 1 {
            return fail(format!(
                "{} records for {} shapes",
                self.records.len(),
                self.len
            ));
        }
        if self.survivor != 0 {
            return fail(format!("survivor is {} instead of 1", self.survivor + 1));
        }
        let mut seen = vec![false; self.len];
        for r in &self.records {
            if r.victim == 0 || r.victim >= self.len {
                return fail(format!("victim {} out of range", r.victim + 1));
            }
            if std::mem::replace(&mut seen[r.victim], true) {
                return fail(format!("victim {} eliminated twice", r.victim + 1));
            }
            if r.eliminator >= r.victim {
                return fail(format!(
                    "shape {} cannot eliminate higher-priority shape {}",
                    r.eliminator + 1,
                    r.victim + 1
                ));
            }
        }
        if self.records.windows(2).any(|w| w[0].time > w[1].time) {
            return fail("records not sorted by time".into());
        }
        let times = self.times();
        for r in &self.records {
            if times[r.eliminator] < r.time {
                return fail(format!(
                    "shape {} eliminates {} at {} after its own elimination at {}",
                    r.eliminator + 1,
                    r.victim + 1,
                    r.time,
                    times[r.eliminator]
                ));
            }
        }
        Ok(())
    }

    /// First position where two schedules disagree: victim or eliminator
    /// mismatch, or times differing by more than `rel_tol` relative.
    pub fn first_divergence(&self, other: &Self, rel_tol: f64) -> Option<Divergence> {
        if self.len != other.len {
            return Some(Divergence {
                position: 0,
                left: None,
                right: None,
            });
        }
        let pos = self
            .records
            .iter()
            .zip(&other.records)
            .position(|(a, b)| {
                a.victim != b.victim
                    || a.eliminator != b.eliminator
                    || !times_close(a.time.value(), b.time.value(), rel_tol)
            })?;
        Some(Divergence {
            position: pos,
            left: Some(self.records[pos]),
            right: Some(other.records[pos]),
        })
    }
}

/// Where two schedules first differ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Divergence {
    pub position: usize,
    pub left: Option<Elimination>,
    pub right: Option<Elimination>,
}

pub(crate) fn times_close(a: f64, b: f64, rel_tol: f64) -> bool {
    a == b || (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

fn sort_records(records: &mut [Elimination]) {
    records.sort_by(|a, b| {
        a.time
            .cmp(&b.time)
            .then(a.eliminator.cmp(&b.eliminator))
            .then(a.victim.cmp(&b.victim))
    });
}
