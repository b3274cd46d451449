//! Time source for the store.
//!
//! Every mutation is stamped with a time strictly after the previous stamp,
//! so request histories stay strictly increasing even when two calls land in
//! the same instant. In fixed mode time only moves when a mutation is
//! stamped (by the configured step) or when it is set explicitly.

use chrono::{Duration, Utc};
use rights_core::Timestamp;

#[derive(Debug, Clone)]
pub enum Clock {
    System { last: Option<Timestamp> },
    Fixed { now: Timestamp, step: Duration },
}

impl Clock {
    pub fn system() -> Self {
        Clock::System { last: None }
    }

    pub fn fixed(start: Timestamp, step_seconds: i64) -> Self {
        Clock::Fixed {
            now: start,
            step: Duration::seconds(step_seconds),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, Clock::Fixed { .. })
    }

    /// Current time, without advancing.
    pub fn now(&self) -> Timestamp {
        match self {
            Clock::System { last } => {
                let wall = Utc::now();
                last.map_or(wall, |l| wall.max(l))
            }
            Clock::Fixed { now, .. } => *now,
        }
    }

    /// Time the next mutation would be stamped with. Nothing is consumed
    /// until [`Clock::observe`] is called with it.
    pub fn next(&self) -> Timestamp {
        match self {
            Clock::System { last } => {
                let wall = Utc::now();
                match *last {
                    Some(l) if wall <= l => l + Duration::microseconds(1),
                    _ => wall,
                }
            }
            Clock::Fixed { now, step } => *now + *step,
        }
    }

    /// [`Clock::next`] followed by [`Clock::observe`].
    pub fn stamp(&mut self) -> Timestamp {
        let t = self.next();
        self.observe(t);
        t
    }

    /// Record that `t` has been used by a committed mutation.
    pub fn observe(&mut self, t: Timestamp) {
        match self {
            Clock::System { last } => *last = Some(last.map_or(t, |l| l.max(t))),
            Clock::Fixed { now, .. } => *now = (*now).max(t),
        }
    }

    /// Set the fixed clock. Returns false in system mode.
    pub fn set(&mut self, t: Timestamp) -> bool {
        match self {
            Clock::System { .. } => false,
            Clock::Fixed { now, .. } => {
                *now = t;
                true
            }
        }
    }
}
