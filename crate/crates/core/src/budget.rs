use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

/// Search limits shared by every budgeted procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Longest conjugator, subgroup element or root candidate enumerated.
    pub max_length: usize,
    /// Largest permutation degree searched for finite quotients.
    pub max_degree: usize,
    /// Work units per search (word-problem calls, assignments, ...).
    pub max_steps: u64,
    /// Wall-clock limit per top-level decision, if any.
    pub time_ms: Option<u64>,
    /// Largest image group enumerated inside a finite quotient.
    pub image_cap: usize,
    /// Root candidates may be this many times longer than the cyclic form.
    pub root_slack: usize,
    pub max_cosets: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_length: 6,
            max_degree: 5,
            max_steps: 2_000_000,
            time_ms: Some(10_000),
            image_cap: 10_000,
            root_slack: 2,
            max_cosets: 10_000,
        }
    }
}

impl Budget {
    pub fn control(&self) -> Control<'static> {
        Control {
            deadline: self.time_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
            cancel: None,
        }
    }
}

/// Deadline plus an optional shared cancellation flag.
#[derive(Clone, Copy, Debug, Default)]
pub struct Control<'a> {
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
}

impl<'a> Control<'a> {
    pub fn unlimited() -> Self {
        Control::default()
    }

    pub fn with_cancel(self, flag: &'a AtomicBool) -> Control<'a> {
        Control {
            deadline: self.deadline,
            cancel: Some(flag),
        }
    }

    pub fn should_stop(&self) -> bool {
        self.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}
