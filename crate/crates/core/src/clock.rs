//! Time source abstraction. The core crate has no access to a system clock;
//! callers with `std` pass one in.

/// Monotone seconds since some fixed origin.
pub trait Clock: Sync {
    fn seconds(&self) -> f64;
}

/// A clock that never advances. Time limits never trigger with it.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn seconds(&self) -> f64 {
        0.0
    }
}

/// Wall-clock budget measured against a [`Clock`].
#[derive(Clone, Copy)]
pub struct Deadline<'a> {
    clock: &'a dyn Clock,
    start: f64,
    limit: f64,
}

impl<'a> Deadline<'a> {
    pub fn new(clock: &'a dyn Clock, limit_seconds: f64) -> Self {
        Deadline {
            clock,
            start: clock.seconds(),
            limit: limit_seconds,
        }
    }

    pub fn unlimited(clock: &'a dyn Clock) -> Self {
        Self::new(clock, f64::INFINITY)
    }

    pub fn elapsed(&self) -> f64 {
        self.clock.seconds() - self.start
    }

    pub fn expired(&self) -> bool {
        self.limit.is_finite() && self.elapsed() >= self.limit
    }

    /// A sub-budget that ends at `seconds` from now or at this deadline,
    /// whichever comes first.
    pub fn child(&self, seconds: f64) -> Deadline<'a> {
        let remaining = self.limit - self.elapsed();
        Deadline::new(self.clock, seconds.min(remaining))
    }
}

impl core::fmt::Debug for Deadline<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Deadline")
            .field("elapsed", &self.elapsed())
            .field("limit", &self.limit)
            .finish()
    }
}
