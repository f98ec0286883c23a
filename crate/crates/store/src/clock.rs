use std::sync::atomic::{AtomicU64, Ordering};

/// A monotone simulated clock in seconds.
///
/// Balancer timing and metrics timestamps run on this clock instead of wall
/// time, so tests can model minutes of rebalancing without waiting for them.
#[derive(Debug, Default)]
pub struct SimClock {
    nanos: AtomicU64,
}

impl SimClock {
    pub fn new() -> SimClock {
        SimClock::default()
    }

    pub fn now(&self) -> f64 {
        self.nanos.load(Ordering::Acquire) as f64 / 1e9
    }

    pub fn advance(&self, secs: f64) {
        assert!(secs >= 0.0, "the clock cannot run backwards");
        self.nanos
            .fetch_add((secs * 1e9).round() as u64, Ordering::AcqRel);
    }

    /// Moves the clock forward to `secs` if that is later than now; used to
    /// map wall-clock progress onto the simulated timeline.
    pub fn advance_to(&self, secs: f64) {
        let target = (secs * 1e9).round() as u64;
        self.nanos.fetch_max(target, Ordering::AcqRel);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advances_monotonically() {
        let clock = SimClock::new();
        assert_eq!(clock.now(), 0.0);
        clock.advance(0.12);
        assert!((clock.now() - 0.12).abs() < 1e-9);
        clock.advance_to(0.05); // earlier: no-op
        assert!((clock.now() - 0.12).abs() < 1e-9);
        clock.advance_to(1.5);
        assert!((clock.now() - 1.5).abs() < 1e-9);
    }
}
