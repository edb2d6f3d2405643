use super::config::{FaultEvent, FaultKind};

/// Time-ordered fault schedule that applies each event exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultSchedule {
    events: Vec<FaultEvent>,
    next: usize,
}

impl FaultSchedule {
    /// Sorts by time; events at equal times keep their file order.
    pub fn new(events: &[FaultEvent]) -> Self {
        let mut events = events.to_vec();
        events.sort_by(|a, b| a.t.total_cmp(&b.t));
        FaultSchedule { events, next: 0 }
    }

    pub fn events(&self) -> &[FaultEvent] {
        &self.events
    }

    /// Applies every not-yet-applied event with time `≤ t` to `health` and
    /// returns the events applied.
    pub fn apply(&mut self, t: f64, health: &mut [bool]) -> Vec<FaultEvent> {
        let mut applied = Vec::new();
        while let Some(ev) = self.events.get(self.next) {
            if ev.t > t {
                break;
            }
            health[ev.drone] = matches!(ev.kind, FaultKind::CameraRecover);
            applied.push(*ev);
            self.next += 1;
        }
        applied
    }
}

/// Stateless form: health at `t` after applying every event up to `t`.
pub fn apply_faults(schedule: &[FaultEvent], t: f64, health: &[bool]) -> Vec<bool> {
    let mut out = health.to_vec();
    FaultSchedule::new(schedule).apply(t, &mut out);
    out
}
