//! Concrete runs of a timed automaton on integer timestamps.

use std::collections::BTreeSet;

use delaymon_core::Tba;

/// Every configuration an automaton can be in, all clocks read at `now`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configs {
    pub now: i64,
    pub states: BTreeSet<(usize, Vec<i64>)>,
}

impl Configs {
    pub fn initial(tba: &Tba) -> Configs {
        let zero = vec![0; tba.clock_count()];
        Configs { now: 0, states: tba.initial().iter().map(|&q| (q, zero.clone())).collect() }
    }

    pub fn advance(&self, to: i64) -> Configs {
        assert!(to >= self.now);
        let d = to - self.now;
        Configs {
            now: to,
            states: self
                .states
                .iter()
                .map(|(q, v)| (*q, v.iter().map(|x| x + d).collect()))
                .collect(),
        }
    }

    /// Takes symbol `a` at time `at`; guard constants are multiplied by `scale`.
    pub fn step(&self, tba: &Tba, a: usize, at: i64, scale: i64) -> Configs {
        let here = self.advance(at);
        let mut states = BTreeSet::new();
        for (q, v) in &here.states {
            for t in tba.transitions().iter().filter(|t| t.src == *q && t.label == a) {
                if t.guard.iter().all(|g| g.holds_scaled(v[g.clock], scale)) {
                    let mut w = v.clone();
                    for &c in &t.resets {
                        w[c] = 0;
                    }
                    states.insert((t.dst, w));
                }
            }
        }
        Configs { now: at, states }
    }
}

trait HoldsScaled {
    fn holds_scaled(&self, value: i64, scale: i64) -> bool;
}

impl HoldsScaled for delaymon_core::AtomicConstraint {
    fn holds_scaled(&self, value: i64, scale: i64) -> bool {
        use delaymon_core::Relation::*;
        let n = self.constant * scale;
        match self.relation {
            Lt => value < n,
            Le => value <= n,
            Eq => value == n,
            Ge => value >= n,
            Gt => value > n,
        }
    }
}
