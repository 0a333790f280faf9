//! Non-symbolic baselines: uniform random and tabular Q-learning.

use std::collections::HashMap;

use crate::game::Action;
use crate::parser::FactSet;
use crate::rng::Lcg;

use super::applicable_actions;

/// Uniform over the applicable actions, or over all actions when none apply.
pub fn random_decide(facts: &FactSet, rng: &mut Lcg) -> Action {
    let mut options = applicable_actions(facts, &Action::ALL);
    if options.is_empty() {
        options = Action::ALL.to_vec();
    }
    options[rng.choose(options.len())]
}

/// Sorted fact labels joined by commas.
pub fn state_key(facts: &FactSet) -> String {
    facts.labels().join(",")
}

#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    values: HashMap<(String, Action), f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_greedy: f64,
}

impl Default for QTable {
    fn default() -> Self {
        QTable::new(0.5, 0.9, 0.1)
    }
}

impl QTable {
    pub fn new(alpha: f64, gamma: f64, epsilon_greedy: f64) -> Self {
        QTable { values: HashMap::new(), alpha, gamma, epsilon_greedy }
    }

    /// Missing entries read as 0.
    pub fn get(&self, facts: &FactSet, action: Action) -> f64 {
        self.values.get(&(state_key(facts), action)).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn candidates(facts: &FactSet) -> Vec<Action> {
        let options = applicable_actions(facts, &Action::ALL);
        if options.is_empty() {
            Action::ALL.to_vec()
        } else {
            options
        }
    }

    /// Highest-valued candidate; ties go to the earliest in tie order.
    pub fn greedy(&self, facts: &FactSet) -> Action {
        let mut best = None;
        for a in QTable::candidates(facts) {
            let v = self.get(facts, a);
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((a, v));
            }
        }
        best.unwrap().0
    }

    fn max_value(&self, facts: &FactSet) -> f64 {
        QTable::candidates(facts).into_iter().map(|a| self.get(facts, a)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// ε-greedy over the applicable actions. Always draws exactly one uniform
/// number, plus one pick when exploring.
pub fn q_decide(table: &QTable, facts: &FactSet, rng: &mut Lcg) -> Action {
    if rng.next_f64() < table.epsilon_greedy {
        let options = QTable::candidates(facts);
        options[rng.choose(options.len())]
    } else {
        table.greedy(facts)
    }
}

/// `Q(s,a) ← Q(s,a) + α(r + γ·max Q(s′,·) − Q(s,a))`, with no bootstrap
/// from terminal states.
pub fn q_update(table: &mut QTable, facts: &FactSet, action: Action, reward: f64, next: &FactSet, done: bool) {
    let future = if done { 0.0 } else { table.gamma * table.max_value(next) };
    let old = table.get(facts, action);
    let updated = old + table.alpha * (reward + future - old);
    table.values.insert((state_key(facts), action), updated);
}
