use crate::game::Action;
use crate::lnn::{InferenceReport, LnnGraph, TrainConfig, TruthBounds};
use crate::parser::{Fact, FactSet};

use super::{applicable_actions, AgentConfig, AgentError, Recommendation, Transition};

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub chosen: Action,
    pub recommendations: Vec<Recommendation>,
    pub report: InferenceReport,
}

fn predicate(label: &str) -> &str {
    label.split('(').next().unwrap_or(label)
}

/// Clears previous facts and bounds, then asserts `facts` as `[1, 1]`.
///
/// Facts whose predicate the network never mentions are skipped. For every
/// found exit without a `visited` fact, `visited(d)` is asserted `[0, 0]`:
/// the tracker has positioned the room behind a found exit, so absence of
/// the fact means the room was not entered. Everything else stays unknown.
pub fn assert_facts(graph: &mut LnnGraph, facts: &FactSet) -> Result<(), AgentError> {
    graph.retract_facts();
    graph.reset_bounds();
    let mentioned = |g: &LnnGraph, label: &str| g.fact_labels().any(|l| predicate(l) == predicate(label));
    for fact in facts.iter() {
        let label = fact.label();
        match graph.fact_node(&label).map(str::to_string) {
            Some(id) => graph.set_fact(&id, TruthBounds::TRUE)?,
            None if mentioned(graph, &label) => return Err(AgentError::Vocabulary(label)),
            None => {}
        }
    }
    for d in facts.found() {
        if facts.contains(&Fact::Visited(d)) {
            continue;
        }
        if let Some(id) = graph.fact_node(&Fact::Visited(d).label()).map(str::to_string) {
            graph.set_fact(&id, TruthBounds::FALSE)?;
        }
    }
    Ok(())
}

/// Runs the network on `facts` and picks an action: the first recommended
/// action in tie order, else the first applicable one.
pub fn loa_decide(graph: &mut LnnGraph, facts: &FactSet, config: &AgentConfig) -> Result<Decision, AgentError> {
    assert_facts(graph, facts)?;
    let report = graph.infer_fixpoint(&config.inference);
    let recommendations: Vec<Recommendation> = config
        .tie_order
        .iter()
        .map(|a| {
            let b = graph.bounds(&a.node_id()).unwrap_or(TruthBounds::UNKNOWN);
            Recommendation {
                action: a.label(),
                lower: b.lower,
                upper: b.upper,
                recommended: b.lower >= config.tau && b.upper >= config.tau,
            }
        })
        .collect();
    let chosen = config
        .tie_order
        .iter()
        .zip(&recommendations)
        .find(|(_, r)| r.recommended)
        .map(|(a, _)| *a)
        .or_else(|| applicable_actions(facts, &config.tie_order).first().copied())
        .unwrap_or(config.tie_order[0]);
    Ok(Decision { chosen, recommendations, report })
}

/// One training step on the transition's facts, chosen action and reward.
pub fn loa_observe(graph: &mut LnnGraph, transition: &Transition, train: &TrainConfig) -> Result<f64, AgentError> {
    assert_facts(graph, &transition.facts)?;
    let outcome = graph.train_step(&transition.action.node_id(), transition.reward, train)?;
    Ok(outcome.loss)
}
