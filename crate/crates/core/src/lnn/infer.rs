use serde::{Deserialize, Serialize};

use super::gate;
use super::scalar::Scalar;
use super::{LnnError, LnnGraph, TruthBounds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig { epsilon: 1e-6, max_iterations: 20 }
    }
}

impl InferenceConfig {
    pub fn validate(&self) -> Result<(), LnnError> {
        if !(self.epsilon > 0.0) {
            return Err(LnnError::InvalidConfig("epsilon must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(LnnError::InvalidConfig("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub iterations: usize,
    pub converged: bool,
    pub total_contradiction: f64,
}

fn gather<S: Scalar>(
    graph: &LnnGraph,
    node: usize,
    weights: &[S],
    bounds: &[TruthBounds<S>],
) -> Vec<(S, TruthBounds<S>)> {
    graph.children[node].iter().map(|&(c, e)| (weights[e].clone(), bounds[c].clone())).collect()
}

/// One upward sweep over `bounds` (indexed like `graph.nodes`), intersecting
/// each non-asserted gate with its recomputed value. Returns the largest
/// change in any bound.
pub(crate) fn upward_sweep<S: Scalar>(
    graph: &LnnGraph,
    betas: &[S],
    weights: &[S],
    bounds: &mut [TruthBounds<S>],
) -> f64 {
    let mut change: f64 = 0.0;
    for i in 0..graph.nodes.len() {
        let node = &graph.nodes[i];
        if node.asserted || !node.kind.is_gate() {
            continue;
        }
        let inputs = gather(graph, i, weights, bounds);
        let Some(new) = gate::upward(node.kind, &betas[i], &inputs) else { continue };
        let old = bounds[i].clone();
        let lower = old.lower.clone().max_with(new.lower);
        let upper = old.upper.clone().min_with(new.upper);
        change = change.max((lower.value() - old.lower.value()).abs()).max((upper.value() - old.upper.value()).abs());
        bounds[i] = TruthBounds { lower, upper };
    }
    change
}

/// One downward sweep in reverse topological order, tightening the
/// non-asserted children of every gate. Returns the largest change.
pub(crate) fn downward_sweep<S: Scalar>(
    graph: &LnnGraph,
    betas: &[S],
    weights: &[S],
    bounds: &mut [TruthBounds<S>],
) -> f64 {
    let mut change: f64 = 0.0;
    for i in (0..graph.nodes.len()).rev() {
        let node = &graph.nodes[i];
        if !node.kind.is_gate() {
            continue;
        }
        let inputs = gather(graph, i, weights, bounds);
        let out = bounds[i].clone();
        let candidates = gate::downward(node.kind, &betas[i], &out, &inputs);
        for (&(c, _), cand) in graph.children[i].iter().zip(candidates) {
            if graph.nodes[c].asserted {
                continue;
            }
            let old = bounds[c].clone();
            let mut next = old.clone();
            if let Some(l) = cand.lower {
                next.lower = next.lower.max_with(l);
            }
            if let Some(u) = cand.upper {
                next.upper = next.upper.min_with(u);
            }
            change = change
                .max((next.lower.value() - old.lower.value()).abs())
                .max((next.upper.value() - old.upper.value()).abs());
            bounds[c] = next;
        }
    }
    change
}

impl LnnGraph {
    fn current_bounds(&self) -> Vec<TruthBounds> {
        self.nodes.iter().map(|n| n.bounds).collect()
    }

    fn store_bounds(&mut self, bounds: Vec<TruthBounds>) {
        for (n, b) in self.nodes.iter_mut().zip(bounds) {
            n.bounds = b;
        }
    }

    /// Recomputes non-asserted gates from their children; bounds only tighten.
    pub fn upward_pass(&mut self) -> f64 {
        let mut bounds = self.current_bounds();
        let change = upward_sweep(self, &self.betas(), &self.weights(), &mut bounds);
        self.store_bounds(bounds);
        change
    }

    /// Tightens children from their parents' bounds through the inverse activations.
    pub fn downward_pass(&mut self) -> f64 {
        let mut bounds = self.current_bounds();
        let change = downward_sweep(self, &self.betas(), &self.weights(), &mut bounds);
        self.store_bounds(bounds);
        change
    }

    /// Alternates upward and downward passes until the largest change falls
    /// below `epsilon` or `max_iterations` sweeps have run.
    pub fn infer_fixpoint(&mut self, config: &InferenceConfig) -> InferenceReport {
        self.infer_fixpoint_with(config, |_, _| {})
    }

    /// As [`LnnGraph::infer_fixpoint`], calling `observe(sweep, graph)` after each sweep.
    pub fn infer_fixpoint_with(
        &mut self,
        config: &InferenceConfig,
        mut observe: impl FnMut(usize, &LnnGraph),
    ) -> InferenceReport {
        let mut iterations = 0;
        let mut converged = false;
        while iterations < config.max_iterations.max(1) {
            let up = self.upward_pass();
            let down = self.downward_pass();
            iterations += 1;
            observe(iterations, self);
            if up.max(down) < config.epsilon {
                converged = true;
                break;
            }
        }
        InferenceReport { iterations, converged, total_contradiction: self.contradiction_loss() }
    }
}
