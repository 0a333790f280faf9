//! Reward-driven parameter updates.
//!
//! The loss is `(score − t)² + λ·contradiction`, where `score` is the chosen
//! action's lower bound after one inference sweep (upward then downward)
//! from reset bounds with the current facts held fixed, and `t` is 1 for a
//! positive reward and 0 otherwise. Gradients are exact forward-mode
//! derivatives of that sweep; saturated clamps contribute zero.

use serde::{Deserialize, Serialize};

use super::infer::{downward_sweep, upward_sweep};
use super::scalar::{Dual, Scalar};
use super::{LnnError, LnnGraph, TruthBounds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub lambda: f64,
    pub weight_max: f64,
    pub beta_max: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 0.1, lambda: 0.1, weight_max: 10.0, beta_max: 10.0 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), LnnError> {
        if !(self.learning_rate > 0.0) {
            return Err(LnnError::InvalidConfig("learning_rate must be positive"));
        }
        if !(self.lambda >= 0.0) {
            return Err(LnnError::InvalidConfig("lambda must be nonnegative"));
        }
        if !(self.weight_max >= 1.0 && self.beta_max >= 1.0) {
            return Err(LnnError::InvalidConfig("clamps must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    /// Loss before the update.
    pub loss: f64,
    pub score: f64,
    pub target: f64,
}

/// Loss, its gradient over [`LnnGraph::parameters`], and the distance from
/// the evaluation point to the nearest kink of the piecewise-linear sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    pub score: f64,
    pub gradient: Vec<f64>,
    pub kink_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Param {
    Beta(usize),
    Weight(usize),
}

impl LnnGraph {
    fn parameter_layout(&self) -> Vec<Param> {
        let betas = (0..self.nodes.len()).filter(|&i| self.nodes[i].kind.is_weighted()).map(Param::Beta);
        let weights = self
            .children
            .iter()
            .enumerate()
            .filter(|(p, _)| self.nodes[*p].kind.is_weighted())
            .flat_map(|(_, ops)| ops.iter().map(|&(_, e)| Param::Weight(e)));
        let mut layout: Vec<Param> = betas.collect();
        let mut w: Vec<Param> = weights.collect();
        w.sort_by_key(|p| match p {
            Param::Weight(e) => *e,
            Param::Beta(_) => unreachable!(),
        });
        layout.extend(w);
        layout
    }

    /// Trainable parameters: β of every And/Or/Implies node (node order),
    /// then the weight of every edge under such a node (edge order).
    pub fn parameters(&self) -> Vec<f64> {
        self.parameter_layout()
            .into_iter()
            .map(|p| match p {
                Param::Beta(i) => self.nodes[i].beta,
                Param::Weight(e) => self.edges[e].weight,
            })
            .collect()
    }

    /// Human-readable names for [`LnnGraph::parameters`].
    pub fn parameter_names(&self) -> Vec<String> {
        self.parameter_layout()
            .into_iter()
            .map(|p| match p {
                Param::Beta(i) => format!("beta:{}", self.nodes[i].id),
                Param::Weight(e) => format!("weight:{}->{}", self.edges[e].parent, self.edges[e].child),
            })
            .collect()
    }

    /// Overwrites the trainable parameters without projection.
    pub fn set_parameters(&mut self, values: &[f64]) {
        for (p, &v) in self.parameter_layout().into_iter().zip(values) {
            match p {
                Param::Beta(i) => self.nodes[i].beta = v,
                Param::Weight(e) => self.edges[e].weight = v,
            }
        }
    }

    fn evaluate_loss<S: Scalar>(&self, action: usize, target: f64, lambda: f64, betas: &[S], weights: &[S]) -> (S, S) {
        let mut bounds: Vec<TruthBounds<S>> = self
            .nodes
            .iter()
            .map(|n| {
                let b = if n.asserted { n.bounds } else { TruthBounds::UNKNOWN };
                TruthBounds { lower: S::constant(b.lower), upper: S::constant(b.upper) }
            })
            .collect();
        upward_sweep(self, betas, weights, &mut bounds);
        downward_sweep(self, betas, weights, &mut bounds);

        let score = bounds[action].lower.clone();
        let err = score.clone() - S::constant(target);
        let contradiction = bounds
            .iter()
            .fold(S::constant(0.0), |acc, b| acc + (b.lower.clone() - b.upper.clone()).max_with(S::constant(0.0)));
        (err.clone() * err + S::constant(lambda) * contradiction, score)
    }

    fn action_position(&self, action: &str) -> Result<usize, LnnError> {
        self.index_of(action)
            .filter(|_| self.is_action(action))
            .ok_or_else(|| LnnError::UnknownAction(action.to_string()))
    }

    /// Training loss at the current parameters.
    pub fn training_loss(&self, action: &str, target: f64, lambda: f64) -> Result<f64, LnnError> {
        let a = self.action_position(action)?;
        let (loss, _) = self.evaluate_loss::<f64>(a, target, lambda, &self.betas(), &self.weights());
        Ok(loss)
    }

    /// Loss and its analytic gradient over [`LnnGraph::parameters`].
    pub fn loss_gradient(&self, action: &str, target: f64, lambda: f64) -> Result<LossGradient, LnnError> {
        let a = self.action_position(action)?;
        let layout = self.parameter_layout();
        let n = layout.len();
        let mut betas: Vec<Dual> = self.nodes.iter().map(|x| Dual::constant(x.beta)).collect();
        let mut weights: Vec<Dual> = self.edges.iter().map(|e| Dual::constant(e.weight)).collect();
        for (k, p) in layout.iter().enumerate() {
            match *p {
                Param::Beta(i) => betas[i] = Dual::variable(self.nodes[i].beta, k, n),
                Param::Weight(e) => weights[e] = Dual::variable(self.edges[e].weight, k, n),
            }
        }
        let (loss, score) = self.evaluate_loss(a, target, lambda, &betas, &weights);
        Ok(LossGradient { loss: loss.value, score: score.value, gradient: loss.gradient(n), kink_margin: loss.margin })
    }

    /// One projected gradient-descent step on the chosen action's loss.
    pub fn train_step(&mut self, action: &str, reward: f64, config: &TrainConfig) -> Result<TrainOutcome, LnnError> {
        config.validate()?;
        let target = if reward > 0.0 { 1.0 } else { 0.0 };
        let lg = self.loss_gradient(action, target, config.lambda)?;
        let layout = self.parameter_layout();
        for (p, g) in layout.into_iter().zip(&lg.gradient) {
            match p {
                Param::Beta(i) => {
                    let b = &mut self.nodes[i].beta;
                    *b = (*b - config.learning_rate * g).clamp(0.0, config.beta_max);
                }
                Param::Weight(e) => {
                    let w = &mut self.edges[e].weight;
                    *w = (*w - config.learning_rate * g).clamp(0.0, config.weight_max);
                }
            }
        }
        Ok(TrainOutcome { loss: lg.loss, score: lg.score, target })
    }
}
