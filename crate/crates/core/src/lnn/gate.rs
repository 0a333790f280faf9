//! Weighted Łukasiewicz gate activations and their functional inverses.
//!
//! And:     y = clamp(β − Σ wᵢ(1 − xᵢ))
//! Or:      y = clamp(1 − β + Σ wᵢ xᵢ)
//! Not:     y = 1 − x
//! Implies: y = clamp(1 − β + w_a(1 − a) + w_c c), i.e. an Or over (1 − a, c).

use super::scalar::Scalar;
use super::{NodeKind, TruthBounds};

/// Weights below this skip downward tightening (division guard).
pub const MIN_INVERSE_WEIGHT: f64 = 1e-6;

/// Candidate tightening for one child; `None` where the inverse is uninformative.
#[derive(Debug, Clone, PartialEq)]
pub struct Tightening<S> {
    pub lower: Option<S>,
    pub upper: Option<S>,
}

fn one<S: Scalar>() -> S {
    S::constant(1.0)
}

fn negate<S: Scalar>(b: &TruthBounds<S>) -> TruthBounds<S> {
    TruthBounds { lower: one::<S>() - b.upper.clone(), upper: one::<S>() - b.lower.clone() }
}

/// Inputs of an Or-family gate with negative dependence rewritten as `1 − x`.
fn or_inputs<S: Scalar>(kind: NodeKind, inputs: &[(S, TruthBounds<S>)]) -> Vec<(S, TruthBounds<S>)> {
    inputs
        .iter()
        .enumerate()
        .map(
            |(i, (w, b))| {
                if kind == NodeKind::Implies && i == 0 {
                    (w.clone(), negate(b))
                } else {
                    (w.clone(), b.clone())
                }
            },
        )
        .collect()
}

fn and_pre<S: Scalar>(beta: &S, inputs: &[(S, TruthBounds<S>)], pick: impl Fn(&TruthBounds<S>) -> S) -> S {
    inputs.iter().fold(beta.clone(), |acc, (w, b)| acc - w.clone() * (one::<S>() - pick(b)))
}

fn or_pre<S: Scalar>(beta: &S, inputs: &[(S, TruthBounds<S>)], pick: impl Fn(&TruthBounds<S>) -> S) -> S {
    inputs.iter().fold(one::<S>() - beta.clone(), |acc, (w, b)| acc + w.clone() * pick(b))
}

/// Output bounds of a gate given its children's bounds. `None` for propositions.
pub fn upward<S: Scalar>(kind: NodeKind, beta: &S, inputs: &[(S, TruthBounds<S>)]) -> Option<TruthBounds<S>> {
    match kind {
        NodeKind::Proposition => None,
        NodeKind::Not => Some(negate(&inputs[0].1)),
        NodeKind::And => Some(TruthBounds {
            lower: and_pre(beta, inputs, |b| b.lower.clone()).clamp01(),
            upper: and_pre(beta, inputs, |b| b.upper.clone()).clamp01(),
        }),
        NodeKind::Or | NodeKind::Implies => {
            let xs = or_inputs(kind, inputs);
            Some(TruthBounds {
                lower: or_pre(beta, &xs, |b| b.lower.clone()).clamp01(),
                upper: or_pre(beta, &xs, |b| b.upper.clone()).clamp01(),
            })
        }
    }
}

fn sum_except<S: Scalar>(inputs: &[(S, TruthBounds<S>)], skip: usize, term: impl Fn(&S, &TruthBounds<S>) -> S) -> S {
    inputs.iter().enumerate().filter(|(j, _)| *j != skip).fold(S::constant(0.0), |acc, (_, (w, b))| acc + term(w, b))
}

fn and_inverse<S: Scalar>(beta: &S, out: &TruthBounds<S>, inputs: &[(S, TruthBounds<S>)]) -> Vec<Tightening<S>> {
    let mut lo_out = out.lower.clone();
    lo_out.note_branch(0.0);
    let mut up_out = out.upper.clone();
    up_out.note_branch(1.0);
    (0..inputs.len())
        .map(|i| {
            let w = &inputs[i].0;
            if w.value() < MIN_INVERSE_WEIGHT {
                return Tightening { lower: None, upper: None };
            }
            let lower = (lo_out.value() > 0.0).then(|| {
                let rest = sum_except(inputs, i, |w, b| w.clone() * (one::<S>() - b.upper.clone()));
                (one::<S>() - (beta.clone() - lo_out.clone() - rest).div(w)).clamp01()
            });
            let upper = (up_out.value() < 1.0).then(|| {
                let rest = sum_except(inputs, i, |w, b| w.clone() * (one::<S>() - b.lower.clone()));
                (one::<S>() - (beta.clone() - up_out.clone() - rest).div(w)).clamp01()
            });
            Tightening { lower, upper }
        })
        .collect()
}

fn or_inverse<S: Scalar>(beta: &S, out: &TruthBounds<S>, inputs: &[(S, TruthBounds<S>)]) -> Vec<Tightening<S>> {
    let mut lo_out = out.lower.clone();
    lo_out.note_branch(0.0);
    let mut up_out = out.upper.clone();
    up_out.note_branch(1.0);
    (0..inputs.len())
        .map(|i| {
            let w = &inputs[i].0;
            if w.value() < MIN_INVERSE_WEIGHT {
                return Tightening { lower: None, upper: None };
            }
            let lower = (lo_out.value() > 0.0).then(|| {
                let rest = sum_except(inputs, i, |w, b| w.clone() * b.upper.clone());
                (lo_out.clone() - one::<S>() + beta.clone() - rest).div(w).clamp01()
            });
            let upper = (up_out.value() < 1.0).then(|| {
                let rest = sum_except(inputs, i, |w, b| w.clone() * b.lower.clone());
                (up_out.clone() - one::<S>() + beta.clone() - rest).div(w).clamp01()
            });
            Tightening { lower, upper }
        })
        .collect()
}

/// Candidate child bounds implied by a gate's output bounds.
pub fn downward<S: Scalar>(
    kind: NodeKind,
    beta: &S,
    out: &TruthBounds<S>,
    inputs: &[(S, TruthBounds<S>)],
) -> Vec<Tightening<S>> {
    match kind {
        NodeKind::Proposition => Vec::new(),
        NodeKind::Not => vec![Tightening {
            lower: Some(one::<S>() - out.upper.clone()),
            upper: Some(one::<S>() - out.lower.clone()),
        }],
        NodeKind::And => and_inverse(beta, out, inputs),
        NodeKind::Or => or_inverse(beta, out, inputs),
        NodeKind::Implies => {
            let xs = or_inputs(kind, inputs);
            let mut t = or_inverse(beta, out, &xs);
            // Antecedent entered as (1 − a): map the bounds back.
            let ante = &mut t[0];
            let lower = ante.upper.take().map(|u| one::<S>() - u);
            let upper = ante.lower.take().map(|l| one::<S>() - l);
            ante.lower = lower;
            ante.upper = upper;
            t
        }
    }
}
