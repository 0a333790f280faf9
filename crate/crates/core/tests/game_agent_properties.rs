use std::collections::BTreeSet;
use std::sync::Arc;

use loa_core::agent::{loa_decide, replay_rewards, run_episode, train_run, Agent, AgentConfig, AgentKind};
use loa_core::game::{
    generate_layout, new_game, optimal_steps, step, Action, ActionCommand, Direction, Layout, DEFAULT_MAX_STEPS,
};
use loa_core::parser::{Fact, FactSet, Perception};
use loa_core::rng::Lcg;
use loa_core::rulebook::{Rulebook, BUILTIN_NAMES};
use proptest::prelude::*;

fn fix_a_states() -> Vec<FactSet> {
    use Direction::*;
    vec![
        FactSet::from_iter([Fact::Found(North)]),
        FactSet::from_iter([Fact::Found(East), Fact::Found(South), Fact::Visited(South)]),
        FactSet::from_iter([Fact::Found(West), Fact::Visited(West), Fact::CoinHere]),
    ]
}

fn recommended(rulebook: &Rulebook, facts: &FactSet) -> BTreeSet<String> {
    let mut graph = rulebook.compile().unwrap();
    loa_decide(&mut graph, facts, &AgentConfig::default())
        .unwrap()
        .recommendations
        .into_iter()
        .filter(|r| r.recommended)
        .map(|r| r.action)
        .collect()
}

fn all_facts() -> Vec<Fact> {
    let mut v = vec![Fact::CoinHere];
    for d in Direction::ALL {
        v.push(Fact::Found(d));
        v.push(Fact::Visited(d));
    }
    v
}

/// Plays `steps` random commands, checking perceived facts against the true
/// game state after every step.
fn check_tracker(layout: Layout, seed: u64, steps: usize) {
    let layout = Arc::new(layout);
    let (mut state, obs) = new_game(layout.clone(), steps + 1).unwrap();
    let mut perception = Perception::new(&obs.text);
    let mut rng = Lcg::new(seed);
    let commands: Vec<ActionCommand> = Direction::ALL
        .iter()
        .map(|d| ActionCommand::Go(*d))
        .chain([ActionCommand::TakeCoin, ActionCommand::Invalid("dance".into())])
        .collect();
    for _ in 0..steps {
        let mut cmd = &commands[rng.choose(commands.len())];
        if *cmd == ActionCommand::TakeCoin && state.coin_here() {
            // Keep walking; taking the coin would end the game.
            cmd = &commands[5];
        }
        let (next, obs) = step(&state, cmd).unwrap();
        perception.observe(cmd, &obs.text);
        state = next;
        let facts = perception.facts();
        for d in Direction::ALL {
            let neighbor = layout.neighbor(&state.location, d);
            assert_eq!(facts.contains(&Fact::Found(d)), neighbor.is_some(), "found({d:?}) in {}", state.location);
            let seen = neighbor.is_some_and(|n| state.visited.contains(n));
            assert_eq!(facts.contains(&Fact::Visited(d)), seen, "visited({d:?}) in {}", state.location);
        }
        assert_eq!(facts.contains(&Fact::CoinHere), state.coin_here());
    }
}

#[test]
fn tracker_is_sound_on_long_random_walks() {
    for seed in 0..5 {
        let layout = generate_layout(6, 3, seed).unwrap();
        check_tracker(layout, seed, 1500);
    }
}

#[test]
fn straight_chains_need_length_plus_one() {
    for n in 1..=10 {
        for seed in 0..10 {
            let layout = generate_layout(n, 0, seed).unwrap();
            assert_eq!(optimal_steps(&layout).unwrap(), n + 1);
        }
    }
}

#[test]
fn scaling_parameters_keeps_recommendations() {
    for name in BUILTIN_NAMES {
        let rb = Rulebook::builtin(name).unwrap();
        for facts in fix_a_states() {
            let base = recommended(&rb, &facts);
            for scale in [0.6, 0.8, 1.25, 2.0] {
                let mut graph = rb.compile().unwrap();
                let scaled: Vec<f64> = graph.parameters().iter().map(|p| p * scale).collect();
                graph.set_parameters(&scaled);
                let got: BTreeSet<String> = loa_decide(&mut graph, &facts, &AgentConfig::default())
                    .unwrap()
                    .recommendations
                    .into_iter()
                    .filter(|r| r.recommended)
                    .map(|r| r.action)
                    .collect();
                assert_eq!(got, base, "{name} scale {scale}");
            }
        }
    }
}

#[test]
fn training_runs_are_reproducible() {
    let layout = Arc::new(generate_layout(5, 2, 4).unwrap());
    for kind in [AgentKind::Random, AgentKind::TabQ, AgentKind::parse("loa", "avoid_revisit").unwrap()] {
        let run = || {
            let (m, logs) = train_run(&layout, &kind, 30, 17, DEFAULT_MAX_STEPS).unwrap();
            let logs: String = logs.iter().map(|l| l.to_jsonl()).collect();
            (m.to_jsonl(), logs)
        };
        assert_eq!(run(), run());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simple_nav_recommendations_grow_with_facts(mask in 0u16..512, extra in 0usize..9) {
        let facts = all_facts();
        let base: FactSet = facts.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, f)| *f).collect();
        let mut more = base.clone();
        more.insert(facts[extra]);
        let rb = Rulebook::builtin("simple_nav").unwrap();
        let before = recommended(&rb, &base);
        let after = recommended(&rb, &more);
        prop_assert!(before.is_subset(&after), "{:?} -> {:?}", before, after);
    }

    #[test]
    fn loa_decide_is_deterministic(mask in 0u16..512) {
        let facts: FactSet = all_facts().into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, f)| f).collect();
        let rb = Rulebook::builtin("constraint_revisit").unwrap();
        let mut g1 = rb.compile().unwrap();
        let mut g2 = rb.compile().unwrap();
        let cfg = AgentConfig::default();
        prop_assert_eq!(loa_decide(&mut g1, &facts, &cfg).unwrap(), loa_decide(&mut g2, &facts, &cfg).unwrap());
    }

    #[test]
    fn avoid_revisit_is_optimal_zero_shot(chain in 1usize..=10, branches in 0usize..=3, seed in 0u64..1000) {
        prop_assume!(branches <= chain);
        let layout = Arc::new(generate_layout(chain, branches, seed).unwrap());
        let kind = AgentKind::parse("loa", "avoid_revisit").unwrap();
        let mut agent = Agent::new(&kind, seed).unwrap();
        let log = run_episode(&layout, &mut agent, DEFAULT_MAX_STEPS).unwrap();
        prop_assert!(log.solved());
        prop_assert_eq!(log.steps, optimal_steps(&layout).unwrap());
    }

    #[test]
    fn logs_replay_to_the_same_rewards(seed in 0u64..10_000, agent_seed in any::<u64>()) {
        let layout = Arc::new(generate_layout(4, 2, seed).unwrap());
        let mut agent = Agent::new(&AgentKind::Random, agent_seed).unwrap();
        let log = run_episode(&layout, &mut agent, DEFAULT_MAX_STEPS).unwrap();
        let rewards: Vec<f64> = log.entries.iter().map(|e| e.reward).collect();
        prop_assert_eq!(replay_rewards(&layout, DEFAULT_MAX_STEPS, &log.entries).unwrap(), rewards);
    }

    #[test]
    fn generated_layouts_have_requested_size(chain in 1usize..=10, branches in 0usize..=3, seed in any::<u64>()) {
        prop_assume!(branches <= chain);
        let layout = generate_layout(chain, branches, seed).unwrap();
        prop_assert_eq!(layout.rooms().len(), chain + 1 + branches);
        prop_assert_eq!(layout, generate_layout(chain, branches, seed).unwrap());
    }
}

#[test]
fn take_coin_is_only_applicable_with_a_coin() {
    let rb = Rulebook::builtin("avoid_revisit").unwrap();
    let got = recommended(&rb, &fix_a_states()[2]);
    assert_eq!(got, BTreeSet::from([Action::TakeCoin.label()]));
}
