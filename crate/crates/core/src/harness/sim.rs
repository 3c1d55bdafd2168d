use rayon::prelude::*;

use super::stats::MatchStats;
use super::HarnessError;
use crate::decision::{choose_action, WeightVector};
use crate::engine::{Action, GameLog, GameState, Player, ResolvedEvent, RulesConfig, NUM_PLAYERS};
use crate::knowledge::PlayerView;
use crate::Scalar;

/// A game together with both players' views, kept in step.
#[derive(Clone, Debug)]
pub struct Table {
    state: GameState,
    views: [PlayerView; NUM_PLAYERS],
}

impl Table {
    pub fn new(state: GameState) -> Table {
        let views = [PlayerView::observe(&state, 0), PlayerView::observe(&state, 1)];
        Table { state, views }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn view(&self, player: Player) -> &PlayerView {
        &self.views[player]
    }

    pub fn current_view(&self) -> &PlayerView {
        &self.views[self.state.current_player()]
    }

    pub fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn step(&mut self, action: Action) -> Result<ResolvedEvent, HarnessError> {
        let event = self.state.apply(action)?;
        for view in &mut self.views {
            view.apply_event(&event)?;
        }
        Ok(event)
    }

    pub fn into_state(self) -> GameState {
        self.state
    }
}

/// Plays one game to the end with the given policy per seat.
pub fn play_game<T: Scalar>(
    seed: u64,
    seats: [&WeightVector<T>; NUM_PLAYERS],
    rules: RulesConfig,
) -> Result<GameState, HarnessError> {
    let mut table = Table::new(GameState::new(seed, rules)?);
    while !table.is_terminal() {
        let seat = table.state().current_player();
        let action = choose_action(table.current_view(), seats[seat])
            .map_err(|source| HarnessError::Decision { seed, source })?;
        table.step(action).map_err(|e| e.with_seed(seed))?;
    }
    Ok(table.into_state())
}

/// Seed of game `i` in a block starting at `seed_base`.
pub fn game_seed(seed_base: u64, i: usize) -> u64 {
    seed_base.wrapping_add(i as u64)
}

/// Which policy sits in seat 0 for game `i`: `A` on even games, `B` on odd ones.
pub fn a_moves_first(i: usize) -> bool {
    i.is_multiple_of(2)
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub stats: MatchStats,
    pub scores: Vec<u32>,
    /// Present when requested; one per game in seed order.
    pub logs: Vec<GameLog>,
}

/// Final scores of `n` games between `a` and `b`, alternating who moves first.
pub fn simulate_scores<T: Scalar>(
    a: &WeightVector<T>,
    b: &WeightVector<T>,
    n: usize,
    seed_base: u64,
    rules: RulesConfig,
) -> Result<Vec<u32>, HarnessError> {
    Ok(run_games(a, b, n, seed_base, rules)?.into_iter().map(|s| s.final_score()).collect())
}

fn run_games<T: Scalar>(
    a: &WeightVector<T>,
    b: &WeightVector<T>,
    n: usize,
    seed_base: u64,
    rules: RulesConfig,
) -> Result<Vec<GameState>, HarnessError> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let seats = if a_moves_first(i) { [a, b] } else { [b, a] };
            play_game(game_seed(seed_base, i), seats, rules)
        })
        .collect()
}

pub fn simulate_games<T: Scalar>(
    (label_a, a): (&str, &WeightVector<T>),
    (label_b, b): (&str, &WeightVector<T>),
    n: usize,
    seed_base: u64,
    rules: RulesConfig,
    keep_logs: bool,
) -> Result<SimulationOutput, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Validation("at least one game is required".into()));
    }
    let states = run_games(a, b, n, seed_base, rules)?;
    let scores: Vec<u32> = states.iter().map(GameState::final_score).collect();
    let logs = if keep_logs { states.iter().map(|s| GameLog::from_state(s, false)).collect() } else { Vec::new() };
    Ok(SimulationOutput { stats: MatchStats::from_scores(label_a, label_b, &scores), scores, logs })
}
