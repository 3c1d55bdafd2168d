use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sim::Table;
use super::HarnessError;
use crate::decision::{choose_action, WeightVector};
use crate::engine::{Action, GameLog, Player, NUM_PLAYERS};
use crate::knowledge::PlayerView;
use crate::Scalar;

pub const DB_FORMAT: &str = "cyclone-decisions";
pub const DB_VERSION: u32 = 1;

/// One decision: the actor's view is rebuilt from the referenced game log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub game_id: String,
    pub turn: u32,
    pub actor: Player,
    pub action: Action,
    pub actor_tag: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header { format: String, version: u32 },
    Game { id: String, log: String },
    Decision(DecisionRecord),
}

/// Game logs plus the decisions that refer to them.
///
/// Serialized as JSON lines: a header, then every game, then every record.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecisionDb {
    games: BTreeMap<String, GameLog>,
    records: Vec<DecisionRecord>,
}

/// One record per turn of `log`; `actor_tags[p]` labels player `p`.
pub fn capture_decisions(
    game_id: &str,
    log: &GameLog,
    actor_tags: [&str; NUM_PLAYERS],
) -> Result<Vec<DecisionRecord>, HarnessError> {
    let mut table = Table::new(log.initial_state()?);
    let mut out = Vec::with_capacity(log.actions.len());
    for (turn, &action) in log.actions.iter().enumerate() {
        let actor = table.state().current_player();
        table.step(action).map_err(|e| {
            HarnessError::Validation(format!("game {game_id}: action {turn} ({action}) does not replay: {e}"))
        })?;
        out.push(DecisionRecord {
            game_id: game_id.to_string(),
            turn: turn as u32,
            actor,
            action,
            actor_tag: actor_tags[actor].to_string(),
        });
    }
    Ok(out)
}

impl DecisionDb {
    pub fn new() -> DecisionDb {
        DecisionDb::default()
    }

    pub fn games(&self) -> &BTreeMap<String, GameLog> {
        &self.games
    }

    pub fn records(&self) -> &[DecisionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Registers a game. Re-adding an identical log is a no-op.
    pub fn add_game(&mut self, id: &str, log: GameLog) -> Result<(), HarnessError> {
        match self.games.get(id) {
            Some(existing) if *existing != log => {
                Err(HarnessError::Validation(format!("game id {id} already holds a different log")))
            }
            _ => {
                self.games.insert(id.to_string(), log);
                Ok(())
            }
        }
    }

    pub fn push(&mut self, record: DecisionRecord) {
        self.records.push(record);
    }

    /// Adds `log` and one record per turn for the actors listed in `keep`.
    pub fn capture(
        &mut self,
        game_id: &str,
        log: &GameLog,
        actor_tags: [&str; NUM_PLAYERS],
        keep: [bool; NUM_PLAYERS],
    ) -> Result<usize, HarnessError> {
        let records = capture_decisions(game_id, log, actor_tags)?;
        self.add_game(game_id, log.clone())?;
        let before = self.records.len();
        self.records.extend(records.into_iter().filter(|r| keep[r.actor]));
        Ok(self.records.len() - before)
    }

    /// Keeps only the records selected by `f`; games stay.
    pub fn retain(&mut self, f: impl FnMut(&DecisionRecord) -> bool) {
        self.records.retain(f);
    }

    /// Rebuilds the acting player's view for every record, in record order.
    pub fn views(&self) -> Result<Vec<PlayerView>, HarnessError> {
        let mut by_game: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.records.iter().enumerate() {
            by_game.entry(&r.game_id).or_default().push(i);
        }
        let mut views: Vec<Option<PlayerView>> = vec![None; self.records.len()];
        for (game_id, mut idx) in by_game {
            let log = self
                .games
                .get(game_id)
                .ok_or_else(|| HarnessError::Validation(format!("record {}: unknown game {game_id}", idx[0])))?;
            idx.sort_by_key(|&i| self.records[i].turn);
            let mut table = Table::new(log.initial_state()?);
            let mut turn = 0usize;
            for i in idx {
                let r = &self.records[i];
                let bad = |why: String| {
                    HarnessError::Validation(format!("record {i} (game {game_id}, turn {}): {why}", r.turn))
                };
                while turn < r.turn as usize {
                    let action = *log.actions.get(turn).ok_or_else(|| bad("turn beyond the end of the log".into()))?;
                    table.step(action).map_err(|e| bad(e.to_string()))?;
                    turn += 1;
                }
                if table.is_terminal() {
                    return Err(bad("game is already over".into()));
                }
                if table.state().current_player() != r.actor {
                    return Err(bad(format!("player {} is not on turn", r.actor)));
                }
                if log.actions.get(turn) != Some(&r.action) {
                    return Err(bad(format!("action {} differs from the log", r.action)));
                }
                views[i] = Some(table.view(r.actor).clone());
            }
        }
        Ok(views.into_iter().map(|v| v.expect("every record visited")).collect())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut line = |l: &Line| {
            let _ = writeln!(out, "{}", serde_json::to_string(l).expect("plain data serializes"));
        };
        line(&Line::Header { format: DB_FORMAT.into(), version: DB_VERSION });
        for (id, log) in &self.games {
            line(&Line::Game { id: id.clone(), log: log.to_text() });
        }
        for r in &self.records {
            line(&Line::Decision(r.clone()));
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<DecisionDb, HarnessError> {
        let mut db = DecisionDb::new();
        let mut seen_header = false;
        for (n, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let fail = |m: String| HarnessError::Format(format!("decision db line {}: {m}", n + 1));
            let line: Line = serde_json::from_str(raw).map_err(|e| fail(e.to_string()))?;
            match line {
                Line::Header { format, version } => {
                    if seen_header || format != DB_FORMAT || version != DB_VERSION {
                        return Err(fail(format!("unexpected header {format} v{version}")));
                    }
                    seen_header = true;
                }
                _ if !seen_header => return Err(fail("missing header".into())),
                Line::Game { id, log } => {
                    let log: GameLog = log.parse().map_err(|e: crate::engine::EngineError| fail(e.to_string()))?;
                    db.add_game(&id, log).map_err(|e| fail(e.to_string()))?;
                }
                Line::Decision(r) => db.records.push(r),
            }
        }
        if !seen_header {
            return Err(HarnessError::Format("decision db is empty".into()));
        }
        Ok(db)
    }

    pub fn read(path: &std::path::Path) -> Result<DecisionDb, HarnessError> {
        DecisionDb::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_jsonl())?;
        Ok(())
    }
}

/// Views and recorded actions, ready for repeated scoring.
#[derive(Clone, Debug)]
pub struct PreparedDb {
    pub views: Vec<PlayerView>,
    pub actions: Vec<Action>,
}

impl PreparedDb {
    pub fn new(db: &DecisionDb) -> Result<PreparedDb, HarnessError> {
        if db.is_empty() {
            return Err(HarnessError::Validation("decision db has no records".into()));
        }
        Ok(PreparedDb { views: db.views()?, actions: db.records().iter().map(|r| r.action).collect() })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Number of records where `w` picks the recorded action.
    pub fn matches<T: Scalar>(&self, w: &WeightVector<T>) -> Result<usize, HarnessError> {
        self.recommendations(w).map(|rec| rec.iter().zip(&self.actions).filter(|(a, b)| a == b).count())
    }

    pub fn recommendations<T: Scalar>(&self, w: &WeightVector<T>) -> Result<Vec<Action>, HarnessError> {
        self.views
            .par_iter()
            .enumerate()
            .map(|(i, v)| choose_action(v, w).map_err(|e| HarnessError::Validation(format!("record {i}: {e}"))))
            .collect()
    }

    pub fn humanness<T: Scalar>(&self, w: &WeightVector<T>) -> Result<f64, HarnessError> {
        Ok(self.matches(w)? as f64 / self.len() as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMatch {
    pub index: usize,
    pub game_id: String,
    pub turn: u32,
    pub recorded: Action,
    pub recommended: Action,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HumannessReport {
    pub matches: usize,
    pub total: usize,
    pub fraction: f64,
    pub records: Vec<RecordMatch>,
}

/// Fraction of records where `w` recommends the recorded action.
pub fn evaluate_humanness<T: Scalar>(w: &WeightVector<T>, db: &DecisionDb) -> Result<HumannessReport, HarnessError> {
    let prepared = PreparedDb::new(db)?;
    let recommended = prepared.recommendations(w)?;
    let records: Vec<RecordMatch> = db
        .records()
        .iter()
        .zip(recommended)
        .enumerate()
        .map(|(index, (r, rec))| RecordMatch {
            index,
            game_id: r.game_id.clone(),
            turn: r.turn,
            recorded: r.action,
            recommended: rec,
            matched: rec == r.action,
        })
        .collect();
    let matches = records.iter().filter(|r| r.matched).count();
    let total = records.len();
    Ok(HumannessReport { matches, total, fraction: matches as f64 / total as f64, records })
}
