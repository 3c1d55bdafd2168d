//! JSON bodies. Field names are the wire schema.

use cyclone_core::engine::{Action, ActionKind, Card, Color, Hint, Player, ResolvedEvent, NUM_COLORS};
use cyclone_core::harness::DecisionRecord;
use cyclone_core::knowledge::KnowledgeSummary;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "cyclone-session/1";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CreateSession {
    pub preset: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub human_seat: Option<Player>,
    #[serde(default)]
    pub capture: Option<bool>,
}

/// Either `{"action": "C1:R"}` or the structured form
/// `{"kind": "ClueColor", "clueValue": "R", "target": 1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionInput {
    Text {
        action: Action,
    },
    #[serde(rename_all = "camelCase")]
    Fields {
        kind: ActionKind,
        #[serde(default)]
        slot: Option<usize>,
        #[serde(default)]
        clue_value: Option<serde_json::Value>,
        #[serde(default)]
        target: Option<Player>,
    },
}

impl ActionInput {
    pub fn to_action(&self) -> Result<Action, String> {
        let (kind, slot, clue_value, target) = match self {
            ActionInput::Text { action } => return Ok(*action),
            ActionInput::Fields { kind, slot, clue_value, target } => (*kind, *slot, clue_value, *target),
        };
        let need_slot = || slot.ok_or_else(|| "slot is required".to_string());
        let need_target = || target.ok_or_else(|| "target is required".to_string());
        Ok(match kind {
            ActionKind::Play => Action::Play(need_slot()?),
            ActionKind::Discard => Action::Discard(need_slot()?),
            ActionKind::ClueColor => {
                let c = clue_value
                    .as_ref()
                    .and_then(|v| v.as_str())
                    .and_then(|s| s.chars().next().filter(|_| s.len() == 1))
                    .and_then(Color::from_letter)
                    .ok_or_else(|| "clueValue must be a color letter".to_string())?;
                Action::Clue { target: need_target()?, hint: Hint::Color(c) }
            }
            ActionKind::ClueRank => {
                let r = clue_value
                    .as_ref()
                    .and_then(|v| v.as_u64().or_else(|| v.as_str().and_then(|s| s.parse().ok())))
                    .filter(|r| (1..=5).contains(r))
                    .ok_or_else(|| "clueValue must be a rank 1..5".to_string())?;
                Action::Clue { target: need_target()?, hint: Hint::Rank(r as u8) }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentCard {
    pub card: Card,
    pub knowledge: KnowledgeSummary,
}

/// What the human may see. Own cards appear only as clue knowledge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HumanView {
    pub own_hand: Vec<KnowledgeSummary>,
    pub agent_hand: Vec<AgentCard>,
    /// Stack heights in suit order R, Y, G, W, B.
    pub fireworks: [u8; NUM_COLORS],
    pub discards: Vec<Card>,
    pub info_tokens: u8,
    pub strikes: u8,
    pub deck_size: usize,
    pub history: Vec<ResolvedEvent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionStatus {
    pub turn: u32,
    pub current_player: Player,
    pub your_turn: bool,
    pub terminal: bool,
    pub ended: bool,
    pub score: u32,
    pub final_score: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub schema: String,
    pub session_id: String,
    pub preset: String,
    pub seed: u64,
    pub human_seat: Player,
    pub agent_seat: Player,
    pub capture: bool,
    pub status: SessionStatus,
    pub view: HumanView,
    pub legal_actions: Vec<Action>,
    /// Moves made since the previous response, human's first.
    pub last_events: Vec<ResolvedEvent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    pub schema: String,
    pub session_id: String,
    pub terminal: bool,
    pub score: u32,
    /// Game log text; replays to `score` when the game finished.
    pub game_log: String,
    pub decisions: Vec<DecisionRecord>,
    /// The same records plus the log, as a decision db file.
    pub decision_db: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    /// Weight file text.
    pub weights: String,
}
