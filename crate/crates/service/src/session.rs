use cyclone_core::decision::{choose_action, Preset};
use cyclone_core::engine::{Action, EngineError, GameLog, GameState, Player, ResolvedEvent, RulesConfig};
use cyclone_core::harness::{capture_decisions, DecisionDb, HarnessError, Table};
use cyclone_core::Weights;

use crate::dto::{AgentCard, EndReport, HumanView, SessionStatus, SessionView, SCHEMA};
use crate::error::ApiError;

/// One human-vs-agent game. All moves go through the engine.
#[derive(Clone, Debug)]
pub struct Session {
    id: String,
    preset: Preset,
    weights: Weights,
    human_seat: Player,
    capture: bool,
    table: Table,
    ended: bool,
}

impl Session {
    /// Starts a game and lets the agent move first if it holds seat 0.
    pub fn new(
        id: &str,
        preset: Preset,
        seed: u64,
        human_seat: Player,
        capture: bool,
        rules: RulesConfig,
    ) -> Result<(Session, Vec<ResolvedEvent>), ApiError> {
        let state = GameState::new(seed, rules).map_err(ApiError::internal)?;
        Session::from_state(id, preset, state, human_seat, capture)
    }

    pub fn from_state(
        id: &str,
        preset: Preset,
        state: GameState,
        human_seat: Player,
        capture: bool,
    ) -> Result<(Session, Vec<ResolvedEvent>), ApiError> {
        if human_seat > 1 {
            return Err(ApiError::bad_request("bad_seat", format!("human_seat must be 0 or 1, got {human_seat}")));
        }
        let mut s = Session {
            id: id.to_string(),
            preset,
            weights: preset.weights(),
            human_seat,
            capture,
            table: Table::new(state),
            ended: false,
        };
        let events = s.run_agent()?;
        Ok((s, events))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &GameState {
        self.table.state()
    }

    pub fn human_seat(&self) -> Player {
        self.human_seat
    }

    pub fn capture(&self) -> bool {
        self.capture
    }

    pub fn is_ended(&self) -> bool {
        self.ended
    }

    fn agent_seat(&self) -> Player {
        1 - self.human_seat
    }

    fn run_agent(&mut self) -> Result<Vec<ResolvedEvent>, ApiError> {
        let mut out = Vec::new();
        while !self.table.is_terminal() && self.state().current_player() == self.agent_seat() {
            let action = choose_action(self.table.current_view(), &self.weights).map_err(ApiError::internal)?;
            let event = self.table.step(action).map_err(ApiError::internal)?;
            out.push(event.redacted_for(self.human_seat));
        }
        Ok(out)
    }

    /// Applies the human's action, then the agent's replies. Returns the events
    /// of this exchange as the human sees them. Nothing changes on error.
    pub fn submit(&mut self, action: Action) -> Result<Vec<ResolvedEvent>, ApiError> {
        if self.ended {
            return Err(ApiError::conflict("session_ended", "the session has been ended"));
        }
        if self.table.is_terminal() {
            return Err(ApiError::conflict("game_over", "the game is over"));
        }
        if self.state().current_player() != self.human_seat {
            return Err(ApiError::conflict("not_your_turn", "it is the agent's turn"));
        }
        if let Err(reason) = self.state().check(action) {
            return Err(ApiError::illegal(reason, action));
        }
        let event = self.table.step(action).map_err(ApiError::internal)?;
        let mut events = vec![event.redacted_for(self.human_seat)];
        events.extend(self.run_agent()?);
        Ok(events)
    }

    pub fn log(&self) -> GameLog {
        GameLog::from_state(self.state(), false)
    }

    /// The game so far and one record per human decision.
    pub fn decisions(&self) -> Result<DecisionDb, HarnessError> {
        let log = self.log();
        let mut tags = ["agent", "agent"];
        let human_tag = "human".to_string();
        let agent_tag = format!("preset:{}", self.preset);
        tags[self.human_seat] = &human_tag;
        tags[self.agent_seat()] = &agent_tag;
        let mut db = DecisionDb::new();
        db.add_game(&self.id, log.clone())?;
        for r in capture_decisions(&self.id, &log, tags)? {
            if r.actor == self.human_seat {
                db.push(r);
            }
        }
        Ok(db)
    }

    pub fn view(&self, last_events: Vec<ResolvedEvent>) -> SessionView {
        let state = self.state();
        let view = self.table.view(self.human_seat);
        let terminal = state.is_terminal();
        let your_turn = !terminal && !self.ended && state.current_player() == self.human_seat;
        SessionView {
            schema: SCHEMA.into(),
            session_id: self.id.clone(),
            preset: self.preset.name().into(),
            seed: state.seed(),
            human_seat: self.human_seat,
            agent_seat: self.agent_seat(),
            capture: self.capture,
            status: SessionStatus {
                turn: state.turn(),
                current_player: state.current_player(),
                your_turn,
                terminal,
                ended: self.ended,
                score: state.score(),
                final_score: terminal.then(|| state.final_score()),
            },
            view: HumanView {
                own_hand: view.own_hand().iter().map(Into::into).collect(),
                agent_hand: view
                    .teammate_hand()
                    .iter()
                    .map(|v| AgentCard { card: v.card, knowledge: (&v.knowledge).into() })
                    .collect(),
                fireworks: *view.fireworks(),
                discards: view.discards().to_vec(),
                info_tokens: view.info_tokens(),
                strikes: view.strikes(),
                deck_size: view.deck_size(),
                history: view.history().to_vec(),
            },
            legal_actions: if your_turn { view.legal_actions() } else { Vec::new() },
            last_events,
        }
    }

    pub fn end(&mut self) -> Result<EndReport, ApiError> {
        self.ended = true;
        let db = self.decisions().map_err(ApiError::internal)?;
        let state = self.state();
        Ok(EndReport {
            schema: SCHEMA.into(),
            session_id: self.id.clone(),
            terminal: state.is_terminal(),
            score: if state.is_terminal() { state.final_score() } else { state.score() },
            game_log: self.log().to_text(),
            decisions: db.records().to_vec(),
            decision_db: db.to_jsonl(),
        })
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        ApiError::internal(e)
    }
}
