use cyclone_core::decision::{choose_action, Preset};
use cyclone_core::engine::{replay, GameLog, GameState, RulesConfig, MAX_INFO_TOKENS};
use cyclone_core::harness::{simulate_games, Table};
use cyclone_core::knowledge::PlayerView;
use cyclone_core::Weights;
use proptest::prelude::*;

fn preset(i: usize) -> Weights {
    Preset::ALL[i % Preset::ALL.len()].weights()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Clue knowledge never rules out the true card, and the incrementally
    /// maintained view equals one rebuilt from the full history.
    #[test]
    fn knowledge_is_sound(seed in any::<u64>(), choice in any::<[usize; 2]>(), picks in prop::collection::vec(any::<u16>(), 80)) {
        let w = [preset(choice[0]), preset(choice[1])];
        let mut table = Table::new(GameState::new(seed, RulesConfig::default()).unwrap());
        let mut turn = 0;
        while !table.is_terminal() {
            let s = table.state();
            for p in 0..2 {
                let view = table.view(p);
                prop_assert_eq!(view, &PlayerView::observe(s, p));
                for (k, &card) in view.own_hand().iter().zip(s.hand(p)) {
                    prop_assert!(k.possible.contains(card));
                }
            }
            // Mix policy moves with arbitrary legal ones.
            let pick = picks[turn % picks.len()] as usize;
            let action = if pick.is_multiple_of(3) {
                let legal = s.legal_actions().unwrap();
                legal[pick % legal.len()]
            } else {
                choose_action(table.current_view(), &w[s.current_player()]).unwrap()
            };
            table.step(action).unwrap();
            prop_assert!(table.state().info_tokens() <= MAX_INFO_TOKENS);
            turn += 1;
        }
    }

    /// Every logged game replays to its recorded score, also through text.
    #[test]
    fn logs_replay(seed in 0u64..10_000, a in 0usize..3, b in 0usize..3) {
        let (wa, wb) = (preset(a), preset(b));
        let out = simulate_games(("a", &wa), ("b", &wb), 4, seed, RulesConfig::default(), true).unwrap();
        for (log, &score) in out.logs.iter().zip(&out.scores) {
            prop_assert_eq!(replay(log).unwrap().final_score(), score);
            let parsed: GameLog = log.to_text().parse().unwrap();
            prop_assert_eq!(&parsed, log);
        }
    }
}
