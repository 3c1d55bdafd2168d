use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use cyclone_core::decision::Preset;
use cyclone_core::engine::{replay, GameLog, RulesConfig, StrikeOut};
use cyclone_core::harness::{
    a_moves_first, crossplay_matrix, evaluate_humanness, game_seed, simulate_games, DecisionDb,
};
use cyclone_core::trainer::{
    resume_training, train_to_saturation, AuditEvent, Humanness, Objective, Paired, Schedule, SeedBlock, SelfPlay,
    TrainConfig, TrainerError,
};
use cyclone_core::Weights;
use serde_json::{json, Value};

use crate::{
    Cli, CliError, Command, GenDbArgs, HumannessArgs, ObjectiveKind, ReplayArgs, ServeArgs, SimArgs, TrainArgs,
};

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Policy {
    label: String,
    weights: Weights,
}

/// A preset name, or the path of a weight file.
fn policy(arg: &str) -> Result<Policy> {
    if let Ok(p) = arg.parse::<Preset>() {
        return Ok(Policy { label: p.name().to_string(), weights: p.weights() });
    }
    let path = Path::new(arg);
    if !path.is_file() {
        return Err(usage(format!("`{arg}` is neither a preset ({}) nor a weight file", preset_names())));
    }
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {arg}: {e}")))?;
    let weights = Weights::from_toml(&text).map_err(|e| usage(format!("{arg}: {e}")))?;
    let label = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Policy { label, weights })
}

fn preset_names() -> String {
    Preset::ALL.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}

fn existing_file(path: &Path, what: &str) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("{what} {} does not exist", path.display())))
    }
}

struct Out {
    dir: PathBuf,
}

impl Out {
    fn new(dir: &Path) -> Result<Out> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Out { dir: dir.to_path_buf() })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    fn json(&self, name: &str, v: &impl serde::Serialize) -> Result<PathBuf> {
        self.write(name, &(serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"))
    }
}

/// Prints the resolved configuration and stores it (minus machine-specific
/// fields) next to the results.
fn echo(out: &Out, cli: &Cli, config: Value) -> Result<()> {
    let mut full = config.clone();
    full["out_dir"] = json!(out.dir.display().to_string());
    full["jobs"] = json!(cli.jobs.unwrap_or_else(rayon::current_num_threads));
    println!("config {}", serde_json::to_string(&full).expect("json"));
    out.json("config.json", &config)?;
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("configuring worker threads")?;
    }
    match &cli.command {
        Command::Sim(a) => sim(&cli, a),
        Command::Train(a) => train(&cli, a),
        Command::Humanness(a) => humanness(&cli, a),
        Command::GenDb(a) => gen_db(&cli, a),
        Command::Replay(a) => replay_log(a),
        Command::Serve(a) => serve(a),
    }
}

fn sim(cli: &Cli, args: &SimArgs) -> Result<()> {
    if args.games == 0 {
        return Err(usage("-n must be at least 1"));
    }
    let rules = RulesConfig {
        strike_out: if args.stacks_stand { StrikeOut::StacksStand } else { StrikeOut::Zero },
        ..RulesConfig::default()
    };
    if args.matrix {
        let policies = args.policies.iter().map(|s| policy(s)).collect::<Result<Vec<_>>>()?;
        if policies.len() < 2 {
            return Err(usage("--matrix needs at least two policies"));
        }
        let out = Out::new(&cli.out_dir)?;
        echo(
            &out,
            cli,
            json!({"command": "sim", "matrix": true, "policies": args.policies, "games_per_cell": args.games,
                   "seed": args.seed, "rules": rules.canonical()}),
        )?;
        let entries: Vec<_> = policies.iter().map(|p| (p.label.as_str(), &p.weights)).collect();
        let m = crossplay_matrix(&entries, args.games, args.seed, rules).context("cross-play matrix")?;
        out.write("matrix.json", &m.to_json())?;
        out.write("matrix.txt", &m.to_text())?;
        print!("{}", m.to_text());
        return Ok(());
    }
    let (a, b) = (policy(&args.a)?, policy(&args.b)?);
    let out = Out::new(&cli.out_dir)?;
    echo(
        &out,
        cli,
        json!({"command": "sim", "a": args.a, "b": args.b, "games": args.games, "seed": args.seed,
               "logs": args.logs, "rules": rules.canonical()}),
    )?;
    let result =
        simulate_games((&a.label, &a.weights), (&b.label, &b.weights), args.games, args.seed, rules, args.logs)
            .context("simulation")?;
    out.json("stats.json", &json!({"stats": result.stats, "scores": result.scores}))?;
    for log in &result.logs {
        out.write(&format!("logs/seed-{}.gamelog", log.seed), &log.to_text())?;
    }
    let s = &result.stats;
    println!(
        "sim a={} b={} n={} mean={:.4} sd={:.4} ci95={:.4} stats={}",
        s.a,
        s.b,
        s.n,
        s.mean,
        s.sd,
        s.ci95,
        out.path("stats.json").display()
    );
    Ok(())
}

fn train(cli: &Cli, args: &TrainArgs) -> Result<()> {
    let start = policy(&args.start)?;
    let objective: Box<dyn Objective> = match args.objective {
        ObjectiveKind::Selfplay => Box::new(SelfPlay { rules: RulesConfig::default() }),
        ObjectiveKind::Paired => {
            let p = policy(&args.partner)?;
            Box::new(Paired { partner: p.weights, partner_label: p.label, rules: RulesConfig::default() })
        }
        ObjectiveKind::Humanness => {
            let path = args.db.as_ref().ok_or_else(|| usage("--objective humanness requires --db"))?;
            existing_file(path, "decision db")?;
            let db = DecisionDb::read(path).with_context(|| format!("reading {}", path.display()))?;
            Box::new(Humanness::new(&db).context("preparing decision db")?)
        }
    };
    if args.games == 0 {
        return Err(usage("--games must be at least 1"));
    }
    let config = TrainConfig {
        seeds: SeedBlock { base: args.seed, games: args.games },
        refinements: args.refinements,
        max_rounds: args.max_rounds,
        max_experiments: args.max_experiments,
        ..TrainConfig::default()
    };
    config.validate().map_err(|e| usage(e.to_string()))?;
    let schedule = Schedule::round_robin(&start.weights).map_err(|e| usage(e.to_string()))?;
    let out = Out::new(&cli.out_dir)?;
    let audit_path = out.path("audit.jsonl");
    if args.resume {
        existing_file(&audit_path, "audit trail")?;
    } else if audit_path.exists() {
        return Err(usage(format!("{} exists; pass --resume or pick another --out-dir", audit_path.display())));
    }
    echo(
        &out,
        cli,
        json!({"command": "train", "objective": objective.id(), "start": args.start, "resume": args.resume,
               "train": config, "schedule": schedule}),
    )?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&audit_path)
        .with_context(|| format!("opening {}", audit_path.display()))?;
    let mut sink = |e: &AuditEvent| -> std::result::Result<(), TrainerError> {
        let line = serde_json::to_string(e).expect("audit events serialize");
        writeln!(file, "{line}")?;
        file.flush()?;
        if let AuditEvent::Experiment(r) = e {
            let c = &r.candidates[r.best];
            eprintln!(
                "experiment {} round {} params {:?} best {:.4} improved {}",
                r.index,
                r.round,
                r.params.map(|p| p.name()),
                c.score,
                r.improved
            );
        }
        Ok(())
    };
    let outcome = if args.resume {
        let text = fs::read_to_string(&audit_path).context("reading audit trail")?;
        resume_training(&text, objective.as_ref(), &mut sink)
    } else {
        train_to_saturation(&start.weights, &schedule, objective.as_ref(), &config, &mut sink)
    }
    .context("training")?;
    let weights_path = out.write("weights.toml", &outcome.weights.to_toml(Some("trained")))?;
    let final_score = objective.evaluate(&outcome.weights, config.seeds).context("scoring the result")?;
    println!(
        "train objective={} experiments={} rounds={} saturated={} capped={} value={:.4} weights={}",
        objective.id(),
        outcome.experiments,
        outcome.rounds,
        outcome.saturated,
        outcome.capped,
        final_score.value,
        weights_path.display()
    );
    Ok(())
}

fn humanness(cli: &Cli, args: &HumannessArgs) -> Result<()> {
    let p = policy(&args.weights)?;
    existing_file(&args.db, "decision db")?;
    let db = DecisionDb::read(&args.db).with_context(|| format!("reading {}", args.db.display()))?;
    let out = Out::new(&cli.out_dir)?;
    echo(&out, cli, json!({"command": "humanness", "weights": args.weights, "db": args.db}))?;
    let report = evaluate_humanness(&p.weights, &db).context("humanness")?;
    out.json("humanness.json", &report)?;
    println!(
        "humanness weights={} records={} matches={} fraction={:.4}",
        p.label, report.total, report.matches, report.fraction
    );
    Ok(())
}

fn gen_db(cli: &Cli, args: &GenDbArgs) -> Result<()> {
    let main = policy(&args.preset)?;
    let partner = args.partner.as_deref().map(policy).transpose()?;
    if args.games == 0 {
        return Err(usage("-n must be at least 1"));
    }
    let out = Out::new(&cli.out_dir)?;
    echo(
        &out,
        cli,
        json!({"command": "gen-db", "preset": args.preset, "partner": args.partner, "games": args.games,
               "seed": args.seed, "file": args.file}),
    )?;
    let (other, both) = match &partner {
        Some(p) => (p, false),
        None => (&main, true),
    };
    let rules = RulesConfig::default();
    let sim = simulate_games(
        (&main.label, &main.weights),
        (&other.label, &other.weights),
        args.games,
        args.seed,
        rules,
        true,
    )
    .context("simulation")?;
    let mut db = DecisionDb::new();
    let main_tag = format!("preset:{}", main.label);
    let other_tag = format!("partner:{}", other.label);
    for (i, log) in sim.logs.iter().enumerate() {
        let seat = if a_moves_first(i) { 0 } else { 1 };
        let mut tags = [other_tag.as_str(); 2];
        tags[seat] = &main_tag;
        let mut keep = [both; 2];
        keep[seat] = true;
        db.capture(&format!("seed-{}", game_seed(args.seed, i)), log, tags, keep).context("capturing decisions")?;
    }
    let path = out.write(&args.file, &db.to_jsonl())?;
    println!("gen-db games={} records={} db={}", args.games, db.len(), path.display());
    Ok(())
}

fn replay_log(args: &ReplayArgs) -> Result<()> {
    existing_file(&args.log, "game log")?;
    let text = fs::read_to_string(&args.log).with_context(|| format!("reading {}", args.log.display()))?;
    let log: GameLog = text.parse().context("parsing game log")?;
    let state = replay(&log).context("replaying")?;
    println!("replay turns={} score={}", log.actions.len(), state.final_score());
    Ok(())
}

fn serve(args: &ServeArgs) -> Result<()> {
    let config = cyclone_service::ServiceConfig {
        seed_base: args.seed,
        capture_dir: args.capture_dir.clone(),
        rules: RulesConfig::default(),
    };
    println!(
        "config {}",
        json!({"command": "serve", "addr": args.addr.to_string(), "seed": args.seed,
               "capture_dir": args.capture_dir})
    );
    let rt = tokio::runtime::Runtime::new().context("starting the runtime")?;
    rt.block_on(cyclone_service::serve(args.addr, config)).context("service")?;
    Ok(())
}
