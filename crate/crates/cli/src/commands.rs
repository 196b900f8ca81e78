use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use regcount::fuzz::{check_bound, check_exact, Violation};
use regcount::generator::{corpus_instance, random_among_instance, random_instance, GenConfig};
use regcount::instance::{automaton_to_json, describe_removal, parse_automaton};
use regcount::oracle::{enumerate, enumerate_native};
use regcount::propagators::propagate;
use regcount::search::{bench, solve, Branching};
use regcount::signature::propagate_channeled;
use regcount::sweep::{format_rows, Extremum, HalfTable};
use regcount::{
    catalog, CatalogEntry, CounterDfa, DomainStore, Error, Instance, Mode, Removal, Result,
    Status, SymbolDomain,
};

use crate::args::{Command, ExtremumArg, FormatArg, FuzzMode, InstanceArgs, RowsArg};

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Propagate { input, mode } => cmd_propagate(&input, mode.map(Into::into)),
        Command::Oracle { input, mode, cap } => cmd_oracle(&input, mode.map(Into::into), cap),
        Command::DumpSweep { input, mode, rows } => cmd_dump_sweep(&input, mode, rows),
        Command::Fuzz {
            seed,
            count,
            mode,
            cap,
            max_len,
            max_states,
            out,
            threads,
        } => {
            let cfg = GenConfig {
                seed,
                max_states,
                length: 1..=max_len.max(1),
                ..GenConfig::default()
            };
            with_threads(threads, || cmd_fuzz(&cfg, count, mode, cap, out.as_deref()))
        }
        Command::Solve {
            input,
            mode,
            print_solutions,
        } => cmd_solve(&input, mode.map(Into::into), print_solutions),
        Command::Bench {
            paths,
            catalog,
            count,
            seed,
            max_len,
            modes,
            format,
            threads,
        } => {
            let modes: Vec<Mode> = modes.into_iter().map(Into::into).collect();
            let cfg = GenConfig {
                seed,
                length: 1..=max_len.max(1),
                ..GenConfig::default()
            };
            with_threads(threads, || cmd_bench(&paths, &catalog, count, &cfg, &modes, format))
        }
        Command::Validate { path } => cmd_validate(&path),
        Command::Catalog { name, list } => cmd_catalog(name.as_deref(), list),
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInstance(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn read_source(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(src)?)
    }
}

fn load_automaton(src: &str) -> Result<CounterDfa> {
    match src.strip_prefix("catalog:") {
        Some(name) => catalog(name),
        None => parse_automaton(&read_source(src)?),
    }
}

fn parse_counter(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| Error::InvalidInstance(format!("bad counter value `{s}`")))
        })
        .collect()
}

fn load_instance(input: &InstanceArgs) -> Result<Instance> {
    if let Some(path) = &input.instance {
        return if path.as_os_str() == "-" {
            Instance::from_json(&read_source("-")?, None)
        } else {
            Instance::load(path)
        };
    }
    let (Some(automaton), Some(vars), Some(counter)) = (&input.automaton, &input.vars, &input.counter)
    else {
        return Err(Error::InvalidInstance(
            "give an instance file, or --automaton with --vars and --counter".into(),
        ));
    };
    let dfa = load_automaton(automaton)?;
    let domains = vars
        .split(';')
        .enumerate()
        .map(|(i, names)| {
            let names: Vec<&str> = names.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let symbols = dfa.parse_word(&names)?;
            let d = SymbolDomain::from_symbols(dfa.alphabet_size(), symbols);
            if d.is_empty() {
                return Err(Error::InvalidInstance(format!("empty domain for x{}", i + 1)));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    let counter = parse_counter(counter)?;
    if counter.is_empty() {
        return Err(Error::InvalidInstance("empty counter domain".into()));
    }
    Ok(Instance::new(dfa, DomainStore::new(domains, counter), Mode::Exact))
}

fn domain_names(dfa: &CounterDfa, d: &SymbolDomain) -> String {
    let names: Vec<&str> = d.iter().map(|s| dfa.symbol_name(s)).collect();
    format!("{{{}}}", names.join(","))
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Fixpoint => "fixpoint",
        Status::Failed => "failed",
    }
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = values.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn cmd_propagate(input: &InstanceArgs, mode: Option<Mode>) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let mode = mode.unwrap_or(inst.mode);
    if let Some(signed) = &inst.signed {
        let mut natives = signed.natives.clone();
        let mut counter = inst.store.counter().clone();
        let out = propagate_channeled(&inst.dfa, &signed.map, &mut natives, &mut counter, mode)?;
        println!("mode: {mode}");
        println!("status: {}", status_name(out.status));
        for (i, v) in &out.native_removals {
            println!("x{} != {v}", i + 1);
        }
        for v in &out.counter_removals {
            println!("N != {v}");
        }
        println!("passes: {}", out.rounds);
        return Ok(if out.status == Status::Failed { ExitCode::from(1) } else { ExitCode::SUCCESS });
    }
    let mut store = inst.store.snapshot();
    let out = propagate(&inst.dfa, &mut store, mode)?;
    println!("mode: {mode}");
    println!("status: {}", status_name(out.status));
    for r in &out.removals {
        println!("{}", describe_removal(&inst.dfa, r));
    }
    println!("passes: {}", out.passes);
    Ok(if out.failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_oracle(input: &InstanceArgs, mode: Option<Mode>, cap: u64) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let mode = mode.unwrap_or(inst.mode);
    if let Some(signed) = &inst.signed {
        let counter = inst.store.counter();
        let report = enumerate_native(&inst.dfa, &signed.map, &signed.natives, counter, mode.semantics(), cap)?;
        let sat = report.solutions > 0;
        println!("mode: {mode}");
        println!("status: {}", if sat { "satisfiable" } else { "unsatisfiable" });
        for (i, d) in signed.natives.iter().enumerate() {
            for v in d.difference(&report.positions[i]) {
                println!("x{} != {v}", i + 1);
            }
        }
        for v in counter.difference(&report.counter) {
            println!("N != {v}");
        }
        for (i, d) in report.positions.iter().enumerate() {
            println!("supported: x{} = {}", i + 1, join(d));
        }
        println!("supported: N = {}", join(&report.counter));
        println!("solutions: {}", report.solutions);
        return Ok(if sat { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let report = enumerate(&inst.dfa, &inst.store, mode.semantics(), cap)?;
    println!("mode: {mode}");
    println!(
        "status: {}",
        if report.satisfiable { "satisfiable" } else { "unsatisfiable" }
    );
    for (i, d) in inst.store.vars().iter().enumerate() {
        for s in d.iter().filter(|s| !report.positions[i].contains(s)) {
            let r = Removal::Symbol { position: i, symbol: s };
            println!("{}", describe_removal(&inst.dfa, &r));
        }
    }
    for v in inst.store.counter().iter().filter(|v| !report.counter.contains(v)) {
        println!("{}", describe_removal(&inst.dfa, &Removal::Counter(*v)));
    }
    for (i, supported) in report.positions.iter().enumerate() {
        let d = SymbolDomain::from_symbols(inst.dfa.alphabet_size(), supported.iter().copied());
        println!("supported: x{} = {}", i + 1, domain_names(&inst.dfa, &d));
    }
    println!("supported: N = {}", join(&report.counter));
    println!("solutions: {}", report.solutions);
    Ok(if report.satisfiable { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_dump_sweep(input: &InstanceArgs, mode: ExtremumArg, rows: RowsArg) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let ext = match mode {
        ExtremumArg::Min => Extremum::Min,
        ExtremumArg::Max => Extremum::Max,
    };
    let half = HalfTable::compute(&inst.dfa, &inst.store, ext)?;
    if matches!(rows, RowsArg::Pre | RowsArg::Both) {
        print!("{}", format_rows(&inst.dfa, half.pre_rows(), 0));
    }
    if rows == RowsArg::Both {
        println!("--");
    }
    if matches!(rows, RowsArg::Suf | RowsArg::Both) {
        print!("{}", format_rows(&inst.dfa, half.suf_rows(), 1));
    }
    Ok(ExitCode::SUCCESS)
}

fn fuzz_one(
    cfg: &GenConfig,
    index: u64,
    mode: FuzzMode,
    cap: u64,
) -> Result<(Instance, Vec<Violation<u64>>)> {
    let inst_mode = match mode {
        FuzzMode::Atmost => Mode::AtMost,
        FuzzMode::Atleast => Mode::AtLeast,
        FuzzMode::Exact | FuzzMode::All => Mode::Exact,
    };
    let inst: Instance = corpus_instance(cfg, index, inst_mode)?;
    let mut violations = Vec::new();
    if matches!(mode, FuzzMode::Atmost | FuzzMode::All) {
        violations.extend(check_bound(&inst, Mode::AtMost, cap)?);
    }
    if matches!(mode, FuzzMode::Atleast | FuzzMode::All) {
        violations.extend(check_bound(&inst, Mode::AtLeast, cap)?);
    }
    if matches!(mode, FuzzMode::Exact | FuzzMode::All) {
        violations.extend(check_exact(&inst, cap)?);
    }
    Ok((inst, violations))
}

fn cmd_fuzz(cfg: &GenConfig, count: u64, mode: FuzzMode, cap: u64, out: Option<&Path>) -> Result<ExitCode> {
    let results = (0..count)
        .into_par_iter()
        .map(|k| fuzz_one(cfg, k, mode, cap).map(|(inst, v)| (k, inst, v)))
        .collect::<Result<Vec<_>>>()?;
    let mut failing = 0u64;
    let mut total = 0usize;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    for (k, inst, violations) in &results {
        if violations.is_empty() {
            continue;
        }
        failing += 1;
        total += violations.len();
        for v in violations {
            println!("instance {k}: {v}");
        }
        if let Some(dir) = out {
            let path = dir.join(format!("violation-{}-{k}.json", cfg.seed));
            fs::write(path, inst.to_json()?)?;
        }
    }
    println!("instances: {count}");
    println!("failing instances: {failing}");
    println!("violations: {total}");
    Ok(if total == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_solve(input: &InstanceArgs, mode: Option<Mode>, print_solutions: bool) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let mode = mode.unwrap_or(inst.mode);
    let r = solve(&inst.dfa, &inst.store, mode, Branching::default(), print_solutions)?;
    println!("mode: {mode}");
    println!("nodes: {}", r.stats.nodes);
    println!("failures: {}", r.stats.failures);
    println!("prunings: {}", r.stats.prunings);
    println!("solutions: {}", r.stats.solutions);
    println!("seconds: {:.6}", r.stats.wall_time.as_secs_f64());
    for (word, n) in &r.solutions {
        let names: Vec<&str> = word.iter().map(|&s| inst.dfa.symbol_name(s)).collect();
        println!("solution: {} N={n}", names.join(" "));
    }
    Ok(if r.stats.solutions > 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        entries.sort();
        for e in entries {
            collect_files(&e, out)?;
        }
    } else if path.extension().is_some_and(|e| e == "json") {
        out.push(path.to_path_buf());
    }
    Ok(())
}

fn catalog_corpus(name: &str, count: u64, cfg: &GenConfig) -> Result<Vec<Instance>> {
    let entry: CatalogEntry = name.parse()?;
    let dfa: CounterDfa = regcount::catalog_entry(entry);
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = cfg.rng(k);
            let mut inst = match entry {
                CatalogEntry::Among => random_among_instance(cfg, &dfa, 6, Mode::Exact, &mut rng)?,
                _ => random_instance(cfg, dfa.clone(), Mode::Exact, &mut rng)?,
            };
            inst.family = Some(entry.name().to_string());
            Ok(inst)
        })
        .collect()
}

fn cmd_bench(
    paths: &[PathBuf],
    catalogs: &[String],
    count: u64,
    cfg: &GenConfig,
    modes: &[Mode],
    format: FormatArg,
) -> Result<ExitCode> {
    let mut corpus = Vec::new();
    let mut files = Vec::new();
    for p in paths {
        collect_files(p, &mut files)?;
    }
    for f in files {
        let mut inst = Instance::load(&f)?;
        if inst.family.is_none() {
            inst.family = f
                .parent()
                .and_then(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned());
        }
        corpus.push(inst);
    }
    for name in catalogs {
        corpus.extend(catalog_corpus(name, count, cfg)?);
    }
    let report = bench(&corpus, modes)?;
    match format {
        FormatArg::Table => print!("{}", report.to_table()),
        FormatArg::Tsv => print!("{}", report.to_tsv()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(path: &Path) -> Result<ExitCode> {
    let text = read_source(&path.to_string_lossy())?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("vars").is_some() {
        let inst = Instance::from_json(&text, path.parent())?;
        inst.dfa.validate()?;
        println!(
            "ok: instance with {} variables over a {}-state, {}-symbol automaton",
            inst.store.len(),
            inst.dfa.num_states(),
            inst.dfa.alphabet_size()
        );
    } else {
        let dfa: CounterDfa = parse_automaton(&text)?;
        dfa.validate()?;
        println!(
            "ok: automaton with {} states and {} symbols",
            dfa.num_states(),
            dfa.alphabet_size()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(name: Option<&str>, list: bool) -> Result<ExitCode> {
    if list || name.is_none() {
        for e in CatalogEntry::ALL {
            println!("{e}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let dfa: CounterDfa = catalog(name.unwrap_or_default())?;
    println!("{}", automaton_to_json(&dfa)?);
    Ok(ExitCode::SUCCESS)
}
