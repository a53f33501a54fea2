mod args;
mod commands;
mod record;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ratdyn::DynError;

use args::{Cli, Command, Output, ReplayArgs, Settings};
use commands::Outcome;
use record::RunRecord;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> ratdyn::Result<()> {
    if let Command::Replay(a) = &cli.command {
        return replay(a);
    }
    let (name, settings, out, outcome) = execute(&cli.command);
    let outcome = outcome?;
    emit(out, &outcome)?;
    if let Some(path) = &out.log {
        RunRecord::new(name, outcome.params, settings.0, outcome.outputs).append_to(path)?;
    }
    Ok(())
}

fn execute(cmd: &Command) -> (&'static str, Settings, &Output, ratdyn::Result<Outcome>) {
    match cmd {
        Command::FixedPoints(a) => ("fixed-points", a.settings(), &a.out, commands::fixed_points_cmd(a)),
        Command::Orbit(a) => ("orbit", a.settings(), &a.out, commands::orbit_cmd(a)),
        Command::Cycles(a) => ("cycles", a.settings(), &a.out, commands::cycles_cmd(a)),
        Command::Chaos(a) => ("chaos", a.settings(), &a.out, commands::chaos_cmd(a)),
        Command::ConjectureScan(a) => ("conjecture-scan", a.settings(), &a.out, commands::scan_cmd(a)),
        Command::VerifyCriteria(a) => ("verify-criteria", a.settings(), &a.out, commands::criteria_cmd(a)),
        Command::Render(a) => ("render", a.settings(), &a.out, commands::render_cmd(a)),
        Command::Replay(_) => unreachable!("replay is dispatched before execute"),
    }
}

fn replay(a: &ReplayArgs) -> ratdyn::Result<()> {
    let text = std::fs::read_to_string(&a.log)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let k = a.entry.unwrap_or(lines.len());
    let line = k
        .checked_sub(1)
        .and_then(|i| lines.get(i))
        .ok_or_else(|| DynError::InvalidSetting(format!("log has {} entries, asked for {k}", lines.len())))?;
    let rec: RunRecord = ratdyn::io::from_json(line)?;
    if rec.tool_version != env!("CARGO_PKG_VERSION") {
        return Err(DynError::InvalidSetting(format!(
            "entry written by version {}, this is {}",
            rec.tool_version,
            env!("CARGO_PKG_VERSION")
        )));
    }
    let argv = std::iter::once("ratdyn".to_string()).chain(rec.replay_argv());
    let cli = Cli::try_parse_from(argv).map_err(|e| DynError::Parse(e.to_string()))?;
    let (_, _, _, outcome) = execute(&cli.command);
    let outcome = outcome?;
    if outcome.outputs == rec.outputs {
        println!("entry {k} ({}) reproduced", rec.command);
        Ok(())
    } else {
        Err(DynError::InvalidSetting(format!("entry {k} ({}) did not reproduce", rec.command)))
    }
}

fn emit(out: &Output, outcome: &Outcome) -> ratdyn::Result<()> {
    let json = ratdyn::io::to_json(&outcome.outputs)?;
    match out.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => {
            println!("{json}");
            return Ok(());
        }
        Some(p) => std::fs::write(p, json + "\n")?,
        None => {}
    }
    std::io::stdout().lock().write_all(outcome.table.as_bytes())?;
    Ok(())
}
