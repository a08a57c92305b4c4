use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rotosensor::fidelity::{angular_table, average_fidelity, compare_routes, DickeSystem};
use rotosensor::format::format_sig;
use rotosensor::input::{parse_amplitudes, parse_angle, parse_profile};
use rotosensor::search::{
    critical_angle, detect_transitions, first_zero_phi1, maximize_fidelity, minimize_fidelity, negativity_window,
    sweep, write_sweep_csv, write_sweep_json, SearchConfig, SweepRecord,
};
use rotosensor::spin_state::{catalog_ids, named_state, named_state_with_chi, profile};
use rotosensor::verify::{run_check, Check};
use rotosensor::{Error, SpinQuantum, SpinState};
use serde_json::json;

use crate::args::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Library(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Library(Error::Serialization(e.to_string()))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Library(Error::Io(e.to_string()))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(
                Error::Unnormalizable { .. }
                | Error::NonUnitAxis { .. }
                | Error::InconsistentAngularMomenta(_)
                | Error::SingularSystem { .. }
                | Error::UndersizedGrid { .. },
            ) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = Result<i32, CliError>;

fn sig(x: f64) -> String {
    format_sig(x, 6)
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig(x)).collect::<Vec<_>>().join(", ")
}

fn sink(out: &OutputArgs) -> io::Result<Box<dyn Write>> {
    Ok(match &out.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Catalog id, then JSON file, then inline amplitude list.
pub fn load_state(a: &StateArgs) -> Result<SpinState, CliError> {
    if catalog_ids().contains(&a.state.as_str()) {
        return Ok(match a.chi {
            Some(chi) => named_state_with_chi(&a.state, a.j, chi)?,
            None => named_state(&a.state, a.j)?,
        });
    }
    let path = Path::new(&a.state);
    if path.is_file() {
        let state = SpinState::from_json(&std::fs::read_to_string(path)?)?;
        if state.spin() != a.j {
            return Err(Error::DimensionMismatch {
                spin: a.j.to_string(),
                expected: a.j.dim(),
                got: state.amps().len(),
            }
            .into());
        }
        return Ok(state);
    }
    if !a.state.contains(',') {
        return Err(Error::UnknownCatalogState(a.state.clone()).into());
    }
    Ok(SpinState::new(a.j, parse_amplitudes(&a.state)?)?)
}

fn angles(a: &AngleArgs) -> Vec<f64> {
    match (a.eta, a.grid) {
        (Some(eta), _) => vec![eta],
        (None, Some(g)) => g.points(),
        (None, None) => unreachable!("clap requires --eta or --grid"),
    }
}

pub fn measures(a: &MeasuresArgs) -> CmdResult {
    let state = load_state(&a.state)?;
    let p = profile(&state);
    let mut w = sink(&a.output)?;
    match a.output.format.unwrap_or(Format::Plain) {
        Format::Plain => {
            writeln!(w, "j = {}", state.spin())?;
            if p.measures().is_empty() {
                writeln!(w, "A: (none)")?;
                writeln!(w, "note: j = {} has no anticoherence measures (floor(j) = 0)", state.spin())?;
            } else {
                writeln!(w, "A: {}", list(p.measures()))?;
            }
            writeln!(w, "purities: {}", list(p.purities()))?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["t", "purity", "measure"])?;
            for (t, &purity) in p.purities().iter().enumerate() {
                let m = p.measure(t).map(|m| format_sig(m, 12)).unwrap_or_default();
                c.write_record([t.to_string(), format_sig(purity, 12), m])?;
            }
            c.flush()?;
        }
        Format::Json => write_json(&mut w, &p)?,
    }
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn phi(a: &PhiArgs) -> CmdResult {
    let j = a.j;
    if let Some(t) = a.t {
        if t > j.floor_j() {
            return Err(Error::OutOfRange { name: "t", value: t as i64, lo: 0, hi: j.floor_j() as i64 }.into());
        }
    }
    let etas = angles(&a.angle);
    let rows: Vec<Vec<f64>> = match a.route {
        PhiRoute::Closed => {
            let table = angular_table(j);
            etas.iter().map(|&eta| table.phi_all(eta)).collect()
        }
        PhiRoute::Dicke => {
            let sys = DickeSystem::new(j)?;
            etas.iter().map(|&eta| sys.phi(eta)).collect()
        }
    };
    let orders: Vec<usize> = match a.t {
        Some(t) => vec![t],
        None => (0..=j.floor_j()).collect(),
    };
    let default = if a.angle.grid.is_some() { Format::Csv } else { Format::Plain };
    let mut w = sink(&a.output)?;
    match a.output.format.unwrap_or(default) {
        Format::Plain => {
            for (eta, row) in etas.iter().zip(&rows) {
                let vals: Vec<String> = orders.iter().map(|&t| sig(row[t])).collect();
                if etas.len() == 1 && orders.len() == 1 {
                    writeln!(w, "{}", vals[0])?;
                } else {
                    writeln!(w, "{} {}", sig(*eta), vals.join(" "))?;
                }
            }
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            let mut header = vec!["eta".to_string()];
            header.extend(orders.iter().map(|t| format!("phi_{t}")));
            c.write_record(&header)?;
            for (eta, row) in etas.iter().zip(&rows) {
                let mut rec = vec![format_sig(*eta, 12)];
                rec.extend(orders.iter().map(|&t| format_sig(row[t], 12)));
                c.write_record(&rec)?;
            }
            c.flush()?;
        }
        Format::Json => {
            let points: Vec<_> = etas
                .iter()
                .zip(&rows)
                .map(|(eta, row)| json!({ "eta": eta, "phi": orders.iter().map(|&t| row[t]).collect::<Vec<_>>() }))
                .collect();
            write_json(&mut w, &json!({ "j": j.to_string(), "orders": orders, "points": points }))?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn fidelity(a: &FidelityArgs) -> CmdResult {
    let state = load_state(&a.state)?;
    let etas = angles(&a.angle);
    let default = if a.angle.grid.is_some() { Format::Csv } else { Format::Plain };
    let format = a.output.format.unwrap_or(default);
    let mut w = sink(&a.output)?;
    if a.route == FidelityRoute::Closed {
        let values: Vec<f64> = etas.iter().map(|&eta| average_fidelity(&state, eta)).collect();
        match format {
            Format::Plain if etas.len() == 1 => writeln!(w, "{}", sig(values[0]))?,
            Format::Plain => {
                for (eta, v) in etas.iter().zip(&values) {
                    writeln!(w, "{} {}", sig(*eta), sig(*v))?;
                }
            }
            Format::Csv => {
                let mut c = csv::Writer::from_writer(&mut w);
                c.write_record(["eta", "fidelity"])?;
                for (eta, v) in etas.iter().zip(&values) {
                    c.write_record([format_sig(*eta, 12), format_sig(*v, 12)])?;
                }
                c.flush()?;
            }
            Format::Json => {
                let points: Vec<_> = etas.iter().zip(&values).map(|(e, v)| json!({ "eta": e, "fidelity": v })).collect();
                write_json(&mut w, &points)?;
            }
        }
        w.flush()?;
        return Ok(EXIT_OK);
    }
    let rows = compare_routes(&state, &etas)?;
    let both = a.route == FidelityRoute::Both;
    match format {
        Format::Plain => {
            for r in &rows {
                let prefix = if etas.len() == 1 { String::new() } else { format!("{} ", sig(r.eta)) };
                if both {
                    writeln!(
                        w,
                        "{prefix}closed-form {} quadrature {} difference {}",
                        sig(r.closed_form),
                        sig(r.quadrature),
                        format_sig(r.difference, 3)
                    )?;
                } else {
                    writeln!(w, "{prefix}{}", sig(r.quadrature))?;
                }
            }
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            if both {
                c.write_record(["eta", "closed_form", "quadrature", "difference"])?;
            } else {
                c.write_record(["eta", "fidelity"])?;
            }
            for r in &rows {
                let mut rec = vec![format_sig(r.eta, 12)];
                if both {
                    rec.push(format_sig(r.closed_form, 12));
                }
                rec.push(format_sig(r.quadrature, 12));
                if both {
                    rec.push(format_sig(r.difference, 12));
                }
                c.write_record(&rec)?;
            }
            c.flush()?;
        }
        Format::Json => {
            if both {
                write_json(&mut w, &rows)?;
            } else {
                let points: Vec<_> = rows.iter().map(|r| json!({ "eta": r.eta, "fidelity": r.quadrature })).collect();
                write_json(&mut w, &points)?;
            }
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn search_config(s: &SearchArgs, warm_start: bool) -> SearchConfig {
    SearchConfig {
        restarts: s.restarts,
        max_iters: s.max_iters,
        tolerance: s.tol,
        simplex_scale: s.simplex_scale,
        seed: s.seed,
        warm_start,
    }
}

fn write_record_plain(w: &mut dyn Write, r: &SweepRecord, restarts: usize) -> io::Result<()> {
    writeln!(w, "j = {}, eta = {}", r.best_state.spin(), sig(r.eta))?;
    writeln!(w, "best value: {}", sig(r.best_value))?;
    writeln!(w, "A: {}", list(r.profile.measures()))?;
    writeln!(w, "restarts hitting best: {}/{}", r.restarts_hitting_best, restarts)?;
    writeln!(w, "converged: {}", r.converged)?;
    let amps: Vec<String> = r
        .best_state
        .amps()
        .iter()
        .map(|c| {
            let im = sig(c.im);
            let sign = if im.starts_with('-') { "" } else { "+" };
            format!("{}{sign}{im}i", sig(c.re))
        })
        .collect();
    writeln!(w, "state (descending m): {}", amps.join(", "))
}

pub fn optimize(a: &OptimizeArgs) -> CmdResult {
    let cfg = search_config(&a.search, false);
    let rec = if a.maximize {
        maximize_fidelity(a.j, a.eta, &cfg)?
    } else {
        minimize_fidelity(a.j, a.eta, &cfg)?
    };
    let mut w = sink(&a.output)?;
    match a.output.format.unwrap_or(Format::Plain) {
        Format::Plain => write_record_plain(&mut w, &rec, cfg.restarts)?,
        Format::Csv => write_sweep_csv(&mut w, a.j, std::slice::from_ref(&rec))?,
        Format::Json => write_json(&mut w, &rec)?,
    }
    w.flush()?;
    if !rec.is_self_consistent() {
        eprintln!("error: optimized record is not self-consistent");
        return Ok(EXIT_INCONSISTENT);
    }
    Ok(EXIT_OK)
}

pub fn sweep_cmd(a: &SweepArgs) -> CmdResult {
    let cfg = search_config(&a.search, a.warm_start);
    let grid = a.grid.points();
    let records = sweep(a.j, &grid, &cfg)?;
    let transitions = detect_transitions(&angular_table(a.j), &records);
    let mut w = sink(&a.output)?;
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => write_sweep_csv(&mut w, a.j, &records)?,
        Format::Json => {
            write_sweep_json(&mut w, a.j, &records, &transitions)?;
            writeln!(w)?;
        }
        Format::Plain => {
            for r in &records {
                writeln!(w, "{} {} A: {} hits: {}", sig(r.eta), sig(r.best_value), list(r.profile.measures()), r.restarts_hitting_best)?;
            }
        }
    }
    w.flush()?;
    let solved: Vec<String> = transitions
        .iter()
        .map(|t| match &t.critical {
            Some(c) => sig(c.eta_star),
            None => format!("unresolved in [{}, {}]", sig(records[t.lo_index].eta), sig(records[t.hi_index].eta)),
        })
        .collect();
    eprintln!("transitions: {}; critical angles: {}", transitions.len(), if solved.is_empty() { "none".into() } else { solved.join(", ") });
    if let Some(bad) = records.iter().find(|r| !r.is_self_consistent()) {
        eprintln!("error: record at eta = {} is not self-consistent", sig(bad.eta));
        return Ok(EXIT_INCONSISTENT);
    }
    Ok(EXIT_OK)
}

fn parse_bracket(s: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidGrid(format!("bracket must be lo:hi, got {s:?}")))?;
    Ok((parse_angle(lo)?, parse_angle(hi)?))
}

pub fn critical(a: &CriticalArgs) -> CmdResult {
    let table = angular_table(a.j);
    let mut w = sink(&a.output)?;
    let format = a.output.format.unwrap_or(Format::Plain);
    match (&a.profile1, &a.profile2, &a.bracket) {
        (Some(p1), Some(p2), Some(b)) => {
            let c = critical_angle(&table, &parse_profile(a.j, p1)?, &parse_profile(a.j, p2)?, parse_bracket(b)?)?;
            match format {
                Format::Json => write_json(&mut w, &c)?,
                Format::Csv => {
                    let mut out = csv::Writer::from_writer(&mut w);
                    out.write_record(["eta_star", "residual", "bracket_lo", "bracket_hi"])?;
                    out.write_record([c.eta_star, c.residual, c.bracket.0, c.bracket.1].map(|x| format_sig(x, 12)))?;
                    out.flush()?;
                }
                Format::Plain => {
                    writeln!(w, "eta* = {}", format_sig(c.eta_star, 12))?;
                    writeln!(w, "residual = {}", format_sig(c.residual, 3))?;
                }
            }
        }
        _ => {
            let eta0 = first_zero_phi1(&table)?;
            let window = negativity_window(&table)?;
            match format {
                Format::Json => write_json(&mut w, &json!({ "j": a.j.to_string(), "eta0": eta0, "negativity_window": window }))?,
                Format::Csv => {
                    let mut out = csv::Writer::from_writer(&mut w);
                    out.write_record(["j", "eta0", "negativity_window"])?;
                    out.write_record([a.j.to_string(), format_sig(eta0, 12), window.to_string()])?;
                    out.flush()?;
                }
                Format::Plain => {
                    writeln!(w, "eta0 = {}", format_sig(eta0, 12))?;
                    writeln!(w, "negativity window: {}", if window { "holds" } else { "violated" })?;
                }
            }
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let checks = a.checks.split(',').map(str::parse::<Check>).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for c in checks {
        let max = a.max_j.map(SpinQuantum::two_j).unwrap_or_else(|| c.default_max_two_j());
        rows.extend(run_check(c, max, a.seed)?);
    }
    let mut w = sink(&a.output)?;
    match a.output.format.unwrap_or(Format::Plain) {
        Format::Json => write_json(&mut w, &rows)?,
        Format::Csv => {
            let mut out = csv::Writer::from_writer(&mut w);
            out.write_record(["check", "j", "points", "worst_error", "tolerance", "passed"])?;
            for r in &rows {
                out.write_record([
                    r.check.to_string(),
                    r.j.to_string(),
                    r.points.to_string(),
                    format_sig(r.worst_error, 12),
                    format_sig(r.tolerance, 12),
                    r.passed.to_string(),
                ])?;
            }
            out.flush()?;
        }
        Format::Plain => {
            writeln!(w, "{:<11} {:>5} {:>7} {:>12} {:>10}  result", "check", "j", "points", "worst", "tolerance")?;
            for r in &rows {
                writeln!(
                    w,
                    "{:<11} {:>5} {:>7} {:>12} {:>10}  {}",
                    r.check.to_string(),
                    r.j.to_string(),
                    r.points,
                    format_sig(r.worst_error, 3),
                    format_sig(r.tolerance, 3),
                    if r.passed { "pass" } else { "FAIL" }
                )?;
            }
        }
    }
    w.flush()?;
    let failures: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
    for r in &failures {
        let eta = r.worst_eta.map(sig).unwrap_or_else(|| "-".into());
        eprintln!("failed: (j = {}, eta = {}, route = {}) in check {}", r.j, eta, r.route, r.check);
    }
    eprintln!("{} of {} checks passed", rows.len() - failures.len(), rows.len());
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_VERIFY })
}
