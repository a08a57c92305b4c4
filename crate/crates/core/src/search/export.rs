use std::io::Write;

use serde::Serialize;

use super::{SweepRecord, Transition};
use crate::error::Result;
use crate::format::format_sig;
use crate::specfun::SpinQuantum;

/// CSV with columns `eta,best_value,A_1,…,A_⌊j⌋,restarts_hitting_best`.
pub fn write_sweep_csv<W: Write>(w: W, j: SpinQuantum, records: &[SweepRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["eta".to_string(), "best_value".to_string()];
    header.extend((1..=j.floor_j()).map(|t| format!("A_{t}")));
    header.push("restarts_hitting_best".into());
    out.write_record(&header)?;
    for r in records {
        let mut row = vec![format_sig(r.eta, 12), format_sig(r.best_value, 12)];
        row.extend(r.profile.measures().iter().map(|a| format_sig(*a, 12)));
        row.push(r.restarts_hitting_best.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    format: u32,
    j: String,
    two_j: u32,
    records: &'a [SweepRecord],
    transitions: &'a [Transition],
}

/// JSON document embedding the optimal states; carries `"format": 1`.
pub fn write_sweep_json<W: Write>(
    w: W,
    j: SpinQuantum,
    records: &[SweepRecord],
    transitions: &[Transition],
) -> Result<()> {
    let doc = SweepDocument {
        format: 1,
        j: j.to_string(),
        two_j: j.two_j(),
        records,
        transitions,
    };
    serde_json::to_writer_pretty(w, &doc)?;
    Ok(())
}
