use std::io::Write;

use serde::Serialize;

use crate::dynamics::LearningTrace;
use crate::error::Result;
use crate::multiplayer::MultiProfile;

#[derive(Serialize)]
struct Row {
    round: usize,
    player: usize,
    coord: usize,
    value: f64,
    error: Option<f64>,
}

/// Long-format CSV: `round,player,coord,value,error`, players numbered from 1.
/// The error column is empty when no reference profile was given.
pub fn write_trace_csv<W: Write>(trace: &LearningTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in trace.rows() {
        w.serialize(Row {
            round: r.round,
            player: r.player,
            coord: r.coord,
            value: r.value,
            error: r.error,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Same layout for multiplayer traces; `errors[t]` applies to round `t`.
pub fn write_multi_trace_csv<W: Write>(
    trace: &[MultiProfile],
    errors: Option<&[f64]>,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (t, p) in trace.iter().enumerate() {
        let error = errors.and_then(|e| e.get(t).copied());
        for (k, s) in p.strategies().iter().enumerate() {
            for (i, v) in s.iter().enumerate() {
                w.serialize(Row {
                    round: t,
                    player: k + 1,
                    coord: i,
                    value: *v,
                    error,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
