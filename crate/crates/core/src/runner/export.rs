use std::io::{self, Write};

use super::{EacEntry, RunTrace};
use crate::Natural;

pub const TRACE_CSV_HEADER: &str = "run_id,cycle,node,value,carrier,lineage,oracle_flag";
pub const FINAL_CSV_HEADER: &str = "run_id,node,net_final,iso_final,eac_estimate";

/// One row per recorded cycle and node. Set `header` for the first run in a
/// file.
pub fn write_trace_csv<W: Write>(out: &mut W, run_id: &str, trace: &RunTrace, header: bool) -> io::Result<()> {
    if header {
        writeln!(out, "{TRACE_CSV_HEADER}")?;
    }
    for k in 0..trace.steps() {
        let cycle = trace.cycle_of_step(k);
        for label in 1..=trace.population_size() {
            writeln!(
                out,
                "{run_id},{cycle},{label},{},{},{},{}",
                trace.value(k, label),
                trace.carrier(k, label),
                trace.lineage(k, label),
                u8::from(trace.oracle_triggered(label))
            )?;
        }
    }
    Ok(())
}

/// Final outputs next to the isolated ones. A fallback estimate is marked
/// with a trailing `*`.
pub fn write_final_csv<W: Write>(
    out: &mut W,
    run_id: &str,
    trace: &RunTrace,
    iso: &[Natural],
    eac: &[EacEntry],
    header: bool,
) -> io::Result<()> {
    if header {
        writeln!(out, "{FINAL_CSV_HEADER}")?;
    }
    for label in 1..=trace.population_size() {
        let e = eac[label - 1];
        writeln!(
            out,
            "{run_id},{label},{},{},{}{}",
            trace.final_output(label),
            iso[label - 1],
            e.eac,
            if e.fallback { "*" } else { "" }
        )?;
    }
    Ok(())
}
