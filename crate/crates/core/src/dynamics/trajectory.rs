//! Event-log dump and replay.
//!
//! Layout:
//! ```text
//! # mixlab-v1
//! # model=ssep N=8 k=3 p=0.5
//! # init=11100000
//! time,site,mark
//! 0.0123,4,0.771
//! ```

use std::io::{BufRead, Write};

use super::{AnyState, ChainState, UpdateEvent};
use crate::error::{Error, Result};
use crate::states::{ChainSpec, Model};

/// A parsed trajectory dump.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryDump {
    pub spec: ChainSpec,
    pub init: AnyState,
    pub events: Vec<UpdateEvent>,
}

pub fn write_trajectory<W: Write>(
    out: &mut W,
    spec: &ChainSpec,
    init: &AnyState,
    events: &[UpdateEvent],
) -> std::io::Result<()> {
    writeln!(out, "# mixlab-v1")?;
    write!(out, "# model={} N={}", spec.model(), spec.n())?;
    if let Some(k) = spec.k() {
        write!(out, " k={k}")?;
    }
    writeln!(out, " p={}", spec.p())?;
    writeln!(out, "# init={init}")?;
    writeln!(out, "time,site,mark")?;
    for e in events {
        // Shortest round-trip float formatting keeps replay exact.
        writeln!(out, "{},{},{}", e.time, e.site, e.mark)?;
    }
    Ok(())
}

fn parse_header(line: &str) -> Result<ChainSpec> {
    let mut model = None;
    let mut n = None;
    let mut k = None;
    let mut p = None;
    for tok in line.trim_start_matches('#').split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token `{tok}`")))?;
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("header `{key}`: {e}"));
        match key {
            "model" => model = Some(value.parse::<Model>()?),
            "N" => n = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "k" => k = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "p" => p = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
        }
    }
    let missing = |what: &str| Error::Parse(format!("header lacks `{what}`"));
    ChainSpec::new(
        model.ok_or_else(|| missing("model"))?,
        n.ok_or_else(|| missing("N"))?,
        k,
        p.ok_or_else(|| missing("p"))?,
    )
}

pub fn read_trajectory<R: BufRead>(input: R) -> Result<TrajectoryDump> {
    let mut lines = input.lines().enumerate();
    let mut next_line = |what: &str| -> Result<String> {
        match lines.next() {
            Some((_, Ok(l))) => Ok(l),
            Some((i, Err(e))) => Err(Error::Parse(format!("line {}: {e}", i + 1))),
            None => Err(Error::Parse(format!("missing {what}"))),
        }
    };
    if next_line("version line")?.trim() != "# mixlab-v1" {
        return Err(Error::Parse("expected `# mixlab-v1` version line".into()));
    }
    let spec = parse_header(&next_line("model header")?)?;
    let init_line = next_line("initial state")?;
    let init_text = init_line
        .strip_prefix("# init=")
        .ok_or_else(|| Error::Parse("expected `# init=` line".into()))?;
    let init = AnyState::parse(&spec, init_text)?;
    if next_line("column header")?.trim() != "time,site,mark" {
        return Err(Error::Parse("expected `time,site,mark` header".into()));
    }
    let mut events = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: malformed event `{line}`", i + 1));
        let mut cols = line.split(',');
        let time = cols.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let site = cols.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let mark = cols.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        if cols.next().is_some() {
            return Err(bad());
        }
        events.push(UpdateEvent { time, site, mark });
    }
    Ok(TrajectoryDump { spec, init, events })
}

/// Applies a recorded event log to its initial state.
pub fn replay(spec: &ChainSpec, init: &AnyState, events: &[UpdateEvent]) -> Result<AnyState> {
    init.check_for(spec)?;
    if let Some(e) = events.iter().find(|e| e.site == 0 || e.site >= spec.n()) {
        return Err(crate::error::out_of_range("site", format!("{} in event log", e.site)));
    }
    let p = spec.p();
    let mut state = init.clone();
    fn run<S: ChainState>(s: &mut S, events: &[UpdateEvent], p: f64) {
        for e in events {
            s.apply(e.site, e.mark, p);
        }
    }
    match &mut state {
        AnyState::Permutation(s) => run(s, events, p),
        AnyState::Exclusion(s) => run(s, events, p),
        AnyState::Path(s) => run(s, events, p),
        AnyState::Simplex(s) => run(s, events, p),
    }
    Ok(state)
}
