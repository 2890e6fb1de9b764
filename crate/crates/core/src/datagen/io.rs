//! File formats.
//!
//! * Game: `{"targets": n, "steps": m, "units": k, "payoffs": [{"lr", "lp", "fr", "fp"}, ...]}`
//! * Strategy: `{"support": [{"prob": p, "alloc": [[t_11, .., t_1m], .. k rows]}]}`, targets 1-based
//! * Network: `{"n", "m", "layers", "weights", "biases"}`
//! * Dataset: CSV with columns `c_s_t` (1-based step and target) followed by `label`
//!
//! Floats are written in shortest round-trip form, so save followed by load is
//! lossless.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, MixedStrategy, Payoffs, PureStrategy};
use crate::senn::{NetworkFile, SennNetwork, TrainingExample};

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(what, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, to_json(value).as_bytes())
}

#[derive(Serialize, Deserialize)]
struct GameFile {
    targets: usize,
    steps: usize,
    units: usize,
    payoffs: Vec<Payoffs>,
}

pub fn game_to_json(game: &Game) -> String {
    to_json(&GameFile {
        targets: game.num_targets(),
        steps: game.num_steps(),
        units: game.num_units(),
        payoffs: game.payoffs().to_vec(),
    })
}

pub fn game_from_json(text: &str) -> Result<Game> {
    let f: GameFile = from_json(text, "game file")?;
    if f.payoffs.len() != f.targets {
        return Err(Error::validation(
            "one payoff record per target",
            format!("{} targets but {} payoff records", f.targets, f.payoffs.len()),
        ));
    }
    Game::new(f.steps, f.units, f.payoffs)
}

pub fn save_game(path: &Path, game: &Game) -> Result<()> {
    write_file(path, game_to_json(game).as_bytes())
}

pub fn load_game(path: &Path) -> Result<Game> {
    game_from_json(&read_to_string(path)?).map_err(|e| e.context(path.display().to_string()))
}

#[derive(Serialize, Deserialize)]
struct StrategyEntry {
    prob: f64,
    alloc: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct StrategyFile {
    support: Vec<StrategyEntry>,
}

pub fn strategy_to_json(strategy: &MixedStrategy) -> String {
    let support = strategy
        .support()
        .iter()
        .map(|(pure, prob)| StrategyEntry {
            prob: *prob,
            alloc: pure.rows().map(|r| r.iter().map(|t| t + 1).collect()).collect(),
        })
        .collect();
    to_json(&StrategyFile { support })
}

/// Parses a strategy file. Targets are 1-based in the file.
pub fn strategy_from_json(text: &str) -> Result<MixedStrategy> {
    let f: StrategyFile = from_json(text, "strategy file")?;
    let mut entries = Vec::with_capacity(f.support.len());
    for (i, e) in f.support.into_iter().enumerate() {
        if e.alloc.iter().flatten().any(|&t| t == 0) {
            return Err(Error::validation(
                "targets are 1-based",
                format!("support entry {} allocates a unit to target 0", i + 1),
            ));
        }
        let rows: Vec<Vec<usize>> = e.alloc.iter().map(|r| r.iter().map(|t| t - 1).collect()).collect();
        entries.push((PureStrategy::from_rows(&rows)?, e.prob));
    }
    MixedStrategy::new(entries)
}

pub fn save_strategy(path: &Path, strategy: &MixedStrategy) -> Result<()> {
    write_file(path, strategy_to_json(strategy).as_bytes())
}

/// Loads a strategy and, when `game` is given, checks it against the game.
pub fn load_strategy(path: &Path, game: Option<&Game>) -> Result<MixedStrategy> {
    let s = strategy_from_json(&read_to_string(path)?).map_err(|e| e.context(path.display().to_string()))?;
    if let Some(g) = game {
        s.validate_for(g).map_err(|e| e.context(path.display().to_string()))?;
    }
    Ok(s)
}

pub fn network_to_json(net: &SennNetwork) -> String {
    to_json(&NetworkFile::from(net))
}

pub fn network_from_json(text: &str) -> Result<SennNetwork> {
    SennNetwork::try_from(from_json::<NetworkFile>(text, "network file")?)
}

pub fn save_network(path: &Path, net: &SennNetwork) -> Result<()> {
    write_file(path, network_to_json(net).as_bytes())
}

pub fn load_network(path: &Path) -> Result<SennNetwork> {
    network_from_json(&read_to_string(path)?).map_err(|e| e.context(path.display().to_string()))
}

/// A dataset together with the game shape it was encoded for.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub targets: usize,
    pub steps: usize,
    pub examples: Vec<TrainingExample>,
}

pub fn write_dataset<W: Write>(out: W, targets: usize, steps: usize, examples: &[TrainingExample]) -> Result<()> {
    let err = |e: csv::Error| Error::parse("dataset csv", e);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = Vec::with_capacity(targets * steps + 1);
    for s in 1..=steps {
        for t in 1..=targets {
            header.push(format!("c_{s}_{t}"));
        }
    }
    header.push("label".into());
    w.write_record(&header).map_err(err)?;
    for (i, ex) in examples.iter().enumerate() {
        if ex.input.len() != targets * steps {
            return Err(Error::DimensionMismatch(format!(
                "example {} has {} inputs, expected {}",
                i + 1,
                ex.input.len(),
                targets * steps
            )));
        }
        let row = ex.input.iter().chain(std::iter::once(&ex.label)).map(f64::to_string);
        w.write_record(row).map_err(err)?;
    }
    w.flush().map_err(|e| Error::parse("dataset csv", e))?;
    Ok(())
}

pub fn read_dataset<R: Read>(input: R) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(|e| Error::parse("dataset header", e))?.clone();
    let (targets, steps) = parse_header(&header)?;
    let width = targets * steps + 1;
    let mut examples = Vec::new();
    for (row, record) in r.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| Error::parse(format!("dataset line {line}"), e))?;
        if record.len() != width {
            return Err(Error::parse(
                format!("dataset line {line}"),
                format!("{} fields, expected {width}", record.len()),
            ));
        }
        let mut values = Vec::with_capacity(width);
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|e| {
                Error::parse(format!("dataset line {line}, column {}", &header[col]), format!("'{field}': {e}"))
            })?;
            values.push(v);
        }
        let label = values.pop().expect("width >= 2");
        if let Some(c) = values.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::validation("coverage in [0, 1]", format!("line {line} has input {c}")));
        }
        examples.push(TrainingExample { input: values, label });
    }
    Ok(Dataset {
        targets,
        steps,
        examples,
    })
}

/// Recovers `(targets, steps)` from `c_s_t` column names in step-major order.
fn parse_header(header: &csv::StringRecord) -> Result<(usize, usize)> {
    let bad = |detail: String| Error::parse("dataset header", detail);
    if header.len() < 2 || &header[header.len() - 1] != "label" {
        return Err(bad("expected coverage columns followed by 'label'".into()));
    }
    let mut cells = Vec::with_capacity(header.len() - 1);
    for name in header.iter().take(header.len() - 1) {
        let parsed = name
            .strip_prefix("c_")
            .and_then(|rest| rest.split_once('_'))
            .and_then(|(s, t)| Some((s.parse::<usize>().ok()?, t.parse::<usize>().ok()?)));
        cells.push(parsed.ok_or_else(|| bad(format!("column '{name}' is not c_<step>_<target>")))?);
    }
    let steps = cells.iter().map(|c| c.0).max().unwrap_or(0);
    let targets = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let expected = (1..=steps).flat_map(|s| (1..=targets).map(move |t| (s, t)));
    if steps == 0 || targets == 0 || cells.len() != steps * targets || !cells.iter().copied().eq(expected) {
        return Err(bad("coverage columns must list c_s_t for every step and target, step-major".into()));
    }
    Ok((targets, steps))
}

pub fn save_dataset(path: &Path, targets: usize, steps: usize, examples: &[TrainingExample]) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset(&mut buf, targets, steps, examples)?;
    write_file(path, &buf)
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_dataset(file).map_err(|e| e.context(path.display().to_string()))
}
