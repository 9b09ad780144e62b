//! Golden-file checks for the DEM parser.
//!
//! Each `NAME.dem` under `tests/data/dem` has a `NAME.expected` holding
//! either the parsed model, one mechanism per line as `p TARGETS...` after
//! `detectors N` / `observables K` headers, or a single
//! `error LINE KIND` line. `#` starts a comment.

use std::fs;
use std::path::{Path, PathBuf};

use vibelsd_core::dem::{emit_dem, ParseErrorKind};
use vibelsd_core::parse_dem;

const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[allow(dead_code)]
pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/dem")
}

/// Runs every golden case; returns the case count or the first mismatch.
pub fn check_all(dir: &Path) -> Result<usize, String> {
    let mut inputs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "dem"))
        .collect();
    inputs.sort();
    for input in &inputs {
        check_case(input).map_err(|e| format!("{}: {e}", input.display()))?;
    }
    Ok(inputs.len())
}

fn meaningful_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .collect()
}

fn check_case(input: &Path) -> Result<(), String> {
    let text = fs::read_to_string(input).unwrap();
    let expected = fs::read_to_string(input.with_extension("expected")).unwrap();
    let expected = meaningful_lines(&expected);
    let parsed = parse_dem(&text);

    if let Some(rest) = expected[0].strip_prefix("error ") {
        let mut words = rest.split_whitespace();
        let line: usize = words.next().unwrap().parse().unwrap();
        let kind = words.next().unwrap();
        let err = match parsed {
            Ok(_) => return Err("parsed, expected an error".into()),
            Err(e) => e,
        };
        if err.line != line {
            return Err(format!("error on line {}, expected {line}", err.line));
        }
        let ok = match (kind, &err.kind) {
            ("unsupported", ParseErrorKind::Unsupported(inst)) => {
                words.next() == Some(inst.as_str())
            }
            ("probability", ParseErrorKind::Probability(_)) => true,
            ("syntax", ParseErrorKind::Syntax(_)) => true,
            _ => false,
        };
        return if ok {
            Ok(())
        } else {
            Err(format!("wrong error kind: {err}"))
        };
    }

    let dem = parsed.map_err(|e| format!("unexpected error: {e}"))?;
    let header = |i: usize, key: &str| -> usize {
        expected[i]
            .strip_prefix(key)
            .unwrap_or_else(|| panic!("expected `{key}` header"))
            .trim()
            .parse()
            .unwrap()
    };
    if dem.num_detectors() != header(0, "detectors") {
        return Err(format!("{} detectors", dem.num_detectors()));
    }
    if dem.num_observables() != header(1, "observables") {
        return Err(format!("{} observables", dem.num_observables()));
    }
    let mechanisms = &expected[2..];
    if dem.num_mechanisms() != mechanisms.len() {
        return Err(format!(
            "{} mechanisms, expected {}",
            dem.num_mechanisms(),
            mechanisms.len()
        ));
    }
    for (j, line) in mechanisms.iter().enumerate() {
        let mut words = line.split_whitespace();
        let p: f64 = words.next().unwrap().parse().unwrap();
        let mut detectors = Vec::new();
        let mut observables = Vec::new();
        for w in words {
            match w.split_at(1) {
                ("D", i) => detectors.push(i.parse::<usize>().unwrap()),
                ("L", i) => observables.push(i.parse::<usize>().unwrap()),
                _ => panic!("bad target {w}"),
            }
        }
        if (dem.priors()[j] - p).abs() > PROBABILITY_TOLERANCE {
            return Err(format!(
                "mechanism {j}: p = {}, expected {p}",
                dem.priors()[j]
            ));
        }
        if dem.check_matrix().col(j) != detectors.as_slice()
            || dem.observable_matrix().col(j) != observables.as_slice()
        {
            return Err(format!("mechanism {j}: targets differ from `{line}`"));
        }
    }

    let again = parse_dem(&emit_dem(&dem)).map_err(|e| format!("re-parse failed: {e}"))?;
    if again != dem {
        return Err("serialize-parse round trip changed the model".into());
    }
    Ok(())
}
