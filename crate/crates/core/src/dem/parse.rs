use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::DetectorErrorModel;
use crate::gf2::SparseBinaryMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    /// `repeat` blocks and `shift_detectors` need a flattened model.
    Unsupported(String),
    Probability(f64),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::Unsupported(inst) => write!(
                f,
                "unsupported instruction `{inst}`; flatten the model first"
            ),
            ParseErrorKind::Probability(p) => {
                write!(f, "probability {p} is outside the open interval (0, 1)")
            }
        }
    }
}

/// One logical line split into instruction name, parenthesised arguments and
/// whitespace-separated targets.
struct Instruction<'a> {
    name: &'a str,
    args: Option<&'a str>,
    targets: Vec<&'a str>,
}

fn split_instruction(line: &str) -> Result<Instruction<'_>, String> {
    let name_end = line
        .find(|c: char| c == '(' || c.is_whitespace())
        .unwrap_or(line.len());
    let name = &line[..name_end];
    let mut rest = line[name_end..].trim_start();
    let mut args = None;
    if let Some(after) = rest.strip_prefix('(') {
        let close = after
            .find(')')
            .ok_or_else(|| format!("unclosed argument list after `{name}`"))?;
        args = Some(after[..close].trim());
        rest = &after[close + 1..];
    }
    Ok(Instruction {
        name,
        args,
        targets: rest.split_whitespace().collect(),
    })
}

fn parse_index(token: &str, prefix: char) -> Option<usize> {
    token.strip_prefix(prefix)?.parse().ok()
}

#[derive(Default)]
struct Builder {
    num_detectors: usize,
    num_observables: usize,
    /// (detectors, observables) of each merged mechanism, in first-seen order.
    columns: Vec<(Vec<usize>, Vec<usize>)>,
    priors: Vec<f64>,
    index: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

impl Builder {
    fn add_mechanism(&mut self, p: f64, mut dets: Vec<usize>, mut obs: Vec<usize>) {
        toggle_sort(&mut dets);
        toggle_sort(&mut obs);
        if dets.is_empty() && obs.is_empty() {
            // No detector or observable is affected; the mechanism is inert.
            return;
        }
        let key = (dets, obs);
        match self.index.get(&key) {
            Some(&j) => {
                let q = self.priors[j];
                self.priors[j] = p * (1.0 - q) + q * (1.0 - p);
            }
            None => {
                self.index.insert(key.clone(), self.columns.len());
                self.columns.push(key);
                self.priors.push(p);
            }
        }
    }

    fn finish(self) -> DetectorErrorModel {
        let n = self.columns.len();
        let mut h_rows = vec![Vec::new(); self.num_detectors];
        let mut l_rows = vec![Vec::new(); self.num_observables];
        for (j, (dets, obs)) in self.columns.iter().enumerate() {
            for &d in dets {
                h_rows[d].push(j);
            }
            for &o in obs {
                l_rows[o].push(j);
            }
        }
        DetectorErrorModel::from_parts(
            SparseBinaryMatrix::from_sorted_rows(self.num_detectors, n, h_rows),
            SparseBinaryMatrix::from_sorted_rows(self.num_observables, n, l_rows),
            self.priors,
        )
    }
}

/// Sorts and cancels repeated indices in pairs (a target listed twice flips
/// its detector twice).
fn toggle_sort(v: &mut Vec<usize>) {
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

/// Parses a flattened detector error model.
pub fn parse_dem(text: &str) -> Result<DetectorErrorModel, ParseError> {
    let mut b = Builder::default();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |kind| ParseError {
            line: line_no,
            kind,
        };
        let syntax = |msg: String| err(ParseErrorKind::Syntax(msg));
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('}') {
            return Err(err(ParseErrorKind::Unsupported("repeat".into())));
        }
        let inst = split_instruction(line).map_err(syntax)?;
        match inst.name {
            "error" => {
                let arg = inst
                    .args
                    .ok_or_else(|| syntax("`error` needs a probability argument".into()))?;
                let p: f64 = arg
                    .parse()
                    .map_err(|_| syntax(format!("invalid probability `{arg}`")))?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(err(ParseErrorKind::Probability(p)));
                }
                if inst.targets.is_empty() {
                    return Err(syntax("`error` has no targets".into()));
                }
                let (mut dets, mut obs) = (Vec::new(), Vec::new());
                for t in inst.targets {
                    if t == "^" {
                        continue;
                    } else if let Some(d) = parse_index(t, 'D') {
                        b.num_detectors = b.num_detectors.max(d + 1);
                        dets.push(d);
                    } else if let Some(o) = parse_index(t, 'L') {
                        b.num_observables = b.num_observables.max(o + 1);
                        obs.push(o);
                    } else {
                        return Err(syntax(format!("invalid error target `{t}`")));
                    }
                }
                b.add_mechanism(p, dets, obs);
            }
            "detector" => {
                if let Some(args) = inst.args {
                    for a in args.split(',').filter(|a| !a.trim().is_empty()) {
                        a.trim().parse::<f64>().map_err(|_| {
                            syntax(format!("invalid detector coordinate `{}`", a.trim()))
                        })?;
                    }
                }
                if inst.targets.is_empty() {
                    return Err(syntax("`detector` needs a D target".into()));
                }
                for t in inst.targets {
                    let d = parse_index(t, 'D')
                        .ok_or_else(|| syntax(format!("invalid detector target `{t}`")))?;
                    b.num_detectors = b.num_detectors.max(d + 1);
                }
            }
            "logical_observable" => {
                if inst.targets.is_empty() {
                    return Err(syntax("`logical_observable` needs an L target".into()));
                }
                for t in inst.targets {
                    let o = parse_index(t, 'L')
                        .ok_or_else(|| syntax(format!("invalid observable target `{t}`")))?;
                    b.num_observables = b.num_observables.max(o + 1);
                }
            }
            "repeat" | "shift_detectors" => {
                return Err(err(ParseErrorKind::Unsupported(inst.name.to_string())));
            }
            other => return Err(syntax(format!("unknown instruction `{other}`"))),
        }
    }
    Ok(b.finish())
}

/// Writes `dem` in the flat format accepted by [`parse_dem`]. Column order,
/// detector count and observable count survive a round trip.
pub fn emit_dem(dem: &DetectorErrorModel) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    if dem.num_detectors() > 0 {
        writeln!(out, "detector D{}", dem.num_detectors() - 1).unwrap();
    }
    if dem.num_observables() > 0 {
        writeln!(out, "logical_observable L{}", dem.num_observables() - 1).unwrap();
    }
    let h = dem.check_matrix();
    let l = dem.observable_matrix();
    for (j, p) in dem.priors().iter().enumerate() {
        write!(out, "error({p})").unwrap();
        for &d in h.col(j) {
            write!(out, " D{d}").unwrap();
        }
        for &o in l.col(j) {
            write!(out, " L{o}").unwrap();
        }
        out.push('\n');
    }
    out
}
