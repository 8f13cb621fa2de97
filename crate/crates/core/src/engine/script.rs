use std::collections::BTreeSet;
use std::fmt;

use super::{op_fourier, op_middle_convolution, op_moebius, op_twist, ConnectionDescriptor, EngineError, Location, Moebius};
use crate::jordan::split_top;
use crate::scalars::{parse_eigenvalue, parse_scalar, Eigenvalue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Twist(Vec<Eigenvalue>),
    Moebius(Moebius),
    Fourier,
    Mc(Eigenvalue),
}

impl Step {
    pub fn apply(&self, c: &ConnectionDescriptor) -> Result<ConnectionDescriptor, EngineError> {
        match self {
            Step::Twist(ls) => op_twist(c, ls),
            Step::Moebius(m) => op_moebius(c, m),
            Step::Fourier => op_fourier(c),
            Step::Mc(chi) => op_middle_convolution(c, chi),
        }
    }

    /// Row label in trace tables.
    pub fn label(&self) -> String {
        match self {
            Step::Twist(ls) => {
                let items: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                format!("({}) x -", items.join(","))
            }
            Step::Moebius(Moebius::Inversion) => "phi*".into(),
            Step::Moebius(Moebius::Affine(a, b)) => format!("z -> ({})z + ({})", a, b),
            Step::Fourier => "F".into(),
            Step::Mc(chi) => format!("MC_{}", chi),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Twist(ls) => {
                let items: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "twist {}", items.join(","))
            }
            Step::Moebius(Moebius::Inversion) => write!(f, "moebius inv"),
            Step::Moebius(Moebius::Affine(a, b)) => write!(f, "moebius affine {} {}", a, b),
            Step::Fourier => write!(f, "fourier"),
            Step::Mc(chi) => write!(f, "mc {}", chi),
        }
    }
}

/// One step per line: `twist 1,-l^-1,1,-l`, `moebius inv`,
/// `moebius affine a b`, `fourier`, `mc -l`. `#` starts a comment.
pub fn parse_script(text: &str) -> Result<Vec<Step>, EngineError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| EngineError::Script { line: i + 1, msg };
        let (cmd, rest) = match line.split_once(char::is_whitespace) {
            Some((c, r)) => (c, r.trim()),
            None => (line, ""),
        };
        let step = match cmd {
            "twist" => {
                let body = match rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                    Some(inner) => inner,
                    None => rest,
                };
                let ls = split_top(body)
                    .into_iter()
                    .map(|x| parse_eigenvalue(x.trim()).map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Step::Twist(ls)
            }
            "moebius" => {
                let args: Vec<&str> = rest.split_whitespace().collect();
                match args.as_slice() {
                    ["inv"] => Step::Moebius(Moebius::Inversion),
                    ["affine", a, b] => {
                        let a = parse_scalar(a).map_err(|e| err(e.to_string()))?;
                        let b = parse_scalar(b).map_err(|e| err(e.to_string()))?;
                        Step::Moebius(Moebius::Affine(a, b))
                    }
                    _ => return Err(err(format!("expected `moebius inv` or `moebius affine a b`, got `{}`", line))),
                }
            }
            "fourier" if rest.is_empty() => Step::Fourier,
            "mc" => Step::Mc(parse_eigenvalue(rest).map_err(|e| err(e.to_string()))?),
            _ => return Err(err(format!("unknown step `{}`", line))),
        };
        steps.push(step);
    }
    Ok(steps)
}

/// The trace up to and including the failing step's input.
#[derive(Debug, Clone)]
pub struct ScriptFailure {
    pub step: usize,
    pub trace: Vec<ConnectionDescriptor>,
    pub error: EngineError,
}

impl fmt::Display for ScriptFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} failed: {}", self.step + 1, self.error)
    }
}

impl std::error::Error for ScriptFailure {}

/// Replay `steps` from `c0`; returns every intermediate descriptor, starting
/// with `c0`.
pub fn run_script(c0: &ConnectionDescriptor, steps: &[Step]) -> Result<Vec<ConnectionDescriptor>, ScriptFailure> {
    let mut trace = vec![c0.clone()];
    for (i, step) in steps.iter().enumerate() {
        match step.apply(trace.last().unwrap()) {
            Ok(next) => trace.push(next),
            Err(error) => return Err(ScriptFailure { step: i, trace, error }),
        }
    }
    Ok(trace)
}

/// Tabular layout: one row per state, labelled by the operation applied to
/// it; `-` marks a point that is not singular.
pub fn render_trace(states: &[ConnectionDescriptor], steps: &[Step]) -> String {
    let cols: BTreeSet<Location> = states.iter().flat_map(|c| c.locations()).collect();
    let mut header = vec![String::new()];
    header.extend(cols.iter().map(|l| l.to_string()));
    let mut rows = vec![header];
    for (i, c) in states.iter().enumerate() {
        let mut row = vec![steps.get(i).map(Step::label).unwrap_or_default()];
        for loc in &cols {
            row.push(match c.at(loc) {
                Some(ft) if c.is_singular(loc) => ft.to_string(),
                _ => "-".into(),
            });
        }
        rows.push(row);
    }
    let n = rows[0].len();
    let widths: Vec<usize> = (0..n).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (k, r) in rows.iter().enumerate() {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{:<w$}", s, w = *w)).collect();
        out.push_str(&format!("{} | {}", cells[0], cells[1..].join("  ")).trim_end().to_string());
        out.push('\n');
        if k == 0 {
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * n + 1));
            out.push('\n');
        }
    }
    out
}
