use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use uqsl2::expr::parse_qscalar;
use uqsl2::linalg::Matrix;
use uqsl2::repkit::{build_rep_hbar, build_rep_q, HPart, ModuleRep, RepLabelHbar, RepLabelQ};
use uqsl2::{NumericScalar, QScalar};

use crate::{Cli, CliError, Mode};

pub enum Label {
    Q(RepLabelQ),
    Hbar(RepLabelHbar),
}

/// `"n,eps"` or `"n,k,eps"`, several separated by `;`.
pub fn parse_labels(text: &str) -> Result<Vec<Label>, CliError> {
    let bad = |s: &str| CliError::Usage(format!("cannot read label `{s}`; expected `n,eps` or `n,k,eps`"));
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let parts: Vec<i64> =
                item.split(',').map(|p| p.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| bad(item))?;
            let n = |x: i64| u32::try_from(x).map_err(|_| bad(item));
            let eps = |x: i64| i8::try_from(x).map_err(|_| bad(item));
            Ok(match parts.as_slice() {
                [a, e] => Label::Q(RepLabelQ::new(n(*a)?, eps(*e)?).map_err(|e| CliError::Usage(e.to_string()))?),
                [a, k, e] => Label::Hbar(RepLabelHbar::new(n(*a)?, *k, eps(*e)?).map_err(|e| CliError::Usage(e.to_string()))?),
                _ => return Err(bad(item)),
            })
        })
        .collect()
}

#[derive(Deserialize)]
struct HFile {
    u: Vec<Vec<String>>,
    v: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RepFile {
    e: Vec<Vec<String>>,
    f: Vec<Vec<String>>,
    k: Option<Vec<Vec<String>>>,
    h: Option<HFile>,
}

fn matrix(rows: &[Vec<String>]) -> Result<Matrix<QScalar>, CliError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_qscalar(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let width = parsed.first().map_or(0, Vec::len);
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != width) || width != parsed.len() {
        return Err(CliError::Usage("matrices must be square and nonempty".into()));
    }
    Ok(Matrix::from_rows(parsed))
}

fn read_rep_file(path: &Path) -> Result<ModuleRep<QScalar>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let raw: RepFile = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let e = matrix(&raw.e)?;
    let f = matrix(&raw.f)?;
    let h = match raw.h {
        Some(h) => Some(HPart { u: matrix(&h.u)?, v: matrix(&h.v)? }),
        None => None,
    };
    let d = e.rows();
    let mut rep = ModuleRep { q: QScalar::q(), e, f, k: Matrix::identity(d), h };
    rep.k = match (&raw.k, &rep.h) {
        (Some(k), _) => matrix(k)?,
        (None, Some(_)) => rep.exp_h()?,
        (None, None) => return Err(CliError::Usage("either k or h must be given".into())),
    };
    if [&rep.f, &rep.k].iter().any(|m| m.rows() != d) {
        return Err(CliError::Usage("matrices must have the same size".into()));
    }
    Ok(rep)
}

/// The symbolic module described by `--rep` or `--from`.
pub fn symbolic_rep(rep: &Option<String>, from: &Option<std::path::PathBuf>) -> Result<ModuleRep<QScalar>, CliError> {
    match (rep, from) {
        (Some(text), None) => {
            let labels = parse_labels(text)?;
            let reps = labels
                .iter()
                .map(|l| match l {
                    Label::Q(l) => build_rep_q(*l),
                    Label::Hbar(l) => build_rep_hbar(*l),
                })
                .collect::<Result<Vec<_>, _>>()?;
            match reps.len() {
                0 => Err(CliError::Usage("no labels given".into())),
                1 => Ok(reps.into_iter().next().expect("one")),
                _ => Ok(ModuleRep::direct_sum(&reps.iter().collect::<Vec<_>>())?),
            }
        }
        (None, Some(path)) => read_rep_file(path),
        _ => Err(CliError::Usage("give exactly one of --rep or --from".into())),
    }
}

pub fn parse_complex(text: &str) -> Result<NumericScalar, CliError> {
    text.parse::<NumericScalar>().map_err(|e| CliError::Usage(e.to_string()))
}

/// Numeric `q` from `--hbar` (as `e^hbar`) or `--q`.
pub fn numeric_q(cli: &Cli) -> Result<NumericScalar, CliError> {
    match (&cli.q, &cli.hbar) {
        (_, Some(h)) => {
            let z: Complex64 = parse_complex(h)?.value().exp();
            Ok(NumericScalar::from(z))
        }
        (Some(q), None) => parse_complex(q),
        (None, None) => Err(CliError::Usage("numeric mode needs --q or --hbar".into())),
    }
}

pub fn require_numeric(cli: &Cli, what: &str) -> Result<NumericScalar, CliError> {
    if cli.mode != Mode::Numeric && cli.q.is_none() && cli.hbar.is_none() {
        return Err(CliError::Usage(format!("{what} is numeric; pass --q or --hbar")));
    }
    numeric_q(cli)
}
