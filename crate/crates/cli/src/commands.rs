use std::io::Read as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use uqsl2::audit::{run_table_audit, AuditConfig};
use uqsl2::expr::{parse_expr, parse_qscalar};
use uqsl2::linalg::MatrixJson;
use uqsl2::numerics::{conjugation_growth, root_unity_center_check};
use uqsl2::pbw::{PbwElement, Uq};
use uqsl2::repkit::{
    build_rep_q_in, casimir_action, check_relations, commutant_dim, decompose, envelope_eval, random_invertible,
    separation_profile, separation_rank, ModuleRep, RepLabelQ,
};
use uqsl2::verma::{build_verma, invariant_scan, norm_growth, norms_csv, VermaTruncation};
use uqsl2::witness::{build_witness_at, build_witness_in, verify_witness_in, WitnessCertificate};
use uqsl2::{Error, Field, NumericScalar, QScalar};

use crate::input::{numeric_q, parse_complex, require_numeric, symbolic_rep};
use crate::output::{Check, Report};
use crate::{Cli, CliError, Cmd, GrowthGenerator, Mode, RepArgs};

type Res = Result<Report, CliError>;

/// Runs `$body` with `$uq` bound to the symbolic algebra or to the algebra
/// at the numeric `q`, depending on `--mode`.
macro_rules! with_uq {
    ($cli:expr, |$uq:ident| $body:expr) => {
        match $cli.mode {
            Mode::Symbolic => {
                let $uq = Uq::symbolic();
                $body
            }
            Mode::Numeric => {
                let $uq = Uq::numeric(numeric_q($cli)?, $cli.tol)?;
                $body
            }
        }
    };
}

/// Same dispatch for modules: symbolic as built, or specialized at `q`.
macro_rules! with_rep {
    ($cli:expr, $args:expr, |$rep:ident| $body:expr) => {{
        let sym = symbolic_rep(&$args.rep, &$args.from)?;
        match $cli.mode {
            Mode::Symbolic => {
                let $rep = sym;
                $body
            }
            Mode::Numeric => {
                let $rep = sym.specialize(numeric_q($cli)?)?;
                $body
            }
        }
    }};
}

fn element_json<C: Field>(x: &PbwElement<C>) -> Value {
    json!({ "normal_form": x.to_string(), "terms": x.to_json_terms() })
}

fn rep_json<C: Field>(rep: &ModuleRep<C>) -> Value {
    json!({
        "dim": rep.dim(),
        "e": MatrixJson::from(&rep.e),
        "f": MatrixJson::from(&rep.f),
        "k": MatrixJson::from(&rep.k),
        "h": rep.h.as_ref().map(|h| json!({ "u": MatrixJson::from(&h.u), "v": MatrixJson::from(&h.v) })),
    })
}

fn verma_json<C: Field>(v: &VermaTruncation<C>) -> Result<Value, CliError> {
    let defect = v.relation_defect()?;
    let n = v.dim();
    Ok(json!({
        "lam": v.lam.to_string(),
        "size": n,
        "e": MatrixJson::from(&v.e),
        "f": MatrixJson::from(&v.f),
        "k": MatrixJson::from(&v.k),
        "relation_defect_corner": defect.get(n - 1, n - 1).to_string(),
    }))
}

fn rep_inputs(args: &RepArgs) -> Value {
    json!({ "rep": args.rep, "from": args.from })
}

fn mode_of(cli: &Cli) -> &'static str {
    cli.mode.as_str()
}

pub fn run(cli: &Cli) -> Res {
    let mode = mode_of(cli);
    match &cli.cmd {
        Cmd::Normalize { expr } => {
            let e = parse_expr(expr)?;
            let result = with_uq!(cli, |uq| element_json(&uq.normalize(&e)?));
            Ok(Report::new("normalize", mode, json!({ "expr": expr })).result(result))
        }
        Cmd::Commutator { x, y } => {
            let (ex, ey) = (parse_expr(x)?, parse_expr(y)?);
            let result = with_uq!(cli, |uq| element_json(&uq.normalize(&ex)?.commutator(&uq.normalize(&ey)?)?));
            Ok(Report::new("commutator", mode, json!({ "x": x, "y": y })).result(result))
        }
        Cmd::WitnessBuild { m, max_m } => {
            let inputs = json!({ "m": m, "max_m": max_m });
            let (result, nonzero) = match cli.mode {
                Mode::Symbolic => {
                    let cert = build_witness_in(&Uq::symbolic(), *m, *max_m)?;
                    let w = cert.witness().map(|w| w.to_string());
                    (json!({ "witness": w, "certificate": cert }), cert.witness().is_some_and(|w| !w.is_zero()))
                }
                Mode::Numeric => {
                    let cert = build_witness_at(numeric_q(cli)?, *m, cli.tol)?;
                    let w = cert.witness().map(|w| w.to_string());
                    (json!({ "witness": w, "certificate": cert }), cert.witness().is_some_and(|w| !w.is_zero()))
                }
            };
            Ok(Report::new("witness-build", mode, inputs).result(result).check(Check::new("witness is nonzero", nonzero, None)))
        }
        Cmd::WitnessVerify { file } => {
            let mut text = String::new();
            if file.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(file)?;
            }
            let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
            // accept a full witness-build report or a bare certificate
            let cert_value = doc.get("result").and_then(|r| r.get("certificate")).cloned().unwrap_or(doc);
            let bad = |e: serde_json::Error| CliError::Usage(format!("not a witness certificate: {e}"));
            let report = match cli.mode {
                Mode::Symbolic => {
                    let cert: WitnessCertificate<QScalar> = serde_json::from_value(cert_value).map_err(bad)?;
                    verify_witness_in(&Uq::symbolic(), &cert, 0.0)?
                }
                Mode::Numeric => {
                    let cert: WitnessCertificate<NumericScalar> = serde_json::from_value(cert_value).map_err(bad)?;
                    verify_witness_in(&Uq::numeric(numeric_q(cli)?, cli.tol)?, &cert, cli.tol)?
                }
            };
            let residual = report.failure.as_ref().map(|f| serde_json::to_value(f).expect("serializable"));
            Ok(Report::new("witness-verify", mode, json!({ "file": file }))
                .check(Check::new("certificate", report.ok, residual))
                .result(report))
        }
        Cmd::RepBuild(args) => {
            let result = with_rep!(cli, args, |rep| rep_json(&rep));
            Ok(Report::new("rep-build", mode, rep_inputs(args)).result(result))
        }
        Cmd::RepCheck(args) => {
            let relations = with_rep!(cli, args, |rep| check_relations(&rep, cli.tol)?);
            let mut report = Report::new("rep-check", mode, rep_inputs(args));
            for c in &relations.checks {
                let residual = json!({ "max_abs": c.residual_norm, "matrix": c.residual });
                report = report.check(Check::new(&c.name, c.passed, Some(residual)));
            }
            Ok(report.result(relations))
        }
        Cmd::Commutant(args) => {
            let dim = with_rep!(cli, args, |rep| commutant_dim(&rep, cli.tol)?);
            Ok(Report::new("commutant", mode, rep_inputs(args)).result(json!({ "dim": dim })))
        }
        Cmd::Casimir(args) => {
            let value = with_rep!(cli, args, |rep| casimir_action(&rep, cli.tol).map(|v| v.to_string()));
            let report = Report::new("casimir", mode, rep_inputs(args));
            match value {
                Ok(v) => Ok(report.result(json!({ "value": v })).check(Check::new("acts as a scalar", true, None))),
                Err(Error::NotIrreducible(m)) => {
                    Ok(report.result(json!({ "error": m })).check(Check::new("acts as a scalar", false, None)))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Decompose { rep: args, conjugate } => {
            if cli.mode == Mode::Numeric {
                return Err(CliError::Usage("decompose works in symbolic mode only".into()));
            }
            let mut rep = symbolic_rep(&args.rep, &args.from)?;
            if *conjugate {
                let p = random_invertible(rep.dim(), &mut ChaCha8Rng::seed_from_u64(cli.seed));
                rep = rep.conjugate(&p)?;
            }
            let labels = decompose(&rep)?;
            let mut inputs = rep_inputs(args);
            inputs["conjugate"] = json!(conjugate);
            inputs["seed"] = json!(cli.seed);
            Ok(Report::new("decompose", mode, inputs).result(json!({ "labels": labels })))
        }
        Cmd::Envelope { expr, stage } => {
            let e = parse_expr(expr)?;
            let blocks = with_uq!(cli, |uq| {
                envelope_eval(&uq.normalize(&e)?, *stage)?
                    .iter()
                    .map(|b| json!({ "n": b.label.n, "eps": b.label.eps, "matrix": MatrixJson::from(&b.matrix) }))
                    .collect::<Vec<_>>()
            });
            Ok(Report::new("envelope", mode, json!({ "expr": expr, "stage": stage })).result(json!({ "blocks": blocks })))
        }
        Cmd::SeparationRank { degree, stage, profile } => {
            let inputs = json!({ "degree": degree, "stage": stage });
            let report = Report::new("separation-rank", "symbolic", inputs);
            if *profile {
                let p = separation_profile(*degree, *stage)?;
                let ok = p.ranks.windows(2).all(|w| w[0] <= w[1]);
                Ok(report.check(Check::new("monotone in the stage", ok, None)).result(p))
            } else {
                Ok(report.result(separation_rank(*degree, *stage)?))
            }
        }
        Cmd::VermaBuild(v) => {
            let result = match cli.mode {
                Mode::Symbolic => verma_json(&build_verma(&parse_qscalar(&v.lam)?, &QScalar::q(), v.size)?)?,
                Mode::Numeric => verma_json(&build_verma(&parse_complex(&v.lam)?, &numeric_q(cli)?, v.size)?)?,
            };
            Ok(Report::new("verma-build", mode, json!({ "lam": v.lam, "size": v.size })).result(result))
        }
        Cmd::VermaScan(v) => {
            let indices = match cli.mode {
                Mode::Symbolic => invariant_scan(&build_verma(&parse_qscalar(&v.lam)?, &QScalar::q(), v.size)?, 0.0)?,
                Mode::Numeric => {
                    invariant_scan(&build_verma(&parse_complex(&v.lam)?, &numeric_q(cli)?, v.size)?, cli.tol)?
                }
            };
            Ok(Report::new("verma-scan", mode, json!({ "lam": v.lam, "size": v.size })).result(json!({ "indices": indices })))
        }
        Cmd::VermaNorms { lam, sizes } => {
            let q = require_numeric(cli, "verma-norms")?;
            let rows = norm_growth(parse_complex(lam)?, q, sizes)?;
            let mut report =
                Report::new("verma-norms", "numeric", json!({ "lam": lam, "q": q.to_string(), "sizes": sizes })).result(&rows);
            report.csv = Some(norms_csv(&rows));
            Ok(report)
        }
        Cmd::Growth { n, eps, generator, nmax } => {
            let q = require_numeric(cli, "growth")?;
            let label = RepLabelQ::new(*n, *eps).map_err(|e| CliError::Usage(e.to_string()))?;
            let rep = build_rep_q_in(label, &q)?;
            let kinv = rep.k.inverse().ok_or_else(|| Error::Domain("K is singular".into()))?;
            let (a, c) = match generator {
                GrowthGenerator::E => (&rep.k, &rep.e),
                GrowthGenerator::F => (&kinv, &rep.f),
            };
            let trace = conjugation_growth(a, c, q.times(&q), nmax.unwrap_or(n + 2))?;
            let inputs = json!({ "n": n, "eps": eps, "generator": format!("{generator:?}"), "q": q.to_string() });
            Ok(Report::new("growth", "numeric", inputs)
                .check(Check::new("|gamma|^n <= ||a|| ||a^-1||", trace.all_hold(), Some(json!(trace.worst_ratio()))))
                .check(Check::new("nilpotency index n+1", trace.vanishes_at == Some(n + 1), None))
                .result(trace))
        }
        Cmd::CenterCheck { d } => {
            let r = root_unity_center_check(*d)?;
            let mut report = Report::new("center-check", "numeric", json!({ "d": d }));
            for e in &r.entries {
                let name = if e.expected_central { format!("{} central", e.element) } else { format!("{} not central", e.element) };
                report = report.check(Check::new(name, e.passed(), None));
            }
            Ok(report.result(r))
        }
        Cmd::TableAudit { q_off, q_unit, root, max_n, sizes } => {
            let mut cfg = AuditConfig { seed: cli.seed, ..AuditConfig::default() };
            if let Some(q) = q_off {
                cfg.q_off_circle = parse_complex(q)?;
            }
            if let Some(q) = q_unit {
                cfg.q_unit = parse_complex(q)?;
            }
            if let Some(d) = root {
                cfg.root_order = *d;
            }
            if let Some(n) = max_n {
                cfg.max_n = *n;
            }
            if let Some(s) = sizes {
                cfg.verma_sizes = s.clone();
            }
            let audit = run_table_audit(&cfg).map_err(|e| match e {
                Error::Config(m) => CliError::Usage(m),
                other => other.into(),
            })?;
            let mut report = Report::new("table-audit", "numeric", serde_json::to_value(&cfg).expect("serializable"));
            for row in &audit.rows {
                report = report.check(Check::new(format!("table {}: {}", row.table, row.regime), row.passed(), None));
            }
            Ok(report.result(audit))
        }
    }
}
