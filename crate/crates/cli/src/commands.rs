use std::fs;
use std::path::Path;

use mfk_core::clifford::abs_table;
use mfk_core::format::{parse_mf, write_mf, FormatError, MfFile};
use mfk_core::ktheory::{
    gram_matrix, k0_class_with_window, ku_table, milnor_relative_k, prop_we_verify, pushforward_matrix, KError,
    MilnorModel,
};
use mfk_core::mf::{hom_cohomology, MatrixFactorization, MfError};
use mfk_core::report::Report;
use mfk_core::resolve::{default_degree_bound, resolve, PresentedModule, ResolveError};
use mfk_core::mf::standard::{quadric, quadric_ring};
use serde_json::{json, Value};

use crate::{render, Command, Output};

pub struct Outcome {
    pub report: Report,
    pub text: String,
    /// set when a factorization goes to stdout in place of a report
    pub file_text: Option<String>,
}

pub struct CmdError {
    pub code: u8,
    pub message: String,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn math(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<MfError> for CmdError {
    fn from(e: MfError) -> Self {
        match e {
            MfError::UncertifiedWindow(_) | MfError::NotAFactorization { .. } => Self::math(e.to_string()),
            e => Self::usage(e.to_string()),
        }
    }
}

impl From<KError> for CmdError {
    fn from(e: KError) -> Self {
        match e {
            KError::NonIntegralSolution(_) | KError::UncertifiedWindow(_) => Self::math(e.to_string()),
            KError::Mf(e) => e.into(),
            e => Self::usage(e.to_string()),
        }
    }
}

impl From<ResolveError> for CmdError {
    fn from(e: ResolveError) -> Self {
        match e {
            ResolveError::DegreeBoundTooSmall { .. } | ResolveError::LiftFailure(_) => Self::math(e.to_string()),
            e => Self::usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MatrixFactorization, CmdError> {
    parse_mf(&read(path)?).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.is_mathematical() { CmdError::math(msg) } else { CmdError::usage(msg) }
    })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn emit_mf(command: &str, inputs: Value, mf: &MatrixFactorization, out: &Output) -> Result<Outcome, CmdError> {
    let text = write_mf(mf);
    let report = Report::new(command, inputs, json!({ "mf": MfFile::from_mf(mf), "rank": mf.rank(), "degree": mf.degree() }));
    match &out.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CmdError::usage(format!("{}: {e}", path.display())))?;
            let summary = format!("wrote {} (rank {}, f = {})\n", path.display(), mf.rank(), mf.potential());
            Ok(Outcome { report, text: summary, file_text: None })
        }
        None => Ok(Outcome { report, text: String::new(), file_text: Some(text) }),
    }
}

pub fn parse_model(text: &str) -> Result<MilnorModel, CmdError> {
    let bad = || CmdError::usage(format!("cannot parse model '{text}' (points:D | vw:A,B | quadric:N | suspend:A,B:<model>)"));
    let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    let pair = |s: &str| -> Result<(i64, i64), CmdError> {
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok((int(a)?, int(b)?))
    };
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    match kind.trim() {
        "points" => Ok(MilnorModel::Monomial { d: int(rest)? }),
        "vw" => {
            let (a, b) = pair(rest)?;
            Ok(MilnorModel::Product { a, b })
        }
        "quadric" => Ok(MilnorModel::Quadric { n: usize::try_from(int(rest)?).map_err(|_| bad())? }),
        "suspend" => {
            let (ab, inner) = rest.split_once(':').ok_or_else(bad)?;
            let (a, b) = pair(ab)?;
            Ok(MilnorModel::Suspended { inner: Box::new(parse_model(inner)?), a, b })
        }
        _ => Err(bad()),
    }
}

pub fn run(command: &Command) -> Result<Outcome, CmdError> {
    match command {
        Command::Verify { file } => {
            let text = read(file)?;
            let inputs = json!({ "file": path_str(file) });
            match parse_mf(&text) {
                Ok(mf) => {
                    let results = json!({ "valid": true, "rank": mf.rank(), "degree": mf.degree(), "f": mf.potential().to_string() });
                    let text = format!("valid: rank {} factorization of {} (degree {})\n", mf.rank(), mf.potential(), mf.degree());
                    Ok(Outcome { report: Report::new("verify", inputs, results), text, file_text: None })
                }
                Err(e @ FormatError::Invalid(_)) => {
                    let results = json!({ "valid": false, "diagnostic": e.to_string() });
                    let text = format!("invalid: {e}\n");
                    Ok(Outcome { report: Report::new("verify", inputs, results).with_passed(false), text, file_text: None })
                }
                Err(e) => Err(CmdError::usage(format!("{}: {e}", file.display()))),
            }
        }
        Command::Tensor { a, b, out } => {
            let mf = load(a)?.tensor(&load(b)?)?;
            emit_mf("tensor", json!({ "a": path_str(a), "b": path_str(b) }), &mf, out)
        }
        Command::Knorrer { file, l, u, v, pm_i, out } => {
            let f = load(file)?;
            let mf = if *pm_i { f.knorrer_pm_i(u, v)? } else { f.knorrer(*l, u, v)? };
            emit_mf("knorrer", json!({ "file": path_str(file), "l": l, "u": u, "v": v, "pm_i": pm_i }), &mf, out)
        }
        Command::Shift { file, times, out } => {
            let mf = load(file)?.shift_by(*times);
            emit_mf("shift", json!({ "file": path_str(file), "times": times }), &mf, out)
        }
        Command::Twist { file, by, out } => {
            let mf = load(file)?.twist(*by);
            emit_mf("twist", json!({ "file": path_str(file), "by": by }), &mf, out)
        }
        Command::Dual { file, out } => {
            let mf = load(file)?.dual();
            emit_mf("dual", json!({ "file": path_str(file) }), &mf, out)
        }
        Command::Restrict { file, var, out } => {
            let mf = load(file)?.restrict_var(var)?;
            emit_mf("restrict", json!({ "file": path_str(file), "var": var }), &mf, out)
        }
        Command::Suspend { file, k, m, u, out } => {
            let mf = load(file)?.suspend_by_u(*k, *m, u)?;
            emit_mf("suspend", json!({ "file": path_str(file), "k": k, "m": m, "u": u }), &mf, out)
        }
        Command::K0Class { file, window } => {
            let mf = load(file)?;
            let class = k0_class_with_window(&mf, window.window)?;
            let gram = gram_matrix(class.n, window.window)?;
            let report = Report::new("k0-class", json!({ "file": path_str(file) }), json!(class))
                .with_certificates(json!({ "window": window.window, "gram": gram }));
            let text = render::k0_class(&class, window.window);
            Ok(Outcome { report, text, file_text: None })
        }
        Command::Euler { a, b, window } => {
            let (fa, fb) = (load(a)?, load(b)?);
            let h = hom_cohomology(&fa, &fb, window.window)?;
            let inputs = json!({ "a": path_str(a), "b": path_str(b) });
            let certified = h.is_certified();
            let results = json!({ "euler": if certified { json!(h.euler_characteristic()) } else { Value::Null }, "hom": h });
            let report = Report::new("euler", inputs, results)
                .with_certificates(json!({ "window": window.window, "certified": certified }))
                .with_passed(certified);
            let text = render::euler(&h);
            Ok(Outcome { report, text, file_text: None })
        }
        Command::PushforwardTable { n } => {
            if *n < 3 {
                return Err(CmdError::usage("pushforward-table needs n >= 3"));
            }
            let m = pushforward_matrix(*n);
            let rows = m.to_i64_rows().expect("small entries");
            let report = Report::new("pushforward-table", json!({ "n": n }), json!({ "matrix": rows }));
            Ok(Outcome { report, text: render::pushforward(*n, &rows), file_text: None })
        }
        Command::KuTable { n } => {
            if *n < 3 {
                return Err(CmdError::usage("ku-table needs n >= 3"));
            }
            let t = ku_table(*n);
            let text = format!("n = {}: K0 = {}, K1 = {}\n", t.n, t.k0, t.k1);
            let report = Report::new("ku-table", json!({ "n": n }), json!(t))
                .with_certificates(json!({ "pushforward": pushforward_matrix(*n).to_i64_rows() }));
            Ok(Outcome { report, text, file_text: None })
        }
        Command::AbsTable { n } => {
            let rows = abs_table(*n).map_err(|e| CmdError::usage(e.to_string()))?;
            let text = render::abs_table(&rows);
            Ok(Outcome { report: Report::new("abs-table", json!({ "n": n }), json!(rows)), text, file_text: None })
        }
        Command::PropWe { weights, degrees, factors } => {
            let r = prop_we_verify(weights, degrees, factors)?;
            let text = render::prop_we(&r);
            let inputs = json!({ "weights": weights, "degrees": degrees, "factors": factors });
            let passed = r.passed;
            Ok(Outcome { report: Report::new("prop-we", inputs, json!(r)).with_passed(passed), text, file_text: None })
        }
        Command::Milnor { model } => {
            let m = parse_model(model)?;
            let k = milnor_relative_k(&m)?;
            let text = render::milnor(&k);
            Ok(Outcome { report: Report::new("milnor", json!({ "model": model }), json!(k)), text, file_text: None })
        }
        Command::Resolve { quadric: n, mf, steps, degree_bound } => {
            let (module, inputs) = match (n, mf) {
                (Some(n), None) => {
                    if *n == 0 {
                        return Err(CmdError::usage("--quadric needs n >= 1"));
                    }
                    let m = PresentedModule::residue_field(&quadric_ring(*n), Some(quadric(*n)))?;
                    (m, json!({ "quadric": n, "steps": steps }))
                }
                (None, Some(path)) => {
                    let m = PresentedModule::cokernel_of(&load(path)?)?;
                    (m, json!({ "mf": path_str(path), "steps": steps }))
                }
                _ => return Err(CmdError::usage("give exactly one of --quadric or --mf")),
            };
            let bound = degree_bound.unwrap_or_else(|| default_degree_bound(&module));
            let res = resolve(&module, *steps, bound)?;
            let table = res.betti_table();
            let report = Report::new("resolve", inputs, json!(table))
                .with_certificates(json!({ "degree_bound": bound, "steps": res.reports() }));
            Ok(Outcome { report, text: table.to_string(), file_text: None })
        }
    }
}
