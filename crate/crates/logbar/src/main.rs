//! Command-line interface for the logbar library.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure,
//! 3 numerical non-convergence.

use clap::{Parser, Subcommand};
use logbar::cdga::{bar_h0, bar_h0_basis, cdga_from_json, model_cdga, validate_cdga};
use logbar::exact::ExactScalar;
use logbar::geom::{pullback_form, push_tangential, LineMap, MonomialMap, SncLocalModel};
use logbar::jsonout::{form_json, regularized_json, to_canonical_string};
use logbar::regint::{period_pairing, regularize, word_forms};
use logbar::suite::{run_all, suite_json};
use logbar::words::{
    antipode, check_hopf_axioms, counit, deconcat, shuffle, BarElement,
};
use logbar::workspace::Workspace;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "logbar", version, about = "Pointed bar complexes and regularized iterated integrals on punctured lines")]
struct Cli {
    /// Force serial evaluation of quadrature grids.
    #[arg(long, global = true, conflicts_with = "parallel")]
    serial: bool,
    /// Force parallel evaluation of quadrature grids.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a workspace file (scene, basepoints, paths, words).
    Validate { workspace: String },
    /// Regularized iterated integral of a named word along a named path.
    Regint {
        workspace: String,
        path: String,
        word: String,
    },
    /// Period pairing of a named bar element against a named path.
    Pair {
        workspace: String,
        path: String,
        element: String,
    },
    /// Shuffle product of two named words.
    Shuffle {
        workspace: String,
        left: String,
        right: String,
    },
    /// Deconcatenation coproduct of a named word.
    Deconcat { workspace: String, word: String },
    /// Antipode of a named word.
    Antipode { workspace: String, word: String },
    /// Counit of a named element.
    Counit { workspace: String, element: String },
    /// Check the Hopf axioms exactly on words over a finite alphabet.
    HopfCheck {
        #[arg(long, default_value_t = 3)]
        alphabet: u32,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Degree-zero bar cohomology dimensions for a workspace scene or a
    /// presentation file.
    H0 {
        /// Workspace file (model algebra of its scene) or CDGA JSON with --cdga.
        input: String,
        #[arg(long)]
        cdga: bool,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
        /// Also print an explicit kernel basis at each weight.
        #[arg(long)]
        basis: bool,
    },
    /// Push a tangential base point through a monomial map in local charts.
    PushTangent {
        /// Exponent matrix rows as comma-separated integers, rows joined by ';'.
        #[arg(long)]
        exponents: String,
        /// Unit scalars of the map, comma separated (rationals such as 3 or 1/2).
        #[arg(long)]
        units: String,
        /// Tangent scales of the source point, comma separated.
        #[arg(long)]
        scales: String,
    },
    /// Pull a dlog form back along z^n or a Mobius map between scenes.
    Pullback {
        workspace: String,
        /// Target-scene workspace file.
        #[arg(long)]
        target: String,
        /// Map: "pow:n" or "mobius:a,b,c,d".
        #[arg(long)]
        map: String,
        /// Target word name whose letters are pulled back.
        word: String,
    },
    /// Run the complete acceptance suite.
    Suite,
}

fn parse_scalars(s: &str) -> Result<Vec<ExactScalar>, String> {
    s.split(',')
        .map(|t| ExactScalar::parse(t.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let parallel = cli.parallel && !cli.serial;
    let usage = |m: String| (1u8, m);
    let invalid = |m: String| (2u8, m);
    let numeric = |m: String| (3u8, m);
    let load = |p: &str| {
        Workspace::load(std::path::Path::new(p)).map_err(|e| (1u8, format!("{p}: {e}")))
    };
    let with_cfg = |ws: &Workspace| {
        let mut c = ws.config.clone();
        c.parallel = parallel;
        c
    };

    match cli.command {
        Command::Validate { workspace } => {
            let ws = load(&workspace)?;
            let report = ws.validate();
            if report.is_empty() {
                println!("{}", to_canonical_string(&serde_json::json!({"ok": true})));
                Ok(0)
            } else {
                let doc = serde_json::json!({ "ok": false, "violations": report });
                println!("{}", to_canonical_string(&doc));
                Ok(2)
            }
        }
        Command::Regint {
            workspace,
            path,
            word,
        } => {
            let ws = load(&workspace)?;
            let p = ws.path(&path).map_err(|e| usage(e.to_string()))?;
            let w = ws.word(&word).map_err(|e| usage(e.to_string()))?;
            let forms = word_forms(w).map_err(|e| usage(e.to_string()))?;
            let r = regularize(&ws.scene, p, &forms, &with_cfg(&ws))
                .map_err(|e| invalid(e.to_string()))?;
            if !r.converged {
                return Err(numeric(format!(
                    "regularization did not converge (error estimate {:.2e})",
                    r.error_estimate
                )));
            }
            println!("{}", to_canonical_string(&regularized_json(&r)));
            Ok(0)
        }
        Command::Pair {
            workspace,
            path,
            element,
        } => {
            let ws = load(&workspace)?;
            let p = ws.path(&path).map_err(|e| usage(e.to_string()))?;
            let el = ws.element(&element).map_err(|e| usage(e.to_string()))?;
            let r = period_pairing(&ws.scene, p, &el, &with_cfg(&ws))
                .map_err(|e| invalid(e.to_string()))?;
            if !r.converged {
                return Err(numeric(format!(
                    "pairing did not converge (error estimate {:.2e})",
                    r.error_estimate
                )));
            }
            println!("{}", to_canonical_string(&regularized_json(&r)));
            Ok(0)
        }
        Command::Shuffle {
            workspace,
            left,
            right,
        } => {
            let ws = load(&workspace)?;
            let u = BarElement::from_word(ws.word(&left).map_err(|e| usage(e.to_string()))?.clone());
            let v = BarElement::from_word(ws.word(&right).map_err(|e| usage(e.to_string()))?.clone());
            println!("{}", to_canonical_string(&shuffle(&u, &v).to_json()));
            Ok(0)
        }
        Command::Deconcat { workspace, word } => {
            let ws = load(&workspace)?;
            let w = BarElement::from_word(ws.word(&word).map_err(|e| usage(e.to_string()))?.clone());
            println!("{}", to_canonical_string(&deconcat(&w).to_json()));
            Ok(0)
        }
        Command::Antipode { workspace, word } => {
            let ws = load(&workspace)?;
            let w = BarElement::from_word(ws.word(&word).map_err(|e| usage(e.to_string()))?.clone());
            println!("{}", to_canonical_string(&antipode(&w).to_json()));
            Ok(0)
        }
        Command::Counit { workspace, element } => {
            let ws = load(&workspace)?;
            let el = ws.element(&element).map_err(|e| usage(e.to_string()))?;
            let c = counit(&el);
            println!(
                "{}",
                to_canonical_string(&serde_json::json!({"counit": c.to_string()}))
            );
            Ok(0)
        }
        Command::HopfCheck { alphabet, max_len } => {
            let report = check_hopf_axioms(alphabet, max_len);
            let doc = serde_json::json!({
                "alphabet": alphabet,
                "max_len": max_len,
                "words_checked": report.words_checked,
                "pairs_checked": report.pairs_checked,
                "failures": report.failures.iter().map(|f| serde_json::json!({
                    "identity": f.identity,
                    "witness": f.witness,
                })).collect::<Vec<_>>(),
                "pass": report.passed(),
            });
            println!("{}", to_canonical_string(&doc));
            Ok(if report.passed() { 0 } else { 2 })
        }
        Command::H0 {
            input,
            cdga,
            max_weight,
            basis,
        } => {
            let algebra = if cdga {
                let text = std::fs::read_to_string(&input)
                    .map_err(|e| usage(format!("{input}: {e}")))?;
                let v: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
                cdga_from_json(&v).map_err(|e| usage(e.to_string()))?
            } else {
                let ws = load(&input)?;
                model_cdga(&ws.scene)
            };
            let report = validate_cdga(&algebra).map_err(|e| invalid(e.to_string()))?;
            if !report.passed() {
                return Err(invalid(format!(
                    "presentation fails validation: {:?}",
                    report.violations
                )));
            }
            let mut dims = Vec::new();
            let mut bases = Vec::new();
            for cap in 0..=max_weight {
                dims.push(bar_h0(&algebra, cap).map_err(|e| invalid(e.to_string()))?);
                if basis {
                    let (slice, kernel) =
                        bar_h0_basis(&algebra, cap).map_err(|e| invalid(e.to_string()))?;
                    let words: Vec<Vec<String>> = slice
                        .words
                        .iter()
                        .map(|w| w.iter().map(|&i| algebra.basis[i].label.clone()).collect())
                        .collect();
                    let vectors: Vec<Vec<String>> = kernel
                        .iter()
                        .map(|v| v.iter().map(|c| c.to_string()).collect())
                        .collect();
                    bases.push(serde_json::json!({
                        "cap": cap,
                        "words": words,
                        "kernel": vectors,
                    }));
                }
            }
            let mut doc = serde_json::json!({ "h0_dims": dims });
            if basis {
                doc["bases"] = serde_json::json!(bases);
            }
            println!("{}", to_canonical_string(&doc));
            Ok(0)
        }
        Command::PushTangent {
            exponents,
            units,
            scales,
        } => {
            let exps: Result<Vec<Vec<i64>>, String> = exponents
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|t| t.trim().parse::<i64>().map_err(|e| e.to_string()))
                        .collect()
                })
                .collect();
            let exps = exps.map_err(usage)?;
            let units = parse_scalars(&units)
                .map_err(usage)?
                .into_iter()
                .map(|s| logbar::exact::ExactComplex::new(s, ExactScalar::zero()))
                .collect();
            let scales = parse_scalars(&scales)
                .map_err(usage)?
                .into_iter()
                .map(|s| logbar::exact::ExactComplex::new(s, ExactScalar::zero()))
                .collect();
            let map = MonomialMap {
                exponents: exps,
                units,
            };
            let model = SncLocalModel::new(scales).map_err(|e| invalid(e.to_string()))?;
            let pushed = push_tangential(&map, &model).map_err(|e| invalid(e.to_string()))?;
            let doc = serde_json::json!({
                "scales": pushed
                    .scales
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
            });
            println!("{}", to_canonical_string(&doc));
            Ok(0)
        }
        Command::Pullback {
            workspace,
            target,
            map,
            word,
        } => {
            let source = load(&workspace)?;
            let target = load(&target)?;
            let f = parse_line_map(&map).map_err(usage)?;
            let w = target.word(&word).map_err(|e| usage(e.to_string()))?;
            let forms = word_forms(w).map_err(|e| usage(e.to_string()))?;
            let mut out = Vec::new();
            for form in &forms {
                let pb = pullback_form(&f, &source.scene, &target.scene, form)
                    .map_err(|e| invalid(e.to_string()))?;
                out.push(form_json(&pb, &source.scene));
            }
            println!(
                "{}",
                to_canonical_string(&serde_json::json!({ "forms": out }))
            );
            Ok(0)
        }
        Command::Suite => {
            let results = run_all(parallel);
            for r in &results {
                println!("{}", r.line());
            }
            let pass = results.iter().all(|r| r.pass);
            println!(
                "{}",
                to_canonical_string(&suite_json(&results))
            );
            Ok(if pass { 0 } else { 2 })
        }
    }
}

fn parse_line_map(s: &str) -> Result<LineMap, String> {
    if let Some(n) = s.strip_prefix("pow:") {
        let n: i64 = n.trim().parse().map_err(|e| format!("bad power: {e}"))?;
        return Ok(LineMap::Power { n });
    }
    if let Some(rest) = s.strip_prefix("mobius:") {
        let parts = parse_scalars(rest)?;
        if parts.len() != 4 {
            return Err("mobius map needs four coefficients a,b,c,d".to_string());
        }
        let mk = |s: &ExactScalar| logbar::exact::ExactComplex::new(s.clone(), ExactScalar::zero());
        return Ok(LineMap::Mobius {
            a: mk(&parts[0]),
            b: mk(&parts[1]),
            c: mk(&parts[2]),
            d: mk(&parts[3]),
        });
    }
    Err(format!("unrecognized map '{s}' (expected pow:n or mobius:a,b,c,d)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap help/version are successes; everything else is usage.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(n) = std::env::var("LOGBAR_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
