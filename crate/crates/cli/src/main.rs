//! `periph`: command-line front end for peripheral-subgroup malnormality.
//!
//! Exit status: 0 decided, 2 evidence only, 1 error.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use periph_core::census::{bundled_census, load_census, CensusTable};
use periph_core::malnormality::{
    certify, classify, decide_malnormality_with, decide_peripheral_malnormality_jsj, decision_doc,
    parse_document, probe_document, probe_malnormality, structural_form, verify_document,
    witness_document, Certificate, Document, JsjSummary, ProbeBounds, VerifyConfig,
};
use periph_core::notation::{parse_expression_lines, parse_knot_expr, KnotExpression};
use periph_core::presentation::{alexander_polynomial, present, render_presentation};

#[derive(Parser)]
#[command(
    name = "periph",
    version,
    about = "Peripheral-subgroup malnormality for knot groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Census CSV; the bundled table when absent.
    #[arg(long, global = true)]
    census: Option<PathBuf>,
    /// Quotients sampled for verification, and the probe's quotient budget.
    #[arg(long, global = true)]
    quotients: Option<usize>,
    /// Largest permutation degree searched.
    #[arg(long, global = true)]
    degree_cap: Option<usize>,
    /// Longest conjugator word the probe enumerates.
    #[arg(long, global = true)]
    g_length: Option<usize>,
    /// Largest |exponent| in probed peripheral elements.
    #[arg(long = "p-exp", global = true)]
    p_exp: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize an expression.
    Parse { input: String },
    /// Finite presentation with meridian and longitude.
    Present { input: String },
    /// Structural class: torus, cable, composite or no obstruction.
    Classify { input: String },
    /// Malnormality decision with its certificate.
    Decide { input: String },
    /// Synthesize and verify a non-malnormality witness.
    Witness { input: String },
    /// Re-verify a witness document (`-` reads stdin).
    Verify { document: String },
    /// Bounded search for conjugated peripheral elements.
    Probe { input: String },
    /// Alexander polynomial by Fox calculus.
    Alexander { input: String },
    /// Decision from a declared decomposition of the exterior.
    JsjDecide(JsjArgs),
}

#[derive(Args)]
struct JsjArgs {
    /// The boundary piece is Seifert fibred.
    #[arg(long, action = clap::ArgAction::Set, value_name = "BOOL")]
    seifert: bool,
    #[arg(long, default_value = "boundary piece")]
    piece: String,
    #[arg(long)]
    solid_torus: bool,
    #[arg(long)]
    thickened_torus: bool,
}

/// One report and its exit tier.
struct Report {
    json: Value,
    text: String,
    decided: bool,
}

impl Report {
    fn decided(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            decided: true,
        }
    }
}

impl Opts {
    fn census(&self) -> Result<CensusTable> {
        match &self.census {
            Some(p) => load_census(p).with_context(|| format!("loading census {}", p.display())),
            None => Ok(bundled_census()?),
        }
    }

    fn verify_config(&self) -> VerifyConfig {
        let d = VerifyConfig::default();
        VerifyConfig {
            quotients: self.quotients.unwrap_or(d.quotients),
            degree_cap: self.degree_cap.unwrap_or(d.degree_cap),
            seed: self.seed.unwrap_or(d.seed),
        }
    }

    fn probe_bounds(&self) -> ProbeBounds {
        let d = ProbeBounds::default();
        ProbeBounds {
            g_length: self.g_length.unwrap_or(d.g_length),
            p_exponent: self.p_exp.unwrap_or(d.p_exponent),
            quotient_budget: self.quotients.unwrap_or(d.quotient_budget),
            degree_cap: self.degree_cap.unwrap_or(d.degree_cap),
            seed: self.seed.unwrap_or(d.seed),
            ..d
        }
    }
}

/// `@path` reads one expression per line; anything else is an expression.
fn expressions(input: &str, census: &CensusTable) -> Result<(Vec<KnotExpression>, bool)> {
    match input.strip_prefix('@') {
        Some(path) => {
            let body = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let mut out = vec![];
            for (line, parsed) in parse_expression_lines(&body, Some(census)) {
                out.push(parsed.with_context(|| format!("{path}:{line}"))?);
            }
            Ok((out, true))
        }
        None => Ok((vec![parse_knot_expr(input, Some(census))?], false)),
    }
}

fn per_knot(
    input: &str,
    opts: &Opts,
    f: impl Fn(&KnotExpression, &CensusTable) -> Result<Report>,
) -> Result<Report> {
    let census = opts.census()?;
    let (ks, batch) = expressions(input, &census)?;
    let reports = ks
        .iter()
        .map(|k| f(k, &census))
        .collect::<Result<Vec<_>>>()?;
    if !batch {
        return Ok(reports.into_iter().next().expect("one expression"));
    }
    Ok(Report {
        decided: reports.iter().all(|r| r.decided),
        text: reports
            .iter()
            .map(|r| r.text.as_str())
            .collect::<Vec<_>>()
            .join("\n"),
        json: Value::Array(reports.into_iter().map(|r| r.json).collect()),
    })
}

fn document_text(d: &Document) -> String {
    let mut out = format!("knot: {}\nclass: {}\n", d.knot, d.class);
    for (key, v) in [("g", &d.g), ("p0", &d.p0), ("p1", &d.p1)] {
        if let Some(v) = v {
            out.push_str(&format!("{key}: {v}\n"));
        }
    }
    if let Some(s) = &d.annulus_slope {
        out.push_str(&format!("annulus slope: ({},{})\n", s.m, s.l));
    }
    for c in &d.checks {
        out.push_str(&format!("check {}: {} ({})\n", c.name, c.status, c.method));
    }
    if let Some(ss) = &d.survivors {
        out.push_str(&format!("survivors listed: {}\n", ss.len()));
        for s in ss {
            out.push_str(&format!("  g = {}, p0 = {}, p1 = {}\n", s.g, s.p0, s.p1));
        }
    }
    out.trim_end().to_string()
}

fn run(cli: &Cli) -> Result<Report> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Parse { input } => per_knot(input, opts, |k, _| {
            let kind = match k {
                KnotExpression::Torus { .. } => "torus",
                KnotExpression::Cable { .. } => "cable",
                KnotExpression::Sum(_) => "sum",
                KnotExpression::FromDiagram { .. } => "diagram",
            };
            Ok(Report::decided(
                json!({ "knot": k.to_string(), "kind": kind }),
                k.to_string(),
            ))
        }),
        Command::Present { input } => per_knot(input, opts, |k, census| {
            let (g, p) = present(&structural_form(k, Some(census)), Some(census))?;
            let json = json!({
                "knot": k.to_string(),
                "generators": g.generators,
                "relators": g.relators.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "mu": p.mu.to_string(),
                "lambda": p.lambda.to_string(),
                "structure": g.structure.to_string(),
                "abelianization": g.abelianization,
            });
            Ok(Report::decided(
                json,
                render_presentation(&g, &p).trim_end().to_string(),
            ))
        }),
        Command::Classify { input } => per_knot(input, opts, |k, census| {
            let class = classify(k, Some(census))?;
            let json = json!({ "knot": k.to_string(), "class": class.to_string(), "has_witness": class.has_witness() });
            Ok(Report::decided(json, format!("{k}: {class}")))
        }),
        Command::Decide { input } => per_knot(input, opts, |k, census| {
            let d = decide_malnormality_with(
                k,
                Some(census),
                &opts.verify_config(),
                &opts.probe_bounds(),
            )?;
            let doc = decision_doc(&d);
            let mut text = format!("{}: {}\n{}", d.knot, d.malnormal, d.rationale);
            if let Some(Certificate::Witness(_) | Certificate::Probe(_)) = &d.certificate {
                text.push('\n');
                text.push_str(&document_text(
                    doc.document.as_ref().expect("certificate present"),
                ));
            }
            Ok(Report {
                json: serde_json::to_value(&doc)?,
                text,
                decided: d.is_decided(),
            })
        }),
        Command::Witness { input } => per_knot(input, opts, |k, census| {
            let doc = witness_document(&certify(k, Some(census), &opts.verify_config())?);
            Ok(Report::decided(
                serde_json::to_value(&doc)?,
                document_text(&doc),
            ))
        }),
        Command::Verify { document } => {
            let text = if document == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(document).with_context(|| format!("reading {document}"))?
            };
            let doc = parse_document(&text)?;
            let census = opts.census()?;
            let report = verify_document(&doc, Some(&census), &opts.verify_config())?;
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "method": c.method.to_string(), "status": c.status.to_string() }))
                .collect();
            let json = json!({
                "knot": doc.knot,
                "verified": true,
                "checks": checks,
                "quotients_sampled": report.quotients_sampled,
            });
            let lines: Vec<String> = report
                .checks
                .iter()
                .map(|c| format!("check {}: {} ({})", c.name, c.status, c.method))
                .collect();
            Ok(Report::decided(
                json,
                format!("{}: verified\n{}", doc.knot, lines.join("\n")),
            ))
        }
        Command::Probe { input } => per_knot(input, opts, |k, census| {
            let (g, p) = present(&structural_form(k, Some(census)), Some(census))?;
            let class = classify(k, Some(census))?;
            let report = probe_malnormality(&g, &p, &opts.probe_bounds())?;
            let doc = probe_document(&k.to_string(), &class, &g, &p, &report);
            let text = format!(
                "{}\nsurvivors: {} over {} quotient(s)",
                document_text(&doc),
                report.survivor_total,
                report.quotients_used
            );
            Ok(Report::decided(serde_json::to_value(&doc)?, text))
        }),
        Command::Alexander { input } => per_knot(input, opts, |k, census| {
            let (g, _) = present(&structural_form(k, Some(census)), Some(census))?;
            let poly = alexander_polynomial(&g)?;
            Ok(Report::decided(
                json!({ "knot": k.to_string(), "alexander": poly.to_string() }),
                format!("{k}: {poly}"),
            ))
        }),
        Command::JsjDecide(a) => {
            let d = decide_peripheral_malnormality_jsj(&JsjSummary {
                boundary_piece_is_seifert: a.seifert,
                piece_description: a.piece.clone(),
                solid_torus: a.solid_torus,
                thickened_torus: a.thickened_torus,
            })?;
            let doc = decision_doc(&d);
            Ok(Report::decided(
                serde_json::to_value(&doc)?,
                format!("{}: {}\n{}", d.knot, d.malnormal, d.rationale),
            ))
        }
    }
}

fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let mut body = match cli.opts.format {
        Format::Json => serde_json::to_string_pretty(&r.json)?,
        Format::Text => r.text.clone(),
    };
    body.push('\n');
    match &cli.opts.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // clap's own usage status (2) would read as "evidence only"
            return if usage {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|r| {
        emit(&cli, &r)?;
        Ok(r.decided)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
