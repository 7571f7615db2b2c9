use std::fs;
use std::path::Path;

use degree_core::bounds::{
    check_composition_bound, check_max_fiber_lemma, compare_bounds, sweep_composition_bound_all,
    sweep_endofunction_chain, sweep_max_fiber_lemma, BoundReport, SweepSummary,
};
use degree_core::closed_form::{expected_degree_chain, expected_degree_q};
use degree_core::combinatorics::{
    stirling1_signed, stirling1_unsigned, stirling2, stirling_transform,
};
use degree_core::format::parse_function;
use degree_core::montecarlo::{
    estimate_expected_degree_chain, estimate_max_fiber_mean, EstimateReport, SamplerConfig,
};
use degree_core::oracle::{
    identity_en_check, verify_chain, verify_corollary, verify_degree_q, EnumerationBudget,
    VerificationReport,
};
use degree_core::{ChainSpec, FiniteFunction};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{rational_json, rational_text, Output};
use crate::{
    BoundsArgs, Command, DegArgs, OracleArgs, OutputArgs, SamplerArgs, SimulateCommand,
    StirlingArgs, StirlingKind, VerifyCommand,
};

type CommandResult = Result<Output, String>;

pub(crate) fn dispatch(command: Command) -> (CommandResult, OutputArgs) {
    match command {
        Command::Deg(args) => {
            let out = args.output.clone();
            (deg(&args), out)
        }
        Command::Expected(args) => (expected(&args.sizes, &args.output), args.output),
        Command::ExpectedQ(args) => (
            expected_q(args.n, args.m, args.q, &args.output),
            args.output,
        ),
        Command::Verify(cmd) => match cmd {
            VerifyCommand::Chain {
                sizes,
                oracle,
                output,
            } => {
                let result = budget(&oracle).and_then(|b| {
                    let reports =
                        verify_chain(&sizes, &b, oracle.threads).map_err(|e| e.to_string())?;
                    let mut out = Output::new("verify chain");
                    out.param("sizes", sizes.sizes())
                        .param("budget", oracle.budget);
                    Ok(verification(out, &reports, &output))
                });
                (result, output)
            }
            VerifyCommand::Degq {
                n,
                m,
                qmax,
                oracle,
                output,
            } => {
                let result = budget(&oracle).and_then(|b| {
                    let reports = verify_degree_q(n, m, qmax, &b).map_err(|e| e.to_string())?;
                    let mut out = Output::new("verify degq");
                    out.param("n", n)
                        .param("m", m)
                        .param("qmax", qmax)
                        .param("budget", oracle.budget);
                    Ok(verification(out, &reports, &output))
                });
                (result, output)
            }
            VerifyCommand::En { m, parts, output } => {
                let result =
                    identity_en_check(m, &parts)
                        .map_err(|e| e.to_string())
                        .map(|report| {
                            let mut out = Output::new("verify en");
                            out.param("m", m).param("parts", &parts);
                            verification(out, &[report], &output)
                        });
                (result, output)
            }
            VerifyCommand::Corollary {
                qmax,
                nmax,
                main_qmax,
                oracle,
                output,
            } => {
                let result = budget(&oracle).and_then(|b| {
                    let reports =
                        verify_corollary(qmax, nmax, main_qmax, &b).map_err(|e| e.to_string())?;
                    let mut out = Output::new("verify corollary");
                    out.param("qmax", qmax)
                        .param("nmax", nmax)
                        .param("main_qmax", main_qmax)
                        .param("budget", oracle.budget);
                    Ok(verification(out, &reports, &output))
                });
                (result, output)
            }
        },
        Command::Stirling(args) => {
            let out = args.output.clone();
            (stirling(&args), out)
        }
        Command::Bounds(args) => {
            let out = args.output.clone();
            (bounds(&args), out)
        }
        Command::Simulate(cmd) => match cmd {
            SimulateCommand::Chain {
                sizes,
                sampler,
                output,
            } => {
                let result = sampler_config(&sampler).and_then(|config| {
                    let report = estimate_expected_degree_chain(&sizes, &config)
                        .map_err(|e| e.to_string())?;
                    let mut out = Output::new("simulate chain");
                    out.param("sizes", sizes.sizes());
                    Ok(estimate(out, &report, &sampler, &output))
                });
                (result, output)
            }
            SimulateCommand::Maxfiber { n, sampler, output } => {
                let result = sampler_config(&sampler).and_then(|config| {
                    let report = estimate_max_fiber_mean(n, &config).map_err(|e| e.to_string())?;
                    let mut out = Output::new("simulate maxfiber");
                    out.param("n", n);
                    Ok(estimate(out, &report, &sampler, &output))
                });
                (result, output)
            }
        },
    }
}

fn read_function(path: &Path) -> Result<FiniteFunction, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_function(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn budget(args: &OracleArgs) -> Result<EnumerationBudget, String> {
    EnumerationBudget::new(args.budget).map_err(|e| e.to_string())
}

fn sampler_config(args: &SamplerArgs) -> Result<SamplerConfig, String> {
    Ok(SamplerConfig::new(args.seed, args.samples)
        .map_err(|e| e.to_string())?
        .with_threads(args.threads))
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn deg(args: &DegArgs) -> CommandResult {
    let f = read_function(&args.file)?;
    let dec = args.output.decimals;
    let mut out = Output::new("deg");
    out.param("file", args.file.display().to_string())
        .param("q", &args.q);

    let fibers = f.fiber_sizes();
    let degree = f.degree();
    out.line(format!("domain {}", f.domain_size()));
    out.line(format!("codomain {}", f.codomain_size()));
    out.line(format!("fibers {}", joined(&fibers)));
    out.line(format!("degree {}", rational_text(&degree, dec)));
    out.line(format!("max_fiber {}", f.max_fiber()));
    let mut generalized = Vec::new();
    for &q in &args.q {
        let value = f.degree_q(q).map_err(|e| e.to_string())?;
        out.line(format!("degree_q {q} {}", rational_text(&value, dec)));
        generalized.push(json!({"q": q, "value": rational_json(&value, dec)}));
    }
    out.result(json!({
        "domain": f.domain_size(),
        "codomain": f.codomain_size(),
        "fibers": fibers,
        "degree": rational_json(&degree, dec),
        "max_fiber": f.max_fiber(),
        "degree_q": generalized,
    }));
    Ok(out)
}

fn expected(sizes: &ChainSpec, output: &OutputArgs) -> CommandResult {
    let value = expected_degree_chain(sizes);
    let mut out = Output::new("expected");
    out.param("sizes", sizes.sizes());
    out.line(rational_text(&value, output.decimals));
    out.result(rational_json(&value, output.decimals));
    Ok(out)
}

fn expected_q(n: usize, m: usize, q: u32, output: &OutputArgs) -> CommandResult {
    let value = expected_degree_q(n, m, q).map_err(|e| e.to_string())?;
    let mut out = Output::new("expected-q");
    out.param("n", n).param("m", m).param("q", q);
    out.line(rational_text(&value, output.decimals));
    out.result(rational_json(&value, output.decimals));
    Ok(out)
}

fn verification(mut out: Output, reports: &[VerificationReport], output: &OutputArgs) -> Output {
    out.line("check\tparameters\toracle\tclosed\tmatch");
    for report in reports {
        let params: Vec<String> = report
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.line(format!(
            "{}\t{}\t{}\t{}\t{}",
            report.check,
            params.join(","),
            rational_text(&report.oracle_value, output.decimals),
            rational_text(&report.closed_value, output.decimals),
            report.matches
        ));
        out.result(serde_json::to_value(report).expect("report serializes"));
    }
    out.set_all_match(reports.iter().all(|r| r.matches));
    out
}

fn stirling(args: &StirlingArgs) -> CommandResult {
    let kind_name = match args.kind {
        StirlingKind::Second => "second",
        StirlingKind::First => "first",
        StirlingKind::Signed => "signed",
    };
    let mut out = Output::new("stirling");
    if let Some(sequence) = &args.transform {
        out.param(
            "transform",
            sequence.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        );
        let transformed = stirling_transform(sequence);
        out.line(joined(&transformed));
        out.result(json!(transformed
            .iter()
            .map(BigInt::to_string)
            .collect::<Vec<_>>()));
        return Ok(out);
    }
    let rows = args.rows.expect("clap requires --rows without --transform");
    out.param("kind", kind_name).param("rows", rows);
    for n in 0..=rows {
        let row: Vec<BigInt> = (0..=n as i64)
            .map(|k| match args.kind {
                StirlingKind::Second => stirling2(n, k),
                StirlingKind::First => stirling1_unsigned(n, k),
                StirlingKind::Signed => stirling1_signed(n, k),
            })
            .collect();
        out.line(joined(&row));
        out.result(json!({"n": n, "row": row.iter().map(BigInt::to_string).collect::<Vec<_>>()}));
    }
    Ok(out)
}

fn bound_json(report: &BoundReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn sweep_line(out: &mut Output, name: &str, summary: &SweepSummary) {
    out.line(format!(
        "{name}\tchecked={}\tviolations={}",
        summary.checked, summary.violations
    ));
    out.result(
        json!({"sweep": name, "checked": summary.checked, "violations": summary.violations}),
    );
}

fn bounds(args: &BoundsArgs) -> CommandResult {
    let mut out = Output::new("bounds");
    if args.exhaustive {
        let n = args.n.expect("clap requires --n with --exhaustive");
        if n == 0 {
            return Err("--n must be at least 1".into());
        }
        out.param("exhaustive", true).param("n", n);
        let composition = sweep_composition_bound_all(n).map_err(|e| e.to_string())?;
        let lemma = sweep_max_fiber_lemma(n);
        let endo = sweep_endofunction_chain(n).map_err(|e| e.to_string())?;
        sweep_line(&mut out, "composition", &composition);
        sweep_line(&mut out, "lemma", &lemma);
        sweep_line(&mut out, "endofunction-chain", &endo);
        out.set_all_match(composition.violations + lemma.violations + endo.violations == 0);
        return Ok(out);
    }

    let (f_path, g_path) = (args.f.as_ref().unwrap(), args.g.as_ref().unwrap());
    let f = read_function(f_path)?;
    let g = read_function(g_path)?;
    out.param("f", f_path.display().to_string())
        .param("g", g_path.display().to_string());
    let endo = f.domain_size() == f.codomain_size()
        && g.domain_size() == g.codomain_size()
        && f.domain_size() == g.domain_size();
    let report = if endo {
        compare_bounds(&f, &g)
    } else {
        check_composition_bound(&f, &g)
    }
    .map_err(|e| e.to_string())?;
    let lemma_f = check_max_fiber_lemma(&f);
    let lemma_g = check_max_fiber_lemma(&g);

    out.line(format!(
        "deg_composition {}",
        rational_text(&report.deg_composition, args.output.decimals)
    ));
    out.line(format!(
        "new_bound {}",
        rational_text(&report.new_bound, args.output.decimals)
    ));
    out.line(format!("new_holds {}", report.new_holds));
    if let Some((lhs, rhs)) = &report.old_bound_squared_scaled {
        out.line(format!("new_bound_squared {lhs}"));
        out.line(format!("old_bound_squared {rhs}"));
    }
    if let Some(chain) = report.chain_holds {
        out.line(format!("chain_holds {chain}"));
    }
    out.line(format!("lemma_f {lemma_f}"));
    out.line(format!("lemma_g {lemma_g}"));
    let mut value = bound_json(&report);
    value["lemma_f"] = json!(lemma_f);
    value["lemma_g"] = json!(lemma_g);
    out.result(value);
    out.set_all_match(report.new_holds && report.chain_holds != Some(false) && lemma_f && lemma_g);
    Ok(out)
}

fn estimate(
    mut out: Output,
    report: &EstimateReport,
    sampler: &SamplerArgs,
    output: &OutputArgs,
) -> Output {
    out.param("samples", sampler.samples)
        .param("seed", sampler.seed)
        .param("threads", sampler.threads);
    out.line(format!("mean {}", report.mean));
    out.line(format!("std_error {}", report.std_error));
    if let Some(closed) = &report.closed_form {
        out.line(format!(
            "closed_form {}",
            rational_text(closed, output.decimals)
        ));
    }
    if let Some(z) = report.z_score {
        out.line(format!("z_score {z}"));
    }
    if let Some(ratio) = report.log_ratio {
        out.line(format!("log_ratio {ratio}"));
    }
    out.line(format!("samples {}", report.samples));
    out.line(format!("seed {}", report.seed));
    out.result(serde_json::to_value(report).expect("report serializes"));
    out
}
