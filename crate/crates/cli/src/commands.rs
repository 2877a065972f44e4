use std::fs;
use std::io::BufReader;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use blind_tmbqc::decoder::{Decoder, LogicalSurface};
use blind_tmbqc::experiments::{
    crossing_point, csv_string, resolve_workers, run_sweep_with_workers, write_report, SweepConfig, SweepSummary,
};
use blind_tmbqc::gadget::{verify_all, verify_chain_equivalence_oriented, ChainOrientation, GadgetBasis};
use blind_tmbqc::lattice::{build_rhg, cz_schedule, decorate, Boundary, Coord, Lattice, LatticeDocument};
use blind_tmbqc::math::Angle8;
use blind_tmbqc::noise::{
    chain_loss_exact, closed_form_rates, distill_recursion, loss_model, simulate_chain_loss, theta_independence,
    validate_rates, DistillKind, DistillParams, NoiseParams,
};
use blind_tmbqc::protocol::blindness::{blindness_audit_classical, blindness_audit_quantum, pad_check, AnglePrior};
use blind_tmbqc::protocol::{
    run_direct_mbqc, run_protocol_trials, EntanglementPlan, MeasurementPattern, OutcomeHistogram, DIRECT_QUBIT_LIMIT,
};
use blind_tmbqc::seed::rng_for;

use crate::args::*;
use crate::output::{csv_table, Output};
use crate::Status;

pub fn run(cli: Cli) -> Result<Status> {
    let g = &cli.global;
    let workers = resolve_workers(g.workers);
    if let Some(n) = workers {
        // a second call in the same process only fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = Output::new(g.out.as_deref())?;
    match &cli.command {
        Command::Lattice(a) => lattice(a, &out),
        Command::Protocol(ProtocolCommand::Run(a)) => protocol(a, g, &out),
        Command::Gadget(GadgetCommand::Verify(a)) => gadget(a, g, &out),
        Command::Blindness(a) => blindness(a, g, &out),
        Command::Noise(cmd) => noise(cmd, g, &out),
        Command::Decode(a) => decode(a, &out),
        Command::Threshold(ThresholdCommand::Sweep(a)) => threshold(a, g, workers, &out),
        Command::Distill(a) => distill(a, g, &out),
    }
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::CheckFailed
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(f)).with_context(|| format!("parsing {}", path.display()))
}

fn lattice(a: &LatticeArgs, out: &Output) -> Result<Status> {
    let sizes = match &a.sizes {
        Some(s) => [s[0], s[1], s[2]],
        None => [a.size; 3],
    };
    let boundary = match a.boundary {
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::Open => Boundary::Open,
    };
    let mut lat = build_rhg(sizes, boundary)?;
    if a.decorate || a.schedule {
        lat = decorate(&lat)?;
    }
    let schedule = if a.schedule { Some(cz_schedule(&lat)?) } else { None };
    out.json("lattice", &lat.to_document(schedule.as_ref()))?;
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct ProtocolSummary {
    trials: u64,
    qubits: usize,
    histogram: OutcomeHistogram,
    /// Distance to the exact non-blind distribution, when small enough to compute.
    tv_distance: Option<f64>,
}

fn protocol(a: &ProtocolRunArgs, g: &Global, out: &Output) -> Result<Status> {
    let pattern = match (&a.pattern, &a.phi) {
        (Some(path), _) => read_json::<MeasurementPattern>(path)?,
        (None, Some(phi)) => MeasurementPattern::linear_chain(&phi.iter().map(|&k| Angle8::new(k)).collect::<Vec<_>>()),
        (None, None) => bail!("give --pattern <file> or --phi <angles>"),
    };
    pattern.validate()?;
    let plan = EntanglementPlan::from_graph(&pattern.graph);
    let transcripts = run_protocol_trials(&pattern, &plan, a.trials, g.seed())?;
    let outputs = pattern.output_qubits();
    let histogram = OutcomeHistogram::from_transcripts(&outputs, &transcripts);
    if out.dir().is_some() {
        let jsonl: String = transcripts.iter().map(|t| t.to_jsonl()).collect();
        out.file("transcripts.jsonl", &jsonl)?;
        let mut buf = Vec::new();
        histogram.write_csv(&mut buf)?;
        out.file("histogram.csv", &String::from_utf8(buf)?)?;
    }
    let tv_distance = if pattern.qubits() <= DIRECT_QUBIT_LIMIT {
        Some(histogram.tv_distance(&run_direct_mbqc(&pattern)?))
    } else {
        None
    };
    match g.format {
        Format::Json => {
            let summary = ProtocolSummary {
                trials: a.trials,
                qubits: pattern.qubits(),
                histogram,
                tv_distance,
            };
            out.json("protocol", &summary)?;
        }
        Format::Csv => {
            let mut buf = Vec::new();
            histogram.write_csv(&mut buf)?;
            print!("{}", String::from_utf8(buf)?);
        }
    }
    Ok(Status::Pass)
}

fn gadget(a: &GadgetVerifyArgs, g: &Global, out: &Output) -> Result<Status> {
    let orientation = match a.orientation {
        OrientationArg::HostFirst => ChainOrientation::HostFirst,
        OrientationArg::HostLast => ChainOrientation::HostLast,
    };
    let mut rng = rng_for(g.seed(), &[]);
    let reports = match (a.all, a.basis) {
        (_, Some(b)) => {
            let basis = match b {
                BasisArg::X => GadgetBasis::X,
                BasisArg::Y => GadgetBasis::Y,
                BasisArg::T => GadgetBasis::T,
                BasisArg::Z => GadgetBasis::Z,
            };
            (0..=a.max_env)
                .map(|env| verify_chain_equivalence_oriented(basis, env, orientation, &mut rng))
                .collect::<Result<Vec<_>, _>>()?
        }
        (true, None) => verify_all(a.max_env, orientation, &mut rng)?,
        (false, None) => bail!("give --all or --basis <B>"),
    };
    let pass = reports.iter().all(|r| r.passes());
    match g.format {
        Format::Json => out.json("gadget", &reports)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        format!("{:?}", r.basis),
                        r.environment.to_string(),
                        format!("{:?}", r.orientation),
                        format!("{:.3e}", r.worst_infidelity),
                        format!("{:.3e}", r.worst_probability_error),
                        if r.passes() { "pass" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            let header = [
                "basis",
                "environment",
                "orientation",
                "worst_infidelity",
                "worst_probability_error",
                "result",
            ];
            out.csv("gadget", &csv_table(&header, &rows)?)?;
        }
    }
    Ok(status(pass))
}

#[derive(Serialize)]
struct BlindnessSummary<Q, P, C> {
    pad_uniform: bool,
    pad: P,
    quantum: Q,
    classical: C,
    passes: bool,
}

fn blindness(a: &BlindnessArgs, g: &Global, out: &Output) -> Result<Status> {
    let pattern = MeasurementPattern::linear_chain(&vec![Angle8::ZERO; a.qubits]);
    let prior = match a.point {
        Some(k) => AnglePrior::point(Angle8::new(k)),
        None => AnglePrior::uniform(),
    };
    let pad = pad_check();
    let quantum = blindness_audit_quantum();
    let classical = blindness_audit_classical(&pattern, &prior, a.trials, g.seed())?;
    let passes = pad.is_uniform() && quantum.passes() && classical.passes();
    let summary = BlindnessSummary {
        pad_uniform: pad.is_uniform(),
        pad,
        quantum,
        classical,
        passes,
    };
    out.json("blindness", &summary)?;
    Ok(status(passes))
}

fn noise(cmd: &NoiseCommand, g: &Global, out: &Output) -> Result<Status> {
    match cmd {
        NoiseCommand::Rates(a) => {
            let params = NoiseParams::new(a.p_prep, a.p_meas, a.p2)?;
            out.json("rates", &closed_form_rates(&params))?;
            Ok(Status::Pass)
        }
        NoiseCommand::Validate(a) => {
            let mut rows = Vec::new();
            let mut all = Vec::new();
            let mut pass = true;
            for &p in &a.p {
                let checks = validate_rates(&NoiseParams::uniform(p)?, a.trials, g.seed())?;
                for c in &checks {
                    pass &= c.passes();
                    rows.push(vec![
                        p.to_string(),
                        c.name.to_string(),
                        format!("{:.6e}", c.formula),
                        format!("{:.6e}", c.empirical),
                        format!("{:.3e}", c.tolerance),
                        if c.passes() { "pass" } else { "FAIL" }.to_string(),
                    ]);
                }
                all.push(serde_json::json!({ "p": p, "checks": checks }));
            }
            match g.format {
                Format::Json => out.json("validate", &all)?,
                Format::Csv => {
                    let header = ["p", "rate", "formula", "empirical", "tolerance", "result"];
                    out.csv("validate", &csv_table(&header, &rows)?)?;
                }
            }
            Ok(status(pass))
        }
        NoiseCommand::Loss(a) => {
            let model = loss_model(a.ploss, a.distance)?;
            let empirical = simulate_chain_loss(a.ploss, a.trials, &mut rng_for(g.seed(), &[]))?;
            let report = serde_json::json!({
                "model": model,
                "chain_loss_exact": chain_loss_exact(a.ploss),
                "chain_loss_empirical": empirical,
                "trials": a.trials,
            });
            out.json("loss", &report)?;
            Ok(Status::Pass)
        }
        NoiseCommand::Theta(a) => {
            let report = theta_independence(&NoiseParams::uniform(a.p)?, a.trials, g.seed())?;
            let pass = report.passes();
            out.json("theta", &report)?;
            Ok(status(pass))
        }
    }
}

fn decode(a: &DecodeArgs, out: &Output) -> Result<Status> {
    let doc: LatticeDocument = read_json(&a.lattice)?;
    let lattice = Lattice::from_document(&doc)?;
    let coords: Vec<[i64; 3]> = read_json(&a.errors)?;
    let faces = coords
        .iter()
        .map(|&c| {
            lattice
                .site_index(Coord::from(c))
                .with_context(|| format!("{c:?} is not a lattice site"))
        })
        .collect::<Result<Vec<_>>>()?;
    let decoder = Decoder::new(&lattice);
    let errors = decoder.mask_from_faces(&faces)?;
    let surface = match a.axis {
        Some(ax) if ax < 3 => LogicalSurface::Axis(ax),
        Some(ax) => bail!("axis must be 0, 1 or 2, got {ax}"),
        None => LogicalSurface::Any,
    };
    out.json("decode", &decoder.decode(&errors, surface)?)?;
    Ok(Status::Pass)
}

fn threshold(a: &SweepArgs, g: &Global, workers: Option<usize>, out: &Output) -> Result<Status> {
    let mut config = match &g.config {
        Some(path) => {
            let mut c: SweepConfig = read_json(path)?;
            if let Some(s) = g.seed {
                c.seed = s;
            }
            c
        }
        None => match a.scenario {
            ScenarioArg::Bulk => SweepConfig::bulk(g.seed()),
            ScenarioArg::Prep10 => SweepConfig::prep_dominated(g.seed()),
        },
    };
    if let Some(t) = a.trials {
        config.trials = t;
    }
    let result = run_sweep_with_workers(&config, workers)?;
    let crossing = crossing_point(&result);
    let summary = SweepSummary::new(&result, crossing.as_ref());
    if let Some(dir) = out.dir() {
        write_report(dir, std::slice::from_ref(&result), std::slice::from_ref(&summary))?;
    }
    match g.format {
        Format::Csv => print!("{}", csv_string(&[result])),
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
    }
    Ok(Status::Pass)
}

fn distill(a: &DistillArgs, g: &Global, out: &Output) -> Result<Status> {
    let kind = match a.kind {
        KindArg::Y => DistillKind::Y,
        KindArg::T => DistillKind::T,
    };
    let trace = distill_recursion(DistillParams {
        kind,
        eps0: a.eps0,
        eps_top: a.eps_top,
        levels: a.levels,
    })?;
    match g.format {
        Format::Json => out.json("distill", &trace)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = trace
                .eps
                .iter()
                .enumerate()
                .map(|(i, e)| vec![i.to_string(), format!("{e:.6e}")])
                .collect();
            out.csv("distill", &csv_table(&["level", "eps"], &rows)?)?;
        }
    }
    Ok(Status::Pass)
}
