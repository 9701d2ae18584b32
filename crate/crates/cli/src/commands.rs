use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use privacy_funnel::ingest::IssueKind;
use privacy_funnel::{
    compose, entropy, envelope_gap, exact_region, greedy_bottleneck, greedy_funnel, inference_gain,
    mutual_information, sweep_bottleneck, sweep_funnel, verify_gain_bound, ErrorProbability,
    GreedyOutcome, LogLoss, TradeoffCurve,
};
use serde_json::{json, Value};

use crate::level::{Grid, Level};
use crate::output::{format_channel, g12, partition_cell, read_channel};
use crate::source::{JointSource, Loaded};
use crate::{Failure, Which};

/// Slack allowed between cached and recomputed information values.
const CONSISTENCY_TOL: f64 = 1e-9;
/// Slack allowed on the inference-bound inequalities.
const BOUND_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub enum Algorithm {
    Funnel,
    Bottleneck,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Funnel => "funnel",
            Algorithm::Bottleneck => "bottleneck",
        }
    }
}

fn write(out: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(name), contents)?;
    Ok(())
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn manifest(
    out: &Path,
    command: &str,
    source: &JointSource,
    loaded: &Loaded,
    parameters: Value,
    outputs: &[&str],
    started: Instant,
) -> Result<(), Failure> {
    let m = json!({
        "command": command,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "input_digest": loaded.digest,
        "source": source.describe(),
        "parameters": parameters,
        "outputs": outputs,
        "duration_seconds": started.elapsed().as_secs_f64(),
    });
    write(out, &format!("{command}.manifest.json"), &to_json(&m))
}

fn check_outcome(outcome: &GreedyOutcome<f64>) -> Result<(), Failure> {
    let (isy, ixy) = outcome.state.recompute();
    if (isy - outcome.isy()).abs() > CONSISTENCY_TOL
        || (ixy - outcome.ixy()).abs() > CONSISTENCY_TOL
    {
        return Err(Failure::invariant(format!(
            "incremental values I(S;Y) = {}, I(X;Y) = {} disagree with recomputed {isy}, {ixy}",
            outcome.isy(),
            outcome.ixy()
        )));
    }
    for step in &outcome.trace {
        if step.isy > step.ixy + CONSISTENCY_TOL
            || step.delta_s < -CONSISTENCY_TOL
            || step.delta_x < -CONSISTENCY_TOL
        {
            return Err(Failure::invariant(format!(
                "merge of {} into {} broke the data-processing order",
                step.absorbed, step.kept
            )));
        }
    }
    Ok(())
}

pub fn greedy(
    algorithm: Algorithm,
    source: &JointSource,
    level: Level,
    out: &Path,
) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = source.load()?;
    let joint = &loaded.data.joint;
    let hx = entropy(&joint.col_marginal());
    let isx = mutual_information(joint);
    let (value, outcome) = match algorithm {
        Algorithm::Funnel => {
            let r = level.resolve(hx);
            (r, greedy_funnel(joint, r)?)
        }
        Algorithm::Bottleneck => {
            let d = level.resolve(isx);
            (d, greedy_bottleneck(joint, d)?)
        }
    };
    check_outcome(&outcome)?;
    let (sy, _) = compose(joint, &outcome.channel)?;
    let logloss = inference_gain(&LogLoss::default(), &sy)?;

    let name = algorithm.name();
    let partition = outcome.partition();
    let report = json!({
        "algorithm": name,
        "constraint": level.to_string(),
        "constraint_bits": value,
        "hx_bits": hx,
        "isx_bits": isx,
        "ixy_bits": outcome.ixy(),
        "isy_bits": outcome.isy(),
        "logloss_delta_c_bits": logloss.delta_c,
        "outputs": partition.num_blocks(),
        "merges": outcome.trace.len(),
        "partition": partition_cell(&partition),
    });

    let mut trace = String::from("step,kept,absorbed,delta_S,delta_X,ISY,IXY\n");
    for (k, t) in outcome.trace.iter().enumerate() {
        writeln!(
            trace,
            "{},{},{},{},{},{},{}",
            k + 1,
            t.kept,
            t.absorbed,
            g12(t.delta_s),
            g12(t.delta_x),
            g12(t.isy),
            g12(t.ixy)
        )
        .unwrap();
    }

    let files = [
        format!("{name}.channel"),
        format!("{name}.json"),
        format!("{name}_trace.csv"),
    ];
    write(out, &files[0], &format_channel(&outcome.channel, joint))?;
    write(out, &files[1], &to_json(&report))?;
    write(out, &files[2], &trace)?;

    println!(
        "{name}: {} -> {} output symbols after {} merges",
        joint.cols(),
        partition.num_blocks(),
        outcome.trace.len()
    );
    println!("constraint (bits)  {value}");
    println!("I(X;Y) (bits)      {}", outcome.ixy());
    println!("I(S;Y) (bits)      {}", outcome.isy());
    println!("log-loss gain      {}", logloss.delta_c);

    let key = match algorithm {
        Algorithm::Funnel => "R",
        Algorithm::Bottleneck => "delta",
    };
    let files: Vec<&str> = files.iter().map(String::as_str).collect();
    manifest(
        out,
        name,
        source,
        &loaded,
        json!({ key: level.to_string(), "bits": value }),
        &files,
        started,
    )
}

fn curve_csv(curve: &TradeoffCurve<f64>) -> String {
    let mut s = String::from("constraint,IXY,ISY\n");
    for p in curve.iter() {
        let c = p.constraint.map_or_else(String::new, g12);
        writeln!(s, "{c},{},{}", g12(p.ixy), g12(p.isy)).unwrap();
    }
    s
}

pub fn sweep(source: &JointSource, grid: &Grid, which: Which, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = source.load()?;
    let joint = &loaded.data.joint;
    let hx = entropy(&joint.col_marginal());
    let isx = mutual_information(joint);

    let mut files = Vec::new();
    let mut params =
        json!({ "grid": grid.to_string(), "which": format!("{which:?}").to_lowercase() });

    let funnel_grid = grid.resolve(hx);
    let bottleneck_grid: Vec<f64> = match which {
        // One disclosure grid drives both curves; retention levels are
        // its image under H(X) -> I(S;X).
        Which::Both if hx > 0.0 => funnel_grid.iter().map(|r| r / hx * isx).collect(),
        Which::Both => vec![0.0; funnel_grid.len()],
        _ => grid.resolve(isx),
    };

    let funnel = match which {
        Which::Funnel | Which::Both => {
            let curve = sweep_funnel(joint, &funnel_grid)?;
            write(out, "sweep_funnel.csv", &curve_csv(&curve))?;
            files.push("sweep_funnel.csv");
            params["funnel_bits"] = json!(funnel_grid);
            Some(curve)
        }
        Which::Bottleneck => None,
    };
    let bottleneck = match which {
        Which::Bottleneck | Which::Both => {
            let curve = sweep_bottleneck(joint, &bottleneck_grid)?;
            write(out, "sweep_bottleneck.csv", &curve_csv(&curve))?;
            files.push("sweep_bottleneck.csv");
            params["bottleneck_bits"] = json!(bottleneck_grid);
            Some(curve)
        }
        Which::Funnel => None,
    };

    println!("H(X) = {hx} bits, I(S;X) = {isx} bits");
    if let Some(c) = &funnel {
        println!("funnel: {} points", c.len());
    }
    if let Some(c) = &bottleneck {
        println!("bottleneck: {} points", c.len());
    }
    if let (Some(lower), Some(upper)) = (&funnel, &bottleneck) {
        let gaps = envelope_gap(lower, upper);
        let mut s = String::from("IXY,funnel_ISY,bottleneck_ISY,gap\n");
        for g in &gaps {
            writeln!(
                s,
                "{},{},{},{}",
                g12(g.ixy),
                g12(g.lower_isy),
                g12(g.upper_isy),
                g12(g.gap)
            )
            .unwrap();
        }
        write(out, "sweep_gap.csv", &s)?;
        files.push("sweep_gap.csv");
        let max = gaps.iter().map(|g| g.gap).fold(f64::NEG_INFINITY, f64::max);
        let min = gaps.iter().map(|g| g.gap).fold(f64::INFINITY, f64::min);
        println!("gap between curves: min {min}, max {max}");
    }
    manifest(out, "sweep", source, &loaded, params, &files, started)
}

pub fn region(source: &JointSource, cap: usize, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = source.load()?;
    let points = exact_region(&loaded.data.joint, cap)?;
    let mut s = String::from("IXY,ISY,partition\n");
    for p in &points {
        writeln!(
            s,
            "{},{},{}",
            g12(p.ixy),
            g12(p.isy),
            partition_cell(&p.partition)
        )
        .unwrap();
    }
    write(out, "region.csv", &s)?;
    println!("{} deterministic mappings", points.len());
    manifest(
        out,
        "region",
        source,
        &loaded,
        json!({ "cap": cap }),
        &["region.csv"],
        started,
    )
}

pub fn check_bounds(source: &JointSource, channel: &Path, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = source.load()?;
    let channel_matrix = read_channel(channel)?;
    let (sy, _) = compose(&loaded.data.joint, &channel_matrix)?;
    let logloss = inference_gain(&LogLoss::default(), &sy)?;
    let check = verify_gain_bound(&ErrorProbability, &sy)?;
    let r = &check.report;

    let mut violations = Vec::new();
    if (logloss.delta_c - logloss.isy_bits).abs() > BOUND_TOL {
        violations.push(format!(
            "log-loss gain {} differs from I(S;Y) {}",
            logloss.delta_c, logloss.isy_bits
        ));
    }
    if check.delta_c > check.bound + BOUND_TOL {
        violations.push(format!(
            "gain {} exceeds bound {}",
            check.delta_c, check.bound
        ));
    }
    for b in r.local_bounds.iter().filter(|b| b.margin < -BOUND_TOL) {
        violations.push(format!(
            "symbol {}: gain {} exceeds bound {}",
            b.y, b.gain, b.bound
        ));
    }

    let report = json!({
        "isy_bits": r.isy_bits,
        "isy_nats": r.isy_nats,
        "logloss_delta_c_bits": logloss.delta_c,
        "error_delta_c": check.delta_c,
        "error_c0_star": r.c0_star,
        "bound_L1": check.bound,
        "worst_local_margin": check.worst_local_margin,
        "local": r.local_bounds.iter().map(|b| json!({
            "y": b.y,
            "mass": b.mass,
            "gain": b.gain,
            "divergence_nats": b.divergence_nats,
            "bound": b.bound,
            "margin": b.margin,
        })).collect::<Vec<_>>(),
        "violations": violations,
    });
    write(out, "check-bounds.json", &to_json(&report))?;

    println!("I(S;Y) (bits)                  {}", r.isy_bits);
    println!("I(S;Y) (nats)                  {}", r.isy_nats);
    println!("log-loss gain (bits)           {}", logloss.delta_c);
    println!("error-probability gain         {}", check.delta_c);
    println!("bound 2*sqrt(2)*sqrt(I), L = 1 {}", check.bound);
    println!(
        "worst per-symbol margin        {}",
        check.worst_local_margin
    );

    manifest(
        out,
        "check-bounds",
        source,
        &loaded,
        json!({ "channel": channel }),
        &["check-bounds.json"],
        started,
    )?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::invariant(violations.join("; ")))
    }
}

pub fn ingest(source: &JointSource, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = source.load()?;
    let d = &loaded.data;
    write(out, "joint.txt", &loaded.serialized)?;
    let mut dropped = String::from("line,issue\n");
    for issue in &d.issues {
        let what = match &issue.kind {
            IssueKind::Missing { column } => format!("missing {column}"),
            IssueKind::Unparsable { reason } => reason.clone(),
        };
        writeln!(dropped, "{},\"{}\"", issue.line, what.replace('"', "\"\"")).unwrap();
    }
    write(out, "dropped_rows.csv", &dropped)?;
    println!("rows {} (dropped {})", d.rows, d.dropped);
    println!("private symbols {} of {}", d.joint.rows(), d.declared_s);
    println!("public symbols  {} of {}", d.joint.cols(), d.declared_x);
    println!("digest {}", loaded.digest);
    manifest(
        out,
        "ingest",
        source,
        &loaded,
        json!({}),
        &["joint.txt", "dropped_rows.csv"],
        started,
    )
}
