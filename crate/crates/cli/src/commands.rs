use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use jordan_info::audit::audit_real_embedding;
use jordan_info::bregman::{
    bregman_divergence, bregman_identity_trial, check_bregman_identity_suite, check_monotonicity,
    check_statistical_locality, check_sufficiency, explore_additivity_conjecture, monotonicity_trial,
    statistical_locality_trial, sufficiency_trial, BregmanGenerator,
};
use jordan_info::entropy::{fine_grained_entropy_bound, shannon_entropy, to_bits};
use jordan_info::json::value as num;
use jordan_info::multipartite::{
    additivity_trial, check_additivity_suite, check_data_processing, check_marginal_identity_suite,
    check_separoid, conditional_mutual_information, data_processing_trial, marginal_identity_trial,
    mutual_information, PartitionedState,
};
use jordan_info::nonlocality::{
    box_from_quantum, chsh_value, deterministic_boxes, maximize_quantum_chsh, max_deterministic_chsh,
    pr_box, white_noise, NoSignalingBox, StrategyFamily,
};
use jordan_info::state_space::{Affinity, CompositeLayout, Measurement, State};
use jordan_info::verdict::{SuiteConfig, TrialOutcome, PROPERTY_TOL};
use jordan_info::Algebra;

use crate::report::RunReport;
use crate::{BoxKind, Cli, Command, Common, Partitioned, SuiteProperty};

const SUITE_TRIALS: usize = 100;
const EXPLORE_TRIALS: usize = 30;

/// Reads a JSON file; parse errors keep serde's line and column.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn generator(name: &str) -> Result<BregmanGenerator> {
    Ok(name.parse::<BregmanGenerator>()?)
}

fn unit(bits: bool) -> &'static str {
    if bits {
        "bits"
    } else {
        "nats"
    }
}

fn scaled(x: f64, bits: bool) -> Value {
    num(if bits { to_bits(x) } else { x })
}

pub fn run(cli: Cli) -> Result<RunReport> {
    let c = cli.common;
    match cli.command {
        Command::Entropy {
            state,
            samples,
            measurement,
        } => entropy(&c, &state, samples, measurement.as_deref()),
        Command::Divergence {
            rho,
            sigma,
            generator,
            channel,
        } => divergence(&c, &rho, &sigma, &generator, channel.as_deref()),
        Command::Mi { input, a, b, generator } => mi(&c, &input, &a, &b, &generator),
        Command::Cmi {
            input,
            a,
            b,
            c: cond,
            generator,
        } => cmi(&c, &input, &a, &b, &cond, &generator),
        Command::Suite {
            property,
            generator,
            algebra,
            replay,
        } => suite(&c, property, &generator, &algebra, replay),
        Command::Explore { generators, layout } => explore(&c, generators, &layout),
        Command::Chsh {
            kind,
            box_file,
            restarts,
        } => chsh(&c, kind, box_file.as_deref(), restarts),
        Command::AuditExample1 { samples } => {
            let audit = audit_real_embedding(samples, c.seed)?;
            Ok(RunReport::new(
                "audit-example1",
                json!({"seed": c.seed, "samples": samples}),
                serde_json::to_value(audit)?,
            ))
        }
    }
}

fn entropy(c: &Common, path: &Path, samples: usize, measurement: Option<&Path>) -> Result<RunReport> {
    let state: State = read_json(path)?;
    let report = fine_grained_entropy_bound(&state, samples, c.seed)?;
    let report = if c.bits { report.in_bits() } else { report };
    let mut results = serde_json::to_value(&report)?;
    if let Some(m) = measurement {
        let m: Measurement = read_json(m)?;
        let p = m.measure(&state)?;
        results["measurement"] = json!({
            "probabilities": p,
            "entropy": scaled(shannon_entropy(&p)?, c.bits),
        });
    }
    results["unit"] = json!(unit(c.bits));
    let config = json!({
        "state": path,
        "samples": samples,
        "measurement": measurement,
        "seed": c.seed,
        "bits": c.bits,
    });
    Ok(RunReport::new("entropy", config, results))
}

fn divergence(c: &Common, rho: &Path, sigma: &Path, name: &str, channel: Option<&Path>) -> Result<RunReport> {
    let f = generator(name)?;
    let (r, s): (State, State) = (read_json(rho)?, read_json(sigma)?);
    let d = bregman_divergence(&f, &r, &s)?;
    let mut results = json!({"generator": f.to_string(), "value": scaled(d, c.bits), "unit": unit(c.bits)});
    if let Some(path) = channel {
        let phi: Affinity = read_json(path)?;
        let after = bregman_divergence(&f, &phi.apply_state(&r)?, &phi.apply_state(&s)?)?;
        results["after_channel"] = scaled(after, c.bits);
        results["gap"] = scaled(after - d, c.bits);
    }
    let config = json!({
        "rho": rho,
        "sigma": sigma,
        "generator": f.to_string(),
        "channel": channel,
        "bits": c.bits,
    });
    Ok(RunReport::new("divergence", config, results))
}

fn partitioned(input: &Partitioned) -> Result<PartitionedState> {
    match &input.layout {
        Some(layout) => {
            let layout: CompositeLayout = layout.parse()?;
            let state: State = read_json(&input.state)?;
            Ok(PartitionedState::with_default_labels(layout, state)?)
        }
        None => read_json(&input.state),
    }
}

fn mi(c: &Common, input: &Partitioned, a: &str, b: &str, name: &str) -> Result<RunReport> {
    let f = generator(name)?;
    let s = partitioned(input)?;
    let i = mutual_information(&f, &s, a, b)?;
    let config = json!({
        "state": input.state,
        "layout": s.layout().to_string(),
        "a": a,
        "b": b,
        "generator": f.to_string(),
        "bits": c.bits,
    });
    let results = json!({"value": scaled(i, c.bits), "unit": unit(c.bits)});
    Ok(RunReport::new("mi", config, results))
}

fn cmi(c: &Common, input: &Partitioned, a: &str, b: &str, cond: &str, name: &str) -> Result<RunReport> {
    let f = generator(name)?;
    let s = partitioned(input)?;
    let r = conditional_mutual_information(&f, &s, a, b, cond)?;
    let config = json!({
        "state": input.state,
        "layout": s.layout().to_string(),
        "a": a,
        "b": b,
        "c": cond,
        "generator": f.to_string(),
        "bits": c.bits,
    });
    let results = json!({
        "value": r.value.map_or(Value::Null, |v| scaled(v, c.bits)),
        "components": r.components.iter().map(|x| scaled(*x, c.bits)).collect::<Vec<_>>(),
        "unit": unit(c.bits),
    });
    Ok(RunReport::new("cmi", config, results))
}

fn suite(c: &Common, property: SuiteProperty, name: &str, spec: &str, replay: Option<u64>) -> Result<RunReport> {
    let f = generator(name)?;
    let config = SuiteConfig {
        trials: c.trials.unwrap_or(SUITE_TRIALS),
        seed: c.seed,
        tol: c.tol.unwrap_or(PROPERTY_TOL),
    };
    let prop_name = property.to_possible_value().map(|v| v.get_name().to_string());
    let mut echo = json!({
        "property": prop_name,
        "generator": f.to_string(),
        "algebra": spec,
        "seed": config.seed,
        "trials": config.trials,
        "tol": config.tol,
    });
    let on_algebra = matches!(
        property,
        SuiteProperty::Mono | SuiteProperty::Suff | SuiteProperty::Local | SuiteProperty::Identity
    );
    if let Some(seed) = replay {
        echo["replay"] = json!(seed);
        let outcome = replay_trial(&f, property, spec, seed)?;
        let results = json!({"seed": seed, "violation": num(outcome.violation), "detail": outcome.detail});
        return Ok(RunReport::new("suite", echo, results).with_pass(outcome.violation <= config.tol));
    }
    let (results, pass) = if on_algebra {
        let algebra: Algebra = spec.parse()?;
        let v = match property {
            SuiteProperty::Mono => check_monotonicity(&f, &algebra, &config)?,
            SuiteProperty::Suff => check_sufficiency(&f, &algebra, &config)?,
            SuiteProperty::Local => check_statistical_locality(&f, &algebra, &config)?,
            _ => check_bregman_identity_suite(&f, &algebra, &config)?,
        };
        (serde_json::to_value(&v)?, v.pass)
    } else {
        let layout: CompositeLayout = spec.parse()?;
        match property {
            SuiteProperty::Additivity => {
                let v = check_additivity_suite(&f, &layout, &config)?;
                (serde_json::to_value(&v)?, v.pass)
            }
            SuiteProperty::Marginal => {
                let v = check_marginal_identity_suite(&f, &layout, &config)?;
                (serde_json::to_value(&v)?, v.pass)
            }
            SuiteProperty::Dpi => {
                let v = check_data_processing(&f, &layout, None, &config)?;
                (serde_json::to_value(&v)?, v.pass)
            }
            _ => {
                // C2x4 is run as C2x2x2: same composite, more factors
                let layout = if layout.len() < 3 { layout.refine() } else { layout };
                let r = check_separoid(&f, &layout, &config)?;
                let mut out = serde_json::to_value(&r)?;
                out["layout"] = json!(layout.to_string());
                (out, r.pass())
            }
        }
    };
    Ok(RunReport::new("suite", echo, results).with_pass(pass))
}

fn replay_trial(f: &BregmanGenerator, property: SuiteProperty, spec: &str, seed: u64) -> Result<TrialOutcome> {
    let algebra = || spec.parse::<Algebra>();
    let layout = || spec.parse::<CompositeLayout>();
    Ok(match property {
        SuiteProperty::Mono => monotonicity_trial(f, &algebra()?, seed)?,
        SuiteProperty::Suff => sufficiency_trial(f, &algebra()?, seed)?,
        SuiteProperty::Local => statistical_locality_trial(f, &algebra()?, seed)?,
        SuiteProperty::Identity => bregman_identity_trial(f, &algebra()?, seed)?,
        SuiteProperty::Additivity => additivity_trial(f, &layout()?, seed)?,
        SuiteProperty::Marginal => marginal_identity_trial(f, &layout()?, seed)?,
        SuiteProperty::Dpi => data_processing_trial(f, &layout()?, None, seed)?,
        SuiteProperty::Separoid => bail!("--replay is not available for the separoid suite"),
    })
}

fn explore(c: &Common, generators: usize, layout: &str) -> Result<RunReport> {
    let layout: CompositeLayout = layout.parse()?;
    let config = SuiteConfig {
        trials: c.trials.unwrap_or(EXPLORE_TRIALS),
        seed: c.seed,
        tol: c.tol.unwrap_or(PROPERTY_TOL),
    };
    let report = explore_additivity_conjecture(generators, &layout, &config)?;
    let pass = report.counterexamples.is_empty();
    let echo = json!({
        "generators": generators,
        "layout": layout.to_string(),
        "seed": config.seed,
        "trials": config.trials,
        "tol": config.tol,
    });
    Ok(RunReport::new("explore", echo, serde_json::to_value(&report)?).with_pass(pass))
}

fn box_results(b: &NoSignalingBox) -> Value {
    json!({
        "chsh": chsh_value(b),
        "box": b,
        "signaling_residual": b.signaling_residual(),
        "normalization_residual": b.normalization_residual(),
    })
}

fn chsh(c: &Common, kind: Option<BoxKind>, file: Option<&Path>, restarts: usize) -> Result<RunReport> {
    let mut echo = json!({"seed": c.seed});
    let results = match (kind, file) {
        (_, Some(path)) => {
            echo["box_file"] = json!(path);
            let b: NoSignalingBox = read_json(path)?;
            box_results(&b)
        }
        (Some(BoxKind::Pr), None) => box_results(&pr_box()),
        (Some(BoxKind::White), None) => box_results(&white_noise()),
        (Some(BoxKind::Deterministic), None) => {
            let values: Vec<f64> = deterministic_boxes().iter().map(chsh_value).collect();
            json!({"chsh": max_deterministic_chsh(), "values": values})
        }
        (Some(BoxKind::QuantumOpt), None) => {
            echo["restarts"] = json!(restarts);
            let opt = maximize_quantum_chsh(c.seed, restarts, StrategyFamily::MaximallyEntangled)?;
            let b = box_from_quantum(&opt.strategy)?;
            let mut out = box_results(&b);
            out["chsh"] = json!(opt.value);
            out["alice_angles"] = json!(opt.strategy.alice_angles);
            out["bob_angles"] = json!(opt.strategy.bob_angles);
            out
        }
        (None, None) => bail!("one of --box or --box-file is required"),
    };
    if let Some(k) = kind {
        echo["box"] = json!(k.to_possible_value().map(|v| v.get_name().to_string()));
    }
    Ok(RunReport::new("chsh", echo, results))
}
