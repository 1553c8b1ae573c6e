//! Command-line driver for the Label Cover relaxation pipeline.
//!
//! Every subcommand emits a single JSON report on standard output:
//! `{"command", "instance_digest", "verdict", "artifacts"}` with an
//! optional `"timings"` block behind `--timings` (off by default so
//! identical inputs produce byte-identical reports). Exit codes: 0 for
//! Accept/Solved, 1 for Refute/None, 2 for usage or cap errors.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use lcr_core::dihedral::{gen_coset_csp, m_certificate, verify_m_certificate};
use lcr_core::instance::{lc_of_csp, CspInstance, LcInstance};
use lcr_core::json::{
    tensor_from_json, tensor_to_json, vector_solution_from_json, vector_solution_to_json,
    TensorJson, VectorSolutionJson,
};
use lcr_core::limits::Caps;
use lcr_core::oracle::{
    brute_solve_csp, brute_solve_lc, check_no_homo_v2z2_to_z8, check_no_homo_v2zp_to_zp2,
    gen_linear_system_csp,
};
use lcr_core::power::{partial_power, saturated_power};
use lcr_core::relax::{
    arc_consistency, check_tensor_solution, restrict_tensor, solve_level, solve_zn, solve_zp,
    AcStatus, Encoding,
};
use lcr_core::rounding::{carry_polynomial, decode_affine, round_to_zp2, ZnTuple};
use lcr_core::samples;
use lcr_core::vectors::extract_vectors;

#[derive(Parser)]
#[command(name = "lcr", version, about = "Label Cover relaxations over Z_p and Z_n")]
struct Cli {
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size-cap overrides as comma-separated key=value pairs; the LCR_CAPS
    /// environment variable is applied first.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Print only the primary artifact (for piping into other commands).
    #[arg(long, global = true)]
    bare: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a CSP instance into LC shape.
    Convert { input: String },
    /// Build the k-th saturated power of an LC instance (or, with
    /// --partial, the partial-solution power of a CSP instance).
    Power {
        #[arg(long)]
        k: usize,
        /// Treat the input as a CSP and build the partial-solution power.
        #[arg(long)]
        partial: bool,
        /// Emit all product constraints instead of the reduced family.
        #[arg(long)]
        full: bool,
        input: String,
    },
    /// Run a relaxation on an LC instance (or a CSP with --csp).
    Solve {
        #[arg(long, value_enum)]
        relaxation: Relaxation,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        /// Level of the saturated-power pipeline (zp only; 1 = plain).
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value_t = EncodingArg::Canonical)]
        encoding: EncodingArg,
        /// Convert the input from CSP shape first.
        #[arg(long)]
        csp: bool,
        input: String,
    },
    /// Turn a level-k tensor solution into vector solutions, one per
    /// connected component.
    ExtractVectors {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        instance: String,
        tensor: String,
    },
    /// Round component vector solutions to Z_{p^2} weights; with --csp,
    /// also decode and re-verify an assignment for linear templates.
    Round {
        #[arg(long)]
        p: u64,
        instance: String,
        vectors: String,
        #[arg(long)]
        csp: Option<String>,
    },
    /// Dihedral-group coset templates.
    D4 {
        #[command(subcommand)]
        action: D4Action,
    },
    /// Run a named battery of built-in checks.
    Verify { what: String },
    /// Brute-force ground truth.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Seeded instance generators.
    Gen {
        #[command(subcommand)]
        action: GenAction,
    },
}

#[derive(Subcommand)]
enum D4Action {
    /// Generate a random connected coset CSP over the dihedral group.
    Gen,
    /// Decide a coset CSP by the level-2 Z_2 relaxation and certify
    /// feasible instances.
    Certify { input: String },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Exhaustive search for a solution.
    Solve {
        /// Treat the input as an LC instance instead of a CSP.
        #[arg(long)]
        lc: bool,
        input: String,
    },
}

#[derive(Subcommand)]
enum GenAction {
    /// Random system of linear equations over Z_n as a CSP.
    Linear {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        eqs: usize,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Relaxation {
    Ac,
    Zp,
    Zn,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Direct,
    Canonical,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Direct => Encoding::Direct,
            EncodingArg::Canonical => Encoding::Canonical,
        }
    }
}

#[derive(Args)]
struct NoArgs {}

struct Outcome {
    verdict: &'static str,
    instance_digest: Option<String>,
    artifacts: Value,
    /// What --bare prints.
    bare: Value,
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    instance_digest: Option<String>,
    verdict: String,
    artifacts: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Value>,
}

fn digest_of<T: Serialize>(value: &T) -> String {
    let canonical = serde_json::to_string(value).expect("serializable");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
}

fn read_csp(path: &str) -> Result<CspInstance, String> {
    let mut csp: CspInstance = read_json(path)?;
    csp.normalize().map_err(|e| e.to_string())?;
    Ok(csp)
}

fn read_lc(path: &str) -> Result<LcInstance, String> {
    let lc: LcInstance = read_json(path)?;
    lc.validate().map_err(|e| e.to_string())?;
    Ok(lc)
}

fn load_caps(flag: &Option<String>) -> Result<Caps, String> {
    let mut caps = Caps::default();
    if let Ok(env) = std::env::var("LCR_CAPS") {
        caps.apply_overrides(&env).map_err(|e| format!("LCR_CAPS: {e}"))?;
    }
    if let Some(flag) = flag {
        caps.apply_overrides(flag).map_err(|e| format!("--caps: {e}"))?;
    }
    Ok(caps)
}

#[derive(Serialize, Deserialize)]
struct ComponentEntry {
    variables: Vec<String>,
    solution: VectorSolutionJson,
}

#[derive(Serialize, Deserialize)]
struct ComponentSolutions {
    components: Vec<ComponentEntry>,
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let caps = load_caps(&cli.caps)?;
    match &cli.command {
        Command::Convert { input } => {
            let csp = read_csp(input)?;
            let lc = lc_of_csp(&csp);
            let bare = serde_json::to_value(&lc).unwrap();
            Ok(Outcome {
                verdict: "Solved",
                instance_digest: Some(digest_of(&csp)),
                artifacts: json!({ "instance": bare }),
                bare,
            })
        }
        Command::Power { k, partial, full, input } => {
            if *partial {
                let csp = read_csp(input)?;
                let (lc, meta) = partial_power(&csp, *k, &caps).map_err(|e| e.to_string())?;
                let bare = serde_json::to_value(&lc).unwrap();
                Ok(Outcome {
                    verdict: "Solved",
                    instance_digest: Some(digest_of(&csp)),
                    artifacts: json!({
                        "instance": bare,
                        "meta": { "k": k, "subsets": meta.subsets },
                    }),
                    bare,
                })
            } else {
                let lc = read_lc(input)?;
                let (power, meta) =
                    saturated_power(&lc, *k, !*full, &caps).map_err(|e| e.to_string())?;
                let tuples: Vec<Vec<usize>> = (0..meta.power_vars(u64::MAX).unwrap())
                    .map(|i| meta.var_tuple(i))
                    .collect();
                let names: Vec<&str> =
                    lc.variables.iter().map(|v| v.name.as_str()).collect();
                let bare = serde_json::to_value(&power).unwrap();
                Ok(Outcome {
                    verdict: "Solved",
                    instance_digest: Some(digest_of(&lc)),
                    artifacts: json!({
                        "instance": bare,
                        "meta": {
                            "k": k,
                            "base_variables": names,
                            "variable_tuples": tuples,
                        },
                    }),
                    bare,
                })
            }
        }
        Command::Solve { relaxation, p, n, level, encoding, csp, input } => {
            let lc = if *csp { lc_of_csp(&read_csp(input)?) } else { read_lc(input)? };
            let digest = Some(digest_of(&lc));
            match relaxation {
                Relaxation::Ac => {
                    let ac = arc_consistency(&lc);
                    let accepted = ac.status == AcStatus::NonEmpty;
                    let artifacts = json!({
                        "status": if accepted { "NonEmpty" } else { "Emptied" },
                        "domains": ac.domains,
                    });
                    Ok(Outcome {
                        verdict: if accepted { "Accept" } else { "Refute" },
                        instance_digest: digest,
                        bare: artifacts.clone(),
                        artifacts,
                    })
                }
                Relaxation::Zp => {
                    let p = p.ok_or("--p is required for the zp relaxation")?;
                    let level = level.unwrap_or(1);
                    if level <= 1 {
                        match solve_zp(&lc, p, &caps).map_err(|e| e.to_string())? {
                            Some(sol) => {
                                if !sol.verify(&lc).map_err(|e| e.to_string())? {
                                    return Err("internal: solution fails verification".into());
                                }
                                let artifacts = json!({ "p": p, "values": sol.values });
                                Ok(Outcome {
                                    verdict: "Accept",
                                    instance_digest: digest,
                                    bare: artifacts.clone(),
                                    artifacts,
                                })
                            }
                            None => Ok(Outcome {
                                verdict: "Refute",
                                instance_digest: digest,
                                artifacts: json!({}),
                                bare: json!(null),
                            }),
                        }
                    } else {
                        match solve_level(&lc, p, level, (*encoding).into(), &caps)
                            .map_err(|e| e.to_string())?
                        {
                            Some(t) => {
                                if !check_tensor_solution(&lc, p, level, &t)
                                    .map_err(|e| e.to_string())?
                                {
                                    return Err("internal: tensor fails verification".into());
                                }
                                let bare =
                                    serde_json::to_value(tensor_to_json(&lc, &t)).unwrap();
                                Ok(Outcome {
                                    verdict: "Accept",
                                    instance_digest: digest,
                                    artifacts: json!({ "tensor": bare }),
                                    bare,
                                })
                            }
                            None => Ok(Outcome {
                                verdict: "Refute",
                                instance_digest: digest,
                                artifacts: json!({}),
                                bare: json!(null),
                            }),
                        }
                    }
                }
                Relaxation::Zn => {
                    let n = n.ok_or("--n is required for the zn relaxation (0 = integers)")?;
                    match solve_zn(&lc, n, &caps).map_err(|e| e.to_string())? {
                        Some(sol) => {
                            if !sol.verify(&lc).map_err(|e| e.to_string())? {
                                return Err("internal: solution fails verification".into());
                            }
                            let artifacts = json!({ "n": n, "values": sol.values });
                            Ok(Outcome {
                                verdict: "Accept",
                                instance_digest: digest,
                                bare: artifacts.clone(),
                                artifacts,
                            })
                        }
                        None => Ok(Outcome {
                            verdict: "Refute",
                            instance_digest: digest,
                            artifacts: json!({}),
                            bare: json!(null),
                        }),
                    }
                }
            }
        }
        Command::ExtractVectors { p, k, instance, tensor } => {
            let lc = read_lc(instance)?;
            let tensor_json: TensorJson = read_json(tensor)?;
            if tensor_json.p != *p || tensor_json.k != *k {
                return Err(format!(
                    "tensor is for p = {}, k = {}, flags say p = {p}, k = {k}",
                    tensor_json.p, tensor_json.k
                ));
            }
            let t = tensor_from_json(&lc, &tensor_json).map_err(|e| e.to_string())?;
            let mut components = Vec::new();
            for (component, old_vars) in lc.split_components() {
                let restricted =
                    restrict_tensor(&lc, &t, &component, &old_vars).map_err(|e| e.to_string())?;
                let solution =
                    extract_vectors(&component, &restricted).map_err(|e| e.to_string())?;
                components.push(ComponentEntry {
                    variables: component.variables.iter().map(|v| v.name.clone()).collect(),
                    solution: vector_solution_to_json(&component, &solution),
                });
            }
            let bare = serde_json::to_value(&ComponentSolutions { components }).unwrap();
            Ok(Outcome {
                verdict: "Accept",
                instance_digest: Some(digest_of(&lc)),
                artifacts: bare.clone(),
                bare,
            })
        }
        Command::Round { p, instance, vectors, csp } => {
            let lc = read_lc(instance)?;
            let file: ComponentSolutions = read_json(vectors)?;
            let split = lc.split_components();
            if split.len() != file.components.len() {
                return Err(format!(
                    "{} components in the instance, {} in the vector file",
                    split.len(),
                    file.components.len()
                ));
            }
            let mut tuples: Vec<Option<ZnTuple>> = vec![None; lc.variables.len()];
            for ((component, old_vars), entry) in split.iter().zip(&file.components) {
                let names: Vec<String> =
                    component.variables.iter().map(|v| v.name.clone()).collect();
                if names != entry.variables {
                    return Err("component variables do not match the vector file".into());
                }
                let solution = vector_solution_from_json(component, &entry.solution)
                    .map_err(|e| e.to_string())?;
                if solution.p != *p {
                    return Err(format!("vector solution is over Z_{}, flag says {p}", solution.p));
                }
                solution.verify(component).map_err(|e| format!("invalid vector solution: {e}"))?;
                for (new, &old) in old_vars.iter().enumerate() {
                    tuples[old] =
                        Some(round_to_zp2(&solution.object_for(new)).map_err(|e| e.to_string())?);
                }
            }
            let tuples: Vec<ZnTuple> = tuples.into_iter().map(Option::unwrap).collect();
            let tuple_map: serde_json::Map<String, Value> = lc
                .variables
                .iter()
                .zip(&tuples)
                .map(|(v, t)| (v.name.clone(), json!(t.residues)))
                .collect();
            let mut artifacts = json!({ "n": p * p, "tuples": tuple_map });
            if let Some(csp_path) = csp {
                let csp = read_csp(csp_path)?;
                if lc_of_csp(&csp) != lc {
                    return Err("the CSP does not translate to the given LC instance".into());
                }
                let csp_tuples: Vec<ZnTuple> =
                    tuples[..csp.variables.len()].to_vec();
                let decoded =
                    decode_affine(&csp, &csp_tuples, p * p).map_err(|e| e.to_string())?;
                let as_idx: Vec<usize> = decoded.iter().map(|&v| v as usize).collect();
                if !csp.check_solution(&as_idx).map_err(|e| e.to_string())? {
                    return Err("decoded assignment fails the original constraints".into());
                }
                artifacts["assignment"] = json!(decoded);
            }
            Ok(Outcome {
                verdict: "Accept",
                instance_digest: Some(digest_of(&lc)),
                bare: artifacts.clone(),
                artifacts,
            })
        }
        Command::D4 { action } => match action {
            D4Action::Gen => {
                let csp = gen_coset_csp(cli.seed);
                let bare = serde_json::to_value(&csp).unwrap();
                Ok(Outcome {
                    verdict: "Solved",
                    instance_digest: Some(digest_of(&csp)),
                    artifacts: json!({ "instance": bare }),
                    bare,
                })
            }
            D4Action::Certify { input } => {
                let csp = read_csp(input)?;
                let lc = lc_of_csp(&csp);
                let digest = Some(digest_of(&csp));
                let mut certificates = Vec::new();
                for (component, _old_vars) in lc.split_components() {
                    let Some(t) = solve_level(&component, 2, 2, Encoding::Canonical, &caps)
                        .map_err(|e| e.to_string())?
                    else {
                        return Ok(Outcome {
                            verdict: "Refute",
                            instance_digest: digest,
                            artifacts: json!({
                                "refuted_component": component
                                    .variables
                                    .iter()
                                    .map(|v| v.name.clone())
                                    .collect::<Vec<_>>(),
                            }),
                            bare: json!(null),
                        });
                    };
                    let s = extract_vectors(&component, &t).map_err(|e| e.to_string())?;
                    let cert = m_certificate(&component, &s).map_err(|e| e.to_string())?;
                    if !verify_m_certificate(&component, &cert).map_err(|e| e.to_string())? {
                        return Err("internal: certificate fails verification".into());
                    }
                    let pairs: Vec<Value> = cert
                        .objects
                        .iter()
                        .zip(&component.variables)
                        .map(|(o, v)| json!({ "variable": v.name, "f": o.f, "g": o.g }))
                        .collect();
                    certificates.push(json!({ "pairs": pairs }));
                }
                let artifacts = json!({ "certificates": certificates });
                Ok(Outcome {
                    verdict: "Accept",
                    instance_digest: digest,
                    bare: artifacts.clone(),
                    artifacts,
                })
            }
        },
        Command::Verify { what } => {
            if what != "paper-props" {
                return Err(format!("unknown verification battery {what:?}"));
            }
            let checks = run_property_checks(&caps);
            let all = checks.iter().all(|c| c.1);
            let artifacts = json!({
                "checks": checks
                    .iter()
                    .map(|(name, pass)| json!({ "name": name, "pass": pass }))
                    .collect::<Vec<_>>(),
            });
            Ok(Outcome {
                verdict: if all { "Accept" } else { "Refute" },
                instance_digest: None,
                bare: artifacts.clone(),
                artifacts,
            })
        }
        Command::Oracle { action } => match action {
            OracleAction::Solve { lc, input } => {
                let (digest, assignment) = if *lc {
                    let inst = read_lc(input)?;
                    (digest_of(&inst), brute_solve_lc(&inst, &caps).map_err(|e| e.to_string())?)
                } else {
                    let inst = read_csp(input)?;
                    (digest_of(&inst), brute_solve_csp(&inst, &caps).map_err(|e| e.to_string())?)
                };
                match assignment {
                    Some(a) => Ok(Outcome {
                        verdict: "Solved",
                        instance_digest: Some(digest),
                        artifacts: json!({ "assignment": a }),
                        bare: json!(a),
                    }),
                    None => Ok(Outcome {
                        verdict: "Refute",
                        instance_digest: Some(digest),
                        artifacts: json!({ "assignment": null }),
                        bare: json!(null),
                    }),
                }
            }
        },
        Command::Gen { action } => match action {
            GenAction::Linear { modulus, vars, eqs, arity } => {
                let csp = gen_linear_system_csp(*modulus, *vars, *eqs, *arity, cli.seed)
                    .map_err(|e| e.to_string())?;
                let bare = serde_json::to_value(&csp).unwrap();
                Ok(Outcome {
                    verdict: "Solved",
                    instance_digest: Some(digest_of(&csp)),
                    artifacts: json!({ "instance": bare }),
                    bare,
                })
            }
        },
    }
}

/// The built-in battery: carry tables, both no-homomorphism systems, and
/// the shipped worked-example fixtures.
fn run_property_checks(caps: &Caps) -> Vec<(&'static str, bool)> {
    let mut checks = Vec::new();

    let mut carry_ok = true;
    for p in [2u64, 3, 5, 7] {
        for a in 0..p {
            for b in 0..p {
                carry_ok &= carry_polynomial(p, a, b) == Ok((a + b) / p % p);
            }
        }
    }
    checks.push(("carry polynomial tables (p = 2, 3, 5, 7)", carry_ok));

    checks.push((
        "no homomorphism into Z_8 from the level-2 Z_2 vector minion",
        check_no_homo_v2z2_to_z8().unwrap_or(false),
    ));
    checks.push((
        "no homomorphism into Z_9 from the level-2 Z_3 vector minion",
        check_no_homo_v2zp_to_zp2(3).unwrap_or(false),
    ));

    let chain = lc_of_csp(&samples::chain_csp());
    let ac = arc_consistency(&chain);
    checks.push((
        "arc consistency prunes the chain example to the known fixpoint",
        ac.status == AcStatus::NonEmpty && ac.domains == samples::chain_ac_domains(),
    ));

    let cycle = lc_of_csp(&samples::cycle_csp());
    checks.push((
        "printed Z_2 weights verify on the order cycle",
        samples::cycle_z2_solution().verify(&cycle).unwrap_or(false),
    ));
    checks.push((
        "printed level-2 table verifies on the order cycle",
        check_tensor_solution(&cycle, 2, 2, &samples::cycle_level2_tensor()).unwrap_or(false),
    ));
    checks.push((
        "Z_2 relaxation accepts the order cycle",
        solve_zp(&cycle, 2, caps).map(|s| s.is_some()).unwrap_or(false),
    ));
    checks.push((
        "level-2 Z_2 relaxation accepts the order cycle",
        solve_level(&cycle, 2, 2, Encoding::Canonical, caps)
            .map(|s| s.is_some())
            .unwrap_or(false),
    ));
    checks
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let (report, code) = match run(&cli) {
        Ok(outcome) => {
            let code = match outcome.verdict {
                "Accept" | "Solved" => 0,
                "Refute" => 1,
                _ => 2,
            };
            if cli.bare {
                println!("{}", serde_json::to_string_pretty(&outcome.bare).unwrap());
                std::process::exit(code);
            }
            (
                Report {
                    command: argv,
                    instance_digest: outcome.instance_digest,
                    verdict: outcome.verdict.to_string(),
                    artifacts: outcome.artifacts,
                    timings: cli
                        .timings
                        .then(|| json!({ "total_ms": start.elapsed().as_millis() as u64 })),
                },
                code,
            )
        }
        Err(message) => (
            Report {
                command: argv,
                instance_digest: None,
                verdict: "Error".into(),
                artifacts: json!({ "error": message }),
                timings: None,
            },
            2,
        ),
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    std::process::exit(code);
}
