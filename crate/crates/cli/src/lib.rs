//! Command dispatch for the `bsk` binary. Everything is pure except reading
//! `--spec` files and writing `--out`; reports are JSON with sorted keys, so
//! identical invocations produce byte-identical output.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bsk_core::amalgam::{AmalgamSpec, ElementClass, Side};
use bsk_core::constructions::{dinf_word, ChainTree, DinfConvention};
use bsk_core::corpus::Corpus;
use bsk_core::dot;
use bsk_core::isometry::{amplitude_formula, classify_fixed_end};
use bsk_core::quotient::{
    cycle_rank, elliptic_generation_check, follow_positive_chain, quotient_graph,
};
use bsk_core::specfile::SpecFile;
use bsk_core::tree::{ball, TreeHost};
use bsk_core::verify::{adaptive_amplitude_with_radius, run_all, run_suite, SuiteReport, SUITE_NAMES};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "bsk", version, about = "Simplicial trees, amalgams and group actions at the terminal")]
pub struct Cli {
    /// Extra spec files loaded on top of the builtin prelude.
    #[arg(long = "spec", global = true)]
    pub spec: Vec<PathBuf>,
    /// Seed for the verification suites (falls back to BSK_SEED, then 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write DOT output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a word of an amalgam: elliptic with a conjugating witness, or
    /// hyperbolic with its translation length.
    Classify { amalgam: String, word: String },
    /// Both amplitude routes for a word acting on the coset tree.
    Amplitude {
        amalgam: String,
        word: String,
        /// Largest window the direct route may grow to.
        #[arg(long, default_value_t = 24)]
        window: usize,
    },
    /// Explore the coset tree of an amalgam out to a radius.
    BsTree {
        amalgam: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Quotient graph, cycle rank and fundamental domain of a finite action.
    Quotient {
        action: String,
        #[arg(long)]
        dot: bool,
    },
    /// Orient the edges of a tree of groups and follow the positive chain.
    Orient {
        tog: String,
        #[arg(long)]
        dot: bool,
        /// Start vertex for the positive walk (least vertex by default).
        #[arg(long)]
        walk_from: Option<String>,
    },
    /// The spine end of a chain tree with per-element neutrality certificates.
    ChainEnd {
        chain: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Comma-separated element list (defaults to 1/p, 1/p^2, ...).
        #[arg(long)]
        elements: Option<String>,
    },
    /// Compose a word over {a, b} into an affine map of the line.
    Dinf {
        word: String,
        /// `vertex` keeps both generators inversion-free; `midpoint` makes b
        /// the reflection about the midpoint of the edge (0, 1).
        #[arg(long, default_value = "vertex")]
        convention: String,
    },
    /// Run the verification suites over the standard corpus.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

pub struct CommandOutcome {
    pub stdout: String,
    pub exit: i32,
}

fn ok(command: &str, seed: u64, result: Value) -> CommandOutcome {
    render(command, seed, result, 0)
}

fn fail(command: &str, seed: u64, result: Value) -> CommandOutcome {
    render(command, seed, result, 1)
}

fn render(command: &str, seed: u64, result: Value, exit: i32) -> CommandOutcome {
    let report = json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "result": result,
    });
    let mut stdout = serde_json::to_string_pretty(&report).expect("reports serialize");
    stdout.push('\n');
    CommandOutcome { stdout, exit }
}

fn error_outcome(command: &str, seed: u64, message: String) -> CommandOutcome {
    render(command, seed, json!({ "error": message }), 1)
}

/// Runs a parsed command line. `env_seed` is the BSK_SEED fallback.
pub fn run(argv: &[String], env_seed: Option<u64>) -> CommandOutcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own usage/diagnostics
            return CommandOutcome { stdout: e.to_string(), exit: 2 };
        }
    };
    let command_echo = argv[1..].join(" ");
    let seed = cli.seed.or(env_seed).unwrap_or(0);

    let mut spec = SpecFile::builtin();
    for path in &cli.spec {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                return error_outcome(&command_echo, seed, format!("cannot read {path:?}: {e}"))
            }
        };
        if let Err(e) = spec.extend(&text) {
            return error_outcome(&command_echo, seed, format!("{}: {e}", path.display()));
        }
    }

    let emit_dot = |dot_text: String, report: Value| -> CommandOutcome {
        match &cli.out {
            Some(path) => match std::fs::write(path, &dot_text) {
                Ok(()) => ok(&command_echo, seed, report),
                Err(e) => error_outcome(&command_echo, seed, format!("cannot write {path:?}: {e}")),
            },
            None => CommandOutcome { stdout: dot_text, exit: 0 },
        }
    };

    match &cli.command {
        Command::Classify { amalgam, word } => {
            let spec_am = match spec.amalgams.get(amalgam) {
                Some(a) => a.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("amalgam {amalgam:?} not declared"))
                }
            };
            let w = match spec_am.parse_word(word) {
                Ok(w) => w,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            ok(&command_echo, seed, classify_report(&spec_am, &w))
        }
        Command::Amplitude { amalgam, word, window } => {
            let spec_am = match spec.amalgams.get(amalgam) {
                Some(a) => a.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("amalgam {amalgam:?} not declared"))
                }
            };
            let w = match spec_am.parse_word(word) {
                Ok(w) => w,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let tree = spec_am.bs_tree();
            let auto = spec_am.translation(&tree, &w);
            let (direct, radius) = match adaptive_amplitude_with_radius(&auto, *window) {
                Ok(m) => m,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let formula = match amplitude_formula(&auto, &tree.root(), 8 * (direct + 2) + 64) {
                Ok(m) => m,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let algebraic = match spec_am.classify_element(&w) {
                ElementClass::Hyperbolic { translation_length, .. } => translation_length,
                ElementClass::Elliptic { .. } => 0,
            };
            let tree_report = match bsk_core::isometry::classify(&auto, radius.max(6)) {
                Ok(r) => serde_json::to_value(&r).expect("reports serialize"),
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let agree = direct == formula && formula == algebraic;
            let result = json!({
                "word": spec_am.render_word(&w),
                "amplitude_direct": direct,
                "amplitude_formula": formula,
                "translation_length": algebraic,
                "agree": agree,
                "tree_report": tree_report,
            });
            if agree { ok(&command_echo, seed, result) } else { fail(&command_echo, seed, result) }
        }
        Command::BsTree { amalgam, radius, dot: want_dot } => {
            let spec_am = match spec.amalgams.get(amalgam) {
                Some(a) => a.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("amalgam {amalgam:?} not declared"))
                }
            };
            let tree = spec_am.bs_tree();
            let window = ball(tree.as_ref(), &tree.root(), *radius);
            let mut degree_histogram: BTreeMap<usize, usize> = BTreeMap::new();
            for v in window.vertices() {
                if window.is_interior(v) {
                    *degree_histogram.entry(tree.neighbors(v).len()).or_insert(0) += 1;
                }
            }
            let report = json!({
                "amalgam": spec_am.name(),
                "radius": radius,
                "vertices": window.vertex_count(),
                "frontier": window.frontier().count(),
                "interior_degree_histogram": degree_histogram
                    .iter()
                    .map(|(d, c)| (d.to_string(), Value::from(*c)))
                    .collect::<serde_json::Map<String, Value>>(),
                "degree_a": spec_am.transversal(Side::A).coset_count(),
                "degree_b": spec_am.transversal(Side::B).coset_count(),
            });
            if *want_dot {
                let dot_text =
                    dot::ball_to_dot(spec_am.name(), tree.as_ref() as &dyn bsk_core::tree::TreeHost, &window);
                emit_dot(dot_text, report)
            } else {
                ok(&command_echo, seed, report)
            }
        }
        Command::Quotient { action, dot: want_dot } => {
            let act = match spec.actions.get(action) {
                Some(a) => a.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("action {action:?} not declared"))
                }
            };
            let q = match quotient_graph(&act) {
                Ok(q) => q,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let verdict = match elliptic_generation_check(&act) {
                Ok(v) => v,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let domain = match bsk_core::quotient::fundamental_domain(&act) {
                Ok((d, _)) => d,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let report = json!({
                "action": action,
                "group": act.group().name(),
                "host_vertices": act.tree().vertex_count(),
                "orbit_vertices": q.graph().vertex_count(),
                "orbit_edges": q.graph().edge_count() / 2,
                "cycle_rank": cycle_rank(q.graph()),
                "all_elliptic": verdict.all_elliptic,
                "fundamental_domain": domain.vertices().iter().collect::<Vec<_>>(),
                "holds": verdict.holds,
            });
            let outcome = if *want_dot {
                let dot_text = dot::graph_to_dot(action, q.graph());
                emit_dot(dot_text, report.clone())
            } else {
                ok(&command_echo, seed, report.clone())
            };
            if verdict.holds {
                outcome
            } else {
                CommandOutcome { stdout: outcome.stdout, exit: 1 }
            }
        }
        Command::Orient { tog, dot: want_dot, walk_from } => {
            let t = match spec.togs.get(tog) {
                Some(t) => t.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("tree of groups {tog:?} not declared"))
                }
            };
            let report = t.orient_edges();
            let start = walk_from.clone().unwrap_or_else(|| t.tree().root());
            let walk = match follow_positive_chain(&t, &start) {
                Ok(w) => w,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            let result = json!({
                "tog": t.name(),
                "local": to_json(&report.local),
                "global": to_json(&report.global),
                "disagreements": report.disagreements,
                "walk": {
                    "from": start,
                    "path": walk.path,
                    "groups": walk.groups,
                    "end": serde_json::to_value(&walk.end).expect("walk ends serialize"),
                },
            });
            if *want_dot {
                emit_dot(dot::orientation_to_dot(&t, &report), result)
            } else {
                ok(&command_echo, seed, result)
            }
        }
        Command::ChainEnd { chain, depth, elements } => {
            let c = match spec.chains.get(chain) {
                Some(c) => c.clone(),
                None => {
                    return error_outcome(&command_echo, seed, format!("chain {chain:?} not declared"))
                }
            };
            let tree = ChainTree::new(c.clone(), *depth);
            let elements = match elements {
                Some(list) => {
                    let mut parsed = Vec::new();
                    for token in list.split(',') {
                        match c.parse_element(token.trim()) {
                            Some(e) => parsed.push(e),
                            None => {
                                return error_outcome(
                                    &command_echo,
                                    seed,
                                    format!("cannot parse element {token:?}"),
                                )
                            }
                        }
                    }
                    parsed
                }
                None => c.standard_elements(*depth),
            };
            let end = tree.spine_end();
            let mut certificates = Vec::new();
            let mut all_ok = true;
            for e in &elements {
                let auto = match tree.translation(e) {
                    Ok(a) => a,
                    Err(err) => return error_outcome(&command_echo, seed, err.to_string()),
                };
                let horizon = (*depth + 4).max(8);
                match classify_fixed_end(&auto, &end, horizon) {
                    Ok(rep) => {
                        let expected = tree.neutrality_index(e);
                        let neutral = matches!(rep.kind, bsk_core::isometry::FixedEndKind::Neutral);
                        let matches_level = expected == Some(rep.index);
                        all_ok &= neutral && matches_level;
                        certificates.push(json!({
                            "element": c.render_element(e),
                            "kind": format!("{:?}", rep.kind),
                            "index": rep.index,
                            "membership_level": expected,
                        }));
                    }
                    Err(err) => {
                        all_ok = false;
                        certificates.push(json!({
                            "element": c.render_element(e),
                            "error": err.to_string(),
                        }));
                    }
                }
            }
            // which levels below the depth are fixed by the whole family
            let max_level =
                elements.iter().filter_map(|e| c.membership_level(e)).max().unwrap_or(0);
            let result = json!({
                "chain": c.name(),
                "depth": depth,
                "end": (0..=4.min(*depth)).map(|i| end.vertex(i)).collect::<Vec<_>>(),
                "certificates": certificates,
                "levels_fixed_by_all_start_at": max_level,
                "holds": all_ok,
            });
            if all_ok { ok(&command_echo, seed, result) } else { fail(&command_echo, seed, result) }
        }
        Command::Dinf { word, convention } => {
            let convention = match convention.as_str() {
                "vertex" => DinfConvention::VertexReflections,
                "midpoint" => DinfConvention::MidpointB,
                other => {
                    return error_outcome(
                        &command_echo,
                        seed,
                        format!("unknown convention {other:?}; use vertex or midpoint"),
                    )
                }
            };
            let elt = match dinf_word(word, convention) {
                Ok(e) => e,
                Err(e) => return error_outcome(&command_echo, seed, e.to_string()),
            };
            ok(
                &command_echo,
                seed,
                json!({
                    "word": word,
                    "sign": elt.sign,
                    "offset": elt.offset,
                    "kind": if elt.sign == 1 { "translation" } else { "reflection" },
                    "line_amplitude": elt.line_amplitude(),
                    "inversion_edge": elt.inversion_edge().map(|(a, b)| vec![a, b]),
                }),
            )
        }
        Command::Verify { suite } => {
            let corpus = Corpus::standard();
            let reports: Vec<SuiteReport> = if suite == "all" {
                run_all(&corpus, seed)
            } else {
                match run_suite(&corpus, suite, seed) {
                    Some(r) => vec![r],
                    None => {
                        return error_outcome(
                            &command_echo,
                            seed,
                            format!("unknown suite {suite:?}; known: all, {}", SUITE_NAMES.join(", ")),
                        )
                    }
                }
            };
            let passed = reports.iter().all(|r| r.passed);
            let result = json!({
                "suites": reports
                    .iter()
                    .map(|r| serde_json::to_value(r).expect("suite reports serialize"))
                    .collect::<Vec<_>>(),
                "passed": passed,
            });
            if passed { ok(&command_echo, seed, result) } else { fail(&command_echo, seed, result) }
        }
    }
}

fn to_json(classes: &BTreeMap<String, bsk_core::quotient::EdgeClass>) -> Value {
    Value::Object(
        classes
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(format!("{v:?}"))))
            .collect(),
    )
}

fn classify_report(spec: &Arc<AmalgamSpec>, w: &bsk_core::amalgam::NormalFormWord) -> Value {
    match spec.classify_element(w) {
        ElementClass::Elliptic { witness, factor, in_amalgam } => json!({
            "word": spec.render_word(w),
            "class": "elliptic",
            "witness": spec.render_word(&witness),
            "factor": if in_amalgam { "amalgamated".to_string() } else { format!("{factor:?}") },
            "syllable_length": w.syllable_length(),
        }),
        ElementClass::Hyperbolic { translation_length, core } => json!({
            "word": spec.render_word(w),
            "class": "hyperbolic",
            "translation_length": translation_length,
            "cyclically_reduced_core": spec.render_word(&core),
            "syllable_length": w.syllable_length(),
        }),
    }
}
