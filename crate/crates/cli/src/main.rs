//! Command-line front door: every workbench operation as a deterministic
//! subcommand with machine-readable exit codes.
//!
//! Exit codes: 0 = holds / success, 1 = property fails (counterexample in
//! the report), 2 = undecided within fragment or no host, 3 = input error,
//! 4 = resource guard tripped.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ramsey_core::arrows::{
    check_arrow, check_arrow_with_witnesses, degree_bounds, min_t, ArrowStatement, MinTPolicy,
};
use ramsey_core::canon::canonical_form;
use ramsey_core::catalog::{generate_fragment, validate_fragment, FamilySpec};
use ramsey_core::cnf::export_cnf;
use ramsey_core::copies::enumerate_copies;
use ramsey_core::error::Error;
use ramsey_core::exec::EngineConfig;
use ramsey_core::expansions::{
    check_expansion_property, check_lower_bound, check_precompactness, check_ramsey_property,
    check_reasonability, check_rigidity, expand_by_partition, ExpansionWitness, FragmentSignature,
    RamseyPairVerdict,
};
use ramsey_core::io;
use ramsey_core::koenig::{build_tree, find_branch, DefaultOracle, LevelChain};
use ramsey_core::kriz::{kriz_reduce_capped, EquivRelation, KrizOutcome};

const AFTER_HELP: &str = "\
Exit codes: 0 holds/success, 1 property fails (counterexample reported),
2 undecided within fragment or no host, 3 input error, 4 resource guard.

Environment: RAMSEY_MAX_COLORINGS, RAMSEY_MAX_RELATION_BASE and
RAMSEY_MAX_RELATIONS override the search guards.";

#[derive(Parser)]
#[command(
    name = "ramsey",
    version,
    about = "Finite-scale workbench for partition arrows, Ramsey degrees, and precompact expansions",
    after_help = AFTER_HELP
)]
struct Cli {
    /// Worker threads for coloring scans; the output is identical for every
    /// worker count.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    /// Least t with the arrow holding at k = t + 1.
    Threshold,
    /// Least t with the arrow holding at k = |binom(C,A)|.
    Saturated,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the copies of a pattern structure inside a host structure.
    Copies {
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long = "C", alias = "host")]
        host: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide the partition arrow C -> (B)^A_{k,t}.
    Arrow {
        #[arg(long = "C", alias = "host")]
        host: PathBuf,
        #[arg(long = "B", alias = "big")]
        big: PathBuf,
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long = "k")]
        k: usize,
        #[arg(long = "t")]
        t: usize,
        /// Collect one good copy per coloring class (holding verdicts only).
        #[arg(long)]
        witnesses: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least tolerated color count for C -> (B)^A.
    MinT {
        #[arg(long = "C", alias = "host")]
        host: PathBuf,
        #[arg(long = "B", alias = "big")]
        big: PathBuf,
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long, value_enum, default_value = "threshold")]
        policy: PolicyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fragment-relative Ramsey degree bounds for a pattern.
    Degree {
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        size_limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce t-tolerance to a relation-constrained Ramsey statement.
    Kriz {
        #[arg(long = "C", alias = "host")]
        host: PathBuf,
        #[arg(long = "B", alias = "big")]
        big: PathBuf,
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long = "t")]
        t: usize,
        /// Color budget for defeating-coloring searches (default: saturation).
        #[arg(long)]
        k_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the level tree of admissible relations and search for a branch.
    Koenig {
        /// Level-chain document (pattern/ambient/top files plus subsets).
        #[arg(long)]
        chain: PathBuf,
        #[arg(long = "t")]
        t: usize,
        /// Color budget of the default admissibility oracle (default: t).
        #[arg(long)]
        oracle_k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand a structure by a partition of its pattern copies.
    Expand {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        /// Restricted-growth string over the documented copy order, e.g. 0,0,1.
        #[arg(long)]
        relation: String,
        /// Order as the element sequence least-first, e.g. 2,0,1.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value = "lt")]
        order_symbol: String,
        /// Declared class count (defaults to the partition's block count).
        #[arg(long)]
        classes: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the substructure closure of the expansion as a fragment.
        #[arg(long)]
        age_out: Option<PathBuf>,
    },
    /// Count the expansions of every base member.
    Precompact {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        expanded: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every expansion of B contains at least t expansions of A.
    LowerBound {
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long = "B", alias = "big")]
        big: PathBuf,
        #[arg(long)]
        expanded: PathBuf,
        #[arg(long = "t")]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per base member, the least witness for the expansion property.
    ExpansionProperty {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        expanded: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that embeddings lift along expansions of their domain.
    Reasonability {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        expanded: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arrow verdicts at t = 1 for every embeddable pair of fragment members.
    Ramsey {
        #[arg(long)]
        expanded: PathBuf,
        #[arg(long)]
        host_limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every fragment member is rigid.
    Rigidity {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a built-in family fragment, e.g. chains:6 or two_class:3,3.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report hereditary closure and fragment-relative joint embedding.
    Validate {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an arrow statement as DIMACS CNF (satisfiable = arrow fails).
    ExportCnf {
        #[arg(long = "C", alias = "host")]
        host: PathBuf,
        #[arg(long = "B", alias = "big")]
        big: PathBuf,
        #[arg(long = "A", alias = "pattern")]
        pattern: PathBuf,
        #[arg(long = "k")]
        k: usize,
        #[arg(long = "t")]
        t: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        legend: Option<PathBuf>,
    },
}

struct Report {
    lines: Vec<String>,
}

impl Report {
    fn new(replay: String) -> Self {
        Report {
            lines: vec![format!("command: {}", replay)],
        }
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn emit(&self, out: Option<&Path>) -> Result<(), Error> {
        let text = self.lines.join("\n") + "\n";
        print!("{}", text);
        if let Some(path) = out {
            std::fs::write(path, text)?;
        }
        Ok(())
    }
}

fn engine_config(workers: usize) -> Result<EngineConfig, Error> {
    let mut cfg = EngineConfig::with_workers(workers);
    if let Ok(v) = std::env::var("RAMSEY_MAX_COLORINGS") {
        cfg.max_colorings = v
            .parse()
            .map_err(|_| Error::input("RAMSEY_MAX_COLORINGS must be an integer"))?;
    }
    if let Ok(v) = std::env::var("RAMSEY_MAX_RELATION_BASE") {
        cfg.max_relation_base = v
            .parse()
            .map_err(|_| Error::input("RAMSEY_MAX_RELATION_BASE must be an integer"))?;
    }
    if let Ok(v) = std::env::var("RAMSEY_MAX_RELATIONS") {
        cfg.max_relations = v
            .parse()
            .map_err(|_| Error::input("RAMSEY_MAX_RELATIONS must be an integer"))?;
    }
    Ok(cfg)
}

/// The invocation echoed into every report. The worker flag is dropped: it
/// never affects any output, and reports must be byte-identical across
/// worker counts.
fn replay_line() -> String {
    let mut line = String::from("ramsey");
    let mut args = std::env::args().skip(1).peekable();
    while let Some(a) = args.next() {
        if a == "--workers" {
            args.next();
            continue;
        }
        line.push(' ');
        line.push_str(&a);
    }
    line
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                Error::NoHost(_) => 2,
                Error::Input(_) | Error::Parse(_) | Error::Io(_) => 3,
                Error::ResourceGuard(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = engine_config(cli.workers)?;
    let mut report = Report::new(replay_line());
    match cli.command {
        Command::Copies { pattern, host, out } => {
            let a = io::read_structure_file(&pattern)?;
            let c = io::read_structure_file(&host)?;
            let copies = enumerate_copies(&a, &c)?;
            report.line(format!("copies: {}", copies.len()));
            report.line(format!("pattern-code: {}", copies.pattern_code()));
            for copy in copies.copies() {
                report.line(format!(
                    "copy: {}",
                    copy.subset()
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            report.emit(out.as_deref())?;
            Ok(0)
        }
        Command::Arrow {
            host,
            big,
            pattern,
            k,
            t,
            witnesses,
            out,
        } => {
            let stmt = ArrowStatement::new(
                io::read_structure_file(&host)?,
                io::read_structure_file(&big)?,
                io::read_structure_file(&pattern)?,
                k,
                t,
            )?;
            let verdict = if witnesses {
                check_arrow_with_witnesses(&stmt, &cfg, 64)?
            } else {
                check_arrow(&stmt, &cfg)?
            };
            if verdict.holds {
                report.line("verdict: holds");
                if let Some(list) = &verdict.good_copy_witnesses {
                    for (class, copy) in list {
                        report.line(format!(
                            "witness: coloring {} -> copy {}",
                            class,
                            copy.subset()
                                .iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        ));
                    }
                }
                report.emit(out.as_deref())?;
                Ok(0)
            } else {
                let cex = verdict
                    .counterexample
                    .expect("failing verdicts carry a counterexample");
                report.line("verdict: fails");
                report.line(format!("counterexample-k: {}", cex.k()));
                report.line(format!("counterexample: {}", cex.assignment_string()));
                for copy in cex.copy_set().copies() {
                    report.line(format!(
                        "copy: {}",
                        copy.subset()
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ));
                }
                report.emit(None)?;
                if let Some(path) = out {
                    std::fs::write(&path, io::coloring_to_string(&cex))?;
                }
                Ok(1)
            }
        }
        Command::MinT {
            host,
            big,
            pattern,
            policy,
            out,
        } => {
            let policy = match policy {
                PolicyArg::Threshold => MinTPolicy::ColorThreshold,
                PolicyArg::Saturated => MinTPolicy::SaturatedColors,
            };
            let result = min_t(
                &io::read_structure_file(&host)?,
                &io::read_structure_file(&big)?,
                &io::read_structure_file(&pattern)?,
                policy,
                &cfg,
            )?;
            report.line(format!("min-t: {}", result.t));
            match &result.witness {
                Some(w) => report.line(format!("lower-bound-witness: {}", w.assignment_string())),
                None => report.line("lower-bound-witness: none"),
            }
            report.emit(out.as_deref())?;
            Ok(0)
        }
        Command::Degree {
            pattern,
            fragment,
            size_limit,
            out,
        } => {
            let a = io::read_structure_file(&pattern)?;
            let frag = io::load_fragment(&fragment)?;
            let bounds = degree_bounds(&a, &frag, size_limit, &cfg)?;
            report.line(format!("lower: {}", bounds.lower));
            match bounds.upper {
                Some(u) => report.line(format!("upper: {}", u)),
                None => report.line("upper: unbounded within fragment"),
            }
            if let Some((b, c, witness)) = &bounds.lower_witness {
                report.line(format!(
                    "lower-witness: B={} host={} coloring={}",
                    frag.codes()[*b],
                    frag.codes()[*c],
                    witness
                        .as_ref()
                        .map_or("none".to_string(), |w| w.assignment_string())
                ));
            }
            for (b, c, value) in &bounds.scheme {
                report.line(format!(
                    "scheme: B={} host={} min-t={}",
                    frag.codes()[*b],
                    frag.codes()[*c],
                    value
                ));
            }
            report.emit(out.as_deref())?;
            Ok(if bounds.upper.is_some() { 0 } else { 2 })
        }
        Command::Kriz {
            host,
            big,
            pattern,
            t,
            k_cap,
            out,
        } => {
            let c = io::read_structure_file(&host)?;
            let b = io::read_structure_file(&big)?;
            let a = io::read_structure_file(&pattern)?;
            match kriz_reduce_capped(&c, &b, &a, t, k_cap, &cfg)? {
                KrizOutcome::ERamsey {
                    relation,
                    certificate,
                } => {
                    report.line("branch: e-ramsey");
                    report.line(format!("relation: {}", relation.rgs_string()));
                    report.line(format!("certificate-k: {}", certificate.k));
                    report.line(format!(
                        "certificate-classes: {}",
                        certificate.classes_checked
                    ));
                    report.emit(out.as_deref())?;
                    Ok(0)
                }
                KrizOutcome::Defeated { witnesses, product } => {
                    report.line("branch: defeated");
                    report.line(format!("product-k: {}", product.k()));
                    report.line(format!("product: {}", product.assignment_string()));
                    for (relation, coloring) in witnesses.entries() {
                        report.line(format!(
                            "witness: relation {} defeated by k={} coloring {}",
                            relation.rgs_string(),
                            coloring.k(),
                            coloring.assignment_string()
                        ));
                    }
                    report.emit(None)?;
                    if let Some(path) = out {
                        std::fs::write(&path, io::witness_family_to_string(&witnesses, &product))?;
                    }
                    Ok(1)
                }
            }
        }
        Command::Koenig {
            chain,
            t,
            oracle_k,
            out,
        } => {
            let lc: LevelChain = io::load_level_chain(&chain)?;
            let oracle = DefaultOracle { k: oracle_k };
            let tree = build_tree(&lc, t, &oracle, &cfg)?;
            report.line(format!("oracle: {}", tree.oracle_description()));
            for (m, level) in tree.levels().iter().enumerate() {
                report.line(format!("level {}: {} admissible relations", m, level.len()));
            }
            match find_branch(&tree) {
                Some(branch) => {
                    report.line(format!("branch: found depth {}", branch.len() - 1));
                    for (m, relation) in branch.iter().enumerate() {
                        report.line(format!(
                            "level {}: relation {} [certificate: {}]",
                            m,
                            relation.rgs_string(),
                            tree.oracle_description()
                        ));
                    }
                    report.emit(out.as_deref())?;
                    Ok(0)
                }
                None => {
                    report.line("branch: none");
                    report.emit(out.as_deref())?;
                    Ok(1)
                }
            }
        }
        Command::Expand {
            structure,
            pattern,
            relation,
            order,
            order_symbol,
            classes,
            out,
            age_out,
        } => {
            let s = io::read_structure_file(&structure)?;
            let a = io::read_structure_file(&pattern)?;
            let base = enumerate_copies(&a, &s)?;
            let rgs = EquivRelation::parse_rgs(&relation)?;
            let relation = EquivRelation::from_rgs(base, rgs)?;
            let order_seq = match &order {
                Some(text) => Some(
                    text.split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::input(format!("bad order element {:?}", s)))
                        })
                        .collect::<Result<Vec<usize>, Error>>()?,
                ),
                None => None,
            };
            let expanded = expand_by_partition(
                &s,
                &a,
                &relation,
                order_seq.as_deref().map(|seq| (order_symbol.as_str(), seq)),
                classes,
            )?;
            io::write_expanded_file(&out, &expanded)?;
            report.line(format!("expanded: {}", out.display()));
            if let Some(dir) = age_out {
                let frag = ramsey_core::expansions::age_fragment(
                    expanded.structure(),
                    FragmentSignature::Expanded(expanded.signature().clone()),
                )?;
                let manifest = io::save_fragment(&dir, &frag)?;
                report.line(format!("age-fragment: {}", manifest.display()));
            }
            report.emit(None)?;
            Ok(0)
        }
        Command::Precompact {
            base,
            expanded,
            bound,
            out,
        } => {
            let k = io::load_fragment(&base)?;
            let k_star = io::load_fragment(&expanded)?;
            let rows = check_precompactness(&k, &k_star, bound)?;
            let mut violated = false;
            for row in &rows {
                violated |= row.violation;
                report.line(format!(
                    "member {} expansions {}{}",
                    row.member,
                    row.expansion_count,
                    if row.violation { " VIOLATION" } else { "" }
                ));
            }
            report.emit(out.as_deref())?;
            Ok(if violated { 1 } else { 0 })
        }
        Command::LowerBound {
            pattern,
            big,
            expanded,
            t,
            out,
        } => {
            let a = io::read_structure_file(&pattern)?;
            let b = io::read_structure_file(&big)?;
            let k_star = io::load_fragment(&expanded)?;
            let result = check_lower_bound(&a, &b, &k_star, t)?;
            report.line(format!(
                "verdict: {}",
                if result.holds { "holds" } else { "fails" }
            ));
            for row in &result.rows {
                report.line(format!(
                    "expansion {} distinct-inner {}",
                    row.expansion, row.distinct_inner_expansions
                ));
            }
            report.emit(out.as_deref())?;
            Ok(if result.holds { 0 } else { 1 })
        }
        Command::ExpansionProperty {
            base,
            expanded,
            out,
        } => {
            let k = io::load_fragment(&base)?;
            let k_star = io::load_fragment(&expanded)?;
            let rows = check_expansion_property(&k, &k_star)?;
            let mut all_witnessed = true;
            for row in &rows {
                let text = match &row.witness {
                    ExpansionWitness::Witness(code) => format!("witness {}", code),
                    ExpansionWitness::NoExpansions => {
                        all_witnessed = false;
                        "no expansions in fragment".to_string()
                    }
                    ExpansionWitness::NoWitnessWithinFragment => {
                        all_witnessed = false;
                        "no witness within fragment".to_string()
                    }
                };
                report.line(format!("member {} {}", row.member, text));
            }
            report.emit(out.as_deref())?;
            Ok(if all_witnessed { 0 } else { 2 })
        }
        Command::Reasonability {
            base,
            expanded,
            out,
        } => {
            let k = io::load_fragment(&base)?;
            let k_star = io::load_fragment(&expanded)?;
            let result = check_reasonability(&k, &k_star)?;
            if result.holds {
                report.line("verdict: reasonable");
                report.emit(out.as_deref())?;
                Ok(0)
            } else {
                let (a, b, pi, a_star) = result.counterexample.unwrap();
                report.line("verdict: fails");
                report.line(format!(
                    "counterexample: embedding {:?} of {} into {} with expansion {}",
                    pi,
                    a,
                    b,
                    canonical_form(&a_star)
                ));
                report.emit(out.as_deref())?;
                Ok(1)
            }
        }
        Command::Ramsey {
            expanded,
            host_limit,
            out,
        } => {
            let k_star = io::load_fragment(&expanded)?;
            let rows = check_ramsey_property(&k_star, host_limit, &cfg)?;
            let mut undecided = false;
            for row in &rows {
                let text = match &row.verdict {
                    RamseyPairVerdict::Holds { host } => format!("holds with host {}", host),
                    RamseyPairVerdict::UndecidedWithinFragment => {
                        undecided = true;
                        "undecided within fragment".to_string()
                    }
                };
                report.line(format!("pair A={} B={}: {}", row.pattern, row.big, text));
            }
            report.emit(out.as_deref())?;
            Ok(if undecided { 2 } else { 0 })
        }
        Command::Rigidity { fragment, out } => {
            let k_star = io::load_fragment(&fragment)?;
            let result = check_rigidity(&k_star)?;
            if result.rigid {
                report.line("verdict: rigid");
                report.emit(out.as_deref())?;
                Ok(0)
            } else {
                report.line(format!(
                    "verdict: non-rigid member {}",
                    result.non_rigid_member.unwrap()
                ));
                report.emit(out.as_deref())?;
                Ok(1)
            }
        }
        Command::Generate { family, out } => {
            let spec = FamilySpec::parse(&family)?;
            let frag = generate_fragment(&spec)?;
            let manifest = io::save_fragment(&out, &frag)?;
            report.line(format!("family: {}", spec.spec_string()));
            report.line(format!("members: {}", frag.len()));
            report.line(format!("manifest: {}", manifest.display()));
            report.emit(None)?;
            Ok(0)
        }
        Command::Validate { fragment, out } => {
            let frag = io::load_fragment(&fragment)?;
            let result = validate_fragment(&frag)?;
            report.line(format!("hereditary: {}", result.hereditary));
            for (idx, code) in &result.hereditary_violations {
                report.line(format!("missing substructure of member {}: {}", idx, code));
            }
            report.line(format!(
                "jep-within-fragment: {}",
                result.jep_within_fragment
            ));
            for (i, j) in &result.jep_unwitnessed {
                report.line(format!("jep not witnessed: members {} and {}", i, j));
            }
            report.emit(out.as_deref())?;
            if !result.hereditary {
                Ok(1)
            } else if !result.jep_within_fragment {
                Ok(2)
            } else {
                Ok(0)
            }
        }
        Command::ExportCnf {
            host,
            big,
            pattern,
            k,
            t,
            out,
            legend,
        } => {
            let stmt = ArrowStatement::new(
                io::read_structure_file(&host)?,
                io::read_structure_file(&big)?,
                io::read_structure_file(&pattern)?,
                k,
                t,
            )?;
            let export = export_cnf(&stmt)?;
            std::fs::write(&out, export.cnf.to_dimacs())?;
            let legend_path = legend.unwrap_or_else(|| out.with_extension("legend"));
            std::fs::write(&legend_path, export.legend_text())?;
            report.line(format!("cnf: {}", out.display()));
            report.line(format!("legend: {}", legend_path.display()));
            report.line(format!("vars: {}", export.cnf.num_vars));
            report.line(format!("clauses: {}", export.cnf.clauses.len()));
            report.emit(None)?;
            Ok(0)
        }
    }
}
