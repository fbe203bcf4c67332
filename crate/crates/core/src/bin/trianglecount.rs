use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use trianglecount::chartab::{cross_check, parse_table, validate, CharacterTable};
use trianglecount::exactnum::{format_rational, Rational};
use trianglecount::hurwitz::{classify_hurwitz_subgroups, enumerate_triples, TripleType};
use trianglecount::ledger::{parse_ledger, verify_ledger, LedgerContext};
use trianglecount::permgroup::{conjugacy_classes, parse_grp, ClassList, NamedGroup};
use trianglecount::report::Report;
use trianglecount::structconst::{brute_force_count, frobenius_count, normalized_constant};

#[derive(Parser)]
#[command(
    name = "trianglecount",
    version,
    about = "Exact (2,3,7) structure constants and Hurwitz subgroup accounting"
)]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "TRIANGLECOUNT_JOBS")]
    jobs: Option<usize>,
    /// Print only failures and summaries
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check orthogonality, degrees and power maps of a character table
    Validate { table: PathBuf },
    /// Class multiplication coefficient of three classes
    Sc {
        table: PathBuf,
        c1: String,
        c2: String,
        c3: String,
        /// Print n_G = count / |G|
        #[arg(long)]
        normalized: bool,
        /// Recount by multiplying elements of this realization
        #[arg(long, value_name = "GRP")]
        brute_force: Option<PathBuf>,
    },
    /// Enumerate (2,3,7) triples of a permutation group
    Hurwitz {
        group: PathBuf,
        /// Classify generated subgroups and check the accounting identity
        #[arg(long)]
        classify: bool,
        /// Compare triple counts with the constants of this table
        #[arg(long, value_name = "CTAB")]
        table: Option<PathBuf>,
    },
    /// Verify a ledger of contributions, fusions and appendix rows
    Ledger {
        ledger: PathBuf,
        /// Directory of .ctab/.grp files for the cross-checks
        #[arg(long, value_name = "DIR")]
        with_tables: Option<PathBuf>,
    },
}

/// Exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<bool, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<CharacterTable, InputError> {
    parse_table(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<NamedGroup, InputError> {
    parse_grp(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

struct Out {
    quiet: bool,
}

impl Out {
    fn report(&self, r: &Report) {
        for c in &r.checks {
            if !self.quiet || !c.passed {
                println!("{c}");
            }
        }
    }

    fn info(&self, s: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", s.as_ref());
        }
    }

    fn summary(&self, r: &Report) {
        let passed = r.checks.iter().filter(|c| c.passed).count();
        println!("{passed}/{} checks passed", r.checks.len());
    }
}

fn cmd_validate(out: &Out, path: &Path) -> CmdResult {
    let t = load_table(path)?;
    out.info(format!(
        "{}: order {}, {} classes",
        t.name,
        t.order,
        t.class_count()
    ));
    let r = validate(&t);
    out.report(&r);
    out.summary(&r);
    Ok(r.passed())
}

fn cmd_sc(
    out: &Out,
    path: &Path,
    labels: [&str; 3],
    normalized: bool,
    brute: Option<&Path>,
) -> CmdResult {
    let t = load_table(path)?;
    let count = frobenius_count(&t, labels[0], labels[1], labels[2])?;
    let value = if normalized {
        normalized_constant(&t, labels[0], labels[1], labels[2])?
    } else {
        Rational::from_integer(count.clone())
    };
    println!("{}", format_rational(&value));
    let Some(gpath) = brute else {
        return Ok(true);
    };
    let g = load_group(gpath)?.group;
    let cl = conjugacy_classes(&g)?;
    let cc = cross_check(&t, &g, &cl);
    if cc.matchings.is_empty() {
        out.report(&cc.report);
        println!(
            "FAIL brute force: {} does not match the table",
            gpath.display()
        );
        return Ok(false);
    }
    let resolved: Vec<Vec<usize>> = labels
        .iter()
        .map(|l| t.resolve(l))
        .collect::<Result<_, _>>()?;
    let mut seen = Vec::new();
    for m in &cc.matchings {
        let [a, b, c] = [0, 1, 2].map(|i| resolved[i].iter().map(|&k| m[k]).collect::<Vec<_>>());
        let n = brute_force_count(&cl, &a, &b, &c)?;
        if BigInt::from(n) == count {
            let shown = if normalized {
                format_rational(&Rational::new(BigInt::from(n), BigInt::from(g.order())))
            } else {
                n.to_string()
            };
            out.info(format!("PASS brute force: {shown}"));
            return Ok(true);
        }
        seen.push(n);
    }
    seen.sort();
    seen.dedup();
    println!("FAIL brute force: counted {seen:?}, formula gives {count}");
    Ok(false)
}

fn class_profile(cl: &ClassList) -> String {
    cl.classes
        .iter()
        .map(|c| format!("{}:{}", c.label, c.size))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_hurwitz(out: &Out, path: &Path, classify: bool, table: Option<&Path>) -> CmdResult {
    let named = load_group(path)?;
    let g = &named.group;
    let table = table.map(load_table).transpose()?;
    let cl = conjugacy_classes(g)?;
    out.info(format!(
        "{}: order {}, {} classes",
        named.name,
        g.order(),
        cl.len()
    ));
    out.info(format!("classes {}", class_profile(&cl)));
    let orbits = enumerate_triples(g, &cl, None)?;
    if orbits.is_empty() {
        println!("no Hurwitz triples");
        return Ok(true);
    }
    let mut types: Vec<[usize; 3]> = orbits.iter().map(|o| o.classes).collect();
    types.sort();
    types.dedup();
    let mut report = Report::new();
    for classes in &types {
        let ty = TripleType::of_classes(&cl, *classes);
        let n: u64 = orbits
            .iter()
            .filter(|o| o.classes == *classes)
            .map(|o| o.orbit_size)
            .sum();
        println!(
            "type {ty}: {n} triples, n_G = {}",
            format_rational(&Rational::new(BigInt::from(n), BigInt::from(g.order())))
        );
    }
    let total: u64 = orbits.iter().map(|o| o.orbit_size).sum();
    println!("total: {total} triples in {} orbits", orbits.len());

    if let Some(t) = &table {
        let cc = cross_check(t, g, &cl);
        report.extend(cc.report.clone());
        if let Some(m) = cc.matchings.first() {
            // every exact type, not only those that occur
            let inv = |gc: usize| {
                m.iter()
                    .position(|&x| x == gc)
                    .expect("matching is a bijection")
            };
            for a in cl.of_order(2) {
                for b in cl.of_order(3) {
                    for c in cl.of_order(7) {
                        let labels = [a, b, c].map(|k| t.classes[inv(k)].label.clone());
                        let frob = normalized_constant(t, &labels[0], &labels[1], &labels[2])?;
                        let n: u64 = orbits
                            .iter()
                            .filter(|o| o.classes == [a, b, c])
                            .map(|o| o.orbit_size)
                            .sum();
                        let counted = Rational::new(BigInt::from(n), BigInt::from(g.order()));
                        report.push(
                            format!("table constant ({})", labels.join(",")),
                            frob == counted,
                            format!(
                                "table {}, enumeration {}",
                                format_rational(&frob),
                                format_rational(&counted)
                            ),
                        );
                    }
                }
            }
        }
    }

    if classify {
        let c = classify_hurwitz_subgroups(g, &cl, &[])?;
        println!("{} subgroup classes", c.subgroups.len());
        for (i, s) in c.subgroups.iter().enumerate() {
            println!(
                "class {i}: {} order {}, normalizer order {}, index {}",
                s.iso_label,
                s.order(),
                s.normalizer_order,
                s.index()
            );
        }
        for ts in &c.types {
            for h in &ts.classes {
                out.info(format!(
                    "  {} in class {}: n_H {}, generating {}, contribution {}",
                    ts.ty,
                    h.subgroup_class,
                    format_rational(&h.fused_constant),
                    format_rational(&h.generating_constant),
                    format_rational(&h.contribution)
                ));
            }
            report.extend(ts.accounting().report());
        }
    }
    out.report(&report);
    if !report.checks.is_empty() {
        out.summary(&report);
    }
    Ok(report.passed())
}

fn cmd_ledger(out: &Out, path: &Path, dir: Option<&Path>) -> CmdResult {
    let ledger =
        parse_ledger(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let ctx = dir
        .map(LedgerContext::load_dir)
        .transpose()
        .map_err(InputError)?;
    let outcome = verify_ledger(&ledger, ctx.as_ref());
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    out.report(&outcome.report);
    out.summary(&outcome.report);
    if let Some(v) = &outcome.verdict {
        println!("{v}");
    }
    Ok(outcome.report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is built once");
    }
    let out = Out { quiet: cli.quiet };
    let result = match &cli.command {
        Command::Validate { table } => cmd_validate(&out, table),
        Command::Sc {
            table,
            c1,
            c2,
            c3,
            normalized,
            brute_force,
        } => cmd_sc(
            &out,
            table,
            [c1, c2, c3],
            *normalized,
            brute_force.as_deref(),
        ),
        Command::Hurwitz {
            group,
            classify,
            table,
        } => cmd_hurwitz(&out, group, *classify, table.as_deref()),
        Command::Ledger {
            ledger,
            with_tables,
        } => cmd_ledger(&out, ledger, with_tables.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
