//! Command-line front end: group reports, pair classification, block
//! pattern emission, norms, verification suites, and the admissibility
//! catalog. All commands are deterministic given their flags and `--seed`.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gify::group::{
    automorphisms, automorphisms_fixing, center, inner_automorphisms, is_admissible, is_balanced,
    Automorphism, FiniteGroup, Subgroup,
};
use gify::induced::InducedSpace;
use gify::jsonio;
use gify::matrix_form::{build_tables, template};
use gify::norm::{level_norm, reasonableness_check};
use gify::report::NormReport;
use gify::space::{make_root_of_unity_action, make_sign_action, scalar_basis, Field, ModularSpace};
use gify::verify;
use gify::{Error, Result};

#[derive(Parser)]
#[command(
    name = "gify",
    about = "Induced matrix operator spaces over finite groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed for sampled checks.
    #[arg(long, global = true, default_value_t = gify::DEFAULT_SEED)]
    seed: u64,
    /// Tolerance for norm and identity comparisons.
    #[arg(long, global = true, default_value_t = gify::DEFAULT_TOL)]
    tol: f64,
    /// Seeded samples per check.
    #[arg(long, global = true, default_value_t = gify::DEFAULT_SAMPLES)]
    samples: usize,
    /// Deepest matrix level for sampled norm checks.
    #[arg(long, global = true, default_value_t = gify::DEFAULT_MAX_LEVEL)]
    max_level: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report order, center, and automorphism counts of a group.
    Group { spec: String },
    /// Classify a central pair: admissibility and balance with witnesses.
    Pair {
        spec: String,
        /// Subgroup element indices, comma-separated.
        subgroup: String,
        /// Automorphism set: "aut", "inn", or a JSON file of permutations.
        #[arg(long, default_value = "aut")]
        gamma: String,
    },
    /// Print the block pattern of a pair.
    Template { spec: String, subgroup: String },
    /// Norm of an element given by a coefficient file.
    Norm {
        spec: String,
        subgroup: String,
        /// Modular space JSON file.
        #[arg(long)]
        space: String,
        /// Coefficient JSON file ({"coeffs": [...]} or {"entries": [[...]]}).
        #[arg(long)]
        coeffs: String,
        /// Expected grid level; checked against the file when given.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Run a named verification suite; exits nonzero on failure.
    Verify {
        /// One of: sum-zero, fixed-points, algebra, reasonable, restriction,
        /// stages, acting-algebra, tensor, monic, mu-injective, recovery,
        /// aligned, expectation, projection.
        suite: String,
        #[arg(long)]
        group: String,
        /// Subgroup element indices, comma-separated.
        #[arg(long)]
        subgroup: String,
        /// Modular space JSON file; defaults to scalars with the canonical
        /// action when the subgroup is cyclic.
        #[arg(long)]
        space: Option<String>,
        /// Automorphism set: "aut", "inn", or a JSON file of permutations.
        #[arg(long)]
        gamma: Option<String>,
        /// Middle subgroup for the stages suite.
        #[arg(long)]
        h2: Option<String>,
    },
    /// Admissibility catalog over the built-in families (CSV, or JSON with --json).
    Catalog {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_subgroup(g: &FiniteGroup, s: &str) -> Result<Subgroup> {
    Subgroup::from_elements(g, &jsonio::parse_elements(s)?)
}

fn gamma_from_selector(g: &FiniteGroup, h: &Subgroup, selector: &str) -> Result<Vec<Automorphism>> {
    match selector {
        "aut" => automorphisms_fixing(g, h),
        "inn" => Ok(inner_automorphisms(g)),
        path => {
            let v = load_json(path)?;
            let perms: Vec<Vec<usize>> = serde_json::from_value(v)?;
            Ok(perms
                .into_iter()
                .map(|perm| Automorphism { perm })
                .collect())
        }
    }
}

/// Scalars with the canonical cyclic action matching the subgroup order:
/// the sign action for order 2, roots of unity otherwise.
fn default_space(g: &FiniteGroup, h: &Subgroup) -> Result<ModularSpace> {
    let n = h.len();
    if n == 2 {
        make_sign_action(Field::Real, 1, scalar_basis())
    } else {
        make_root_of_unity_action(n, Field::Complex, 1, scalar_basis())
    }
    .and_then(|space| {
        // surface a clear error when the subgroup is not cyclic in sorted order
        if space.h_group.table() == h.as_group(g).table() {
            Ok(space)
        } else {
            Err(Error::Precondition(
                "no default space for this subgroup shape; pass --space".into(),
            ))
        }
    })
}

fn emit(report: &gify::report::VerdictReport) -> Result<ExitCode> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Group { spec } => {
            let g = jsonio::parse_group_spec(spec)?;
            let z = center(&g);
            let auts = automorphisms(&g)?;
            let inn = inner_automorphisms(&g);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "name": g.name(),
                        "order": g.order(),
                        "labels": g.labels(),
                        "center": z.elements(),
                        "autOrder": auts.len(),
                        "innOrder": inn.len(),
                    }))?
                );
            } else {
                println!("group: {}", g.name());
                println!("order: {}", g.order());
                println!("labels: {}", g.labels().join(" "));
                let center_labels: Vec<&str> = z.elements().iter().map(|&e| g.label(e)).collect();
                println!(
                    "center: {{{}}} (order {})",
                    center_labels.join(", "),
                    z.len()
                );
                println!("automorphisms: {}", auts.len());
                println!("inner automorphisms: {}", inn.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pair {
            spec,
            subgroup,
            gamma,
        } => {
            let g = jsonio::parse_group_spec(spec)?;
            let h = parse_subgroup(&g, subgroup)?;
            if let Some((elem, with)) = h.centrality_violation(&g) {
                return Err(Error::NotCentral { elem, with });
            }
            let chosen = gamma_from_selector(&g, &h, gamma)?;
            let via_aut = is_admissible(&g, &h, &automorphisms_fixing(&g, &h)?)?;
            let via_chosen = is_admissible(&g, &h, &chosen)?;
            let balance = is_balanced(&g, &h, &chosen)?;
            let payload = json!({
                "group": g.name(),
                "subgroup": h.elements(),
                "gamma": gamma,
                "admissibleAut": via_aut.admissible,
                "admissibleAutWitness": via_aut.witness,
                "admissibleGamma": via_chosen.admissible,
                "admissibleGammaWitness": via_chosen.witness,
                "balancedGamma": balance.balanced,
                "balanceReason": balance.reason,
            });
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&payload)?);
            } else {
                println!("pair ({}, {:?})", g.name(), h.elements());
                println!("admissible (full automorphism set): {}", via_aut.admissible);
                if let Some((ge, he)) = via_aut.witness {
                    println!(
                        "  witness: element {} misses subgroup element {}",
                        g.label(ge),
                        g.label(he)
                    );
                }
                println!("admissible ({gamma}): {}", via_chosen.admissible);
                println!("balanced ({gamma}): {}", balance.balanced);
                if let Some(r) = balance.reason {
                    println!("  reason: {r}");
                }
            }
            let ok = via_aut.admissible || via_chosen.admissible;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Template { spec, subgroup } => {
            let g = jsonio::parse_group_spec(spec)?;
            let h = parse_subgroup(&g, subgroup)?;
            let t = template(&g, &h)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&t)?);
            } else {
                print!("{}", t.render_ascii(&g, &h));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm {
            spec,
            subgroup,
            space,
            coeffs,
            level,
        } => {
            let g = jsonio::parse_group_spec(spec)?;
            let h = parse_subgroup(&g, subgroup)?;
            let sp = jsonio::space_from_json(&load_json(space)?)?;
            let ctx = InducedSpace::new(g, h, sp)?;
            let tables = build_tables(&ctx)?;
            let grid_mats = jsonio::coeffs_from_json(&load_json(coeffs)?)?;
            if let Some(expected) = level {
                if grid_mats.len() != *expected {
                    return Err(Error::Dimension(format!(
                        "coefficient file has level {}, expected {expected}",
                        grid_mats.len()
                    )));
                }
            }
            let grid = grid_mats
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|coeffs| {
                            let phi = gify::induced::InducedElement { coeffs };
                            let residual = ctx.membership(&phi)?;
                            if residual > cli.tol {
                                return Err(Error::NotMember { residual });
                            }
                            Ok(phi)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let value = level_norm(&ctx, &tables, &grid)?;
            if cli.json {
                let report = NormReport::new(grid.len(), value, cli.seed);
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            group,
            subgroup,
            space,
            gamma,
            h2,
        } => {
            let g = jsonio::parse_group_spec(group)?;
            let h = parse_subgroup(&g, subgroup)?;
            let sp = match space {
                Some(path) => jsonio::space_from_json(&load_json(path)?)?,
                None => default_space(&g, &h)?,
            };
            run_suite(cli, suite, g, h, sp, gamma.as_deref(), h2.as_deref())
        }
        Command::Catalog { max_order } => {
            let rows = gify::catalog::catalog(*max_order)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                print!("{}", gify::catalog::to_csv(&rows));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_suite(
    cli: &Cli,
    suite: &str,
    g: FiniteGroup,
    h: Subgroup,
    sp: ModularSpace,
    gamma: Option<&str>,
    h2: Option<&str>,
) -> Result<ExitCode> {
    if suite == "stages" {
        let mid = h2.ok_or_else(|| {
            Error::Precondition("the stages suite needs --h2 for the middle subgroup".into())
        })?;
        let h2sub = parse_subgroup(&g, mid)?;
        let report = verify::check_stages(&g, &h, &h2sub, &sp, cli.samples, cli.tol, cli.seed)?;
        return emit(&report);
    }
    let ctx = InducedSpace::new(g, h, sp)?;
    let tables = build_tables(&ctx)?;
    let default_gamma = |sel: &str| gamma_from_selector(&ctx.group, &ctx.subgroup, sel);
    let report = match suite {
        "sum-zero" => {
            let gm = default_gamma(gamma.unwrap_or("aut"))?;
            verify::check_sum_zero(&ctx, &gm, cli.seed)?
        }
        "fixed-points" => {
            let gm = default_gamma(gamma.unwrap_or("aut"))?;
            verify::check_fixed_points(&ctx, &gm, ctx.space.dim(), cli.seed)?
        }
        "algebra" => verify::check_algebra(&ctx, cli.samples, cli.tol, cli.seed)?,
        "reasonable" => {
            let gm = default_gamma(gamma.unwrap_or("aut"))?;
            reasonableness_check(
                &ctx,
                &tables,
                &gm,
                cli.samples,
                cli.max_level,
                cli.tol,
                cli.seed,
            )?
        }
        "restriction" => {
            verify::check_restriction_to_center(&ctx, &tables, cli.samples, cli.tol, cli.seed)?
        }
        "acting-algebra" => verify::acting_algebra(&ctx, &tables, cli.seed)?.report,
        "tensor" => verify::check_tensor_identity(&ctx, &tables, cli.samples, cli.tol, cli.seed)?,
        "monic" => {
            let rep = verify::ConcreteRepresentation::canonical(&ctx, &tables);
            verify::check_monic(&ctx, &rep, cli.seed)?.report
        }
        "mu-injective" => {
            let rep = verify::ConcreteRepresentation::canonical(&ctx, &tables);
            let gm = default_gamma(gamma.unwrap_or("aut"))?;
            verify::check_integrated_injectivity(
                &ctx,
                &rep,
                &gm,
                verify::InjectivityMode::RequireAdmissible,
                cli.seed,
            )?
        }
        "recovery" => {
            let gm = default_gamma(gamma.unwrap_or("inn"))?;
            let (y, action) = verify::canonical_gmodular(&ctx, &tables, &gm)?;
            verify::recover_base(
                &ctx.group,
                &ctx.subgroup,
                &y,
                &action,
                cli.samples,
                cli.seed,
            )?
            .report
        }
        "aligned" => {
            let gm = default_gamma(gamma.unwrap_or("inn"))?;
            let (y, action) = verify::canonical_gmodular(&ctx, &tables, &gm)?;
            verify::check_aligned(&ctx.group, &ctx.subgroup, &y, &action, cli.seed)?
        }
        "expectation" => verify::check_expectation(&ctx, &tables, cli.samples, cli.tol, cli.seed)?,
        "projection" => verify::check_hilbert_projection(&ctx, cli.seed)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown verification suite {other:?}"
            )));
        }
    };
    emit(&report)
}
