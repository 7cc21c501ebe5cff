//! Command-line front end: argument parsing, eigenvalue-file ingestion and
//! report emission.

pub mod eigendata;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use eiscong::congruence::{charpoly_compat, check_harder, check_ramanujan};
use eiscong::exactmath::{bernoulli, format_rational, is_prime, primes_up_to};
use eiscong::lfunction::{self, format_rational_sci, format_sci};
use eiscong::modforms::{cusp_dim_level1, eigen_systems_level1, eigenforms_level1};
use eiscong::satake::{self, Family, MatchOutcome, Rarity, TargetSource, TYPE_TABLE};
use eiscong::traceformula::{charpoly_tq_new, new_dim};
use eiscong::{CongruenceTarget, EigenSystem, ResidueField};

use eigendata::Role;
pub use report::{list, Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "eiscong",
    version,
    about = "Eisenstein congruences for genus-2 Siegel modular forms"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps over several primes; output order is fixed.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact Bernoulli number B_n.
    Bernoulli { n: usize },
    /// Primes dividing (B_k / 2k) prod_{p in Sigma} (p^k - 1).
    ZetaPrimes {
        /// Even weight k.
        #[arg(long)]
        weight: u32,
        /// Primes p in Sigma, comma separated.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<u64>,
    },
    /// Hecke eigenforms of level one, one per Galois orbit.
    Eigenforms {
        /// Even weight.
        #[arg(long)]
        weight: i64,
        /// Largest prime q listed.
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        /// Write the chosen orbit as an eigendata file.
        #[arg(long)]
        write: Option<PathBuf>,
        /// Galois orbit index for --write.
        #[arg(long, default_value_t = 0)]
        orbit: usize,
    },
    /// Characteristic polynomial of T_q on the new subspace of level p.
    NewformCharpoly {
        /// Even weight.
        #[arg(long)]
        weight: i64,
        /// Prime level p.
        #[arg(long)]
        level: u64,
        /// Prime q.
        #[arg(long)]
        q: u64,
        /// Write the rational newform (new dimension 1 only) as an eigendata file.
        #[arg(long)]
        write: Option<PathBuf>,
        /// Precision used to fix the sign of a_p for --write.
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Completed L-value at a critical integer, with its functional-equation residual.
    Lvalue {
        #[command(flatten)]
        source: FormSource,
        /// Critical integer, 1 <= s <= k - 1.
        #[arg(long)]
        s: i64,
        /// Decimal digits.
        #[arg(long, default_value_t = 50)]
        digits: u32,
        /// Complex embedding of the Hecke field.
        #[arg(long, default_value_t = 0)]
        embedding: usize,
    },
    /// Candidate congruence primes from the critical ratio Lambda(j+k) / Lambda(m0).
    CriticalPrimes {
        /// Even j > 0.
        #[arg(long)]
        j: i64,
        /// k >= 3.
        #[arg(long)]
        k: i64,
        /// Eigendata file; otherwise the level-one orbit of weight j + 2k - 2.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Galois orbit index.
        #[arg(long, default_value_t = 0)]
        orbit: usize,
        /// Decimal digits; ratios are confirmed at twice this.
        #[arg(long, default_value_t = 60)]
        digits: u32,
    },
    /// Representation types compatible with the Satake parameters mod ell.
    SatakeFilter {
        #[command(flatten)]
        local: LocalArgs,
        /// k >= 3.
        #[arg(long)]
        k: i64,
        /// Which Satake parameters to test.
        #[arg(long, value_enum, default_value_t = Source::LevelP)]
        source: Source,
    },
    /// Whether p^(j+2t) = 1 in F_(ell^f) for some t in 0..=3.
    LocalOrigin {
        #[command(flatten)]
        local: LocalArgs,
    },
    /// Smallest auxiliary prime for the Borel-image argument.
    WitnessPrime {
        /// Prime ell.
        #[arg(long)]
        ell: u64,
        /// Residue degree.
        #[arg(long, default_value_t = 1)]
        f: u32,
    },
    /// Check b_q = q^(k-2) + a_q + q^(j+k-1) modulo primes above ell.
    HarderCheck {
        /// Eigendata file of the level-p form of weight j + 2k - 2.
        #[arg(long)]
        elliptic: PathBuf,
        /// Eigendata file of the genus-2 form.
        #[arg(long)]
        genus2: PathBuf,
        /// Even j > 0.
        #[arg(long)]
        j: i64,
        /// k >= 3.
        #[arg(long)]
        k: i64,
        /// Level prime, skipped in every check.
        #[arg(long)]
        p: u64,
        /// Congruence prime.
        #[arg(long)]
        ell: u64,
        /// Largest prime q tested.
        #[arg(long, default_value_t = 50)]
        qmax: u64,
        /// Also test against the level-p characteristic polynomials.
        #[arg(long)]
        compat: bool,
    },
    /// Check a_q = 1 + q^(k'-1) modulo primes above ell.
    RamanujanCheck {
        #[command(flatten)]
        source: FormSource,
        /// Congruence prime.
        #[arg(long)]
        ell: u64,
        /// Largest prime q tested.
        #[arg(long, default_value_t = 50)]
        qmax: u64,
    },
    /// Borel guard, power conditions and Bernoulli valuation for (j, k, p, ell).
    Verdict {
        #[command(flatten)]
        local: LocalArgs,
        /// k >= 3, with ell > j + 2k - 2.
        #[arg(long)]
        k: i64,
        /// Ramification index of ell in the coefficient field.
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
}

/// Where an elliptic eigen-system comes from.
#[derive(Args, Debug, Clone)]
pub struct FormSource {
    /// Eigendata file.
    #[arg(long, conflicts_with_all = ["weight", "level"])]
    pub input: Option<PathBuf>,
    /// Even weight of a generated form.
    #[arg(long)]
    pub weight: Option<i64>,
    /// Prime level; the new space must be one-dimensional.
    #[arg(long)]
    pub level: Option<u64>,
    /// Galois orbit index of a level-one form.
    #[arg(long, default_value_t = 0)]
    pub orbit: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LocalArgs {
    /// Even j >= 0.
    #[arg(long)]
    pub j: i64,
    /// Level prime.
    #[arg(long)]
    pub p: u64,
    /// One or more primes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<u64>,
    /// Residue degree of the prime above ell.
    #[arg(long, default_value_t = 1)]
    pub f: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    LevelP,
    LocalOrigin,
}

/// Every parameter of a run, printed ahead of the report.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<&'static str, String>,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: String,
    pub jobs: usize,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Self {
        let mut c = RunConfig {
            format: cli.format.name().into(),
            jobs: cli.jobs,
            output: cli.output.clone(),
            ..Default::default()
        };
        let mut set = |k: &'static str, v: String| {
            c.params.insert(k, v);
        };
        let name;
        let mut inputs = Vec::new();
        match &cli.command {
            Command::Bernoulli { n } => {
                name = "bernoulli";
                set("n", n.to_string());
            }
            Command::ZetaPrimes { weight, sigma } => {
                name = "zeta-primes";
                set("weight", weight.to_string());
                set("sigma", list(sigma));
            }
            Command::Eigenforms {
                weight,
                qmax,
                write,
                orbit,
            } => {
                name = "eigenforms";
                set("weight", weight.to_string());
                set("qmax", qmax.to_string());
                set("orbit", orbit.to_string());
                if let Some(w) = write {
                    set("write", w.display().to_string());
                }
            }
            Command::NewformCharpoly {
                weight,
                level,
                q,
                write,
                digits,
            } => {
                name = "newform-charpoly";
                set("weight", weight.to_string());
                set("level", level.to_string());
                set("q", q.to_string());
                set("digits", digits.to_string());
                if let Some(w) = write {
                    set("write", w.display().to_string());
                }
            }
            Command::Lvalue {
                source,
                s,
                digits,
                embedding,
            } => {
                name = "lvalue";
                source_params(source, &mut set, &mut inputs);
                set("s", s.to_string());
                set("digits", digits.to_string());
                set("embedding", embedding.to_string());
            }
            Command::CriticalPrimes {
                j,
                k,
                input,
                orbit,
                digits,
            } => {
                name = "critical-primes";
                set("j", j.to_string());
                set("k", k.to_string());
                set("orbit", orbit.to_string());
                set("digits", digits.to_string());
                inputs.extend(input.clone());
            }
            Command::SatakeFilter { local, k, source } => {
                name = "satake-filter";
                local_params(local, &mut set);
                set("k", k.to_string());
                set(
                    "source",
                    source
                        .to_possible_value()
                        .expect("no skipped variants")
                        .get_name()
                        .to_string(),
                );
            }
            Command::LocalOrigin { local } => {
                name = "local-origin";
                local_params(local, &mut set);
            }
            Command::WitnessPrime { ell, f } => {
                name = "witness-prime";
                set("ell", ell.to_string());
                set("f", f.to_string());
            }
            Command::HarderCheck {
                elliptic,
                genus2,
                j,
                k,
                p,
                ell,
                qmax,
                compat,
            } => {
                name = "harder-check";
                set("j", j.to_string());
                set("k", k.to_string());
                set("p", p.to_string());
                set("ell", ell.to_string());
                set("qmax", qmax.to_string());
                set("compat", compat.to_string());
                inputs.push(elliptic.clone());
                inputs.push(genus2.clone());
            }
            Command::RamanujanCheck { source, ell, qmax } => {
                name = "ramanujan-check";
                source_params(source, &mut set, &mut inputs);
                set("ell", ell.to_string());
                set("qmax", qmax.to_string());
            }
            Command::Verdict { local, k, e } => {
                name = "verdict";
                local_params(local, &mut set);
                set("k", k.to_string());
                set("e", e.to_string());
            }
        }
        c.command = name.into();
        c.inputs = inputs;
        c
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new("run config");
        r.push("command", &self.command);
        for (k, v) in &self.params {
            r.push(*k, v);
        }
        r.push("inputs", list(self.inputs.iter().map(|p| p.display())));
        r.push(
            "output",
            self.output
                .as_ref()
                .map_or("stdout".into(), |p| p.display().to_string()),
        );
        r.push("format", &self.format);
        r.push("jobs", self.jobs);
        r
    }
}

fn source_params(
    s: &FormSource,
    set: &mut impl FnMut(&'static str, String),
    inputs: &mut Vec<PathBuf>,
) {
    inputs.extend(s.input.clone());
    if let Some(w) = s.weight {
        set("weight", w.to_string());
    }
    set("level", s.level.unwrap_or(1).to_string());
    set("orbit", s.orbit.to_string());
}

fn local_params(l: &LocalArgs, set: &mut impl FnMut(&'static str, String)) {
    set("j", l.j.to_string());
    set("p", l.p.to_string());
    set("ell", list(&l.ell));
    set("f", l.f.to_string());
}

/// Parse `args` (program name first), run one command and return the exit
/// code. Reports go to `out` unless `--output` names a file; errors go to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => EXIT_OK,
                InvalidSubcommand
                | UnknownArgument
                | MissingSubcommand
                | DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_PRECONDITION,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let config = RunConfig::from_cli(&cli);
    let result = dispatch(&cli).and_then(|reports| {
        let mut text = config.report().render(cli.format);
        for r in &reports {
            text.push('\n');
            text.push_str(&r.render(cli.format));
        }
        match &cli.output {
            Some(path) => {
                std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))
            }
            None => out.write_all(text.as_bytes()).context("writing report"),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// 2 for failures of the computation itself, 1 for everything the caller
/// can fix.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    let lib = e.chain().find_map(|c| {
        c.downcast_ref::<eiscong::Error>().or_else(|| {
            match c.downcast_ref::<eigendata::EigenDataError>() {
                Some(eigendata::EigenDataError::Library(l)) => Some(l),
                _ => None,
            }
        })
    });
    match lib {
        Some(l) if !l.is_precondition() => EXIT_INTERNAL,
        _ => EXIT_PRECONDITION,
    }
}

fn require_prime(name: &str, n: u64) -> Result<()> {
    if !is_prime(n) {
        bail!("{name} = {n} is not prime");
    }
    Ok(())
}

fn validate_local(l: &LocalArgs) -> Result<()> {
    require_prime("p", l.p)?;
    for &ell in &l.ell {
        require_prime("ell", ell)?;
        if ell == l.p {
            bail!("ell = {ell} equals p");
        }
    }
    if l.f == 0 {
        bail!("f must be positive");
    }
    Ok(())
}

fn sweep<T: Send>(
    jobs: usize,
    ells: &[u64],
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    if jobs <= 1 || ells.len() <= 1 {
        return ells.iter().map(|&l| f(l)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building thread pool")?;
    pool.install(|| ells.par_iter().map(|&l| f(l)).collect())
}

fn level1_system(weight: i64, orbit: usize, qmax: u64) -> Result<EigenSystem> {
    let d = cusp_dim_level1(weight);
    if d == 0 {
        bail!("there are no cusp forms of weight {weight} and level 1");
    }
    let prec = (qmax as usize + 1).max(3 * (d + 1) + 1);
    let mut systems = eigen_systems_level1(weight, &primes_up_to(qmax), prec)?;
    if orbit >= systems.len() {
        bail!(
            "orbit {orbit} out of range: weight {weight} has {} orbits",
            systems.len()
        );
    }
    Ok(systems.swap_remove(orbit))
}

/// The system described by `src`, with eigenvalues for `q <= qmax` and
/// enough coefficients for L-values at `digits` (doubled for ratios).
fn load_system(src: &FormSource, qmax: u64, digits: u32) -> Result<EigenSystem> {
    if let Some(path) = &src.input {
        return Ok(eigendata::read(path)?.system);
    }
    let Some(weight) = src.weight else {
        bail!("give --input or --weight");
    };
    match src.level.unwrap_or(1) {
        1 => {
            let n = lfunction::series_cutoff(1, 2 * digits, 10.0 / 11.0).max(qmax);
            level1_system(weight, src.orbit, n)
        }
        p => {
            require_prime("level", p)?;
            Ok(lfunction::level_p_newform_from_traces(weight, p, digits)?.system)
        }
    }
}

fn describe_field(sys: &EigenSystem) -> String {
    if sys.degree() == 1 {
        return "Q".into();
    }
    format!("Q[a]/({})", sys.ctx.minpoly().to_string().replace('x', "a"))
}

fn dispatch(cli: &Cli) -> Result<Vec<Report>> {
    match &cli.command {
        Command::Bernoulli { n } => {
            let mut r = Report::new("bernoulli");
            r.push("n", n)
                .push("value", format_rational(&bernoulli(*n)));
            Ok(vec![r])
        }
        Command::ZetaPrimes { weight, sigma } => {
            let z = lfunction::zeta_sigma_primes(*weight, sigma)?;
            let mut r = Report::new("zeta primes");
            r.push("weight", weight)
                .push("sigma", list(sigma))
                .push("quantity", format_rational(&z.quantity))
                .push("primes", list(&z.primes));
            if let Some(u) = &z.unfactored {
                r.push("unfactored", u);
            }
            Ok(vec![r])
        }
        Command::Eigenforms {
            weight,
            qmax,
            write,
            orbit,
        } => {
            let d = cusp_dim_level1(*weight);
            let prec = (*qmax as usize + 1).max(3 * (d + 1) + 1);
            let forms = eigenforms_level1(*weight, prec)?;
            let primes = primes_up_to(*qmax);
            let mut reports = Vec::new();
            for (i, form) in forms.iter().enumerate() {
                let sys = form.to_system(&primes)?;
                let mut r = Report::new(format!("orbit {i}"));
                r.push("weight", weight)
                    .push("degree", sys.degree())
                    .push("field", describe_field(&sys));
                for (q, a) in &sys.values {
                    r.push(format!("a_{q}"), a);
                }
                reports.push(r);
                if i == *orbit {
                    if let Some(path) = write {
                        eigendata::write(path, &sys, Role::Elliptic)?;
                    }
                }
            }
            if write.is_some() && *orbit >= forms.len() {
                bail!(
                    "orbit {orbit} out of range: weight {weight} has {} orbits",
                    forms.len()
                );
            }
            if forms.is_empty() {
                let mut r = Report::new("eigenforms");
                r.push("weight", weight).push("orbits", 0);
                reports.push(r);
            }
            Ok(reports)
        }
        Command::NewformCharpoly {
            weight,
            level,
            q,
            write,
            digits,
        } => {
            require_prime("level", *level)?;
            let cp = charpoly_tq_new(*weight, *level, *q)?;
            let mut r = Report::new("new-space characteristic polynomial");
            r.push("weight", weight)
                .push("level", level)
                .push("new_dim", new_dim(*weight, *level)?)
                .push("q", q)
                .push("charpoly", &cp.poly);
            if let Some(path) = write {
                let form = lfunction::level_p_newform_from_traces(*weight, *level, *digits)?;
                r.push("a_p", form.system.eigenvalue(*level)?)
                    .push(
                        "residual_sign_minus",
                        format_rational_sci(&form.residual_minus_sign, 3),
                    )
                    .push(
                        "residual_sign_plus",
                        format_rational_sci(&form.residual_plus_sign, 3),
                    )
                    .push("written_primes", form.system.values.len());
                eigendata::write(path, &form.system, Role::Elliptic)?;
            }
            Ok(vec![r])
        }
        Command::Lvalue {
            source,
            s,
            digits,
            embedding,
        } => {
            let sys = load_system(source, 0, *digits)?;
            let v = lfunction::lambda_value(&sys, *s, *digits, *embedding)?;
            let residual = lfunction::functional_equation_residual(&sys, *s, *digits, *embedding)?;
            let mut r = Report::new("completed L-value");
            r.push("weight", sys.weight)
                .push("level", sys.level)
                .push("field", describe_field(&sys))
                .push("embedding", embedding)
                .push("s", s)
                .push("root_number", v.sign)
                .push("n_max", v.n_max)
                .push("lambda", format_sci(&v.value, (*digits as usize).min(40)))
                .push("fe_residual", format_rational_sci(&residual, 3));
            Ok(vec![r])
        }
        Command::CriticalPrimes {
            j,
            k,
            input,
            orbit,
            digits,
        } => {
            let src = FormSource {
                input: input.clone(),
                weight: Some(j + 2 * k - 2),
                level: None,
                orbit: *orbit,
            };
            let sys = load_system(&src, 0, *digits)?;
            let c = lfunction::candidate_congruence_primes(&sys, *j, *k, *digits)?;
            let mut r = Report::new("critical-value candidate primes");
            r.push("j", j)
                .push("k", k)
                .push("field", describe_field(&sys))
                .push("s", j + k)
                .push("m0", c.m0)
                .push("ratio", &c.ratio.ratio)
                .push("stable", c.ratio.stable)
                .push("ratio_residual", format_rational_sci(&c.ratio.residual, 3))
                .push("numerator_norm", &c.numerator_norm)
                .push("primes", list(c.primes.iter().map(|p| &p.ell)));
            if let Some(u) = &c.unfactored {
                r.push("unfactored", u);
            }
            r.push("flag", lfunction::CANDIDATE_FLAG);
            Ok(vec![r])
        }
        Command::SatakeFilter { local, k, source } => {
            validate_local(local)?;
            let src = match source {
                Source::LevelP => TargetSource::LevelPNewform,
                Source::LocalOrigin => TargetSource::LocalOrigin,
            };
            sweep(cli.jobs, &local.ell, |ell| {
                satake_filter(local, *k, ell, src)
            })
        }
        Command::LocalOrigin { local } => {
            validate_local(local)?;
            sweep(cli.jobs, &local.ell, |ell| {
                let field = std::sync::Arc::new(ResidueField::standard(ell, local.f)?);
                let rarity = satake::local_origin_rarity(local.j, local.p, &field)?;
                let mut r = Report::new(format!("local origin mod {ell}"));
                r.push("j", local.j)
                    .push("p", local.p)
                    .push("ell", ell)
                    .push("f", local.f);
                match rarity {
                    Rarity::Blocked => r.push("rarity", "blocked"),
                    Rarity::Possible { t } => r.push("rarity", format!("possible (t = {t})")),
                };
                Ok(r)
            })
        }
        Command::WitnessPrime { ell, f } => {
            let l = satake::witness_prime(*ell, *f)?;
            let bound = satake::gl4_order_bound(l, *f);
            let mut r = Report::new("witness prime");
            r.push("ell", ell)
                .push("f", f)
                .push("witness", l)
                .push("gl4_order_bound", &bound)
                .push("ell_divides_bound", (&bound % BigInt::from(*ell)).is_zero());
            Ok(vec![r])
        }
        Command::HarderCheck {
            elliptic,
            genus2,
            j,
            k,
            p,
            ell,
            qmax,
            compat,
        } => {
            let target = CongruenceTarget::new(*j, *k, *p)?;
            let f = eigendata::read(elliptic)
                .with_context(|| format!("reading {}", elliptic.display()))?;
            let big =
                eigendata::read(genus2).with_context(|| format!("reading {}", genus2.display()))?;
            if big.role != Role::Genus2 {
                bail!("{} is not a genus2 file", genus2.display());
            }
            let rep = check_harder(&f.system, &big.system, &target, *ell, *qmax)?;
            let mut r = Report::new(format!("Harder congruence mod {ell}"));
            r.push("j", j).push("k", k).push("p", p).push("ell", ell);
            r.push("verified_up_to", qmax)
                .push("tested_primes", list(&rep.verified_primes));
            for (i, l) in rep.lambdas.iter().enumerate() {
                r.push(format!("lambda{i}"), l.describe());
            }
            for (i, l) in rep.big_lambdas.iter().enumerate() {
                r.push(format!("Lambda{i}"), l.describe());
            }
            r.push(
                "pairs",
                list(rep.pairs.iter().map(|x| {
                    format!(
                        "(lambda{}, Lambda{}, embedding {})",
                        x.lambda, x.big_lambda, x.embedding
                    )
                })),
            );
            r.push(
                "failures",
                list(rep.failures.iter().map(|x| {
                    format!(
                        "(lambda{}, Lambda{}) at q = {} gap {}",
                        x.lambda, x.big_lambda, x.q, x.gap
                    )
                })),
            );
            if rep.saito_kurokawa_regime {
                r.push("regime", "Saito-Kurokawa (degenerate twists)");
            }
            let mut reports = vec![r];
            if *compat {
                let kp = target.elliptic_weight();
                let cps = rep
                    .verified_primes
                    .iter()
                    .map(|&q| Ok((q, charpoly_tq_new(kp, *p, q)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let c = charpoly_compat(&big.system, &cps, &target, *ell, &rep.verified_primes)?;
                let mut cr = Report::new("charpoly compatibility (necessary, not sufficient)");
                for (i, res) in c.results.iter().enumerate() {
                    let v = match res.first_failure {
                        None => "compatible".to_string(),
                        Some(q) => format!("fails at q = {q}"),
                    };
                    cr.push(format!("Lambda{i}"), v);
                }
                reports.push(cr);
            }
            Ok(reports)
        }
        Command::RamanujanCheck { source, ell, qmax } => {
            require_prime("ell", *ell)?;
            let sys = match &source.input {
                Some(_) => load_system(source, *qmax, 0)?,
                None if source.level.unwrap_or(1) == 1 => {
                    let Some(w) = source.weight else {
                        bail!("give --input or --weight")
                    };
                    level1_system(w, source.orbit, *qmax)?
                }
                None => load_system(source, *qmax, 30)?,
            };
            let rep = check_ramanujan(&sys, *ell, *qmax)?;
            let mut r = Report::new(format!("Ramanujan congruence mod {ell}"));
            r.push("weight", sys.weight)
                .push("level", sys.level)
                .push("field", describe_field(&sys))
                .push("verified_up_to", qmax);
            for (i, res) in rep.results.iter().enumerate() {
                r.push(format!("lambda{i}"), res.lambda.describe());
                let v = match res.first_failure {
                    None => "holds".to_string(),
                    Some(q) => format!("fails at q = {q}"),
                };
                r.push(format!("lambda{i}.result"), v);
            }
            r.push("result", if rep.all_hold() { "pass" } else { "fail" });
            Ok(vec![r])
        }
        Command::Verdict { local, k, e } => {
            validate_local(local)?;
            sweep(cli.jobs, &local.ell, |ell| {
                verdict_report(local, *k, *e, ell)
            })
        }
    }
}

fn satake_filter(local: &LocalArgs, k: i64, ell: u64, source: TargetSource) -> Result<Report> {
    let field = std::sync::Arc::new(ResidueField::standard(ell, local.f)?);
    let targets = satake::target_quadruple(local.j, k, local.p, source, &field)?;
    let mut r = Report::new(format!("Satake filter mod {ell}^{}", local.f));
    r.push("j", local.j)
        .push("k", k)
        .push("p", local.p)
        .push("ell", ell)
        .push("f", local.f);
    let mut admissible = Vec::new();
    for (ti, t) in targets.iter().enumerate() {
        let tag = match t.steinberg_sign {
            Some(e) => format!("target[e={e}]"),
            None => format!("target{ti}"),
        };
        r.push(&tag, t);
        for rec in TYPE_TABLE.iter() {
            if let MatchOutcome::Possible(w) = satake::type_match(rec, t)? {
                r.push(
                    format!("{tag}.{}", rec.type_id),
                    format!("possible ({})", w.parameters),
                );
                admissible.push(rec.type_id);
            }
        }
        if let Some(e) = t.steinberg_sign {
            for fam in [Family::III, Family::IV, Family::V, Family::VI] {
                let held: Vec<String> = satake::obstruction_congruences(fam, local.j)?
                    .iter()
                    .filter_map(|c| match c.holds(local.p, &field, e) {
                        Ok(true) => Some(Ok(c.to_string())),
                        Ok(false) => None,
                        Err(x) => Some(Err(x)),
                    })
                    .collect::<std::result::Result<_, _>>()?;
                r.push(format!("{tag}.obstructions.{fam:?}"), list(held));
            }
        }
    }
    admissible.sort();
    admissible.dedup();
    r.push("admissible", list(admissible));
    Ok(r)
}

fn verdict_report(local: &LocalArgs, k: i64, e: u32, ell: u64) -> Result<Report> {
    let v = satake::verdict(local.j, k, local.p, ell, e, local.f)?;
    let pass = |b: bool| if b { "pass" } else { "fail" };
    let mut r = Report::new(format!("verdict mod {ell}"));
    r.push("j", v.j)
        .push("k", v.k)
        .push("p", v.p)
        .push("ell", v.ell)
        .push("e", v.e)
        .push("f", v.f);
    r.push("borel_guard", pass(v.borel_guard));
    if let Some(pc) = v.power_conditions {
        for (t, ok) in pc.iter().enumerate() {
            r.push(
                format!("power_condition[t={t}]"),
                format!("{} (p^{} != 1)", pass(*ok), v.j + 2 * t as i64 - 2),
            );
        }
    }
    if let Some(val) = v.bernoulli_valuation {
        r.push("bernoulli_valuation", val);
    }
    if let Some(types) = &v.admissible_types {
        r.push("admissible", list(types));
    }
    for (id, ws) in &v.witnesses {
        r.push(
            format!("witness.{id}"),
            ws.iter()
                .map(|w| w.parameters.clone())
                .collect::<Vec<_>>()
                .join(" | "),
        );
    }
    r.push("conclusion", v.conclusion);
    Ok(r)
}
