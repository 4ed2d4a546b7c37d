//! `kflag`: verification sweeps, structure-constant tables and
//! single-instance inspection for the exact equivariant K-theory engine.

use anyhow::{bail, Context, Result};
use kflag_cli::{suites, tables};
use clap::{Parser, Subcommand, ValueEnum};
use kflag::{
    cone_certificate, ConeSign, Family, FlagSpace, Membership, RootSystem, WeylElem,
    DEFAULT_NODE_CAP,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kflag",
    version,
    about = "Exact equivariant K-theory of flag varieties: verification sweeps, \
             structure-constant tables, positivity certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Suite {
    /// Dual-basis constants: sign-twisted cone certificates.
    Gk,
    /// Structure-sheaf constants: c/b/d sweeps and parabolic agreement.
    Gr,
    /// Translated and opposite Schubert classes in the Schubert basis.
    Translation,
    /// Richardson classes expanded in the Schubert basis.
    Richardson,
    /// Subgroup row sums of dual-basis constants.
    Psum,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FamilyArg {
    P,
    B,
    C,
    D,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum PnFamilyArg {
    P,
    B,
    R,
    Q,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FormArg {
    Closed,
    Recur,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification sweep; exits nonzero on any failure or unknown.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Root-system tag: A1..A6, A1xA1, B2, G2.
        #[arg(long = "type")]
        type_tag: String,
        /// Parabolic subset as 1-based simple-reflection indices, e.g. 1,3.
        #[arg(long, value_delimiter = ',')]
        parabolic: Vec<usize>,
        /// Worker threads (defaults to the RAYON_NUM_THREADS environment
        /// variable, then to the number of cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Node budget per certificate search.
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: u64,
    },
    /// Emit the structure-constant table of projective space P^n.
    Pn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        family: PnFamilyArg,
        #[arg(long, value_enum, default_value_t = FormArg::Closed)]
        form: FormArg,
        /// Output format (written to stdout).
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        out: FormatArg,
    },
    /// Emit a full-flag structure-constant table to a file.
    Tables {
        #[arg(long = "type")]
        type_tag: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Show one structure constant with its positivity verdict and
    /// certificate (reproduces a single sweep instance).
    Show {
        #[arg(long = "type")]
        type_tag: String,
        #[arg(long, value_delimiter = ',')]
        parabolic: Vec<usize>,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Weyl-group word, 1-based generators: `121`, `1,2,1`, or `e`.
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Optional: restrict output to a single basis element.
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: u64,
    },
}

fn parse_parabolic(raw: &[usize], rank: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &i in raw {
        if i == 0 || i > rank {
            bail!("parabolic index {i} out of range 1..={rank}");
        }
        out.push(i - 1);
    }
    Ok(out)
}

fn parse_word(rs: &RootSystem, raw: &str) -> Result<WeylElem> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed == "e" {
        return Ok(rs.identity());
    }
    let letters: Vec<usize> = if trimmed.contains(',') {
        trimmed
            .split(',')
            .map(|t| t.trim().parse::<usize>().context("bad word letter"))
            .collect::<Result<_>>()?
    } else {
        trimmed
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .context("bad word letter")
            })
            .collect::<Result<_>>()?
    };
    let mut zero_based = Vec::with_capacity(letters.len());
    for l in letters {
        if l == 0 || l > rs.rank() {
            bail!("generator index {l} out of range 1..={}", rs.rank());
        }
        zero_based.push(l - 1);
    }
    Ok(rs.from_word(&zero_based)?)
}

fn init_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("failed to build worker pool")?;
    }
    Ok(())
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify {
            suite,
            type_tag,
            parabolic,
            jobs,
            cap,
        } => {
            init_pool(jobs)?;
            let rs = RootSystem::from_tag(&type_tag)?;
            let par = parse_parabolic(&parabolic, rs.rank())?;
            let report = match suite {
                Suite::Gk => suites::verify_gk(&type_tag, &par, cap)?,
                Suite::Gr => suites::verify_gr(&type_tag, &par, cap)?,
                Suite::Translation => {
                    require_full_flag(&par, "translation")?;
                    suites::verify_translation(&type_tag, cap)?
                }
                Suite::Richardson => {
                    require_full_flag(&par, "richardson")?;
                    suites::verify_richardson(&type_tag, cap)?
                }
                Suite::Psum => {
                    require_full_flag(&par, "psum")?;
                    suites::verify_psum(&type_tag, cap)?
                }
            };
            print!("{report}");
            Ok(report.is_clean())
        }
        Cmd::Pn { n, family, form, out } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let family = match family {
                PnFamilyArg::P => tables::PnFamily::P,
                PnFamilyArg::B => tables::PnFamily::B,
                PnFamilyArg::R => tables::PnFamily::R,
                PnFamilyArg::Q => tables::PnFamily::Q,
            };
            let form = match form {
                FormArg::Closed => tables::PnForm::Closed,
                FormArg::Recur => tables::PnForm::Recur,
            };
            let format = match out {
                FormatArg::Csv => tables::TableFormat::Csv,
                FormatArg::Json => tables::TableFormat::Json,
            };
            print!("{}", tables::pn_table(n, family, form, format)?);
            Ok(true)
        }
        Cmd::Tables {
            type_tag,
            family,
            out,
            format,
        } => {
            let family = match family {
                FamilyArg::P => Family::P,
                FamilyArg::B => Family::B,
                FamilyArg::C => Family::C,
                FamilyArg::D => Family::D,
            };
            let format = match format {
                FormatArg::Csv => tables::TableFormat::Csv,
                FormatArg::Json => tables::TableFormat::Json,
            };
            let body = tables::type_table(&type_tag, family, format)?;
            let mut file = std::fs::File::create(&out)
                .with_context(|| format!("cannot create {}", out.display()))?;
            file.write_all(body.as_bytes())?;
            eprintln!("wrote {}", out.display());
            Ok(true)
        }
        Cmd::Show {
            type_tag,
            parabolic,
            family,
            u,
            v,
            w,
            cap,
        } => {
            let rs = RootSystem::from_tag(&type_tag)?;
            let par = parse_parabolic(&parabolic, rs.rank())?;
            let space = FlagSpace::new(&rs, &par)?;
            let (family, cone) = match family {
                FamilyArg::P => (Family::P, ConeSign::NegativeRoots),
                FamilyArg::C => (Family::C, ConeSign::NegativeRoots),
                FamilyArg::B => (Family::B, ConeSign::PositiveRoots),
                FamilyArg::D => (Family::D, ConeSign::PositiveRoots),
            };
            let u = parse_word(&rs, &u)?;
            let v = parse_word(&rs, &v)?;
            let row =
                space.structure_constants(space.point_index(u)?, space.point_index(v)?, family)?;
            let pts = space.points().to_vec();
            let selected: Vec<usize> = match w {
                Some(ref raw) => vec![space.point_index(parse_word(&rs, raw)?)?],
                None => (0..pts.len()).collect(),
            };
            for wi in selected {
                let value = &row[wi];
                let lsum = rs.length(u) + rs.length(v) + rs.length(pts[wi]);
                let sign = match family {
                    Family::P | Family::C => {
                        if lsum % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    Family::B => {
                        if (space.dim() + lsum) % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    Family::D => 1,
                };
                let twisted = value.scale(sign);
                let verdict = cone_certificate(&rs, &twisted, cone, cap);
                let verdict_str = match &verdict {
                    Membership::Member(_) => "member",
                    Membership::NotMember => "not-a-member",
                    Membership::Unknown { .. } => "unknown",
                };
                println!(
                    "w={} value={} twisted={} cone={} verdict={} certificate={}",
                    suites::word_str(&rs, pts[wi]),
                    value,
                    twisted,
                    match cone {
                        ConeSign::NegativeRoots => "negative",
                        ConeSign::PositiveRoots => "positive",
                    },
                    verdict_str,
                    serde_json::to_string(&verdict)?,
                );
            }
            Ok(true)
        }
    }
}

fn require_full_flag(parabolic: &[usize], suite: &str) -> Result<()> {
    if !parabolic.is_empty() {
        bail!("the {suite} suite runs on the full flag variety; drop --parabolic");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
