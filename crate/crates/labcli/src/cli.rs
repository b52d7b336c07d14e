//! Command-line surface and experiment configs.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::report::Format;

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_GUARD_BYTES: usize = 1 << 28;

#[derive(Debug, Parser)]
#[command(name = "labcli", version, about = "Exact stability experiments and stable-range calculator")]
pub struct Cli {
    /// Run the experiment described by a JSON config instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Coefficient field: a prime p, or q for the rationals.
    #[arg(long, global = true, default_value = "2")]
    pub field: String,
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD_BYTES)]
    pub guard_bytes: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// text, csv, json or markdown-table; defaults from the --out extension, else text.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    /// Element-count guard derived from the byte guard.
    pub fn element_guard(&self) -> usize {
        (self.guard_bytes / 16).max(1)
    }

    pub fn output_format(&self) -> Format {
        self.format.or_else(|| self.out.as_ref().and_then(|p| Format::from_path(&p.to_string_lossy()))).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Stable range of a stability theorem.
    Range(RangeArgs),
    /// Reduced integral homology of the complex of injective words.
    InjectiveWords {
        #[arg(long)]
        n: usize,
        /// z, a prime, or q.
        #[arg(long, default_value = "z")]
        coeff: String,
    },
    /// Weak Cohen-Macaulay check for a standard complex.
    CmCheck {
        /// simplex:N, boundary:N or bases:RING:N.
        #[arg(long)]
        complex: String,
        #[arg(long, allow_hyphen_values = true)]
        dim: isize,
        /// Check the large ordering for forward CM instead.
        #[arg(long)]
        ordering: bool,
        #[arg(long, default_value = "z")]
        coeff: String,
    },
    /// Vanishing of RH_k(OSim_{n-1}; F_{M,n-1}) for M = (k^S)^{⊗d}.
    Vanishing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// H_k(S_n; M(n)) for M = (k^S)^{⊗d}, with stabilization maps.
    SnStability {
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
    },
    /// H_0(G_n(R); R^n) for G = GL, SL or EL.
    GlStability {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value = "gl")]
        kind: String,
        /// Stable rank index; the least certified one when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
    },
    /// Stable-rank certificate (SR_r) for unimodular vectors up to length n_max.
    SrCertify {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        nmax: Option<usize>,
        /// Also certify every quotient by a proper nonzero ideal.
        #[arg(long)]
        quotients: bool,
    },
    /// Elementary-operation word carrying a unimodular vector to e_n, or to a congruent vector.
    ElReduce {
        #[arg(long)]
        ring: String,
        /// Comma-separated ring elements.
        #[arg(long)]
        v: String,
        #[arg(long)]
        to: Option<String>,
        /// Generators of the ideal for relative reduction.
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Compares OBases(R^{n,r}) / EL_{n+r}(R, q) with OBases((R/q)^{n,r}).
    QuotientObases {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Equivariant spectral sequence of S_{n+1} on OSim_n with coefficients in k^S.
    SsVerify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        pages: usize,
        /// Range of verified vanishing to feed in.
        #[arg(long)]
        input_vanishing: Option<isize>,
    },
    /// H_0 and H_1 of a finite-index subgroup against the whole abelian group.
    FiniteIndex(FiniteIndexArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Range(_) => "range",
            Command::InjectiveWords { .. } => "injective-words",
            Command::CmCheck { .. } => "cm-check",
            Command::Vanishing { .. } => "vanishing",
            Command::SnStability { .. } => "sn-stability",
            Command::GlStability { .. } => "gl-stability",
            Command::SrCertify { .. } => "sr-certify",
            Command::ElReduce { .. } => "el-reduce",
            Command::QuotientObases { .. } => "quotient-obases",
            Command::SsVerify { .. } => "ss-verify",
            Command::FiniteIndex(_) => "finite-index",
        }
    }
}

pub const COMMANDS: [&str; 11] = [
    "range",
    "injective-words",
    "cm-check",
    "vanishing",
    "sn-stability",
    "gl-stability",
    "sr-certify",
    "el-reduce",
    "quotient-obases",
    "ss-verify",
    "finite-index",
];

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    /// A, A', C, C', D, 13.1 or 13.2.
    #[arg(long)]
    pub theorem: String,
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct FiniteIndexArgs {
    /// Action of the generator of Z, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Action of the second generator of Z².
    #[arg(long, allow_hyphen_values = true)]
    pub matrix2: Option<String>,
    /// m for the subgroup mZ.
    #[arg(long)]
    pub index: Option<u64>,
    /// Two generators of a sublattice of Z², as "a,b;c,d".
    #[arg(long, allow_hyphen_values = true)]
    pub lattice: Option<String>,
    /// Orders of cyclic factors of a finite abelian group, with the trivial module.
    #[arg(long)]
    pub cyclic: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Generators of the subgroup, as element indices.
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Number of random unitriangular matrices to test against mZ for m ≤ --max-index.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub max_dim: usize,
    #[arg(long, default_value_t = 5)]
    pub max_index: u64,
}

/// On-disk experiment description.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u64,
    pub command: String,
    #[serde(default)]
    pub args: Map<String, Value>,
    /// Arguments naming files, resolved against the config's directory.
    #[serde(default)]
    pub files: Map<String, Value>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub max_n: Option<usize>,
    #[serde(default)]
    pub guard_bytes: Option<usize>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub out: Option<String>,
}

fn scalar(key: &str, v: &Value) -> Result<Option<String>, CliError> {
    match v {
        Value::String(s) => Ok(Some(s.clone())),
        Value::Number(n) => Ok(Some(n.to_string())),
        Value::Bool(true) => Ok(None),
        Value::Array(items) => {
            let parts: Result<Vec<String>, CliError> = items
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(CliError::Schema(format!("{key}: list entries must be numbers or strings"))),
                })
                .collect();
            Ok(Some(parts?.join(",")))
        }
        _ => Err(CliError::Schema(format!("{key}: unsupported value {v}"))),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| CliError::Schema(e.to_string()))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(CliError::Schema(format!("schema {} is not supported (expected {SCHEMA_VERSION})", cfg.schema)));
        }
        if !COMMANDS.contains(&cfg.command.as_str()) {
            return Err(CliError::Schema(format!("unknown command {:?}", cfg.command)));
        }
        Ok(cfg)
    }

    /// Equivalent command line; `base` is the directory relative file references resolve against.
    pub fn to_argv(&self, base: &Path) -> Result<Vec<String>, CliError> {
        let mut argv = vec!["labcli".to_string(), self.command.clone()];
        let mut push = |key: &str, v: &Value| -> Result<(), CliError> {
            if matches!(v, Value::Bool(false)) {
                return Ok(());
            }
            argv.push(format!("--{}", key.replace('_', "-")));
            if let Some(s) = scalar(key, v)? {
                argv.push(s);
            }
            Ok(())
        };
        for (k, v) in &self.args {
            push(k, v)?;
        }
        for (k, v) in &self.files {
            let Value::String(rel) = v else {
                return Err(CliError::Schema(format!("files.{k} must be a path")));
            };
            let p = base.join(rel);
            if !p.is_file() {
                return Err(CliError::Schema(format!("files.{k}: {} does not exist", p.display())));
            }
            push(k, &Value::String(p.to_string_lossy().into_owned()))?;
        }
        let globals: [(&str, Option<String>); 7] = [
            ("field", self.field.clone()),
            ("max-n", self.max_n.map(|x| x.to_string())),
            ("guard-bytes", self.guard_bytes.map(|x| x.to_string())),
            ("jobs", self.jobs.map(|x| x.to_string())),
            ("seed", self.seed.map(|x| x.to_string())),
            ("format", self.format.clone()),
            ("out", self.out.as_ref().map(|o| base.join(o).to_string_lossy().into_owned())),
        ];
        for (k, v) in globals {
            if let Some(v) = v {
                argv.push(format!("--{k}"));
                argv.push(v);
            }
        }
        Ok(argv)
    }
}

fn clap_error(e: clap::Error) -> CliError {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    }
}

/// Parses a command line, expanding `--config` when present.
pub fn parse_args<I, T>(args: I) -> Result<Cli, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(clap_error)?;
    match (&cli.config, &cli.command) {
        (Some(path), None) => {
            let cfg = ExperimentConfig::load(path)?;
            let base = path.parent().unwrap_or(Path::new("."));
            let argv = cfg.to_argv(base)?;
            let expanded = Cli::try_parse_from(argv).map_err(|e| CliError::Schema(e.to_string()))?;
            Ok(expanded)
        }
        (Some(_), Some(_)) => Err(CliError::Usage("--config cannot be combined with a subcommand".into())),
        (None, None) => Err(CliError::Usage("a subcommand or --config is required".into())),
        (None, Some(_)) => Ok(cli),
    }
}
