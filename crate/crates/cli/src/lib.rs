//! Input format, command dispatch and report serialization for `lascat`.

pub mod commands;
pub mod report;
pub mod workspace;

use std::path::PathBuf;

use serde_json::{json, Map, Value};
use thiserror::Error;

pub use commands::run_command;
pub use report::{Format, Outcome, Report};
pub use workspace::{
    category_to_json, functor_to_json, parse_workspace, transformation_to_json, CategorySource,
    InputError, Provenance, SourceFile, Workspace,
};

pub const DEFAULT_MAX_DIM: usize = 2;
pub const DEFAULT_MAX_COSETS: usize = 10_000;
pub const DEFAULT_MAX_OBJECTS: usize = 256;
pub const DEFAULT_MAX_STEPS: u64 = lascat_core::Budget::DEFAULT_STEPS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Validate,
    Props,
    Pi1,
    Homology,
    Lascar,
    MainTheorem,
    QuillenA,
    Equiv,
    Amalgamate,
    Karoubi,
    FacePoset,
    Subdivide,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Self::Validate,
        Self::Props,
        Self::Pi1,
        Self::Homology,
        Self::Lascar,
        Self::MainTheorem,
        Self::QuillenA,
        Self::Equiv,
        Self::Amalgamate,
        Self::Karoubi,
        Self::FacePoset,
        Self::Subdivide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Validate => "validate",
            Self::Props => "props",
            Self::Pi1 => "pi1",
            Self::Homology => "homology",
            Self::Lascar => "lascar",
            Self::MainTheorem => "main-theorem",
            Self::QuillenA => "quillen-a",
            Self::Equiv => "equiv",
            Self::Amalgamate => "amalgamate",
            Self::Karoubi => "karoubi",
            Self::FacePoset => "face-poset",
            Self::Subdivide => "subdivide",
        }
    }
}

/// Command flags. Each command reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, clap::Args)]
pub struct Flags {
    /// Category name.
    #[arg(long)]
    pub category: Option<String>,
    /// Functor name.
    #[arg(long)]
    pub functor: Option<String>,
    /// Functor going back, for `equiv`.
    #[arg(long)]
    pub inverse: Option<String>,
    /// Complex name.
    #[arg(long)]
    pub complex: Option<String>,
    /// Basepoint object for `pi1` (default: the first object).
    #[arg(long)]
    pub basepoint: Option<String>,
    /// Enumerate π₁ with at most this many cosets.
    #[arg(long)]
    pub identify: Option<usize>,
    /// Top homology degree.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Coset cap for commands that enumerate π₁ internally.
    #[arg(long)]
    pub max_cosets: Option<usize>,
    /// Object cap for constructed categories.
    #[arg(long)]
    pub max_objects: Option<usize>,
    /// Step budget shared by all searches of one command.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Small objects: a subset name declared by the category, or a comma list of objects.
    #[arg(long)]
    pub sub: Option<String>,
    /// Target object U.
    #[arg(long)]
    pub at: Option<String>,
    /// `slice` or `fiber`.
    #[arg(long)]
    pub side: Option<String>,
    /// Natural transformations, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub evidence: Vec<String>,
    /// Construction rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// `all`, `missing`, or `f:g,f2:g2`.
    #[arg(long)]
    pub spans: Option<String>,
    /// Restrict `props` to these properties.
    #[arg(long, value_delimiter = ',')]
    pub property: Vec<String>,
    /// Functorial joint embedding evidence `F,i1,i2` for `props`.
    #[arg(long, value_delimiter = ',')]
    pub fje: Vec<String>,
    /// Replace Lst by its normal closure if it is not normal.
    #[arg(long)]
    pub normal_closure: bool,
}

impl Flags {
    pub fn max_dim(&self) -> usize {
        self.max_dim.unwrap_or(DEFAULT_MAX_DIM)
    }

    pub fn max_cosets(&self) -> usize {
        self.max_cosets
            .or(self.identify)
            .unwrap_or(DEFAULT_MAX_COSETS)
    }

    pub fn max_objects(&self) -> usize {
        self.max_objects.unwrap_or(DEFAULT_MAX_OBJECTS)
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps.unwrap_or(DEFAULT_MAX_STEPS)
    }

    /// Flags that were given, for the report echo.
    pub fn echo(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            if !v.is_null() && v != json!([]) && v != json!(false) {
                m.insert(k.to_string(), v);
            }
        };
        put("category", json!(self.category));
        put("functor", json!(self.functor));
        put("inverse", json!(self.inverse));
        put("complex", json!(self.complex));
        put("basepoint", json!(self.basepoint));
        put("identify", json!(self.identify));
        put("max_dim", json!(self.max_dim));
        put("max_cosets", json!(self.max_cosets));
        put("max_objects", json!(self.max_objects));
        put("max_steps", json!(self.max_steps));
        put("sub", json!(self.sub));
        put("at", json!(self.at));
        put("side", json!(self.side));
        put("evidence", json!(self.evidence));
        put("rounds", json!(self.rounds));
        put("spans", json!(self.spans));
        put("property", json!(self.property));
        put("fje", json!(self.fje));
        put("normal_closure", json!(self.normal_closure));
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
}

impl CommandError {
    pub const EXIT_CODE: i32 = 2;
}

/// The bundled corpus, used when no `--input` is given.
pub fn bundled_corpus() -> Vec<SourceFile> {
    macro_rules! corpus {
        ($($f:literal),* $(,)?) => {
            vec![$(SourceFile::new(concat!("corpus/", $f), include_str!(concat!("../corpus/", $f)))),*]
        };
    }
    corpus![
        "basics.json",
        "posets.json",
        "groups.json",
        "complexes.json",
        "products.json",
        "joint_embeddings.json",
        "fininj3.json",
        "fininj4.json",
        "fininj5.json",
    ]
}

pub fn load(inputs: &[PathBuf]) -> Result<Workspace, InputError> {
    if inputs.is_empty() {
        return parse_workspace(&bundled_corpus());
    }
    let files = inputs
        .iter()
        .map(|p| SourceFile::read(p))
        .collect::<Result<Vec<_>, _>>()?;
    parse_workspace(&files)
}
