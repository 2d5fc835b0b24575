use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use shapeinv::config::KeyValues;

#[derive(Parser, Debug)]
#[command(name = "shapeinv", version, about = "Shape-invariant many-body Hamiltonians: identity checks, spectra and supersymmetric sectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the operator identities of an N-body model at random points.
    Verify(VerifyArgs),
    /// Grid spectra of a 1-D family or an N-body model.
    Spectrum(SpectrumArgs),
    /// Fermion-sector spectra of the supersymmetric extension.
    Susy(SusyArgs),
    /// Product ground state and its partner.
    Groundstate(GroundArgs),
    /// Excited states of a 1-D family built by repeated raising.
    Chain(ChainArgs),
}

/// Flags shared by all subcommands.
#[derive(Args, Debug)]
pub struct Common {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    /// calogero, harmonic_calogero (hc) or calogero_sutherland (cs).
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long)]
    pub beta_override: Option<String>,
    #[arg(long)]
    pub epsilon_sing: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// One tolerance for every identity.
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// 1-D family: rosen-morse, rational, coth.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Number of levels.
    #[arg(long)]
    pub nmax: Option<String>,
    /// Nodes per axis.
    #[arg(long)]
    pub grid: Option<String>,
    /// Stencil order, 2 or 4.
    #[arg(long)]
    pub order: Option<String>,
    /// Half-width used where the natural domain is unbounded.
    #[arg(long)]
    pub extent: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    /// Solve the two-particle relative problem.
    #[arg(long)]
    pub reduce: bool,
    /// Also write eigenvectors as plain-text plot data.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args, Debug)]
pub struct SusyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// s1, s2 or both.
    #[arg(long)]
    pub variant: Option<String>,
    /// Nodes per relative axis.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub cm_modes: Option<String>,
    /// Levels reported per sector.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub rel_extent: Option<String>,
    #[arg(long)]
    pub cm_period: Option<String>,
}

#[derive(Args, Debug)]
pub struct GroundArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub extent: Option<String>,
    /// Nodes for the partner-energy cross-check of two particles.
    #[arg(long)]
    pub partner_grid: Option<String>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Highest level built.
    #[arg(long)]
    pub nmax: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub extent: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
}

fn put(kv: &mut KeyValues, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        kv.set(key, v);
    }
}

impl ModelArgs {
    fn fill(&self, kv: &mut KeyValues) {
        put(kv, "kind", &self.kind);
        put(kv, "n", &self.n);
        put(kv, "alpha", &self.alpha);
        put(kv, "omega", &self.omega);
        put(kv, "beta_override", &self.beta_override);
        put(kv, "epsilon_sing", &self.epsilon_sing);
    }
}

/// Flags of a subcommand as key-value pairs.
pub trait Flags {
    fn common(&self) -> &Common;
    fn flags(&self) -> KeyValues;
}

impl Flags for VerifyArgs {
    fn common(&self) -> &Common {
        &self.common
    }
    fn flags(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        self.model.fill(&mut kv);
        put(&mut kv, "trials", &self.trials);
        put(&mut kv, "seed", &self.seed);
        put(&mut kv, "tol", &self.tol);
        kv
    }
}

impl Flags for SpectrumArgs {
    fn common(&self) -> &Common {
        &self.common
    }
    fn flags(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        self.model.fill(&mut kv);
        put(&mut kv, "family", &self.family);
        put(&mut kv, "a", &self.a);
        put(&mut kv, "b", &self.b);
        put(&mut kv, "nmax", &self.nmax);
        put(&mut kv, "grid", &self.grid);
        put(&mut kv, "order", &self.order);
        put(&mut kv, "extent", &self.extent);
        put(&mut kv, "tol", &self.tol);
        if self.reduce {
            kv.set("reduce", true);
        }
        if self.plot {
            kv.set("plot", true);
        }
        kv
    }
}

impl Flags for SusyArgs {
    fn common(&self) -> &Common {
        &self.common
    }
    fn flags(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        self.model.fill(&mut kv);
        put(&mut kv, "variant", &self.variant);
        put(&mut kv, "grid", &self.grid);
        put(&mut kv, "cm_modes", &self.cm_modes);
        put(&mut kv, "k", &self.k);
        put(&mut kv, "rel_extent", &self.rel_extent);
        put(&mut kv, "cm_period", &self.cm_period);
        kv
    }
}

impl Flags for GroundArgs {
    fn common(&self) -> &Common {
        &self.common
    }
    fn flags(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        self.model.fill(&mut kv);
        put(&mut kv, "grid", &self.grid);
        put(&mut kv, "order", &self.order);
        put(&mut kv, "extent", &self.extent);
        put(&mut kv, "partner_grid", &self.partner_grid);
        kv
    }
}

impl Flags for ChainArgs {
    fn common(&self) -> &Common {
        &self.common
    }
    fn flags(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        put(&mut kv, "family", &self.family);
        put(&mut kv, "a", &self.a);
        put(&mut kv, "b", &self.b);
        put(&mut kv, "nmax", &self.nmax);
        put(&mut kv, "grid", &self.grid);
        put(&mut kv, "extent", &self.extent);
        put(&mut kv, "tol", &self.tol);
        kv
    }
}
