//! Standard-library companion to [`mvpref_core`]: a JSON document format
//! for models and countermodels, plain-text table rendering, bundled
//! worked examples with golden sheets, and the `mvpref` command-line
//! binary built on top of them.

pub mod doc;
pub mod examples;
pub mod render;

/// Bundled artifacts, embedded so the binary and the test suites see the
/// same bytes regardless of working directory.  The same files ship under
/// `data/` for use as command-line inputs.
pub mod data {
    /// The four-world dinner-scenario model (the reference document).
    pub const DINNER_MODEL: &str = include_str!("../data/models/example_4_1.json");
    /// The two-world model over the three-element scale `{0, b, 1}`.
    pub const SCALE_MODEL: &str = include_str!("../data/models/example_2_4.json");
    /// A five-world layered model with nested clusters, ready to bulldoze.
    pub const CLUSTERED_MODEL: &str = include_str!("../data/models/layered_cluster.json");
    /// Derivation of the strict/weak interaction law (system `p`).
    pub const INTERACTION_PROOF: &str = include_str!("../data/proofs/interaction.proof");
    /// Derivation of the monoidal K instance (system `cm`).
    pub const MONOIDAL_K_PROOF: &str = include_str!("../data/proofs/monoidal_k.proof");
    /// A monotonicity derivation (system `m`).
    pub const MONOTONICITY_PROOF: &str = include_str!("../data/proofs/monotonicity.proof");
}
