//! Area-proportional metaphorical maps of vertex-weighted plane graphs.
//!
//! A metaphorical map turns a vertex-weighted plane graph into a planar
//! subdivision: every vertex becomes a simple polygonal region, adjacent
//! vertices share a boundary, and each region's area approximates its
//! vertex weight. The engine builds an initial contact map from a planar
//! drawing and then improves it with a force-directed simulation that
//! combines air pressure, adaptive region stiffness, repulsion, angular
//! resolution and a narrow-passage correction.
//!
//! Module overview:
//! - [`geom`]: points, polygons, hulls, enclosing circles, intersection tests
//! - [`graph`]: vertex-weighted plane graphs, faces, biconnectivity
//! - [`gen`]: seeded random benchmark graph generation
//! - [`map`]: the metaphorical map (planar subdivision) model
//! - [`init`]: Steiner triangulation, Tutte embedding, dual transform
//! - [`metrics`]: cartographic error and polygon complexity
//! - [`sim`]: the force-directed simulation
//! - [`io`]: graph/map file formats and SVG rendering
//! - [`experiment`]: batch experiment harness with CSV output

pub mod experiment;
pub mod gen;
pub mod geom;
pub mod graph;
pub mod init;
pub mod io;
pub mod map;
pub mod metrics;
pub mod sim;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A polygon operation received fewer than three points.
    #[error("degenerate polygon with {len} points")]
    DegeneratePolygon { len: usize },

    /// Input data failed structural validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A combinatorial embedding is inconsistent or could not be computed.
    #[error("embedding error: {0}")]
    Embedding(String),

    /// Iterative embedding did not reach the residual threshold in time.
    #[error("embedding did not converge after {sweeps} sweeps")]
    EmbeddingConvergence { sweeps: usize },

    /// Random benchmark generation failed.
    #[error("generation error: {0}")]
    Generation(String),

    /// Map initialization failed.
    #[error("initialization error: {0}")]
    Init(String),

    /// The simulation produced a degenerate map and aborted.
    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    /// A file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for CLI use: 1 for bad input, 2 for runtime failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Validation(_) | Error::Parse(_) | Error::DegeneratePolygon { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
