//! Two-player security-game toolkit.
//!
//! The crate is organized around five subsystems:
//!
//! * [`arena`] — players, simple/mixed responses and their composition; the
//!   relational substrate the game modules build on.
//! * [`nash`] — normal-form bimatrix games, best-response relations and pure
//!   Nash equilibria computed as fixed points of composed responses.
//! * [`belief`] — finitely supported distributions and depth-truncated
//!   belief hierarchies for games of incomplete information.
//! * [`sim`] + [`strategy`] — the territorial attack-vectors game: polygonal
//!   territories, boundary force distributions, the two-case push update,
//!   hull-limited observation, win conditions, and the defender strategy
//!   ladder (fortification, honeypot, sampling, adaptation).
//! * [`lab`] — a small stack machine with a bijective program numbering,
//!   universal/parallel composition, and brute-force algorithmic (`C`) and
//!   logical (`D`) distances with law-verification harnesses.
//!
//! [`scenario`], [`metrics`] and [`render`] provide the file-level surface
//! used by the `secgame` CLI: JSON scenarios, CSV metric streams and SVG
//! frame dumps.

pub mod arena;
pub mod belief;
pub mod geom;
pub mod lab;
pub mod metrics;
pub mod nash;
pub mod render;
pub mod scenario;
pub mod sim;
pub mod strategy;
