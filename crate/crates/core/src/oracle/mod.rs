//! Brute-force ground truth on finite topological spaces and the law suites
//! that check every kernel operation against it.

pub mod finite;
pub mod hyper_laws;
pub mod laws;
pub mod scott;
pub mod subbase;
pub mod view;

pub use finite::{count_preorders, enumerate_spaces, generate_topology, Bits, FiniteSpace};
pub use scott::scott_converges;
pub use subbase::{Figure1Report, FiniteSubbase};
pub use view::FiniteView;
pub use laws::{run_law_suite, LawReport, SuiteConfig, LAWS};
