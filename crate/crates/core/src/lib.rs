//! Small-cancellation group theory: words and presentations, Dehn's
//! algorithm, the Rips construction, conjugacy and membership procedures in
//! subgroups and fibre products, and finite-quotient witness searches.

pub mod abelian;
pub mod budget;
pub mod cli;
pub mod error;
pub mod fibre;
pub mod hom;
pub mod oracle;
pub mod presentation;
pub mod profinite;
pub mod record;
pub mod rips;
pub mod smallcanc;
pub mod subgroup;
pub mod verdict;
pub mod word;

pub use error::{Error, Result};
pub use presentation::{Alphabet, Presentation};
pub use word::{Letter, Word};
