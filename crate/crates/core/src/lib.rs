//! Finite quantaloid-enriched category theory.
//!
//! The crate is layered bottom-up: [`order`] supplies finite preorders and
//! sup-lattices, [`quantaloid`] the enrichment bases, [`category`] enriched
//! categories with functors and distributors, [`completion`] the (co)limit
//! machinery, and [`variation`] the passage between tensored categories,
//! closed pseudofunctors and modules. [`format`] reads and writes the plain
//! text instance files, and [`suite`] runs the law catalogue over bundled
//! instances and exhaustive sweeps.

mod bundled;
pub mod category;
pub mod completion;
pub mod format;
pub mod order;
pub mod par;
pub mod quantaloid;
pub mod suite;
pub mod sweep;
pub mod theorems;
pub mod variation;

pub use order::{FinitePreorder, FiniteSupLattice, MonotoneMap, OrderAdjunction, OrderError};
pub use quantaloid::{QArrow, Quantaloid, QuantaloidError, Residual};
pub use category::{CategoryError, Distributor, Fiber, QCategory, QFunctor};
pub use par::Exec;
pub use completion::{CompletenessReport, CompletionError, WitnessSet};
pub use variation::{LaxNat, ModuleMorphism, Pseudofunctor2, QModule, QuantaleAction, VariationError};
pub use format::{FormatError, Instance, Kind, Loader};
