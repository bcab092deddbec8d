//! Exact-arithmetic library for Deligne-Lusztig character values at regular
//! semisimple elements and their epsilon-twisted counterparts on small finite
//! reductive groups, together with exhaustive verification harnesses for the
//! character identity relating them.

pub mod cyclo;
pub mod dl;
pub mod error;
pub mod fields;
pub mod groups;
pub mod report;
pub mod tori;
pub mod verify;

pub use cyclo::CycloNumber;
pub use error::{Error, Result};
pub use fields::{FieldElement, FieldTower};
pub use groups::{AutKind, AutomorphismDesc, GroupContext, Mat};
pub use tori::{RationalTorus, TorusCharacter};
