pub mod cyclo;
pub mod eigenposet;
pub mod groups;
pub mod homology;
pub mod linalg;
pub mod par;
pub mod posets;
pub mod verify;

pub use cyclo::{CycloError, Cyclotomic};
