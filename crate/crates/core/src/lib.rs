//! Fundamental groupoids of finite combinatorial 2-complexes and the Van
//! Kampen coequalizer for locally sectionable cell maps.

pub mod colimits;
pub mod complex;
pub mod error;
pub mod golden;
pub mod pi1;
pub mod presentation;
pub mod vkcheck;

pub use error::{Error, Result};
