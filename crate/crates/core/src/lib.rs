//! Internal bicategories in the category of groups: finite data, checks,
//! realization as explicit cell tables, and exhaustive search.

pub mod group;
pub mod bicat_data;
pub mod extended;
pub mod verify;
pub mod search;
pub mod maltsev;
pub mod path;
pub mod format;
