//! Building blocks of the `pwent` command-line tool: state files, named
//! states, measure dispatch, figure series and check suites.

pub mod checks;
pub mod figures;
pub mod measure;
pub mod report;
pub mod source;
pub mod statefile;
