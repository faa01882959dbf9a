pub mod catalog;
pub mod classify;
pub mod cli;
pub mod composition;
pub mod exactlin;
pub mod io;
pub mod jordan;
pub mod liealg;
pub mod report;
pub mod tits;
