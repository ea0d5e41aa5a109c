pub mod dc;
pub mod judge;
