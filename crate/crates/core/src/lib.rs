pub mod algebra;
pub mod groebner;
pub mod local;
pub mod endomorphism;
pub mod dynamics;
pub mod job;
pub mod parse;
