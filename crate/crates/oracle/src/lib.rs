//! Independent brute-force oracles and seeded random inputs used to cross-check
//! `twistab-core`.

pub mod algebra;
pub mod fuzz;
pub mod gen;
pub mod grid;
pub mod hassett;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/testing.md")]
mod book_testing {}
