pub mod chamber;
pub mod curve;
pub mod groups;
pub mod json;
pub mod lp;
pub mod monoid;
pub mod rational;
pub mod snf;
pub mod stability;
pub mod stabilization;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/monodromy.md")]
    mod monodromy {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/stabilization.md")]
    mod stabilization {}
    #[doc = include_str!("../../../book/src/chambers.md")]
    mod chambers {}
    #[doc = include_str!("../../../book/src/monoids.md")]
    mod monoids {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
