pub mod autoreal;
pub mod fpg;
pub mod group;
pub mod kummer;
pub mod obstruction;
pub mod symbols;
pub mod cohomology;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    pub mod cohomology {}
    #[doc = include_str!("../../../book/src/corestriction.md")]
    pub mod corestriction {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    pub mod symbols {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    pub mod obstructions {}
    #[doc = include_str!("../../../book/src/kummer.md")]
    pub mod kummer {}
    #[doc = include_str!("../../../book/src/counting.md")]
    pub mod counting {}
    #[doc = include_str!("../../../book/src/autoreal.md")]
    pub mod autoreal {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
