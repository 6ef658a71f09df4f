pub mod error;
pub mod f2;
pub mod hp;

pub use error::{Error, Result};
pub mod cyclo;
pub mod prob;
pub mod approx;
pub mod rankops;
pub mod scalar;
pub mod stabfun;

/// Book chapters, compiled as doc-tests so their snippets stay runnable.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/f2.md")]
    pub mod f2 {}
    #[doc = include_str!("../../../book/src/stabilizer-functions.md")]
    pub mod stabilizer_functions {}
    #[doc = include_str!("../../../book/src/rank-search.md")]
    pub mod rank_search {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    pub mod witnesses {}
    #[doc = include_str!("../../../book/src/threshold-pipeline.md")]
    pub mod threshold_pipeline {}
    #[doc = include_str!("../../../book/src/binomial.md")]
    pub mod binomial {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    pub mod conventions {}
}
