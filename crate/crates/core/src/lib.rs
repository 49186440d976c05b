#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conctest;
pub mod designs;
pub mod error;
pub mod harness;
pub mod majorant;
pub mod piecewise;
pub mod rng;
pub mod shapext;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/step-functions.md")]
    mod step_functions {}
    #[doc = include_str!("../../../book/src/majorants.md")]
    mod majorants {}
    #[doc = include_str!("../../../book/src/concavity-test.md")]
    mod concavity_test {}
    #[doc = include_str!("../../../book/src/designs.md")]
    mod designs {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
