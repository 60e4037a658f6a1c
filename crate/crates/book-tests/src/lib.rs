//! Compiles every listing in `book/src` as a doc-test, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/continued-fractions.md")]
pub mod continued_fractions {}
#[doc = include_str!("../../../book/src/seifert.md")]
pub mod seifert {}
#[doc = include_str!("../../../book/src/game.md")]
pub mod game {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
