//! Runs the code listings of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/basis.md")]
pub mod basis {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/entanglement.md")]
pub mod entanglement {}
#[doc = include_str!("../../../book/src/ferromagnet.md")]
pub mod ferromagnet {}
#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}
