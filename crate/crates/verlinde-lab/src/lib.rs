//! Exact computations with modular representations of elementary abelian p-groups,
//! SL₂ tilting modules, and the higher Verlinde categories they model.

pub mod ffield;
pub mod exactla;
pub mod repe;
pub mod krull;
pub mod klein;
pub mod sl2tilt;
pub mod verlinde;
pub mod theta;
pub mod ofunc;
pub mod cli;
