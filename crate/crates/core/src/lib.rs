//! Finite-group and arithmetic machinery for CM types attached to the
//! permutation representation of PSL₂(F_q) on P¹(F_q): finite fields, the
//! group and its classes, exact cyclotomic arithmetic, character tables, CM
//! type enumeration, the Colmez class function and Faltings height formulas.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod chartable;
pub mod cmtypes;
pub mod colmez;
pub mod cyclotomic;
pub mod field;
pub mod heights;
pub mod psl2;

pub use error::{CmTypeError, ColmezError, CycloError, FieldError, GroupError, HeightError, TableError};
pub use chartable::{CharLabel, CharacterTable, ClassFunction, ClassFunctionC, ClassFunctionQ};
pub use cmtypes::{CensusRow, CmType};
pub use colmez::{ColmezContext, ExtClassFunction, GalElement, GroupRingElement, SamplingPolicy};
pub use cyclotomic::{CycloNumber, Rational};
pub use field::{Fe, Field, QuadExtElement, RepSetA};
pub use heights::{HeightExpression, QuadraticCharacter, Symbol};
pub use psl2::{ConjClass, ConjClassLabel, P1Point, ProjectiveMatrix, Psl2};
