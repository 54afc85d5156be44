//! Finite quotients: permutation representations, coset enumeration and
//! separation witnesses.

pub mod coset;
pub mod decide;
pub mod perm;
pub mod reps;
pub mod witness;
