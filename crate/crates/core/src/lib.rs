#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod exactmath;
pub mod polyweights;
pub mod resolution;
pub mod germs;
mod groebner;
pub mod contractions;
pub mod cover;
pub mod census;
