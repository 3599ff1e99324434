pub mod braid;
pub mod cli;
pub mod document;
pub mod endo;
pub mod exterior;
pub mod linalg;
pub mod perm;
pub mod random;
pub mod scalar;
pub mod symmetric;
pub mod verify;
