pub mod combinat;
pub mod diffusion;
pub mod exact;
pub mod lgv;
pub mod quad;
pub mod rmt;
pub mod rng;
pub mod schur;
pub mod verify;
pub mod walks;
