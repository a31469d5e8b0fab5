pub mod compare;
pub mod generate;
pub mod sample;
pub mod sweep;
pub mod verify;
