pub mod cable;
pub mod certificate;
pub mod cfk;
pub mod gf2;
pub mod laurent;
pub mod pin;
pub mod plfun;
pub mod rational;
pub mod staircase;
pub mod summand;
pub mod verify;
