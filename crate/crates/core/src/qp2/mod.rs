//! 2-adic arithmetic at finite precision, the Hilbert symbol over Q_2, and
//! the exhaustive local verification on the fixed Kummer surface.

pub mod hilbert;
pub mod kummer;
pub mod twoadic;

pub use hilbert::{
    hilbert_symbol, hilbert_symbol_classes, hilbert_symbol_oracle, hilbert_symbol_rational,
};
pub use kummer::{verify_kummer_surface, KummerReport};
pub use twoadic::{SquareClass, TwoAdic, EXACT_PRECISION, MIN_PRECISION};
