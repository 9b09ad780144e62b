pub mod bp;
pub mod colour_code;
pub mod decoder;
pub mod dem;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod lsd;
pub mod rng;

pub use colour_code::{build_colour_code, ColourCodeLattice, Tiling};
pub use decoder::{BpLsdDecoder, BpOnlyDecoder, DecodeOutcome, DecodePath, Decoder};
pub use dem::{parse_dem, DetectorErrorModel};
pub use ensemble::{EnsembleConfig, EnsembleDecoder, ExecutionMode};
pub use error::{Error, Result};
pub use gf2::{BitVector, SparseBinaryMatrix};
