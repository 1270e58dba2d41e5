//! Independent checks of the closed forms: kernels rebuilt by Gaussian
//! convolution, a wave-packet Monte Carlo over permanents, and quadrature.

pub mod montecarlo;
pub mod quadrature;
pub mod ring;
pub mod wavepacket;

pub use montecarlo::{
    mc_exclusive_pair_density, mc_exclusive_spectrum, McPairDensity, McSettings, McSpectrum,
    PacketSource,
};
pub use quadrature::HermiteRule;
pub use ring::{ring_recursion, RingCoefficients};
pub use wavepacket::{
    overlap, permanent, permanent_enumerate, permanent_ryser, permanent_weight, CMatrix,
    WavePacket, WavePacketConfig,
};
