//! Ring-generic exact arithmetic shared by the rest of the crate.

pub mod interval;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod zpoly;

pub use interval::Interval;
pub use padic::{padic_val_int, padic_val_rat, Valuation};
pub use poly::{
    bareiss_det, disc_cubic, disc_rational, discriminant_int, resultant, sturm_count_f64, sturm_count_q,
    sturm_real_roots, sylvester_resultant, MonicPoly, PolyJson,
};
pub use ring::{
    format_rational, inv_mod, is_prime, rational_to_f64, Integers, PadicTrunc, Rationals, Reals, Ring, RingTag,
    ZMod,
};
