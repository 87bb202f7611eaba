//! Exact arithmetic kernel: integers, rationals, primes, and dense
//! polynomials over ℤ, F_p, F_{p^d} and F_p[t].

pub mod arith;
pub mod fq;
pub mod fqpoly;
pub mod ntt;
pub mod poly;
pub mod resultant;
pub mod ring;

pub use arith::{is_square, is_twice_square, moebius, primes_up_to, vp, BigRat, Valuation};
pub use fq::Fq;
pub use fqpoly::{factor, is_square_poly, Factorization, FqPoly, FqPolyRing};
pub use poly::{Poly, PolyRing};
pub use resultant::{discriminant, resultant, ZPoly};
pub use ring::{Integers, Ring};
