//! Numerical laboratory for the statistics of low-lying zeros.
//!
//! Two sides of one comparison live here. On the random-matrix side,
//! [`rmt`] draws Haar-distributed matrices from the classical compact
//! groups and accumulates eigenangle statistics near the point 1. On the
//! arithmetic side, [`lfun`] and [`family`] evaluate one-level densities
//! of L-function zeros through the explicit formula, sieved prime sums,
//! and averages over synthetic families. The [`kernels`] module holds the
//! limiting density kernels of the five symmetry types, against which both
//! sides are measured, and [`testfn`] provides the band-limited test
//! functions that localize every statistic.

pub mod arith;
pub mod family;
pub mod kernels;
pub mod lfun;
pub mod numerics;
pub mod rmt;
pub mod testfn;
