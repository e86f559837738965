//! Certified homological fillings of integer 1-cycles in weighted
//! simplicial complexes.
//!
//! * [`chains`]: simplicial complexes, integer chains, boundary operators, mass.
//! * [`intlin`]: exact integer linear algebra and small-solution bounds.
//! * [`filling`]: combinatorial fillings with coefficient certificates,
//!   minimum-mass fillings, filling-function profiles.
//! * [`geom`]: covers, nerves, geodesic graphs and the staged filling
//!   pipeline on triangulated spaces.

// `!(x > 0.0)` style checks deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chains;
pub mod error;
pub mod filling;
pub mod geom;
pub mod intlin;
pub mod serde_big;

pub use error::{Error, ErrorKind, Obstruction, Result};

use std::sync::atomic::{AtomicU64, Ordering};

/// Default relative tolerance for comparisons of real-valued volumes.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Relative tolerance used by every geometric comparison. Integer checks
/// never use it.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Overrides [`tolerance`] process-wide.
pub fn set_tolerance(t: f64) -> Result<()> {
    if !(t.is_finite() && (0.0..1.0).contains(&t)) {
        return Err(Error::domain(format!("tolerance must lie in [0, 1), got {t}")));
    }
    TOLERANCE_BITS.store(t.to_bits(), Ordering::Relaxed);
    Ok(())
}
