//! Peripheral-subgroup malnormality for knot groups.
//!
//! Knots enter as DT codes, braid words or structural expressions
//! (`torus`, `cable`, `sum`, `table`). Every knot gets a finite presentation
//! with a meridian/longitude pair; torus, cable and composite knots get an
//! explicit non-malnormality witness `g p₀ g⁻¹ = p₁` that is verified
//! symbolically or through finite quotients, and all other inputs can be
//! probed for bounded evidence.

pub mod census;
pub mod diagram;
pub mod group;
pub mod malnormality;
pub mod notation;
pub mod presentation;
