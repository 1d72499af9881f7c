//! Charge scheduling for a directional mobile charger (DMC) in a wireless
//! rechargeable sensor network whose travel costs are asymmetric.
//!
//! The crate is organised along the solution pipeline:
//!
//! * [`model`] holds the domain types and the closed-form energy and routing
//!   models shared by every stage.
//! * [`positions`] picks a small set of charging positions (k-means with a
//!   minimum enclosing circle refinement).
//! * [`directions`] reduces the continuous space of charging directions at each
//!   position to a finite representative set and builds the transfer
//!   coefficient matrix.
//! * [`timing`] solves the transmission-time linear program.
//! * [`routing`] finds the charging tour on the asymmetric cost graph.
//! * [`pipeline`] ties the stages together, implements the one-to-one greedy
//!   baseline and simulates schedules.
//! * [`generate`] produces random instances with the default simulation
//!   parameters.

pub mod directions;
pub mod error;
pub mod generate;
pub mod model;
pub mod pipeline;
pub mod positions;
pub mod routing;
pub mod timing;

pub use error::{Error, Result};
pub use model::{AsymmetryField, DmcParams, NetworkInstance, Node, Point};
pub use pipeline::{OperationSchedule, ScheduleItem, ScheduleMetrics};
