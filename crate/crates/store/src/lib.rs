//! Persistence and the HTTP API for shared fortresses: submissions, search,
//! accounts, remix lineage, backpacks, play counts and node statistics.

pub mod api;
pub mod auth;
pub mod backpack;
mod error;
pub mod journal;
mod record;
mod store;

pub use api::{router, serve};
pub use backpack::{backpack_place, PlaceReport};
pub use error::{Result, StoreError};
pub use record::{FortressRecord, UserAccount, ANONYMOUS_AUTHOR, BACKPACK_CAPACITY, RECENT_CAP};
pub use store::{NewFortress, NodeStats, Store, StoreConfig};
