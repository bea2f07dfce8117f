use chrono::{DateTime, Utc};
use fortress_core::EntityClass;
use serde::{Deserialize, Serialize};

/// Author recorded for submissions made without a session.
pub const ANONYMOUS_AUTHOR: &str = "dork";
pub const BACKPACK_CAPACITY: usize = 10;
pub const RECENT_CAP: usize = 120;

/// A persisted submission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FortressRecord {
    pub id: u64,
    /// Canonical `.fort` text.
    pub fortress_text: String,
    pub name: String,
    pub author: String,
    pub notes: String,
    pub parent_id: Option<u64>,
    pub created_at: DateTime<Utc>,
    pub play_count: u64,
    pub has_player: bool,
    /// Editor canvas layout, stored verbatim for the client.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub layout: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserAccount {
    pub username: String,
    pub password_digest: String,
    pub email: Option<String>,
    #[serde(default)]
    pub backpack: Vec<EntityClass>,
}
