use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use chrono::{Duration, Utc};
use fortress_core::{parse, serialize, ActionKind, EntityClass, Fortress};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

use crate::auth::{self, Session};
use crate::error::{Result, StoreError};
use crate::journal::{Entry, Journal};
use crate::record::{FortressRecord, UserAccount, ANONYMOUS_AUTHOR, BACKPACK_CAPACITY, RECENT_CAP};

#[derive(Debug, Clone)]
pub struct StoreConfig {
    pub hash_rounds: u32,
    pub session_ttl: Duration,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            hash_rounds: auth::DEFAULT_ROUNDS,
            session_ttl: Duration::days(30),
        }
    }
}

/// A submission request.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct NewFortress {
    pub text: String,
    #[serde(default)]
    pub parent_id: Option<u64>,
    #[serde(default)]
    pub layout: serde_json::Value,
}

impl NewFortress {
    pub fn new(text: impl Into<String>) -> Self {
        NewFortress {
            text: text.into(),
            ..Default::default()
        }
    }

    pub fn remix_of(mut self, parent_id: u64) -> Self {
        self.parent_id = Some(parent_id);
        self
    }
}

/// Action-node counts over every class of every record.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeStats {
    counts: BTreeMap<ActionKind, u64>,
}

impl NodeStats {
    fn add_fortress(&mut self, f: &Fortress) {
        for class in f.classes.values() {
            for node in &class.nodes {
                *self.counts.entry(node.action.kind()).or_default() += 1;
            }
        }
    }

    pub fn get(&self, kind: ActionKind) -> u64 {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// All thirteen kinds in declaration order, zeros included.
    pub fn all(&self) -> Vec<(ActionKind, u64)> {
        ActionKind::ALL
            .into_iter()
            .map(|k| (k, self.get(k)))
            .collect()
    }

    /// Most frequent first; ties keep declaration order.
    pub fn descending(&self) -> Vec<(ActionKind, u64)> {
        let mut v = self.all();
        v.sort_by_key(|&(_, n)| std::cmp::Reverse(n));
        v
    }
}

#[derive(Default)]
struct State {
    journal: Option<Journal>,
    /// Record with id `n` lives at index `n - 1`.
    records: Vec<FortressRecord>,
    users: HashMap<String, UserAccount>,
    node_stats: NodeStats,
}

impl State {
    fn record(&self, id: u64) -> Option<&FortressRecord> {
        id.checked_sub(1).and_then(|i| self.records.get(i as usize))
    }

    fn record_mut(&mut self, id: u64) -> Option<&mut FortressRecord> {
        id.checked_sub(1)
            .and_then(|i| self.records.get_mut(i as usize))
    }

    fn persist(&mut self, entry: &Entry) -> Result<()> {
        match &mut self.journal {
            Some(j) => j.append(entry),
            None => Ok(()),
        }
    }

    fn apply(&mut self, entry: Entry, line: usize) -> Result<()> {
        let corrupt = |message: String| StoreError::Corrupt { line, message };
        match entry {
            Entry::Fortress(rec) => {
                if rec.id != self.records.len() as u64 + 1 {
                    return Err(corrupt(format!("fortress id {} out of sequence", rec.id)));
                }
                let f = parse(&rec.fortress_text).map_err(|e| {
                    corrupt(format!(
                        "stored fortress {} does not parse: {:?}",
                        rec.id, e
                    ))
                })?;
                self.node_stats.add_fortress(&f);
                self.records.push(rec);
            }
            Entry::Play { id, play_count } => {
                self.record_mut(id)
                    .ok_or_else(|| corrupt(format!("play count for unknown fortress {id}")))?
                    .play_count = play_count;
            }
            Entry::User(account) => {
                self.users.insert(account.username.clone(), account);
            }
            Entry::Backpack { username, backpack } => {
                self.users
                    .get_mut(&username)
                    .ok_or_else(|| corrupt(format!("backpack for unknown user {username:?}")))?
                    .backpack = backpack;
            }
        }
        Ok(())
    }
}

/// Fortress records, user accounts and sessions.
///
/// Mutations take the write lock, so they are applied and journaled one at
/// a time; reads share the read lock.
pub struct Store {
    state: RwLock<State>,
    sessions: Mutex<HashMap<String, Session>>,
    config: StoreConfig,
}

impl Store {
    /// Opens the journal at `path`, replaying it into memory.
    pub fn open(path: impl AsRef<Path>, config: StoreConfig) -> Result<Store> {
        let (journal, entries) = Journal::open(path)?;
        let mut state = State::default();
        for (i, entry) in entries.into_iter().enumerate() {
            state.apply(entry, i + 1)?;
        }
        state.journal = Some(journal);
        tracing::info!(
            records = state.records.len(),
            users = state.users.len(),
            "store opened"
        );
        Ok(Store::from_state(state, config))
    }

    /// A store that keeps nothing on disk.
    pub fn ephemeral(config: StoreConfig) -> Store {
        Store::from_state(State::default(), config)
    }

    fn from_state(state: State, config: StoreConfig) -> Store {
        Store {
            state: RwLock::new(state),
            sessions: Mutex::new(HashMap::new()),
            config,
        }
    }

    /// Validates and stores a fortress. The stored text is canonical and its
    /// AUTHOR line names the session user, or the anonymous author.
    pub fn submit(&self, new: NewFortress, token: Option<&str>) -> Result<u64> {
        let author = match token {
            Some(t) => self.authenticate(t)?,
            None => ANONYMOUS_AUTHOR.to_string(),
        };
        let mut fortress = parse(&new.text).map_err(StoreError::ValidationFailed)?;
        fortress.author = author.clone();
        let text = serialize(&fortress);

        let mut state = self.state.write();
        if let Some(p) = new.parent_id {
            if state.record(p).is_none() {
                return Err(StoreError::UnknownParent(p));
            }
        }
        let record = FortressRecord {
            id: state.records.len() as u64 + 1,
            fortress_text: text,
            name: fortress.name.clone(),
            author,
            notes: fortress.notes.clone(),
            parent_id: new.parent_id,
            created_at: Utc::now(),
            play_count: 0,
            has_player: fortress.has_player(),
            layout: new.layout,
        };
        state.persist(&Entry::Fortress(record.clone()))?;
        state.node_stats.add_fortress(&fortress);
        let id = record.id;
        state.records.push(record);
        Ok(id)
    }

    pub fn get(&self, id: u64) -> Result<FortressRecord> {
        self.state
            .read()
            .record(id)
            .cloned()
            .ok_or(StoreError::UnknownId(id))
    }

    pub fn len(&self) -> usize {
        self.state.read().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Newest first, at most `min(limit, 120)` records.
    pub fn recent(&self, limit: usize) -> Vec<FortressRecord> {
        let state = self.state.read();
        state
            .records
            .iter()
            .rev()
            .take(limit.min(RECENT_CAP))
            .cloned()
            .collect()
    }

    /// Every record, newest first.
    pub fn all(&self) -> Vec<FortressRecord> {
        self.state.read().records.iter().rev().cloned().collect()
    }

    /// Case-insensitive substring match on author and/or name, newest first.
    /// Blank criteria count as absent.
    pub fn search(&self, user: Option<&str>, name: Option<&str>) -> Result<Vec<FortressRecord>> {
        let user = user.filter(|s| !s.is_empty()).map(str::to_lowercase);
        let name = name.filter(|s| !s.is_empty()).map(str::to_lowercase);
        if user.is_none() && name.is_none() {
            return Err(StoreError::NoCriteria);
        }
        let hit = |field: &str, needle: &Option<String>| {
            needle
                .as_ref()
                .is_none_or(|n| field.to_lowercase().contains(n.as_str()))
        };
        let state = self.state.read();
        Ok(state
            .records
            .iter()
            .rev()
            .filter(|r| hit(&r.author, &user) && hit(&r.name, &name))
            .cloned()
            .collect())
    }

    /// Creates an account and returns a session token for it.
    pub fn register(&self, username: &str, password: &str, email: Option<&str>) -> Result<String> {
        if username.trim().is_empty() || username.chars().any(char::is_whitespace) {
            return Err(StoreError::InvalidInput(
                "username must be non-empty without spaces".into(),
            ));
        }
        if password.is_empty() {
            return Err(StoreError::InvalidInput(
                "password must not be empty".into(),
            ));
        }
        let digest = auth::hash_password(password, self.config.hash_rounds);
        {
            let mut state = self.state.write();
            let taken = username.eq_ignore_ascii_case(ANONYMOUS_AUTHOR)
                || state.users.keys().any(|u| u.eq_ignore_ascii_case(username));
            if taken {
                return Err(StoreError::UsernameTaken(username.to_string()));
            }
            let account = UserAccount {
                username: username.to_string(),
                password_digest: digest,
                email: email.filter(|e| !e.is_empty()).map(str::to_string),
                backpack: Vec::new(),
            };
            state.persist(&Entry::User(account.clone()))?;
            state.users.insert(username.to_string(), account);
        }
        Ok(self.open_session(username))
    }

    pub fn login(&self, username: &str, password: &str) -> Result<String> {
        let digest = self
            .state
            .read()
            .users
            .get(username)
            .map(|u| u.password_digest.clone())
            .ok_or(StoreError::BadCredentials)?;
        if !auth::verify_password(password, &digest) {
            return Err(StoreError::BadCredentials);
        }
        Ok(self.open_session(username))
    }

    fn open_session(&self, username: &str) -> String {
        let token = auth::new_token();
        let mut sessions = self.sessions.lock();
        let now = Utc::now();
        sessions.retain(|_, s| s.is_live(now));
        sessions.insert(
            token.clone(),
            Session::new(username, self.config.session_ttl),
        );
        token
    }

    /// Username behind a live session token.
    pub fn authenticate(&self, token: &str) -> Result<String> {
        let mut sessions = self.sessions.lock();
        match sessions.get(token) {
            Some(s) if s.is_live(Utc::now()) => Ok(s.username.clone()),
            Some(_) => {
                sessions.remove(token);
                Err(StoreError::Unauthorized)
            }
            None => Err(StoreError::Unauthorized),
        }
    }

    pub fn user(&self, username: &str) -> Option<UserAccount> {
        self.state.read().users.get(username).cloned()
    }

    pub fn backpack(&self, token: &str) -> Result<Vec<EntityClass>> {
        let username = self.authenticate(token)?;
        Ok(self.user(&username).map(|u| u.backpack).unwrap_or_default())
    }

    /// Copies entity `ch` of fortress `id` into the session user's backpack.
    pub fn backpack_add(&self, token: &str, id: u64, ch: char) -> Result<Vec<EntityClass>> {
        let username = self.authenticate(token)?;
        let mut state = self.state.write();
        let record = state.record(id).ok_or(StoreError::UnknownId(id))?;
        let fortress = parse(&record.fortress_text).map_err(StoreError::ValidationFailed)?;
        let class = fortress
            .classes
            .get(&ch)
            .cloned()
            .ok_or(StoreError::UnknownEntity { id, ch })?;
        let mut backpack = state
            .users
            .get(&username)
            .ok_or(StoreError::Unauthorized)?
            .backpack
            .clone();
        if backpack.len() >= BACKPACK_CAPACITY {
            return Err(StoreError::BackpackFull(backpack.len()));
        }
        backpack.push(class);
        state.persist(&Entry::Backpack {
            username: username.clone(),
            backpack: backpack.clone(),
        })?;
        if let Some(user) = state.users.get_mut(&username) {
            user.backpack = backpack.clone();
        }
        Ok(backpack)
    }

    /// Ids from the root ancestor down to `id`.
    pub fn lineage(&self, id: u64) -> Result<Vec<u64>> {
        let state = self.state.read();
        let mut chain = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            let rec = state.record(c).ok_or(StoreError::UnknownId(c))?;
            chain.push(c);
            // Parents always have smaller ids, so this terminates.
            cur = rec.parent_id;
        }
        chain.reverse();
        Ok(chain)
    }

    pub fn node_stats(&self) -> NodeStats {
        self.state.read().node_stats.clone()
    }

    /// Increments and returns the play counter of `id`.
    pub fn record_play(&self, id: u64) -> Result<u64> {
        let mut state = self.state.write();
        let count = state
            .record(id)
            .ok_or(StoreError::UnknownId(id))?
            .play_count
            + 1;
        state.persist(&Entry::Play {
            id,
            play_count: count,
        })?;
        if let Some(r) = state.record_mut(id) {
            r.play_count = count;
        }
        Ok(count)
    }
}
