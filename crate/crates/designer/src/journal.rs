//! Append-only JSON-lines journal of session events.
//!
//! Replaying the journal rebuilds every session. Events are appended only
//! after validation succeeds, so replay never meets an illegal move.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::api::CreateSession;
use crate::session::{Move, Session};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Create { id: Uuid, request: CreateSession },
    Apply { id: Uuid, action: Move },
    Undo { id: Uuid },
}

pub struct Journal {
    file: Mutex<File>,
}

impl Journal {
    pub fn open(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Journal { file: Mutex::new(file) })
    }

    pub fn append(&self, event: &Event) -> io::Result<()> {
        let mut line = serde_json::to_string(event).map_err(io::Error::other)?;
        line.push('\n');
        let mut f = self.file.lock().expect("journal poisoned");
        f.write_all(line.as_bytes())?;
        f.flush()
    }
}

/// Rebuilds sessions from a journal file; a missing file yields none.
pub fn replay(path: &Path) -> io::Result<HashMap<Uuid, Session>> {
    let mut sessions = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(sessions),
        Err(e) => return Err(e),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| io::Error::new(io::ErrorKind::InvalidData, format!("journal line {}: {m}", i + 1));
        let event: Event = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        match event {
            Event::Create { id, request } => {
                sessions.insert(id, request.build().map_err(bad)?);
            }
            Event::Apply { id, action } => {
                let s = sessions.get_mut(&id).ok_or_else(|| bad(format!("unknown session {id}")))?;
                s.apply(action).ok_or_else(|| bad(format!("illegal move {action:?}")))?;
            }
            Event::Undo { id } => {
                let s = sessions.get_mut(&id).ok_or_else(|| bad(format!("unknown session {id}")))?;
                s.undo();
            }
        }
    }
    Ok(sessions)
}
