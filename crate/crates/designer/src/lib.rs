//! Interactive circuit design over HTTP.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | new session from `{"caps": [...]}` |
//! | GET | `/sessions/{id}` | snapshot |
//! | GET | `/sessions/{id}/moves` | legal next moves |
//! | POST | `/sessions/{id}/moves` | apply a move |
//! | DELETE | `/sessions/{id}/moves/last` | undo |
//! | GET | `/sessions/{id}/closure?max=m` | bounded completion search |
//! | GET | `/sessions/{id}/render` | SVG |
//! | GET | `/sessions/{id}/export` | circuit record of a closed session |

pub mod api;
pub mod journal;
pub mod session;

pub use api::{router, AppState, CreateSession, DEFAULT_CLOSURE_BOUND};
pub use session::{Closure, Move, MoveOption, Session, Status};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/designer.md")]
mod book {}
