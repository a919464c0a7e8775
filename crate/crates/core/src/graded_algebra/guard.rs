//! Word-length limit for intermediate polynomials.
//!
//! [`with_degree_limit`] runs a computation with a per-thread cap on the word
//! length of every product; exceeding the cap aborts the computation and
//! reports [`DegreeLimitExceeded`] instead of letting it grow without bound.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};

use thiserror::Error;

thread_local! {
    static LIMIT: Cell<Option<u32>> = const { Cell::new(None) };
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("intermediate polynomial of degree {degree} exceeds the limit {limit}")]
pub struct DegreeLimitExceeded {
    pub limit: u32,
    pub degree: u32,
}

pub(crate) fn check(word_degree: u32) {
    if let Some(limit) = LIMIT.with(Cell::get) {
        if word_degree > limit {
            panic::panic_any(DegreeLimitExceeded {
                limit,
                degree: word_degree,
            });
        }
    }
}

struct Reset(Option<u32>);

impl Drop for Reset {
    fn drop(&mut self) {
        LIMIT.with(|l| l.set(self.0));
    }
}

/// Runs `f` with products capped at `limit` total word length.
pub fn with_degree_limit<R>(limit: u32, f: impl FnOnce() -> R) -> Result<R, DegreeLimitExceeded> {
    let previous = LIMIT.with(|l| l.replace(Some(limit)));
    let _reset = Reset(previous);
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => Ok(r),
        Err(payload) => match payload.downcast::<DegreeLimitExceeded>() {
            Ok(e) => Err(*e),
            Err(other) => panic::resume_unwind(other),
        },
    }
}

/// Installs a panic hook that stays silent for [`DegreeLimitExceeded`]
/// aborts and defers to the previous hook otherwise.
pub fn install_quiet_hook() {
    let previous = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<DegreeLimitExceeded>().is_none() {
            previous(info);
        }
    }));
}
