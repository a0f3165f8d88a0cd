//! Process-wide limit on the size of exhaustive searches.
//!
//! Every exhaustive loop announces its bound up front through [`charge`].
//! A bound above the limit aborts with [`Error::Budget`] before any work
//! is done. The amount charged on the current thread is tracked so that
//! reports can say how much work a check took.

use crate::error::{Error, Result};
use std::cell::Cell;
use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_LIMIT: u64 = 100_000_000;

static LIMIT: AtomicU64 = AtomicU64::new(DEFAULT_LIMIT);

thread_local! {
    static USED: Cell<u128> = const { Cell::new(0) };
    static EXEMPT: Cell<bool> = const { Cell::new(false) };
}

pub fn limit() -> u64 {
    LIMIT.load(Ordering::Relaxed)
}

pub fn set_limit(ops: u64) {
    LIMIT.store(ops, Ordering::Relaxed);
}

/// Reserve `ops` primitive operations for a single loop nest.
pub fn charge(ops: u128) -> Result<()> {
    let limit = limit();
    if ops > limit as u128 && !EXEMPT.with(Cell::get) {
        return Err(Error::Budget { needed: ops, limit });
    }
    USED.with(|u| u.set(u.get().saturating_add(ops)));
    Ok(())
}

/// Run `f` with the limit lifted on this thread, for fixed-size setup work.
pub fn exempt<T>(f: impl FnOnce() -> T) -> T {
    let before = EXEMPT.with(|e| e.replace(true));
    let out = f();
    EXEMPT.with(|e| e.set(before));
    out
}

/// Total charged on this thread so far.
pub fn used() -> u128 {
    USED.with(|u| u.get())
}

/// Run `f` and return its result with the amount it charged.
pub fn metered<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let before = used();
    let out = f();
    (out, used() - before)
}

/// `base^exp` saturating, used to compute loop bounds.
pub fn pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
