use crate::error::{Error, Result};

use super::context::PAdicContext;
use super::structure::FiniteZpModule;

/// Results that carry a certified flag.
pub trait Certified {
    fn is_certified(&self) -> bool;
}

impl Certified for FiniteZpModule {
    fn is_certified(&self) -> bool {
        self.certified()
    }
}

impl<T: Certified> Certified for Vec<T> {
    fn is_certified(&self) -> bool {
        self.iter().all(Certified::is_certified)
    }
}

/// A result tagged with the precision it was computed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escalated<T> {
    pub value: T,
    pub precision: u32,
    pub certified: bool,
}

fn run<T: Certified>(
    ctx: &PAdicContext,
    compute: &dyn Fn(&PAdicContext) -> Result<T>,
) -> Result<Result<Escalated<T>, Escalated<T>>> {
    let mut current = *ctx;
    loop {
        let value = compute(&current)?;
        let certified = value.is_certified();
        let tagged = Escalated {
            value,
            precision: current.precision(),
            certified,
        };
        if certified {
            return Ok(Ok(tagged));
        }
        if current.precision() >= current.max_precision() {
            return Ok(Err(tagged));
        }
        let next = (current.precision() * 2).min(current.max_precision());
        current = current.at_precision(next)?;
    }
}

/// Runs `compute` at the context precision, doubling `N` (capped at `N_max`)
/// until the result is certified.
pub fn escalate_and_retry<T: Certified>(
    ctx: &PAdicContext,
    compute: impl Fn(&PAdicContext) -> Result<T>,
) -> Result<Escalated<T>> {
    match run(ctx, &compute)? {
        Ok(done) => Ok(done),
        Err(last) => Err(Error::PrecisionExhausted {
            precision: last.precision,
        }),
    }
}

/// As [`escalate_and_retry`], but returns the last uncertified result instead
/// of failing once `N_max` is reached.
pub fn escalate_best_effort<T: Certified>(
    ctx: &PAdicContext,
    compute: impl Fn(&PAdicContext) -> Result<T>,
) -> Result<Escalated<T>> {
    run(ctx, &compute).map(|r| r.unwrap_or_else(|last| last))
}
