//! Size limits for the exponential searches.
//!
//! Every exact search in the crate is bounded by one of these. The defaults
//! can be overridden through the `DPORIENT_CAPS` environment variable, a
//! comma separated list of `key=value` items, e.g.
//! `DPORIENT_CAPS=euler_arcs=80,solver_budget=1000000`.

use crate::error::{Error, Result};

pub const CAPS_ENV: &str = "DPORIENT_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Edge count limit for `enumerate_orientations`.
    pub orientation_edges: usize,
    /// Edge count limit for the exhaustive certify strategy.
    pub exhaustive_edges: usize,
    /// Pair count limit for the Z-signable cover search.
    pub zsignable_pairs: usize,
    /// Edge count limit for graph-polynomial expansion.
    pub expansion_edges: usize,
    /// Arc count limit for the Eulerian subdigraph counter.
    pub euler_arcs: usize,
    /// Decision budget of the coloring solver.
    pub solver_budget: u64,
    /// Orientations visited by the bounded-first certify strategy.
    pub visit_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            orientation_edges: 24,
            exhaustive_edges: 20,
            zsignable_pairs: 12,
            expansion_edges: 26,
            euler_arcs: 64,
            solver_budget: 10_000_000,
            visit_budget: 10_000,
        }
    }
}

impl Caps {
    /// Defaults with `DPORIENT_CAPS` applied, if set.
    pub fn from_env() -> Result<Caps> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Caps> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("cap override `{item}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("cap override `{item}` has a non-integer value")))?;
            let v = value as usize;
            match key.trim() {
                "orientation_edges" => self.orientation_edges = v,
                "exhaustive_edges" => self.exhaustive_edges = v,
                "zsignable_pairs" => self.zsignable_pairs = v,
                "expansion_edges" => self.expansion_edges = v,
                "euler_arcs" => self.euler_arcs = v,
                "solver_budget" => self.solver_budget = value,
                "visit_budget" => self.visit_budget = v,
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }
}

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
