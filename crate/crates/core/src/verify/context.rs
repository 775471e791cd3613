use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::divisors::{Ambient, PairingCache, PairingMatrix};
use crate::error::{Error, Result};

/// Default ceiling on `n`.
pub const DEFAULT_MAX_N: usize = 10;

/// Read-only pairing matrices shared by verifiers, built once per `n`.
#[derive(Debug)]
pub struct Context {
    max_n: usize,
    cache: Option<PairingCache>,
    ambients: Mutex<HashMap<usize, Arc<Ambient>>>,
}

impl Default for Context {
    fn default() -> Self {
        Context::new(DEFAULT_MAX_N)
    }
}

impl Context {
    pub fn new(max_n: usize) -> Self {
        Context {
            max_n,
            cache: None,
            ambients: Mutex::new(HashMap::new()),
        }
    }

    /// Reads and writes pairing matrices through `cache`.
    pub fn with_cache(mut self, cache: PairingCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn ambient(&self, n: usize) -> Result<Arc<Ambient>> {
        if n > self.max_n {
            return Err(Error::ResourceBound { n, max: self.max_n });
        }
        let mut map = self
            .ambients
            .lock()
            .map_err(|_| Error::Internal("ambient table lock poisoned".into()))?;
        if let Some(a) = map.get(&n) {
            return Ok(Arc::clone(a));
        }
        let pairing = match &self.cache {
            Some(cache) => cache.load_or_build(n, self.max_n)?,
            None => PairingMatrix::build(n)?,
        };
        let a = Arc::new(Ambient::new(pairing)?);
        map.insert(n, Arc::clone(&a));
        Ok(a)
    }
}
