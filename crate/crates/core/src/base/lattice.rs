use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::exact::Rational;

/// Lazily evaluated function on the integer lattice with a memo table.
///
/// Not `Sync`: each verification task owns its own vectors.
pub struct LatticeVector<'a> {
    eval: Box<dyn Fn(i64) -> Rational + 'a>,
    cache: RefCell<BTreeMap<i64, Rational>>,
}

impl<'a> LatticeVector<'a> {
    pub fn new(eval: impl Fn(i64) -> Rational + 'a) -> Self {
        LatticeVector {
            eval: Box::new(eval),
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn get(&self, x: i64) -> Rational {
        if let Some(v) = self.cache.borrow().get(&x) {
            return v.clone();
        }
        let v = (self.eval)(x);
        self.cache.borrow_mut().insert(x, v.clone());
        v
    }

    /// Evaluates without consulting or filling the cache.
    pub fn recompute(&self, x: i64) -> Rational {
        (self.eval)(x)
    }

    pub fn cached_len(&self) -> usize {
        self.cache.borrow().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn cache_matches_recomputation() {
        let v = LatticeVector::new(|x| rat(1, 2) * int(x * x));
        for x in -3..10 {
            assert_eq!(v.get(x), v.recompute(x));
            assert_eq!(v.get(x), v.recompute(x));
        }
        assert_eq!(v.cached_len(), 13);
    }
}
