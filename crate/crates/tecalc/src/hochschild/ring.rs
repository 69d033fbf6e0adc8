//! Coefficients: the base ring K[t]/(t^M), optionally extended by an even Laurent variable `e`,
//! and sparse exact linear combinations over it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A monomial `t^t e^e` of the coefficient ring. Both variables are even.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mono {
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub t: u32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub e: i32,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

fn is_zero_i32(x: &i32) -> bool {
    *x == 0
}

impl Mono {
    pub const ONE: Mono = Mono { t: 0, e: 0 };

    pub fn t_pow(t: u32) -> Self {
        Mono { t, e: 0 }
    }

    /// Product in K[t]/(t^M)[e, 1/e]; `None` when it lands in (t^M).
    pub fn mul(self, other: Mono, t_order: u32) -> Option<Mono> {
        let t = self.t + other.t;
        (t < t_order).then_some(Mono {
            t,
            e: self.e + other.e,
        })
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.t, self.e) {
            (0, 0) => write!(f, "1"),
            (t, 0) => write!(f, "t^{t}"),
            (0, e) => write!(f, "e^{e}"),
            (t, e) => write!(f, "t^{t}e^{e}"),
        }
    }
}

/// Sparse linear combination `Σ c_k · k` with exact coefficients and no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin<K: Ord>(BTreeMap<K, Scalar>);

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin(BTreeMap::new())
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: Scalar) -> Self {
        let mut out = Self::new();
        out.add_term(key, coeff);
        out
    }

    pub fn add_term(&mut self, key: K, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.0.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        for (k, c) in &other.0 {
            self.add_term(k.clone(), c * coeff);
        }
    }

    pub fn add(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &Scalar::int(1));
    }

    pub fn sub(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &Scalar::int(-1));
    }

    pub fn scaled(&self, coeff: &Scalar) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, coeff);
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&Scalar::int(-1))
    }

    pub fn difference(&self, other: &Lin<K>) -> Self {
        let mut out = self.clone();
        out.sub(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, key: &K) -> Option<&Scalar> {
        self.0.get(key)
    }

    /// Keep only the terms whose key satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(&K) -> bool) -> Self {
        Lin(self
            .0
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect())
    }

    /// Apply a key map that may merge or drop keys, with an extra factor per key.
    pub fn map_keys<J: Ord + Clone>(&self, f: impl Fn(&K) -> Option<(J, Scalar)>) -> Lin<J> {
        let mut out = Lin::new();
        for (k, c) in &self.0 {
            if let Some((j, factor)) = f(k) {
                out.add_term(j, c * &factor);
            }
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut out = Lin::new();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

/// Element of the coefficient ring.
pub type RingElem = Lin<Mono>;

/// Element of the free module A over the coefficient ring: terms keyed by (basis index, monomial).
pub type Vector = Lin<(usize, Mono)>;

/// `±1` as a scalar from a parity.
pub(crate) fn sign(odd: u32) -> Scalar {
    if odd.is_multiple_of(2) {
        Scalar::int(1)
    } else {
        Scalar::int(-1)
    }
}

/// All compositions `k = k_1 + … + k_n` with nonnegative parts, in lexicographic order.
pub(crate) fn compositions(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=k {
            prefix.push(first);
            go(k - first, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, n, &mut Vec::new(), &mut out);
    out
}

/// Split `items` into consecutive pieces of the given sizes.
pub(crate) fn split<'a, T>(items: &'a [T], sizes: &[usize]) -> Vec<&'a [T]> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        out.push(&items[start..start + s]);
        start += s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        // stars and bars: C(k+n-1, n-1)
        assert_eq!(compositions(4, 3).len(), 15);
        assert_eq!(compositions(0, 5).len(), 1);
        assert_eq!(compositions(3, 1), vec![vec![3]]);
    }

    #[test]
    fn lin_cancels() {
        let mut v: Lin<u8> = Lin::single(1, Scalar::int(2));
        v.add_term(1, Scalar::int(-2));
        assert!(v.is_zero());
    }

    #[test]
    fn truncation() {
        assert_eq!(Mono::t_pow(1).mul(Mono::t_pow(1), 2), None);
        assert_eq!(
            Mono::t_pow(1).mul(Mono { t: 0, e: -1 }, 3),
            Some(Mono { t: 1, e: -1 })
        );
    }
}
