//! Component subsets and the sparse rate maps indexed by them.
//!
//! Components are numbered from 1 in the public API (matching model
//! documents such as `"1,2"`), and stored as a bitmask internally.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest component count a model may declare.
pub const MAX_COMPONENTS: usize = 63;

/// Largest component count for which all `2^n - 1` subsets are enumerated.
pub const MAX_ENUMERATED: usize = 20;

/// A nonempty set of component indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetKey(u64);

impl SubsetKey {
    /// Builds a key from 1-based component indices, which must be strictly increasing.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("subset", "empty subset"));
        }
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::invalid(
                    "subset",
                    format!("index {i} outside 1..={n}"),
                ));
            }
            if i <= prev {
                return Err(Error::invalid(
                    "subset",
                    "indices must be strictly increasing",
                ));
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        Ok(SubsetKey(mask))
    }

    /// Key for the singleton `{i}` (1-based).
    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_COMPONENTS).contains(&i));
        SubsetKey(1 << (i - 1))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        debug_assert!(mask != 0);
        SubsetKey(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=64).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// Zero-based positions of the members, ascending.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |b| mask & (1 << b) != 0)
    }

    /// 1-based indices, ascending.
    pub fn indices(self) -> Vec<usize> {
        self.positions().map(|p| p + 1).collect()
    }

    /// Parses the comma-joined form used by model documents, e.g. `"1,3"`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let indices = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid("rates", format!("bad subset key `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        SubsetKey::new(&indices, n)
    }
}

impl Ord for SubsetKey {
    /// Orders by size, then lexicographically by member indices.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for SubsetKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Every nonempty subset of `n` components as bitmasks `1..2^n`.
pub fn all_subsets(n: usize) -> Result<impl Iterator<Item = SubsetKey>> {
    if n > MAX_ENUMERATED {
        return Err(Error::SizeLimit {
            n,
            max: MAX_ENUMERATED,
        });
    }
    Ok((1u64..(1u64 << n)).map(SubsetKey::from_mask))
}

/// Nonnegative rates indexed by subsets of `{1..n}`. Absent keys have rate zero.
#[derive(Clone, PartialEq)]
pub struct SubsetRateMap<T> {
    n: usize,
    rates: BTreeMap<SubsetKey, T>,
}

impl<T: Real> SubsetRateMap<T> {
    /// Validates and builds a rate map. Singletons missing from `entries` are
    /// inserted with rate zero.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (SubsetKey, T)>) -> Result<Self> {
        if n == 0 || n > MAX_COMPONENTS {
            return Err(Error::invalid(
                "n",
                format!("must be in 1..={MAX_COMPONENTS}"),
            ));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rates = BTreeMap::new();
        for (key, rate) in entries {
            if key.mask() & !full != 0 {
                return Err(Error::invalid(
                    "rates",
                    format!("subset {key} not within 1..={n}"),
                ));
            }
            if !rate.is_finite() || rate < T::zero() {
                return Err(Error::invalid(
                    "rates",
                    format!("rate for {key} must be finite and >= 0, got {rate}"),
                ));
            }
            if rates.insert(key, rate).is_some() {
                return Err(Error::invalid("rates", format!("duplicate subset {key}")));
            }
        }
        for i in 1..=n {
            rates.entry(SubsetKey::singleton(i)).or_insert(T::zero());
        }
        if !rates.values().any(|&r| r > T::zero()) {
            return Err(Error::invalid(
                "rates",
                "at least one rate must be positive",
            ));
        }
        Ok(SubsetRateMap { n, rates })
    }

    /// Convenience constructor from `(1-based indices, rate)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(&[usize], T)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|(idx, r)| SubsetKey::new(idx, n).map(|k| (k, *r)))
            .collect::<Result<Vec<_>>>()?;
        SubsetRateMap::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self, key: SubsetKey) -> T {
        self.rates.get(&key).copied().unwrap_or_else(T::zero)
    }

    /// Singleton rate of component `i` (1-based).
    pub fn singleton(&self, i: usize) -> T {
        self.rate(SubsetKey::singleton(i))
    }

    /// Stored entries (including zero singletons) in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetKey, T)> + '_ {
        self.rates.iter().map(|(k, v)| (*k, *v))
    }

    /// Entries with strictly positive rate.
    pub fn positive(&self) -> impl Iterator<Item = (SubsetKey, T)> + '_ {
        self.iter().filter(|(_, r)| *r > T::zero())
    }

    /// Sum of every rate (the aggregate rate of the series system for the shock model).
    pub fn total(&self) -> T {
        self.rates.values().copied().sum()
    }

    /// Sum of singleton rates.
    pub fn singleton_total(&self) -> T {
        (1..=self.n).map(|i| self.singleton(i)).sum()
    }

    /// Sum of the rates of every subset containing component `i`.
    pub fn covering_total(&self, i: usize) -> T {
        self.iter()
            .filter(|(k, _)| k.contains(i))
            .map(|(_, r)| r)
            .sum()
    }

    /// `a_k`: sum of the rates of all subsets of size `k`.
    pub fn order_total(&self, k: usize) -> T {
        self.iter()
            .filter(|(key, _)| key.len() == k)
            .map(|(_, r)| r)
            .sum()
    }

    /// True when every non-singleton rate is zero.
    pub fn has_no_interactions(&self) -> bool {
        self.iter().all(|(k, r)| k.len() == 1 || r == T::zero())
    }

    pub(crate) fn cast<U: Real>(&self) -> SubsetRateMap<U> {
        SubsetRateMap {
            n: self.n,
            rates: self
                .rates
                .iter()
                .map(|(k, v)| (*k, U::lit(v.as_f64())))
                .collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for SubsetRateMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.rates.iter()).finish()
    }
}
