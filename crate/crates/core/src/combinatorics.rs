//! Encoding of `r`-subsets of `{1, ..., n}` as bit patterns, colex
//! ranking, and exact binomial coefficients.
//!
//! Elements are 1-based everywhere a user sees them and 0-based as bit
//! positions: element `i` is bit `i - 1`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set; vertices are stored in a `u128`.
pub const MAX_N: u32 = 128;

fn pascal() -> &'static [[u128; MAX_N as usize + 1]] {
    static TABLE: OnceLock<Vec<[u128; MAX_N as usize + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let size = MAX_N as usize + 1;
        let mut rows = vec![[0u128; MAX_N as usize + 1]; size];
        for n in 0..size {
            rows[n][0] = 1;
            for k in 1..=n {
                // C(128, 64) < 2^127, so no entry overflows.
                rows[n][k] = rows[n - 1][k - 1] + if k < n { rows[n - 1][k] } else { 0 };
            }
        }
        rows
    })
}

/// `C(n, k)` for `n <= 128`; always fits in a `u128`.
#[inline]
pub(crate) fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        0
    } else {
        pascal()[n as usize][k as usize]
    }
}

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
///
/// Fails with [`Error::Overflow`] when the value does not fit in a `u128`.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    if n <= MAX_N as u64 {
        return Ok(binom(n as u32, k as u32));
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc = C(n - k + i - 1, i - 1); reduce before multiplying so that
        // intermediates never exceed the final value.
        let top = (n - k) as u128 + i;
        let g = acc.gcd(&i);
        let step = top / (i / g);
        acc = (acc / g)
            .checked_mul(step)
            .ok_or_else(|| Error::Overflow(format!("C({n}, {k}) exceeds 128 bits")))?;
    }
    Ok(acc)
}

/// Arbitrary-precision binomial coefficient.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

fn is_prime_power(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d)).unwrap_or(m);
    let mut rest = m;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    rest == 1
}

/// Parameters `(n, r, s)` of the Johnson graph `G(n, r, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GraphParams {
    n: u32,
    r: u32,
    s: u32,
}

#[derive(Deserialize)]
struct RawParams {
    n: u32,
    r: u32,
    s: u32,
}

impl TryFrom<RawParams> for GraphParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        GraphParams::new(raw.n, raw.r, raw.s)
    }
}

impl GraphParams {
    /// Validates `0 <= s < r <= n <= 128`.
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::domain(format!("n = {n} must lie in 1..={MAX_N}")));
        }
        if r > n {
            return Err(Error::domain(format!("r = {r} must not exceed n = {n}")));
        }
        if s >= r {
            return Err(Error::domain(format!("s = {s} must be smaller than r = {r}")));
        }
        Ok(GraphParams { n, r, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `C(n, r)`.
    pub fn vertex_count(&self) -> u128 {
        binom(self.n, self.r)
    }

    /// `C(r, s) * C(n - r, r - s)`.
    pub fn degree(&self) -> Result<u128> {
        binom(self.r, self.s)
            .checked_mul(binom(self.n - self.r, self.r - self.s))
            .ok_or_else(|| Error::Overflow(format!("degree of {self} exceeds 128 bits")))
    }

    /// `r = 2s + 1` and `r - s` a prime power.
    pub fn prime_power_regime(&self) -> bool {
        self.r == 2 * self.s + 1 && is_prime_power(self.r - self.s)
    }

    /// True when the graph has no edges.
    pub fn is_degenerate(&self) -> bool {
        self.r - self.s > self.n - self.r
    }

    /// Builds a vertex from 1-based elements.
    pub fn vertex(&self, elements: &[u32]) -> Result<Vertex> {
        let v = Vertex::from_elements(self.n, elements)?;
        if v.r() != self.r {
            return Err(Error::domain(format!(
                "{v} has {} elements, expected r = {}",
                v.r(),
                self.r
            )));
        }
        Ok(v)
    }

    /// Every vertex, in colex (rank) order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let (n, r) = (self.n as u8, self.r as u8);
        subset_masks(self.n, self.r).map(move |bits| Vertex { bits, n, r })
    }

    pub(crate) fn check(&self, v: &Vertex) -> Result<()> {
        if v.n() != self.n || v.r() != self.r {
            return Err(Error::domain(format!(
                "{v} (n = {}, r = {}) does not belong to {self}",
                v.n(),
                v.r()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.n, self.r, self.s)
    }
}

/// Iterates all `k`-subsets of `0..m` as bit masks in increasing numeric
/// order, which is colex order.
pub(crate) fn subset_masks(m: u32, k: u32) -> impl Iterator<Item = u128> {
    let limit_ok = move |x: u128| m >= 128 || x >> m == 0;
    let mut next = if k > m {
        None
    } else if k == 128 {
        Some(u128::MAX)
    } else {
        Some((1u128 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let low = cur & cur.wrapping_neg();
            cur.checked_add(low).and_then(|ripple| {
                let ones = ((ripple ^ cur) >> 2) / low;
                let x = ripple | ones;
                limit_ok(x).then_some(x)
            })
        };
        Some(cur)
    })
}

/// An `r`-element subset of `{1, ..., n}` stored as a bit pattern.
///
/// Ordering compares bit patterns numerically, which coincides with colex
/// order (and therefore with [`rank`]) among vertices of one graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    bits: u128,
    n: u8,
    r: u8,
}

impl Vertex {
    /// Builds a vertex from distinct 1-based elements of `{1, ..., n}`.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Vertex> {
        if n == 0 || n > MAX_N {
            return Err(Error::domain(format!("n = {n} must lie in 1..={MAX_N}")));
        }
        let mut bits = 0u128;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::domain(format!("element {e} outside 1..={n}")));
            }
            let bit = 1u128 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::domain(format!("element {e} repeated")));
            }
            bits |= bit;
        }
        Ok(Vertex {
            bits,
            n: n as u8,
            r: elements.len() as u8,
        })
    }

    /// Builds a vertex from a bit pattern (bit `i` set means element `i + 1`).
    pub fn from_bits(n: u32, bits: u128) -> Result<Vertex> {
        if n == 0 || n > MAX_N {
            return Err(Error::domain(format!("n = {n} must lie in 1..={MAX_N}")));
        }
        if n < 128 && bits >> n != 0 {
            return Err(Error::domain(format!("bit pattern {bits:#x} exceeds n = {n}")));
        }
        Ok(Vertex {
            bits,
            n: n as u8,
            r: bits.count_ones() as u8,
        })
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn n(&self) -> u32 {
        // n = 128 is stored as 128u8, fine.
        self.n as u32
    }

    pub fn r(&self) -> u32 {
        self.r as u32
    }

    /// Sorted 1-based elements of the support.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        let mut b = self.bits;
        while b != 0 {
            out.push(b.trailing_zeros() + 1);
            b &= b - 1;
        }
        out
    }

    /// `|supp(self) ∩ supp(other)|` without a width check.
    #[inline]
    pub(crate) fn meet(&self, other: &Vertex) -> u32 {
        (self.bits & other.bits).count_ones()
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

/// Position of `v` in the colex order of all `r`-subsets of `{1, ..., n}`.
pub fn rank(v: &Vertex) -> u128 {
    let mut b = v.bits;
    let mut acc = 0u128;
    let mut i = 1u32;
    while b != 0 {
        let c = b.trailing_zeros();
        acc += binom(c, i);
        b &= b - 1;
        i += 1;
    }
    acc
}

/// Inverse of [`rank`].
pub fn unrank(k: u128, p: &GraphParams) -> Result<Vertex> {
    let total = p.vertex_count();
    if k >= total {
        return Err(Error::domain(format!(
            "rank {k} out of range 0..{total} for {p}"
        )));
    }
    let mut rest = k;
    let mut bits = 0u128;
    let mut c = p.n();
    for i in (1..=p.r()).rev() {
        c -= 1;
        while binom(c, i) > rest {
            c -= 1;
        }
        bits |= 1u128 << c;
        rest -= binom(c, i);
    }
    Ok(Vertex {
        bits,
        n: p.n() as u8,
        r: p.r() as u8,
    })
}

/// `|supp(u) ∩ supp(v)|`.
pub fn intersection_size(u: &Vertex, v: &Vertex) -> Result<u32> {
    if u.n != v.n {
        return Err(Error::domain(format!(
            "vertices over different ground sets (n = {} and n = {})",
            u.n(),
            v.n()
        )));
    }
    Ok(u.meet(v))
}
