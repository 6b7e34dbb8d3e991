//! Label-level combinatorics on independent sets of the cycle `C_n`.
//!
//! Every vertex of the complexes built in this crate is labelled by a
//! [`LabelSet`]: a `k`-subset of `[n] = {1, ..., n}` containing no two
//! cyclically consecutive elements. The ambient `n` is never stored; it is
//! passed to each operation, so a member of `V(n-1, k)` is literally the same
//! value as the corresponding member of `V(n, k)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing sequence of positive integers.
///
/// The derived `Ord` is the lexicographic order on the increasing element
/// sequence, which is the total order used throughout the construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(Vec<u32>);

impl LabelSet {
    /// Builds a set from arbitrary elements; duplicates are dropped.
    pub fn new<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        let mut v: Vec<u32> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LabelSet(v)
    }

    pub fn empty() -> Self {
        LabelSet(Vec::new())
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn with(&self, x: u32) -> LabelSet {
        LabelSet::new(self.0.iter().copied().chain(std::iter::once(x)))
    }

    pub fn without(&self, x: u32) -> LabelSet {
        LabelSet(self.0.iter().copied().filter(|&y| y != x).collect())
    }

    /// Adds `delta` to every element. Fails if an element would leave `[1, ∞)`.
    pub fn shifted(&self, delta: i64) -> Result<LabelSet> {
        self.0
            .iter()
            .map(|&x| {
                let y = x as i64 + delta;
                if y < 1 {
                    Err(Error::Parameter(format!("cannot shift {self} by {delta}")))
                } else {
                    Ok(y as u32)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(LabelSet)
    }

    /// True iff every element lies in `[n]` and no two are adjacent in `C_n`.
    pub fn is_independent_in_cycle(&self, n: u32) -> bool {
        if self.0.iter().any(|&x| x == 0 || x > n) {
            return false;
        }
        if self.0.windows(2).any(|w| w[1] == w[0] + 1) {
            return false;
        }
        // 1 and n are adjacent in C_n (for n >= 3; C_2 is a single edge too).
        !(n >= 2 && self.contains(1) && self.contains(n) && self.0.len() >= 2)
    }

    /// Membership in `V(n, k)` with `k = self.len()`.
    pub fn is_member(&self, n: u32) -> bool {
        !self.0.is_empty() && self.is_independent_in_cycle(n)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&[u32]> for LabelSet {
    fn from(v: &[u32]) -> Self {
        LabelSet::new(v.iter().copied())
    }
}

impl<const N: usize> From<[u32; N]> for LabelSet {
    fn from(v: [u32; N]) -> Self {
        LabelSet::new(v)
    }
}

/// Addition on `[n]` with wrap-around: `((a-1) + (b-1)) mod n + 1`.
pub fn wrap_add(a: u32, b: u32, n: u32) -> u32 {
    ((a - 1 + b - 1) % n) + 1
}

fn check_nk(n: u32, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if n < 2 * k {
        return Err(Error::Parameter(format!("need n >= 2k, got n={n}, k={k}")));
    }
    Ok(())
}

/// All independent `k`-subsets of `C_n` in lexicographic order.
pub fn enumerate_vertex_sets(n: u32, k: u32) -> Result<Vec<LabelSet>> {
    check_nk(n, k)?;
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(k as usize);
    extend_independent(n, k as usize, 1, &mut stack, &mut out);
    Ok(out)
}

fn extend_independent(n: u32, k: usize, from: u32, stack: &mut Vec<u32>, out: &mut Vec<LabelSet>) {
    if stack.len() == k {
        out.push(LabelSet(stack.clone()));
        return;
    }
    let remaining = (k - stack.len()) as u32;
    // Each further element needs a gap of two.
    let mut x = from;
    while x + 2 * (remaining - 1) <= n {
        if !(x == n && stack.first() == Some(&1)) {
            stack.push(x);
            extend_independent(n, k, x + 2, stack, out);
            stack.pop();
        }
        x += 1;
    }
}

/// `A \ {1}` if `1 ∈ A`, otherwise `A \ {max A}`.
pub fn core(a: &LabelSet) -> Result<LabelSet> {
    match a.0.first() {
        None => Err(Error::Parameter("core of the empty set".into())),
        Some(1) => Ok(LabelSet(a.0[1..].to_vec())),
        Some(_) => Ok(LabelSet(a.0[..a.0.len() - 1].to_vec())),
    }
}

/// The extremal set `Λ_{n,i}`, built from the two ends of `[n]`.
pub fn lambda_set(n: u32, i: u32) -> Result<LabelSet> {
    if 2 * i > n {
        return Err(Error::Parameter(format!("Λ_{{{n},{i}}} needs i <= n/2")));
    }
    if i == 0 {
        return Ok(LabelSet::empty());
    }
    let mut v = Vec::with_capacity(i as usize);
    let low_start = if i % 2 == 1 { 2 } else { 1 };
    let mut x = low_start;
    while x < i {
        v.push(x);
        x += 2;
    }
    let top = if i % 2 == 1 { n } else { n - 1 };
    let mut y = n - i + 1;
    while y <= top {
        v.push(y);
        y += 2;
    }
    Ok(LabelSet::new(v))
}

/// Largest `i` with `Λ_{n,i} ⊆ A`, searched over `0..=min(k, n/2)`.
pub fn level(n: u32, a: &LabelSet) -> Result<u32> {
    if !a.is_member(n) {
        return Err(Error::Parameter(format!("{a} is not in V({n},{})", a.len())));
    }
    let cap = (a.len() as u32).min(n / 2);
    let mut best = 0;
    for i in 1..=cap {
        if lambda_set(n, i)?.is_subset(a) {
            best = i;
        }
    }
    Ok(best)
}

/// The `n`-clone `core B ∪ {n}` of `B ∈ V(n-1, k)`.
pub fn clone_label(n: u32, b: &LabelSet) -> Result<LabelSet> {
    if n < 2 || !b.is_member(n - 1) {
        return Err(Error::Parameter(format!("{b} is not in V({},{})", n.saturating_sub(1), b.len())));
    }
    Ok(core(b)?.with(n))
}

/// `f(X) = core X - 1`.
pub fn f_map(x: &LabelSet) -> Result<LabelSet> {
    let c = core(x)?;
    c.shifted(-1)
        .map_err(|_| Error::Parameter(format!("core of {x} contains 1")))
}

/// `g_n(Y)`: `(Y+1) ∪ {1}` if `n-2 ∈ Y`, else `(Y+1) ∪ {n}`.
pub fn g_map(n: u32, y: &LabelSet) -> Result<LabelSet> {
    if n < 3 || !(y.is_empty() || y.is_member(n - 2)) {
        return Err(Error::Parameter(format!("{y} is not in V({},{})", n.saturating_sub(2), y.len())));
    }
    let up = y.shifted(1)?;
    Ok(if y.contains(n - 2) { up.with(1) } else { up.with(n) })
}

/// Singular means `A ∈ V(2k, k)`: one of the two perfect alternating sets.
pub fn is_singular(a: &LabelSet, k: u32) -> bool {
    a.len() == k as usize && a.is_member(2 * k)
}

/// `I_j = {j, j+2, ..., j+2k-2}` with arithmetic in `[2k+1]`.
pub fn base_independent_set(k: u32, j: u32) -> Result<LabelSet> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let m = 2 * k + 1;
    if j == 0 || j > m {
        return Err(Error::Parameter(format!("j={j} outside [{m}]")));
    }
    Ok(LabelSet::new((0..k).map(|t| wrap_add(j, 2 * t + 1, m))))
}

pub fn lex_compare(a: &LabelSet, b: &LabelSet) -> Ordering {
    a.cmp(b)
}

/// `V⁺(n, k)`: members of positive `n`-level, in lex order.
pub fn positive_level_sets(n: u32, k: u32) -> Result<Vec<LabelSet>> {
    Ok(enumerate_vertex_sets(n, k)?
        .into_iter()
        .filter(|a| !a.is_member(n - 1))
        .collect())
}

/// `V₀(n, k) = V(n-1, k)`, in lex order.
pub fn level_zero_sets(n: u32, k: u32) -> Result<Vec<LabelSet>> {
    Ok(enumerate_vertex_sets(n, k)?
        .into_iter()
        .filter(|a| a.is_member(n - 1))
        .collect())
}
