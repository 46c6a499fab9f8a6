//! Integer partitions and Young diagram arithmetic.
//!
//! A [`Partition`] is a weakly decreasing sequence of positive integers. The
//! same type is used for a diagram `d` (row lengths) and for its dual `a`
//! (column heights); no trailing zeros are ever stored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Glyph used by [`Partition::render`].
pub const BOX: char = '\u{2588}';

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Parse("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Parse(format!(
                "parts must be positive, got {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(join(&parts)));
        }
        Ok(Partition(parts))
    }

    /// The partition `[1, ..., 1]` of `n`, i.e. the zero orbit.
    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "partition of zero");
        Partition(vec![1; n])
    }

    /// Builds the partition whose column heights are `heights`.
    ///
    /// Zero heights are allowed anywhere; the heights need not be sorted,
    /// but the result only makes sense as a diagram when they are.
    pub fn from_column_heights(heights: &[usize]) -> Result<Self> {
        let rows = heights.iter().copied().max().unwrap_or(0);
        let parts = (1..=rows)
            .map(|k| heights.iter().filter(|&&h| h >= k).count())
            .collect();
        Partition::new(parts)
    }

    /// Builds the partition with `counts[j - 1]` rows of length `j`.
    pub fn from_row_counts(counts: &[usize]) -> Result<Self> {
        let mut parts = Vec::new();
        for (j, &c) in counts.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(j + 1, c));
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of row `i` (0-based), zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// True for `[1, ..., 1]`.
    pub fn is_single_column(&self) -> bool {
        self.0[0] == 1
    }

    /// Transposed diagram: `a_k = #{i : d_i >= k}`.
    pub fn dual(&self) -> Partition {
        let cols = self.0[0];
        Partition(
            (1..=cols)
                .map(|k| self.0.iter().take_while(|&&p| p >= k).count())
                .collect(),
        )
    }

    /// Column heights padded with zeros to length `len`.
    pub fn padded_dual(&self, len: usize) -> Vec<usize> {
        let mut a = self.dual().0;
        assert!(a.len() <= len, "cannot pad {} columns to {len}", a.len());
        a.resize(len, 0);
        a
    }

    /// Dimension of the nilpotent orbit `O_d`: `N^2 - sum a_k^2`.
    pub fn orbit_dim(&self) -> u64 {
        let n = self.size() as u64;
        let s: u64 = self.dual().0.iter().map(|&a| (a * a) as u64).sum();
        n * n - s
    }

    /// Number of distinct rearrangements of the dual partition, which counts
    /// the crepant resolutions of the orbit closure.
    pub fn count_resolutions(&self) -> BigUint {
        multiset_permutations(self.dual().parts())
    }

    pub fn render(&self) -> String {
        self.render_with(BOX)
    }

    /// One line of `glyph` per row, newline separated, no trailing newline.
    pub fn render_with(&self, glyph: char) -> String {
        self.0
            .iter()
            .map(|&p| std::iter::repeat_n(glyph, p).collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// A random partition of `n`: random parts drawn from what remains, sorted.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
        assert!(n > 0);
        let mut rest = n;
        let mut parts = Vec::new();
        while rest > 0 {
            let p = rng.gen_range(1..=rest);
            parts.push(p);
            rest -= p;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }
}

/// Dominance order `dp <= d`: every prefix sum of `dp` is at most the
/// corresponding prefix sum of `d`. This is the closure order of nilpotent
/// orbits, `O_dp` lies in the closure of `O_d`.
pub fn dominates(dp: &Partition, d: &Partition) -> Result<bool> {
    check_same_size(dp, d)?;
    let len = dp.len().min(d.len());
    let mut sp = 0;
    let mut s = 0;
    for k in 0..len {
        sp += dp.0[k];
        s += d.0[k];
        if sp > s {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn check_same_size(dp: &Partition, d: &Partition) -> Result<()> {
    let (l, r) = (dp.size(), d.size());
    if l != r {
        return Err(Error::SizeMismatch {
            left: dp.clone(),
            left_size: l,
            right: d.clone(),
            right_size: r,
        });
    }
    Ok(())
}

/// `m! / prod(mult_j!)` for the multiplicities of equal entries, computed as a
/// product of binomial coefficients so intermediate values stay exact.
pub fn multiset_permutations(items: &[usize]) -> BigUint {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut result = BigUint::one();
    let mut placed = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        for t in 1..=j as u64 {
            // C(placed + t, t) built incrementally
            result *= placed + t;
            result /= t;
        }
        placed += j as u64;
        i += j;
    }
    result
}

fn join(parts: &[usize]) -> String {
    parts
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}
