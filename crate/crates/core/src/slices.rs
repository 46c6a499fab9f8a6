//! Slodowy slices `S_{d',d}`: validation, quiver dimension vectors, and the
//! product decomposition into slices in smaller `sl`'s.
//!
//! Two independent routes produce the decomposition. [`decompose_quiver`]
//! splits the dimension vector `v` at its zero entries and rebuilds each
//! factor's partitions from the block data; [`decompose_young`] cuts the
//! Young diagrams at columns where both diagrams hold equally many boxes and
//! strips the common leading rows. The two must agree exactly.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::{check_same_size, dominates, Partition};

/// A validated pair `(d', d)` with `O_{d'}` contained in the closure of `O_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlicePair {
    d: Partition,
    dp: Partition,
    n: usize,
    a: Vec<usize>,
    ap: Vec<usize>,
}

impl SlicePair {
    /// Ambient partition `d`.
    pub fn d(&self) -> &Partition {
        &self.d
    }

    /// Base point partition `d'`.
    pub fn dp(&self) -> &Partition {
        &self.dp
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of columns of `d`.
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Column heights of `d`.
    pub fn a(&self) -> &[usize] {
        &self.a
    }

    /// Column heights of `d'`, zero padded to length `m`.
    pub fn ap(&self) -> &[usize] {
        &self.ap
    }

    /// The slice is a single point.
    pub fn is_point(&self) -> bool {
        self.d == self.dp
    }
}

pub fn make_slice_pair(dp: &Partition, d: &Partition) -> Result<SlicePair> {
    check_same_size(dp, d)?;
    if !dominates(dp, d)? {
        return Err(Error::NotNested {
            dp: dp.clone(),
            d: d.clone(),
        });
    }
    let a = d.dual().parts().to_vec();
    // d' <= d forces d'_1 <= d_1, so the padding always fits.
    let ap = dp.padded_dual(a.len());
    Ok(SlicePair {
        d: d.clone(),
        dp: dp.clone(),
        n: d.size(),
        a,
        ap,
    })
}

/// Vertex and framing dimensions of a type A quiver with `v.len()` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub struct DimVectors {
    pub v: Vec<usize>,
    pub w: Vec<usize>,
}

impl DimVectors {
    pub fn vertices(&self) -> usize {
        self.v.len()
    }
}

/// `v_i = sum_{k<=i} (a'_k - a_k)` and `w_i = #{k : d'_k = i}` for
/// `i = 1..m-1`.
pub fn dimension_vectors(sp: &SlicePair) -> Result<DimVectors> {
    if sp.d.is_single_column() {
        return Err(Error::DegenerateAmbient(sp.d.clone()));
    }
    let m = sp.m();
    let mut v = Vec::with_capacity(m - 1);
    let mut acc: i64 = 0;
    for i in 0..m - 1 {
        acc += sp.ap[i] as i64 - sp.a[i] as i64;
        if acc < 0 {
            return Err(Error::InternalInconsistency(format!(
                "negative v_{} for nested pair ({}, {})",
                i + 1,
                sp.dp,
                sp.d
            )));
        }
        v.push(acc as usize);
    }
    let w = (1..m)
        .map(|i| sp.dp.parts().iter().filter(|&&p| p == i).count())
        .collect();
    Ok(DimVectors { v, w })
}

/// Dimension vectors of the quiver realizing the whole orbit closure:
/// `v~_i = N - (a_1 + ... + a_i)`, `w~ = (N, 0, ..., 0)`.
pub fn tilde_vectors(d: &Partition) -> Result<DimVectors> {
    if d.is_single_column() {
        return Err(Error::DegenerateAmbient(d.clone()));
    }
    Ok(tilde_for_composition(d.dual().parts()))
}

/// Tilde dimension vectors for an arbitrary flag type (composition of `N`).
pub fn tilde_for_composition(flag_type: &[usize]) -> DimVectors {
    let n: usize = flag_type.iter().sum();
    let m = flag_type.len();
    let mut v = Vec::with_capacity(m.saturating_sub(1));
    let mut rest = n;
    for &c in &flag_type[..m.saturating_sub(1)] {
        rest -= c;
        v.push(rest);
    }
    let mut w = vec![0; v.len()];
    if let Some(first) = w.first_mut() {
        *first = n;
    }
    DimVectors { v, w }
}

/// One factor `S_{d'^i, d^i}` of the product decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SliceFactor {
    pub d: Partition,
    pub dp: Partition,
    pub n: usize,
    /// Quiver vertices of the original pair this factor came from (1-based).
    pub vertex_range: RangeInclusive<usize>,
}

impl SliceFactor {
    pub fn count(&self) -> BigUint {
        self.d.count_resolutions()
    }

    pub fn pair(&self) -> SlicePair {
        make_slice_pair(&self.dp, &self.d).expect("factor pairs are nested")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "dp": self.dp,
            "N": self.n,
            "count": biguint_json(&self.count()),
        })
    }
}

fn check_factor(f: &SliceFactor) -> Result<()> {
    let ok = f.d.size() == f.n
        && f.dp.size() == f.n
        && f.d != f.dp
        && !f.d.is_single_column()
        && dominates(&f.dp, &f.d)?;
    if !ok {
        return Err(Error::InternalInconsistency(format!(
            "reconstructed factor ({}, {}) is not a proper nested pair",
            f.dp, f.d
        )));
    }
    Ok(())
}

/// Maximal runs of consecutive nonzero entries of `v`, as 1-based vertex
/// ranges.
fn nonzero_blocks(v: &[usize]) -> Vec<RangeInclusive<usize>> {
    let mut blocks = Vec::new();
    let mut start = None;
    for (i, &x) in v.iter().enumerate() {
        match (x > 0, start) {
            (true, None) => start = Some(i + 1),
            (false, Some(s)) => {
                blocks.push(s..=i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        blocks.push(s..=v.len());
    }
    blocks
}

/// Rebuilds the factor attached to one block `(v^i, w^i)` with no zero
/// entries in `v^i`.
fn factor_from_block(
    v: &[usize],
    w: &[usize],
    range: RangeInclusive<usize>,
) -> Result<SliceFactor> {
    let n = v.len();
    let big_n: usize = w.iter().enumerate().map(|(k, &x)| (k + 1) * x).sum();
    let vt: Vec<usize> = (0..n)
        .map(|j| v[j] + ((j + 1)..n).map(|k| (k - j) * w[k]).sum::<usize>())
        .collect();

    let inconsistent = || {
        Error::InternalInconsistency(format!(
            "block v={v:?} w={w:?} does not give a column sequence"
        ))
    };
    let mut cols = Vec::with_capacity(n + 1);
    let mut prev = big_n;
    for &x in &vt {
        cols.push(prev.checked_sub(x).ok_or_else(inconsistent)?);
        prev = x;
    }
    cols.push(prev);
    while cols.last() == Some(&0) {
        cols.pop();
    }
    if cols.is_empty() || cols.windows(2).any(|c| c[0] < c[1]) || cols.contains(&0) {
        return Err(inconsistent());
    }
    let d = Partition::from_column_heights(&cols)?;
    let dp = Partition::from_row_counts(w)?;
    let f = SliceFactor {
        d,
        dp,
        n: big_n,
        vertex_range: range,
    };
    check_factor(&f)?;
    Ok(f)
}

/// Decomposition via the quiver dimension vectors.
pub fn decompose_quiver(sp: &SlicePair) -> Result<Vec<SliceFactor>> {
    if sp.d.is_single_column() {
        return Err(Error::DegenerateAmbient(sp.d.clone()));
    }
    if sp.is_point() {
        return Ok(Vec::new());
    }
    let dv = dimension_vectors(sp)?;
    nonzero_blocks(&dv.v)
        .into_iter()
        .map(|r| {
            let (s, e) = (*r.start() - 1, *r.end());
            factor_from_block(&dv.v[s..e], &dv.w[s..e], r)
        })
        .collect()
}

/// Result of stripping one column block of a Young diagram pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungBlock {
    /// Columns `p..=q` of the original diagrams (1-based).
    pub columns: RangeInclusive<usize>,
    pub d_block: Partition,
    pub dp_block: Partition,
    /// Number of leading rows shared by both blocks.
    pub common_rows: usize,
    /// Boxes removed from each diagram by stripping the common rows.
    pub removed_boxes: usize,
}

/// Column cut points `0 = c_0 < c_1 < ... < c_r = m` where the first `c`
/// columns of `d` and `d'` hold equally many boxes.
pub fn young_cuts(sp: &SlicePair) -> Vec<usize> {
    let mut cuts = vec![0];
    let (mut s, mut sp_) = (0, 0);
    for k in 0..sp.m() {
        s += sp.a[k];
        sp_ += sp.ap[k];
        if s == sp_ {
            cuts.push(k + 1);
        }
    }
    cuts
}

/// The finest column division with equal box counts, and how many leading
/// rows each block pair shares.
pub fn young_blocks(sp: &SlicePair) -> Vec<YoungBlock> {
    let cuts = young_cuts(sp);
    cuts.windows(2)
        .map(|c| {
            let (s, t) = (c[0], c[1]);
            let d_block =
                Partition::from_column_heights(&sp.a[s..t]).expect("columns of d are positive");
            let dp_block = Partition::from_column_heights(&sp.ap[s..t])
                .expect("a block with as many boxes as d's block is nonempty");
            let common_rows = (0..d_block.len().min(dp_block.len()))
                .take_while(|&j| d_block.row(j) == dp_block.row(j))
                .count();
            let removed_boxes = d_block.parts()[..common_rows].iter().sum();
            YoungBlock {
                columns: s + 1..=t,
                d_block,
                dp_block,
                common_rows,
                removed_boxes,
            }
        })
        .collect()
}

/// Decomposition via cutting and stripping Young diagrams.
pub fn decompose_young(sp: &SlicePair) -> Result<Vec<SliceFactor>> {
    if sp.d.is_single_column() {
        return Err(Error::DegenerateAmbient(sp.d.clone()));
    }
    let mut out = Vec::new();
    for b in young_blocks(sp) {
        let rest_d = &b.d_block.parts()[b.common_rows..];
        let rest_dp = &b.dp_block.parts()[b.common_rows..];
        if rest_d.is_empty() && rest_dp.is_empty() {
            continue;
        }
        if rest_d.is_empty() || rest_dp.is_empty() {
            return Err(Error::InternalInconsistency(format!(
                "block {:?} strips to unequal sizes",
                b.columns
            )));
        }
        let f = SliceFactor {
            d: Partition::new(rest_d.to_vec())?,
            dp: Partition::new(rest_dp.to_vec())?,
            n: rest_d.iter().sum(),
            vertex_range: *b.columns.start()..=*b.columns.end() - 1,
        };
        check_factor(&f)?;
        out.push(f);
    }
    Ok(out)
}

/// Which algorithm to run for [`decompose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Young,
    Quiver,
    Both,
}

/// A decomposition plus the counts reported alongside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<SliceFactor>,
    pub total_count: BigUint,
    pub slice_dim: u64,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors.iter().map(SliceFactor::to_json).collect::<Vec<_>>(),
            "total_count": biguint_json(&self.total_count),
            "slice_dim": self.slice_dim,
        })
    }
}

/// Runs the requested route(s). With [`Method::Both`] a disagreement is an
/// [`Error::InternalInconsistency`]. A single-column ambient partition gives
/// the empty decomposition of a point.
pub fn decompose(sp: &SlicePair, method: Method) -> Result<Decomposition> {
    let factors = if sp.d.is_single_column() {
        Vec::new()
    } else {
        match method {
            Method::Young => decompose_young(sp)?,
            Method::Quiver => decompose_quiver(sp)?,
            Method::Both => {
                let q = decompose_quiver(sp)?;
                let y = decompose_young(sp)?;
                if q != y {
                    return Err(Error::InternalInconsistency(format!(
                        "decompositions of ({}, {}) disagree: quiver {:?} vs young {:?}",
                        sp.dp, sp.d, q, y
                    )));
                }
                q
            }
        }
    };
    let total_count = factors.iter().map(SliceFactor::count).product();
    Ok(Decomposition {
        factors,
        total_count,
        slice_dim: slice_dim(sp),
    })
}

/// Number of crepant resolutions of the slice: the product of the factor
/// counts, 1 for a point.
pub fn count_slice_resolutions(sp: &SlicePair) -> Result<BigUint> {
    if sp.d.is_single_column() {
        return Ok(BigUint::one());
    }
    Ok(decompose_quiver(sp)?
        .iter()
        .map(SliceFactor::count)
        .product())
}

/// `dim O_d - dim O_{d'}`.
pub fn slice_dim(sp: &SlicePair) -> u64 {
    sp.d.orbit_dim() - sp.dp.orbit_dim()
}

/// All nested pairs `(d', d)` of partitions of `n`.
pub fn nested_pairs(n: usize) -> Vec<SlicePair> {
    let parts = Partition::all(n);
    let mut out = Vec::new();
    for d in &parts {
        for dp in &parts {
            if let Ok(sp) = make_slice_pair(dp, d) {
                out.push(sp);
            }
        }
    }
    out
}

/// Numbers as JSON numbers when they fit in `u64`, otherwise decimal strings.
pub fn biguint_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}
