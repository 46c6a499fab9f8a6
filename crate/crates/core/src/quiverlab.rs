//! Exact representations of the doubled, framed type A quiver.
//!
//! A representation with `n` vertices carries
//! `A_i : V_i -> V_{i+1}`, `B_i : V_{i+1} -> V_i` for `i = 1..n-1` and
//! `Gamma_j : W_j -> V_j`, `Delta_j : V_j -> W_j` for `j = 1..n`.
//! Vectors are `v`/`w`, vertices are 1-based in the API and 0-based in the
//! storage vectors.
//!
//! The "tilde" shape `w = (N, 0, ..., 0)` realizes `T^*F` of a partial flag
//! variety; there `A_0 := Gamma_1` and `B_0 := Delta_1`.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, Matrix};
use crate::partitions::Partition;
use crate::slices::{tilde_for_composition, DimVectors};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RepRepr", into = "RepRepr")]
pub struct QuiverRep {
    dims: DimVectors,
    a: Vec<Matrix>,
    b: Vec<Matrix>,
    gamma: Vec<Matrix>,
    delta: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct RepRepr {
    v: Vec<usize>,
    w: Vec<usize>,
    #[serde(rename = "A")]
    a: Vec<Matrix>,
    #[serde(rename = "B")]
    b: Vec<Matrix>,
    #[serde(rename = "Gamma")]
    gamma: Vec<Matrix>,
    #[serde(rename = "Delta")]
    delta: Vec<Matrix>,
}

impl TryFrom<RepRepr> for QuiverRep {
    type Error = Error;

    fn try_from(r: RepRepr) -> Result<Self> {
        QuiverRep::new(DimVectors { v: r.v, w: r.w }, r.a, r.b, r.gamma, r.delta)
    }
}

impl From<QuiverRep> for RepRepr {
    fn from(r: QuiverRep) -> Self {
        RepRepr {
            v: r.dims.v,
            w: r.dims.w,
            a: r.a,
            b: r.b,
            gamma: r.gamma,
            delta: r.delta,
        }
    }
}

fn check_dims(dims: &DimVectors) -> Result<usize> {
    let n = dims.v.len();
    if n == 0 || dims.w.len() != n {
        return Err(Error::Shape(format!(
            "need v and w of equal positive length, got {} and {}",
            n,
            dims.w.len()
        )));
    }
    Ok(n)
}

fn expect_shape(name: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Shape(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl QuiverRep {
    pub fn new(
        dims: DimVectors,
        a: Vec<Matrix>,
        b: Vec<Matrix>,
        gamma: Vec<Matrix>,
        delta: Vec<Matrix>,
    ) -> Result<Self> {
        let n = check_dims(&dims)?;
        if a.len() != n - 1 || b.len() != n - 1 || gamma.len() != n || delta.len() != n {
            return Err(Error::Shape(format!(
                "expected {} A/B maps and {n} Gamma/Delta maps",
                n - 1
            )));
        }
        let (v, w) = (&dims.v, &dims.w);
        for i in 0..n - 1 {
            expect_shape(&format!("A_{}", i + 1), &a[i], v[i + 1], v[i])?;
            expect_shape(&format!("B_{}", i + 1), &b[i], v[i], v[i + 1])?;
        }
        for j in 0..n {
            expect_shape(&format!("Gamma_{}", j + 1), &gamma[j], v[j], w[j])?;
            expect_shape(&format!("Delta_{}", j + 1), &delta[j], w[j], v[j])?;
        }
        Ok(QuiverRep {
            dims,
            a,
            b,
            gamma,
            delta,
        })
    }

    /// All maps zero. Panics on an empty or ragged dimension vector.
    pub fn zero(dims: DimVectors) -> Self {
        let (v, w) = (&dims.v, &dims.w);
        let n = v.len();
        let a = (0..n - 1).map(|i| Matrix::zeros(v[i + 1], v[i])).collect();
        let b = (0..n - 1).map(|i| Matrix::zeros(v[i], v[i + 1])).collect();
        let gamma = (0..n).map(|j| Matrix::zeros(v[j], w[j])).collect();
        let delta = (0..n).map(|j| Matrix::zeros(w[j], v[j])).collect();
        QuiverRep::new(dims, a, b, gamma, delta).expect("zero maps have the right shapes")
    }

    /// Tilde-shaped representation from `A_0..A_{n-1}` and `B_0..B_{n-1}`.
    pub fn tilde(n_big: usize, a_chain: Vec<Matrix>, b_chain: Vec<Matrix>) -> Result<Self> {
        let n = a_chain.len();
        if n == 0 || b_chain.len() != n {
            return Err(Error::Shape(
                "tilde chains need equal positive length".into(),
            ));
        }
        let v: Vec<usize> = a_chain.iter().map(Matrix::rows).collect();
        let mut w = vec![0; n];
        w[0] = n_big;
        let mut a_it = a_chain.into_iter();
        let mut b_it = b_chain.into_iter();
        let gamma0 = a_it.next().unwrap();
        let delta0 = b_it.next().unwrap();
        let mut gamma = vec![gamma0];
        let mut delta = vec![delta0];
        for &vj in &v[1..] {
            gamma.push(Matrix::zeros(vj, 0));
            delta.push(Matrix::zeros(0, vj));
        }
        QuiverRep::new(
            DimVectors { v, w },
            a_it.collect(),
            b_it.collect(),
            gamma,
            delta,
        )
    }

    pub fn dims(&self) -> &DimVectors {
        &self.dims
    }

    pub fn v(&self) -> &[usize] {
        &self.dims.v
    }

    pub fn w(&self) -> &[usize] {
        &self.dims.w
    }

    pub fn vertices(&self) -> usize {
        self.dims.v.len()
    }

    /// `A_i` for `i = 1..n-1`.
    pub fn a(&self, i: usize) -> &Matrix {
        &self.a[i - 1]
    }

    /// `B_i` for `i = 1..n-1`.
    pub fn b(&self, i: usize) -> &Matrix {
        &self.b[i - 1]
    }

    pub fn gamma(&self, j: usize) -> &Matrix {
        &self.gamma[j - 1]
    }

    pub fn delta(&self, j: usize) -> &Matrix {
        &self.delta[j - 1]
    }

    /// `w = (N, 0, ..., 0)` with `N > 0`.
    pub fn is_tilde(&self) -> bool {
        self.dims.w[0] > 0 && self.dims.w[1..].iter().all(|&x| x == 0)
    }

    fn require_tilde(&self) -> Result<()> {
        if !self.is_tilde() {
            return Err(Error::Shape(format!(
                "expected framing (N, 0, ..., 0), got {:?}",
                self.dims.w
            )));
        }
        Ok(())
    }

    /// Framing dimension `N` of a tilde representation.
    pub fn framing(&self) -> usize {
        self.dims.w[0]
    }

    /// `A_i` in the tilde convention, `i = 0..n-1`, with `A_0 = Gamma_1`.
    pub fn a_chain(&self, i: usize) -> &Matrix {
        if i == 0 {
            &self.gamma[0]
        } else {
            &self.a[i - 1]
        }
    }

    /// `B_i` in the tilde convention, `i = 0..n-1`, with `B_0 = Delta_1`.
    pub fn b_chain(&self, i: usize) -> &Matrix {
        if i == 0 {
            &self.delta[0]
        } else {
            &self.b[i - 1]
        }
    }

    /// The point `x = B_0 A_0` of the orbit closure.
    pub fn projection(&self) -> Matrix {
        self.b_chain(0) * self.a_chain(0)
    }

    /// Action of `g = (g_1, ..., g_n)`, `g_i` invertible of size `v_i`.
    pub fn act(&self, g: &[Matrix]) -> Result<QuiverRep> {
        let n = self.vertices();
        if g.len() != n {
            return Err(Error::Shape(format!(
                "need {n} group elements, got {}",
                g.len()
            )));
        }
        let inv = g
            .iter()
            .enumerate()
            .map(|(i, gi)| {
                expect_shape(&format!("g_{}", i + 1), gi, self.dims.v[i], self.dims.v[i])?;
                gi.inverse()
                    .ok_or_else(|| Error::Shape(format!("g_{} is singular", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let a = (0..n - 1)
            .map(|i| &(&g[i + 1] * &self.a[i]) * &inv[i])
            .collect();
        let b = (0..n - 1)
            .map(|i| &(&g[i] * &self.b[i]) * &inv[i + 1])
            .collect();
        let gamma = (0..n).map(|j| &g[j] * &self.gamma[j]).collect();
        let delta = (0..n).map(|j| &self.delta[j] * &inv[j]).collect();
        QuiverRep::new(self.dims.clone(), a, b, gamma, delta)
    }
}

/// `mu_j = Gamma_j Delta_j + A_{j-1} B_{j-1} - B_j A_j`, end terms dropped.
pub fn moment_map(r: &QuiverRep) -> Vec<Matrix> {
    let n = r.vertices();
    (0..n)
        .map(|j| {
            let mut m = &r.gamma[j] * &r.delta[j];
            if j > 0 {
                m = &m + &(&r.a[j - 1] * &r.b[j - 1]);
            }
            if j + 1 < n {
                m = &m - &(&r.b[j] * &r.a[j]);
            }
            m
        })
        .collect()
}

fn require_on_fiber(r: &QuiverRep) -> Result<()> {
    match moment_map(r).iter().position(|m| !m.is_zero()) {
        Some(j) => Err(Error::NotOnFiber { vertex: j + 1 }),
        None => Ok(()),
    }
}

pub fn is_on_fiber(r: &QuiverRep) -> bool {
    require_on_fiber(r).is_ok()
}

/// Smallest family `S_j` containing `Im Gamma_j` and closed under all `A_i`
/// and `B_i`, as column bases.
pub fn stable_closure(r: &QuiverRep) -> Vec<Matrix> {
    let n = r.vertices();
    let mut s: Vec<Matrix> = (0..n).map(|j| r.gamma[j].column_space()).collect();
    loop {
        let mut grew = false;
        for i in 0..n - 1 {
            let forward = &r.a[i] * &s[i];
            if !s[i + 1].span_contains(&forward) {
                s[i + 1] = Matrix::hstack(r.dims.v[i + 1], &[&s[i + 1], &forward]).column_space();
                grew = true;
            }
            let back = &r.b[i] * &s[i + 1];
            if !s[i].span_contains(&back) {
                s[i] = Matrix::hstack(r.dims.v[i], &[&s[i], &back]).column_space();
                grew = true;
            }
        }
        if !grew {
            return s;
        }
    }
}

/// Stability for the all-ones character: no proper subspace family contains
/// the images of the `Gamma_j` and is closed under the `A_i`, `B_i`.
pub fn is_one_stable(r: &QuiverRep) -> Result<bool> {
    require_on_fiber(r)?;
    Ok(stable_closure(r)
        .iter()
        .zip(&r.dims.v)
        .all(|(s, &v)| s.cols() == v))
}

/// Every `A_i`, including `A_0 = Gamma_1`, has full row rank.
pub fn all_a_surjective(r: &QuiverRep) -> Result<bool> {
    r.require_tilde()?;
    Ok((0..r.vertices()).all(|i| {
        let a = r.a_chain(i);
        a.rank() == a.rows()
    }))
}

/// A nilpotent matrix together with a partial flag it is compatible with:
/// `x(U_{i+1}) ⊆ U_i` for `0 = U_0 ⊂ U_1 ⊂ ... ⊂ U_m = C^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagPoint {
    x: Matrix,
    /// Column bases of `U_1, ..., U_{m-1}`.
    flag: Vec<Matrix>,
}

impl FlagPoint {
    pub fn new(x: Matrix, flag: Vec<Matrix>) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::Shape(format!("x is {}x{}", x.rows(), x.cols())));
        }
        let n = x.rows();
        let mut prev = Matrix::zeros(n, 0);
        for (i, u) in flag.iter().enumerate() {
            if u.rows() != n || u.rank() != u.cols() {
                return Err(Error::Shape(format!(
                    "U_{} must be given by {} independent columns of length {n}",
                    i + 1,
                    u.cols()
                )));
            }
            if u.cols() <= prev.cols() || !u.span_contains(&prev) {
                return Err(Error::Shape(format!(
                    "U_{} does not strictly contain U_{}",
                    i + 1,
                    i
                )));
            }
            prev = u.clone();
        }
        if prev.cols() >= n && !flag.is_empty() {
            return Err(Error::Shape("U_{m-1} must be a proper subspace".into()));
        }
        let fp = FlagPoint { x, flag };
        for i in 0..fp.steps() {
            let image = &fp.x * &fp.subspace(i + 1);
            if !fp.subspace(i).span_contains(&image) {
                return Err(Error::IncidenceViolation(format!(
                    "x(U_{}) is not contained in U_{}",
                    i + 1,
                    i
                )));
            }
        }
        Ok(fp)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn size(&self) -> usize {
        self.x.rows()
    }

    /// Number of steps `m`.
    pub fn steps(&self) -> usize {
        self.flag.len() + 1
    }

    /// Basis of `U_i` for `i = 0..=m`.
    pub fn subspace(&self, i: usize) -> Matrix {
        let n = self.size();
        if i == 0 {
            Matrix::zeros(n, 0)
        } else if i == self.steps() {
            Matrix::identity(n)
        } else {
            self.flag[i - 1].clone()
        }
    }

    /// `dim U_i / U_{i-1}` for `i = 1..=m`.
    pub fn flag_type(&self) -> Vec<usize> {
        (1..=self.steps())
            .map(|i| self.subspace(i).cols() - self.subspace(i - 1).cols())
            .collect()
    }

    /// Same matrix and same subspaces.
    pub fn same_point(&self, other: &FlagPoint) -> bool {
        self.x == other.x
            && self.steps() == other.steps()
            && (1..self.steps()).all(|i| self.subspace(i).same_span(&other.subspace(i)))
    }
}

/// The point `(B_0 A_0, Ker A_0 ⊂ Ker A_1 A_0 ⊂ ...)` of `T^*F` attached to a
/// stable tilde representation.
pub fn theta(r: &QuiverRep) -> Result<FlagPoint> {
    r.require_tilde()?;
    require_on_fiber(r)?;
    if !all_a_surjective(r)? {
        return Err(Error::NotStable("some A_i is not surjective".into()));
    }
    let n_big = r.framing();
    let x = r.projection();
    let mut chain = Matrix::identity(n_big);
    let mut flag = Vec::with_capacity(r.vertices());
    for i in 0..r.vertices() {
        chain = r.a_chain(i) * &chain;
        let u = chain.kernel();
        if u.cols() != n_big - r.dims.v[i] {
            return Err(Error::InternalInconsistency(format!(
                "dim U_{} = {}, expected {}",
                i + 1,
                u.cols(),
                n_big - r.dims.v[i]
            )));
        }
        flag.push(u);
    }
    FlagPoint::new(x, flag).map_err(|e| Error::InternalInconsistency(format!("theta: {e}")))
}

/// Inverse of [`theta`] up to the group action: `V_i = C^N / U_i` realized on
/// the standard-basis complement of `U_i`, `A_{i-1}` the quotient maps and
/// `B_i` induced by `x`.
pub fn from_flag(x: &Matrix, flag: &[Matrix]) -> Result<QuiverRep> {
    let fp = FlagPoint::new(x.clone(), flag.to_vec())?;
    Ok(rep_from_flag_point(&fp))
}

pub fn rep_from_flag_point(fp: &FlagPoint) -> QuiverRep {
    let n_big = fp.size();
    let m = fp.steps();
    // lift_i: coordinates on V_i -> C^N, proj_i: C^N -> V_i
    let mut lifts = vec![Matrix::identity(n_big)];
    let mut projs = vec![Matrix::identity(n_big)];
    for i in 1..m {
        let u = fp.subspace(i);
        let c = u.complement();
        let basis = Matrix::hstack(n_big, &[&u, &c]);
        let inv = basis
            .inverse()
            .expect("subspace plus complement is a basis");
        projs.push(inv.block(u.cols(), 0, c.cols(), n_big));
        lifts.push(c);
    }
    let a_chain = (1..m).map(|i| &projs[i] * &lifts[i - 1]).collect();
    let b_chain = (1..m)
        .map(|i| &(&projs[i - 1] * fp.x()) * &lifts[i])
        .collect();
    QuiverRep::tilde(n_big, a_chain, b_chain).expect("flag data has tilde shape")
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn nilpotent_partition(x: &Matrix) -> Result<Partition> {
    if !x.is_square() || x.rows() == 0 {
        return Err(Error::Shape(
            "nilpotent_partition needs a nonempty square matrix".into(),
        ));
    }
    let n = x.rows();
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        power = &power * x;
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::NotNilpotent { power: n });
    }
    let cols: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Partition::from_column_heights(&cols)
}

/// The blocks around vertex `i` of a tilde representation, with `V_0 = C^N`
/// and `V_m = 0`.
struct Neighbourhood {
    a_prev: Matrix,
    b_prev: Matrix,
    a_next: Matrix,
    b_next: Matrix,
}

fn neighbourhood(r: &QuiverRep, i: usize) -> Neighbourhood {
    let n = r.vertices();
    let vi = r.dims.v[i - 1];
    let (a_next, b_next) = if i < n {
        (r.a_chain(i).clone(), r.b_chain(i).clone())
    } else {
        (Matrix::zeros(0, vi), Matrix::zeros(vi, 0))
    };
    Neighbourhood {
        a_prev: r.a_chain(i - 1).clone(),
        b_prev: r.b_chain(i - 1).clone(),
        a_next,
        b_next,
    }
}

/// Dimension vector `s_i(v)`: only entry `i` changes, to
/// `v_{i-1} + v_{i+1} - v_i` with `v_0 = N`, `v_m = 0`.
pub fn reflected_dims(dims: &DimVectors, i: usize) -> Option<DimVectors> {
    let n = dims.v.len();
    if i == 0 || i > n {
        return None;
    }
    let prev = if i == 1 { dims.w[0] } else { dims.v[i - 2] };
    let next = if i < n { dims.v[i] } else { 0 };
    let new = (prev + next).checked_sub(dims.v[i - 1])?;
    let mut v = dims.v.clone();
    v[i - 1] = new;
    Some(DimVectors {
        v,
        w: dims.w.clone(),
    })
}

/// Which exact sequence a reflection builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectionSide {
    /// `A_{i-1} + B_i` is surjective; the new space is its kernel.
    Kernel,
    /// `B_{i-1} ⊕ -A_i` is injective; the new space is its cokernel.
    Cokernel,
}

/// Reflection at vertex `i` of a tilde representation on the zero fiber,
/// taking the kernel of `A_{i-1} + B_i`.
///
/// With `alpha = [A_{i-1}  B_i]` and `delta = [B_{i-1}; -A_i]`, the new maps
/// satisfy `beta * gamma = delta * alpha` where
/// `beta = [B'_{i-1}; -A'_i]` and `gamma = [A'_{i-1}  B'_i]`, and
/// `0 -> V'_i -> V_{i-1} ⊕ V_{i+1} -> V_i -> 0` is exact.
/// All other maps are copied, so `B_0 A_0` is unchanged.
pub fn reflect(r: &QuiverRep, i: usize) -> Result<QuiverRep> {
    reflect_via(r, i, ReflectionSide::Kernel)
}

/// Inverse of [`reflect`] up to the group action: the new space is the
/// cokernel of `B_{i-1} ⊕ -A_i`, so
/// `0 -> V_i -> V_{i-1} ⊕ V_{i+1} -> V'_i -> 0` is exact.
pub fn reflect_inverse(r: &QuiverRep, i: usize) -> Result<QuiverRep> {
    reflect_via(r, i, ReflectionSide::Cokernel)
}

pub fn reflect_via(r: &QuiverRep, i: usize, side: ReflectionSide) -> Result<QuiverRep> {
    r.require_tilde()?;
    let n = r.vertices();
    if i == 0 || i > n {
        return Err(Error::Shape(format!("vertex {i} out of range 1..={n}")));
    }
    require_on_fiber(r)?;
    let vi = r.dims.v[i - 1];
    let nb = neighbourhood(r, i);
    let p = nb.a_prev.cols();
    let q = nb.a_next.rows();
    let expected = (p + q).saturating_sub(vi);

    let alpha = Matrix::hstack(vi, &[&nb.a_prev, &nb.b_next]);
    let delta = Matrix::vstack(vi, &[&nb.b_prev, &(-&nb.a_next)]);
    let target = &delta * &alpha;
    let inconsistent =
        || Error::NotStable(format!("reflection system at vertex {i} is inconsistent"));

    let (beta, gamma) = match side {
        ReflectionSide::Kernel => {
            let rank = alpha.rank();
            if rank != vi {
                return Err(Error::ExactnessFailure {
                    vertex: i,
                    expected,
                    found: p + q - rank,
                });
            }
            let beta = alpha.kernel();
            let gamma = beta.solve(&target).ok_or_else(inconsistent)?;
            (beta, gamma)
        }
        ReflectionSide::Cokernel => {
            let rank = delta.rank();
            if rank != vi {
                return Err(Error::ExactnessFailure {
                    vertex: i,
                    expected,
                    found: p + q - rank,
                });
            }
            let gamma = delta.transpose().kernel().transpose();
            let beta_t = gamma
                .transpose()
                .solve(&target.transpose())
                .ok_or_else(inconsistent)?;
            (beta_t.transpose(), gamma)
        }
    };
    let k = beta.cols();
    if k != expected || gamma.rows() != k {
        return Err(Error::ExactnessFailure {
            vertex: i,
            expected,
            found: k,
        });
    }

    let b_prev_new = beta.block(0, 0, p, k);
    let a_next_new = -&beta.block(p, 0, q, k);
    let a_prev_new = gamma.block(0, 0, k, p);
    let b_next_new = gamma.block(0, p, k, q);

    let mut a_chain: Vec<Matrix> = (0..n).map(|j| r.a_chain(j).clone()).collect();
    let mut b_chain: Vec<Matrix> = (0..n).map(|j| r.b_chain(j).clone()).collect();
    a_chain[i - 1] = a_prev_new;
    b_chain[i - 1] = b_prev_new;
    if i < n {
        a_chain[i] = a_next_new;
        b_chain[i] = b_next_new;
    }
    let out = QuiverRep::tilde(r.framing(), a_chain, b_chain)?;

    let check = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InternalInconsistency(format!(
                "reflection at vertex {i}: {what}"
            )))
        }
    };
    check(
        Some(out.dims.clone()) == reflected_dims(&r.dims, i),
        "dimension vector is not s_i(v)",
    )?;
    let exact = match side {
        ReflectionSide::Kernel => {
            beta.rank() == k && (&alpha * &beta).is_zero() && alpha.rank() + k == p + q
        }
        ReflectionSide::Cokernel => {
            gamma.rank() == k && (&gamma * &delta).is_zero() && delta.rank() + k == p + q
        }
    };
    check(exact, "sequence is not exact")?;
    check(is_on_fiber(&out), "moment map is nonzero after reflection")?;
    check(out.projection() == r.projection(), "B_0 A_0 changed")?;
    Ok(out)
}

/// Kernels of the composites `A_{j-1} ... A_0` for `j = 1..n`, the
/// invariants of a tilde representation under the group action.
pub fn chain_kernels(r: &QuiverRep) -> Vec<Matrix> {
    let mut chain = Matrix::identity(r.framing());
    (0..r.vertices())
        .map(|i| {
            chain = r.a_chain(i) * &chain;
            chain.kernel()
        })
        .collect()
}

/// Whether two tilde representations share the invariants `B_0 A_0` and the
/// chain kernels.
pub fn same_invariants(r: &QuiverRep, s: &QuiverRep) -> bool {
    r.dims == s.dims
        && r.projection() == s.projection()
        && chain_kernels(r)
            .iter()
            .zip(chain_kernels(s))
            .all(|(x, y)| x.same_span(&y))
}

/// Random incidence pair of the given flag type: a random basis `g`, the
/// flag spanned by its leading columns, and `x = g n g^{-1}` with `n` block
/// strictly upper triangular.
pub fn random_flag_point<R: Rng + ?Sized>(flag_type: &[usize], rng: &mut R) -> FlagPoint {
    assert!(
        flag_type.iter().all(|&c| c > 0),
        "flag type entries must be positive"
    );
    let n_big: usize = flag_type.iter().sum();
    let block_of: Vec<usize> = flag_type
        .iter()
        .enumerate()
        .flat_map(|(b, &c)| std::iter::repeat_n(b, c))
        .collect();
    let g = Matrix::random_invertible(n_big, 9, rng);
    let nil = Matrix::from_fn(n_big, n_big, |r, c| {
        if block_of[r] < block_of[c] {
            rat(rng.gen_range(-9..=9))
        } else {
            rat(0)
        }
    });
    let x = &(&g * &nil) * &g.inverse().expect("g is invertible");
    let mut flag = Vec::new();
    let mut dim = 0;
    for &c in &flag_type[..flag_type.len() - 1] {
        dim += c;
        flag.push(g.select_columns(&(0..dim).collect::<Vec<_>>()));
    }
    FlagPoint::new(x, flag).expect("block triangular x preserves the flag")
}

/// Random element of `G_v`.
pub fn random_group_element<R: Rng + ?Sized>(v: &[usize], rng: &mut R) -> Vec<Matrix> {
    v.iter()
        .map(|&k| Matrix::random_invertible(k, 9, rng))
        .collect()
}

/// A stable tilde representation of the given flag type, moved by a random
/// group element so its coordinates are not special.
pub fn random_stable_tilde<R: Rng + ?Sized>(flag_type: &[usize], rng: &mut R) -> QuiverRep {
    let fp = random_flag_point(flag_type, rng);
    let r = rep_from_flag_point(&fp);
    let g = random_group_element(r.v(), rng);
    r.act(&g).expect("group element has matching sizes")
}

/// Tilde representations on the zero fiber that fail stability, of two
/// kinds: `B = 0` with a rank-deficient `A`, or a stable representation with
/// an extra dimension at one vertex that no map reaches.
pub fn random_unstable_tilde<R: Rng + ?Sized>(flag_type: &[usize], rng: &mut R) -> QuiverRep {
    let base = tilde_for_composition(flag_type);
    let n_big = base.w[0];
    if rng.gen_bool(0.5) {
        let v = &base.v;
        let bad = rng.gen_range(0..v.len());
        let a_chain: Vec<Matrix> = (0..v.len())
            .map(|i| {
                let cols = if i == 0 { n_big } else { v[i - 1] };
                if i == bad {
                    // rank at most v_i - 1
                    let k = v[i] - 1;
                    &Matrix::random(v[i], k, 9, rng) * &Matrix::random(k, cols, 9, rng)
                } else {
                    Matrix::random(v[i], cols, 9, rng)
                }
            })
            .collect();
        let b_chain = a_chain
            .iter()
            .map(|a| Matrix::zeros(a.cols(), a.rows()))
            .collect();
        let r = QuiverRep::tilde(n_big, a_chain, b_chain).expect("tilde shapes");
        let g = random_group_element(r.v(), rng);
        r.act(&g).expect("group element has matching sizes")
    } else {
        let r = rep_from_flag_point(&random_flag_point(flag_type, rng));
        let pad = rng.gen_range(0..r.vertices());
        let mut v = r.v().to_vec();
        v[pad] += 1;
        let grow = |m: &Matrix, rows: usize, cols: usize| {
            Matrix::from_fn(rows, cols, |i, j| {
                if i < m.rows() && j < m.cols() {
                    m.get(i, j).clone()
                } else {
                    rat(0)
                }
            })
        };
        let dim_in = |i: usize| if i == 0 { n_big } else { v[i - 1] };
        let a_chain = (0..v.len())
            .map(|i| grow(r.a_chain(i), v[i], dim_in(i)))
            .collect();
        let b_chain = (0..v.len())
            .map(|i| grow(r.b_chain(i), dim_in(i), v[i]))
            .collect();
        let padded = QuiverRep::tilde(n_big, a_chain, b_chain).expect("tilde shapes");
        let g = random_group_element(padded.v(), rng);
        padded.act(&g).expect("group element has matching sizes")
    }
}

/// A representation with every map random, usually off the zero fiber.
pub fn random_rep<R: Rng + ?Sized>(dims: &DimVectors, rng: &mut R) -> Result<QuiverRep> {
    let n = check_dims(dims)?;
    let (v, w) = (&dims.v, &dims.w);
    let a = (0..n - 1)
        .map(|i| Matrix::random(v[i + 1], v[i], 9, rng))
        .collect();
    let b = (0..n - 1)
        .map(|i| Matrix::random(v[i], v[i + 1], 9, rng))
        .collect();
    let gamma = (0..n).map(|j| Matrix::random(v[j], w[j], 9, rng)).collect();
    let delta = (0..n).map(|j| Matrix::random(w[j], v[j], 9, rng)).collect();
    QuiverRep::new(dims.clone(), a, b, gamma, delta)
}

/// A random point of the zero fiber for arbitrary `(v, w)`: `A` and `Gamma`
/// random, then `(B, Delta)` a random solution of the linear equations
/// `mu = 0`.
pub fn sample_on_fiber<R: Rng + ?Sized>(dims: &DimVectors, rng: &mut R) -> Result<QuiverRep> {
    let n = check_dims(dims)?;
    let (v, w) = (&dims.v, &dims.w);
    let a: Vec<Matrix> = (0..n - 1)
        .map(|i| Matrix::random(v[i + 1], v[i], 9, rng))
        .collect();
    let gamma: Vec<Matrix> = (0..n).map(|j| Matrix::random(v[j], w[j], 9, rng)).collect();

    // unknowns: entries of B_1..B_{n-1}, then Delta_1..Delta_n
    let mut shapes: Vec<(usize, usize)> = (0..n - 1).map(|i| (v[i], v[i + 1])).collect();
    shapes.extend((0..n).map(|j| (w[j], v[j])));
    let unknowns: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let equations: usize = v.iter().map(|k| k * k).sum();

    let build = |values: &[crate::linalg::Rational]| -> QuiverRep {
        let mut it = values.iter().cloned();
        let mut take =
            |(r, c): (usize, usize)| Matrix::from_vec(r, c, it.by_ref().take(r * c).collect());
        let b = shapes[..n - 1].iter().map(|&s| take(s)).collect();
        let delta = shapes[n - 1..].iter().map(|&s| take(s)).collect();
        QuiverRep::new(dims.clone(), a.clone(), b, gamma.clone(), delta).expect("sampled shapes")
    };

    let mut system = Matrix::zeros(equations, unknowns);
    let mut unit = vec![rat(0); unknowns];
    for k in 0..unknowns {
        unit[k] = rat(1);
        let mu = moment_map(&build(&unit));
        unit[k] = rat(0);
        let mut row = 0;
        for m in &mu {
            for e in m.entries() {
                system.set(row, k, e.clone());
                row += 1;
            }
        }
    }
    let kernel = system.kernel();
    let coeffs = Matrix::random(kernel.cols(), 1, 9, rng);
    let solution = &kernel * &coeffs;
    let values: Vec<_> = (0..unknowns).map(|k| solution.get(k, 0).clone()).collect();
    let r = build(&values);
    debug_assert!(moment_map(&r).iter().all(Matrix::is_zero));
    if !is_on_fiber(&r) {
        return Err(Error::InternalInconsistency(
            "fiber sample has nonzero moment map".into(),
        ));
    }
    Ok(r)
}

/// True when every component of the moment map vanishes and there is at
/// least one nonzero map, a cheap sanity filter for samples.
pub fn is_nontrivial(r: &QuiverRep) -> bool {
    r.a.iter()
        .chain(&r.b)
        .chain(&r.gamma)
        .chain(&r.delta)
        .any(|m| m.entries().iter().any(|e| !e.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: usize, cols: usize, d: &[i64]) -> Matrix {
        Matrix::from_i64(rows, cols, d)
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    #[test]
    fn zero_rep_moment_map_and_stability() {
        let dims = DimVectors {
            v: vec![2, 1],
            w: vec![3, 0],
        };
        let r = QuiverRep::zero(dims);
        assert!(moment_map(&r).iter().all(Matrix::is_zero));
        assert!(!is_one_stable(&r).unwrap());
        assert!(!all_a_surjective(&r).unwrap());
    }

    #[test]
    fn empty_vertices_are_vacuously_stable() {
        let r = QuiverRep::zero(DimVectors {
            v: vec![0, 0],
            w: vec![2, 1],
        });
        assert!(is_one_stable(&r).unwrap());
    }

    #[test]
    fn rank_one_probe() {
        let dims = DimVectors {
            v: vec![1],
            w: vec![2],
        };
        let r = QuiverRep::new(
            dims,
            vec![],
            vec![],
            vec![m(1, 2, &[1, 0])],
            vec![m(2, 1, &[0, 1])],
        )
        .unwrap();
        assert_eq!(moment_map(&r), vec![m(1, 1, &[0])]);
    }

    #[test]
    fn off_fiber_is_rejected() {
        let dims = DimVectors {
            v: vec![1],
            w: vec![1],
        };
        let r = QuiverRep::new(
            dims,
            vec![],
            vec![],
            vec![m(1, 1, &[1])],
            vec![m(1, 1, &[1])],
        )
        .unwrap();
        assert_eq!(is_one_stable(&r).unwrap_err().kind(), "NotOnFiber");
    }

    #[test]
    fn shape_errors() {
        let dims = DimVectors {
            v: vec![1],
            w: vec![2],
        };
        let err = QuiverRep::new(
            dims,
            vec![],
            vec![],
            vec![m(1, 1, &[1])],
            vec![m(2, 1, &[0, 1])],
        )
        .unwrap_err();
        assert_eq!(err.kind(), "ShapeError");
        let r = QuiverRep::zero(DimVectors {
            v: vec![1, 1],
            w: vec![1, 1],
        });
        assert_eq!(all_a_surjective(&r).unwrap_err().kind(), "ShapeError");
    }

    #[test]
    fn theta_on_two_by_two() {
        // d = [2]: A_0 = (1 0), B_0 = (0 1)^T, x = e_21
        let r = QuiverRep::tilde(2, vec![m(1, 2, &[1, 0])], vec![m(2, 1, &[0, 1])]).unwrap();
        assert!(is_on_fiber(&r));
        let fp = theta(&r).unwrap();
        assert_eq!(fp.x(), &m(2, 2, &[0, 0, 1, 0]));
        assert!(fp.subspace(1).same_span(&m(2, 1, &[0, 1])));
        assert_eq!(nilpotent_partition(fp.x()).unwrap(), "2".parse().unwrap());
    }

    #[test]
    fn theta_of_zero_x_and_standard_flag() {
        let flag = vec![m(3, 1, &[1, 0, 0]), m(3, 2, &[1, 0, 0, 1, 0, 0])];
        let r = from_flag(&Matrix::zeros(3, 3), &flag).unwrap();
        assert!((0..2).all(|i| r.b_chain(i).is_zero()));
        let fp = theta(&r).unwrap();
        assert!(fp.x().is_zero());
        assert!(fp.subspace(1).same_span(&flag[0]));
        assert!(fp.subspace(2).same_span(&flag[1]));
    }

    #[test]
    fn from_flag_rejects_incidence_violation() {
        // x = e_12 moves e_2 to e_1, but U_1 = span(e_2) must be killed
        let x = m(2, 2, &[0, 1, 0, 0]);
        let err = from_flag(&x, &[m(2, 1, &[0, 1])]).unwrap_err();
        assert_eq!(err.kind(), "IncidenceViolation");
    }

    #[test]
    fn regular_nilpotent_full_flag() {
        // x = Jordan block of size 3, full flag span(e1) ⊂ span(e1, e2)
        let x = m(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        let flag = vec![m(3, 1, &[1, 0, 0]), m(3, 2, &[1, 0, 0, 1, 0, 0])];
        let r = from_flag(&x, &flag).unwrap();
        assert!(is_on_fiber(&r));
        assert!(all_a_surjective(&r).unwrap());
        assert!(is_one_stable(&r).unwrap());
        // B_0 : C^2 -> C^3 has rank 2, B_1 : C^1 -> C^2 has rank 1
        assert_eq!(r.b_chain(0).rank(), 2);
        assert_eq!(r.b_chain(1).rank(), 1);
        assert!(theta(&r)
            .unwrap()
            .same_point(&FlagPoint::new(x, flag).unwrap()));
    }

    #[test]
    fn nilpotent_partition_examples() {
        assert_eq!(
            nilpotent_partition(&Matrix::zeros(3, 3)).unwrap(),
            Partition::ones(3)
        );
        let err = nilpotent_partition(&Matrix::identity(2)).unwrap_err();
        assert_eq!(err.kind(), "NotNilpotent");
    }

    #[test]
    fn random_round_trip_and_stability() {
        let mut rng = rng();
        for ft in [vec![3, 2, 1], vec![1, 2, 3], vec![2, 2, 1], vec![1, 1]] {
            let fp = random_flag_point(&ft, &mut rng);
            assert_eq!(fp.flag_type(), ft);
            let r = rep_from_flag_point(&fp);
            assert!(is_on_fiber(&r));
            assert!(is_one_stable(&r).unwrap());
            assert!(all_a_surjective(&r).unwrap());
            assert!(theta(&r).unwrap().same_point(&fp));
        }
    }

    #[test]
    fn unstable_samples_are_on_fiber() {
        let mut rng = rng();
        for _ in 0..10 {
            let r = random_unstable_tilde(&[3, 2, 1], &mut rng);
            assert!(is_on_fiber(&r));
            assert!(!is_one_stable(&r).unwrap());
            assert!(!all_a_surjective(&r).unwrap());
            assert_eq!(theta(&r).unwrap_err().kind(), "NotStable");
        }
    }

    #[test]
    fn reflection_dimensions() {
        let mut rng = rng();
        // d = [2,1]: a = (2,1), v~ = (1), s_1 gives (2)
        let r = random_stable_tilde(&[2, 1], &mut rng);
        assert_eq!(r.v(), &[1]);
        let s = reflect(&r, 1).unwrap();
        assert_eq!(s.v(), &[2]);
        assert_eq!(s.projection(), r.projection());
    }

    #[test]
    fn zero_b_reflection_kernel_dimension() {
        let mut rng = rng();
        // d = [3,2,1], v~ = (3, 1), B = 0, reflect at vertex 2: 3 + 0 - 1 = 2
        let a0 = Matrix::random(3, 6, 9, &mut rng);
        let a1 = loop {
            let a = Matrix::random(1, 3, 9, &mut rng);
            if a.rank() == 1 {
                break a;
            }
        };
        let r = QuiverRep::tilde(
            6,
            vec![a0, a1],
            vec![Matrix::zeros(6, 3), Matrix::zeros(3, 1)],
        )
        .unwrap();
        let s = reflect(&r, 2).unwrap();
        assert_eq!(s.v(), &[3, 2]);
    }

    #[test]
    fn double_reflection_restores_invariants() {
        let mut rng = rng();
        for ft in [
            vec![3, 2, 1],
            vec![2, 2, 1],
            vec![1, 3, 2],
            vec![2, 1, 2, 1],
        ] {
            let r = random_stable_tilde(&ft, &mut rng);
            for i in 1..=r.vertices() {
                let s = reflect(&r, i).unwrap();
                assert_eq!(Some(s.dims().clone()), reflected_dims(r.dims(), i));
                let t = reflect_inverse(&s, i).unwrap();
                assert!(same_invariants(&r, &t), "flag type {ft:?} vertex {i}");
            }
        }
    }

    #[test]
    fn kernel_twice_leaves_the_chamber() {
        // the kernel construction applied twice lands on a representation
        // that is not stable for the all-ones character
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random_stable_tilde(&[1, 3, 2], &mut rng);
        let t = reflect(&reflect(&r, 1).unwrap(), 1).unwrap();
        assert_eq!(t.v(), r.v());
        assert_eq!(t.projection(), r.projection());
        assert!(!all_a_surjective(&t).unwrap());
    }

    #[test]
    fn reflection_rejects_degenerate_input() {
        let r = QuiverRep::zero(DimVectors {
            v: vec![3, 1],
            w: vec![6, 0],
        });
        assert_eq!(reflect(&r, 1).unwrap_err().kind(), "ExactnessFailure");
        assert_eq!(reflect(&r, 3).unwrap_err().kind(), "ShapeError");
    }

    #[test]
    fn fiber_samples() {
        let mut rng = rng();
        let dims = DimVectors {
            v: vec![1, 1, 0, 1],
            w: vec![2, 2, 0, 3],
        };
        let r = sample_on_fiber(&dims, &mut rng).unwrap();
        assert!(is_on_fiber(&r));
        assert!(is_nontrivial(&r));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rng();
        let r = random_stable_tilde(&[2, 1], &mut rng);
        let s = serde_json::to_string(&r).unwrap();
        let back: QuiverRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let bad = s.replace("\"v\":[1]", "\"v\":[2]");
        assert!(serde_json::from_str::<QuiverRep>(&bad).is_err());
    }
}
