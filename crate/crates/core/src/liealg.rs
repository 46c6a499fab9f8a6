//! Concrete `sl_N` computations: Jordan representatives, `sl_2`-triples and
//! Slodowy slices `x + Ker(ad y)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rat, Matrix};
use crate::partitions::Partition;
use crate::slices::SlicePair;

/// Block-diagonal nilpotent matrix with one Jordan block (ones on the
/// superdiagonal) per row of `d`.
pub fn jordan_nilpotent(d: &Partition) -> Matrix {
    let n = d.size();
    let mut x = Matrix::zeros(n, n);
    let mut start = 0;
    for &k in d.parts() {
        for j in 0..k - 1 {
            x.set(start + j, start + j + 1, rat(1));
        }
        start += k;
    }
    x
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Triple {
    pub x: Matrix,
    pub y: Matrix,
    pub h: Matrix,
}

impl Sl2Triple {
    /// `[x, y] = h`, `[h, x] = 2x`, `[h, y] = -2y`, all traceless, `x != 0`.
    pub fn check(&self) -> bool {
        let two = rat(2);
        self.x.bracket(&self.y) == self.h
            && self.h.bracket(&self.x) == self.x.scale(&two)
            && self.h.bracket(&self.y) == self.y.scale(&-two)
            && [&self.x, &self.y, &self.h]
                .iter()
                .all(|m| m.trace() == rat(0))
            && !self.x.is_zero()
    }

    pub fn size(&self) -> usize {
        self.x.rows()
    }
}

/// The triple through [`jordan_nilpotent`] built block by block: on a block
/// of size `k`, `y` has subdiagonal entries `j(k - j)` and
/// `h = diag(k - 1, k - 3, ..., 1 - k)`.
pub fn sl2_completion(d: &Partition) -> Result<Sl2Triple> {
    if d.is_single_column() {
        return Err(Error::DegenerateAmbient(d.clone()));
    }
    let n = d.size();
    let x = jordan_nilpotent(d);
    let mut y = Matrix::zeros(n, n);
    let mut h = Matrix::zeros(n, n);
    let mut start = 0;
    for &k in d.parts() {
        for j in 1..k {
            y.set(start + j, start + j - 1, rat((j * (k - j)) as i64));
        }
        for j in 0..k {
            h.set(start + j, start + j, rat(k as i64 - 1 - 2 * j as i64));
        }
        start += k;
    }
    Ok(Sl2Triple { x, y, h })
}

/// `ad m = [m, -]` on row-major vectorized `N x N` matrices.
pub fn ad_matrix(m: &Matrix) -> Matrix {
    let n = m.rows();
    Matrix::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        let mut e = rat(0);
        if l == j {
            e += m.get(i, k);
        }
        if k == i {
            e -= m.get(l, j);
        }
        e
    })
}

fn trace_row(n: usize) -> Matrix {
    Matrix::from_fn(
        1,
        n * n,
        |_, c| if c / n == c % n { rat(1) } else { rat(0) },
    )
}

/// Kernel of `ad y` inside `sl_N` for `y` an arbitrary square matrix, as
/// vectorized columns.
pub fn traceless_centralizer(y: &Matrix) -> Matrix {
    let n = y.rows();
    Matrix::vstack(n * n, &[&ad_matrix(y), &trace_row(n)]).kernel()
}

/// Basis of `Ker(ad y) ∩ sl_N`, the tangent directions of the slice, as
/// `N x N` matrices.
pub fn slodowy_slice_basis(t: &Sl2Triple) -> Vec<Matrix> {
    let n = t.size();
    let k = traceless_centralizer(&t.y);
    (0..k.cols())
        .map(|c| Matrix::from_fn(n, n, |i, j| k.get(i * n + j, c).clone()))
        .collect()
}

/// Whether `Im(ad x) ⊕ Ker(ad y) = sl_N` for the triple, with the sum
/// direct.
pub fn transversality_check(t: &Sl2Triple, dp: &Partition) -> bool {
    let n = t.size();
    if dp.size() != n || t.x != jordan_nilpotent(dp) {
        return false;
    }
    let image = ad_matrix(&t.x).column_space();
    let kernel = traceless_centralizer(&t.y);
    let target = n * n - 1;
    image.cols() + kernel.cols() == target
        && Matrix::hstack(n * n, &[&image, &kernel]).rank() == target
}

/// A random element of `SL_N(Z)`: lower times upper unitriangular.
fn random_unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Matrix, Matrix) {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => rat(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Less => rat(0),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => rat(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Greater => rat(0),
    });
    let g = &lower * &upper;
    let inv = g.inverse().expect("unitriangular factors are invertible");
    (g, inv)
}

/// Estimate of `dim(S_x ∩ closure(O_d))` from tangent spaces.
///
/// Each trial takes a random conjugate `z` of the Jordan matrix of `d`. When
/// `Im(ad z) + Ker(ad y) = sl_N`, the two meet in a space of the dimension
/// the intersection has at a transverse point; the maximum over accepted
/// trials is returned. For `d' = [1, ..., 1]` the slice is all of `sl_N`.
/// The span is certified by a modular rank when it is full, since its rank
/// over the rationals is at most `N^2 - 1`.
pub fn slice_sample_dim(sp: &SlicePair, trials: usize, seed: u64) -> Result<usize> {
    let n = sp.size();
    let target = n * n - 1;
    let kernel = if sp.dp().is_single_column() {
        trace_row(n).kernel()
    } else {
        traceless_centralizer(&sl2_completion(sp.dp())?.y)
    };
    let jordan = jordan_nilpotent(sp.d());
    let image_dim = sp.d().orbit_dim() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<usize> = None;
    for _ in 0..trials {
        let (g, inv) = random_unimodular(n, &mut rng);
        let z = &(&g * &jordan) * &inv;
        let span = Matrix::hstack(n * n, &[&ad_matrix(&z), &kernel]);
        if span.rank_lower_bound() != target && span.rank() != target {
            continue;
        }
        let meet = image_dim + kernel.cols() - target;
        best = Some(best.map_or(meet, |b| b.max(meet)));
    }
    best.ok_or(Error::SamplingExhausted { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverlab::nilpotent_partition;
    use crate::slices::{make_slice_pair, slice_dim};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(
            jordan_nilpotent(&p("2")),
            Matrix::from_i64(2, 2, &[0, 1, 0, 0])
        );
        assert_eq!(
            jordan_nilpotent(&p("2,1")),
            Matrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0])
        );
        for n in 1..=10 {
            for d in Partition::all(n) {
                assert_eq!(nilpotent_partition(&jordan_nilpotent(&d)).unwrap(), d);
            }
        }
    }

    #[test]
    fn triple_examples() {
        let t = sl2_completion(&p("2")).unwrap();
        assert_eq!(t.y, Matrix::from_i64(2, 2, &[0, 0, 1, 0]));
        assert_eq!(t.h, Matrix::from_i64(2, 2, &[1, 0, 0, -1]));
        let t = sl2_completion(&p("3")).unwrap();
        assert_eq!(t.y, Matrix::from_i64(3, 3, &[0, 0, 0, 2, 0, 0, 0, 2, 0]));
        assert_eq!(t.h, Matrix::from_i64(3, 3, &[2, 0, 0, 0, 0, 0, 0, 0, -2]));
        assert_eq!(
            sl2_completion(&Partition::ones(3)).unwrap_err().kind(),
            "DegenerateAmbient"
        );
    }

    #[test]
    fn triples_hold_exactly() {
        for n in 2..=8 {
            for d in Partition::all(n)
                .into_iter()
                .filter(|d| !d.is_single_column())
            {
                assert!(sl2_completion(&d).unwrap().check(), "{d}");
            }
        }
    }

    #[test]
    fn ad_matches_bracket() {
        let a = Matrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let b = Matrix::from_i64(2, 2, &[0, 5, -1, 2]);
        assert_eq!(&ad_matrix(&a) * &b.vectorize(), a.bracket(&b).vectorize());
    }

    #[test]
    fn slice_basis_dimensions() {
        let basis = slodowy_slice_basis(&sl2_completion(&p("2")).unwrap());
        assert_eq!(basis.len(), 1);
        let y = Matrix::from_i64(2, 2, &[0, 0, 1, 0]);
        assert!(basis[0].vectorize().same_span(&y.vectorize()));
        assert_eq!(
            slodowy_slice_basis(&sl2_completion(&p("2,1")).unwrap()).len(),
            4
        );
    }

    #[test]
    fn transversality_small() {
        for d in ["2", "2,1", "3,1", "2,2"] {
            let d = p(d);
            assert!(transversality_check(&sl2_completion(&d).unwrap(), &d));
        }
        let t = sl2_completion(&p("2,1")).unwrap();
        assert!(!transversality_check(&t, &p("3")));
    }

    #[test]
    fn sample_dims() {
        let cases = [("2,1", "2,1", 0), ("1,1", "2", 2), ("2,2,1", "3,2", 4)];
        for (dp, d, want) in cases {
            let sp = make_slice_pair(&p(dp), &p(d)).unwrap();
            assert_eq!(slice_sample_dim(&sp, 3, 7).unwrap(), want, "{dp} {d}");
            assert_eq!(slice_dim(&sp) as usize, want);
        }
        let sp = make_slice_pair(&p("2,1"), &p("3")).unwrap();
        assert_eq!(
            slice_sample_dim(&sp, 0, 7).unwrap_err().kind(),
            "SamplingExhausted"
        );
    }
}
