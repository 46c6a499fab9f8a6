//! Randomized and exhaustive property suites with a pass/fail report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chambers::slice_chambers;
use crate::chambers::{enumerate_chambers, flop_graph, locate, CharacterPoint, Location};
use crate::error::Error;
use crate::liealg::{
    ad_matrix, jordan_nilpotent, sl2_completion, slodowy_slice_basis, transversality_check,
};
use crate::linalg::Matrix;
use crate::partitions::{dominates, Partition};
use crate::quiverlab::{
    all_a_surjective, from_flag, is_one_stable, moment_map, nilpotent_partition, random_flag_point,
    random_group_element, random_rep, random_stable_tilde, random_unstable_tilde, reflect,
    reflect_inverse, reflected_dims, rep_from_flag_point, same_invariants, sample_on_fiber, theta,
};
use crate::slices::{
    count_slice_resolutions, decompose, decompose_quiver, decompose_young, dimension_vectors,
    make_slice_pair, nested_pairs, tilde_vectors, Method, SlicePair,
};

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    start: Instant,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, context: impl std::fmt::Display, e: Error) {
        self.checks += 1;
        self.failures.push(format!("{context}: {e}"));
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            elapsed: self.start.elapsed(),
        }
    }
}

fn p(s: &str) -> Partition {
    s.parse().expect("literal partition")
}

fn parts(list: &[&[usize]]) -> Vec<(Partition, Partition)> {
    list.chunks(2)
        .map(|c| {
            (
                Partition::new(c[0].to_vec()).unwrap(),
                Partition::new(c[1].to_vec()).unwrap(),
            )
        })
        .collect()
}

fn factor_pairs(
    sp: &SlicePair,
    method: Method,
) -> crate::Result<(Vec<(Partition, Partition)>, BigUint)> {
    let dec = decompose(sp, method)?;
    Ok((
        dec.factors
            .iter()
            .map(|f| (f.d.clone(), f.dp.clone()))
            .collect(),
        dec.total_count,
    ))
}

fn expect_decomposition(
    suite: &mut Suite,
    dp: &str,
    d: &str,
    want: &[(Partition, Partition)],
    count: u32,
) {
    let sp = match make_slice_pair(&p(dp), &p(d)) {
        Ok(sp) => sp,
        Err(e) => return suite.error(format!("({dp}; {d})"), e),
    };
    for method in [Method::Young, Method::Quiver, Method::Both] {
        match factor_pairs(&sp, method) {
            Ok((got, total)) => {
                suite.check(got == want, || {
                    format!("{method:?} factors of ({dp}; {d}): {got:?}")
                });
                suite.check(total == BigUint::from(count), || {
                    format!("{method:?} count of ({dp}; {d}): {total}")
                });
            }
            Err(e) => suite.error(format!("{method:?} ({dp}; {d})"), e),
        }
    }
}

/// Two-factor decomposition of `([4,4,4,2,2,1,1], [5,4,3,3,2,1])`.
pub fn two_factor_example() -> SuiteReport {
    let mut s = Suite::new("two-factor decomposition");
    let want = parts(&[&[3, 2, 1], &[2, 2, 1, 1], &[2, 1], &[1, 1, 1]]);
    expect_decomposition(&mut s, "4,4,4,2,2,1,1", "5,4,3,3,2,1", &want, 12);
    s.finish()
}

/// One-factor decomposition of `([5,3,3,2], [5,4,3,1])` and the ambient count.
pub fn one_factor_example() -> SuiteReport {
    let mut s = Suite::new("one-factor decomposition");
    let want = parts(&[&[3, 2], &[2, 2, 1]]);
    expect_decomposition(&mut s, "5,3,3,2", "5,4,3,1", &want, 3);
    let c = p("5,4,3,1").count_resolutions();
    s.check(c == BigUint::from(60u32), || {
        format!("count_resolutions([5,4,3,1]) = {c}")
    });
    s.finish()
}

/// The six chambers of `[3,2,1]`, the chamber of `(1,1)` and the hexagon of flops.
pub fn hexagon_example() -> SuiteReport {
    let mut s = Suite::new("chambers of [3,2,1]");
    let d = p("3,2,1");
    match enumerate_chambers(&d) {
        Ok(cs) => {
            let mut labels: Vec<Vec<usize>> = cs.iter().map(|c| c.flag_type.clone()).collect();
            labels.sort();
            let want = vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1],
            ];
            s.check(cs.len() == 6 && labels == want, || {
                format!("chamber labels {labels:?}")
            });
        }
        Err(e) => s.error("enumerate_chambers", e),
    }
    match locate(&CharacterPoint::from_i64(&[1, 1]), &d) {
        Ok(Location::Chamber(c)) => s.check(c.flag_type == vec![3, 2, 1], || {
            format!("(1,1) lies in {:?}", c.flag_type)
        }),
        Ok(Location::Wall) => s.check(false, || "(1,1) reported on a wall".into()),
        Err(e) => s.error("locate", e),
    }
    match flop_graph(&d) {
        Ok(g) => s.check(g.nodes.len() == 6 && g.is_cycle(), || {
            format!("flop graph {:?} is not a 6-cycle", g.edges)
        }),
        Err(e) => s.error("flop_graph", e),
    }
    s.finish()
}

/// A random nested pair of partitions of a random `n <= max_n`.
pub fn random_nested_pair<R: Rng + ?Sized>(max_n: usize, rng: &mut R) -> SlicePair {
    loop {
        let n = rng.gen_range(1..=max_n);
        let d = Partition::random(n, rng);
        let dp = Partition::random(n, rng);
        if dominates(&dp, &d).unwrap_or(false) {
            return make_slice_pair(&dp, &d).expect("dominated pair");
        }
        if dominates(&d, &dp).unwrap_or(false) {
            return make_slice_pair(&d, &dp).expect("dominated pair");
        }
    }
}

/// The two decomposition algorithms agree on every nested pair with
/// `N <= exhaustive_n` and on `random_pairs` random pairs with `N <= random_n`.
pub fn oracle_equivalence(
    exhaustive_n: usize,
    random_pairs: usize,
    random_n: usize,
    seed: u64,
) -> SuiteReport {
    let mut s = Suite::new("decomposition oracle equivalence");
    let compare = |s: &mut Suite, sp: &SlicePair| {
        if sp.d().is_single_column() {
            return;
        }
        match (decompose_young(sp), decompose_quiver(sp)) {
            (Ok(y), Ok(q)) => s.check(y == q, || {
                format!("({}; {}): young {:?} quiver {:?}", sp.dp(), sp.d(), y, q)
            }),
            (Err(e), _) | (_, Err(e)) => s.error(format!("({}; {})", sp.dp(), sp.d()), e),
        }
    };
    for n in 1..=exhaustive_n {
        for sp in nested_pairs(n) {
            compare(&mut s, &sp);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_pairs {
        let sp = random_nested_pair(random_n, &mut rng);
        compare(&mut s, &sp);
    }
    s.finish()
}

/// A random ambient partition of some `2 <= n <= max_n` with at least two
/// columns and a random rearrangement of its column heights.
fn random_flag_type<R: Rng + ?Sized>(max_n: usize, rng: &mut R) -> (Partition, Vec<usize>) {
    loop {
        let n = rng.gen_range(2..=max_n);
        let d = Partition::random(n, rng);
        if d.is_single_column() {
            continue;
        }
        let mut ft = d.dual().parts().to_vec();
        ft.shuffle(rng);
        return (d, ft);
    }
}

/// Moment map, stability, the flag correspondence and closure membership on
/// random tilde representations with `N <= max_n`.
pub fn quiver_suite(trials: usize, max_n: usize, seed: u64) -> SuiteReport {
    let mut s = Suite::new("quiver representations");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let (d, ft) = random_flag_type(max_n, &mut rng);
        let ctx = format!("trial {t}, flag type {ft:?}");

        // flag point -> representation -> flag point
        let fp = random_flag_point(&ft, &mut rng);
        let r = rep_from_flag_point(&fp);
        s.check(moment_map(&r).iter().all(Matrix::is_zero), || {
            format!("{ctx}: mu != 0")
        });
        match (is_one_stable(&r), all_a_surjective(&r)) {
            (Ok(st), Ok(su)) => {
                s.check(st && su, || format!("{ctx}: stable {st}, surjective {su}"))
            }
            (Err(e), _) | (_, Err(e)) => s.error(&ctx, e),
        }
        match theta(&r) {
            Ok(back) => s.check(back.same_point(&fp), || {
                format!("{ctx}: theta(from_flag) differs")
            }),
            Err(e) => s.error(&ctx, e),
        }

        // moved representation -> flag point -> representation
        let g = random_group_element(r.v(), &mut rng);
        let moved = r.act(&g).expect("matching sizes");
        match theta(&moved) {
            Ok(fp2) => {
                match nilpotent_partition(fp2.x()) {
                    Ok(q) => s.check(dominates(&q, &d).unwrap_or(false), || {
                        format!("{ctx}: Jordan type {q} not dominated by {d}")
                    }),
                    Err(e) => s.error(&ctx, e),
                }
                let flag: Vec<Matrix> = (1..fp2.steps()).map(|i| fp2.subspace(i)).collect();
                match from_flag(fp2.x(), &flag) {
                    Ok(r2) => s.check(same_invariants(&moved, &r2), || {
                        format!("{ctx}: from_flag(theta) changes invariants")
                    }),
                    Err(e) => s.error(&ctx, e),
                }
            }
            Err(e) => s.error(&ctx, e),
        }

        // engineered instability
        let u = random_unstable_tilde(&ft, &mut rng);
        s.check(moment_map(&u).iter().all(Matrix::is_zero), || {
            format!("{ctx}: unstable sample off fiber")
        });
        match (is_one_stable(&u), all_a_surjective(&u)) {
            (Ok(st), Ok(su)) => s.check(!st && !su, || {
                format!("{ctx}: unstable sample reports stable {st}, surjective {su}")
            }),
            (Err(e), _) | (_, Err(e)) => s.error(&ctx, e),
        }

        // equivariance of the moment map off the fiber
        if let Ok(x) = random_rep(r.dims(), &mut rng) {
            let g = random_group_element(x.v(), &mut rng);
            let lhs = moment_map(&x.act(&g).expect("matching sizes"));
            let rhs: Vec<Matrix> = moment_map(&x)
                .iter()
                .zip(&g)
                .map(|(mu, gi)| &(gi * mu) * &gi.inverse().expect("invertible"))
                .collect();
            s.check(lhs == rhs, || {
                format!("{ctx}: moment map is not equivariant")
            });
        }
    }

    // slice-shaped points of the zero fiber
    for t in 0..trials / 10 {
        let sp = random_nested_pair(max_n, &mut rng);
        if sp.d().is_single_column() || sp.is_point() {
            continue;
        }
        let ctx = format!("fiber sample {t}, ({}; {})", sp.dp(), sp.d());
        match dimension_vectors(&sp).and_then(|dims| sample_on_fiber(&dims, &mut rng)) {
            Ok(r) => match is_one_stable(&r) {
                Ok(_) => s.check(true, String::new),
                Err(e) => s.error(&ctx, e),
            },
            Err(e) => s.error(&ctx, e),
        }
    }
    s.finish()
}

/// Reflections on random stable tilde representations with `N <= max_n`.
pub fn reflection_suite(trials: usize, max_n: usize, seed: u64) -> SuiteReport {
    let mut s = Suite::new("reflections");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let (_, ft) = random_flag_type(max_n, &mut rng);
        let r = random_stable_tilde(&ft, &mut rng);
        let i = rng.gen_range(1..=r.vertices());
        let ctx = format!("trial {t}, flag type {ft:?}, vertex {i}");
        let once = match reflect(&r, i) {
            Ok(x) => x,
            Err(e) => {
                s.error(&ctx, e);
                continue;
            }
        };
        s.check(
            Some(once.dims().clone()) == reflected_dims(r.dims(), i),
            || format!("{ctx}: dimensions {:?}", once.v()),
        );
        s.check(once.projection() == r.projection(), || {
            format!("{ctx}: B_0 A_0 changed")
        });
        s.check(moment_map(&once).iter().all(Matrix::is_zero), || {
            format!("{ctx}: mu != 0")
        });
        match reflect_inverse(&once, i) {
            Ok(twice) => s.check(same_invariants(&r, &twice), || {
                format!("{ctx}: double reflection changes invariants")
            }),
            Err(e) => s.error(&ctx, e),
        }
    }
    s.finish()
}

/// `sl_2`-triples, transversality and centralizer dimensions for every
/// nonzero nilpotent type with `N <= max_n`.
pub fn lie_suite(max_n: usize) -> SuiteReport {
    let mut s = Suite::new("sl2 triples and transversality");
    for n in 2..=max_n {
        for dp in Partition::all(n)
            .into_iter()
            .filter(|d| !d.is_single_column())
        {
            let t = match sl2_completion(&dp) {
                Ok(t) => t,
                Err(e) => {
                    s.error(&dp, e);
                    continue;
                }
            };
            s.check(t.check(), || format!("{dp}: bracket relations fail"));
            s.check(transversality_check(&t, &dp), || {
                format!("{dp}: not transverse")
            });
            let sq: usize = dp.dual().parts().iter().map(|a| a * a).sum();
            let k = slodowy_slice_basis(&t).len();
            s.check(k == sq - 1, || {
                format!("{dp}: slice dimension {k}, expected {}", sq - 1)
            });
            let im = ad_matrix(&t.x).rank() as u64;
            s.check(im == dp.orbit_dim(), || format!("{dp}: rank ad x = {im}"));
            let jt = nilpotent_partition(&jordan_nilpotent(&dp));
            s.check(jt.as_ref() == Ok(&dp), || {
                format!("{dp}: Jordan type {jt:?}")
            });
        }
    }
    s.finish()
}

/// Chamber graphs of slices are products of the factor graphs, for every
/// nested pair with `N <= max_n`.
pub fn product_chamber_suite(max_n: usize) -> SuiteReport {
    let mut s = Suite::new("product chamber structure");
    for n in 1..=max_n {
        for sp in nested_pairs(n) {
            let ctx = format!("({}; {})", sp.dp(), sp.d());
            let sc = match slice_chambers(&sp) {
                Ok(sc) => sc,
                Err(e) => {
                    s.error(&ctx, e);
                    continue;
                }
            };
            let sizes: Vec<usize> = sc.factor_graphs.iter().map(|g| g.nodes.len()).collect();
            let nodes: usize = sizes.iter().product();
            let edges: usize = sc
                .factor_graphs
                .iter()
                .enumerate()
                .map(|(k, g)| g.edges.len() * nodes / sizes[k])
                .sum();
            s.check(sc.nodes.len() == nodes && sc.edges.len() == edges, || {
                format!("{ctx}: {} nodes, {} edges", sc.nodes.len(), sc.edges.len())
            });
            for (k, (f, g)) in sc.factors.iter().zip(&sc.factor_graphs).enumerate() {
                s.check(BigUint::from(g.nodes.len()) == f.count(), || {
                    format!(
                        "{ctx}: factor {} has {} flop graph nodes",
                        f.d,
                        g.nodes.len()
                    )
                });
                if sc.chamber_count(k) > BigUint::from(LABEL_CHECK_LIMIT) {
                    continue;
                }
                let cs = sc.chambers(k);
                let labels: BTreeSet<&Vec<usize>> = cs.iter().map(|c| &c.flag_type).collect();
                s.check(
                    BigUint::from(cs.len()) == sc.chamber_count(k)
                        && BigUint::from(labels.len()) == f.count(),
                    || format!("{ctx}: factor {} has {} flag types", f.d, labels.len()),
                );
            }
            match count_slice_resolutions(&sp) {
                Ok(c) => s.check(c == BigUint::from(nodes), || {
                    format!("{ctx}: count {c} vs {nodes} nodes")
                }),
                Err(e) => s.error(&ctx, e),
            }
            s.check(sc.is_connected(), || {
                format!("{ctx}: chamber graph disconnected")
            });
        }
    }
    s.finish()
}

/// Largest chamber set whose labels are enumerated in the product suite.
const LABEL_CHECK_LIMIT: u64 = 5040;

/// `dimension_vectors([1, ..., 1], d) = tilde_vectors(d)` for every `d` with
/// at least two columns and `N <= max_n`.
pub fn tilde_consistency_suite(max_n: usize) -> SuiteReport {
    let mut s = Suite::new("tilde dimension vectors");
    for n in 2..=max_n {
        for d in Partition::all(n)
            .into_iter()
            .filter(|d| !d.is_single_column())
        {
            let sp = make_slice_pair(&Partition::ones(n), &d).expect("zero orbit is minimal");
            match (dimension_vectors(&sp), tilde_vectors(&d)) {
                (Ok(a), Ok(b)) => s.check(a == b, || format!("{d}: {a:?} vs {b:?}")),
                (Err(e), _) | (_, Err(e)) => s.error(&d, e),
            }
        }
    }
    s.finish()
}

/// Sizes and seed for [`run_all`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random quiver representations; reflections use a fifth of this and
    /// the random decomposition pairs ten times this.
    pub trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 1000,
        }
    }
}

pub fn run_all(cfg: VerifyConfig) -> Vec<SuiteReport> {
    vec![
        two_factor_example(),
        one_factor_example(),
        hexagon_example(),
        oracle_equivalence(12, 10 * cfg.trials, 30, cfg.seed),
        quiver_suite(cfg.trials, 8, cfg.seed),
        reflection_suite(cfg.trials / 5, 7, cfg.seed),
        lie_suite(7),
        product_chamber_suite(10),
        tilde_consistency_suite(12),
    ]
}

/// One line per suite: status, name, number of checks and the first failure.
/// Timings are left out so the table is reproducible.
pub fn format_table(reports: &[SuiteReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status}  {:<width$}  {:>7} checks", r.name, r.checks);
        if let Some(first) = r.failures.first() {
            let _ = write!(out, "  {} failed, first: {first}", r.failures.len());
        }
        out.push('\n');
    }
    out
}
