//! Weyl chambers on the character space of the tilde quiver and the flop
//! graph of crepant resolutions.
//!
//! Characters are written in the fundamental weight basis. A character `chi`
//! is lifted to level coordinates `z` with `z_i - z_{i+1} = chi_i`, `z_m = 0`;
//! it is generic exactly when the `z_i` are pairwise distinct, and its chamber
//! is the permutation listing the indices of `z` in decreasing order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, rat, Rational};
use crate::partitions::Partition;
use crate::slices::{decompose_quiver, SliceFactor, SlicePair};

/// A point of the real character space, with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterPoint(pub Vec<Rational>);

impl CharacterPoint {
    pub fn from_i64(coords: &[i64]) -> Self {
        CharacterPoint(coords.iter().map(|&c| rat(c)).collect())
    }

    /// The all-ones character.
    pub fn ones(len: usize) -> Self {
        CharacterPoint::from_i64(&vec![1; len])
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        CharacterPoint(self.0.iter().map(|c| c * t).collect())
    }

    /// Level coordinates `z` with `z_m = 0`.
    pub fn levels(&self) -> Vec<Rational> {
        let m = self.0.len() + 1;
        let mut z = vec![Rational::zero(); m];
        for i in (0..m - 1).rev() {
            z[i] = &z[i + 1] + &self.0[i];
        }
        z
    }
}

impl fmt::Display for CharacterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for CharacterPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(CharacterPoint(Vec::new()));
        }
        s.split(',')
            .map(|t| parse_rational(t).ok_or_else(|| Error::Parse(format!("bad coordinate {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(CharacterPoint)
    }
}

/// The Weyl chamber `sigma(C_fund)` with its resolution label `sigma(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chamber {
    /// `perm[k] = sigma(k + 1)`, 1-based values.
    pub perm: Vec<usize>,
    /// `(a_sigma(1), ..., a_sigma(m))`.
    pub flag_type: Vec<usize>,
}

impl Chamber {
    pub fn new(perm: Vec<usize>, a: &[usize]) -> Self {
        let flag_type = perm.iter().map(|&s| a[s - 1]).collect();
        Chamber { perm, flag_type }
    }

    /// A character in the interior: `z_{sigma(k)} = m - k`.
    pub fn interior_point(&self) -> CharacterPoint {
        let m = self.perm.len();
        let mut z = vec![0i64; m];
        for (k, &s) in self.perm.iter().enumerate() {
            z[s - 1] = (m - 1 - k) as i64;
        }
        CharacterPoint::from_i64(&z.windows(2).map(|w| w[0] - w[1]).collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> Value {
        json!({ "perm": self.perm, "flag_type": self.flag_type })
    }
}

/// Outcome of [`locate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Chamber(Chamber),
    Wall,
}

fn ambient_columns(d: &Partition) -> Result<Vec<usize>> {
    if d.is_single_column() {
        return Err(Error::DegenerateAmbient(d.clone()));
    }
    Ok(d.dual().parts().to_vec())
}

/// All permutations of `1..=m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=m).collect();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// The `m!` Weyl chambers, which are the GIT chambers of the tilde quiver.
pub fn enumerate_chambers(d: &Partition) -> Result<Vec<Chamber>> {
    let a = ambient_columns(d)?;
    Ok(permutations(a.len())
        .into_iter()
        .map(|p| Chamber::new(p, &a))
        .collect())
}

/// Chamber containing `chi`, or [`Location::Wall`] when `chi` is not generic.
pub fn locate(chi: &CharacterPoint, d: &Partition) -> Result<Location> {
    let a = ambient_columns(d)?;
    let m = a.len();
    if chi.0.len() != m - 1 {
        return Err(Error::DimensionMismatch {
            expected: m - 1,
            got: chi.0.len(),
        });
    }
    let z = chi.levels();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| z[j].cmp(&z[i]));
    if order.windows(2).any(|w| z[w[0]] == z[w[1]]) {
        return Ok(Location::Wall);
    }
    Ok(Location::Chamber(Chamber::new(
        order.into_iter().map(|i| i + 1).collect(),
        &a,
    )))
}

fn connected(nodes: usize, edges: &[(usize, usize)]) -> bool {
    if nodes == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); nodes];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; nodes];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn degrees(nodes: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0; nodes];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

fn label(c: &[usize]) -> String {
    c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Resolutions of an orbit closure (one node per flag type) and the flops
/// between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopGraph {
    pub nodes: Vec<Vec<usize>>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl FlopGraph {
    pub fn is_connected(&self) -> bool {
        connected(self.nodes.len(), &self.edges)
    }

    pub fn degrees(&self) -> Vec<usize> {
        degrees(self.nodes.len(), &self.edges)
    }

    /// Single cycle through every node.
    pub fn is_cycle(&self) -> bool {
        self.nodes.len() >= 3
            && self.edges.len() == self.nodes.len()
            && self.degrees().iter().all(|&d| d == 2)
            && self.is_connected()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph flops {\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{}\";\n", label(n)));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                label(&self.nodes[u]),
                label(&self.nodes[v])
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "nodes": self.nodes, "edges": self.edges })
    }
}

/// Flag types adjacent to `f`: swap two neighbouring unequal entries.
fn flop_neighbours(f: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..f.len().saturating_sub(1))
        .filter(|&i| f[i] != f[i + 1])
        .map(|i| {
            let mut g = f.to_vec();
            g.swap(i, i + 1);
            g
        })
}

fn graph_from_nodes(nodes: Vec<Vec<usize>>) -> FlopGraph {
    let index: BTreeMap<&[usize], usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_slice(), i))
        .collect();
    let mut edges = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        for g in flop_neighbours(n) {
            let j = index[g.as_slice()];
            if i < j {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    FlopGraph { nodes, edges }
}

/// Distinct rearrangements of `items`, in decreasing lexicographic order.
pub fn distinct_rearrangements(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = items.to_vec();
    cur.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![cur.clone()];
    let m = cur.len();
    // previous permutation in lexicographic order; multiset aware
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] > cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] < cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn flop_graph(d: &Partition) -> Result<FlopGraph> {
    let a = ambient_columns(d)?;
    Ok(graph_from_nodes(distinct_rearrangements(&a)))
}

/// Chamber data of a slice: the factors with their flop graphs and the
/// product flop graph whose nodes are tuples of factor flag types. Chamber
/// sets are enumerated on request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceChambers {
    pub factors: Vec<SliceFactor>,
    pub factor_graphs: Vec<FlopGraph>,
    pub nodes: Vec<Vec<Vec<usize>>>,
    pub edges: Vec<(usize, usize)>,
}

impl SliceChambers {
    /// Number of chambers of factor `k`, `m!` for `m` columns.
    pub fn chamber_count(&self, k: usize) -> num_bigint::BigUint {
        (1..=self.factors[k].d.dual().parts().len() as u64).product()
    }

    /// Chamber set of factor `k`.
    pub fn chambers(&self, k: usize) -> Vec<Chamber> {
        enumerate_chambers(&self.factors[k].d).expect("factor ambients have several columns")
    }

    pub fn is_connected(&self) -> bool {
        connected(self.nodes.len(), &self.edges)
    }

    pub fn to_dot(&self) -> String {
        let name = |n: &Vec<Vec<usize>>| n.iter().map(|c| label(c)).collect::<Vec<_>>().join(" | ");
        let mut out = String::from("graph slice_flops {\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{}\";\n", name(n)));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                name(&self.nodes[u]),
                name(&self.nodes[v])
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors.iter().enumerate().map(|(k, f)| json!({
                "d": f.d,
                "dp": f.dp,
                "chambers": self.chambers(k).iter().map(Chamber::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "nodes": self.nodes,
            "edges": self.edges,
        })
    }
}

/// Product chamber structure of the slice, built from its factors.
pub fn slice_chambers(sp: &SlicePair) -> Result<SliceChambers> {
    let factors = if sp.d().is_single_column() {
        Vec::new()
    } else {
        decompose_quiver(sp)?
    };
    let graphs = factors
        .iter()
        .map(|f| flop_graph(&f.d))
        .collect::<Result<Vec<_>>>()?;

    // Cartesian product of the factor graphs; first factor varies slowest.
    let mut nodes: Vec<Vec<usize>> = vec![Vec::new()];
    for g in &graphs {
        nodes = nodes
            .into_iter()
            .flat_map(|t| {
                (0..g.nodes.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let index: BTreeMap<&[usize], usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_slice(), i))
        .collect();
    let mut edges = Vec::new();
    for (i, t) in nodes.iter().enumerate() {
        for (k, g) in graphs.iter().enumerate() {
            for &(u, v) in &g.edges {
                if t[k] == u {
                    let mut s = t.clone();
                    s[k] = v;
                    edges.push((i, index[s.as_slice()]));
                }
            }
        }
    }
    edges.sort_unstable();
    let labelled = nodes
        .iter()
        .map(|t| {
            t.iter()
                .zip(&graphs)
                .map(|(&i, g)| g.nodes[i].clone())
                .collect()
        })
        .collect();
    Ok(SliceChambers {
        factors,
        factor_graphs: graphs,
        nodes: labelled,
        edges,
    })
}

/// Formats a character for text output.
pub fn format_character(chi: &CharacterPoint) -> String {
    chi.0
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slices::make_slice_pair;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn figure_one_labels() {
        let cs = enumerate_chambers(&p("3,2,1")).unwrap();
        assert_eq!(cs.len(), 6);
        let labels: BTreeSet<Vec<usize>> = cs.iter().map(|c| c.flag_type.clone()).collect();
        let expected: BTreeSet<Vec<usize>> = [
            [3, 2, 1],
            [2, 3, 1],
            [2, 1, 3],
            [1, 2, 3],
            [1, 3, 2],
            [3, 1, 2],
        ]
        .iter()
        .map(|x| x.to_vec())
        .collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn chambers_for_small_cases() {
        let cs = enumerate_chambers(&p("2")).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.flag_type == vec![1, 1]));
        let cs = enumerate_chambers(&p("3,2")).unwrap();
        let labels: BTreeSet<_> = cs.iter().map(|c| c.flag_type.clone()).collect();
        assert_eq!((cs.len(), labels.len()), (6, 3));
        assert_eq!(
            enumerate_chambers(&p("1,1")).unwrap_err().kind(),
            "DegenerateAmbient"
        );
    }

    #[test]
    fn locate_examples() {
        let d = p("3,2,1");
        let Location::Chamber(c) = locate(&CharacterPoint::ones(2), &d).unwrap() else {
            panic!("ones is generic");
        };
        assert_eq!(c.perm, vec![1, 2, 3]);
        assert_eq!(c.flag_type, vec![3, 2, 1]);
        assert_eq!(
            locate(&CharacterPoint::from_i64(&[0, 0]), &d).unwrap(),
            Location::Wall
        );
        let Location::Chamber(c) = locate(&CharacterPoint::from_i64(&[-1, 3]), &d).unwrap() else {
            panic!("(-1,3) is generic");
        };
        assert_eq!(c.perm, vec![2, 1, 3]);
        assert_eq!(c.flag_type, vec![2, 3, 1]);
        // z = (1, 0, 0): the last two levels tie
        assert_eq!(
            locate(&CharacterPoint::from_i64(&[1, 0]), &d).unwrap(),
            Location::Wall
        );
        let err = locate(&CharacterPoint::from_i64(&[1]), &d).unwrap_err();
        assert_eq!(err.kind(), "DimensionMismatch");
    }

    #[test]
    fn interior_points_locate_back() {
        let d = p("4,2,2,1");
        for c in enumerate_chambers(&d).unwrap() {
            assert_eq!(
                locate(&c.interior_point(), &d).unwrap(),
                Location::Chamber(c)
            );
        }
    }

    #[test]
    fn flop_graph_examples() {
        let g = flop_graph(&p("3,2,1")).unwrap();
        assert_eq!(g.nodes.len(), 6);
        assert!(g.is_cycle());
        let g = flop_graph(&p("2")).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (1, 0));
        let g = flop_graph(&p("3,2")).unwrap();
        assert_eq!(g.nodes, vec![vec![2, 2, 1], vec![2, 1, 2], vec![1, 2, 2]]);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn dot_output() {
        let g = flop_graph(&p("3,2")).unwrap();
        assert_eq!(
            g.to_dot(),
            "graph flops {\n  \"2,2,1\";\n  \"2,1,2\";\n  \"1,2,2\";\n  \"2,2,1\" -- \"2,1,2\";\n  \"2,1,2\" -- \"1,2,2\";\n}\n"
        );
    }

    #[test]
    fn slice_chamber_products() {
        let sp = make_slice_pair(&p("4,4,4,2,2,1,1"), &p("5,4,3,3,2,1")).unwrap();
        let sc = slice_chambers(&sp).unwrap();
        assert_eq!(sc.nodes.len(), 12);
        // hexagon times an edge: 6 * 1 + 2 * 6 edges
        assert_eq!(sc.edges.len(), 18);
        assert!(sc.is_connected());
        let sp = make_slice_pair(&p("5,3,3,2"), &p("5,4,3,1")).unwrap();
        assert_eq!(slice_chambers(&sp).unwrap().nodes.len(), 3);
        let sp = make_slice_pair(&p("3,2"), &p("3,2")).unwrap();
        let sc = slice_chambers(&sp).unwrap();
        assert_eq!((sc.nodes.len(), sc.edges.len()), (1, 0));
    }

    #[test]
    fn rearrangements_are_distinct() {
        assert_eq!(distinct_rearrangements(&[2, 1, 2]).len(), 3);
        assert_eq!(distinct_rearrangements(&[1, 1]).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn character_parsing() {
        let c: CharacterPoint = "1,-1/2".parse().unwrap();
        assert_eq!(format_character(&c), "1/1,-1/2");
        assert!("1,x".parse::<CharacterPoint>().is_err());
    }
}
