//! Graded Betti numbers of artinian quotients `S/I` via Koszul homology.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::inverse::InverseSystem;
use crate::linalg::Matrix;
use crate::poly::{DualPolynomial, PrimalPolynomial};
use crate::scalar::binomial_u64;

/// Largest number of variables accepted by [`koszul_betti`].
pub const MAX_KOSZUL_VARIABLES: usize = 5;

/// Sparse table `(i, j) ↦ β_{i,j}`; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), u64>,
}

#[derive(Serialize, Deserialize)]
struct Cell {
    i: usize,
    j: usize,
    b: u64,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(&(i, j), &b)| Cell { i, j, b }))
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut t = BettiTable::new();
        for c in Vec::<Cell>::deserialize(d)? {
            t.add(c.i, c.j, c.b);
        }
        Ok(t)
    }
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: usize, b: u64) {
        if b == 0 {
            return;
        }
        *self.entries.entry((i, j)).or_insert(0) += b;
    }

    pub fn set(&mut self, i: usize, j: usize, b: u64) {
        if b == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), b);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_i(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn max_j(&self) -> usize {
        self.entries.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Total Betti number `Σ_j β_{i,j}`.
    pub fn total(&self, i: usize) -> u64 {
        self.entries.iter().filter(|(&(a, _), _)| a == i).map(|(_, &b)| b).sum()
    }

    /// `Σ_i (−1)^i β_{i,j}` for each `j` up to the largest stored degree.
    pub fn euler_characteristic(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.max_j() + 1];
        for (i, j, b) in self.entries() {
            out[j] += if i % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        out
    }

    /// `β_{i,j} = β_{n−i, σ−j}`.
    pub fn is_self_dual(&self, n: usize, sigma: usize) -> bool {
        self.entries().all(|(i, j, b)| i <= n && j <= sigma && self.get(n - i, sigma - j) == b)
    }

    /// Cells where the two tables differ, as `(i, j, self, other)`.
    pub fn diff(&self, other: &BettiTable) -> Vec<(usize, usize, u64, u64)> {
        let mut keys: Vec<(usize, usize)> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(i, j)| {
                let (a, b) = (self.get(i, j), other.get(i, j));
                (a != b).then_some((i, j, a, b))
            })
            .collect()
    }

    /// Macaulay-style diagram: columns are homological degrees `i`, rows are
    /// the shifts `j − i`.
    pub fn diagram(&self) -> String {
        let cols = self.max_i() + 1;
        let rows = self.entries().map(|(i, j, _)| j - i).max().unwrap_or(0) + 1;
        let cell = |v: Option<u64>| v.map_or(".".to_string(), |b| b.to_string());
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend((0..cols).map(|i| i.to_string()));
        grid.push(header);
        let mut totals = vec!["total:".to_string()];
        totals.extend((0..cols).map(|i| self.total(i).to_string()));
        grid.push(totals);
        for r in 0..rows {
            let mut row = vec![format!("{r}:")];
            row.extend((0..cols).map(|i| {
                let b = self.get(i, i + r);
                cell((b != 0).then_some(b))
            }));
            grid.push(row);
        }
        let widths: Vec<usize> =
            (0..=cols).map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &grid {
            let line: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagram())
    }
}

/// Subsets of `{0..n}` of size `i`, lexicographic.
fn subsets(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, i: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == i {
            out.push(prefix.clone());
            return;
        }
        for v in start..n {
            prefix.push(v);
            rec(n, i, v + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, i, 0, &mut Vec::new(), &mut out);
    out
}

/// Rank of `∂_i : Λ^i ⊗ A_k → Λ^{i−1} ⊗ A_{k+1}`,
/// `e_S ⊗ a ↦ Σ_t (−1)^t e_{S∖s_t} ⊗ x_{s_t} a`.
fn koszul_rank(sys: &InverseSystem, mult: &[Vec<Matrix>], hf: &[usize], i: usize, k: usize) -> usize {
    let n = sys.n();
    if i == 0 || i > n {
        return 0;
    }
    let (src_dim, dst_dim) = (hf.get(k).copied().unwrap_or(0), hf.get(k + 1).copied().unwrap_or(0));
    if src_dim == 0 || dst_dim == 0 {
        return 0;
    }
    let sources = subsets(n, i);
    let targets = subsets(n, i - 1);
    let target_index: BTreeMap<&Vec<usize>, usize> = targets.iter().enumerate().map(|(p, s)| (s, p)).collect();
    let mut m = Matrix::zeros(targets.len() * dst_dim, sources.len() * src_dim);
    for (col_block, s) in sources.iter().enumerate() {
        for (t, &v) in s.iter().enumerate() {
            let mut rest = s.clone();
            rest.remove(t);
            let row_block = target_index[&rest];
            let block = &mult[k][v];
            for r in 0..dst_dim {
                for c in 0..src_dim {
                    let x = block.get(r, c);
                    if !x.is_zero() {
                        let x = if t % 2 == 0 { x.clone() } else { -x.clone() };
                        m.set(row_block * dst_dim + r, col_block * src_dim + c, x);
                    }
                }
            }
        }
    }
    m.rank()
}

/// `β_{i,j} = C(n,i) h_{j−i} − rank ∂_i − rank ∂_{i+1}` in internal degree `j`.
pub fn koszul_betti_of_system(sys: &InverseSystem) -> Result<BettiTable> {
    let n = sys.n();
    if n > MAX_KOSZUL_VARIABLES {
        return Err(Error::UnsupportedSize {
            n,
            reason: format!("Koszul homology is limited to n <= {MAX_KOSZUL_VARIABLES}"),
        });
    }
    let hf = sys.hilbert_function();
    let mult: Vec<Vec<Matrix>> =
        (0..hf.len()).map(|k| (0..n).map(|v| sys.multiplication_matrix(k, v)).collect()).collect();
    let mut ranks = BTreeMap::new();
    let mut rank =
        |i: usize, k: usize| -> usize { *ranks.entry((i, k)).or_insert_with(|| koszul_rank(sys, &mult, &hf, i, k)) };
    let mut table = BettiTable::new();
    for i in 0..=n {
        for (k, &h) in hf.iter().enumerate() {
            let chains = binomial_u64(n as i64, i as i64) as usize * h;
            if chains == 0 {
                continue;
            }
            let incoming = if k == 0 { 0 } else { rank(i + 1, k - 1) };
            let b = chains - rank(i, k) - incoming;
            table.set(i, i + k, b as u64);
        }
    }
    Ok(table)
}

/// Betti table of `S/ann(F)`.
pub fn koszul_betti(f: &DualPolynomial) -> Result<BettiTable> {
    if f.n() > MAX_KOSZUL_VARIABLES {
        return Err(Error::UnsupportedSize {
            n: f.n(),
            reason: format!("Koszul homology is limited to n <= {MAX_KOSZUL_VARIABLES}"),
        });
    }
    koszul_betti_of_system(&InverseSystem::of_form(f)?)
}

/// Betti table of `S/I` for an artinian ideal given by generators.
pub fn koszul_betti_of_ideal(n: usize, generators: &[PrimalPolynomial]) -> Result<BettiTable> {
    if n > MAX_KOSZUL_VARIABLES {
        return Err(Error::UnsupportedSize {
            n,
            reason: format!("Koszul homology is limited to n <= {MAX_KOSZUL_VARIABLES}"),
        });
    }
    koszul_betti_of_system(&InverseSystem::of_ideal(n, generators)?)
}

/// Coefficients of `(1 − t)^n Σ_k h_k t^k`.
pub fn hilbert_numerator(n: usize, hf: &[usize]) -> Vec<i64> {
    let mut out = vec![0i64; hf.len() + n];
    for (k, &h) in hf.iter().enumerate() {
        for s in 0..=n {
            let c = binomial_u64(n as i64, s as i64) as i64;
            out[k + s] += if s % 2 == 0 { c } else { -c } * h as i64;
        }
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}
