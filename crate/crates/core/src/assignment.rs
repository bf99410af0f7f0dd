//! Dense linear assignment by shortest augmenting paths.
//!
//! Rows are added one at a time; each addition runs a Dijkstra-like search
//! over reduced costs and augments along the cheapest path found, keeping
//! row and column potentials feasible throughout. O(n³) time, O(n) extra
//! space beyond the cost matrix.

use crate::error::{Error, Result};

/// Row-major square cost matrix.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "cost matrix of size {n} needs {} entries, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cost matrix contains non-finite entries"));
        }
        Ok(CostMatrix { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self::new(n, values)
    }

    /// Squared Euclidean distances between `rows` and `cols`, both flat
    /// row-major arrays of `dim`-vectors.
    pub fn squared_euclidean(rows: &[f64], cols: &[f64], dim: usize) -> Result<Self> {
        if dim == 0 || !rows.len().is_multiple_of(dim) || rows.len() != cols.len() {
            return Err(Error::invalid("point arrays disagree in size"));
        }
        let n = rows.len() / dim;
        Self::from_fn(n, |i, j| {
            let a = &rows[i * dim..(i + 1) * dim];
            let b = &cols[j * dim..(j + 1) * dim];
            a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n + col]
    }

    /// `Σ_i cost[i][assignment[i]]`, summed in row order.
    pub fn total(&self, assignment: &[usize]) -> f64 {
        assignment.iter().enumerate().map(|(i, &j)| self.get(i, j)).sum()
    }
}

/// Minimum-cost perfect matching; `result[row] = col`.
///
/// Among equally cheap columns the search always settles the lowest index
/// first, so the output is deterministic for a given matrix.
pub fn solve(cost: &CostMatrix) -> Vec<usize> {
    let n = cost.n;
    if n == 0 {
        return Vec::new();
    }
    // 1-based internally; column 0 is the virtual source of each search.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        min_slack.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            let row_cost = &cost.values[(i0 - 1) * n..i0 * n];
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = row_cost[j - 1] - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = col0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}
