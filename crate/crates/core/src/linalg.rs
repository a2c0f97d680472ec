//! Weighted graph Laplacians and a conjugate-gradient Dirichlet solver.
//!
//! Shared by the lattice harmonic solver, the discrete-modulus energy
//! computation, and the half-plane-capacity oracle grid.

/// Symmetric weighted graph stored as flat adjacency (CSR).
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Build from an undirected edge list; weights must be positive.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(a, b, _) in edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0f64; offsets[n]];
        let mut cursor = offsets.clone();
        for &(a, b, w) in edges {
            neighbors[cursor[a]] = b as u32;
            weights[cursor[a]] = w;
            cursor[a] += 1;
            neighbors[cursor[b]] = a as u32;
            weights[cursor[b]] = w;
            cursor[b] += 1;
        }
        WeightedGraph { offsets, neighbors, weights }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors_of(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&n, &w)| (n as usize, w))
    }

    /// Weighted degree of a vertex.
    pub fn strength(&self, v: usize) -> f64 {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.weights[r].iter().sum()
    }

    /// Solve the Dirichlet problem: Laplacian u = 0 on free vertices,
    /// u = `values[v]` wherever `fixed[v]`.
    ///
    /// Conjugate gradient with Jacobi preconditioning on the free block;
    /// `x0` supplies a warm start for the free values. Residual is driven to
    /// `tol` in the infinity norm of the Laplacian residual.
    pub fn solve_dirichlet(
        &self,
        fixed: &[bool],
        values: &[f64],
        x0: Option<&[f64]>,
        tol: f64,
    ) -> Vec<f64> {
        let n = self.len();
        assert_eq!(fixed.len(), n);
        assert_eq!(values.len(), n);
        let free: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
        let mut u = values.to_vec();
        if free.is_empty() {
            return u;
        }
        if let Some(x0) = x0 {
            for &v in &free {
                u[v] = x0[v];
            }
        }
        let idx_of = {
            let mut m = vec![usize::MAX; n];
            for (i, &v) in free.iter().enumerate() {
                m[v] = i;
            }
            m
        };
        let nf = free.len();
        // A x = b on the free block: A = D - W_ff, b = W_fb * u_b
        let diag: Vec<f64> = free.iter().map(|&v| self.strength(v)).collect();
        let mut b = vec![0f64; nf];
        for (i, &v) in free.iter().enumerate() {
            for (w, wt) in self.neighbors_of(v) {
                if fixed[w] {
                    b[i] += wt * values[w];
                }
            }
        }
        let apply = |x: &[f64], out: &mut [f64]| {
            for (i, &v) in free.iter().enumerate() {
                let mut acc = diag[i] * x[i];
                for (w, wt) in self.neighbors_of(v) {
                    let j = idx_of[w];
                    if j != usize::MAX {
                        acc -= wt * x[j];
                    }
                }
                out[i] = acc;
            }
        };
        let mut x: Vec<f64> = free.iter().map(|&v| u[v]).collect();
        let mut r = vec![0f64; nf];
        apply(&x, &mut r);
        for i in 0..nf {
            r[i] = b[i] - r[i];
        }
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut ap = vec![0f64; nf];
        let max_iter = 20 * nf + 200;
        for _ in 0..max_iter {
            let rinf = r.iter().fold(0f64, |m, &v| m.max(v.abs()));
            if rinf <= tol {
                break;
            }
            apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap.abs() < f64::MIN_POSITIVE {
                break;
            }
            let alpha = rz / pap;
            for i in 0..nf {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            for i in 0..nf {
                z[i] = r[i] / diag[i];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..nf {
                p[i] = z[i] + beta * p[i];
            }
        }
        for (i, &v) in free.iter().enumerate() {
            u[v] = x[i];
        }
        u
    }

    /// Dirichlet energy of a potential: sum over edges of w * (du)^2.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let mut e = 0.0;
        for v in 0..self.len() {
            for (w, wt) in self.neighbors_of(v) {
                if w > v {
                    let d = u[v] - u[w];
                    e += wt * d * d;
                }
            }
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corridor_is_linear() {
        // path graph 0-1-2-3-4, ends fixed to 1 and 0
        let edges: Vec<(usize, usize, f64)> = (0..4).map(|i| (i, i + 1, 1.0)).collect();
        let g = WeightedGraph::from_edges(5, &edges);
        let fixed = vec![true, false, false, false, true];
        let values = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        let u = g.solve_dirichlet(&fixed, &values, None, 1e-12);
        for (k, &ui) in u.iter().enumerate() {
            let expect = 1.0 - k as f64 / 4.0;
            assert!((ui - expect).abs() < 1e-10, "node {k}: {ui} vs {expect}");
        }
    }

    #[test]
    fn square_grid_matches_dense_solve() {
        // 4x4 grid with mixed boundary; compare CG against Gaussian
        // elimination on the same system.
        let n = 4;
        let id = |i: usize, j: usize| i * n + j;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i + 1 < n {
                    edges.push((id(i, j), id(i + 1, j), 1.0));
                }
                if j + 1 < n {
                    edges.push((id(i, j), id(i, j + 1), 1.0));
                }
            }
        }
        let g = WeightedGraph::from_edges(n * n, &edges);
        let mut fixed = vec![false; n * n];
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            fixed[id(i, 0)] = true;
            values[id(i, 0)] = 1.0;
            fixed[id(i, n - 1)] = true;
            values[id(i, n - 1)] = (i as f64) / 8.0;
        }
        let u = g.solve_dirichlet(&fixed, &values, None, 1e-12);

        // dense oracle
        let free: Vec<usize> = (0..n * n).filter(|&v| !fixed[v]).collect();
        let m = free.len();
        let mut a = vec![vec![0f64; m + 1]; m];
        for (r, &v) in free.iter().enumerate() {
            a[r][r] = g.strength(v);
            for (w, wt) in g.neighbors_of(v) {
                if let Some(c) = free.iter().position(|&f| f == w) {
                    a[r][c] -= wt;
                } else {
                    a[r][m] += wt * values[w];
                }
            }
        }
        // Gaussian elimination
        for col in 0..m {
            let piv = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
            a.swap(col, piv);
            let d = a[col][col];
            for k in col..=m {
                a[col][k] /= d;
            }
            for r in 0..m {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col];
                    for k in col..=m {
                        a[r][k] -= f * a[col][k];
                    }
                }
            }
        }
        for (r, &v) in free.iter().enumerate() {
            assert!((u[v] - a[r][m]).abs() < 1e-8, "node {v}");
        }
    }
}
