//! Independent check of the decimation sets: assemble `-Δ_m` on the level-`m`
//! gasket graph and diagonalize it with a dense Jacobi solver in `f64`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{self, BoundaryCondition};

/// Largest level accepted by [`cross_check`].
pub const ORACLE_LEVEL_CAP: usize = 5;

/// Jacobi sweep cap.
pub const MAX_SWEEPS: usize = 100;

/// Level-`m` graph approximation. Vertices are points `a·e1 + b·e2` of the
/// triangular lattice with `0 ≤ a, b` and `a + b ≤ 2^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GasketGraph {
    pub level: usize,
    pub vertices: Vec<(u64, u64)>,
    pub edges: Vec<(usize, usize)>,
    /// Ids of the three corners.
    pub boundary: [usize; 3],
}

/// Lower-left corners of the `3^m` smallest triangles.
fn cells(m: usize) -> Vec<(u64, u64)> {
    let mut acc = vec![(0, 0)];
    for depth in 0..m {
        let side = 1u64 << depth;
        acc = [(0, 0), (side, 0), (0, side)]
            .iter()
            .flat_map(|&(dx, dy)| acc.iter().map(move |&(a, b)| (a + dx, b + dy)))
            .collect();
    }
    acc
}

impl GasketGraph {
    /// Three copies of level `m - 1` glued at their corners, built directly
    /// from the smallest triangles.
    pub fn build(m: usize) -> Self {
        let n = 1u64 << m;
        let mut ids: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let triangles = cells(m);
        for &(a, b) in &triangles {
            for p in [(a, b), (a + 1, b), (a, b + 1)] {
                ids.entry(p).or_insert(0);
            }
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let mut edges: Vec<(usize, usize)> = triangles
            .iter()
            .flat_map(|&(a, b)| {
                let (p, q, r) = (ids[&(a, b)], ids[&(a + 1, b)], ids[&(a, b + 1)]);
                [(p, q), (p, r), (q, r)]
            })
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        Self {
            level: m,
            boundary: [ids[&(0, 0)], ids[&(n, 0)], ids[&(0, n)]],
            vertices: ids.into_keys().collect(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.contains(&v)
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbours().iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.neighbours();
        let mut seen = vec![false; adj.len()];
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

    /// `# level m, vertices n` followed by one `u v` line per edge.
    pub fn edge_list(&self) -> String {
        let mut out = format!("# level {}, vertices {}\n", self.level, self.vertex_count());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut a = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            a.set(i, i, x);
        }
        a
    }

    /// Checks symmetry exactly.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        let a = Self {
            n,
            data: rows.into_iter().flatten().collect(),
        };
        for i in 0..n {
            for j in 0..i {
                if a.get(i, j) != a.get(j, i) {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(a)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
        self.data[j * self.n + i] = x;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    /// `P^T A P` for the permutation `perm` (new index `i` is old `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[i * self.n + j] = self.get(perm[i], perm[j]);
            }
        }
        out
    }

    /// Rows as space-separated values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.get(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// `-Δ_m` with boundary coefficient `c = 2` for Neumann, row by row; rows sum
/// to zero. Not symmetric: boundary rows are doubled.
pub fn neumann_operator(g: &GasketGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut rows = vec![vec![0.0; n]; n];
    for (u, nb) in g.neighbours().iter().enumerate() {
        let c = if g.is_boundary(u) { 2.0 } else { 1.0 };
        rows[u][u] = c * nb.len() as f64;
        for &v in nb {
            rows[u][v] -= c;
        }
    }
    rows
}

/// `-Δ_m` as a symmetric matrix.
///
/// Dirichlet: rows and columns of the corners removed. Neumann: the operator
/// `C K` of [`neumann_operator`] is similar to `C^{1/2} K C^{1/2}`, which is
/// what is returned.
pub fn laplacian_matrix(g: &GasketGraph, bc: BoundaryCondition) -> SymmetricMatrix {
    let adj = g.neighbours();
    match bc {
        BoundaryCondition::Dirichlet => {
            let interior: Vec<usize> = (0..g.vertex_count()).filter(|&v| !g.is_boundary(v)).collect();
            let index: BTreeMap<usize, usize> =
                interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let mut a = SymmetricMatrix::zeros(interior.len());
            for (i, &u) in interior.iter().enumerate() {
                a.set(i, i, adj[u].len() as f64);
                for v in &adj[u] {
                    if let Some(&j) = index.get(v) {
                        a.set(i, j, -1.0);
                    }
                }
            }
            a
        }
        BoundaryCondition::Neumann => {
            let c: Vec<f64> = (0..g.vertex_count())
                .map(|v| if g.is_boundary(v) { 2.0 } else { 1.0 })
                .collect();
            let mut a = SymmetricMatrix::zeros(g.vertex_count());
            for (u, nb) in adj.iter().enumerate() {
                a.set(u, u, c[u] * nb.len() as f64);
                for &v in nb {
                    a.set(u, v, -(c[u] * c[v]).sqrt());
                }
            }
            a
        }
    }
}

/// All eigenvalues, increasing, by cyclic Jacobi rotations until the
/// off-diagonal norm falls below `tol · ‖A‖_F`.
pub fn dense_eigenvalues(a: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = a.dimension();
    let mut m = a.clone();
    let threshold = tol * a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = m.off_diagonal_norm() <= threshold;
    // Entries below this are left alone; their total stays under `threshold`.
    let skip = threshold / n.max(1) as f64;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        for p in 0..n {
            for q in p + 1..n {
                if m.get(p, q).abs() > skip {
                    rotate(&mut m, p, q);
                }
            }
        }
        sweeps += 1;
        converged = m.off_diagonal_norm() <= threshold;
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Annihilates `(p, q)` with one Jacobi rotation.
fn rotate(m: &mut SymmetricMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    if apq == 0.0 {
        return;
    }
    let n = m.n;
    let app = m.get(p, p);
    let aqq = m.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, c * akp - s * akq);
        m.set(k, q, s * akp + c * akq);
    }
    m.set(p, p, app - t * apq);
    m.set(q, q, aqq + t * apq);
    m.set(p, q, 0.0);
}

/// One distinct oracle eigenvalue and the decimation value nearest to it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleMatch {
    pub oracle: f64,
    pub multiplicity: usize,
    pub decimation: f64,
    pub descriptor: String,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub level: usize,
    pub bc: BoundaryCondition,
    pub dimension: usize,
    pub hausdorff: f64,
    pub matches: Vec<OracleMatch>,
}

/// Groups sorted values closer than `gap` and returns `(mean, count)`.
pub fn cluster(sorted: &[f64], gap: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((sum, count, last)) if x - *last <= gap => {
                *sum += x;
                *count += 1;
                *last = x;
            }
            _ => out.push((x, 1, x)),
        }
    }
    out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
}

/// Compares the distinct eigenvalues of the level-`m` matrix with the
/// decimation set `A_m`; fails with [`Error::Mismatch`] if their Hausdorff
/// distance exceeds `tol`.
pub fn cross_check(m: usize, bc: BoundaryCondition, tol: f64) -> Result<CrossCheck> {
    if m > ORACLE_LEVEL_CAP {
        return Err(Error::InvalidParameter(format!(
            "oracle level {m} is above the cap {ORACLE_LEVEL_CAP}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} is not positive")));
    }
    let decimation = spectra::level(bc, m, crate::scalar::DEFAULT_PRECISION)?;
    let targets: Vec<(f64, String)> = decimation
        .entries
        .iter()
        .map(|e| (e.value.to_f64(), e.descriptor.to_string()))
        .collect();
    let g = GasketGraph::build(m);
    let a = laplacian_matrix(&g, bc);
    let eig = dense_eigenvalues(&a, 1e-14)?;
    let distinct = cluster(&eig, 1e-6);
    let nearest = |x: f64| {
        targets
            .iter()
            .map(|(t, d)| ((x - t).abs(), *t, d))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("decimation set is not empty")
    };
    let matches: Vec<OracleMatch> = distinct
        .iter()
        .map(|&(x, mult)| {
            let (distance, t, d) = nearest(x);
            OracleMatch {
                oracle: x,
                multiplicity: mult,
                decimation: t,
                descriptor: d.clone(),
                distance,
            }
        })
        .collect();
    let forward = matches.iter().map(|r| r.distance).fold(0.0, f64::max);
    let mut backward = 0.0f64;
    for (t, d) in &targets {
        let dist = distinct
            .iter()
            .map(|(x, _)| (x - t).abs())
            .fold(f64::INFINITY, f64::min);
        if dist > tol {
            return Err(Error::Mismatch(format!(
                "decimation value {t} ({d}) has no oracle eigenvalue within {tol}"
            )));
        }
        backward = backward.max(dist);
    }
    if let Some(r) = matches.iter().find(|r| r.distance > tol) {
        return Err(Error::Mismatch(format!(
            "oracle eigenvalue {} is {} away from the decimation set",
            r.oracle, r.distance
        )));
    }
    Ok(CrossCheck {
        level: m,
        bc,
        dimension: a.dimension(),
        hausdorff: forward.max(backward),
        matches,
    })
}
