//! Exact-law validation of the samplers on tiny domains, against
//! independently coded oracles: full coloring enumeration (percolation),
//! the harmonic-explorer branching tree, the Green's-function formula for
//! loop-erased walks, the FK partition function, and the matrix-tree
//! count for spanning trees.

use loewner_lab::lattice::{MedialDomain, SquareDomain, TriDomain, TriFace, UnionFind};
use loewner_lab::models::{
    self, explore_from, explore_interface, sample_percolation, ColorOracle, HarmonicOracle,
    HashColorOracle,
};
use loewner_lab::rng::job_rng;
use std::collections::HashMap;

// ---------------------------------------------------------------- helpers

/// Oracle that reads colors from a fixed map (for coloring enumeration).
struct FixedColors<'m>(&'m HashMap<(i32, i32), bool>);
impl ColorOracle for FixedColors<'_> {
    fn color(&mut self, site: (i32, i32)) -> loewner_lab::Result<bool> {
        Ok(self.0[&site])
    }
    fn revealed(&self) -> Vec<((i32, i32), bool)> {
        Vec::new()
    }
}

fn face_key(faces: &[TriFace]) -> String {
    faces
        .iter()
        .map(|f| format!("{},{},{}", f.x, f.y, if f.up { "u" } else { "d" }))
        .collect::<Vec<_>>()
        .join(";")
}

fn total_variation(p: &HashMap<String, f64>, q: &HashMap<String, f64>) -> f64 {
    let keys: std::collections::HashSet<&String> = p.keys().chain(q.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

// ------------------------------------------------------------ percolation

/// Exact interface distribution of the 3-hexagon domain by enumerating all
/// 2^3 colorings.
fn percolation_exact_3hex() -> HashMap<String, f64> {
    let domain = TriDomain::rhombus(3, 1);
    let sites: Vec<(i32, i32)> = {
        let mut v: Vec<_> = domain.interior.iter().copied().collect();
        v.sort_unstable();
        v
    };
    assert_eq!(sites.len(), 3);
    let mut dist = HashMap::new();
    for mask in 0..(1u32 << sites.len()) {
        let colors: HashMap<(i32, i32), bool> = sites
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, mask >> i & 1 == 1))
            .collect();
        let mut oracle = FixedColors(&colors);
        let faces = explore_interface(&domain, &mut oracle).unwrap();
        *dist.entry(face_key(&faces)).or_insert(0.0) += 1.0 / (1 << sites.len()) as f64;
    }
    dist
}

#[test]
fn percolation_matches_exhaustive_enumeration() {
    let domain = TriDomain::rhombus(3, 1);
    let exact = percolation_exact_3hex();
    let n = 10_000u64;
    let mut emp: HashMap<String, f64> = HashMap::new();
    for seed in 0..n {
        let mut oracle = HashColorOracle::new(seed, 0.5);
        let faces = explore_interface(&domain, &mut oracle).unwrap();
        *emp.entry(face_key(&faces)).or_insert(0.0) += 1.0 / n as f64;
    }
    let tv = total_variation(&exact, &emp);
    assert!(tv < 0.02, "interface law TV {tv}");
}

#[test]
fn percolation_forced_corridor() {
    let domain = TriDomain::rhombus(6, 0);
    let c1 = sample_percolation(&domain, 0.5, 1).unwrap();
    let c2 = sample_percolation(&domain, 0.5, 999).unwrap();
    assert_eq!(c1.points(), c2.points(), "corridor interface must be forced");
}

#[test]
fn percolation_interfaces_are_simple_and_chordal() {
    let domain = TriDomain::rhombus(10, 10);
    for seed in 0..8 {
        let c = sample_percolation(&domain, 0.5, seed).unwrap();
        assert!(c.is_simple(), "seed {seed}");
        assert!(c.first().dist(&domain.a_point()) < 1e-9);
        assert!(c.last().dist(&domain.b_point()) < 1e-9);
        // stays inside the embedded domain hull
        for p in c.points() {
            assert!(p.x > -2.0 && p.x < 17.0 && p.y > -1.0 && p.y < 10.0, "escapee {p:?}");
        }
    }
}

#[test]
fn harmonic_explorer_interfaces_are_simple_and_deterministic() {
    let domain = TriDomain::rhombus(8, 8);
    for seed in 0..4 {
        let c = models::sample(&models::ModelSpec::new(
            models::ModelTag::HarmonicExplorer,
            loewner_lab::lattice::DiscreteDomain::Triangular(domain.clone()),
            seed,
        ))
        .unwrap();
        assert!(c.is_simple(), "seed {seed}");
        assert!(c.first().dist(&domain.a_point()) < 1e-9);
        assert!(c.last().dist(&domain.b_point()) < 1e-9);
    }
    let c1 = models::sample_harmonic_explorer(&domain, 5).unwrap();
    let c2 = models::sample_harmonic_explorer(&domain, 5).unwrap();
    assert_eq!(c1, c2, "same seed must give byte-identical curves");
}

/// Left-right crossing probability of the symmetric rhombus is exactly 1/2
/// at p = 1/2: open LR crossings and closed TB crossings are complementary
/// (self-matching of the triangular lattice), and color swap + the (x,y)
/// -> (y,x) automorphism exchanges them.
fn rhombus_lr_crossing(n: i32, colors: &dyn Fn((i32, i32)) -> bool) -> bool {
    let id = |x: i32, y: i32| (y * n + x) as usize;
    let mut uf = UnionFind::new((n * n) as usize + 2);
    let (left, right) = ((n * n) as usize, (n * n) as usize + 1);
    for x in 0..n {
        for y in 0..n {
            if !colors((x, y)) {
                continue;
            }
            if x == 0 {
                uf.union(id(x, y), left);
            }
            if x == n - 1 {
                uf.union(id(x, y), right);
            }
            for d in [(1, 0), (0, 1), (1, -1)] {
                let (tx, ty) = (x + d.0, y + d.1);
                if tx >= 0 && tx < n && ty >= 0 && ty < n && colors((tx, ty)) {
                    uf.union(id(x, y), id(tx, ty));
                }
            }
        }
    }
    uf.connected(left, right)
}

#[test]
fn rhombus_crossing_probability_is_half_exact() {
    // exhaustive over all 2^(4x4) colorings
    let n = 4;
    let cells = (n * n) as u32;
    let mut hits = 0u64;
    for mask in 0u64..(1 << cells) {
        let colors = |s: (i32, i32)| mask >> (s.1 * n + s.0) & 1 == 1;
        if rhombus_lr_crossing(n, &colors) {
            hits += 1;
        }
    }
    assert_eq!(2 * hits, 1 << cells, "exact crossing probability must be 1/2");
}

#[test]
fn rhombus_crossing_frequency_is_half_monte_carlo() {
    let n = 16;
    let trials = 10_000;
    let mut hits = 0u64;
    for seed in 0..trials {
        let colors = |s: (i32, i32)| models::site_color(seed, s, 0.5);
        if rhombus_lr_crossing(n, &colors) {
            hits += 1;
        }
    }
    let freq = hits as f64 / trials as f64;
    let sigma = (0.25f64 / trials as f64).sqrt();
    assert!((freq - 0.5).abs() < 3.0 * sigma, "freq {freq}, 3 sigma {}", 3.0 * sigma);
}

// ---------------------------------------------------- domain Markov echo

/// Conditional suffix law after k steps computed two ways: conditioning
/// the full-domain enumeration on the observed prefix, and restarting in
/// the slit domain with the revealed colors pinned.
#[test]
fn percolation_domain_markov_restart() {
    let domain = TriDomain::rhombus(3, 1);
    let sites: Vec<(i32, i32)> = {
        let mut v: Vec<_> = domain.interior.iter().copied().collect();
        v.sort_unstable();
        v
    };
    // observe the prefix of k steps under a reference coloring
    let reference: HashMap<(i32, i32), bool> =
        sites.iter().map(|&s| (s, models::site_color(424242, s, 0.5))).collect();
    let mut oracle = HashColorOracle::new(424242, 0.5);
    let full = explore_from(&domain, domain.entry(), &mut oracle).unwrap();
    let k = full.len() / 2;
    let prefix = &full[..k];
    let revealed: Vec<((i32, i32), bool)> = prefix.iter().filter_map(|s| s.query).collect();
    let restart_edge = full[k].entered_by;

    // (a) conditional law from full enumeration
    let mut cond: HashMap<String, f64> = HashMap::new();
    let mut weight = 0.0;
    for mask in 0..(1u32 << sites.len()) {
        let colors: HashMap<(i32, i32), bool> = sites
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, mask >> i & 1 == 1))
            .collect();
        if revealed.iter().any(|&(s, c)| colors[&s] != c) {
            continue;
        }
        let mut o = FixedColors(&colors);
        let run = explore_from(&domain, domain.entry(), &mut o).unwrap();
        let suffix: Vec<TriFace> = run[k..].iter().map(|s| s.face).collect();
        *cond.entry(face_key(&suffix)).or_insert(0.0) += 1.0;
        weight += 1.0;
    }
    for v in cond.values_mut() {
        *v /= weight;
    }

    // (b) restart-resampling in the slit domain
    let mut restart: HashMap<String, f64> = HashMap::new();
    let mut weight_b = 0.0;
    let free: Vec<(i32, i32)> = sites
        .iter()
        .copied()
        .filter(|s| !revealed.iter().any(|&(r, _)| r == *s))
        .collect();
    for mask in 0..(1u32 << free.len()) {
        let mut colors: HashMap<(i32, i32), bool> = revealed.iter().copied().collect();
        for (i, &s) in free.iter().enumerate() {
            colors.insert(s, mask >> i & 1 == 1);
        }
        let mut o = FixedColors(&colors);
        let run = explore_from(&domain, restart_edge, &mut o).unwrap();
        let suffix: Vec<TriFace> = run.iter().map(|s| s.face).collect();
        *restart.entry(face_key(&suffix)).or_insert(0.0) += 1.0;
        weight_b += 1.0;
    }
    for v in restart.values_mut() {
        *v /= weight_b;
    }
    let tv = total_variation(&cond, &restart);
    assert!(tv < 0.03, "domain Markov TV {tv}");
    let _ = reference;
}

/// The harmonic explorer has the domain Markov property by construction:
/// the suffix law in the slit domain (committed pivots pinned) equals the
/// conditional law of the full run. Both sides enumerated exactly over the
/// branching tree of coin outcomes.
#[test]
fn harmonic_explorer_domain_markov_restart() {
    let domain = TriDomain::rhombus(3, 1);

    // enumerate the HE path measure from a given start state
    fn he_tree(
        domain: &TriDomain,
        entry: loewner_lab::lattice::HexEdge,
        committed: Vec<((i32, i32), bool)>,
        acc: f64,
        out: &mut HashMap<String, f64>,
        prefix: Vec<TriFace>,
    ) {
        // step the walk manually until the next interior query
        let mut edge = entry;
        let mut faces = prefix;
        loop {
            let face = edge.to;
            if domain.is_exit_face(face) {
                *out.entry(face_key(&faces)).or_insert(0.0) += acc;
                return;
            }
            faces.push(face);
            let shared = shared_edge_of(edge.from, face);
            let w = face.third_corner(shared);
            let color = domain
                .fixed_color(w)
                .or_else(|| committed.iter().find(|&&(s, _)| s == w).map(|&(_, c)| c));
            match color {
                Some(c) => {
                    edge = step(domain, edge, face, shared, w, c);
                }
                None => {
                    let mut oracle = HarmonicOracle::with_committed(domain, &committed, job_rng(0, 0));
                    let p = oracle.step_probability(w).unwrap();
                    for (c, pr) in [(true, p), (false, 1.0 - p)] {
                        if pr <= 0.0 {
                            continue;
                        }
                        let mut committed2 = committed.clone();
                        committed2.push((w, c));
                        let next = step(domain, edge, face, shared, w, c);
                        he_tree(domain, next, committed2, acc * pr, out, faces.clone());
                    }
                    return;
                }
            }
        }
    }

    fn shared_edge_of(from: TriFace, to: TriFace) -> ((i32, i32), (i32, i32)) {
        from.neighbors()
            .into_iter()
            .find(|&(f, _)| f == to)
            .map(|(_, e)| e)
            .expect("not adjacent")
    }

    fn step(
        domain: &TriDomain,
        edge: loewner_lab::lattice::HexEdge,
        face: TriFace,
        shared: ((i32, i32), (i32, i32)),
        w: (i32, i32),
        color: bool,
    ) -> loewner_lab::lattice::HexEdge {
        let _ = domain;
        // replicate the open-left orientation rule
        let dir_from = edge.from.center();
        let dir_to = face.center();
        let dirx = dir_to.x - dir_from.x;
        let diry = dir_to.y - dir_from.y;
        let p1 = loewner_lab::lattice::triangular::embed(shared.0 .0, shared.0 .1);
        let cross1 = dirx * (p1.y - dir_from.y) - diry * (p1.x - dir_from.x);
        let (s_left, s_right) = if cross1 > 0.0 { (shared.0, shared.1) } else { (shared.1, shared.0) };
        let sites = if color { (w, s_right) } else { (s_left, w) };
        loewner_lab::lattice::HexEdge { from: face, to: face.across(sites) }
    }

    // full-run law
    let mut full_law = HashMap::new();
    he_tree(&domain, domain.entry(), Vec::new(), 1.0, &mut full_law, Vec::new());
    let total: f64 = full_law.values().sum();
    assert!((total - 1.0).abs() < 1e-9, "HE tree measure sums to {total}");

    // pick a prefix with positive probability: follow the maximum-probability
    // branch for two queries
    let mut oracle = HarmonicOracle::new(&domain, job_rng(7, 0));
    let run = explore_from(&domain, domain.entry(), &mut oracle).unwrap();
    let k = run.len().min(2);
    let prefix: Vec<TriFace> = run[..k].iter().map(|s| s.face).collect();
    let committed: Vec<((i32, i32), bool)> = run[..k].iter().filter_map(|s| s.query).collect();
    let restart_edge = if k < run.len() {
        run[k].entered_by
    } else {
        return; // walk finished before two queries; nothing to compare
    };

    // conditional from the full law
    let prefix_key = face_key(&prefix);
    let mut cond: HashMap<String, f64> = HashMap::new();
    let mut mass = 0.0;
    for (key, pr) in &full_law {
        if key.starts_with(&prefix_key) {
            let suffix = key[prefix_key.len()..].trim_start_matches(';').to_string();
            *cond.entry(suffix).or_insert(0.0) += pr;
            mass += pr;
        }
    }
    for v in cond.values_mut() {
        *v /= mass;
    }

    // restart law in the slit domain
    let mut restart = HashMap::new();
    he_tree(&domain, restart_edge, committed, 1.0, &mut restart, Vec::new());

    let tv = total_variation(&cond, &restart);
    assert!(tv < 0.03, "HE domain Markov TV {tv}");
}

// ------------------------------------------------------------------- LERW

/// Green's-function formula for the loop-erased path law, with a dense
/// little solver independent of the library's CG.
mod lerw_oracle {
    use std::collections::HashMap;

    /// Solve A x = b by Gaussian elimination.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            let d = a[col][col];
            for k in col..n {
                a[col][k] /= d;
            }
            b[col] /= d;
            for r in 0..n {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col];
                    for k in col..n {
                        a[r][k] -= f * a[col][k];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        b
    }

    /// P_y(hit x before exiting `alive`), for SRW on Z^2 killed outside.
    fn hit_before_exit(
        alive: &[(i32, i32)],
        x: (i32, i32),
        y: (i32, i32),
    ) -> f64 {
        if y == x {
            return 1.0;
        }
        let others: Vec<(i32, i32)> = alive.iter().copied().filter(|&s| s != x).collect();
        let idx: HashMap<(i32, i32), usize> =
            others.iter().copied().enumerate().map(|(i, s)| (s, i)).collect();
        let n = others.len();
        let mut a = vec![vec![0f64; n]; n];
        let mut b = vec![0f64; n];
        for (r, &s) in others.iter().enumerate() {
            a[r][r] = 1.0;
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let t = (s.0 + d.0, s.1 + d.1);
                if t == x {
                    b[r] += 0.25;
                } else if let Some(&c) = idx.get(&t) {
                    a[r][c] -= 0.25;
                }
            }
        }
        let u = dense_solve(a, b);
        idx.get(&y).map(|&i| u[i]).unwrap_or(0.0)
    }

    /// G_B(x, x) = 1 / P_x(no return to x before exiting B).
    fn green_diag(alive: &[(i32, i32)], x: (i32, i32)) -> f64 {
        let mut ret = 0.0;
        for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let t = (x.0 + d.0, x.1 + d.1);
            if alive.contains(&t) {
                ret += 0.25 * hit_before_exit(alive, x, t);
            }
        }
        1.0 / (1.0 - ret)
    }

    /// Probability that the loop erasure of the conditioned walk equals the
    /// self-avoiding path a -> eta_1 -> ... -> b.
    pub fn lerw_path_probability(
        interior: &[(i32, i32)],
        a_nbrs: &[(i32, i32)],
        path: &[(i32, i32)],
        b: (i32, i32),
        p_exit_b: f64,
    ) -> f64 {
        // path = [x1, ..., x_{k-1}] interior, then b
        let mut alive: Vec<(i32, i32)> = interior.to_vec();
        let mut p = 1.0 / a_nbrs.len() as f64; // conditioned first step
        for (i, &x) in path.iter().enumerate() {
            p *= green_diag(&alive, x);
            let next = if i + 1 < path.len() { path[i + 1] } else { b };
            let dx = (next.0 - x.0).abs() + (next.1 - x.1).abs();
            assert_eq!(dx, 1, "path not nearest-neighbor");
            p *= 0.25;
            alive.retain(|&s| s != x);
        }
        p / p_exit_b
    }
}

#[test]
fn lerw_matches_greens_function_oracle() {
    // 3x3 interior: box of vertices [0,4]^2, a = (2,0), b = (2,4)
    let domain = SquareDomain::box_domain(4, 4, (2, 0), (2, 4)).unwrap();
    let interior: Vec<(i32, i32)> = (1..4)
        .flat_map(|x| (1..4).map(move |y| (x, y)))
        .collect();
    let a = (2, 0);
    let b = (2, 4);
    let a_nbrs = vec![(2, 1)];

    // all self-avoiding paths from a's interior neighbor set to b
    fn saws(
        at: (i32, i32),
        b_adj: (i32, i32),
        interior: &[(i32, i32)],
        used: &mut Vec<(i32, i32)>,
        out: &mut Vec<Vec<(i32, i32)>>,
    ) {
        used.push(at);
        if at == b_adj {
            out.push(used.clone());
        } else {
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let t = (at.0 + d.0, at.1 + d.1);
                if interior.contains(&t) && !used.contains(&t) {
                    saws(t, b_adj, interior, used, out);
                }
            }
        }
        used.pop();
    }
    let mut paths = Vec::new();
    saws((2, 1), (2, 3), &interior, &mut Vec::new(), &mut paths);

    // exit probability at b for the conditioned-start walk
    let g = domain.site_graph();
    let h = loewner_lab::models::target_harmonic(&domain).unwrap();
    let p_exit_b = h[g.site((2, 1)).unwrap()];

    let mut exact: HashMap<String, f64> = HashMap::new();
    for path in &paths {
        let pr = lerw_oracle::lerw_path_probability(&interior, &a_nbrs, path, b, p_exit_b);
        let mut key_pts = vec![a];
        key_pts.extend(path.iter().copied());
        key_pts.push(b);
        let key = key_pts
            .iter()
            .map(|&(x, y)| format!("{x},{y}"))
            .collect::<Vec<_>>()
            .join(";");
        exact.insert(key, pr);
    }
    let mass: f64 = exact.values().sum();
    assert!((mass - 1.0).abs() < 1e-8, "oracle path measure sums to {mass}");

    let n = 20_000u64;
    let mut emp: HashMap<String, f64> = HashMap::new();
    for seed in 0..n {
        let c = models::sample(&models::ModelSpec::new(
            models::ModelTag::Lerw,
            loewner_lab::lattice::DiscreteDomain::Square(domain.clone()),
            seed,
        ))
        .unwrap();
        let key = c
            .points()
            .iter()
            .map(|p| format!("{},{}", p.x as i64, p.y as i64))
            .collect::<Vec<_>>()
            .join(";");
        *emp.entry(key).or_insert(0.0) += 1.0 / n as f64;
    }
    let tv = total_variation(&exact, &emp);
    assert!(tv < 0.02, "LERW law TV {tv}");
}

// --------------------------------------------------------------------- FK

#[test]
fn fk_2x2_stationary_law_matches_enumeration() {
    let domain = MedialDomain::rectangle(2, 2).unwrap();
    let primal = domain.primal_edge_list();
    let ids: Vec<usize> = primal.iter().map(|&(i, _)| i).collect();
    let edges: Vec<(usize, usize)> = primal.iter().map(|&(_, e)| e).collect();
    let wired: Vec<usize> = domain
        .wired_edges
        .iter()
        .map(|g| ids.iter().position(|x| x == g).unwrap())
        .collect();
    let free: Vec<usize> = (0..edges.len()).filter(|e| !wired.contains(e)).collect();
    let (p, q) = (loewner_lab::models::p_self_dual(2.0), 2.0);

    // exact measure over the free-edge hypercube
    let mut weights = Vec::with_capacity(1 << free.len());
    let mut total = 0.0;
    for mask in 0u32..(1 << free.len()) {
        let mut open_edges: Vec<(usize, usize)> = wired.iter().map(|&w| edges[w]).collect();
        let mut count_open = 0usize;
        for (i, &e) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                open_edges.push(edges[e]);
                count_open += 1;
            }
        }
        let k = loewner_lab::lattice::component_count(domain.n_vertices(), &open_edges, &[]);
        let w = (p / (1.0 - p)).powi(count_open as i32) * (q as f64).powi(k as i32);
        weights.push(w);
        total += w;
    }

    // heat-bath chain, sampled once per sweep
    let config = loewner_lab::lattice::EdgeConfig::new(domain.n_vertices(), edges.clone(), wired.clone());
    let mut chain = loewner_lab::models::FkChain::new(config, p, q).unwrap();
    let mut rng = job_rng(5150, 0);
    let sweeps = 1_000_000u32;
    let mut counts = vec![0u64; 1 << free.len()];
    for _ in 0..200 {
        chain.sweep(&mut rng); // burn-in
    }
    for _ in 0..sweeps {
        chain.sweep(&mut rng);
        let mut mask = 0u32;
        for (i, &e) in free.iter().enumerate() {
            if chain.config.open[e] {
                mask |= 1 << i;
            }
        }
        counts[mask as usize] += 1;
    }
    let tv: f64 = 0.5
        * (0..weights.len())
            .map(|m| (counts[m] as f64 / sweeps as f64 - weights[m] / total).abs())
            .sum::<f64>();
    eprintln!("FK TV at 1e6 sweeps = {tv}");
    assert!(tv < 0.02, "FK stationary law TV {tv}");
}

// -------------------------------------------------------------------- UST

/// Number of spanning trees by the matrix-tree theorem (integer Bareiss
/// determinant of the reduced Laplacian).
fn kirchhoff_count(n: usize, edges: &[(usize, usize)]) -> i64 {
    let m = n - 1;
    let mut a = vec![vec![0i64; m]; m];
    for &(u, v) in edges {
        if u < m {
            a[u][u] += 1;
        }
        if v < m {
            a[v][v] += 1;
        }
        if u < m && v < m {
            a[u][v] -= 1;
            a[v][u] -= 1;
        }
    }
    // Bareiss fraction-free elimination
    let mut prev = 1i64;
    for k in 0..m {
        if a[k][k] == 0 {
            let swap = (k + 1..m).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    for row in a.iter_mut() {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    a[m - 1][m - 1]
}

#[test]
fn ust_2x2_tree_frequencies_match_matrix_tree() {
    // 2x2 grid of vertices with one wired edge: the contracted graph is a
    // triangle, 3 spanning trees, uniform law
    let mut d = SquareDomain::box_domain(1, 1, (0, 0), (1, 0)).unwrap();
    d.wired_arc = vec![((0, 0), (1, 0))];

    // matrix-tree oracle on the contracted graph: vertices {wired, (0,1), (1,1)}
    let contracted_edges = vec![(0, 1), (0, 2), (1, 2)];
    let n_trees = kirchhoff_count(3, &contracted_edges);
    assert_eq!(n_trees, 3);

    let runs = 100_000u64;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for seed in 0..runs {
        let t = loewner_lab::models::wilson_tree(&d, seed).unwrap();
        let key = t
            .edge_list()
            .iter()
            .map(|(u, v)| format!("{},{},{},{}", u.0, u.1, v.0, v.1))
            .collect::<Vec<_>>()
            .join(";");
        *counts.entry(key).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), n_trees as usize, "tree support size");
    let expect = runs as f64 / n_trees as f64;
    let sigma = (runs as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    for (key, &c) in &counts {
        assert!(
            (c as f64 - expect).abs() < 3.0 * sigma,
            "tree {key}: count {c} vs {expect}"
        );
    }
}

#[test]
fn he_first_step_frequency_matches_solver() {
    // first-step branch frequency in a fixed 5-hexagon domain matches the
    // harmonic value to 3 sigma over 10^4 seeds
    let domain = TriDomain::rhombus(5, 1);
    let mut probe = HarmonicOracle::new(&domain, job_rng(0, 0));
    // the first interior query of the walk:
    let mut scout = HashColorOracle::new(0, 0.5);
    let run = explore_from(&domain, domain.entry(), &mut scout).unwrap();
    let first_site = run.iter().find_map(|s| s.query).map(|(s, _)| s).unwrap();
    let p = probe.step_probability(first_site).unwrap();

    let n = 10_000u64;
    let mut open_count = 0u64;
    for seed in 0..n {
        let mut oracle = HarmonicOracle::new(&domain, job_rng(seed, 0));
        let run = explore_from(&domain, domain.entry(), &mut oracle).unwrap();
        let (site, color) = run.iter().find_map(|s| s.query).unwrap();
        assert_eq!(site, first_site, "first query site must be deterministic");
        if color {
            open_count += 1;
        }
    }
    let freq = open_count as f64 / n as f64;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!(
        (freq - p).abs() < 3.0 * sigma + 1e-9,
        "first-step frequency {freq} vs harmonic {p}"
    );
}
