//! Test-only oracles, written independently of the library's algorithms.
#![allow(dead_code)]

use std::collections::HashSet;

use plumbing::PlumbingGraph;

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * cofactor_det(&minor);
    }
    total
}

/// Every initial association, as plain vectors.
pub fn all_initials(g: &PlumbingGraph) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &m in g.weights() {
        let mut next = Vec::new();
        for prefix in &out {
            let mut x = m + 2;
            while x <= -m {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
                x += 2;
            }
        }
        out = next;
    }
    out
}

/// Depth-first search over every move sequence from `n0`.
pub fn reaches_final(g: &PlumbingGraph, n0: &[i64]) -> bool {
    fn go(g: &PlumbingGraph, n: &mut Vec<i64>, seen: &mut HashSet<Vec<i64>>) -> bool {
        let w = g.weights();
        if n.iter().zip(w).all(|(&x, &m)| m <= x && x < -m) {
            return true;
        }
        if !seen.insert(n.clone()) {
            return false;
        }
        for v in 0..n.len() {
            if n[v] != -w[v] {
                continue;
            }
            let nbrs: Vec<usize> = g
                .edges()
                .iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            if nbrs.iter().any(|&u| n[u] + 2 > -w[u]) {
                continue;
            }
            let saved = n[v];
            n[v] = w[v];
            for &u in &nbrs {
                n[u] += 2;
            }
            let ok = go(g, n, seen);
            for &u in &nbrs {
                n[u] -= 2;
            }
            n[v] = saved;
            if ok {
                return true;
            }
        }
        false
    }
    go(g, &mut n0.to_vec(), &mut HashSet::new())
}

pub fn brute_good_initials(g: &PlumbingGraph) -> Vec<Vec<i64>> {
    all_initials(g)
        .into_iter()
        .filter(|n| reaches_final(g, n))
        .collect()
}

/// Leading principal minors by cofactor expansion.
pub fn brute_negative_definite(g: &PlumbingGraph) -> bool {
    let rows = g.intersection_matrix().rows();
    (1..=rows.len()).all(|k| {
        let sub: Vec<Vec<i64>> = rows[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = cofactor_det(&sub);
        if k % 2 == 1 {
            d < 0
        } else {
            d > 0
        }
    })
}

/// All `(a1, b1, a2, b2)` with `a1 + a2 <= bound` solving
/// `a1 a2 + a2 b1 + a1 b2 = 1`, canonicalized so `a1/b1 >= -2`.
pub fn brute_quadruples(bound: i64) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for a1 in 1..bound {
        for a2 in 1..=bound - a1 {
            for b1 in -a1 + 1..0 {
                for b2 in -a2 + 1..0 {
                    if a1 * a2 + a2 * b1 + a1 * b2 == 1 {
                        let q = if a1 <= -2 * b1 {
                            (a1, b1, a2, b2)
                        } else {
                            (a2, b2, a1, b1)
                        };
                        out.push(q);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Deterministic small negative definite stars, weights <= -2 on rays.
pub fn star_corpus() -> Vec<PlumbingGraph> {
    let mut out = Vec::new();
    for center in [-1, -2, -3] {
        for rays in [
            vec![vec![-2], vec![-3], vec![-7]],
            vec![vec![-2], vec![-3], vec![-5]],
            vec![vec![-2], vec![-2, -2], vec![-2, -2, -2, -2]],
            vec![vec![-2], vec![-3], vec![-2, -2]],
            vec![vec![-3], vec![-3], vec![-3]],
            vec![vec![-2], vec![-4], vec![-4]],
            vec![vec![-2], vec![-2, -3]],
            vec![vec![-4, -2], vec![-3]],
        ] {
            let g = PlumbingGraph::star(center, &rays);
            if g.is_negative_definite() && g.bad_vertices().len() <= 1 {
                out.push(g);
            }
        }
    }
    out
}
