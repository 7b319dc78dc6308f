//! Pivoting Bron–Kerbosch enumeration of maximal cliques, restricted to the
//! closed neighborhood of one vertex.

use crate::bitgraph::BitGraph;
use crate::error::{Error, Result};

/// All maximal cliques of `g` containing `center`, each returned including
/// the center. A node budget guards against combinatorial blowups; hitting
/// it is an error carrying the progress made, never a truncated answer.
pub(crate) fn maximal_cliques_containing(
    g: &BitGraph,
    center: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let nbrs = g.neighbors(center);
    let n = nbrs.len();
    if n == 0 {
        return Ok(vec![vec![center]]);
    }
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(nbrs[i], nbrs[j]) {
                adj[i * words + j / 64] |= 1 << (j % 64);
                adj[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut p0 = vec![0u64; words];
    for i in 0..n {
        p0[i / 64] |= 1 << (i % 64);
    }
    let mut out = Vec::new();
    let mut nodes = 0u64;
    expand(
        &adj,
        words,
        &mut Vec::new(),
        p0,
        vec![0u64; words],
        &mut out,
        &mut nodes,
        budget,
    )?;
    Ok(out
        .into_iter()
        .map(|locals| {
            let mut c: Vec<usize> = locals.into_iter().map(|i| nbrs[i]).collect();
            c.push(center);
            c.sort_unstable();
            c
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn expand(
    adj: &[u64],
    words: usize,
    r: &mut Vec<usize>,
    p: Vec<u64>,
    x: Vec<u64>,
    out: &mut Vec<Vec<usize>>,
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded {
            explored: *nodes,
            found: out.len() as u64,
        });
    }
    let p_empty = p.iter().all(|&w| w == 0);
    if p_empty {
        if x.iter().all(|&w| w == 0) {
            out.push(r.clone());
        }
        return Ok(());
    }
    // pivot: vertex of P ∪ X with the most neighbors in P
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    for set in [&p, &x] {
        for (wi, &w) in set.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let cnt: usize = p
                    .iter()
                    .zip(&adj[u * words..(u + 1) * words])
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                if best == usize::MAX || cnt > best {
                    best = cnt;
                    pivot = u;
                }
            }
        }
    }
    let mut cand: Vec<usize> = Vec::new();
    for (wi, &w) in p.iter().enumerate() {
        let mut bits = w & !adj[pivot * words + wi];
        while bits != 0 {
            cand.push(wi * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    let mut p = p;
    let mut x = x;
    for v in cand {
        let mut np = vec![0u64; words];
        let mut nx = vec![0u64; words];
        for wi in 0..words {
            np[wi] = p[wi] & adj[v * words + wi];
            nx[wi] = x[wi] & adj[v * words + wi];
        }
        r.push(v);
        expand(adj, words, r, np, nx, out, nodes, budget)?;
        r.pop();
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
    Ok(())
}
