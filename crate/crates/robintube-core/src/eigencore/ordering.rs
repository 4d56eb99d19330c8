use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Reverse Cuthill–McKee ordering. Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut scratch = Vec::new();

    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| deg[i])
            .unwrap();
        let start = pseudo_peripheral(adj, &deg, seed);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            scratch.clear();
            scratch.extend(adj[v].iter().copied().filter(|&w| !visited[w]));
            scratch.sort_unstable_by_key(|&w| (deg[w], w));
            scratch.dedup();
            for &w in &scratch {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(adj: &[Vec<usize>], deg: &[usize], seed: usize) -> usize {
    let mut root = seed;
    let mut ecc = 0;
    for _ in 0..8 {
        let levels = bfs_levels(adj, root);
        let depth = levels.iter().filter_map(|&l| l).max().unwrap_or(0);
        if depth <= ecc && ecc > 0 {
            break;
        }
        ecc = depth;
        let far = (0..adj.len())
            .filter(|&i| levels[i] == Some(depth))
            .min_by_key(|&i| (deg[i], i))
            .unwrap();
        if far == root {
            break;
        }
        root = far;
    }
    root
}

fn bfs_levels(adj: &[Vec<usize>], root: usize) -> Vec<Option<usize>> {
    let mut lev = vec![None; adj.len()];
    let mut q = VecDeque::new();
    lev[root] = Some(0);
    q.push_back(root);
    while let Some(v) = q.pop_front() {
        let l = lev[v].unwrap();
        for &w in &adj[v] {
            if lev[w].is_none() {
                lev[w] = Some(l + 1);
                q.push_back(w);
            }
        }
    }
    lev
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}
