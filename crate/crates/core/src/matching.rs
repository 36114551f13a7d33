//! Bipartite perfect matchings between agents and objects.

/// A perfect matching using only edges with `allowed(agent, object)`, found
/// by augmenting paths. Returns `matching[agent] = object`.
pub fn perfect_matching(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&o| allowed(i, o)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut matching = vec![0; n];
    for (o, a) in owner.iter().enumerate() {
        matching[a.expect("perfect")] = o;
    }
    Some(matching)
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &o in &adj[i] {
        if seen[o] {
            continue;
        }
        seen[o] = true;
        if owner[o].is_none_or(|j| augment(j, adj, owner, seen)) {
            owner[o] = Some(i);
            return true;
        }
    }
    false
}

/// Minimum-cost perfect matching (Hungarian method, `O(n³)`).
/// Returns `matching[agent] = object` and the total cost.
pub fn min_cost_matching(cost: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    const INF: i64 = i64::MAX / 4;
    // 1-based potentials; p[o] = agent matched to column o
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut matching = vec![0; n];
    for j in 1..=n {
        matching[p[j] - 1] = j - 1;
    }
    let total = matching.iter().enumerate().map(|(i, &o)| cost[i][o]).sum();
    (matching, total)
}
