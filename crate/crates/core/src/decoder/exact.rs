//! Exact minimum-weight perfect matching by dynamic programming over subsets.

/// Largest instance accepted; the table has `2^n` entries.
pub const EXACT_LIMIT: usize = 22;

/// Minimum-weight perfect matching of the complete graph on `n` vertices
/// (`n` even, at most [`EXACT_LIMIT`]). Returns the pairs and total weight.
pub fn min_weight_perfect_matching<F>(n: usize, weight: F) -> (Vec<(usize, usize)>, u64)
where
    F: Fn(usize, usize) -> u64,
{
    assert!(n.is_multiple_of(2), "perfect matching needs an even vertex count");
    assert!(n <= EXACT_LIMIT, "exact matching limited to {EXACT_LIMIT} vertices");
    if n == 0 {
        return (Vec::new(), 0);
    }
    let w: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| weight(i, j)).collect()).collect();
    let full = (1usize << n) - 1;
    let mut best = vec![u64::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    best[0] = 0;
    // only masks that are a prefix-closed "lowest bits first" pattern matter,
    // but filling all masks keeps the recurrence simple
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let prev = best[rest & !(1 << j)];
            if prev != u64::MAX {
                let c = prev + w[i][j];
                if c < best[mask] {
                    best[mask] = c;
                    choice[mask] = j as u8;
                }
            }
        }
    }
    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    (pairs, best[full])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle() {
        // points on a line: 0, 1, 3, 4 → pairs (0,1), (2,3)
        let pos = [0i64, 1, 3, 4];
        let (pairs, w) = min_weight_perfect_matching(4, |i, j| pos[i].abs_diff(pos[j]));
        assert_eq!(w, 2);
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn empty() {
        assert_eq!(min_weight_perfect_matching(0, |_, _| 0), (vec![], 0));
    }
}
