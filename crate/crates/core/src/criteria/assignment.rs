//! Exact linear assignment on small dense real matrices.

/// Permutation maximising `Σ_i w[i][π(i)]` for an `n × n` row-major weight
/// matrix, with the attained value.
///
/// Shortest augmenting path with row/column potentials, `O(n³)`.
pub fn max_weight_assignment(weights: &[f64], n: usize) -> (Vec<usize>, f64) {
    assert_eq!(weights.len(), n * n, "weight matrix must be n × n");
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // minimise the negated weights; arrays are 1-based with slot 0 as the root
    let cost = |i: usize, j: usize| -weights[(i - 1) * n + (j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
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
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[matched_row[j] - 1] = j - 1;
    }
    let value = perm.iter().enumerate().map(|(i, &j)| weights[i * n + j]).sum();
    (perm, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_force(w: &[f64], n: usize) -> f64 {
        permutations(n)
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| w[i * n + j]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=6 {
            for _ in 0..40 {
                let w: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let (perm, value) = max_weight_assignment(&w, n);
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..n).collect::<Vec<_>>());
                assert!((value - brute_force(&w, n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn anti_diagonal() {
        let n = 4;
        let mut w = vec![0.0; 16];
        for i in 0..n {
            w[i * n + (n - 1 - i)] = 0.25;
        }
        let (perm, value) = max_weight_assignment(&w, n);
        assert_eq!(perm, vec![3, 2, 1, 0]);
        assert!((value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty() {
        assert_eq!(max_weight_assignment(&[], 0), (vec![], 0.0));
    }
}
