use super::bitstring::BitString;

/// Basis of `{L : V ⊠ L = 0}` via Gauss-Jordan elimination on the `n×n`
/// circulant of `V`. Row `j` is the equation `Σ_x L(j − x) = 0` over the
/// units `x` of `V`.
///
/// Pivots are taken on the first row (in row order) with the column bit
/// set, so the basis is reproducible. Basis vectors come out ordered by
/// their free column. An empty basis means `V` is reversible.
pub fn circulant_nullspace(v: &BitString) -> Vec<BitString> {
    let n = v.len();
    let words = n.div_ceil(64);
    let units = v.positions();
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut row = vec![0u64; words];
            for &x in &units {
                let s = (j + n - x) % n;
                row[s / 64] ^= 1 << (s % 64);
            }
            row
        })
        .collect();

    let bit = |row: &[u64], c: usize| (row[c / 64] >> (c % 64)) & 1 == 1;
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == n {
            break;
        }
    }

    let mut is_pivot = vec![false; n];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut l = BitString::zeros(n);
            l.set(f, true);
            for (i, &pc) in pivot_cols.iter().enumerate() {
                if bit(&rows[i], f) {
                    l.set(pc, true);
                }
            }
            l
        })
        .collect()
}
