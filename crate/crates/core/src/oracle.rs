//! Reference computations that avoid the multiplication paths they check.

/// Products in an `n = 1` algebra by rewriting words: each `v u` becomes
/// `u theta(v)` one letter at a time and every `u^d` collapses to `gamma`,
/// with `theta` the cyclic shift of l-coordinates. Elements are `d x d`
/// tables `x[j][l]` (u-power `j`, l-coordinate `l`).
pub fn relation_chase(x: &[Vec<u64>], y: &[Vec<u64>], d: usize, q: u64, gamma: u64) -> Vec<Vec<u64>> {
    let mut z = vec![vec![0u64; d]; d];
    for (j, v) in x.iter().enumerate() {
        for (k, w) in y.iter().enumerate() {
            // u^j v u^k w: push v rightwards past u, k times
            let mut v = v.clone();
            for _ in 0..k {
                v.rotate_right(1);
            }
            let mut power = j + k;
            let mut scale = 1u64;
            while power >= d {
                power -= d;
                scale = scale * gamma % q;
            }
            for l in 0..d {
                z[power][l] = (z[power][l] + scale * v[l] % q * w[l]) % q;
            }
        }
    }
    z
}

/// Number of invertible `d x d` matrices over `F_q` by enumeration of all
/// `q^(d^2)` matrices, with the rank found by Gaussian elimination.
pub fn count_invertible(q: u64, d: usize) -> u64 {
    let total = q.pow((d * d) as u32);
    (0..total)
        .filter(|&k| {
            let mut rows: Vec<Vec<u64>> = (0..d)
                .map(|r| (0..d).map(|c| k / q.pow((r * d + c) as u32) % q).collect())
                .collect();
            full_rank(&mut rows, q)
        })
        .count() as u64
}

fn full_rank(rows: &mut [Vec<u64>], q: u64) -> bool {
    let d = rows.len();
    for col in 0..d {
        let Some(p) = (col..d).find(|&r| rows[r][col] != 0) else {
            return false;
        };
        rows.swap(col, p);
        let inv = (1..q).find(|&t| rows[col][col] * t % q == 1).expect("prime modulus");
        let pivot = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            let f = row[col] * inv % q;
            for (x, &p) in row.iter_mut().zip(&pivot).skip(col) {
                *x = (*x + q * q - f * p % q) % q;
            }
        }
    }
    true
}
