//! Smith normal form for small dense integer matrices.
//!
//! Only the diagonal is returned; the transforms are never needed here.

/// Invariant factors `s_1 | s_2 | ... | s_r` of an integer matrix given as rows,
/// followed by zeros up to `min(rows, cols)`. All returned values are nonnegative.
pub fn smith_diagonal(rows: &[Vec<i64>]) -> Vec<i64> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == n), "ragged matrix");
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let k = m.min(n);
    let mut diag = Vec::with_capacity(k);

    for t in 0..k {
        // smallest nonzero entry in the trailing block becomes the pivot
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            diag.extend(std::iter::repeat(0).take(k - t));
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            let p = a[t][t];
            for i in t + 1..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the whole trailing block
                let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..n {
                            a[t][j] += a[i][j];
                        }
                    }
                }
            }
            let (pi, pj) = min_nonzero_cross(&a, t).expect("pivot row/column cannot vanish");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs() as i64);
    }
    diag
}

fn min_nonzero(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.map_or(true, |(b, _, _)| v.abs() < b) {
                best = Some((v.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

// Smallest nonzero among row t and column t (the only places left dirty).
fn min_nonzero_cross(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    let mut consider = |v: i128, i: usize, j: usize| {
        if v != 0 && best.map_or(true, |(b, _, _)| v.abs() < b) {
            best = Some((v.abs(), i, j));
        }
    };
    for (i, row) in a.iter().enumerate().skip(t) {
        consider(row[t], i, t);
    }
    for (j, &v) in a[t].iter().enumerate().skip(t) {
        consider(v, t, j);
    }
    best.map(|(_, i, j)| (i, j))
}
