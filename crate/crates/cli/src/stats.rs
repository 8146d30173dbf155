//! Small statistics helpers for the bench harness and acceptance checks.

/// Spearman rank correlation with average ranks for ties. Returns 0 for
/// degenerate inputs (fewer than two points or a constant series).
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "series must be the same length");
    if xs.len() < 2 {
        return 0.0;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // tied block [i, j] shares the average rank (1-based)
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &at in &order[i..=j] {
            out[at] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return 0.0;
    }
    cov / (var_x * var_y).sqrt()
}

/// One-sided exact sign test: probability of at least `wins` successes in
/// `trials` fair coin flips. Ties must be excluded by the caller.
pub fn sign_test_p(wins: u64, trials: u64) -> f64 {
    if trials == 0 || wins == 0 {
        return 1.0;
    }
    // Binomial(trials, 1/2) tail; the pmf recurrence runs in log space so
    // long series neither overflow the binomial nor underflow 2^-n
    let n = trials as f64;
    let mut ln_pmf = -n * core::f64::consts::LN_2;
    let mut tail = 0.0;
    for k in 0..=trials {
        if k >= wins {
            tail += ln_pmf.exp();
        }
        if k < trials {
            ln_pmf += ((trials - k) as f64 / (k + 1) as f64).ln();
        }
    }
    tail.min(1.0)
}
