//! Small numeric helpers shared across modules: log-factorials, binomial
//! tables, golden-section maximization, and least-squares line fits.

/// ln(n!) for n = 0..=n_max, built by summing logs.
///
/// Staying in log space keeps beam-splitter coefficients finite for photon
/// numbers far beyond the range where n! overflows an f64.
pub fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for n in 1..=n_max {
        acc += (n as f64).ln();
        table.push(acc);
    }
    table
}

/// Pascal's triangle rows 0..=n_max as f64; exact for every entry below 2⁵³.
pub fn pascal_rows(n_max: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![1.0]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Number of photon-number basis kets with `total` photons in `modes` modes,
/// i.e. C(total + modes - 1, modes - 1), saturating at u128::MAX.
pub fn sector_size(total: u64, modes: u64) -> u128 {
    debug_assert!(modes >= 1);
    let mut acc: u128 = 1;
    // C(total + modes - 1, modes - 1) multiplicatively; modes is small.
    for i in 1..modes {
        acc = match acc.checked_mul((total + i) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
    }
    acc
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximize a scalar function on (lo, hi).
///
/// A coarse grid scan brackets the global grid maximum; a golden-section
/// refinement then narrows the bracket to `xtol`. Refining around the best
/// grid sample is correct whenever competing local peaks are lower.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    const SCAN: usize = 129;
    let step = (hi - lo) / (SCAN as f64 + 1.0);
    let xs: Vec<f64> = (1..=SCAN).map(|i| lo + step * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = (0..SCAN)
        .max_by(|&a, &b| ys[a].total_cmp(&ys[b]))
        .expect("non-empty scan");

    let mut a = if best == 0 { lo } else { xs[best - 1] };
    let mut b = if best == SCAN - 1 { hi } else { xs[best + 1] };

    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > xtol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// True if the sampled values have a single interior local maximum.
#[cfg(test)]
pub fn grid_is_unimodal(ys: &[f64]) -> bool {
    let peaks = (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] > ys[i + 1])
        .count();
    peaks <= 1
}

/// Ordinary least squares for y = slope·x + intercept.
///
/// Returns (slope, intercept, slope standard error). The standard error uses
/// the usual unbiased residual variance with n − 2 degrees of freedom.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(x.len() >= 3, "need at least 3 points for a slope error");
    let x_mean = x.iter().sum::<f64>() / n;
    let y_mean = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&xi| (xi - x_mean).powi(2)).sum();
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (xi - x_mean) * (yi - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - slope * xi - intercept).powi(2))
        .sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    (slope, intercept, stderr)
}

/// SplitMix64 step, used to derive independent RNG streams from a seed.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Evenly spaced grid of `points` values covering [0, 2π] inclusive.
pub fn phase_grid(points: usize) -> Vec<f64> {
    debug_assert!(points >= 2);
    let step = std::f64::consts::TAU / (points as f64 - 1.0);
    (0..points).map(|i| i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorials_match_direct_products() {
        let table = ln_factorials(30);
        assert_eq!(table[0], 0.0);
        assert_eq!(table[1], 0.0);
        let mut fact = 1.0f64;
        for n in 2..=20usize {
            fact *= n as f64;
            assert!((table[n] - fact.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn pascal_rows_are_exact() {
        let rows = pascal_rows(30);
        assert_eq!(rows[4], vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        assert_eq!(rows[30][15], 155_117_520.0);
    }

    #[test]
    fn sector_size_counts_kets() {
        assert_eq!(sector_size(4, 2), 5); // |4,0⟩ … |0,4⟩
        assert_eq!(sector_size(2, 4), 10);
        assert_eq!(sector_size(0, 3), 1);
    }

    #[test]
    fn maximize_finds_quartic_peak() {
        // x²(1-x)² on (0,1) peaks at x = 1/2.
        let (x, v) = maximize(|x| x * x * (1.0 - x) * (1.0 - x), 0.0, 1.0, 1e-10);
        assert!((x - 0.5).abs() < 1e-8);
        assert!((v - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn unimodality_detector() {
        assert!(grid_is_unimodal(&[0.0, 1.0, 2.0, 1.0, 0.0]));
        assert!(!grid_is_unimodal(&[0.0, 2.0, 0.5, 2.0, 0.0]));
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| -0.5 * v + 2.0).collect();
        let (slope, intercept, stderr) = linear_fit(&x, &y);
        assert!((slope + 0.5).abs() < 1e-12);
        assert!((intercept - 2.0).abs() < 1e-12);
        assert!(stderr < 1e-12);
    }

    #[test]
    fn phase_grid_covers_full_turn() {
        let g = phase_grid(721);
        assert_eq!(g.len(), 721);
        assert_eq!(g[0], 0.0);
        assert!((g[720] - std::f64::consts::TAU).abs() < 1e-12);
        assert!((g[1] - std::f64::consts::TAU / 720.0).abs() < 1e-15);
    }
}
