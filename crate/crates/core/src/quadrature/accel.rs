/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the last even-column estimate and the spread between the two most recent
/// estimates. The table depth is capped at `max_depth` columns.
pub fn wynn_epsilon(s: &[f64], max_depth: usize) -> Option<(f64, f64)> {
    let n = s.len();
    if n < 3 {
        return None;
    }
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut estimates: Vec<f64> = vec![s[n - 1]];
    let mut col = 0;
    while cur.len() > 1 && col < max_depth {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let base = if col == 0 { 0.0 } else { prev[i + 1] };
            if d == 0.0 || !d.is_finite() {
                return estimates.last().map(|&e| (e, spread(&estimates)));
            }
            next.push(base + 1.0 / d);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    estimates.push(v);
                }
            }
        }
    }
    estimates.last().map(|&e| (e, spread(&estimates)))
}

fn spread(e: &[f64]) -> f64 {
    if e.len() < 2 {
        f64::INFINITY
    } else {
        (e[e.len() - 1] - e[e.len() - 2]).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_harmonic() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 1..=20 {
            acc += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            s.push(acc);
        }
        let (v, e) = wynn_epsilon(&s, 30).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12, "{v}");
        assert!(e < 1e-9);
    }

    #[test]
    fn leibniz_series() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 0..16 {
            acc += if k % 2 == 0 { 4.0 } else { -4.0 } / (2 * k + 1) as f64;
            s.push(acc);
        }
        let (v, _) = wynn_epsilon(&s, 30).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-11);
    }
}
