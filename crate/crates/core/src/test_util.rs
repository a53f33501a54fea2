use crate::ext::C64;

/// Greedy set matching: each expected value takes its nearest unused found
/// value. Returns the worst distance, or infinity on a length mismatch.
pub fn match_sets(found: &[C64], expected: &[C64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; found.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (best, dist) = found
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, f)| (i, (f - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("lengths match");
        used[best] = true;
        worst = worst.max(dist);
    }
    worst
}
