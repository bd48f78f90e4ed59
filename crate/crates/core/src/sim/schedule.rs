/// Log-spaced checkpoint steps in `[1, budget]`.
///
/// Step `i` (for `i = 1..=count`) is `round(10^(log10(budget) * i / count))`,
/// rounding half away from zero; duplicates are dropped and the list always
/// ends at `budget`. Returns an empty list if either argument is zero.
pub fn checkpoint_schedule(budget: u64, count: usize) -> Vec<u64> {
    if budget == 0 || count == 0 {
        return Vec::new();
    }
    let exponent = (budget as f64).log10();
    let mut steps: Vec<u64> = (1..=count)
        .map(|i| {
            let step = 10f64.powf(exponent * i as f64 / count as f64).round() as u64;
            step.clamp(1, budget)
        })
        .collect();
    steps.dedup();
    if steps.last() != Some(&budget) {
        steps.retain(|&s| s < budget);
        steps.push(budget);
    }
    steps
}
