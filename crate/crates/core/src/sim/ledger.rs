/// Running regret totals for one run.
///
/// Realized regret is `trials * p_star - cumulative_reward` and can go negative
/// on lucky runs. Pseudo-regret sums `p_star - mu(chosen arm)` and never
/// decreases.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretLedger {
    k: usize,
    p_star: f64,
    trials: u64,
    cumulative_reward: u64,
    cumulative_pseudo_regret: f64,
}

/// Snapshot of a ledger at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub step: u64,
    pub realized_regret: f64,
    pub pseudo_regret: f64,
    pub avg_regret_per_offer: f64,
    pub cumulative_reward: u64,
}

impl RegretLedger {
    pub fn new(k: usize, p_star: f64) -> Self {
        RegretLedger {
            k,
            p_star,
            trials: 0,
            cumulative_reward: 0,
            cumulative_pseudo_regret: 0.0,
        }
    }

    pub fn record(&mut self, reward: u8, chosen_prob: f64) {
        self.trials += 1;
        self.cumulative_reward += u64::from(reward);
        self.cumulative_pseudo_regret += self.p_star - chosen_prob;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    pub fn cumulative_reward(&self) -> u64 {
        self.cumulative_reward
    }

    pub fn pseudo_regret(&self) -> f64 {
        self.cumulative_pseudo_regret
    }

    pub fn realized_regret(&self) -> f64 {
        self.trials as f64 * self.p_star - self.cumulative_reward as f64
    }

    /// Realized regret divided by the number of offers.
    pub fn average_regret_per_offer(&self) -> f64 {
        self.realized_regret() / self.k as f64
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            step: self.trials,
            realized_regret: self.realized_regret(),
            pseudo_regret: self.pseudo_regret(),
            avg_regret_per_offer: self.average_regret_per_offer(),
            cumulative_reward: self.cumulative_reward,
        }
    }
}
