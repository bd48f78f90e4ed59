use super::{argmax_lowest, fresh_counters, record, ArmCounters, Policy};
use crate::error::{BanditError, Result};
use crate::rng::RngStream;

/// UCB1: play every arm once, then the arm maximizing
/// `mean_j + sqrt(2 ln(n) / n_j)` (natural log).
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1State {
    counters: Vec<ArmCounters>,
    total_plays: u64,
}

impl Ucb1State {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Ucb1State {
            counters: fresh_counters(k)?,
            total_plays: 0,
        })
    }

    pub fn total_plays(&self) -> u64 {
        self.total_plays
    }
}

/// `sqrt(2 ln(total_plays) / plays)`.
pub fn exploration_bonus(total_plays: f64, plays: u64) -> f64 {
    (2.0 * total_plays.ln() / plays as f64).sqrt()
}

pub fn ucb1_index(counters: &ArmCounters, total_plays: u64) -> Result<f64> {
    let mean = counters.mean().ok_or(BanditError::UnplayedArm)?;
    debug_assert!(total_plays >= counters.plays);
    Ok(mean + exploration_bonus(total_plays as f64, counters.plays))
}

/// Lowest-index unplayed arm if any, else the UCB1 argmax. Uses no randomness.
pub fn select_ucb1(state: &Ucb1State) -> usize {
    if let Some(unplayed) = state.counters.iter().position(|c| c.plays == 0) {
        return unplayed;
    }
    let n = state.total_plays as f64;
    argmax_lowest(
        state
            .counters
            .iter()
            .map(|c| c.payout as f64 / c.plays as f64 + exploration_bonus(n, c.plays)),
    )
}

impl Policy for Ucb1State {
    fn select(&self, _stream: &mut RngStream) -> usize {
        select_ucb1(self)
    }

    fn update(&mut self, arm: usize, reward: u8) -> Result<()> {
        record(&mut self.counters, arm, reward)?;
        self.total_plays += 1;
        Ok(())
    }

    fn counters(&self) -> &[ArmCounters] {
        &self.counters
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // sqrt(2 ln 2), 30-digit evaluation
    const SQRT_2_LN_2: f64 = 1.177_410_022_515_474_7;

    #[test]
    fn round_robin_initialization() {
        let mut s = Ucb1State::new(2).unwrap();
        assert_eq!(select_ucb1(&s), 0);
        s.update(0, 0).unwrap();
        assert_eq!(select_ucb1(&s), 1);
        s.update(1, 0).unwrap();
        assert_eq!(s.total_plays(), 2);
    }

    #[test]
    fn bonus_vanishes_at_one_play() {
        let c = ArmCounters {
            plays: 1,
            payout: 0,
        };
        assert_eq!(ucb1_index(&c, 1).unwrap(), 0.0);
        let mut s = Ucb1State::new(1).unwrap();
        s.update(0, 1).unwrap();
        assert_eq!(select_ucb1(&s), 0);
    }

    #[test]
    fn two_arm_indices() {
        let hit = ArmCounters {
            plays: 1,
            payout: 1,
        };
        let miss = ArmCounters {
            plays: 1,
            payout: 0,
        };
        let i0 = ucb1_index(&hit, 2).unwrap();
        let i1 = ucb1_index(&miss, 2).unwrap();
        assert!((i0 - (1.0 + SQRT_2_LN_2)).abs() < 1e-12);
        assert!((i1 - SQRT_2_LN_2).abs() < 1e-12);
        assert!((i0 - 2.1774).abs() < 1e-4 && (i1 - 1.1774).abs() < 1e-4);

        let mut s = Ucb1State::new(2).unwrap();
        s.update(0, 1).unwrap();
        s.update(1, 0).unwrap();
        assert_eq!(select_ucb1(&s), 0);
    }

    #[test]
    fn index_at_e_squared() {
        let n = std::f64::consts::E.powi(2);
        let index = 0.5 + exploration_bonus(n, 2);
        assert!((index - std::f64::consts::SQRT_2 - 0.5).abs() < 1e-12);
        assert!((index - 1.914_213_562_373_095).abs() < 1e-12);
    }

    #[test]
    fn unplayed_arm_has_no_index() {
        assert_eq!(
            ucb1_index(&ArmCounters::default(), 5),
            Err(BanditError::UnplayedArm)
        );
    }

    #[test]
    fn self_played_bonus_decreases_from_three_on() {
        // ln(n)/n peaks at n = e, so the bonus rises from n = 2 to n = 3.
        assert!(exploration_bonus(3.0, 3) > exploration_bonus(2.0, 2));
        let mut prev = exploration_bonus(3.0, 3);
        for n in 4..=1_000_000u64 {
            let b = exploration_bonus(n as f64, n);
            assert!(b < prev, "not decreasing at n = {n}");
            prev = b;
        }
    }

    #[test]
    fn selection_is_deterministic() {
        let mut s = Ucb1State::new(3).unwrap();
        for (arm, r) in [(0, 1), (1, 0), (2, 1), (2, 0), (0, 0)] {
            s.update(arm, r).unwrap();
        }
        let first = select_ucb1(&s);
        assert!((0..100).all(|_| select_ucb1(&s) == first));
    }

    proptest! {
        #[test]
        fn index_nondecreasing_in_total_plays(plays in 1u64..1000, payout in 0u64..1000, extra in 0u64..10_000) {
            let c = ArmCounters { plays, payout: payout.min(plays) };
            let lo = ucb1_index(&c, plays + extra).unwrap();
            let hi = ucb1_index(&c, plays + extra + 1).unwrap();
            prop_assert!(hi >= lo);
        }
    }
}
