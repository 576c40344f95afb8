use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use cavitywalk::walk::{
    brute_force_oracle, classical_walk, coin_from_bias, evolve, fidelity, multiport_coin,
    trajectory, CoinRule, LatticePosition, WalkState,
};

fn max_diff(a: &cavitywalk::walk::WalkDistribution, b: &cavitywalk::walk::WalkDistribution) -> f64 {
    a.iter()
        .chain(b.iter())
        .map(|(pos, _)| (a.get(pos) - b.get(pos)).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_matches_line_walk(eta in 0.0f64..=1.0, steps in 1u32..=10, start in 0usize..2) {
        let coin = coin_from_bias(eta).unwrap();
        let init = WalkState::localized(1, start).unwrap();
        let fast = evolve(&init, &coin, steps, None).unwrap();
        let slow = brute_force_oracle(&init, &coin, steps).unwrap();
        prop_assert!(max_diff(fast.last().unwrap(), &slow) <= 1e-10);
    }

    #[test]
    fn oracle_matches_multiport(steps in 1u32..=7, start in 0usize..4) {
        let coin = multiport_coin(2, CoinRule::Fourier).unwrap();
        let init = WalkState::localized(2, start).unwrap();
        let fast = evolve(&init, &coin, steps, None).unwrap();
        let slow = brute_force_oracle(&init, &coin, steps).unwrap();
        prop_assert!(max_diff(fast.last().unwrap(), &slow) <= 1e-10);
    }

    #[test]
    fn cavity_exchange_mirrors_position(eta in 0.0f64..=1.0, steps in 1u32..=40) {
        let coin = coin_from_bias(eta).unwrap();
        let from_c1 = evolve(&WalkState::localized(1, 0).unwrap(), &coin, steps, None).unwrap();
        let from_c2 = evolve(&WalkState::localized(1, 1).unwrap(), &coin, steps, None).unwrap();
        let (p, q) = (from_c1.last().unwrap(), from_c2.last().unwrap());
        for k in 0..=steps {
            prop_assert!((p.get(&LatticePosition::line(k)) - q.get(&LatticePosition::line(steps - k))).abs() <= 1e-12);
        }
    }

    #[test]
    fn equal_losses_factor_out(eta in 0.0f64..=1.0, t in 0.5f64..1.0, steps in 1u32..=60) {
        let coin = coin_from_bias(eta).unwrap();
        let init = WalkState::initial(1);
        let lossy = trajectory(&init, &coin, steps, Some(&[t, t])).unwrap();
        let ideal = trajectory(&init, &coin, steps, None).unwrap();
        for (n, (a, b)) in lossy.iter().zip(&ideal).enumerate() {
            let expected = t.powi(2 * (n as i32 + 1));
            prop_assert!((a.norm_sqr() / expected - 1.0).abs() <= 1e-10);
            let (pa, pb) = (a.distribution().unwrap(), b.distribution().unwrap());
            prop_assert!(max_diff(&pa, &pb) <= 1e-12);
        }
    }

    #[test]
    fn fidelity_is_symmetric(a in 0.0f64..=1.0, b in 0.0f64..=1.0, steps in 1u32..=30) {
        let p = evolve(&WalkState::initial(1), &coin_from_bias(a).unwrap(), steps, None).unwrap();
        let q = evolve(&WalkState::initial(1), &coin_from_bias(b).unwrap(), steps, None).unwrap();
        let (p, q) = (p.last().unwrap(), q.last().unwrap());
        prop_assert!((fidelity(p, q).unwrap() - fidelity(q, p).unwrap()).abs() <= 1e-15);
        prop_assert!((fidelity(p, p).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn lossless_norm_to_200_steps() {
    for eta in [0.2, 0.5, 0.8] {
        let coin = coin_from_bias(eta).unwrap();
        for s in trajectory(&WalkState::initial(1), &coin, 200, None).unwrap() {
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }
    let coin = multiport_coin(2, CoinRule::Fourier).unwrap();
    for s in trajectory(&WalkState::initial(2), &coin, 40, None).unwrap() {
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn quantum_spread_is_linear_classical_is_diffusive() {
    let coin = coin_from_bias(0.5).unwrap();
    let q = evolve(&WalkState::initial(1), &coin, 62, None).unwrap();
    let c = classical_walk(&coin, 0, 62).unwrap();
    let ratio =
        |d: &cavitywalk::walk::WalkDistribution, f: fn(f64) -> f64| d.std_k() / f(d.step() as f64);
    let qs: Vec<f64> = q[19..].iter().map(|d| ratio(d, |n| n)).collect();
    let cs: Vec<f64> = c[19..].iter().map(|d| ratio(d, f64::sqrt)).collect();
    for r in &qs {
        assert!((r / qs[0] - 1.0).abs() < 0.05, "{r} vs {}", qs[0]);
    }
    for r in &cs {
        assert_abs_diff_eq!(*r, 0.5, epsilon = 1e-12);
    }
    assert!(q[61].std_k() > 3.0 * c[61].std_k());
}

#[test]
fn stay_only_and_swap_only_coins() {
    let stay = evolve(
        &WalkState::initial(1),
        &coin_from_bias(1.0).unwrap(),
        10,
        None,
    )
    .unwrap();
    for d in &stay {
        assert_eq!(d.get(&LatticePosition::line(0)), 1.0);
    }
    let swap = evolve(
        &WalkState::initial(1),
        &coin_from_bias(0.0).unwrap(),
        10,
        None,
    )
    .unwrap();
    for d in &swap {
        // alternates C₂, C₁, C₂, … so k = ⌈N/2⌉
        let k = d.step().div_ceil(2);
        assert_abs_diff_eq!(d.get(&LatticePosition::line(k)), 1.0, epsilon = 1e-15);
    }
}

#[test]
fn balanced_walk_is_asymmetric_about_its_centre() {
    let d = evolve(
        &WalkState::initial(1),
        &coin_from_bias(0.5).unwrap(),
        40,
        None,
    )
    .unwrap();
    let last = d.last().unwrap();
    let skew: f64 = last
        .iter()
        .map(|(p, w)| w * (p.symmetric_label(40) as f64 - last.mean_k() * 2.0 + 40.0).powi(3))
        .sum();
    assert!(skew.abs() > 1.0);
}
