// temporary diagnostic
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secgame_core::geom::Vec2;
use secgame_core::sim::*;
use std::collections::BTreeMap;

fn main() {
    let n = 256;
    let seed = 7u64;
    let attacker = Territory::disk(Vec2::new(1.0, 0.0), 1.0, n).unwrap();
    let defender = Territory::disk(Vec2::new(-1.0, 0.0), 1.0, n).unwrap();
    let mut state = GameState::new(attacker, defender).unwrap();
    let params = SimParams {
        rule: UpdateRule::Displacement,
        border_policy: BorderPolicy::Renormalize,
        push_scale: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for stepi in 0..120 {
        let wa: Vec<f64> = (0..n)
            .map(|i| {
                let towards = (state.attacker().vertices()[i].x < 0.2) as u8 as f64;
                0.05 + towards * rng.random_range(0.0..2.0)
            })
            .collect();
        let m_a = ForceDistribution::from_weights_capped(&wa);
        let m_d = ForceDistribution::uniform(n);
        let kind = step_failure_kind(&state, &m_a, &m_d, &params);
        if stepi < 40 {
            println!("step {stepi}: {kind}");
        }
        *kinds.entry(kind.split('(').next().unwrap().to_string()).or_default() += 1;
        state = step(&state, &m_a, &m_d, &params).unwrap();
    }
    println!("{kinds:?}");
}
