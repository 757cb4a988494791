use aemfp::oracles::{
    generate_random, oracle_fractional, oracle_fractional_grid, oracle_integer, oracle_value, DeviationKind,
    RandomParams,
};
use aemfp::solvers::{solve_lp, solve_simple_constant};
use aemfp::{solve, Method};

fn params(seed: u64, k: usize) -> RandomParams {
    RandomParams { n: 2 + seed as usize % 6, m: 3 + seed as usize % 8, k, cap_max: 4, deviation: DeviationKind::Constant { max_shift: 2 }, seed }
}

#[test]
fn lp_matches_grid_on_single_sets() {
    for seed in 0..60 {
        let inst = generate_random(&params(seed, 1)).unwrap();
        let lp = oracle_fractional(&inst).unwrap();
        assert_eq!(lp, oracle_fractional_grid(&inst).unwrap(), "seed {seed}");
        assert_eq!(lp, solve_simple_constant(&inst).unwrap().opt_value, "seed {seed}");
    }
}

#[test]
fn auto_methods_agree_with_lp() {
    for seed in 0..60 {
        let inst = generate_random(&params(seed, 2)).unwrap();
        let auto = solve(&inst, Method::Auto, false).unwrap();
        assert_eq!(auto.method, Method::Parametric);
        assert_eq!(auto.opt_value, solve_lp(&inst).unwrap().opt_value, "seed {seed}");
    }
}

#[test]
fn integer_never_beats_fractional() {
    for seed in 0..60 {
        let inst = generate_random(&params(seed, 2)).unwrap();
        assert!(oracle_integer(&inst).unwrap() <= oracle_value(&inst, false).unwrap(), "seed {seed}");
    }
}

#[test]
fn concave_oracle_dispatch() {
    let p = RandomParams { deviation: DeviationKind::ConcaveMix, ..params(5, 1) };
    let inst = generate_random(&p).unwrap();
    let v = oracle_value(&inst, false).unwrap();
    assert!(v <= solve(&inst, Method::Concave, false).unwrap().opt_value);
}
