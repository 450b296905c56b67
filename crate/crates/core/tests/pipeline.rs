//! Cross-module flows through the public API.

use expdiv_core::analysis::{
    fit_target, named_constant, ConstantName, ConstantParams, ConstantsCache, FitTarget, Real,
};
use expdiv_core::checks::{run_suite, Suite};
use expdiv_core::dirichlet::{p_tilde_seq, phi_e_seq};
use expdiv_core::sieve::{sieve_values, summatory, SieveConfig};
use expdiv_core::{expfun, factor, Grid, MultiplicativeSpec};
use proptest::prelude::*;

#[test]
fn sieve_formula_and_dirichlet_agree() {
    let n = 20_000;
    let by_sieve = sieve_values(&MultiplicativeSpec::phi_e(), n).unwrap();
    assert_eq!(by_sieve, phi_e_seq(n as usize).unwrap());
    let p_tilde = sieve_values(&MultiplicativeSpec::p_tilde(), n).unwrap();
    assert_eq!(p_tilde, p_tilde_seq(n as usize).unwrap());
    for m in [1u64, 12, 720, 19_683] {
        assert_eq!(p_tilde.get(m as usize), expfun::p_tilde(&factor(m).unwrap()) as i128);
    }
}

#[test]
fn summatory_matches_prefix_sums() {
    let grid: Grid = "10,100,1000,12345".parse().unwrap();
    for spec in MultiplicativeSpec::builtins() {
        let sums = summatory(&spec, &grid).unwrap();
        let prefix = sieve_values(&spec, 12_345).unwrap().prefix_sums().unwrap();
        for pt in &sums.points {
            assert_eq!(pt.sum as i128, prefix[pt.x as usize - 1], "{} at {}", spec.name(), pt.x);
        }
    }
}

#[test]
fn cache_on_disk_feeds_fit() {
    let dir = std::env::temp_dir().join(format!("expdiv-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("constants.txt");
    let params = ConstantParams { prime_cut: 2_000, exponent_cut: 256 };
    let d2 = named_constant(&ConstantName::D(2), &params).unwrap();
    let mut cache = ConstantsCache::load(&path).unwrap();
    assert!(cache.is_empty());
    cache.insert(&d2);
    cache.save(&path).unwrap();

    let reloaded = ConstantsCache::load(&path).unwrap();
    let grid = Grid::geometric(10_000, 10_000_000, 2.0).unwrap();
    let fit = fit_target(&FitTarget::KFree(2), &grid, &SieveConfig::default(), &mut |name| {
        reloaded.get(name, &params).ok_or_else(|| expdiv_core::Error::Cache("missing".into()))
    })
    .unwrap();
    let gap = (&fit.constants[0].value - &d2.value).abs();
    assert!(gap < Real::parse("1e-55").unwrap());
    assert!(fit.report.verdict);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suites_at_moderate_size() {
    for (suite, n) in [(Suite::Oracle, 20_000), (Suite::Lemma3, 200_000), (Suite::Theorem7Exact, 300)] {
        let rep = run_suite(suite, n).unwrap();
        assert!(rep.passed, "{suite}: {:?}", rep.counterexample);
    }
}

proptest! {
    #[test]
    fn multiplicativity_across_coprime_pairs(a in 1u64..5_000, b in 1u64..5_000) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let (fa, fb, fab) = (factor(a).unwrap(), factor(b).unwrap(), factor(a * b).unwrap());
        prop_assert_eq!(expfun::phi_e(&fab), expfun::phi_e(&fa) * expfun::phi_e(&fb));
        prop_assert_eq!(expfun::sigma_tilde(&fab), expfun::sigma_tilde(&fa) * expfun::sigma_tilde(&fb));
        prop_assert_eq!(expfun::p_tilde(&fab), expfun::p_tilde(&fa) * expfun::p_tilde(&fb));
    }
}
