use mebval::scenarios::{random_instance, Strategy};
use mebval::validity::{relaxation_factor, theoretical_bound};
use mebval::{aggregate, meb, Rule};

const N: usize = 5;
const T: usize = 2;
const D: usize = 2;

fn factor(rule: Rule, strategy: Strategy, seed: u64) -> f64 {
    let set = random_instance(N, T, D, 1.0, seed, strategy).unwrap();
    let honest = set.honest().unwrap();
    let y = aggregate(rule, &set, T).unwrap().output;
    relaxation_factor(&y, &meb(&honest).unwrap())
}

#[test]
fn search_beats_uniform_far_on_medoid() {
    let mut above = 0;
    for seed in 0..20 {
        let searched = factor(Rule::Medoid, Strategy::Search { rule: Rule::Medoid, starts: 8 }, seed);
        let far = factor(Rule::Medoid, Strategy::UniformFar, seed);
        assert!(searched >= far - 1e-12, "seed {seed}: search {searched} < far {far}");
        above += usize::from(searched > 1.0 + 1e-9);
    }
    assert!(above >= 5, "search left the honest ball on only {above}/20 seeds");
}

#[test]
fn search_stays_within_minmax_bound() {
    let bound = theoretical_bound(Rule::MinmaxMeb, N, T, D).unwrap();
    for seed in 0..10 {
        let f = factor(Rule::MinmaxMeb, Strategy::Search { rule: Rule::MinmaxMeb, starts: 4 }, seed);
        assert!(f <= bound + 1e-6, "seed {seed}: factor {f} > bound {bound}");
    }
}
