mod common;

use common::{check_layered, BUDGET};
use mvmatch::gen::{random_layered, rng};
use mvmatch::oracle::layered::brute_bottleneck;

#[test]
fn random_layered_dags_agree_with_brute_force() {
    let mut r = rng(0xDDF5);
    let mut checked = 0;
    let mut kinds = [0usize; 2];
    let mut failures = Vec::new();
    while checked < 2000 {
        let h = random_layered(12, 40, &mut r);
        if let Some(res) = check_layered(&h) {
            checked += 1;
            kinds[brute_bottleneck(&h, BUDGET).unwrap().is_some() as usize] += 1;
            if let Err(e) = res {
                failures.push(format!("{e}: {h:?}"));
            }
        }
    }
    assert!(failures.is_empty(), "{} failures, first: {}", failures.len(), failures[0]);
    eprintln!("free pairs {}, bottlenecks {}", kinds[0], kinds[1]);
    assert!(kinds[0] >= 100 && kinds[1] >= 100, "{kinds:?}");
}

#[test]
fn small_dags_exhaustive_seeds() {
    let mut failures = Vec::new();
    for seed in 0..5000u64 {
        let h = random_layered(4, 9, &mut rng(seed));
        if let Some(Err(e)) = check_layered(&h) {
            failures.push(format!("seed {seed}: {e}: {h:?}"));
        }
    }
    assert!(failures.is_empty(), "{} failures, first: {}", failures.len(), failures[0]);
}
