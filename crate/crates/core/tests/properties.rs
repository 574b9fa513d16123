use expsum_core::counting::{dk_times, product_difference_counts, CountOptions, Engine, Variant};
use expsum_core::harness::{csv_string, run_sweep, ExperimentConfig};
use expsum_core::sets::build_set;
use expsum_core::sums::{fourier_l1, multilinear_sum};
use expsum_core::{FieldContext, ResidueSet, Weights};
use proptest::prelude::*;

const PRIMES: [u64; 6] = [5, 7, 11, 13, 17, 19];

fn explicit(ctx: &FieldContext, xs: &[u64]) -> ResidueSet {
    let mut v: Vec<u64> = xs.iter().map(|x| x % ctx.p()).collect();
    v.sort_unstable();
    v.dedup();
    let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    build_set(ctx, &format!("explicit:{}", list.join(",")).parse().unwrap()).unwrap()
}

fn instance() -> impl Strategy<Value = (u64, Vec<Vec<u64>>)> {
    (0..PRIMES.len(), 1usize..=3).prop_flat_map(|(i, k)| {
        let p = PRIMES[i];
        (Just(p), prop::collection::vec(prop::collection::vec(0..p, 1..=4), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree((p, raw) in instance()) {
        let ctx = FieldContext::new(p).unwrap();
        let sets: Vec<ResidueSet> = raw.iter().map(|s| explicit(&ctx, s)).collect();
        for variant in [Variant::Full, Variant::Star, Variant::Tilde] {
            let brute = dk_times(&ctx, &sets, variant, &CountOptions::brute()).unwrap();
            let school = dk_times(&ctx, &sets, variant, &CountOptions::with_engine(Engine::Schoolbook)).unwrap();
            let ntt = dk_times(&ctx, &sets, variant, &CountOptions::with_engine(Engine::Ntt)).unwrap();
            prop_assert_eq!(&brute, &school);
            prop_assert_eq!(&brute, &ntt);
        }
    }

    #[test]
    fn counts_conserve_mass((p, raw) in instance()) {
        let ctx = FieldContext::new(p).unwrap();
        let sets: Vec<ResidueSet> = raw.iter().map(|s| explicit(&ctx, s)).collect();
        let counts = product_difference_counts(&ctx, &sets, &CountOptions::default()).unwrap();
        let expected: u64 = sets.iter().map(|s| (s.len() * s.len()) as u64).product();
        prop_assert_eq!(counts.nonzero.total() + &counts.zero_count, expected.into());
    }

    #[test]
    fn parseval_holds(p in prop::sample::select(vec![7u64, 31, 101]), xs in prop::collection::vec(0u64..1000, 1..20)) {
        let ctx = FieldContext::new(p).unwrap();
        let set = explicit(&ctx, &xs);
        let (_, l2) = fourier_l1(&ctx, &set).unwrap();
        let want = (p * set.len() as u64) as f64;
        prop_assert!((l2 - want).abs() <= 1e-9 * want);
    }

    #[test]
    fn unit_sum_is_trivially_bounded((p, raw) in instance()) {
        let ctx = FieldContext::new(p).unwrap();
        let sets: Vec<ResidueSet> = raw
            .iter()
            .map(|s| explicit(&ctx, &s.iter().map(|x| 1 + x % (p - 1)).collect::<Vec<_>>()))
            .collect();
        let s = multilinear_sum(&ctx, &sets, &Weights::SeededRandom(1), u128::MAX).unwrap();
        let trivial: f64 = sets.iter().map(|x| x.len() as f64).product();
        prop_assert!(s.modulus <= trivial * (1.0 + 1e-12));
    }
}

#[test]
fn sweep_output_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let config: ExperimentConfig = "quantity = energy\nprimes = 11, 13\nset = interval:1..5\nset = subgroup:3\n"
        .parse()
        .unwrap();
    let rows = run_sweep(&config).unwrap();
    let text = csv_string(&rows).unwrap();
    std::fs::write(&path, &text).unwrap();
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 4);
    // E+ of {1, ..., 5} is (2*5^3 + 5)/3 = 85.
    assert_eq!(&records[0][3], "85");
    assert_eq!(records[0][5].len(), 0);
}
