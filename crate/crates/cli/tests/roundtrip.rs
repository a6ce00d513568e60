use proptest::prelude::*;

use povm_cli::format::{fmt_sig, parse_povm, parse_state, serialize_povm, serialize_state};
use povm_tradeoff::povm::random_povm;
use povm_tradeoff::State;
use rand::SeedableRng;

proptest! {
    #[test]
    fn povm_files_round_trip_bit_exactly(dim in 1usize..5, n in 1usize..6, seed: u64) {
        let p = random_povm(dim, n, seed).unwrap();
        let q = parse_povm(&serialize_povm(&p), "mem").unwrap();
        for (x, y) in p.elements().iter().zip(q.elements()) {
            for (u, v) in x.as_slice().iter().zip(y.as_slice()) {
                prop_assert_eq!(u.re.to_bits(), v.re.to_bits());
                prop_assert_eq!(u.im.to_bits(), v.im.to_bits());
            }
        }
        prop_assert_eq!(p.outcomes(), q.outcomes());
    }

    #[test]
    fn state_files_round_trip(dim in 1usize..5, seed: u64) {
        let rho = State::random_mixed(dim, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let back = parse_state(&serialize_state(&rho), "mem").unwrap();
        prop_assert_eq!(rho.matrix(), back.matrix());
    }

    #[test]
    fn twelve_significant_digits(x in -1e3f64..1e3) {
        prop_assume!(x.abs() > 1e-6);
        let s = fmt_sig(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs().max(1e-300) * 10.0);
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        let significant = digits.trim_start_matches('0').len();
        prop_assert_eq!(significant, 12, "{}", s);
    }
}
