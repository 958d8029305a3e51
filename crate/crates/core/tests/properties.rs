use proptest::prelude::*;

use snchar::combinatorics::{decode_occupation, encode_occupation, Partition};
use snchar::tensor::{amplitude_batch, BlockCache, Mps};
use snchar::{character_row, EngineConfig, OccupationString};

fn partition(max_size: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_size, 1..=max_size).prop_filter_map("too large", move |parts| {
        (parts.iter().sum::<usize>() <= max_size).then(|| Partition::from_unsorted(parts).unwrap())
    })
}

proptest! {
    #[test]
    fn occupation_round_trip(lambda in partition(14)) {
        let n = lambda.size();
        let x = encode_occupation(&lambda, n).unwrap();
        prop_assert_eq!(x.len(), 2 * n);
        prop_assert_eq!(x.weight(), n);
        prop_assert_eq!(decode_occupation(&x).unwrap(), lambda);
    }

    #[test]
    fn display_parse_round_trip(lambda in partition(20)) {
        let parsed: Partition = lambda.to_string().parse().unwrap();
        prop_assert_eq!(parsed, lambda);
    }

    #[test]
    fn conjugation_is_an_involution(lambda in partition(20)) {
        prop_assert_eq!(lambda.conjugate().conjugate(), lambda.clone());
        prop_assert_eq!(lambda.conjugate().size(), lambda.size());
    }

    #[test]
    fn index_round_trip(index in 0usize..(1 << 16)) {
        let x = OccupationString::from_index(index, 16);
        prop_assert_eq!(x.index(), index);
        let reparsed: OccupationString = x.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, x);
    }

    #[test]
    fn cached_amplitudes_match_direct_contraction(nu in partition(8)) {
        let n = nu.size();
        let row = character_row(&nu, n, &EngineConfig::default()).unwrap();
        let state = snchar::build_psi(&nu, n, &EngineConfig::default()).unwrap().state;
        let xs: Vec<_> = row.entries.iter().map(|(l, _)| encode_occupation(l, n).unwrap()).collect();
        let batch = amplitude_batch(&state, &xs, &mut BlockCache::new());
        for (x, a) in xs.iter().zip(batch) {
            prop_assert!((state.amplitude(x) - a).abs() < 1e-9);
        }
    }

    #[test]
    fn product_states_have_unit_amplitude(index in 0usize..(1 << 10)) {
        let x = OccupationString::from_index(index, 10);
        let state = Mps::product_state(&x);
        prop_assert_eq!(state.amplitude(&x), 1.0);
        prop_assert_eq!(state.max_bond(), 1);
    }
}
