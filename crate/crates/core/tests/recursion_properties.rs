use cylrev::gf2::Word;
use cylrev::recursion::{orbit_of_seed, CompanionMap, PositionCollection};
use cylrev::spectrum::spectrum_bruteforce;
use proptest::prelude::*;

fn seed(delta: usize, bits: u64) -> Word {
    Word::from((0..delta).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn every_seed_is_purely_periodic_within_the_bound() {
    for positions in [
        vec![1, 2, 4],
        vec![1, 3, 5],
        vec![0, 2, 3, 7, 9],
        vec![1, 3, 11],
        vec![0, 5, 6],
    ] {
        let c = PositionCollection::new(positions).unwrap();
        let d = c.span();
        let spectrum = spectrum_bruteforce(&c).unwrap();
        for bits in 0..1u64 << d {
            let o = orbit_of_seed(&c, &seed(d, bits)).unwrap();
            assert_eq!(o.preperiod_len, 0, "{c} seed {bits:b}");
            assert!(o.preperiod_len + o.period_len < 1 << d);
            if bits != 0 {
                assert!(spectrum.exact_periods().contains(&(o.period_len as u64)));
            }
        }
    }
}

#[test]
fn companion_map_is_a_permutation() {
    let c = PositionCollection::new(vec![0, 3, 7, 15]).unwrap();
    let map = CompanionMap::new(&c.derive()).unwrap();
    let mut seen = vec![false; 1 << 15];
    for w in 0..1u64 << 15 {
        let next = map.step(w);
        assert!(!std::mem::replace(&mut seen[next as usize], true));
        assert_eq!(map.step_back(next), w);
    }
}

#[test]
fn small_exponential_collection_periods() {
    let c = PositionCollection::new(vec![1, 2, 4, 8]).unwrap();
    let periods: Vec<u64> = spectrum_bruteforce(&c)
        .unwrap()
        .exact_periods()
        .iter()
        .copied()
        .collect();
    assert_eq!(periods, vec![1, 3, 15]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// A period word tiled around any multiple of its length is annihilated by the rule.
    #[test]
    fn tiled_period_words_are_in_the_nullspace(
        inner in prop::collection::btree_set(1usize..12, 0..4),
        last in 2usize..13,
        bits in any::<u64>(),
        reps in 1usize..4,
    ) {
        let mut p: Vec<usize> = vec![0];
        p.extend(inner.into_iter().filter(|&x| x < last));
        p.push(last);
        let c = PositionCollection::new(p).unwrap();
        let o = orbit_of_seed(&c, &seed(last, bits & ((1 << last) - 1))).unwrap();
        let t = o.period_len;
        let n = t * (reps + (last + 1).div_ceil(t));
        let l = o.period_word.tile(n);
        let v = c.rule(n).unwrap();
        prop_assert!(v.convolve(&l).unwrap().is_zero());
    }

    /// The sum of two solutions has a period dividing the lcm of theirs.
    #[test]
    fn sum_of_periodic_solutions(
        a in any::<u64>(),
        b in any::<u64>(),
        which in 0usize..3,
    ) {
        let c = [
            PositionCollection::new(vec![1, 3, 5]).unwrap(),
            PositionCollection::new(vec![0, 1, 2, 5, 8]).unwrap(),
            PositionCollection::new(vec![2, 5, 7, 8, 9]).unwrap(),
        ][which].clone();
        let d = c.span();
        let mask = (1u64 << d) - 1;
        let (s, h) = (
            orbit_of_seed(&c, &seed(d, a & mask)).unwrap(),
            orbit_of_seed(&c, &seed(d, b & mask)).unwrap(),
        );
        let lcm = s.period_len / gcd(s.period_len, h.period_len) * h.period_len;
        let sum = s.period_word.tile(lcm).add(&h.period_word.tile(lcm)).unwrap();
        let sum_word = Word::from(&sum);
        prop_assert_eq!(lcm % sum_word.minimal_cyclic_period(), 0);
        let n = lcm * (c.last() + 1);
        let tiled = sum_word.tile(n);
        prop_assert!(c.rule(n).unwrap().convolve(&tiled).unwrap().is_zero());
    }
}
