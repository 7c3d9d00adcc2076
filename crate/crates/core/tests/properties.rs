use pkalign::align::{align, brute_force_min_alignment, AlignOptions};
use pkalign::sequence::project;
use pkalign::structure::StructuralElement;
use pkalign::{is_decomposable, Alphabet, FoldedSequence, GeneratorSet, Interval, ScoreScheme, Structure};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn build(n: usize, gapped: bool, seed: u64) -> Structure {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bases: Vec<usize> = (1..=n).collect();
    bases.shuffle(&mut rng);
    let k = rng.gen_range(0..=n / 2);
    let pairings = bases[..2 * k].chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1])));
    let gap = gapped.then(|| rng.gen_range(0..=n));
    Structure::new(n, pairings, gap).unwrap()
}

fn structure(max_n: usize) -> impl Strategy<Value = Structure> {
    (0..=max_n, any::<bool>(), any::<u64>()).prop_map(|(n, g, seed)| build(n, g, seed))
}

fn folded(max_n: usize) -> impl Strategy<Value = FoldedSequence> {
    (0..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let s = build(n, false, seed);
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
        let w: String = (0..n).map(|_| *['A', 'C', 'G', 'U'].choose(&mut rng).unwrap()).collect();
        FoldedSequence::new(s, w).unwrap()
    })
}

fn identities(s: &Structure) -> Vec<Structure> {
    s.elements()
        .iter()
        .map(|e| match e {
            StructuralElement::UnpairedBase(_) => Structure::id0(),
            StructuralElement::Pairing(..) => Structure::id1(),
        })
        .collect()
}

proptest! {
    #[test]
    fn identities_are_neutral(s in structure(8)) {
        prop_assert_eq!(s.compose_all(&identities(&s)).unwrap(), s);
    }

    #[test]
    fn base_composition_sizes(s in structure(6), t in structure(5), pick in any::<usize>()) {
        let t = t.with_gap(None).unwrap();
        let free: Vec<usize> = (1..=s.len()).filter(|&i| !s.is_paired(i)).collect();
        prop_assume!(!free.is_empty());
        let i = free[pick % free.len()];
        let r = s.compose_at_base(i, &t).unwrap();
        prop_assert_eq!(r.len(), s.len() + t.len() - 1);
        prop_assert_eq!(r.pairings().len(), s.pairings().len() + t.pairings().len());
        prop_assert_eq!(r.is_gapped(), s.is_gapped());
    }

    #[test]
    fn full_restriction_is_identity(fs in folded(8)) {
        let all = if fs.is_empty() { Interval::Empty } else { Interval::new(1, fs.len()) };
        prop_assert_eq!(fs.restrict(all, None).unwrap(), fs);
    }

    #[test]
    fn restriction_is_idempotent(fs in folded(8), a in any::<usize>(), b in any::<usize>()) {
        prop_assume!(!fs.is_empty());
        let n = fs.len();
        let (lo, hi) = ((a % n + 1).min(b % n + 1), (a % n + 1).max(b % n + 1));
        let once = fs.restrict(Interval::new(lo, hi), None).unwrap();
        let all = if once.is_empty() { Interval::Empty } else { Interval::new(1, once.len()) };
        prop_assert_eq!(once.restrict(all, None).unwrap(), once.clone());
        prop_assert!(once.structure().pairings().len() <= fs.structure().pairings().len());
    }

    #[test]
    fn projection_without_blanks_is_identity(fs in folded(8)) {
        let word: Vec<Option<char>> = fs.word().iter().map(|&c| Some(c)).collect();
        prop_assert_eq!(project(fs.structure(), &word).unwrap(), fs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disconnected_shortcut_matches_full_recursion(a in folded(6), b in folded(6)) {
        let scheme = ScoreScheme::unit(Alphabet::rna());
        let gens = GeneratorSet::builtin();
        let full = AlignOptions { split_disconnected: false, ..Default::default() };
        let quick = align(&a, &b, &scheme, &gens, AlignOptions::default()).unwrap().score;
        prop_assert_eq!(quick, align(&a, &b, &scheme, &gens, full).unwrap().score);
    }

    #[test]
    fn exact_scores_are_symmetric(a in folded(6), b in folded(6)) {
        let scheme = ScoreScheme::unit(Alphabet::rna());
        let gens = GeneratorSet::builtin();
        prop_assume!(is_decomposable(a.structure(), &gens) || is_decomposable(b.structure(), &gens));
        let ab = align(&a, &b, &scheme, &gens, AlignOptions::default()).unwrap().score;
        let ba = align(&b, &a, &scheme, &gens, AlignOptions::default()).unwrap().score;
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn never_below_the_minimum(a in folded(6), b in folded(6)) {
        let scheme = ScoreScheme::unit(Alphabet::rna());
        let gens = GeneratorSet::builtin();
        let (o, _) = brute_force_min_alignment(&a, &b, &scheme, 12).unwrap();
        prop_assert!(align(&a, &b, &scheme, &gens, AlignOptions::default()).unwrap().score >= o);
    }
}

/// Two letter-identical copies of a non-decomposable structure align with
/// score 0, but every semi-decomposable alignment must break a pairing.
#[test]
fn identical_non_decomposable_copies() {
    let gens = GeneratorSet::builtin();
    let s = Structure::new(10, [(1, 4), (2, 7), (3, 9), (5, 8), (6, 10)], None).unwrap();
    let a = FoldedSequence::new(s, "GACUAGCUAG").unwrap();
    for scheme in [ScoreScheme::unit(Alphabet::rna()), ScoreScheme::additive(Alphabet::rna())] {
        let (o, _) = brute_force_min_alignment(&a, &a, &scheme, 20).unwrap();
        assert_eq!(o, 0);
        assert_eq!(align(&a, &a, &scheme, &gens, AlignOptions::default()).unwrap().score, 4);
    }
}
