use casson::gauss::End;
use casson::moves::{apply, is_realizable, random_realizable, random_site, MoveMix};
use casson::skein::{descend, is_descending};
use casson::{
    arf, bracket, from_braid_word, parse_gauss_code, torus_knot_2, v2_gauss, v2_skein, v2_sym, ArrowPattern, Endpoint,
    GaussDiagram, Shape, Sign,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Any diagram at all, realizable or not.
fn any_diagram() -> impl Strategy<Value = GaussDiagram> {
    (0usize..8)
        .prop_flat_map(|n| {
            let ends: Vec<Endpoint> = (0..n)
                .flat_map(|c| [Endpoint { chord: c, end: End::Tail }, Endpoint { chord: c, end: End::Head }])
                .collect();
            (Just(ends).prop_shuffle(), proptest::collection::vec(any::<bool>(), n), any::<bool>())
        })
        .prop_map(|(seq, signs, long)| {
            // renumber chords by first appearance so `from_sequence` sees them in order
            let mut order = Vec::new();
            for e in &seq {
                if !order.contains(&e.chord) {
                    order.push(e.chord);
                }
            }
            let seq: Vec<Endpoint> = seq
                .iter()
                .map(|e| Endpoint { chord: order.iter().position(|&c| c == e.chord).unwrap(), end: e.end })
                .collect();
            let ids: Vec<u32> = (1..=signs.len() as u32).collect();
            let signs: Vec<Sign> = signs.iter().map(|&p| if p { Sign::Positive } else { Sign::Negative }).collect();
            let shape = if long { Shape::Long } else { Shape::Closed };
            GaussDiagram::from_sequence(shape, &seq, &ids, &signs).unwrap()
        })
}

fn realizable() -> impl Strategy<Value = GaussDiagram> {
    (any::<u64>(), 1usize..12, 0usize..12).prop_map(|(s, l, m)| random_realizable(s, l, m))
}

/// Same diagram with labels replaced by `k ↦ shift + 2k`.
fn relabelled(g: &GaussDiagram, shift: u32) -> GaussDiagram {
    let code = g.to_gauss_code();
    let mut out = String::new();
    let mut digits = String::new();
    for ch in code.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_digit() {
            digits.push(ch);
            continue;
        }
        if !digits.is_empty() {
            let k: u32 = digits.parse().unwrap();
            out.push_str(&(shift + 2 * k).to_string());
            digits.clear();
        }
        if ch != ' ' {
            out.push(ch);
        }
    }
    parse_gauss_code(&out).unwrap()
}

fn binomial2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn code_round_trip(g in any_diagram()) {
        let back = parse_gauss_code(&g.to_gauss_code()).unwrap();
        prop_assert_eq!(back.to_gauss_code(), g.to_gauss_code());
        prop_assert_eq!(back.len(), g.len());
    }

    #[test]
    fn brackets_ignore_labels(g in any_diagram(), shift in 0u32..50) {
        let h = relabelled(&g, shift);
        for p in ArrowPattern::interlocked_pairs() {
            prop_assert_eq!(bracket(&p, &g), bracket(&p, &h));
            prop_assert!(bracket(&p, &g).abs() <= binomial2(g.len()));
        }
    }

    #[test]
    fn arf_is_parity_of_v2(g in any_diagram()) {
        prop_assert_eq!(arf(&g) as i64, v2_gauss(&g).rem_euclid(2));
    }

    #[test]
    fn braid_words_give_one_chord_per_letter(letters in proptest::collection::vec(prop_oneof![Just(1), Just(-1)], 1..9)) {
        // s1^±1 words on two strands close to a knot when the length is odd
        prop_assume!(letters.len() % 2 == 1);
        let word: Vec<String> = letters.iter().map(|&l| if l > 0 { "s1".into() } else { "-s1".into() }).collect();
        let g = from_braid_word(&word.join(" ")).unwrap();
        prop_assert_eq!(g.len(), letters.len());
        let plus = g.chords().iter().filter(|c| c.sign == Sign::Positive).count();
        prop_assert_eq!(plus, letters.iter().filter(|&&l| l > 0).count());
    }

    #[test]
    fn realizable_oracles_agree(g in realizable()) {
        prop_assert!(is_realizable(&g));
        let v = v2_gauss(&g);
        prop_assert_eq!(v2_sym(&g), v);
        prop_assert_eq!(v2_skein(&g), Ok(v));
        prop_assert_eq!(bracket(&ArrowPattern::xdown(), &g), v);
    }

    #[test]
    fn base_point_never_matters(g in realizable(), k in 0usize..200) {
        let k = k % (2 * g.len()).max(1);
        prop_assert_eq!(v2_gauss(&g.rotated(k)), v2_gauss(&g));
    }

    #[test]
    fn random_moves_keep_v2_and_arf(g in realizable(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mix = MoveMix { base_point: 0.1, ..MoveMix::default() };
        let (v, a) = (v2_gauss(&g), arf(&g));
        let mut h = g;
        for _ in 0..10 {
            let site = random_site(&mut rng, &h, mix).unwrap();
            h = apply(&h, &site).unwrap();
            prop_assert_eq!(v2_gauss(&h), v);
            prop_assert_eq!(arf(&h), a);
        }
    }

    #[test]
    fn descending_is_a_fixed_point(g in realizable()) {
        let t = descend(&g).unwrap();
        prop_assert!(is_descending(&t.final_diagram));
        prop_assert_eq!(t.v2(), v2_gauss(&g));
        prop_assert!(descend(&t.final_diagram).unwrap().flips.is_empty());
    }
}

#[test]
fn torus_knots_match_braid_words() {
    for n in (3..=15).step_by(2) {
        let t = torus_knot_2(n).unwrap();
        let b = from_braid_word(&vec!["s1"; n as usize].join(" ")).unwrap();
        assert_eq!(t.to_gauss_code(), b.to_gauss_code());
        assert_eq!(v2_gauss(&t), (n * n - 1) / 8);
    }
}
