use geodouble::doubling::{random_double_word, Double, DoubleWord, Side, Syllable};
use geodouble::freegroups::{Letter, SubgroupGraph, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Normal form `h · t_1 ⋯ t_n` built right to left, with right-coset
/// representatives and the `H`-part pushed leftward.
fn leftward_form(h: &SubgroupGraph, w: &DoubleWord) -> (Word, Vec<(Side, Word)>) {
    let mut placed: Vec<(Side, Word)> = Vec::new(); // reversed: last = leftmost
    let mut carry = Word::empty();
    for s in w.syllables().iter().rev() {
        let mut x = s.word.times(&carry);
        if placed.last().map(|p| p.0) == Some(s.side) {
            let (_, t) = placed.pop().unwrap();
            x = x.times(&t);
        }
        let rep = h.coset_representative(&x);
        if rep.is_empty() {
            carry = x;
        } else {
            carry = x.times(&rep.inverse());
            placed.push((s.side, rep));
        }
    }
    placed.reverse();
    (carry, placed)
}

fn oracle_in_subgroup(h: &SubgroupGraph, w: &DoubleWord) -> bool {
    leftward_form(h, w).1.is_empty()
}

fn oracle_equal(h: &SubgroupGraph, a: &DoubleWord, b: &DoubleWord) -> bool {
    let (tail, sylls) = leftward_form(h, &a.concat(&b.inverse()));
    tail.is_empty() && sylls.is_empty()
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen())).collect::<Word>().reduced()
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Double, Vec<Word>) {
    let rank = rng.gen_range(2..=3);
    let count = rng.gen_range(1..=4);
    let gens: Vec<Word> = (0..count)
        .map(|_| loop {
            let w = random_word(rng, rank, 6);
            if !w.is_empty() {
                break w;
            }
        })
        .collect();
    (Double::new(rank, &gens).unwrap(), gens)
}

fn h_element(rng: &mut ChaCha8Rng, gens: &[Word]) -> Word {
    let mut h = Word::empty();
    for _ in 0..rng.gen_range(0..3) {
        let g = &gens[rng.gen_range(0..gens.len())];
        h = if rng.gen() { h.times(g) } else { h.times(&g.inverse()) };
    }
    h
}

/// Rewrites `w` without changing its element: `H`-transfers across
/// syllable boundaries, same-side splits and inserted trivial syllables.
fn scramble(rng: &mut ChaCha8Rng, w: &DoubleWord, gens: &[Word], rank: usize) -> DoubleWord {
    let mut s: Vec<Syllable> = w.syllables().to_vec();
    for _ in 0..4 {
        match rng.gen_range(0..3) {
            0 if s.len() >= 2 => {
                let i = rng.gen_range(0..s.len() - 1);
                let h = h_element(rng, gens);
                s[i].word = s[i].word.concat(&h);
                s[i + 1].word = h.inverse().concat(&s[i + 1].word);
            }
            1 if !s.is_empty() => {
                let i = rng.gen_range(0..s.len());
                let x = random_word(rng, rank, 3);
                let side = s[i].side;
                let left = s[i].word.concat(&x);
                let right = x.inverse();
                s[i] = Syllable::new(side, left);
                s.insert(i + 1, Syllable::new(side, right));
            }
            _ => {
                let i = rng.gen_range(0..=s.len());
                let side = if rng.gen() { Side::Unprimed } else { Side::Primed };
                let h = h_element(rng, gens);
                s.insert(i, Syllable::new(side, h.clone()));
                s.insert(i + 1, Syllable::new(side.flip(), h.inverse()));
            }
        }
    }
    DoubleWord::from_syllables(s)
}

#[test]
fn fixed_subgroup_is_the_amalgamated_subgroup() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut in_h = 0;
    for _ in 0..20 {
        let (d, gens) = random_instance(&mut rng);
        for _ in 0..500 {
            let w = random_double_word(&mut rng, d.rank(), &gens, 6, 5);
            let nf = d.normal_form(&w);
            let fixed = d.is_fixed(&w);
            assert_eq!(fixed, nf.syllable_count() == 0, "{w}");
            assert_eq!(fixed, oracle_in_subgroup(d.subgroup(), &w), "{w}");
            assert_eq!(nf.syllable_count(), leftward_form(d.subgroup(), &w).1.len());
            in_h += fixed as usize;
        }
    }
    assert!(in_h > 0 && in_h < 20 * 500, "both outcomes sampled ({in_h})");
}

#[test]
fn normal_forms_are_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let (d, gens) = random_instance(&mut rng);
        for _ in 0..100 {
            let w = random_double_word(&mut rng, d.rank(), &gens, 5, 4);
            let v = scramble(&mut rng, &w, &gens, d.rank());
            assert_eq!(d.normal_form(&w), d.normal_form(&v), "{w} vs {v}");
            let u = random_double_word(&mut rng, d.rank(), &gens, 3, 3);
            assert_eq!(d.equal(&w, &u), oracle_equal(d.subgroup(), &w, &u));
        }
    }
}

#[test]
fn normal_form_conventions() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let (d, gens) = random_instance(&mut rng);
        for _ in 0..100 {
            let w = random_double_word(&mut rng, d.rank(), &gens, 6, 4);
            let nf = d.normal_form(&w);
            assert!(d.subgroup().contains(nf.tail()));
            for pair in nf.syllables().windows(2) {
                assert_ne!(pair[0].side, pair[1].side);
            }
            for s in nf.syllables() {
                assert!(!s.word.is_empty());
                assert!(!d.subgroup().contains(&s.word));
                assert_eq!(d.subgroup().left_coset_representative(&s.word), s.word);
            }
            let pairs = nf.pairs();
            for (i, (a, b)) in pairs.iter().enumerate() {
                assert!(!a.is_empty() || i == 0);
                assert!(!b.is_empty() || i + 1 == pairs.len());
            }
            // the normal form represents w
            assert!(oracle_equal(d.subgroup(), &nf.to_double_word(), &w));
        }
    }
}

#[test]
fn multiplication_depends_only_on_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let (d, gens) = random_instance(&mut rng);
        for _ in 0..100 {
            let a = random_double_word(&mut rng, d.rank(), &gens, 4, 4);
            let b = random_double_word(&mut rng, d.rank(), &gens, 4, 4);
            let c = random_double_word(&mut rng, d.rank(), &gens, 4, 4);
            let ab = d.multiply(&a, &b).to_double_word();
            let bc = d.multiply(&b, &c).to_double_word();
            assert_eq!(d.multiply(&ab, &c), d.multiply(&a, &bc));
            let na = d.normal_form(&a).to_double_word();
            assert_eq!(d.multiply(&na, &b), d.multiply(&a, &b));
            assert_eq!(d.multiply(&a, &a.inverse()).syllable_count(), 0);
        }
    }
}

#[test]
fn swap_is_an_involutive_automorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10 {
        let (d, gens) = random_instance(&mut rng);
        for _ in 0..100 {
            let w = random_double_word(&mut rng, d.rank(), &gens, 5, 4);
            let v = random_double_word(&mut rng, d.rank(), &gens, 5, 4);
            assert_eq!(d.swap(&d.swap(&w)), w);
            assert_eq!(d.normal_form(&d.swap(&w)), d.normal_form(&w).flipped());
            assert_eq!(
                d.normal_form(&d.swap(&w.concat(&v))),
                d.multiply(&d.swap(&w), &d.swap(&v))
            );
        }
        let h = DoubleWord::single(Side::Unprimed, h_element(&mut rng, &gens));
        assert!(d.equal(&d.swap(&h), &h));
    }
}

#[test]
fn worked_examples() {
    let gens: Vec<Word> = ["aa", "b", "abA"].iter().map(|s| s.parse().unwrap()).collect();
    let d = Double::new(2, &gens).unwrap();
    let h: DoubleWord = "u:aab".parse().unwrap();
    let nf = d.normal_form(&h);
    assert_eq!(nf.syllable_count(), 0);
    assert_eq!(nf.tail().to_string(), "aab");
    let a: DoubleWord = "u:a".parse().unwrap();
    let nf = d.normal_form(&a);
    // aH = AH, and the representative is the shortlex-least word
    assert_eq!(nf.syllables(), &[Syllable::new(Side::Unprimed, "A".parse().unwrap())]);
    assert_eq!(nf.tail().to_string(), "aa");
    assert_eq!(d.swap(&a).to_string(), "p:a");
    assert!(!d.is_fixed(&a));
    assert_eq!(d.normal_form(&DoubleWord::identity()).syllable_count(), 0);
}
