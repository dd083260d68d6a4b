use crate::freegroups::{Letter, Word};

use super::FinitePresentation;

/// Relators longer than this are never used to eliminate a generator.
pub const TIETZE_MAX_RELATOR_LEN: usize = 16;

fn shift_letter(l: Letter, removed: usize) -> Letter {
    Letter::new(if l.gen > removed { l.gen - 1 } else { l.gen }, l.inverse)
}

/// Replaces generator `gen` by `image` (a word not involving `gen`) and
/// renumbers the generators above it.
fn substitute(w: &Word, gen: usize, image: &Word) -> Word {
    let image: Word = image.letters().iter().map(|&l| shift_letter(l, gen)).collect();
    let image_inv = image.inverse();
    let mut out = Word::empty();
    for &l in w.letters() {
        if l.gen == gen {
            out = out.times(if l.inverse { &image_inv } else { &image });
        } else {
            out = out.times(&Word::from_letters(vec![shift_letter(l, gen)]));
        }
    }
    out
}

/// Shortest relator of bounded length containing some generator exactly
/// once, with that generator and its position.
fn elimination_candidate(p: &FinitePresentation) -> Option<(usize, usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, r) in p.relators.iter().enumerate() {
        if r.len() > TIETZE_MAX_RELATOR_LEN || best.is_some_and(|(bi, _, _)| p.relators[bi].len() <= r.len()) {
            continue;
        }
        let once = (0..p.generators).find(|&g| r.occurrences(g) == 1);
        if let Some(g) = once {
            let pos = r.letters().iter().position(|l| l.gen == g).expect("occurs once");
            best = Some((i, g, pos));
        }
    }
    best
}

fn tidy(relators: Vec<Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in relators {
        let r = r.cyclically_reduced();
        if !r.is_empty() && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Drops trivial and repeated relators and eliminates generators that occur
/// exactly once in a short relator.
pub fn tietze_simplify(p: &FinitePresentation) -> FinitePresentation {
    let mut cur = FinitePresentation {
        generators: p.generators,
        relators: tidy(p.relators.clone()),
    };
    while let Some((ri, g, pos)) = elimination_candidate(&cur) {
        let r = &cur.relators[ri];
        let letters = r.letters();
        // r = u x^e v, so x^e = u⁻¹ v⁻¹
        let u = Word::from_letters(letters[..pos].to_vec());
        let v = Word::from_letters(letters[pos + 1..].to_vec());
        let x_pow = u.inverse().times(&v.inverse());
        let image = if letters[pos].inverse { x_pow.inverse() } else { x_pow };
        let relators = cur
            .relators
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ri)
            .map(|(_, w)| substitute(w, g, &image))
            .collect();
        cur = FinitePresentation {
            generators: cur.generators - 1,
            relators: tidy(relators),
        };
    }
    cur
}
