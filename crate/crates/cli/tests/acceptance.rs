//! Acceptance run: one PASS/FAIL line per criterion, each with its runtime
//! budget. Values are recomputed by oracles local to this file and compared
//! with the library and the `geodouble` binary.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use geodouble::construction::{generate_paper_scheme, min_n_for_ratio, FamilyParams};
use geodouble::doubling::{random_double_word, Double, DoubleWord, Side};
use geodouble::freegroups::{stallings_graph, Letter, SubgroupGraph, SubgroupIndex, Word};
use geodouble::isometries::{
    commute, commuting_criterion, criterion_residuals, random_commuting_pair, random_isometry, CommutingCase,
    Isometry, Tolerance,
};
use geodouble::presentations::{
    covering_rank_bound, rank_audit, smith_normal_form, surface_rank, sweep_cases, IntegerMatrix, RankAuditCase,
};
use geodouble::triangulation::{GluingScheme, EDGE_VERTICES};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn geodouble(args: &[&str]) -> (bool, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_geodouble"))
        .args(args)
        .env_remove("GEODOUBLE_SEED")
        .output()
        .expect("spawn geodouble");
    (o.status.success(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- family

struct Find(Vec<usize>);

impl Find {
    fn root(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }
    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.root(a), self.root(b));
        self.0[ra] = rb;
    }
    fn classes(&mut self) -> Vec<usize> {
        let mut sizes = BTreeMap::new();
        for i in 0..self.0.len() {
            *sizes.entry(self.root(i)).or_insert(0) += 1;
        }
        sizes.into_values().collect()
    }
}

/// Edge and vertex orbits of a scheme, from the vertex maps of its pairings.
fn orbits(s: &GluingScheme) -> (Vec<usize>, usize) {
    let t = s.tet_count();
    let mut edges = Find((0..6 * t).collect());
    let mut verts = Find((0..4 * t).collect());
    let edge_index = |x: usize, y: usize| EDGE_VERTICES.iter().position(|e| *e == [x.min(y), x.max(y)]).unwrap();
    for p in s.pairings() {
        let map = p.vertex_map();
        let face = p.side_a.face.vertices();
        for (i, &x) in face.iter().enumerate() {
            verts.join(4 * p.side_a.tet + x, 4 * p.side_b.tet + map[x]);
            for &y in &face[i + 1..] {
                edges.join(6 * p.side_a.tet + edge_index(x, y), 6 * p.side_b.tet + edge_index(map[x], map[y]));
            }
        }
    }
    (edges.classes(), verts.classes().len())
}

fn criterion_family() -> Verdict {
    let mut slowest = Duration::ZERO;
    for n in [4u64, 5, 7, 8, 10, 11, 13] {
        let start = Instant::now();
        let (ok, out) = geodouble(&["family", "verify", "--n", &n.to_string()]);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(ok && !out.contains("FAIL"), || format!("n={n}: verify failed\n{out}"))?;
        ensure(elapsed < Duration::from_secs(1), || format!("n={n}: {elapsed:?} over budget"))?;

        let s = generate_paper_scheme(FamilyParams::new(n).unwrap());
        let (edge_classes, vertex_classes) = orbits(&s);
        let v = 3 * n as usize;
        ensure(edge_classes == vec![v, v], || format!("n={n}: edge orbits {edge_classes:?}"))?;
        ensure(vertex_classes == 1, || format!("n={n}: {vertex_classes} vertex orbits"))?;
        // link of the single vertex: 4n triangles, 6n edges, one vertex per
        // end of each of the two edge classes
        let chi = 4 - 6 * n as i64 + 4 * n as i64;
        ensure(chi == 2 - 2 * (n as i64 - 1), || format!("n={n}: chi {chi}"))?;
        let handlebody = s.pairings().len() - s.tet_count() + 1;
        ensure(handlebody == n as usize + 1, || format!("n={n}: handlebody genus {handlebody}"))?;
        ensure(3 * n > 6, || format!("n={n}: angle 2pi/{} not below 60deg", 3 * n))?;
        for needle in [
            format!("boundary genus: expected {0}, observed {0}", n - 1),
            format!("handlebody genus: expected {0}, observed {0}", n + 1),
            format!("dihedral angle: expected 2pi/{0}, observed 2pi/{0}", 3 * n),
        ] {
            ensure(out.contains(&needle), || format!("n={n}: missing {needle:?}"))?;
        }
    }
    Ok(format!("n in {{4,5,7,8,10,11,13}}, slowest verify {slowest:.2?}"))
}

fn criterion_ratios() -> Verdict {
    let start = Instant::now();
    let (ok, out) = geodouble(&["--machine", "family", "report", "--n-min", "4", "--n-max", "10000"]);
    ensure(ok, || "report exited nonzero".into())?;
    let mut rows = 0;
    for line in out.lines().filter(|l| l.starts_with("n=")) {
        let f: BTreeMap<&str, &str> = line.split(' ').filter_map(|kv| kv.split_once('=')).collect();
        let n: i64 = f["n"].parse().unwrap();
        ensure(n % 3 != 0, || format!("inadmissible n={n} listed"))?;
        let closed: Ratio<i64> = f["ratio"].parse().unwrap();
        let cusped: Ratio<i64> = f["cusped_ratio"].parse().unwrap();
        // cross-multiplied comparison with the closed forms
        ensure(*closed.numer() * (n + 3) == (2 * n - 2) * *closed.denom(), || format!("n={n}: closed {closed}"))?;
        ensure(*cusped.numer() * (n + 4) == (2 * n - 3) * *cusped.denom(), || format!("n={n}: cusped {cusped}"))?;
        ensure(*closed.numer() < 2 * *closed.denom() && *cusped.numer() < 2 * *cusped.denom(), || {
            format!("n={n}: ratio not below 2")
        })?;
        rows += 1;
    }
    let expected_rows = (4..=10000).filter(|n| n % 3 != 0).count();
    ensure(rows == expected_rows, || format!("{rows} rows, expected {expected_rows}"))?;
    // smallest admissible n with (2n-2)/(n+3) > 19/10
    let scan = (4i64..).find(|n| n % 3 != 0 && 10 * (2 * n - 2) > 19 * (n + 3)).unwrap();
    let lib = min_n_for_ratio(Ratio::new(1, 10)).map_err(|e| e.to_string())?;
    ensure(lib == 79 && scan == 79, || format!("min n: library {lib}, scan {scan}"))?;
    let (_, min_out) = geodouble(&["--machine", "family", "min-n", "--epsilon", "0.1"]);
    ensure(min_out.contains("\nn=79\n"), || format!("cli min-n:\n{min_out}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("{elapsed:?} over budget"))?;
    Ok(format!("{rows} admissible n up to 10^4 exact, min_n(0.1) = 79, {elapsed:.2?}"))
}

// ---------------------------------------------------------------- doubling

/// `h · t_1 ⋯ t_n` assembled right to left with right-coset representatives;
/// the element lies in `H` exactly when no `t_i` survives.
fn leftward_syllables(h: &SubgroupGraph, w: &DoubleWord) -> usize {
    let mut placed: Vec<(Side, Word)> = Vec::new();
    let mut carry = Word::empty();
    for s in w.syllables().iter().rev() {
        let mut x = s.word.times(&carry);
        if placed.last().map(|p| p.0) == Some(s.side) {
            x = x.times(&placed.pop().unwrap().1);
        }
        let rep = h.coset_representative(&x);
        if rep.is_empty() {
            carry = x;
        } else {
            carry = x.times(&rep.inverse());
            placed.push((s.side, rep));
        }
    }
    placed.len()
}

fn random_reduced(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let mut w = Word::empty();
    while w.len() < len {
        w = w.times(&Word::from_letters(vec![Letter::new(rng.gen_range(0..rank), rng.gen())]));
    }
    w
}

fn criterion_doubling() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (instances, words) = (20, 1000);
    let (mut discrepancies, mut fixed) = (0, 0);
    for _ in 0..instances {
        let rank = rng.gen_range(2..=3);
        let count = rng.gen_range(1..=4);
        let gens: Vec<Word> = (0..count).map(|_| random_reduced(&mut rng, rank, 6)).collect();
        let d = Double::new(rank, &gens).map_err(|e| e.to_string())?;
        for _ in 0..words {
            let w = random_double_word(&mut rng, rank, &gens, 6, 5);
            let is_fixed = d.is_fixed(&w);
            let zero = d.normal_form(&w).syllable_count() == 0;
            let projected = leftward_syllables(d.subgroup(), &w) == 0;
            if is_fixed != zero || zero != projected {
                discrepancies += 1;
            }
            fixed += is_fixed as usize;
        }
    }
    let total = instances * words;
    ensure(discrepancies == 0, || format!("{discrepancies} discrepancies"))?;
    ensure(fixed > 0 && fixed < total, || format!("degenerate sample: {fixed}/{total} fixed"))?;
    let (ok, out) = geodouble(&["double", "fixtest", "--rank", "2", "--H", "aa,b,abA", "--samples", "1000", "--seed", "7"]);
    ensure(ok && out.contains("agreement: 1000/1000"), || format!("cli fixtest:\n{out}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("{elapsed:?} over budget"))?;
    Ok(format!("{instances} instances x {words} words, {fixed} fixed, 0 discrepancies, {elapsed:.2?}"))
}

// ---------------------------------------------------------------- free groups

fn random_transitive_action(rng: &mut ChaCha8Rng, rank: usize, n: usize) -> Vec<Vec<usize>> {
    loop {
        let perms: Vec<Vec<usize>> = (0..rank)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for p in &perms {
                for v in [p[u], p.iter().position(|&x| x == u).unwrap()] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        if seen.into_iter().all(|s| s) {
            return perms;
        }
    }
}

/// Schreier generators of the stabilizer of point 0 for a BFS transversal.
fn schreier_generators(perms: &[Vec<usize>]) -> Vec<Word> {
    let n = perms[0].len();
    let mut tree: Vec<Option<Word>> = vec![None; n];
    tree[0] = Some(Word::empty());
    let mut tree_edges = HashSet::new();
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for (g, p) in perms.iter().enumerate() {
            for inv in [false, true] {
                let v = if inv { p.iter().position(|&x| x == u).unwrap() } else { p[u] };
                if tree[v].is_none() {
                    let mut w = tree[u].clone().unwrap();
                    w.push(Letter::new(g, inv));
                    tree[v] = Some(w);
                    tree_edges.insert(if inv { (v, g) } else { (u, g) });
                    queue.push_back(v);
                }
            }
        }
    }
    let mut gens = Vec::new();
    for u in 0..n {
        for (g, p) in perms.iter().enumerate() {
            if !tree_edges.contains(&(u, g)) {
                let mut w = tree[u].clone().unwrap();
                w.push(Letter::gen(g));
                gens.push(w.times(&tree[p[u]].clone().unwrap().inverse()));
            }
        }
    }
    gens
}

fn criterion_nielsen_schreier() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let trials = 60;
    for _ in 0..trials {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=6);
        let perms = random_transitive_action(&mut rng, k, n);
        let g = stallings_graph(k, &schreier_generators(&perms)).map_err(|e| e.to_string())?;
        ensure(g.is_complete() && g.index() == SubgroupIndex::Finite(n), || format!("k={k} n={n}: index {}", g.index()))?;
        let formula = n * (k - 1) + 1;
        ensure(g.rank() == formula, || format!("k={k} n={n}: rank {} vs {formula}", g.rank()))?;
        let bound = covering_rank_bound(g.rank() as u64, n as u64).map_err(|e| e.to_string())?;
        ensure(bound == Ratio::from_integer(k as i64), || format!("k={k} n={n}: bound {bound}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("{elapsed:?} over budget"))?;
    Ok(format!("{trials} finite-index subgroups, rank = n(k-1)+1 and bound = k, {elapsed:.2?}"))
}

// ---------------------------------------------------------------- isometries

/// `xy = ±yx` on the raw determinant-one matrices.
fn matrices_commute(a: &Isometry, b: &Isometry, eps: f64) -> bool {
    let (x, y) = (a.matrix(), b.matrix());
    let prod = |p: &geodouble::isometries::Mat, q: &geodouble::isometries::Mat| {
        let mut r = [[geodouble::isometries::C::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
            }
        }
        r
    };
    let (xy, yx) = (prod(x, y), prod(y, x));
    [1.0, -1.0]
        .iter()
        .any(|&s| (0..2).all(|i| (0..2).all(|j| (xy[i][j] - yx[i][j] * s).norm() <= eps)))
}

fn criterion_isometries() -> Verdict {
    let start = Instant::now();
    let tol = Tolerance::new(1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cases = [
        CommutingCase::SharedParabolicPoint,
        CommutingCase::SharedAxis,
        CommutingCase::PerpendicularPiRotations,
    ];
    let mut constructed = 0;
    for case in cases {
        for _ in 0..200 {
            let (a, b) = random_commuting_pair(&mut rng, case).ok_or("no pair")?;
            ensure(matrices_commute(&a, &b, 1e-8), || format!("{case}: oracle says {a} and {b} do not commute"))?;
            ensure(commute(&a, &b, tol), || format!("{case}: commute=false for {a}, {b}"))?;
            let tag = commuting_criterion(&a, &b, tol).map_err(|e| e.to_string())?;
            ensure(tag == case, || format!("{case}: tagged {tag} for {a}, {b}"))?;
            constructed += 1;
        }
    }
    let (mut generic, mut rejected) = (0, 0);
    while generic < 600 {
        let (a, b) = (random_isometry(&mut rng), random_isometry(&mut rng));
        if criterion_residuals(&a, &b, tol).map_err(|e| e.to_string())?.min() <= 1e-6 {
            rejected += 1;
            continue;
        }
        ensure(!matrices_commute(&a, &b, 1e-9), || format!("oracle says generic {a}, {b} commute"))?;
        ensure(!commute(&a, &b, tol), || format!("generic pair commutes: {a}, {b}"))?;
        let tag = commuting_criterion(&a, &b, tol).map_err(|e| e.to_string())?;
        ensure(tag == CommutingCase::None, || format!("generic pair tagged {tag}"))?;
        generic += 1;
    }
    let a: Isometry = "i,0;0,-i".parse().map_err(|e: geodouble::isometries::IsometryError| e.to_string())?;
    let b: Isometry = "0,1;-1,0".parse().map_err(|e: geodouble::isometries::IsometryError| e.to_string())?;
    ensure(matrices_commute(&a, &b, 0.0) && commute(&a, &b, tol), || "pi-rotation pair does not commute".into())?;
    let (ok, out) = geodouble(&["--machine", "iso", "commute", "--m1", "i,0;0,-i", "--m2", "0,1;-1,0"]);
    ensure(ok && out.contains("commute=true") && out.contains("criterion=perpendicular_pi_rotations"), || {
        format!("cli commute:\n{out}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("{elapsed:?} over budget"))?;
    Ok(format!(
        "{constructed} constructed, {generic} generic ({rejected} rejected), pi-rotation pair commutes, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------- smith form

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            (if j % 2 == 0 { 1 } else { -1 }) * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    out.extend(subsets(n - 1, k - 1).into_iter().map(|mut s| {
        s.push(n - 1);
        s
    }));
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn minors_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (m.len(), m[0].len());
    let mut d = vec![1i64];
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        d.push(g);
    }
    d.windows(2).map(|w| w[1] / w[0]).collect()
}

fn criterion_smith() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let count = 200;
    for _ in 0..count {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let expected: Vec<String> = minors_factors(&m).iter().map(i64::to_string).collect();
        let got: Vec<String> = smith_normal_form(&IntegerMatrix::from_rows(&m))
            .factors
            .iter()
            .map(|f| f.to_string())
            .filter(|f| f != "0")
            .collect();
        ensure(got == expected, || format!("{m:?}: library {got:?}, minors {expected:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("{elapsed:?} over budget"))?;
    Ok(format!("{count} random matrices up to 5x5 match, {elapsed:.2?}"))
}

// ---------------------------------------------------------------- rank audit

fn criterion_audit() -> Verdict {
    let start = Instant::now();
    let (ok, out) = geodouble(&["--machine", "audit", "--sweep", "--g-max", "10", "--m-max", "5", "--l-max", "5"]);
    let cases = sweep_cases(10, 5, 5);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("g=")).collect();
    ensure(ok && rows.len() == cases.len(), || format!("sweep printed {} of {} cases", rows.len(), cases.len()))?;
    ensure(rows.iter().all(|l| l.ends_with("strict=true")), || "a chain is not strict".into())?;
    // every consistent flag combination is covered
    let kinds: HashSet<(bool, bool, bool)> = cases.iter().map(|c| (c.orientable, c.separating, c.same_component)).collect();
    ensure(kinds.len() == 4, || format!("{} case kinds", kinds.len()))?;

    let int = |x: u64| Ratio::from_integer(x as i64);
    let mut quoted = 0;
    for g in 0..=10u64 {
        for m in 0..=5u64 {
            if m > 0 {
                // separating: each half has boundary genus g + k/2, doubled to 2g + k
                let k = 2 * m;
                let r = rank_audit(&RankAuditCase::new(g, m, 0, true, true, false)).map_err(|e| e.to_string())?;
                let half = Ratio::new((2 * g + k) as i64, 2);
                ensure(r.step("annulus-capping").map(|s| s.value) == Some(half), || format!("g={g} m={m}: capping"))?;
                ensure(r.final_value == half * 2 && r.final_value == int(2 * g + k), || format!("g={g} m={m}: doubled"))?;
                ensure(r.surface_rank == 2 * g + k - 1, || format!("g={g} m={m}: rank"))?;
                quoted += 1;
            }
            // two copies in different boundary components: g(S1)+m+g(S2)+m
            let r = rank_audit(&RankAuditCase::new(g, m, 0, true, false, false)).map_err(|e| e.to_string())?;
            ensure(r.step("boundary-genus").map(|s| s.value) == Some(int(g + m + g + m)), || {
                format!("g={g} m={m}: boundary genus")
            })?;
            ensure(r.final_value == int(2 * g + 2 * m + 1), || format!("g={g} m={m}: final"))?;
            quoted += 1;
            for l in 0..=5u64 {
                if g == 0 {
                    continue;
                }
                // non-orientable: g - 1 + 2m + l = k + g - 1
                let k = 2 * m + l;
                let r = rank_audit(&RankAuditCase::new(g, m, l, false, false, false)).map_err(|e| e.to_string())?;
                ensure(r.step("boundary-genus").map(|s| s.value) == Some(int(k + g - 1)), || {
                    format!("g={g} m={m} l={l}: boundary genus")
                })?;
                ensure(r.surface_rank == surface_rank(g, k, false).unwrap(), || format!("g={g} m={m} l={l}: rank"))?;
                ensure(r.strict(), || format!("g={g} m={m} l={l}: not strict"))?;
                quoted += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("{elapsed:?} over budget"))?;
    Ok(format!("{} cases strict, {quoted} quoted chains reproduced, {elapsed:.2?}", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("family invariants", criterion_family),
        ("ratio reproduction", criterion_ratios),
        ("fixed subgroup of the double", criterion_doubling),
        ("Nielsen-Schreier rank and covering bound", criterion_nielsen_schreier),
        ("isometry commuting iff-suite", criterion_isometries),
        ("Smith normal form vs gcd of minors", criterion_smith),
        ("rank-audit strictness", criterion_audit),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
