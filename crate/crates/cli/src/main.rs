mod report;

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geodouble::construction::{
    family_stats, family_stats_from_complex, generate_paper_scheme, min_n_for_ratio, parse_rational,
    verify_paper_invariants, FamilyParams, FamilyStats,
};
use geodouble::doubling::{fix_sample, random_double_word, Double, DoubleWord};
use geodouble::freegroups::{parse_word_list, stallings_graph, SubgroupGraph, SubgroupIndex, Word};
use geodouble::isometries::{
    classify, commute, commuting_criterion, fix_type_table, fixed_points, involution_kind, InvolutionKind, Isometry,
    Tolerance,
};
use geodouble::presentations::{
    presentation_from_complex, rank_audit, smith_normal_form, sweep_cases, tietze_simplify, FinitePresentation,
    IntegerMatrix, RankAuditCase,
};
use geodouble::triangulation::{
    boundary_surfaces, dihedral_admissibility, glue, glue_partial, handle_structure, GluingScheme,
};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use report::Report;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

/// Face-pairing gluings, amalgamated doubles and rank arithmetic.
#[derive(Parser)]
#[command(name = "geodouble", version)]
struct Cli {
    /// Emit line-oriented key=value records.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The tetrahedral family and its rank ratios.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Gluing scheme files.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Subgroups of free groups via folded graphs.
    #[command(subcommand)]
    Fg(FgCmd),
    /// Amalgamated doubles F *_H F.
    #[command(subcommand)]
    Double(DoubleCmd),
    /// Isometries of hyperbolic 3-space as 2x2 complex matrices.
    #[command(subcommand)]
    Iso(IsoCmd),
    /// Finite presentations.
    #[command(subcommand)]
    Pres(PresCmd),
    /// Rank inequality chains for a fixed surface.
    Audit(AuditArgs),
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Rank ratios for a range of n.
    Report {
        #[arg(long, default_value_t = 4)]
        n_min: u64,
        #[arg(long, default_value_t = 13)]
        n_max: u64,
        /// Read genus and handle counts off the glued complex.
        #[arg(long)]
        from_complex: bool,
    },
    /// Glue one member and check its counts.
    Verify {
        #[arg(long)]
        n: u64,
    },
    /// Smallest n whose closed ratio exceeds 2 - epsilon.
    MinN {
        #[arg(long)]
        epsilon: String,
    },
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Scheme file of one family member.
    Generate {
        #[arg(long)]
        n: u64,
        /// Write here instead of standard output.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Glue a scheme and report its cell structure.
    Glue {
        file: PathBuf,
        /// Accept unpaired faces.
        #[arg(long)]
        partial: bool,
    },
    /// Canonical form of a scheme file.
    Render { file: PathBuf },
}

#[derive(Args)]
struct SubgroupArgs {
    #[arg(long)]
    rank: usize,
    /// Comma-separated generators, e.g. "aa,b,abA".
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
}

impl SubgroupArgs {
    fn graph(&self) -> Result<(SubgroupGraph, Vec<Word>)> {
        let gens = parse_word_list(&self.gens, self.rank)?;
        Ok((stallings_graph(self.rank, &gens)?, gens))
    }
}

#[derive(Subcommand)]
enum FgCmd {
    /// Folded core graph of the subgroup.
    Fold(SubgroupArgs),
    /// Membership of a word.
    Member {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long)]
        word: String,
    },
    /// Rank of the subgroup.
    Rank(SubgroupArgs),
    /// Index of the subgroup.
    Index(SubgroupArgs),
    /// Canonical coset representative of a word.
    Rep {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long)]
        word: String,
        /// Left coset wH instead of right coset Hw.
        #[arg(long)]
        left: bool,
    },
}

#[derive(Args)]
struct DoubleArgs {
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Comma-separated generators of the amalgamated subgroup.
    #[arg(long = "H", allow_hyphen_values = true)]
    h: String,
}

impl DoubleArgs {
    fn build(&self) -> Result<(Double, Vec<Word>)> {
        let gens = parse_word_list(&self.h, self.rank)?;
        Ok((Double::new(self.rank, &gens)?, gens))
    }
}

#[derive(Subcommand)]
enum DoubleCmd {
    /// Normal form of a syllable list such as "u:abA p:bb u:a".
    Nf {
        #[command(flatten)]
        d: DoubleArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Random check that the swap fixes exactly the syllable-free elements.
    Fixtest {
        #[command(flatten)]
        d: DoubleArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, env = "GEODOUBLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_syllables: usize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
}

#[derive(Args)]
struct TolArg {
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl TolArg {
    fn get(&self) -> Result<Tolerance> {
        Ok(Tolerance::new(self.tol)?)
    }
}

#[derive(Subcommand)]
enum IsoCmd {
    /// Conjugacy type, or involution kind for a reversing map.
    Classify {
        /// Matrix "a,b;c,d" with entries like 1, -2.5, 0.5+1i.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Act by z -> M conj(z).
        #[arg(long)]
        rev: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Fixed points on the sphere at infinity.
    Fixed {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        rev: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Whether two maps commute, and which configuration explains it.
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long)]
        rev1: bool,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
        #[arg(long)]
        rev2: bool,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Possible fixed-subgroup types.
    Table {
        /// Orientation preserving (reversing otherwise).
        #[arg(long)]
        preserving: bool,
        /// The automorphism squares to the identity.
        #[arg(long)]
        phi2_id: bool,
        /// Closed manifold (cusped otherwise).
        #[arg(long)]
        closed: bool,
    },
}

#[derive(Args)]
struct PresArg {
    /// Presentation such as "<a,b | abAB>".
    #[arg(long)]
    pres: String,
}

#[derive(Subcommand)]
enum PresCmd {
    /// Presentation of the 2-complex of a scheme file.
    FromScheme {
        file: PathBuf,
        #[arg(long)]
        simplify: bool,
    },
    /// Tietze simplification.
    Simplify(PresArg),
    /// Rational rank and torsion of the abelianization.
    H1rank(PresArg),
    /// Smith normal form of an integer matrix "1,2;3,4".
    Snf {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 0)]
    g: u64,
    #[arg(long, default_value_t = 0)]
    m: u64,
    #[arg(long, default_value_t = 0)]
    l: u64,
    #[arg(long)]
    orientable: bool,
    #[arg(long)]
    separating: bool,
    #[arg(long)]
    same_component: bool,
    /// Audit every consistent case up to the given bounds.
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value_t = 10)]
    g_max: u64,
    #[arg(long, default_value_t = 5)]
    m_max: u64,
    #[arg(long, default_value_t = 5)]
    l_max: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::iter::once("geodouble".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let mut report = Report::new(cli.machine, &echo);
    match run(cli.command, &mut report) {
        Ok(Output::Report) => {
            if let Err(e) = report.emit() {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

enum Output {
    Report,
    Raw(String),
}

fn run(command: Command, r: &mut Report) -> Result<Output> {
    match command {
        Command::Family(c) => family(c, r),
        Command::Scheme(c) => scheme(c, r),
        Command::Fg(c) => fg(c, r).map(|_| Output::Report),
        Command::Double(c) => double(c, r).map(|_| Output::Report),
        Command::Iso(c) => iso(c, r).map(|_| Output::Report),
        Command::Pres(c) => pres(c, r).map(|_| Output::Report),
        Command::Audit(a) => audit(a, r).map(|_| Output::Report),
    }
}

fn decimal(x: Ratio<i64>) -> String {
    format!("{:.6}", *x.numer() as f64 / *x.denom() as f64)
}

fn family(c: FamilyCmd, r: &mut Report) -> Result<Output> {
    match c {
        FamilyCmd::Report {
            n_min,
            n_max,
            from_complex,
        } => {
            let params: Vec<FamilyParams> = FamilyParams::range(n_min, n_max).collect();
            let rows: Vec<FamilyStats> = params
                .par_iter()
                .map(|&p| {
                    if from_complex {
                        family_stats_from_complex(p)
                    } else {
                        Ok(family_stats(p))
                    }
                })
                .collect::<std::result::Result<_, _>>()?;
            r.field("admissible n", rows.len());
            let two = Ratio::from_integer(2);
            let mut below_two = true;
            let mut formula = true;
            for s in &rows {
                let n = s.n as i64;
                below_two &= s.ratio_closed < two && s.ratio_cusped < two;
                formula &= s.ratio_closed == Ratio::new(2 * n - 2, n + 3) && s.ratio_cusped == Ratio::new(2 * n - 3, n + 4);
                r.record(&[
                    ("n", s.n.to_string()),
                    ("genus", s.boundary_genus.to_string()),
                    ("rank_bound", s.rank_upper_closed.to_string()),
                    ("fix_rank", s.fix_rank_closed.to_string()),
                    ("ratio", s.ratio_closed.to_string()),
                    ("decimal", decimal(s.ratio_closed)),
                    ("cusped_ratio", s.ratio_cusped.to_string()),
                    ("cusped_dec", decimal(s.ratio_cusped)),
                ]);
            }
            r.check("closed ratio is (2n-2)/(n+3), cusped is (2n-3)/(n+4)", formula, "");
            r.check("every ratio below 2", below_two, "");
        }
        FamilyCmd::Verify { n } => {
            let v = verify_paper_invariants(FamilyParams::new(n)?)?;
            r.field("n", v.n);
            for c in &v.claims {
                r.check(c.name, c.passed, format!("expected {}, observed {}", c.expected, c.observed));
            }
        }
        FamilyCmd::MinN { epsilon } => {
            let eps = parse_rational(&epsilon)?;
            let n = min_n_for_ratio(eps)?;
            let s = family_stats(FamilyParams::new(n)?);
            r.field("epsilon", eps);
            r.field("n", n);
            r.field("ratio", s.ratio_closed);
            r.field("decimal", decimal(s.ratio_closed));
        }
    }
    Ok(Output::Report)
}

fn read_scheme(path: &PathBuf) -> Result<GluingScheme> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(GluingScheme::parse(&text)?)
}

fn scheme(c: SchemeCmd, r: &mut Report) -> Result<Output> {
    match c {
        SchemeCmd::Generate { n, out } => {
            let text = generate_paper_scheme(FamilyParams::new(n)?).render();
            match out {
                None => return Ok(Output::Raw(text)),
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
                    r.field("written", path.display());
                }
            }
        }
        SchemeCmd::Render { file } => return Ok(Output::Raw(read_scheme(&file)?.render())),
        SchemeCmd::Glue { file, partial } => {
            let s = read_scheme(&file)?;
            let complex = if partial { glue_partial(&s) } else { glue(&s)? };
            r.field("tets", s.tet_count());
            r.field("pairings", s.pairings().len());
            r.field("closed", complex.is_closed());
            r.field("connected", complex.is_connected());
            r.field("orientable", complex.orientable());
            r.field("vertex classes", complex.vertex_class_count());
            r.field("edge classes", complex.edge_classes().len());
            for (i, a) in dihedral_admissibility(&complex).iter().enumerate() {
                let e = &complex.edge_classes()[i];
                r.record(&[
                    ("edge_class", a.class.to_string()),
                    ("valence", a.valence.to_string()),
                    ("angle", a.angle.to_string()),
                    ("degrees", format!("{:.4}", a.angle.degrees())),
                    ("admissible", a.admissible.to_string()),
                    ("reversed", e.self_reversed.to_string()),
                ]);
            }
            if complex.is_closed() {
                for b in boundary_surfaces(&complex)?.components {
                    r.record(&[
                        ("vertex_class", b.vertex_class.to_string()),
                        ("triangles", b.triangles.to_string()),
                        ("euler_char", b.euler_characteristic.to_string()),
                        ("orientable", b.orientable.to_string()),
                        ("genus", b.genus.to_string()),
                    ]);
                }
                if complex.is_connected() {
                    let h = handle_structure(&complex)?;
                    r.field("handlebody genus", h.handlebody_genus);
                    r.field("two-handles", h.two_handles);
                }
            }
        }
    }
    Ok(Output::Report)
}

fn fg(c: FgCmd, r: &mut Report) -> Result<()> {
    match c {
        FgCmd::Fold(h) => {
            let (g, _) = h.graph()?;
            r.field("vertices", g.vertex_count());
            r.field("edges", g.edge_count());
            r.field("rank", g.rank());
            r.field("index", g.index());
            r.field("graph", g.render_edges());
        }
        FgCmd::Member { h, word } => {
            let (g, _) = h.graph()?;
            let w = Word::parse_in_rank(&word, h.rank)?;
            r.field("word", w.reduced());
            r.field("member", g.contains(&w));
        }
        FgCmd::Rank(h) => {
            let (g, _) = h.graph()?;
            r.field("rank", g.rank());
        }
        FgCmd::Index(h) => {
            let (g, _) = h.graph()?;
            r.field("index", g.index());
            if let SubgroupIndex::Finite(n) = g.index() {
                r.field("rank", g.rank());
                r.check(
                    "rank = n(k-1)+1",
                    g.schreier_rank_check()?,
                    format!("n={n} k={} rank={}", h.rank, g.rank()),
                );
            }
        }
        FgCmd::Rep { h, word, left } => {
            let (g, _) = h.graph()?;
            let w = Word::parse_in_rank(&word, h.rank)?;
            let rep = if left {
                g.left_coset_representative(&w)
            } else {
                g.coset_representative(&w)
            };
            r.field("coset", if left { "left" } else { "right" });
            r.field("representative", rep);
        }
    }
    Ok(())
}

fn double(c: DoubleCmd, r: &mut Report) -> Result<()> {
    match c {
        DoubleCmd::Nf { d, word } => {
            let (dbl, _) = d.build()?;
            let w: DoubleWord = word.parse()?;
            w.check_rank(d.rank)?;
            let nf = dbl.normal_form(&w);
            r.field("word", &w);
            r.field("normal form", &nf);
            r.field("syllables", nf.syllable_count());
            r.field("swap", dbl.normal_form(&dbl.swap(&w)));
            r.field("fixed", dbl.is_fixed(&w));
        }
        DoubleCmd::Fixtest {
            d,
            samples,
            seed,
            max_syllables,
            max_len,
        } => {
            let (dbl, gens) = d.build()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let words: Vec<DoubleWord> = (0..samples)
                .map(|_| random_double_word(&mut rng, d.rank, &gens, max_syllables, max_len))
                .collect();
            let results: Vec<_> = words.into_par_iter().map(|w| fix_sample(&dbl, w)).collect();
            let agree = results.iter().filter(|s| s.agrees()).count();
            let fixed = results.iter().filter(|s| s.fixed).count();
            r.field("seed", seed);
            r.field("rank", d.rank);
            r.field("H", gens.iter().map(Word::to_string).collect::<Vec<_>>().join(","));
            r.field("samples", samples);
            r.field("fixed", fixed);
            r.field("agreement", format!("{agree}/{samples}"));
            for s in results.iter().filter(|s| !s.agrees()).take(5) {
                r.text(format!("discrepancy: {} fixed={} syllable_free={}", s.word, s.fixed, s.syllable_free));
            }
            r.check("fixed iff no syllables", agree == samples, format!("{agree}/{samples}"));
        }
    }
    Ok(())
}

fn isometry(m: &str, rev: bool) -> Result<Isometry> {
    let g: Isometry = m.parse()?;
    Ok(if rev { Isometry::new(*g.matrix(), true)? } else { g })
}

fn iso(c: IsoCmd, r: &mut Report) -> Result<()> {
    match c {
        IsoCmd::Classify { m, rev, tol } => {
            let g = isometry(&m, rev)?;
            let tol = tol.get()?;
            r.field("matrix", g);
            if rev {
                let kind = match involution_kind(&g, tol) {
                    Some(InvolutionKind::PointReflection) => "point reflection".to_string(),
                    Some(InvolutionKind::PlaneReflection(c)) => format!("plane reflection in {c}"),
                    None => "not an involution".to_string(),
                };
                r.field("kind", kind);
            } else {
                r.field("trace", geodouble::isometries::format_complex(g.trace()));
                r.field("class", classify(&g, tol)?);
            }
            r.field("fixed", fixed_points(&g, tol));
        }
        IsoCmd::Fixed { m, rev, tol } => {
            let g = isometry(&m, rev)?;
            r.field("matrix", g);
            r.field("fixed", fixed_points(&g, tol.get()?));
        }
        IsoCmd::Commute {
            m1,
            rev1,
            m2,
            rev2,
            tol,
        } => {
            let (a, b) = (isometry(&m1, rev1)?, isometry(&m2, rev2)?);
            let tol = tol.get()?;
            let commutes = commute(&a, &b, tol);
            r.field("commute", commutes);
            if let Ok(case) = commuting_criterion(&a, &b, tol) {
                r.field("criterion", case);
                r.check(
                    "commute iff a criterion holds",
                    commutes == (case != geodouble::isometries::CommutingCase::None),
                    "",
                );
            }
        }
        IsoCmd::Table {
            preserving,
            phi2_id,
            closed,
        } => {
            r.field("orientation", if preserving { "preserving" } else { "reversing" });
            r.field("phi^2 = id", phi2_id);
            r.field("manifold", if closed { "closed" } else { "cusped" });
            let types = fix_type_table(preserving, phi2_id, closed);
            r.field("fix types", types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "));
        }
    }
    Ok(())
}

fn parse_matrix(s: &str) -> Result<IntegerMatrix> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad matrix entry {x:?}")))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows differ in length".into());
    }
    Ok(IntegerMatrix::from_rows(&rows))
}

fn describe_presentation(r: &mut Report, p: &FinitePresentation) {
    r.field("presentation", p);
    r.field("generators", p.generators());
    r.field("relators", p.relators().len());
    r.field("h1 rank", p.abelianization_rank());
    let torsion = p.abelianization_torsion();
    r.field("h1 torsion", torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
}

fn pres(c: PresCmd, r: &mut Report) -> Result<()> {
    match c {
        PresCmd::FromScheme { file, simplify } => {
            let s = read_scheme(&file)?;
            let p = presentation_from_complex(&glue_partial(&s))?;
            let p = if simplify { tietze_simplify(&p) } else { p };
            describe_presentation(r, &p);
        }
        PresCmd::Simplify(a) => {
            let p: FinitePresentation = a.pres.parse()?;
            let q = tietze_simplify(&p);
            describe_presentation(r, &q);
            r.check(
                "abelianization preserved",
                q.abelianization_rank() == p.abelianization_rank() && q.abelianization_torsion() == p.abelianization_torsion(),
                "",
            );
        }
        PresCmd::H1rank(a) => {
            let p: FinitePresentation = a.pres.parse()?;
            r.field("h1 rank", p.abelianization_rank());
            let torsion = p.abelianization_torsion();
            r.field("h1 torsion", torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
        }
        PresCmd::Snf { matrix } => {
            let m = parse_matrix(&matrix)?;
            let s = smith_normal_form(&m);
            r.field("factors", s.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","));
            r.field("rank", s.rank());
        }
    }
    Ok(())
}

fn audit(a: AuditArgs, r: &mut Report) -> Result<()> {
    if a.sweep {
        let cases = sweep_cases(a.g_max, a.m_max, a.l_max);
        let reports = cases.par_iter().map(rank_audit).collect::<std::result::Result<Vec<_>, _>>()?;
        let strict = reports.iter().filter(|x| x.strict()).count();
        for x in &reports {
            let c = &x.case;
            r.record(&[
                ("g", c.g.to_string()),
                ("k", c.k.to_string()),
                ("m", c.m.to_string()),
                ("l", c.l.to_string()),
                ("orientable", c.orientable.to_string()),
                ("separating", c.separating.to_string()),
                ("same_comp", c.same_component.to_string()),
                ("rank_s", x.surface_rank.to_string()),
                ("bound", x.final_value.to_string()),
                ("strict", x.strict().to_string()),
            ]);
        }
        r.field("cases", reports.len());
        r.check("every chain strict", strict == reports.len(), format!("{strict}/{}", reports.len()));
    } else {
        let case = RankAuditCase::new(a.g, a.m, a.l, a.orientable, a.separating, a.same_component);
        let x = rank_audit(&case)?;
        r.text(x.to_string());
        r.field("rank", x.surface_rank);
        r.field("bound", x.final_value);
        r.check("strict", x.strict(), "");
    }
    Ok(())
}
