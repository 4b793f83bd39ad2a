//! The `collapse` command line: term parsing and printing, comparisons,
//! enumeration, law suites, cross-checks and fragment export.
//!
//! [`run`] is the whole program; `main` only forwards the process
//! arguments and exit code.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use ordinal_collapse::dilator::{check_predilator_laws, trace_text, GammaDil};
use ordinal_collapse::gamma::{parse_var, write_var};
use ordinal_collapse::laws::{self, PsiSuiteParams};
use ordinal_collapse::morphisms::{
    check_bh_collapse, ConstantTheta, InitialEmbedding, OmegaCollapse, ThetaFromCollapse,
};
use ordinal_collapse::morphisms::{check_commuting_square, BhCollapse};
use ordinal_collapse::order::{LinearOrder, Words};
use ordinal_collapse::psi::{check_range_condition, range_grid, MembershipRule, PsiCaps, PsiError, PsiSystem, Term};
use ordinal_collapse::syntax::{parse_all, parse_nu, Cursor};
use ordinal_collapse::{
    Affine, Compose, FiniteOrder, Gamma, GammaTerm, Nu, NuElem, Omega, ParseError, Predilator, Report,
    ReversedOmega,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable with default budgets, in the `key=value,...` syntax
/// of `--system` (keys `l`, `payload`, `count`, `alpha`).
pub const BUDGETS_ENV: &str = "COLLAPSE_DEFAULT_BUDGETS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Io(_) => EXIT_VIOLATION,
        }
    }
}

impl From<PsiError> for CliError {
    fn from(e: PsiError) -> Self {
        match e {
            PsiError::Exhausted { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A dilator named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DilSpec {
    Omega,
    ReversedOmega,
    Affine(usize),
    Gamma(usize),
    /// `ω ∘ inner`.
    Compose(Box<DilSpec>),
}

impl DilSpec {
    pub fn parse(text: &str) -> Result<DilSpec, CliError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("compose(").and_then(|r| r.strip_suffix(')')) {
            let (outer, inner) = rest
                .split_once(',')
                .ok_or_else(|| usage(format!("compose needs two arguments: {t}")))?;
            if outer.trim() != "omega" {
                return Err(usage("only omega is supported as the outer dilator of compose"));
            }
            let inner = DilSpec::parse(inner)?;
            if matches!(inner, DilSpec::Compose(_) | DilSpec::ReversedOmega) {
                return Err(usage(format!("unsupported inner dilator in {t}")));
            }
            return Ok(DilSpec::Compose(Box::new(inner)));
        }
        let size = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| usage(format!("expected a size in {t}")))
        };
        match t.split_once(':') {
            None if t == "omega" => Ok(DilSpec::Omega),
            None if t == "reversed-omega" => Ok(DilSpec::ReversedOmega),
            None if t == "gamma" => Ok(DilSpec::Gamma(GammaDil::default().max_seq_len)),
            Some(("affine", k)) => Ok(DilSpec::Affine(size(k)?)),
            Some(("gamma", k)) => match size(k)? {
                0 => Err(usage("gamma:k needs k >= 1")),
                k => Ok(DilSpec::Gamma(k)),
            },
            _ => Err(usage(format!("unknown dilator {t}"))),
        }
    }
}

/// Enumeration budgets: measure cap, payload cap, number of terms and the
/// largest index considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub max_l: usize,
    pub payload: usize,
    pub count: usize,
    pub alpha: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_l: 1 << 40, payload: 6, count: 100, alpha: 3 }
    }
}

impl Budgets {
    /// Built-in defaults overridden by [`BUDGETS_ENV`].
    pub fn from_env() -> Result<Budgets, CliError> {
        let mut b = Budgets::default();
        if let Ok(text) = std::env::var(BUDGETS_ENV) {
            for item in split_top(&text) {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| usage(format!("{BUDGETS_ENV}: expected key=value, got {item}")))?;
                if !b.set(k.trim(), v.trim())? {
                    return Err(usage(format!("{BUDGETS_ENV}: unknown key {k}")));
                }
            }
        }
        Ok(b)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<bool, CliError> {
        let slot = match key {
            "l" | "max-l" => &mut self.max_l,
            "payload" => &mut self.payload,
            "count" => &mut self.count,
            "alpha" => &mut self.alpha,
            _ => return Ok(false),
        };
        let n: usize = value.parse().map_err(|_| usage(format!("{key} must be a number")))?;
        if n == 0 {
            return Err(usage(format!("budget {key} must be positive")));
        }
        *slot = n;
        Ok(true)
    }

    pub fn caps(&self) -> PsiCaps {
        PsiCaps { max_l: self.max_l, max_payload: self.payload, max_alpha: self.alpha }
    }
}

/// `nu=<literal>,dil=<dilator>` with optional budget keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub nu: NuElem,
    pub dil: DilSpec,
    pub budgets: Budgets,
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<SystemSpec, CliError> {
        let mut nu = None;
        let mut dil = None;
        let mut budgets = Budgets::from_env()?;
        for item in split_top(text) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("expected key=value, got {item}")))?;
            match k.trim() {
                "nu" => nu = Some(parse_all(v.trim(), parse_nu)?),
                "dil" => dil = Some(DilSpec::parse(v)?),
                key => {
                    if !budgets.set(key, v.trim())? {
                        return Err(usage(format!("unknown key {key} in system description")));
                    }
                }
            }
        }
        let nu = nu.ok_or_else(|| usage("system description needs nu=..."))?;
        if nu == NuElem::ZERO {
            return Err(usage("nu must be positive"));
        }
        let dil = dil.ok_or_else(|| usage("system description needs dil=..."))?;
        Ok(SystemSpec { nu, dil, budgets })
    }

    pub fn nu_order(&self) -> Nu {
        Nu::new(self.nu)
    }
}

// Splits on commas outside parentheses.
fn split_top(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() {
        out.push(&text[start..]);
    }
    out
}

/// Binds `$d` to the dilator described by `$spec` and evaluates `$body`.
macro_rules! with_dilator {
    ($spec:expr, $d:ident => $body:expr) => {
        match $spec {
            DilSpec::Omega => {
                let $d = Omega;
                $body
            }
            DilSpec::ReversedOmega => {
                let $d = ReversedOmega;
                $body
            }
            DilSpec::Affine(k) => {
                let $d = Affine::new(*k);
                $body
            }
            DilSpec::Gamma(k) => {
                let $d = GammaDil { max_seq_len: *k };
                $body
            }
            DilSpec::Compose(inner) => match &**inner {
                DilSpec::Omega => {
                    let $d = Compose::new(Omega, Omega);
                    $body
                }
                DilSpec::Affine(k) => {
                    let $d = Compose::new(Omega, Affine::new(*k));
                    $body
                }
                DilSpec::Gamma(k) => {
                    let $d = Compose::new(Omega, GammaDil { max_seq_len: *k });
                    $body
                }
                other => return Err(usage(format!("unsupported inner dilator {other:?}"))),
            },
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grammar {
    /// ψ-terms `p[α]({children}; trace)`.
    Psi,
    /// Γ-terms over the points `x0, x1, ...`.
    Gamma,
    /// Words of `ω(Y)`, written `w[y0,...]`.
    Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mutant {
    /// Membership ignores all but the direct children in the `G⁺` union.
    DropUnion,
    /// `ϑ` replaced by a constant.
    ConstantTheta,
}

#[derive(Debug, Parser)]
#[command(name = "collapse", version, about = "Computable ordinal collapsing: term systems, law suites, cross-checks")]
pub struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct TermArgs {
    /// Term system, e.g. "nu=w+1,dil=omega".
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long, value_enum, default_value_t = Grammar::Psi)]
    pub grammar: Grammar,
    /// Size of the base order for the gamma grammar.
    #[arg(long, default_value_t = 2)]
    pub x_size: usize,
    /// Size of the alphabet for the word grammar.
    #[arg(long, default_value_t = 3)]
    pub y_size: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compares two terms; prints LT, EQ or GT.
    Compare {
        #[command(flatten)]
        terms: TermArgs,
        lhs: String,
        rhs: String,
    },
    /// Decides membership of a term.
    Member {
        #[command(flatten)]
        terms: TermArgs,
        term: String,
    },
    /// Prints terms one per line, checking that each reparses to itself.
    Enumerate {
        #[command(flatten)]
        terms: TermArgs,
        #[arg(long)]
        count: Option<usize>,
        /// Sort by the term order instead of generation order.
        #[arg(long)]
        sorted: bool,
        /// ψ grammar: list all terms of the relaxed system, not just members.
        #[arg(long)]
        plus: bool,
        /// Gamma grammar: measure bound. Word grammar: length bound.
        #[arg(long, default_value_t = 3)]
        budget: usize,
        /// Gamma grammar: longest sum.
        #[arg(long, default_value_t = 2)]
        max_seq_len: usize,
    },
    /// Runs a law suite: predilator laws (--dilator), the Gamma batteries
    /// (--gamma) or a term-system conformance suite (--system).
    Laws {
        #[arg(long)]
        dilator: Option<String>,
        #[arg(long)]
        gamma: bool,
        #[arg(long)]
        system: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        x_size: usize,
        #[arg(long, default_value_t = 2)]
        max_seq_len: usize,
        /// Random draws for the Veblen battery.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, value_enum)]
        mutant: Option<Mutant>,
    },
    /// Checks that ψ⁻¹(α, τ) is defined exactly when the range condition
    /// holds, on the grid induced by the first members.
    RangeCheck {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, value_enum)]
        mutant: Option<Mutant>,
    },
    /// Compares ψ_1(affine(Y)) with the explicit collapse of ω(Y).
    CrosscheckOmega {
        #[arg(long, default_value_t = 3)]
        y_size: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Every word up to this length must be hit.
        #[arg(long, default_value_t = 3)]
        cover: usize,
    },
    /// Reads a Bachmann-Howard collapse off ψ_1(ω∘affine(Y)) and carves a
    /// 1-collapse back out of it.
    BridgeBh {
        #[arg(long, default_value_t = 2)]
        y_size: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 16)]
        rounds: usize,
        #[arg(long, default_value_t = 200)]
        max_elems: usize,
        #[arg(long, value_enum)]
        mutant: Option<Mutant>,
    },
    /// Computes the initial embedding between two systems over the same
    /// dilator.
    Embed {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        count: Option<usize>,
        /// Also print each term with its image.
        #[arg(long)]
        show: bool,
    },
    /// Writes members as JSON lines: idx, term, alpha, children, member.
    Export {
        #[arg(long)]
        system: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        plus: bool,
    },
}

/// One line of an export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FragmentRecord {
    pub idx: usize,
    pub term: String,
    pub alpha: String,
    pub children: Vec<usize>,
    pub member: bool,
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn verdict(out: &mut dyn Write, reports: &[Report]) -> Result<i32, CliError> {
    for r in reports {
        writeln!(out, "{r}")?;
    }
    Ok(if reports.iter().all(Report::passed) { EXIT_PASS } else { EXIT_VIOLATION })
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Compare { terms, lhs, rhs } => compare_cmd(terms, lhs, rhs, out),
        Command::Member { terms, term } => member_cmd(terms, term, out),
        Command::Enumerate { terms, count, sorted, plus, budget, max_seq_len } => {
            enumerate_cmd(terms, *count, *sorted, *plus, *budget, *max_seq_len, out)
        }
        Command::Laws { dilator, gamma, system, max_order, budget, x_size, max_seq_len, random, mutant } => {
            let mut reports = Vec::new();
            if let Some(d) = dilator {
                let spec = DilSpec::parse(d)?;
                with_dilator!(&spec, d => reports.push(check_predilator_laws(&d, *max_order, *budget)));
            }
            if *gamma {
                reports.extend(gamma_laws(*x_size, *budget, *max_seq_len, *random, cli.seed));
            }
            if let Some(s) = system {
                let spec = SystemSpec::parse(s)?;
                let rule = membership_rule(*mutant);
                with_dilator!(&spec.dil, d => {
                    let sys = PsiSystem::new(spec.nu_order(), d).with_rule(rule);
                    reports.push(laws::psi_suite(&sys, suite_params(&spec.budgets)));
                });
            }
            if reports.is_empty() {
                return Err(usage("laws needs --dilator, --gamma or --system"));
            }
            verdict(out, &reports)
        }
        Command::RangeCheck { system, arity, mutant } => {
            let spec = SystemSpec::parse(system)?;
            let rule = membership_rule(*mutant);
            with_dilator!(&spec.dil, d => {
                let sys = PsiSystem::new(spec.nu_order(), d).with_rule(rule);
                let b = spec.budgets;
                let members = sys.enumerate_members(b.count, b.caps())?;
                let mut grid = range_grid(&sys, &members, b.alpha, (*arity).min(1), b.payload.min(2));
                if *arity >= 2 {
                    let prefix = members[..members.len().min(60)].to_vec();
                    grid.extend(
                        range_grid(&sys, &prefix, b.alpha, *arity, 2)
                            .into_iter()
                            .filter(|(_, tau)| tau.arity() >= 2),
                    );
                }
                let (deep, _) = sys.generate(deep_caps(&b), true, None);
                grid.extend(range_grid(&sys, &deep, b.alpha + 1, 1, 2).into_iter().filter(|(_, tau)| tau.arity() == 1));
                verdict(out, &[check_range_condition(&sys, &grid)])
            })
        }
        Command::CrosscheckOmega { y_size, count, cover } => {
            let r = laws::omega_crosscheck(*y_size, *count, *cover);
            let code = verdict(out, std::slice::from_ref(&r))?;
            if code == EXIT_PASS {
                writeln!(out, "isomorphism confirmed on {count} elements")?;
            }
            Ok(code)
        }
        Command::BridgeBh { y_size, count, rounds, max_elems, mutant } => {
            bridge_cmd(*y_size, *count, *rounds, *max_elems, *mutant, out)
        }
        Command::Embed { from, to, count, show } => embed_cmd(from, to, *count, *show, out),
        Command::Export { system, out: path, count, plus } => {
            let spec = SystemSpec::parse(system)?;
            let text = export_text(&spec, count.unwrap_or(spec.budgets.count), *plus)?;
            std::fs::write(path, text)?;
            Ok(EXIT_PASS)
        }
    }
}

fn membership_rule(m: Option<Mutant>) -> MembershipRule {
    match m {
        Some(Mutant::DropUnion) => MembershipRule::DropUnion,
        _ => MembershipRule::Full,
    }
}

fn deep_caps(b: &Budgets) -> PsiCaps {
    PsiCaps { max_l: 7, max_payload: 1, max_alpha: b.alpha + 1 }
}

/// Suite parameters derived from the budgets of a system.
pub fn suite_params(b: &Budgets) -> PsiSuiteParams {
    PsiSuiteParams {
        plus_caps: PsiCaps { max_l: 9, max_payload: b.payload.min(2), max_alpha: b.alpha },
        member_caps: b.caps(),
        members: b.count,
        grid_arity: 2,
        grid_prefix: 60,
        grid_payload: b.payload.min(2),
        grid_alpha: b.alpha,
        deep_caps: Some(deep_caps(b)),
    }
}

fn gamma_laws(x_size: usize, budget: usize, max_seq_len: usize, random: usize, seed: u64) -> Vec<Report> {
    let g = Gamma::new(FiniteOrder::new(x_size));
    let pts: Vec<usize> = (0..x_size).collect();
    let fragment = g.enumerate(&pts, budget, max_seq_len);
    let pairs = g.enumerate(&pts, budget.min(3), max_seq_len);
    let quads = g.enumerate(&pts, budget.min(2), max_seq_len.min(2));
    let arith = g.enumerate(&pts, budget.min(4), max_seq_len);
    let triples = laws::triples_by_total_measure(&arith, budget.min(4));
    let mut reports = vec![
        laws::gamma_order_suite(&g, &fragment),
        laws::veblen_suite(&g, &pts, &pairs, &quads),
        laws::arithmetic_suite(&g, &triples, &pairs),
        laws::difference_suite(&g, &quads),
    ];
    if random > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        reports.push(laws::veblen_random(&g, &pts, random, 4, &mut |n| rng.gen_range(0..n)));
    }
    reports
}

fn word_text(w: &[usize]) -> String {
    trace_text(&Omega, &w.to_vec())
}

fn parse_word(c: &OmegaCollapse, text: &str) -> Result<Vec<usize>, CliError> {
    let w = parse_all(text, |cur| Omega.parse_trace(cur))?;
    if !c.contains(&w) {
        return Err(usage(format!("{text} is not a word of w({})", c.y_size())));
    }
    Ok(w)
}

fn gamma_text(t: &GammaTerm<usize>) -> String {
    t.to_text(&mut |i, out| write_var(i, out))
}

fn parse_gamma(g: &Gamma<FiniteOrder>, text: &str) -> Result<GammaTerm<usize>, ParseError> {
    parse_all(text, |c| g.parse(c, &mut |c: &mut Cursor<'_>| parse_var(c)))
}

fn order_word(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "LT",
        std::cmp::Ordering::Equal => "EQ",
        std::cmp::Ordering::Greater => "GT",
    }
}

fn system_of(terms: &TermArgs) -> Result<SystemSpec, CliError> {
    let s = terms.system.as_deref().ok_or_else(|| usage("the psi grammar needs --system"))?;
    SystemSpec::parse(s)
}

fn compare_cmd(terms: &TermArgs, lhs: &str, rhs: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let o = match terms.grammar {
        Grammar::Psi => {
            let spec = system_of(terms)?;
            with_dilator!(&spec.dil, d => {
                let sys = PsiSystem::new(spec.nu_order(), d);
                let a = parse_all(lhs, |c| sys.parse_term(c))?;
                let b = parse_all(rhs, |c| sys.parse_term(c))?;
                sys.compare(&a, &b)
            })
        }
        Grammar::Gamma => {
            let g = Gamma::new(FiniteOrder::new(terms.x_size));
            g.compare(&parse_gamma(&g, lhs)?, &parse_gamma(&g, rhs)?)
        }
        Grammar::Word => {
            let c = OmegaCollapse::new(terms.y_size);
            c.compare(&parse_word(&c, lhs)?, &parse_word(&c, rhs)?)
        }
    };
    writeln!(out, "{}", order_word(o))?;
    Ok(EXIT_PASS)
}

fn member_cmd(terms: &TermArgs, term: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    match terms.grammar {
        Grammar::Psi => {
            let spec = system_of(terms)?;
            with_dilator!(&spec.dil, d => {
                let sys = PsiSystem::new(spec.nu_order(), d);
                let t = parse_all(term, |c| sys.parse_term(c))?;
                writeln!(out, "{}", sys.is_member(&t))?;
            })
        }
        Grammar::Gamma => {
            let g = Gamma::new(FiniteOrder::new(terms.x_size));
            match parse_gamma(&g, term) {
                Ok(_) => writeln!(out, "true")?,
                Err(ParseError::Invalid { message, .. }) => writeln!(out, "false: {message}")?,
                Err(e) => return Err(e.into()),
            }
        }
        Grammar::Word => {
            let c = OmegaCollapse::new(terms.y_size);
            let w = parse_all(term, |cur| Omega.parse_trace(cur))?;
            writeln!(out, "{}", c.contains(&w))?;
        }
    }
    Ok(EXIT_PASS)
}

fn enumerate_cmd(
    terms: &TermArgs,
    count: Option<usize>,
    sorted: bool,
    plus: bool,
    budget: usize,
    max_seq_len: usize,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut report = Report::new("print and parse are inverse");
    match terms.grammar {
        Grammar::Psi => {
            let spec = system_of(terms)?;
            let count = count.unwrap_or(spec.budgets.count);
            with_dilator!(&spec.dil, d => {
                let sys = PsiSystem::new(spec.nu_order(), d);
                let mut list = psi_terms(&sys, &spec.budgets, count, plus)?;
                if sorted {
                    list = sys.sorted(&list);
                }
                for t in &list {
                    let text = sys.term_text(t);
                    let back = parse_all(&text, |c| sys.parse_term(c));
                    report.record("roundtrip", back.as_ref() == Ok(t), || text.clone());
                    writeln!(out, "{text}")?;
                }
            })
        }
        Grammar::Gamma => {
            let g = Gamma::new(FiniteOrder::new(terms.x_size));
            let pts: Vec<usize> = (0..terms.x_size).collect();
            let mut list = g.enumerate(&pts, budget, max_seq_len);
            if sorted {
                list.sort_by(|a, b| g.compare(a, b));
            }
            list.truncate(count.unwrap_or(usize::MAX));
            for t in &list {
                let text = gamma_text(t);
                report.record("roundtrip", parse_gamma(&g, &text).as_ref() == Ok(t), || text.clone());
                writeln!(out, "{text}")?;
            }
        }
        Grammar::Word => {
            let c = OmegaCollapse::new(terms.y_size);
            let pts: Vec<usize> = (0..terms.y_size).collect();
            let mut list = Words::<FiniteOrder>::words_over(&pts, budget);
            if sorted {
                list.sort_by(|a, b| c.compare(a, b));
            }
            list.truncate(count.unwrap_or(usize::MAX));
            for w in &list {
                let text = word_text(w);
                report.record("roundtrip", parse_word(&c, &text).ok().as_ref() == Some(w), || text.clone());
                writeln!(out, "{text}")?;
            }
        }
    }
    if report.passed() {
        Ok(EXIT_PASS)
    } else {
        verdict(out, &[report])
    }
}

fn psi_terms<D: Predilator>(sys: &PsiSystem<D>, b: &Budgets, count: usize, plus: bool) -> Result<Vec<Term<D>>, CliError> {
    if plus {
        let (mut v, reached) = sys.generate(b.caps(), false, Some(count));
        if !reached {
            return Err(CliError::Budget(format!("only {} terms within the caps, {count} wanted", v.len())));
        }
        v.truncate(count);
        Ok(v)
    } else {
        Ok(sys.enumerate_members(count, b.caps())?)
    }
}

/// The export of the first `count` members (or terms, with `plus`) as JSON
/// lines, each ending in a line feed.
pub fn export_text(spec: &SystemSpec, count: usize, plus: bool) -> Result<String, CliError> {
    with_dilator!(&spec.dil, d => {
        let sys = PsiSystem::new(spec.nu_order(), d);
        let list = psi_terms(&sys, &spec.budgets, count, plus)?;
        let index: HashMap<_, usize> = list.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut text = String::new();
        for (idx, t) in list.iter().enumerate() {
            let children = t
                .children()
                .iter()
                .map(|c| index.get(c).copied().ok_or_else(|| usage("a child precedes no line")))
                .collect::<Result<Vec<usize>, CliError>>()?;
            let rec = FragmentRecord {
                idx,
                term: sys.term_text(t),
                alpha: t.alpha().to_string(),
                children,
                member: sys.is_member(t),
            };
            text.push_str(&serde_json::to_string(&rec).map_err(|e| usage(e.to_string()))?);
            text.push('\n');
        }
        Ok(text)
    })
}

fn bridge_cmd(
    y_size: usize,
    count: usize,
    rounds: usize,
    max_elems: usize,
    mutant: Option<Mutant>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if mutant == Some(Mutant::ConstantTheta) {
        let p = PsiSystem::new(Nu::finite(1), Compose::new(Omega, Affine::new(y_size)));
        let members = p.enumerate_members(count.div_ceil(y_size.max(1)) + 1, laws::deep_member_caps(1))?;
        let theta = ThetaFromCollapse::new(&p);
        let sample = laws::affine_sample(y_size, &members, count);
        let value = theta.theta(&sample[0]).map_err(|e| usage(e.to_string()))?;
        let bad = ConstantTheta { inner: &theta, value };
        return verdict(out, &[check_bh_collapse(&bad, &sample)]);
    }
    let b = laws::bh_bridge(y_size, count, rounds, 1, max_elems);
    writeln!(
        out,
        "theta on {} sample elements; generated 1-collapse fragment of {} elements{}",
        b.sample,
        b.fragment,
        if b.closed { " (closed)" } else { " (partial)" }
    )?;
    verdict(out, &[b.collapse, b.round_trip])
}

fn embed_cmd(from: &str, to: &str, count: Option<usize>, show: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let src = SystemSpec::parse(from)?;
    let dst = SystemSpec::parse(to)?;
    if src.dil != dst.dil {
        return Err(usage("embed needs the same dilator on both sides"));
    }
    if src.nu > dst.nu {
        return Err(usage("the source index order must be an initial segment of the target"));
    }
    let count = count.unwrap_or(src.budgets.count);
    with_dilator!(&src.dil, d => {
        let s = PsiSystem::new(src.nu_order(), d.clone());
        let t = PsiSystem::new(dst.nu_order(), d);
        let members = s.enumerate_members(count, src.budgets.caps())?;
        let f = InitialEmbedding::new(&s, &t, |a| a);
        if show {
            for m in &members {
                match f.apply(m) {
                    Ok(v) => writeln!(out, "{} -> {}", s.term_text(m), t.term_text(&v))?,
                    Err(e) => writeln!(out, "{} -> undefined ({e})", s.term_text(m))?,
                }
            }
        }
        verdict(out, &[check_commuting_square(&f, &members)])
    })
}

/// Print/parse roundtrips on the first `count` terms of each grammar: ψ-terms
/// over several dilators, Γ-terms, words, and dilator traces.
pub fn roundtrip_suite(count: usize) -> Report {
    let mut rep = Report::new(format!("print/parse roundtrip, {count} terms per grammar"));
    fn psi<D: Predilator>(sys: &PsiSystem<D>, count: usize, rep: &mut Report) {
        let caps = PsiCaps { max_l: 1 << 40, max_payload: 2, max_alpha: 3 };
        let (list, _) = sys.generate(caps, false, Some(count));
        let mut n = 0;
        for t in list.iter().take(count) {
            let text = sys.term_text(t);
            let back = parse_all(&text, |c| sys.parse_term(c));
            rep.record("psi terms", back.as_ref() == Ok(t), || text.clone());
            let trace = trace_text(&sys.dil, t.trace());
            let again = ordinal_collapse::dilator::parse_trace_str(&sys.dil, &trace);
            rep.record("traces", again.as_ref() == Ok(t.trace()), || trace.clone());
            n += 1;
        }
        rep.record("enough psi terms", n == count, || format!("{} gave {n}", sys.label()));
    }
    psi(&PsiSystem::new(Nu::omega_plus(1), Omega), count, &mut rep);
    psi(&PsiSystem::new(Nu::finite(1), Affine::new(2)), count, &mut rep);
    psi(&PsiSystem::new(Nu::finite(2), GammaDil::default()), count, &mut rep);
    psi(&PsiSystem::new(Nu::finite(1), Compose::new(Omega, Affine::new(2))), count, &mut rep);

    let g = Gamma::new(FiniteOrder::new(2));
    let terms = g.enumerate(&[0, 1], 4, 2);
    rep.record("enough gamma terms", terms.len() >= count, || terms.len().to_string());
    for t in terms.iter().take(count) {
        let text = gamma_text(t);
        rep.record("gamma terms", parse_gamma(&g, &text).as_ref() == Ok(t), || text.clone());
    }

    let c = OmegaCollapse::new(3);
    let words = laws::shortlex_words(3, count);
    rep.record("enough words", words.len() == count, || words.len().to_string());
    for w in &words {
        let text = word_text(w);
        rep.record("words", parse_word(&c, &text).ok().as_ref() == Some(w), || text.clone());
    }

    for n in 0..count.min(100) {
        let a = NuElem::omega_plus((n / 10) as u32, (n % 10) as u32);
        let text = a.to_string();
        rep.record("index literals", parse_all(&text, parse_nu).ok() == Some(a), || text.clone());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_spec_syntax() {
        let s = SystemSpec::parse("nu=w+1,dil=compose(omega,affine:2),count=7").unwrap();
        assert_eq!(s.nu, NuElem::omega_plus(1, 1));
        assert_eq!(s.dil, DilSpec::Compose(Box::new(DilSpec::Affine(2))));
        assert_eq!(s.budgets.count, 7);
        assert!(SystemSpec::parse("nu=2").is_err());
        assert!(SystemSpec::parse("nu=2,dil=omega,count=0").is_err());
        assert!(SystemSpec::parse("nu=0,dil=omega").is_err());
        assert!(DilSpec::parse("compose(affine:2,omega)").is_err());
    }

    #[test]
    fn split_respects_parentheses() {
        assert_eq!(split_top("a=1,b=f(x,y),c=2"), vec!["a=1", "b=f(x,y)", "c=2"]);
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
