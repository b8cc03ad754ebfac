//! Command-line front end. [`run`] parses arguments and returns the exact
//! bytes to print plus the exit code, so the binary stays a thin shell.
//!
//! Exit codes: 0 success, 1 verdict-level failure (table mismatch, failed
//! closed form, method disagreement), 2 usage or capacity error.

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::families::{
    block_report, conjecture_experiment, exp_closed_word, exp_report, exp_word_params,
    exp_word_unit_count, exponential_collection, predicted_scaled_kernel, reflect,
    reversibility_index, scale, translate, Kappa,
};
use crate::gf2::{circulant_nullspace, inverse_rule, poly_gcd, BitString, Gf2Poly, Word};
use crate::recursion::{apply_operator, PositionCollection};
use crate::spectrum::{compute_spectrum, reversible_sizes, Method, Spectrum, DEFAULT_ORACLE_CAP};
use crate::tables::{reproduce_table1, reproduce_table2, TableRow};

#[derive(Parser, Debug)]
#[command(
    name = "cylrev",
    version,
    about = "Reversibility of linear GF(2) cellular automata rules on cylinders"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the output bytes to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct RuleArgs {
    /// Rule as a 01 string, position 0 leftmost (e.g. 11001).
    #[arg(long)]
    rule: Option<BitString>,
    /// Unit positions, comma separated (e.g. 1,2,4).
    #[arg(long)]
    positions: Option<PositionCollection>,
}

#[derive(Args, Debug, Clone)]
struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Search exact periods up to this bound (polynomial method).
    #[arg(long)]
    t_max: Option<u64>,
    /// Largest span handled by the brute-force oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum MethodArg {
    Auto,
    Brute,
    Poly,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Brute => Method::Brute,
            MethodArg::Poly => Method::Poly,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide reversibility on one cylinder size, with a witness or inverse.
    Check {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        n: u64,
        /// Print the inverse rule when reversible.
        #[arg(long)]
        inverse: bool,
    },
    /// Exact periods and kernel of the induced recurrence.
    Spectrum {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        opts: SpectrumArgs,
    },
    /// Verdicts for a range of cylinder sizes.
    Sizes {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
    /// Divisibility-minimal exact periods only.
    Kernel {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        opts: SpectrumArgs,
    },
    /// Inverse rule on a cylinder.
    Inverse {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        n: u64,
    },
    /// Closed forms for block and exponential collections.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Spectrum-preserving transforms of a collection.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Reversibility index.
    Index {
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Longest exact period of (0, 1, 2^m) against (2^m)^2 - 1.
    Conjecture {
        #[arg(long, default_value_t = 4)]
        m_max: u32,
    },
    /// Recompute the two reference tables.
    Tables,
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// (0, 1, ..., h).
    Block {
        #[arg(long)]
        h: u64,
    },
    /// (1, 2, 4, ..., 2^n); with --m, the closed word from K_{m, 2^n - 1}.
    Exp {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u64>,
    },
}

#[derive(Args, Debug, Clone)]
struct TransformArgs {
    #[arg(long)]
    positions: PositionCollection,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
}

#[derive(Subcommand, Debug)]
enum TransformCommand {
    Translate {
        #[command(flatten)]
        args: TransformArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    Scale {
        #[command(flatten)]
        args: TransformArgs,
        #[arg(long)]
        a: u64,
    },
    Reflect {
        #[command(flatten)]
        args: TransformArgs,
    },
}

/// A rule given either as a 01 string or as positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Word(BitString),
    Positions(PositionCollection),
}

impl RuleSpec {
    pub fn collection(&self) -> Result<PositionCollection> {
        match self {
            RuleSpec::Word(w) => PositionCollection::from_rule(w),
            RuleSpec::Positions(c) => Ok(c.clone()),
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Word(w) => write!(f, "{w}"),
            RuleSpec::Positions(c) => write!(f, "{c}"),
        }
    }
}

impl RuleArgs {
    fn spec(&self) -> RuleSpec {
        match (&self.rule, &self.positions) {
            (Some(w), _) => RuleSpec::Word(w.clone()),
            (None, Some(c)) => RuleSpec::Positions(c.clone()),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn join(v: &[u64]) -> String {
    if v.is_empty() {
        "(none)".into()
    } else {
        v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MethodMismatch { .. } => 1,
        _ => 2,
    }
}

fn completeness(s: &Spectrum) -> String {
    if s.is_complete() {
        format!("{} (complete)", s.complete_up_to())
    } else {
        format!(
            "{} (incomplete: longer periods not searched)",
            s.complete_up_to()
        )
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    let out = cli.out.clone();
    let mut outcome = match dispatch(&cli) {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    };
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &outcome.stdout) {
            outcome
                .stderr
                .push_str(&format!("error: cannot write {}: {e}\n", path.display()));
            outcome.code = 2;
        }
    }
    outcome
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let json = cli.json;
    match &cli.command {
        Command::Check { rule, n, inverse } => cmd_check(&rule.spec(), *n, *inverse, json),
        Command::Spectrum { rule, opts } => cmd_spectrum(&rule.spec(), opts, json, false),
        Command::Kernel { rule, opts } => cmd_spectrum(&rule.spec(), opts, json, true),
        Command::Sizes { rule, lo, hi } => cmd_sizes(&rule.spec(), *lo, *hi, json),
        Command::Inverse { rule, n } => cmd_inverse(&rule.spec(), *n, json),
        Command::Family(FamilyCommand::Block { h }) => cmd_block(*h, json),
        Command::Family(FamilyCommand::Exp { n, m: None }) => cmd_exp(*n, json),
        Command::Family(FamilyCommand::Exp { n, m: Some(m) }) => cmd_exp_word(*n, *m, json),
        Command::Transform(t) => cmd_transform(t, json),
        Command::Index { rule } => cmd_index(&rule.spec(), json),
        Command::Conjecture { m_max } => cmd_conjecture(*m_max, json),
        Command::Tables => cmd_tables(json),
    }
}

/// Spectrum precise enough to decide size `n`: brute force within the cap,
/// otherwise the polynomial method up to `n`.
fn spectrum_for(c: &PositionCollection, n: u64) -> Result<Spectrum> {
    let t_max = (c.span() > DEFAULT_ORACLE_CAP).then_some(n);
    compute_spectrum(c, Method::Auto, t_max, DEFAULT_ORACLE_CAP)
}

fn rule_on(c: &PositionCollection, n: u64) -> Result<BitString> {
    if n <= c.last() as u64 {
        return Err(Error::CylinderTooSmall { n, last: c.last() });
    }
    c.rule(n as usize)
}

fn cmd_check(spec: &RuleSpec, n: u64, want_inverse: bool, json: bool) -> Result<(String, i32)> {
    let c = spec.collection()?;
    let v = rule_on(&c, n)?;
    let s = spectrum_for(&c, n)?;
    let by_kernel = !s.kernel_divides(n) || c.len() == 1;
    let witness = circulant_nullspace(&v).into_iter().next();
    if let Some(l) = &witness {
        assert!(
            v.convolve(l)?.is_zero(),
            "nullspace witness must be annihilated"
        );
    }
    let gcd_one = poly_gcd(v.as_poly(), &Gf2Poly::cyclic_modulus(n as usize))?.is_one();
    if by_kernel != witness.is_none() || by_kernel != gcd_one {
        let msg = format!(
            "inconsistent verdicts for {c} on n = {n}: kernel {by_kernel}, nullspace {}, gcd {gcd_one}\n",
            witness.is_none()
        );
        return Ok((msg, 1));
    }
    let inverse = if want_inverse && by_kernel {
        inverse_rule(&v)
    } else {
        None
    };
    let verdict = if by_kernel {
        "REVERSIBLE"
    } else {
        "IRREVERSIBLE"
    };
    if json {
        let j = json!({
            "rule": v.to_string(),
            "collection": c.positions(),
            "n": n,
            "verdict": verdict,
            "kernel": s.kernel_desc(),
            "witness": witness.as_ref().map(ToString::to_string),
            "inverse": inverse.as_ref().map(ToString::to_string),
        });
        return Ok((to_json(&j), 0));
    }
    let mut o = String::new();
    writeln!(o, "rule: {v}").unwrap();
    writeln!(o, "collection: {c}").unwrap();
    writeln!(o, "n: {n}").unwrap();
    writeln!(o, "kernel: {}", join(&s.kernel_desc())).unwrap();
    writeln!(o, "verdict: {verdict}").unwrap();
    if let Some(l) = &witness {
        writeln!(o, "witness: {l}").unwrap();
    }
    if let Some(w) = &inverse {
        writeln!(o, "inverse: {w}").unwrap();
    }
    Ok((o, 0))
}

fn cmd_spectrum(
    spec: &RuleSpec,
    opts: &SpectrumArgs,
    json: bool,
    kernel_only: bool,
) -> Result<(String, i32)> {
    let c = spec.collection()?;
    let s = compute_spectrum(&c, opts.method.into(), opts.t_max, opts.cap)?;
    if json {
        return Ok((to_json(&s.to_json(&c)), 0));
    }
    let mut o = String::new();
    writeln!(o, "collection: {c}").unwrap();
    writeln!(o, "delta: {}", s.delta()).unwrap();
    if !kernel_only {
        writeln!(o, "exact periods: {}", join(&s.periods_desc())).unwrap();
    }
    writeln!(o, "kernel: {}", join(&s.kernel_desc())).unwrap();
    writeln!(o, "complete up to: {}", completeness(&s)).unwrap();
    Ok((o, 0))
}

fn cmd_sizes(spec: &RuleSpec, lo: u64, hi: u64, json: bool) -> Result<(String, i32)> {
    let c = spec.collection()?;
    let rows = reversible_sizes(&c, lo, hi)?;
    if json {
        let j: Vec<_> = rows
            .iter()
            .map(|&(n, r)| json!({"n": n, "reversible": r}))
            .collect();
        return Ok((
            to_json(&json!({"collection": c.positions(), "sizes": j})),
            0,
        ));
    }
    let mut o = format!("collection: {c}\n");
    for (n, r) in rows {
        writeln!(o, "{n}\t{}", if r { "REVERSIBLE" } else { "IRREVERSIBLE" }).unwrap();
    }
    Ok((o, 0))
}

fn cmd_inverse(spec: &RuleSpec, n: u64, json: bool) -> Result<(String, i32)> {
    let c = spec.collection()?;
    let v = rule_on(&c, n)?;
    let inv = inverse_rule(&v);
    if json {
        let j = json!({"rule": v.to_string(), "n": n, "inverse": inv.as_ref().map(ToString::to_string)});
        return Ok((to_json(&j), if inv.is_some() { 0 } else { 1 }));
    }
    Ok(match inv {
        Some(w) => (format!("{w}\n"), 0),
        None => (format!("no inverse: {v} is irreversible on n = {n}\n"), 1),
    })
}

fn cmd_block(h: u64, json: bool) -> Result<(String, i32)> {
    let r = block_report(h)?;
    let code = if r.matches { 0 } else { 1 };
    if json {
        return Ok((to_json(&r), code));
    }
    let o = format!(
        "family: block\ncollection: (0..={h})\npredicted: {}\ncomputed: {}\nmatch: {}\n",
        join(&r.predicted),
        join(&r.computed),
        r.matches
    );
    Ok((o, code))
}

fn cmd_exp(n: u32, json: bool) -> Result<(String, i32)> {
    let (report, fam) = exp_report(n)?;
    let code = if report.divides && fam.matches { 0 } else { 1 };
    if json {
        let mut j = serde_json::to_value(&fam).expect("serializable");
        j["modulus"] = json!(report.modulus);
        j["divides"] = json!(report.divides);
        return Ok((to_json(&j), code));
    }
    let o = format!(
        "family: exponential\ncollection: {}\np(x) divides x^{} + 1: {}\npredicted: {}\ncomputed: {}\nmatch: {}\n",
        exponential_collection(n)?,
        report.modulus,
        report.divides,
        join(&fam.predicted),
        join(&fam.computed),
        fam.matches
    );
    Ok((o, code))
}

fn cmd_exp_word(n: u32, m: u64, json: bool) -> Result<(String, i32)> {
    if n > crate::families::MAX_EXP_N {
        return Err(Error::OverCap {
            name: "n",
            value: n.into(),
            cap: crate::families::MAX_EXP_N.into(),
        });
    }
    let (k, eta) = exp_word_params(n, m)?;
    let w = exp_closed_word(n, m)?;
    let g = (1usize << n) - 1;
    let start = Word::constituent(m as usize, g)?;
    let iterated = apply_operator(&exponential_collection(n)?, (1 << (n + 1)) - 1, &start)?;
    let matches = iterated == w;
    let units = exp_word_unit_count(n, m)?;
    let code = if matches { 0 } else { 1 };
    if json {
        let j = json!({
            "family": "exponential",
            "n": n, "m": m, "k": k, "eta": eta,
            "predicted": w.to_string(),
            "computed": iterated.to_string(),
            "units": units,
            "match": matches,
        });
        return Ok((to_json(&j), code));
    }
    let o = format!(
        "n: {n}\nm: {m}\nk: {k}\neta: {eta}\nword: {w}\nrun-length: {}\nunits: {units}\nmatches iteration: {matches}\n",
        w.to_run_length()
    );
    Ok((o, code))
}

fn cmd_transform(t: &TransformCommand, json: bool) -> Result<(String, i32)> {
    let (args, image, name) = match t {
        TransformCommand::Translate { args, a } => {
            (args, translate(&args.positions, *a)?, "translate")
        }
        TransformCommand::Scale { args, a } => (args, scale(&args.positions, *a)?, "scale"),
        TransformCommand::Reflect { args } => (args, reflect(&args.positions), "reflect"),
    };
    let c = &args.positions;
    let spec_of = |x: &PositionCollection| compute_spectrum(x, Method::Auto, args.t_max, args.cap);
    let (s, si) = (spec_of(c)?, spec_of(&image)?);
    let (predicted, computed) = match t {
        TransformCommand::Scale { a, .. } => {
            let p: Vec<u64> = predicted_scaled_kernel(s.kernel(), *a)
                .into_iter()
                .rev()
                .collect();
            (p, si.kernel_desc())
        }
        _ => (s.periods_desc(), si.periods_desc()),
    };
    // a scaled incomplete spectrum says nothing about the image's tail
    let decisive = s.is_complete() && si.is_complete();
    let matches = predicted == computed;
    let code = if matches || !decisive { 0 } else { 1 };
    let compared = if name == "scale" {
        "kernel"
    } else {
        "exact periods"
    };
    if json {
        let j = json!({
            "transform": name,
            "collection": c.positions(),
            "image": image.positions(),
            "compared": compared,
            "predicted": predicted,
            "computed": computed,
            "complete": decisive,
            "match": matches,
        });
        return Ok((to_json(&j), code));
    }
    let o = format!(
        "{name}: {c} -> {image}\npredicted {compared}: {}\ncomputed {compared}: {}\ncomplete: {decisive}\nmatch: {matches}\n",
        join(&predicted),
        join(&computed)
    );
    Ok((o, code))
}

fn cmd_index(spec: &RuleSpec, json: bool) -> Result<(String, i32)> {
    let c = spec.collection()?;
    let idx = reversibility_index(&c)?;
    if json {
        let (num, den) = match idx.kappa {
            Kappa::Zero => (0, 1),
            Kappa::OneOver(d) => (1, d),
        };
        let j = json!({
            "collection": c.positions(),
            "kappa": idx.kappa.to_string(),
            "numerator": num,
            "denominator": den,
            "witness": idx.witness,
        });
        return Ok((to_json(&j), 0));
    }
    Ok((
        format!(
            "collection: {c}\nkappa: {}\nwitness: {}\n",
            idx.kappa,
            join(&idx.witness)
        ),
        0,
    ))
}

fn cmd_conjecture(m_max: u32, json: bool) -> Result<(String, i32)> {
    let rows = conjecture_experiment(m_max)?;
    if json {
        return Ok((to_json(&rows), 0));
    }
    let mut o = String::new();
    for r in rows {
        let coll = PositionCollection::new(r.collection.clone())?;
        let scope = if r.complete {
            "complete".to_string()
        } else {
            format!("searched up to {}", r.complete_up_to)
        };
        writeln!(
            o,
            "m={} {coll:?} max period {} bound {} ({scope}) {}",
            r.m, r.max_period, r.bound, r.status
        )
        .unwrap();
    }
    Ok((o, 0))
}

fn cmd_tables(json: bool) -> Result<(String, i32)> {
    let mut rows: Vec<TableRow> = reproduce_table1()?;
    rows.extend(reproduce_table2()?);
    let code = if rows.iter().all(|r| r.pass) { 0 } else { 1 };
    if json {
        return Ok((to_json(&rows), code));
    }
    let mut o = String::new();
    for r in &rows {
        let label = if r.table == 1 {
            format!("({})", r.label)
        } else {
            format!("n={}", r.label)
        };
        writeln!(
            o,
            "table {} row {:2} {label}: published {} computed {} {}",
            r.table,
            r.row,
            join(&r.published),
            join(&r.computed),
            if r.pass { "PASS" } else { "FAIL" }
        )
        .unwrap();
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    writeln!(o, "{passed}/{} rows pass", rows.len()).unwrap();
    Ok((o, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &str) -> Outcome {
        run(std::iter::once("cylrev").chain(args.split_whitespace()))
    }

    #[test]
    fn rule_spec_round_trip() {
        for spec in [
            RuleSpec::Word("11001".parse().unwrap()),
            RuleSpec::Positions("1,2,4".parse().unwrap()),
        ] {
            let back = match &spec {
                RuleSpec::Word(_) => RuleSpec::Word(spec.to_string().parse().unwrap()),
                RuleSpec::Positions(_) => RuleSpec::Positions(spec.to_string().parse().unwrap()),
            };
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli("check --rule 11001").code, 2);
        assert_eq!(cli("check --rule 11001 --positions 1,2 --n 9").code, 2);
        assert_eq!(cli("check --rule 1102 --n 9").code, 2);
        assert_eq!(cli("check --rule 11001 --n 4").code, 2);
        assert_eq!(cli("sizes --rule 111 --lo 9 --hi 4").code, 2);
        assert_eq!(cli("spectrum --positions 0,1,30").code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let o = cli("--help");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("spectrum"));
    }
}
