//! Command-line front end.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::freevars::{fv_judgement, fv_subst, fv_term, support};
use crate::nameless::{alpha_eq, simeq, translate, translate_ext};
use crate::rewrite::{normalize, redexes, step, Calculus, RewriteConfig, Strategy, Trace};
use crate::suites::{self, SuiteReport, RANDOM_BUDGET};
use crate::syntax::{
    generate, generate_subst_judgements, parse, parse_judgement, parse_term, Category, Context,
    Judgement, Parsed, Subst, Term, Var,
};
use crate::termination::check_q_decrease;
use crate::typing_ccc::{ccc_arrow, context_object, parse_typed_judgement, typecheck, TypedDerivation};
use crate::wellformed::{derive, Derivation};

#[derive(Debug, Parser)]
#[command(name = "lampi", version, about = "Named explicit substitutions")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, clap::Args)]
struct Opts {
    #[arg(long, global = true, value_enum, default_value_t = CalcArg::Lpi)]
    calculus: CalcArg,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Leftmost)]
    strategy: StrategyArg,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_steps: usize,
    #[arg(long, global = true, env = "LAMPI_SEED", default_value_t = 0)]
    seed: u64,
    /// Size budget for `gen`.
    #[arg(long, global = true, default_value_t = RANDOM_BUDGET)]
    size: usize,
    /// Comma-separated renaming vocabulary.
    #[arg(long, global = true, default_value = "x,y,z")]
    vocab: String,
    /// Enable StrongAbs, IdTerm and IdSubst.
    #[arg(long, global = true)]
    extra_rules: bool,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 3)]
    label_bound: u32,
    /// Accept a bare term and build its context from the free variables.
    #[arg(long, global = true)]
    infer_context: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CalcArg {
    Spa,
    Lpi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CategoryArg {
    Term,
    Subst,
    Context,
    Judgement,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Parse and print in canonical form.
    Parse {
        text: String,
        #[arg(long, value_enum, default_value_t = CategoryArg::Judgement)]
        category: CategoryArg,
    },
    /// Derive a judgement.
    Check { judgement: String },
    /// Type a simply typed judgement.
    Typecheck { judgement: String },
    /// Interpret a typed judgement as a CCC arrow.
    Ccc { judgement: String },
    /// Free-variable sequence of a judgement or a bare term.
    Fv { text: String },
    /// List the redexes of a judgement.
    Redexes { judgement: String },
    /// Contract one redex, by its index in `redexes`.
    Step {
        judgement: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Reduce to normal form or until the step budget runs out
    Normalize { judgement: String },
    /// Name-free translation.
    Translate {
        judgement: String,
        #[arg(long)]
        ext: bool,
    },
    /// Same extended name-free translation
    AlphaEq { left: String, right: String },
    /// Same name-free translation
    Simeq { left: String, right: String },
    /// Random derivable judgements.
    Gen {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        subst: bool,
    },
    /// Check every labelled rule for an LPO decrease.
    Termination,
    /// Run a property suite.
    Corpus {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        suite: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Fail {
    /// Exit 1.
    False(String),
    /// Exit 2.
    Usage(String),
}

type Res = Result<(bool, String), Fail>;

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail::Usage(e.to_string())
}

fn falsy(e: impl std::fmt::Display) -> Fail {
    Fail::False(e.to_string())
}

/// Runs the CLI on `argv` (program name first).
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((ok, out)) => Output {
            code: if ok { 0 } else { 1 },
            stdout: with_newline(out),
            stderr: String::new(),
        },
        Err(Fail::False(e)) => Output { code: 1, stdout: String::new(), stderr: with_newline(e) },
        Err(Fail::Usage(e)) => Output { code: 2, stdout: String::new(), stderr: with_newline(e) },
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn config(o: &Opts) -> Result<RewriteConfig, Fail> {
    let vocab = o
        .vocab
        .split(',')
        .map(|v| Var::new(v.trim()).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    if vocab.is_empty() {
        return Err(usage("empty vocabulary"));
    }
    Ok(RewriteConfig { extra_rules: o.extra_rules, vocab })
}

fn strategy(o: &Opts) -> Strategy {
    match o.strategy {
        StrategyArg::Leftmost => Strategy::Leftmost,
        StrategyArg::Rightmost => Strategy::Rightmost,
        StrategyArg::Random => Strategy::Random(o.seed),
    }
}

fn calculus(o: &Opts) -> Calculus {
    match o.calculus {
        CalcArg::Spa => Calculus::Spa,
        CalcArg::Lpi => Calculus::Lpi,
    }
}

fn term_vars(m: &Term, out: &mut Vec<Var>) {
    match m {
        Term::Var(a) => out.push(a.clone()),
        Term::App(f, a) => {
            term_vars(f, out);
            term_vars(a, out);
        }
        Term::Lam(_, b) => term_vars(b, out),
        Term::Clos(s, b) => {
            subst_vars(s, out);
            term_vars(b, out);
        }
    }
}

fn subst_vars(s: &Subst, out: &mut Vec<Var>) {
    match s {
        Subst::Id | Subst::Pi(_) => {}
        Subst::Cons(r, n, _) => {
            subst_vars(r, out);
            term_vars(n, out);
        }
        Subst::Comp(l, r) => {
            subst_vars(l, out);
            subst_vars(r, out);
        }
    }
}

/// One entry per free name, in order of first occurrence.
pub fn infer_context(m: &Term) -> Result<Context, String> {
    let fv = fv_term(m);
    if let Some((i, level)) = fv.levels().iter().enumerate().skip(1).find(|(_, l)| !l.is_empty()) {
        let names: Vec<String> = level.iter().map(|v| v.to_string()).collect();
        return Err(format!(
            "{} needed at level {} but the inferred context has one position per name",
            names.join(", "),
            i + 1
        ));
    }
    let sup = support(&fv);
    let mut seen = Vec::new();
    let mut occ = Vec::new();
    term_vars(m, &mut occ);
    for v in occ {
        if sup.contains(&v) && !seen.contains(&v) {
            seen.push(v);
        }
    }
    Ok(Context::new(seen))
}

fn read_judgement(text: &str, o: &Opts) -> Result<Judgement, Fail> {
    if o.infer_context && !text.contains("|-") {
        let m = parse_term(text).map_err(usage)?;
        let g = infer_context(&m).map_err(falsy)?;
        return Ok(Judgement::Term(g, m));
    }
    parse_judgement(text).map_err(usage)
}

fn derive_or_fail(j: &Judgement) -> Result<Derivation, Fail> {
    derive(j).map_err(falsy)
}

fn derivation_json(d: &Derivation) -> Value {
    json!({
        "conclusion": d.conclusion.to_string(),
        "rule": d.rule.to_string(),
        "premises": d.premises.iter().map(derivation_json).collect::<Vec<_>>(),
    })
}

fn typed_derivation_json(d: &TypedDerivation) -> Value {
    json!({
        "conclusion": d.conclusion.to_string(),
        "rule": d.rule.to_string(),
        "premises": d.premises.iter().map(typed_derivation_json).collect::<Vec<_>>(),
    })
}

fn render(o: &Opts, human: String, v: Value) -> String {
    if o.json {
        serde_json::to_string_pretty(&v).expect("plain data")
    } else {
        human
    }
}

fn trace_human(t: &Trace) -> String {
    let mut s = t.start.to_string();
    for st in &t.steps {
        s.push_str(&format!("\n  -> {}    {}", st.result, st.redex));
    }
    if t.status == crate::rewrite::Status::BudgetExhausted {
        s.push_str("\n(step budget exhausted)");
    }
    s
}

fn report_out(o: &Opts, r: &SuiteReport) -> (bool, String) {
    (r.passed(), render(o, r.to_string(), serde_json::to_value(r).expect("plain data")))
}

fn execute(cli: &Cli) -> Res {
    let o = &cli.opts;
    let cfg = config(o)?;
    match &cli.cmd {
        Cmd::Parse { text, category } => {
            let cat = match category {
                CategoryArg::Term => Category::Term,
                CategoryArg::Subst => Category::Subst,
                CategoryArg::Context => Category::Context,
                CategoryArg::Judgement => Category::Judgement,
            };
            let (name, printed) = match parse(text, cat).map_err(usage)? {
                Parsed::Term(m) => ("term", m.to_string()),
                Parsed::Subst(s) => ("subst", s.to_string()),
                Parsed::Context(g) => ("context", g.to_string()),
                Parsed::Judgement(j) => ("judgement", j.to_string()),
            };
            Ok((true, render(o, printed.clone(), json!({"category": name, "printed": printed}))))
        }
        Cmd::Check { judgement } => {
            let j = read_judgement(judgement, o)?;
            let d = derive_or_fail(&j)?;
            Ok((true, render(o, d.to_string(), derivation_json(&d))))
        }
        Cmd::Typecheck { judgement } => {
            let j = parse_typed_judgement(judgement).map_err(usage)?;
            let d = typecheck(&j).map_err(falsy)?;
            Ok((true, render(o, d.to_string(), typed_derivation_json(&d))))
        }
        Cmd::Ccc { judgement } => {
            let j = parse_typed_judgement(judgement).map_err(usage)?;
            let d = typecheck(&j).map_err(falsy)?;
            let obj = context_object(j.context()).to_string();
            let arrow = ccc_arrow(&d).to_string();
            Ok((
                true,
                render(o, format!("{obj}: {arrow}"), json!({"object": obj, "arrow": arrow})),
            ))
        }
        Cmd::Fv { text } => {
            let fv = if o.infer_context || !text.contains("|-") {
                fv_term(&parse_term(text).map_err(usage)?)
            } else {
                match parse_judgement(text).map_err(usage)? {
                    Judgement::Term(g, m) => fv_judgement(&g, &m),
                    Judgement::Subst(_, s, _) => fv_subst(&s),
                }
            };
            let s = fv.to_string();
            Ok((true, render(o, s.clone(), json!({ "fv": s }))))
        }
        Cmd::Redexes { judgement } => {
            let j = read_judgement(judgement, o)?;
            derive_or_fail(&j)?;
            let rs = redexes(&j, calculus(o), &cfg);
            let human = rs
                .iter()
                .enumerate()
                .map(|(i, r)| format!("{i}: {r}"))
                .collect::<Vec<_>>()
                .join("\n");
            let v = serde_json::to_value(&rs).expect("plain data");
            Ok((true, render(o, human, v)))
        }
        Cmd::Step { judgement, index } => {
            let j = read_judgement(judgement, o)?;
            derive_or_fail(&j)?;
            let rs = redexes(&j, calculus(o), &cfg);
            let r = rs
                .get(*index)
                .ok_or_else(|| falsy(format!("no redex {index}; there are {}", rs.len())))?;
            let next = step(&j, r).map_err(falsy)?;
            let v = json!({"redex": r, "result": next.to_string()});
            Ok((true, render(o, next.to_string(), v)))
        }
        Cmd::Normalize { judgement } => {
            let j = read_judgement(judgement, o)?;
            derive_or_fail(&j)?;
            let t = normalize(&j, calculus(o), strategy(o), o.max_steps, &cfg);
            Ok((true, render(o, trace_human(&t), t.to_json())))
        }
        Cmd::Translate { judgement, ext } => {
            let j = read_judgement(judgement, o)?;
            let d = derive_or_fail(&j)?;
            let s = if *ext {
                translate_ext(&d).to_string()
            } else {
                translate(&d).to_string()
            };
            Ok((true, render(o, s.clone(), json!({ "nameless": s }))))
        }
        Cmd::AlphaEq { left, right } | Cmd::Simeq { left, right } => {
            let (a, b) = (read_judgement(left, o)?, read_judgement(right, o)?);
            let eq = if matches!(cli.cmd, Cmd::AlphaEq { .. }) {
                alpha_eq(&a, &b)
            } else {
                simeq(&a, &b)
            }
            .map_err(falsy)?;
            Ok((eq, render(o, eq.to_string(), json!(eq))))
        }
        Cmd::Gen { count, subst } => {
            let js: Vec<Judgement> = if *subst {
                generate_subst_judgements(o.seed, *count, o.size, &cfg.vocab)
            } else {
                (0..*count as u64)
                    .map(|i| generate(o.seed.wrapping_add(i), o.size, &cfg.vocab))
                    .collect()
            };
            let lines: Vec<String> = js.iter().map(|j| j.to_string()).collect();
            Ok((true, render(o, lines.join("\n"), json!(lines))))
        }
        Cmd::Termination => {
            let q = check_q_decrease(o.label_bound);
            let mut human = format!(
                "rules {}, instances {}, failures {}, label bound {}",
                q.rules_checked,
                q.instances,
                q.failures.len(),
                q.label_bound
            );
            for f in &q.failures {
                human.push_str(&format!("\n  {}: {} > {}", f.rule, f.lhs, f.rhs));
            }
            let ok = q.failures.is_empty();
            Ok((ok, render(o, human, serde_json::to_value(&q).expect("plain data"))))
        }
        Cmd::Corpus { suite } => {
            let r = suites::run_named(suite, o.seed, &cfg).ok_or_else(|| usage("unknown suite"))?;
            Ok(report_out(o, &r))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Output {
        run(std::iter::once("lampi").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["check", "x |- x"]).code, 0);
        assert_eq!(go(&["check", "|- x"]).code, 1);
        assert_eq!(go(&["check", "|- lam"]).code, 2);
        assert_eq!(go(&["frobnicate"]).code, 2);
    }

    #[test]
    fn alpha_eq_example() {
        let out = go(&["alpha-eq", "x,y |- pi_y * x", "x,x |- pi_x * x"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "true\n"));
    }

    #[test]
    fn inferred_context() {
        let out = go(&["normalize", "--infer-context", "(lam x y. x) y"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("y |- lam z. y"), "{}", out.stdout);
        assert_eq!(go(&["check", "--infer-context", "pi_x * x"]).code, 1);
    }
}
