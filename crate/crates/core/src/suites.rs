//! Property suites over generated corpora. Each returns a [`SuiteReport`];
//! the `corpus` command and the acceptance tests both run them.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::debruijn_oracle::{self, Db};
use crate::freevars::{fv_judgement, fv_subst, FvSeq};
use crate::nameless::{alpha_eq, sigma_normalize, translate, NExpr};
use crate::rewrite::{
    classify_subst_nf, is_pure, normalize, normalize_lpi, normalize_spa, successors, Calculus,
    RewriteConfig, Strategy, Trace, SPA_STEP_CAP,
};
use crate::syntax::{
    enumerate_judgements, generate, generate_subst_judgements, parse_judgement, Judgement, Term, Var,
};
use crate::syntax::MAX_CONTEXT;
use crate::termination::{
    check_label_coherence, check_q_decrease, embed_step, r_step, star, QReport,
};
use crate::wellformed::{derive, is_derivable, lambda_closure};

/// Size budget for randomly generated judgements.
pub const RANDOM_BUDGET: usize = 40;
/// Failures kept verbatim in a report; the count is always exact.
const KEEP: usize = 20;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    /// Objects examined (judgements, graph nodes, steps, ...).
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    /// Single steps whose free-variable sequences were compared.
    pub fv_steps: usize,
    pub fv_failures: usize,
    /// Checks abandoned at a resource cap; neither passed nor failed.
    pub incomplete: usize,
    /// Distinct judgements fully explored, for graph suites.
    pub nodes: usize,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.fv_failures == 0 && self.incomplete == 0
    }

    fn fail(&mut self, msg: impl fmt::Display) {
        self.failure_count += 1;
        self.note(msg);
    }

    fn note(&mut self, msg: impl fmt::Display) {
        if self.failures.len() < KEEP {
            self.failures.push(msg.to_string());
        }
    }

    fn fv_step(&mut self, from: &Judgement, to: &Judgement) {
        self.fv_steps += 1;
        if !fv_of(to).sqsubseteq(&fv_of(from)) {
            self.fv_failures += 1;
            self.note(format!("FV grew: `{from}` to `{to}`"));
        }
    }

    fn fv_trace(&mut self, t: &Trace) {
        let mut prev = &t.start;
        for s in &t.steps {
            self.fv_step(prev, &s.result);
            prev = &s.result;
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        self.fv_steps += other.fv_steps;
        self.fv_failures += other.fv_failures;
        self.incomplete += other.incomplete;
        self.nodes += other.nodes;
        for f in other.failures {
            if self.failures.len() < KEEP {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: checked {}, failures {}, fv steps {}, fv failures {}",
            self.name, self.checked, self.failure_count, self.fv_steps, self.fv_failures
        )?;
        if self.incomplete > 0 {
            write!(f, ", incomplete {}", self.incomplete)?;
        }
        if self.nodes > 0 {
            write!(f, ", nodes {}", self.nodes)?;
        }
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

fn fv_of(j: &Judgement) -> FvSeq {
    match j {
        Judgement::Term(g, m) => fv_judgement(g, m),
        Judgement::Subst(_, s, _) => fv_subst(s),
    }
}

fn vocab(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| Var::new(n).expect("valid name")).collect()
}

/// Term judgements from `seed`, `seed+1`, ...; every fourth one is a
/// substitution judgement.
pub fn random_corpus(seed: u64, count: usize, cfg: &RewriteConfig) -> Vec<Judgement> {
    (0..count as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            if i % 4 == 3 {
                generate_subst_judgements(s, 1, RANDOM_BUDGET, &cfg.vocab).remove(0)
            } else {
                generate(s, RANDOM_BUDGET, &cfg.vocab)
            }
        })
        .collect()
}

fn spa_trace(j: &Judgement, cfg: &RewriteConfig) -> Result<Trace, String> {
    normalize_spa(j, cfg).map_err(|e| format!("`{j}`: {e}"))
}

/// Per-start node cap of the strong normalization suite.
pub const SN_NODE_CAP: usize = 2000;

fn fingerprint(j: &Judgement) -> u128 {
    let mut a = DefaultHasher::new();
    let mut b = DefaultHasher::new();
    0u8.hash(&mut a);
    1u8.hash(&mut b);
    j.hash(&mut a);
    j.hash(&mut b);
    (u128::from(a.finish()) << 64) | u128::from(b.finish())
}

/// Every judgement of size at most `max_size` over `{x, y}`: the full `σπα`
/// reduction graph below it is acyclic. A start whose graph has more than
/// `node_cap` unexplored nodes is counted as incomplete.
pub fn strong_normalization(max_size: usize, node_cap: usize, cfg: &RewriteConfig) -> SuiteReport {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut rep = SuiteReport::new("strong normalization");
    let starts = enumerate_judgements(max_size, &vocab(&["x", "y"]), MAX_CONTEXT);
    let succ = |j: &Judgement| -> Vec<Judgement> {
        successors(j, Calculus::Spa, cfg).into_iter().map(|(_, n)| n).collect()
    };
    let mut marks: HashMap<u128, Mark> = HashMap::new();
    for start in &starts {
        rep.checked += 1;
        if marks.contains_key(&fingerprint(start)) {
            continue;
        }
        let mut opened = vec![fingerprint(start)];
        marks.insert(opened[0], Mark::Open);
        let mut stack: Vec<(FvSeq, u128, Vec<Judgement>, usize)> =
            vec![(fv_of(start), opened[0], succ(start), 0)];
        let mut complete = true;
        while let Some((fv, key, next, idx)) = stack.last_mut() {
            if *idx == next.len() {
                marks.insert(*key, Mark::Done);
                stack.pop();
                continue;
            }
            let child = next[*idx].clone();
            *idx += 1;
            let child_fv = fv_of(&child);
            rep.fv_steps += 1;
            if !child_fv.sqsubseteq(fv) {
                rep.fv_failures += 1;
                let msg = format!("FV grew: `{child}` below `{start}`");
                rep.note(msg);
            }
            let ck = fingerprint(&child);
            match marks.get(&ck) {
                Some(Mark::Open) => rep.fail(format!("cycle through `{child}` below `{start}`")),
                Some(Mark::Done) => {}
                None => {
                    if opened.len() >= node_cap {
                        complete = false;
                        break;
                    }
                    marks.insert(ck, Mark::Open);
                    opened.push(ck);
                    let s = succ(&child);
                    stack.push((child_fv, ck, s, 0));
                }
            }
        }
        if !complete {
            rep.incomplete += 1;
            rep.note(format!("more than {node_cap} nodes below `{start}`"));
            for k in opened {
                if marks.get(&k) == Some(&Mark::Open) {
                    marks.remove(&k);
                }
            }
        }
    }
    rep.nodes = marks.len();
    rep
}

/// Every judgement along every `σπα` trace is derivable.
pub fn subject_reduction(corpus: &[Judgement], cfg: &RewriteConfig) -> SuiteReport {
    let parts: Vec<SuiteReport> = corpus
        .par_iter()
        .map(|j| {
            let mut r = SuiteReport::new("");
            match spa_trace(j, cfg) {
                Err(e) => r.fail(e),
                Ok(t) => {
                    for k in t.judgements() {
                        r.checked += 1;
                        if let Err(e) = derive(k) {
                            r.fail(format!("`{k}` (from `{j}`): {e}"));
                        }
                    }
                    r.fv_trace(&t);
                }
            }
            r
        })
        .collect();
    collect("subject reduction", parts)
}

fn collect(name: &str, parts: Vec<SuiteReport>) -> SuiteReport {
    let mut rep = SuiteReport::new(name);
    for p in parts {
        rep.merge(p);
    }
    rep
}

/// Normal substitutions have one of the four shapes; normal terms are pure.
pub fn normal_forms(corpus: &[Judgement], cfg: &RewriteConfig) -> SuiteReport {
    let parts: Vec<SuiteReport> = corpus
        .par_iter()
        .map(|j| {
            let mut r = SuiteReport::new("");
            match spa_trace(j, cfg) {
                Err(e) => r.fail(e),
                Ok(t) => {
                    r.checked += 1;
                    match t.last() {
                        Judgement::Term(_, m) if !is_pure(m) => {
                            r.fail(format!("normal form `{}` is not pure", t.last()))
                        }
                        Judgement::Subst(_, s, _) if classify_subst_nf(s).is_none() => {
                            r.fail(format!("normal substitution `{s}` has no listed shape"))
                        }
                        _ => {}
                    }
                    r.fv_trace(&t);
                }
            }
            r
        })
        .collect();
    collect("normal forms", parts)
}

/// `σ(translate(J)) = translate(σπα-nf(J))`.
pub fn commuting_square(corpus: &[Judgement], cfg: &RewriteConfig) -> SuiteReport {
    let parts: Vec<SuiteReport> = corpus
        .par_iter()
        .map(|j| {
            let mut r = SuiteReport::new("");
            r.checked += 1;
            let t = match spa_trace(j, cfg) {
                Ok(t) => t,
                Err(e) => {
                    r.fail(e);
                    return r;
                }
            };
            r.fv_trace(&t);
            let (Ok(d1), Ok(d2)) = (derive(j), derive(t.last())) else {
                r.fail(format!("`{j}` or its normal form is not derivable"));
                return r;
            };
            let lhs = sigma_normalize(&translate(&d1));
            let rhs = translate(&d2);
            if lhs != rhs {
                r.fail(format!("`{j}`: sigma gives `{lhs}`, normal form gives `{rhs}`"));
            }
            r
        })
        .collect();
    collect("commuting square", parts)
}

/// Leftmost, rightmost and a seeded random strategy reach α-equivalent normal forms.
pub fn strategy_confluence(corpus: &[Judgement], seed: u64, cfg: &RewriteConfig) -> SuiteReport {
    let parts: Vec<SuiteReport> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, j)| {
            let mut r = SuiteReport::new("");
            r.checked += 1;
            let strategies = [
                Strategy::Leftmost,
                Strategy::Rightmost,
                Strategy::Random(seed.wrapping_add(i as u64)),
            ];
            let traces: Vec<Trace> = strategies
                .iter()
                .map(|s| normalize(j, Calculus::Spa, *s, SPA_STEP_CAP, cfg))
                .collect();
            for t in &traces {
                r.fv_trace(t);
            }
            let first = traces[0].last();
            for (s, t) in strategies.iter().zip(&traces).skip(1) {
                match alpha_eq(first, t.last()) {
                    Ok(true) => {}
                    Ok(false) => r.fail(format!(
                        "`{j}`: `{first}` vs `{}` under {s:?}",
                        t.last()
                    )),
                    Err(e) => r.fail(format!("`{j}`: {e}")),
                }
            }
            r
        })
        .collect();
    collect("strategy confluence", parts)
}

/// Named S, K and I.
pub const COMBINATORS: [(&str, &str); 3] = [
    ("S", "lam x y z. x z (y z)"),
    ("K", "lam x y. x"),
    ("I", "lam x. x"),
];

/// Oracle limits for selecting combinator terms.
const ORACLE_FUEL: usize = 200;
const ORACLE_MAX_SIZE: usize = 200;

/// Applicative combinations of S, K, I with at most `leaves` leaves,
/// smallest first, paired with a display name.
pub fn combinator_terms(leaves: usize) -> Vec<(String, Term)> {
    let base: Vec<(String, Term)> = COMBINATORS
        .iter()
        .map(|(n, src)| {
            let Judgement::Term(_, t) = parse_judgement(&format!("|- {src}")).expect("valid") else {
                unreachable!()
            };
            (n.to_string(), t)
        })
        .collect();
    let mut by_leaves: Vec<Vec<(String, Term)>> = vec![Vec::new(), base];
    for n in 2..=leaves {
        let mut layer = Vec::new();
        for k in 1..n {
            for (fname, f) in &by_leaves[k] {
                for (aname, a) in &by_leaves[n - k] {
                    let an = if n - k > 1 { format!("({aname})") } else { aname.clone() };
                    layer.push((format!("{fname} {an}"), Term::app(f.clone(), a.clone())));
                }
            }
        }
        by_leaves.push(layer);
    }
    by_leaves.into_iter().flatten().collect()
}

/// The first `count` combinator terms the oracle normalizes within its limits.
pub fn sn_combinators(count: usize) -> Vec<(String, Term, Db)> {
    let mut out = Vec::new();
    for (name, t) in combinator_terms(4) {
        let db = debruijn_oracle::from_named(&t, &[]).expect("closed, closure-free");
        if let Some(nf) = debruijn_oracle::normalize(&db, ORACLE_FUEL, ORACLE_MAX_SIZE) {
            out.push((name, t, nf));
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// λπ-normalizing a combinator term and translating agrees with the oracle.
pub fn combinator_confluence(count: usize, max_steps: usize, cfg: &RewriteConfig) -> SuiteReport {
    let terms = sn_combinators(count);
    let parts: Vec<SuiteReport> = terms
        .par_iter()
        .map(|(name, t, nf)| {
            let mut r = SuiteReport::new("");
            r.checked += 1;
            let j = Judgement::Term(Default::default(), t.clone());
            let trace = normalize_lpi(&j, max_steps, Strategy::Leftmost, cfg);
            r.fv_trace(&trace);
            let last = trace.last();
            let got = derive(last)
                .ok()
                .map(|d| translate(&d))
                .and_then(|e| match e {
                    NExpr::Term(u) => debruijn_oracle::from_nameless(&u),
                    NExpr::Subst(_) => None,
                });
            match got {
                Some(db) if &db == nf => {}
                _ => r.fail(format!("{name}: λπ gives `{last}` ({:?})", trace.status)),
            }
            r
        })
        .collect();
    let mut rep = collect("combinator confluence", parts);
    if terms.len() < count {
        rep.fail(format!("only {} combinator terms normalize", terms.len()));
    }
    rep
}

/// Random `σπα` steps on closed terms `λΓ.M`, each mirrored in `R` and each
/// `R` step checked for label coherence.
pub fn embedding(steps: usize, seed: u64, cfg: &RewriteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("embedding");
    let mut i = 0u64;
    while rep.checked < steps {
        let j = generate(seed.wrapping_add(i), RANDOM_BUDGET, &cfg.vocab);
        let Judgement::Term(g, m) = &j else { unreachable!() };
        let closed = Judgement::Term(Default::default(), lambda_closure(g, m));
        let t = normalize(&closed, Calculus::Spa, Strategy::Random(seed ^ i), steps - rep.checked, cfg);
        let mut prev = closed.clone();
        for st in &t.steps {
            rep.checked += 1;
            let (Judgement::Term(_, m1), Judgement::Term(_, m2)) = (&prev, &st.result) else {
                unreachable!()
            };
            match embed_step(m1, m2, &st.redex) {
                Err(e) => rep.fail(format!("`{m1}` by {}: {e}", st.redex)),
                Ok(rsteps) => {
                    let mut cur = star(m1);
                    for rs in &rsteps {
                        if let Err(e) = check_label_coherence(&cur, rs) {
                            rep.fail(format!("`{cur}` by {}: {e}", rs.rule));
                        }
                        cur = r_step(&cur, rs).expect("embedded step applies");
                    }
                }
            }
            prev = st.result.clone();
        }
        i += 1;
    }
    rep
}

pub fn q_decrease(label_bound: u32) -> (SuiteReport, QReport) {
    let q = check_q_decrease(label_bound);
    let mut rep = SuiteReport::new("Q decrease");
    rep.checked = q.instances;
    for f in &q.failures {
        rep.fail(format!("{}: {} > {}", f.rule, f.lhs, f.rhs));
    }
    (rep, q)
}

/// Generated judgements print and re-parse to themselves and are derivable.
pub fn round_trip(count: usize, seed: u64, cfg: &RewriteConfig) -> SuiteReport {
    let parts: Vec<SuiteReport> = random_corpus(seed, count, cfg)
        .par_iter()
        .map(|j| {
            let mut r = SuiteReport::new("");
            r.checked += 1;
            let text = j.to_string();
            match parse_judgement(&text) {
                Ok(k) if &k == j => {}
                Ok(k) => r.fail(format!("`{text}` parses as `{k}`")),
                Err(e) => r.fail(format!("`{text}`: {e}")),
            }
            if !is_derivable(j) {
                r.fail(format!("`{text}` is not derivable"));
            }
            r
        })
        .collect();
    collect("round trip", parts)
}

/// Names accepted by the `corpus` command.
pub const SUITES: [&str; 9] = [
    "strong-normalization",
    "subject-reduction",
    "normal-forms",
    "commuting-square",
    "strategy-confluence",
    "combinator-confluence",
    "embedding",
    "q-decrease",
    "round-trip",
];

/// Runs a suite by name with its default corpus size.
pub fn run_named(name: &str, seed: u64, cfg: &RewriteConfig) -> Option<SuiteReport> {
    Some(match name {
        "strong-normalization" => strong_normalization(7, SN_NODE_CAP, cfg),
        "subject-reduction" => subject_reduction(&random_corpus(seed, 1000, cfg), cfg),
        "normal-forms" => normal_forms(&random_corpus(seed, 1000, cfg), cfg),
        "commuting-square" => commuting_square(&random_corpus(seed, 500, cfg), cfg),
        "strategy-confluence" => strategy_confluence(&random_corpus(seed, 300, cfg), seed, cfg),
        "combinator-confluence" => combinator_confluence(100, 10_000, cfg),
        "embedding" => embedding(10_000, seed, cfg),
        "q-decrease" => q_decrease(3).0,
        "round-trip" => round_trip(10_000, seed, cfg),
        _ => return None,
    })
}
