//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every subcommand runs through the same entry point as the binary;
//! operator identities are rechecked with the reference arithmetic from
//! `frobgen-testkit`.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use frobgen_core::generation::{apply_to_localization, LocalizationElement};
use frobgen_core::ideal_chain::Limits;
use frobgen_core::poly::{MultiIndex, Ring};
use frobgen_testkit::suites::{groebner_against_oracle, MembershipTally, PROPERTY_SUITES};
use frobgen_testkit::{apply_op, inv_mod, Naive, OpTerms, Pascal};
use serde_json::Value;

const CORPUS: [(&str, usize); 6] = [
    ("x1", 1),
    ("x1*x2", 2),
    ("x1^2 + x2^2", 2),
    ("x1^2 + x2^3", 2),
    ("x1^3 + x2^3 + x3^3", 3),
    ("x1^2 + x2^2 + x3^2 + x4^2", 4),
];

const QUADRIC: &str = "x1^2 + x2^2 + x3^2 + x4^2";

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = frobgen_cli::run(
        std::iter::once("frobgen").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).expect("utf-8 stdout"),
        err: String::from_utf8(err).expect("utf-8 stderr"),
    }
}

fn cli_ok(args: &[&str]) -> Result<String, String> {
    let r = cli(args);
    if r.code != 0 {
        return Err(format!("`{}` exited {}: {}", args.join(" "), r.code, r.err.trim()));
    }
    Ok(r.out)
}

fn parse_json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("bad JSON: {e}"))
}

fn naive(p: u64, d: usize, text: &str) -> Result<Naive, String> {
    let ring = Ring::new(p, d).map_err(|e| e.to_string())?;
    let f = ring.parse(text).map_err(|e| e.to_string())?;
    Ok(Naive::from_poly(&f))
}

fn u32s(v: &Value) -> Result<Vec<u32>, String> {
    v.as_array()
        .ok_or("expected an array")?
        .iter()
        .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| "expected an integer".to_string()))
        .collect()
}

fn op_terms(op: &Value) -> Result<OpTerms, String> {
    op["terms"]
        .as_array()
        .ok_or("operator without terms")?
        .iter()
        .map(|t| Ok((u32s(&t["x"])?, u32s(&t["d"])?, t["c"].as_u64().ok_or("bad coefficient")?)))
        .collect()
}

/// Smallest `t` with every derivation index below `p^t`.
fn level(terms: &OpTerms, p: u64) -> u32 {
    let top = terms.iter().flat_map(|(_, b, _)| b.iter().copied()).max().unwrap_or(0) as u64;
    let mut t = 0;
    let mut q = 1;
    while q <= top {
        q *= p;
        t += 1;
    }
    t
}

/// `P(g)` for an operator JSON value, either in normal form or as
/// `Σ h_α·Q_α`.
fn apply_json(op: &Value, g: &Naive, pascal: &mut Pascal) -> Result<Naive, String> {
    if let Some(summands) = op["summands"].as_array() {
        let mut acc = Naive::zero(g.p, g.d);
        for s in summands {
            let h = naive(g.p, g.d, s["h"].as_str().ok_or("summand without h")?)?;
            acc = acc.add(&h.mul(&apply_op(&op_terms(&s["q"])?, g, pascal)));
        }
        Ok(acc)
    } else {
        Ok(apply_op(&op_terms(op)?, g, pascal))
    }
}

fn json_level(op: &Value, p: u64) -> Result<u32, String> {
    match op["summands"].as_array() {
        Some(ss) => ss.iter().try_fold(0, |m, s| Ok(m.max(level(&op_terms(&s["q"])?, p)))),
        None => Ok(level(&op_terms(op)?, p)),
    }
}

/// `P(1/f) = 1/f^k`, read off at level `t ≥ level(P)` as
/// `P(f^{p^t−1})·f^k = f^{p^t}`.
fn maps_reciprocal(op: &Value, f: &Naive, k: u64) -> Result<bool, String> {
    let mut t = json_level(op, f.p)?;
    while f.p.pow(t) < k {
        t += 1;
    }
    let q = f.p.pow(t);
    let mut pascal = Pascal::new(f.p);
    let image = apply_json(op, &f.pow(q - 1), &mut pascal)?;
    Ok(image.mul(&f.pow(k)) == f.pow(q))
}

fn criterion_1(dir: &Path) -> Check {
    let mut slowest = Duration::ZERO;
    let mut done = 0;
    let mut skipped = Vec::new();
    for p in [2u64, 3, 5] {
        for (f, d) in CORPUS {
            let (ps, ds) = (p.to_string(), d.to_string());
            let path = dir.join(format!("cert_{p}_{done}_{d}.json"));
            let path_s = path.to_str().ok_or("non-UTF-8 temp path")?;
            let start = Instant::now();
            let r = cli(&["--prime", &ps, "--vars", &ds, "--json", "witness", "-f", f, "-o", path_s]);
            if r.code == 3 && r.err.contains("E_RESOURCE") {
                skipped.push(format!("{f} mod {p}"));
                continue;
            }
            if r.code != 0 {
                return Err(format!("witness {f} mod {p} exited {}: {}", r.code, r.err.trim()));
            }
            let cert = parse_json(&r.out)?;
            if cert["verified"] != Value::Bool(true) {
                return Err(format!("{f} mod {p}: certificate not verified"));
            }
            let v = cli(&["--json", "verify", "-c", path_s]);
            if v.code != 0 || parse_json(&v.out)?["verified"] != Value::Bool(true) {
                return Err(format!("{f} mod {p}: verify exited {}", v.code));
            }
            slowest = slowest.max(start.elapsed());

            let s = cert["s"].as_u64().ok_or("missing s")? as u32;
            let fn_ = naive(p, d, f)?;
            let op = &cert["operator"];
            if json_level(op, p)? > s {
                return Err(format!("{f} mod {p}: level(Q) exceeds s = {s}"));
            }
            let q = p.pow(s);
            let mut pascal = Pascal::new(p);
            if apply_json(op, &fn_.pow(q - 1), &mut pascal)? != fn_.pow(q - p) {
                return Err(format!("{f} mod {p}: Q(f^(p^s-1)) != f^(p^s-p) under reference arithmetic"));
            }
            if slowest > Duration::from_secs(60) {
                return Err(format!("{f} mod {p} took {slowest:?}"));
            }
            done += 1;
        }
    }
    let skip = if skipped.is_empty() {
        "none skipped".to_string()
    } else {
        format!("skipped at the exponent cap: {}", skipped.join(", "))
    };
    Ok(format!("{done} certificates verified, slowest {slowest:.2?}, {skip}"))
}

/// `(p−1)! / Π (α_i/2)!` reduced mod p, from exact integers.
fn multinomial_oracle(p: u64, alpha: &[u32]) -> u64 {
    let fact = |n: u64| (1..=n as u128).product::<u128>();
    let den: u128 = alpha.iter().map(|&a| fact(a as u64 / 2)).product();
    let num = fact(p - 1);
    assert_eq!(num % den, 0);
    ((num / den) % p as u128) as u64
}

fn criterion_2(dir: &Path) -> Check {
    let mut seen = Vec::new();
    for (p, alpha) in [(3u64, [2u32, 2, 0, 0]), (5, [2, 2, 2, 2]), (13, [6, 6, 6, 6])] {
        let ps = p.to_string();
        let out = cli_ok(&["--prime", &ps, "--json", "example-quadric"])?;
        let ex = parse_json(&out)?;
        if u32s(&ex["alpha"])? != alpha {
            return Err(format!("p = {p}: alpha = {}", ex["alpha"]));
        }
        let a = multinomial_oracle(p, &alpha);
        if ex["a"].as_u64() != Some(a) {
            return Err(format!("p = {p}: a = {}, oracle gives {a}", ex["a"]));
        }
        let terms = op_terms(&ex["operator"])?;
        if terms != vec![(vec![0; 4], alpha.to_vec(), inv_mod(a, p))] {
            return Err(format!("p = {p}: operator is not a^-1 * D_alpha"));
        }
        let f = naive(p, 4, QUADRIC)?;
        let mut pascal = Pascal::new(p);
        if apply_op(&terms, &f.pow(p - 1), &mut pascal) != Naive::one(p, 4) {
            return Err(format!("p = {p}: Q(f^(p-1)) != 1"));
        }

        let path = dir.join(format!("quadric_{p}.json"));
        std::fs::write(&path, ex["operator"].to_string()).map_err(|e| e.to_string())?;
        let image = cli_ok(&[
            "--json", "apply", "--op", path.to_str().unwrap(), "--num", "1", "--denom-level", "0", "-f", QUADRIC,
        ])?;
        let image = parse_json(&image)?;
        let num = naive(p, 4, image["numerator"].as_str().ok_or("no numerator")?)?;
        let t = image["level"].as_u64().ok_or("no level")? as u32;
        if num.mul(&f.pow(p)) != f.pow(p.pow(t)) {
            return Err(format!("p = {p}: Q(1/f) != 1/f^p"));
        }
        seen.push(format!("p={p}: a={a}"));
    }
    Ok(seen.join(", "))
}

fn criterion_3(dir: &Path) -> Check {
    let lim = Limits::default();
    for p in [2u64, 3, 5, 7] {
        let op = format!(r#"{{"p":{p},"d":1,"terms":[{{"x":[0],"d":[{}],"c":1}}]}}"#, p - 1);
        let path = dir.join(format!("dx_{p}.json"));
        std::fs::write(&path, op).map_err(|e| e.to_string())?;
        let out = cli_ok(&["--json", "apply", "--op", path.to_str().unwrap(), "--num", "1", "--denom-level", "0", "-f", "x1"])?;
        let image = parse_json(&out)?;
        let num = naive(p, 1, image["numerator"].as_str().ok_or("no numerator")?)?;
        let t = image["level"].as_u64().ok_or("no level")? as u32;
        let x = naive(p, 1, "x1")?;
        if num.mul(&x.pow(p)) != x.pow(p.pow(t)) {
            return Err(format!("p = {p}: D_(p-1)(1/x) != 1/x^p"));
        }
        let ring = Ring::new(p, 1).map_err(|e| e.to_string())?;
        let x = ring.var(0);
        let d = frobgen_core::diffop::DiffOp::derivation(&ring, MultiIndex::new(vec![p as u32 - 1]));
        let u = LocalizationElement::reciprocal_power(&x, 1, &lim).map_err(|e| e.to_string())?;
        let v = apply_to_localization(&d, &u, &lim).map_err(|e| e.to_string())?;
        if !v.is_reciprocal_power(p, &lim).map_err(|e| e.to_string())? {
            return Err(format!("p = {p}: library action disagrees"));
        }

        let cert = dir.join(format!("x_{p}.json"));
        let cert_s = cert.to_str().unwrap();
        cli_ok(&["--prime", &p.to_string(), "--vars", "1", "witness", "-f", "x1", "-o", cert_s])?;
        cli_ok(&["verify", "-c", cert_s])?;
    }
    Ok("p = 2, 3, 5, 7".into())
}

fn criterion_4() -> Check {
    const CASES: u64 = 120;
    for (name, check) in PROPERTY_SUITES {
        for i in 0..CASES {
            let seed = 0xacce_0000 + i;
            check(seed).map_err(|m| format!("{name}, seed {seed:#x}: {m}"))?;
        }
    }
    Ok(format!("{} suites x {CASES} cases", PROPERTY_SUITES.len()))
}

fn criterion_5() -> Check {
    const IDEALS: u64 = 60;
    let mut tally = MembershipTally::default();
    for i in 0..IDEALS {
        let seed = 0x0b5e_0000 + i;
        groebner_against_oracle(seed, &mut tally).map_err(|m| format!("seed {seed:#x}: {m}"))?;
    }
    Ok(format!(
        "{IDEALS} ideals, {} members, {} non-members",
        tally.members, tally.non_members
    ))
}

fn criterion_6() -> Check {
    let mut count = 0;
    for p in [2u64, 3] {
        for (f, d) in [("x1", 1), ("x1*x2", 2), ("x1^2 + x2^3", 2)] {
            let (ps, ds) = (p.to_string(), d.to_string());
            let fn_ = naive(p, d, f)?;
            let out = cli_ok(&["--prime", &ps, "--vars", &ds, "--json", "power-witness", "-f", f, "-e", "2"])?;
            if !maps_reciprocal(&parse_json(&out)?["operator"], &fn_, p * p)? {
                return Err(format!("{f} mod {p}: power witness misses 1/f^{}", p * p));
            }
            for k in 1..=p * p {
                let ks = k.to_string();
                let out = cli_ok(&["--prime", &ps, "--vars", &ds, "--json", "gen-witness", "-f", f, "-k", &ks])?;
                if !maps_reciprocal(&parse_json(&out)?["operator"], &fn_, k)? {
                    return Err(format!("{f} mod {p}: generator witness misses 1/f^{k}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("6 power witnesses, {count} generator witnesses"))
}

fn criterion_7(dir: &Path) -> Check {
    let mut runs = 0;
    let mut twice = |args: Vec<String>| -> Result<(), String> {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = cli_ok(&args)?;
        let b = cli_ok(&args)?;
        if a != b {
            return Err(format!("`{}` is not reproducible", args.join(" ")));
        }
        parse_json(&a)?;
        runs += 1;
        Ok(())
    };
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for p in ["2", "3", "5"] {
        for (i, (f, d)) in CORPUS.iter().enumerate() {
            let d = d.to_string();
            let ctx = ["--prime", p, "--vars", &d, "--json"];
            let with = |rest: &[&str]| s(&[&ctx[..], rest].concat());
            let cert = dir.join(format!("det_{p}_{i}.json"));
            let cert = cert.to_str().unwrap();
            twice(with(&["decompose", "-f", f, "-n", "1"]))?;
            twice(with(&["decompose", "-f", f, "-n", "2"]))?;
            twice(with(&["chain", "-f", f]))?;
            twice(with(&["witness", "-f", f, "-o", cert]))?;
            let first = std::fs::read(cert).map_err(|e| e.to_string())?;
            twice(with(&["witness", "-f", f, "--expand"]))?;
            twice(with(&["verify", "-c", cert]))?;
            twice(with(&["apply", "--op", cert, "--num", "1", "--denom-level", "0", "-f", f]))?;
            twice(with(&["power-witness", "-f", f, "-e", "1"]))?;
            twice(with(&["gen-witness", "-f", f, "-k", "2"]))?;
            twice(with(&["witness", "-f", f, "-o", cert]))?;
            if std::fs::read(cert).map_err(|e| e.to_string())? != first {
                return Err(format!("certificate file for {f} mod {p} changed between runs"));
            }
        }
    }
    for p in ["3", "5", "13"] {
        twice(s(&["--prime", p, "--json", "example-quadric"]))?;
    }
    Ok(format!("{runs} invocations, each run twice"))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: [Criterion; 7] = [
        ("end-to-end certificates on the corpus", Box::new(|| criterion_1(dir.path()))),
        ("quadric example for p = 3, 5, 13", Box::new(|| criterion_2(dir.path()))),
        ("f = x anchor", Box::new(|| criterion_3(dir.path()))),
        ("structural property suites", Box::new(criterion_4)),
        ("Groebner oracle equivalence", Box::new(criterion_5)),
        ("iterated generation", Box::new(criterion_6)),
        ("deterministic JSON", Box::new(|| criterion_7(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
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
