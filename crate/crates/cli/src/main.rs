use clap::{Parser, Subcommand, ValueEnum};
use ellpsp::curve::rational::{projective_integers, rational_point};
use ellpsp::curve::{CurveGroup, PointRecord, DEFAULT_POINT_CAP};
use ellpsp::fp::{curve_census, short_form_census, CensusRecord};
use ellpsp::modarith::reduce;
use ellpsp::psp::{
    carmichael_test, good_reduction_curves, gordon_sweep, run_on_coords, search, strong_g_witness,
    PointSet, TestKind, Verdict,
};
use ellpsp::stats::{
    equal_nu2_census, overall_curves_bound, overall_curves_bound_snz, random_curve_bound_check,
    strong_g_point_fraction, verify_max_h, verify_max_h_prime,
};
use ellpsp::{Curve, Error, Factorization, Ratio};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "ellpsp",
    version,
    about = "Elliptic pseudoprime tests and 2-adic order statistics"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest group that may be enumerated.
    #[arg(long, global = true, env = "ELLPSP_POINT_CAP")]
    cap: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one test on (E, N, P); one JSON verdict per line.
    Test {
        #[arg(long)]
        flavor: TestKind,
        /// A,B
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// CM discriminant, required by g and strong-g.
        #[arg(long)]
        d: Option<u64>,
        /// N or N=p^a*q^b
        #[arg(long, required_unless_present = "input")]
        n: Option<String>,
        /// x,y or x:y:z
        #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
        point: Option<String>,
        /// File of `N point` lines, run in order.
        #[arg(long, conflicts_with_all = ["n", "point"])]
        input: Option<PathBuf>,
    },
    /// Every composite N in [from, to] at which a rational point passes.
    Search {
        #[arg(long)]
        flavor: TestKind,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Rational x,y; fractions as a/b.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Root-pattern census of cubics over F_p.
    Census {
        #[arg(long, required = true, value_delimiter = ',')]
        p: Vec<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Count x^3 + ax + b instead of all monic cubics.
        #[arg(long)]
        short: bool,
    },
    /// Exhaustive checks of the bounds; nonzero exit on failure.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 8)]
        grid: u32,
        /// Bound on the odd parts t, w.
        #[arg(long, default_value_t = 9)]
        tw: u64,
        /// Modulus for the sweep-based checks.
        #[arg(long, default_value = "35")]
        n: String,
    },
    /// Random-curve experiments and exact censuses.
    Stats {
        /// Monte Carlo check against the closed-form bound.
        #[arg(long, required_unless_present = "exact")]
        bound_check: bool,
        /// Exact equal-ν2 probability by enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        n: String,
        /// The pair of primes the bound is evaluated at; defaults to the two smallest.
        #[arg(long, requires = "q")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        q: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, required_if_eq("bound_check", "true"))]
        seed: Option<u64>,
        /// Restrict to strongly non-zero points.
        #[arg(long)]
        snz: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    MaxH,
    MaxHPrime,
    /// Strong G point fractions over a sweep against 5/8 and 9/11 (1/p for p^2).
    StrongG,
    /// A strong G witness on every sweep curve.
    Witness,
    /// All points vs strongly non-zero points for the Carmichael-type checks.
    Carmichael,
    /// Monic cubic census against the closed form.
    Census,
}

enum Fail {
    Config(String),
    Cap(String),
    Assertion(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Fail::Cap(e.to_string()),
            Error::TheoremViolation(_) => Fail::Assertion(e.to_string()),
            _ => Fail::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Config(e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

fn curve_arg(s: &str, d: Option<u64>) -> Res<Curve> {
    let c = Curve::from_str(s)?;
    Ok(match d {
        Some(d) => c.with_cm(d),
        None => c,
    })
}

fn point_arg(s: &str) -> Res<(BigInt, BigInt, BigInt)> {
    let parts: Vec<&str> = if s.contains(':') {
        s.split(':').collect()
    } else {
        s.split(',').collect()
    };
    let ints = parts
        .iter()
        .map(|t| {
            BigInt::from_str(t.trim()).map_err(|_| Fail::Config(format!("bad coordinate {t:?}")))
        })
        .collect::<Res<Vec<_>>>()?;
    match ints.as_slice() {
        [x, y] => Ok((x.clone(), y.clone(), BigInt::from(1))),
        [x, y, z] => Ok((x.clone(), y.clone(), z.clone())),
        _ => Err(Fail::Config(format!("point must be x,y or x:y:z: {s:?}"))),
    }
}

fn need_cm(kind: TestKind, curve: &Curve) -> Res<()> {
    if kind.is_gordon() && curve.cm_disc().is_none() {
        return Err(Fail::Config("flavor g and strong-g need --d".into()));
    }
    Ok(())
}

fn verdict_json(
    v: &Verdict,
    n: &Factorization,
    curve: &Curve,
    point: (&BigInt, &BigInt, &BigInt),
) -> Value {
    let m = n.n();
    let (s, t) = match &v.decomposition {
        Some((s, t)) => (json!(s), json!(t.to_string())),
        None => (Value::Null, Value::Null),
    };
    json!({
        "test": v.test,
        "N": m.to_string(),
        "curve": {"A": curve.a().to_string(), "B": curve.b().to_string(), "d": curve.cm_disc()},
        "point": PointRecord {
            x: reduce(point.0, m).to_string(),
            y: reduce(point.1, m).to_string(),
            z: reduce(point.2, m).to_string(),
            n: m.to_string(),
        },
        "passed": v.passed,
        "reason": v.reason.to_string(),
        "target": v.target.as_ref().map(|t| t.to_string()),
        "s": s,
        "t": t,
        "trace": v.trace.iter().map(|st| json!({
            "r": st.r,
            "point": PointRecord::from(&st.point),
            "class": st.class.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn line(out: &mut dyn Write, v: &impl Serialize) -> Res<()> {
    let s = serde_json::to_string(v).map_err(|e| Fail::Config(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn cmd_test(
    out: &mut dyn Write,
    kind: TestKind,
    curve: &Curve,
    jobs: &[(String, String)],
) -> Res<()> {
    need_cm(kind, curve)?;
    for (n, pt) in jobs {
        let fac = Factorization::from_str(n)?;
        let (x, y, z) = point_arg(pt)?;
        let v = run_on_coords(kind, curve, &fac, &x, &y, &z)?;
        line(out, &verdict_json(&v, &fac, curve, (&x, &y, &z)))?;
    }
    Ok(())
}

fn read_jobs(path: &PathBuf) -> Res<Vec<(String, String)>> {
    let mut jobs = Vec::new();
    for l in BufReader::new(File::open(path)?).lines() {
        let l = l?;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (n, p) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| Fail::Config(format!("expected `N point`: {l:?}")))?;
        jobs.push((n.to_string(), p.trim().to_string()));
    }
    Ok(jobs)
}

fn cmd_search(
    out: &mut dyn Write,
    kind: TestKind,
    curve: &Curve,
    from: u64,
    to: u64,
    pt: &str,
) -> Res<()> {
    need_cm(kind, curve)?;
    let (x, y) = pt
        .split_once(',')
        .ok_or_else(|| Fail::Config(format!("point must be x,y: {pt:?}")))?;
    let (x, y) = (Ratio::from_str(x)?, Ratio::from_str(y)?);
    let rp = rational_point(curve, x.inner().clone(), y.inner().clone())?;
    let (px, py, pz) = projective_integers(&rp);
    for hit in search(kind, curve, &rp, from, to)? {
        line(
            out,
            &verdict_json(&hit.verdict, &hit.n, curve, (&px, &py, &pz)),
        )?;
    }
    Ok(())
}

fn cmd_census(out: &mut dyn Write, primes: &[u64], format: Format, short: bool) -> Res<()> {
    let recs: Vec<CensusRecord> = primes
        .iter()
        .map(|&p| {
            if short {
                short_form_census(p)
            } else {
                curve_census(p)
            }
        })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &recs {
                w.serialize(r).map_err(|e| Fail::Config(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &recs {
                let [a, b, c] = r.proportions();
                let mut v = json!(r);
                v["proportions"] = json!([a, b, c]);
                if !short {
                    v["predicted"] = json!(CensusRecord::predicted_proportions(r.p));
                }
                line(out, &v)?;
            }
        }
    }
    if !short {
        if let Some(r) = recs
            .iter()
            .find(|r| r.proportions() != CensusRecord::predicted_proportions(r.p))
        {
            return Err(Fail::Assertion(format!(
                "census at p = {} disagrees with the closed form",
                r.p
            )));
        }
    }
    Ok(())
}

fn group(curve: &Curve, n: &Factorization, cap: u64) -> Res<CurveGroup> {
    Ok(CurveGroup::new(curve, n)?.with_cap(cap))
}

fn cmd_verify(
    out: &mut dyn Write,
    theorem: Theorem,
    grid: u32,
    tw: u64,
    n: &str,
    cap: u64,
) -> Res<()> {
    let ok = match theorem {
        Theorem::MaxH => {
            let rep = verify_max_h(grid)?;
            line(out, &rep)?;
            rep.passed()
        }
        Theorem::MaxHPrime => {
            let rep = verify_max_h_prime(grid, tw)?;
            line(out, &rep)?;
            rep.passed()
        }
        Theorem::Census => {
            let primes: Vec<u64> = (5..=13)
                .filter(|&p| ellpsp::modarith::is_prime_u64(p))
                .collect();
            return cmd_census(out, &primes, Format::Json, false);
        }
        Theorem::StrongG => {
            let fac = Factorization::from_str(n)?;
            let prime_square = fac.factors().len() == 1 && fac.factors()[0].1 == 2;
            let (all_bound, snz_bound) = if prime_square {
                (Ratio::new(1, fac.factors()[0].0), None)
            } else {
                (Ratio::new(5, 8), Some(Ratio::new(9, 11)))
            };
            let mut worst = (Ratio::zero(), Ratio::zero());
            let mut bad = Vec::new();
            let curves = gordon_sweep(&fac)?;
            for e in &curves {
                let g = group(e, &fac, cap)?;
                let all = strong_g_point_fraction(&g, PointSet::All)?;
                let snz = match strong_g_point_fraction(&g, PointSet::StronglyNonZero) {
                    Ok(r) => Some(r),
                    Err(Error::NoStronglyNonZero { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
                if all > all_bound || matches!((&snz, &snz_bound), (Some(s), Some(b)) if s > b) {
                    bad.push(e.to_string());
                }
                worst.0 = worst.0.max(all);
                if let Some(s) = snz {
                    worst.1 = worst.1.max(s);
                }
            }
            line(
                out,
                &json!({
                    "theorem": "strong-g", "N": fac.to_string(), "curves": curves.len(),
                    "max_all": worst.0, "bound_all": all_bound,
                    "max_snz": worst.1, "bound_snz": snz_bound, "violations": bad,
                }),
            )?;
            bad.is_empty()
        }
        Theorem::Witness => {
            let fac = Factorization::from_str(n)?;
            let curves = gordon_sweep(&fac)?;
            let mut missing = Vec::new();
            let mut cases = std::collections::BTreeMap::<String, usize>::new();
            for e in &curves {
                let g = group(e, &fac, cap)?;
                match strong_g_witness(&g) {
                    Ok(w) => *cases.entry(format!("{:?}", w.case)).or_default() += 1,
                    Err(Error::CapExceeded { .. }) => {
                        return Err(Error::CapExceeded {
                            size: g.order().to_string(),
                            cap,
                        }
                        .into())
                    }
                    Err(_) => missing.push(e.to_string()),
                }
            }
            line(
                out,
                &json!({
                    "theorem": "witness", "N": fac.to_string(), "curves": curves.len(),
                    "cases": cases, "missing": missing,
                }),
            )?;
            missing.is_empty()
        }
        Theorem::Carmichael => {
            let fac = Factorization::from_str(n)?;
            let mut checked = 0;
            let mut skipped = 0;
            let mut bad = Vec::new();
            for e in good_reduction_curves(&fac)? {
                let g = group(&e, &fac, cap)?;
                if g.strong_points()?.is_empty() {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                for kind in [TestKind::StrongS, TestKind::S] {
                    let a = carmichael_test(&g, kind, PointSet::All)?;
                    let s = carmichael_test(&g, kind, PointSet::StronglyNonZero)?;
                    if a.kernel_holds != s.kernel_holds {
                        bad.push(format!("{kind} {e}"));
                    }
                }
            }
            line(
                out,
                &json!({
                    "theorem": "carmichael", "N": fac.to_string(), "checked": checked,
                    "skipped_without_strong_points": skipped, "mismatches": bad,
                }),
            )?;
            bad.is_empty()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Fail::Assertion("verification failed".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_stats(
    out: &mut dyn Write,
    bound_check: bool,
    n: &str,
    pq: Option<(u64, u64)>,
    samples: u64,
    seed: Option<u64>,
    snz: bool,
) -> Res<()> {
    let fac = Factorization::from_str(n)?;
    let set = if snz {
        PointSet::StronglyNonZero
    } else {
        PointSet::All
    };
    let (p, q) = match pq {
        Some(pq) => pq,
        None => {
            let ps: Vec<u64> = fac.primes().collect();
            if ps.len() < 2 {
                return Err(Fail::Config(format!("{fac} needs two distinct primes")));
            }
            (ps[0], ps[1])
        }
    };
    if bound_check {
        let seed = seed.ok_or_else(|| Fail::Config("--bound-check needs --seed".into()))?;
        let rec = random_curve_bound_check(&fac, p, q, samples, seed, set)?;
        line(out, &rec)?;
        if !rec.within_bound {
            return Err(Fail::Assertion(format!(
                "observed {} above bound {}",
                rec.observed, rec.bound
            )));
        }
    } else {
        let exact = equal_nu2_census(&fac, set)?;
        let bound = if snz {
            overall_curves_bound_snz(p, q)
        } else {
            overall_curves_bound(p, q)
        };
        let within = exact <= bound;
        line(
            out,
            &json!({
                "N": fac.to_string(), "p": p, "q": q, "points": set,
                "exact": exact, "bound": bound, "within_bound": within,
            }),
        )?;
        if !within {
            return Err(Fail::Assertion(format!(
                "exact value {exact} above bound {bound}"
            )));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let cap = cli.cap.unwrap_or(DEFAULT_POINT_CAP);
    let res = match cli.cmd {
        Cmd::Test {
            flavor,
            curve,
            d,
            n,
            point,
            input,
        } => {
            let jobs = match input {
                Some(path) => read_jobs(&path)?,
                None => vec![(n.unwrap_or_default(), point.unwrap_or_default())],
            };
            cmd_test(&mut out, flavor, &curve_arg(&curve, d)?, &jobs)
        }
        Cmd::Search {
            flavor,
            curve,
            d,
            from,
            to,
            point,
        } => cmd_search(&mut out, flavor, &curve_arg(&curve, d)?, from, to, &point),
        Cmd::Census { p, format, short } => cmd_census(&mut out, &p, format, short),
        Cmd::Verify {
            theorem,
            grid,
            tw,
            n,
        } => cmd_verify(&mut out, theorem, grid, tw, &n, cap),
        Cmd::Stats {
            bound_check,
            exact: _,
            n,
            p,
            q,
            samples,
            seed,
            snz,
        } => cmd_stats(&mut out, bound_check, &n, p.zip(q), samples, seed, snz),
    };
    out.flush()?;
    res
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Assertion(m)) => {
            eprintln!("ellpsp: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Config(m)) => {
            eprintln!("ellpsp: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Cap(m)) => {
            eprintln!("ellpsp: {m}");
            ExitCode::from(3)
        }
    }
}
