//! Elliptic pseudoprime tests: Gordon's test (G) and Silverman's test (S),
//! each in a weak and a strong form, plus Carmichael-type checks over
//! whole groups and the supporting witness and certificate machinery.

mod carmichael;
mod gk;
mod search;
mod sweep;
mod witness;

pub use carmichael::{
    carmichael_test, epsilon, strong_s_snz_characterization, CarmichaelReport, Epsilon, PointSet,
    SnzCharacterization,
};
pub use gk::{gk_certificate_check, gk_size_ok, GkReport};
pub use search::{search, SearchHit};
pub use sweep::{good_reduction_curves, gordon_sweep};
pub use witness::{strong_g_witness, Witness, WitnessCase};

use crate::curve::{Curve, CurveGroup, PointClass, ProjPoint};
use crate::error::{Error, Result};
use crate::lseries::LCoeffContext;
use crate::modarith::{jacobi, Factorization};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    #[serde(rename = "g")]
    G,
    #[serde(rename = "strong-g")]
    StrongG,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "strong-s")]
    StrongS,
}

impl TestKind {
    pub fn is_strong(self) -> bool {
        matches!(self, TestKind::StrongG | TestKind::StrongS)
    }

    pub fn is_gordon(self) -> bool {
        matches!(self, TestKind::G | TestKind::StrongG)
    }

    pub fn weak(self) -> TestKind {
        match self {
            TestKind::G | TestKind::StrongG => TestKind::G,
            TestKind::S | TestKind::StrongS => TestKind::S,
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::G => "g",
            TestKind::StrongG => "strong-g",
            TestKind::S => "s",
            TestKind::StrongS => "strong-s",
        })
    }
}

impl FromStr for TestKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(TestKind::G),
            "strong-g" => Ok(TestKind::StrongG),
            "s" => Ok(TestKind::S),
            "strong-s" => Ok(TestKind::StrongS),
            _ => Err(Error::Parse(format!("unknown test flavor {s:?}"))),
        }
    }
}

/// Why a test passed or failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    /// The target (or its odd part t) kills the point.
    OrderKills,
    /// (2^r t)P is a strongly non-zero point of order 2.
    TwoTorsionHit(u32),
    /// The point survives every clause.
    Fails,
    NotComposite,
    /// S tests need at least two distinct primes.
    SingleDistinctPrime,
    JacobiNotMinusOne,
    /// gcd(N, 6 disc) != 1.
    SharesFactorWithSixDelta,
    BadReduction(u64),
    /// N + 1 - a_N <= 0, so the strong decomposition is undefined.
    TargetNonPositive,
}

impl Reason {
    pub fn is_gate(self) -> bool {
        !matches!(
            self,
            Reason::OrderKills | Reason::TwoTorsionHit(_) | Reason::Fails
        )
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::TwoTorsionHit(r) => write!(f, "TwoTorsionHit({r})"),
            Reason::BadReduction(p) => write!(f, "BadReduction({p})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub r: u32,
    pub point: ProjPoint,
    pub class: PointClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub test: TestKind,
    pub passed: bool,
    pub reason: Reason,
    /// The scalar the test is run against: N+1 or N+1-a_N.
    pub target: Option<BigInt>,
    /// (s, t) with target = 2^s t, t odd; strong tests only.
    pub decomposition: Option<(u32, BigUint)>,
    /// (2^r t)P for r = 0, 1, ...; strong tests only.
    pub trace: Vec<TraceStep>,
}

impl Verdict {
    fn gate(test: TestKind, reason: Reason) -> Self {
        Verdict {
            test,
            passed: false,
            reason,
            target: None,
            decomposition: None,
            trace: Vec::new(),
        }
    }
}

/// Check the conditions on (E, N) that a test imposes before any point is
/// looked at. `Ok(None)` means all gates pass.
pub fn gate(kind: TestKind, curve: &Curve, n: &Factorization) -> Result<Option<Reason>> {
    if kind.is_gordon() {
        let d = curve.cm_disc().ok_or(Error::MissingCmData)?;
        if !n.is_composite() {
            return Ok(Some(Reason::NotComposite));
        }
        let six_delta = BigInt::from(6) * curve.discriminant();
        if !BigInt::from(n.n().clone()).gcd(&six_delta).is_one() {
            return Ok(Some(Reason::SharesFactorWithSixDelta));
        }
        if jacobi(&-BigInt::from(d), n.n())? != -1 {
            return Ok(Some(Reason::JacobiNotMinusOne));
        }
    } else {
        if !n.is_composite() {
            return Ok(Some(Reason::NotComposite));
        }
        if n.distinct_primes() < 2 {
            return Ok(Some(Reason::SingleDistinctPrime));
        }
        if let Some(p) = n.primes().find(|&p| !curve.good_reduction_at(p)) {
            return Ok(Some(Reason::BadReduction(p)));
        }
    }
    Ok(None)
}

/// N + 1 for G tests, N + 1 - a_N for S tests.
pub fn target(kind: TestKind, curve: &Curve, n: &Factorization) -> Result<BigInt> {
    let np1 = BigInt::from(n.n().clone()) + 1;
    if kind.is_gordon() {
        Ok(np1)
    } else {
        Ok(np1 - LCoeffContext::new(curve).a_n(n)?)
    }
}

/// Whether target * P is the identity. A negative target acts like its
/// absolute value and zero kills everything.
pub fn weak_kernel(g: &CurveGroup, target: &BigInt, p: &ProjPoint) -> bool {
    g.mul_int(target, p).is_identity()
}

/// Strong clauses against `target` = 2^s t: tP = O, or (2^r t)P is a
/// strongly non-zero point (x : 0 : 1) for some r < s.
pub fn strong_kernel(
    g: &CurveGroup,
    target: &BigUint,
    p: &ProjPoint,
) -> (bool, Reason, (u32, BigUint), Vec<TraceStep>) {
    debug_assert!(!target.is_zero());
    let s = target.trailing_zeros().unwrap_or(0) as u32;
    let t = target >> s;
    let mut q = g.mul(&t, p);
    let mut trace = vec![TraceStep {
        r: 0,
        class: q.class(),
        point: q.clone(),
    }];
    if q.is_identity() {
        return (true, Reason::OrderKills, (s, t), trace);
    }
    for r in 0..s {
        if q.is_strong_two_torsion() {
            return (true, Reason::TwoTorsionHit(r), (s, t), trace);
        }
        if r + 1 < s {
            q = g.double(&q);
            trace.push(TraceStep {
                r: r + 1,
                class: q.class(),
                point: q.clone(),
            });
        }
    }
    (false, Reason::Fails, (s, t), trace)
}

/// Run a test on a point of a group, gates included.
pub fn run(kind: TestKind, g: &CurveGroup, p: &ProjPoint) -> Result<Verdict> {
    if let Some(reason) = gate(kind, g.curve(), g.factorization())? {
        return Ok(Verdict::gate(kind, reason));
    }
    run_kernel(kind, g, &target(kind, g.curve(), g.factorization())?, p)
}

/// The test without its gates, against a precomputed target.
pub fn run_kernel(kind: TestKind, g: &CurveGroup, tgt: &BigInt, p: &ProjPoint) -> Result<Verdict> {
    if !kind.is_strong() {
        let passed = weak_kernel(g, tgt, p);
        return Ok(Verdict {
            test: kind,
            passed,
            reason: if passed {
                Reason::OrderKills
            } else {
                Reason::Fails
            },
            target: Some(tgt.clone()),
            decomposition: None,
            trace: Vec::new(),
        });
    }
    if !tgt.is_positive() {
        let mut v = Verdict::gate(kind, Reason::TargetNonPositive);
        v.target = Some(tgt.clone());
        return Ok(v);
    }
    let (passed, reason, dec, trace) = strong_kernel(g, tgt.magnitude(), p);
    Ok(Verdict {
        test: kind,
        passed,
        reason,
        target: Some(tgt.clone()),
        decomposition: Some(dec),
        trace,
    })
}

pub fn gpsp_test(g: &CurveGroup, p: &ProjPoint) -> Result<Verdict> {
    run(TestKind::G, g, p)
}

pub fn strong_gpsp_test(g: &CurveGroup, p: &ProjPoint) -> Result<Verdict> {
    run(TestKind::StrongG, g, p)
}

pub fn spsp_test(g: &CurveGroup, p: &ProjPoint) -> Result<Verdict> {
    run(TestKind::S, g, p)
}

pub fn strong_spsp_test(g: &CurveGroup, p: &ProjPoint) -> Result<Verdict> {
    run(TestKind::StrongS, g, p)
}

/// Run a test from raw inputs. Gate failures that prevent building the
/// group (bad reduction, factors shared with 6 disc) are reported as
/// verdicts rather than errors.
pub fn run_on_coords(
    kind: TestKind,
    curve: &Curve,
    n: &Factorization,
    x: &BigInt,
    y: &BigInt,
    z: &BigInt,
) -> Result<Verdict> {
    if let Some(reason) = gate(kind, curve, n)? {
        return Ok(Verdict::gate(kind, reason));
    }
    let g = CurveGroup::new(curve, n)?;
    let p = g.point(x, y, z)?;
    run_kernel(kind, &g, &target(kind, curve, n)?, &p)
}
