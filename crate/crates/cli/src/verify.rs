//! Identity suites behind `equipop verify`.

use clap::ValueEnum;
use equipop::dectree::wedge;
use equipop::partition::partitions_of;
use equipop::popularity::{
    enumerate_separable, popularity_series, schroder_count, verify_classification,
};
use equipop::series::{
    bivariate_p_brute, bivariate_p_closed, bivariate_p_system, factorization_check, gegenbauer,
    gegenbauer_generating_function, identify_partition, increasing_popularity_formula,
    q_gegenbauer_relation, q_polynomial, q_via_hypergeometric, schroder_series,
    schroder_series_minus_radicand, wedge_popularity,
};
use equipop::{Permutation, SeriesError};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Schroder,
    Bivariate,
    Qgegenbauer,
    Factorization,
    Wedge,
    Classification,
    All,
}

pub struct Check {
    pub suite: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(suite: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        suite,
        pass,
        detail: detail.into(),
    }
}

fn failed(suite: &'static str, what: &str, e: impl std::fmt::Display) -> Check {
    check(suite, false, format!("{what}: {e}"))
}

pub fn run(suite: Suite, order: usize) -> Vec<Check> {
    match suite {
        Suite::Schroder => schroder(order),
        Suite::Bivariate => bivariate(order),
        Suite::Qgegenbauer => qgegenbauer(),
        Suite::Factorization => factorization(order),
        Suite::Wedge => wedges(order),
        Suite::Classification => classification(order),
        Suite::All => [
            Suite::Schroder,
            Suite::Bivariate,
            Suite::Qgegenbauer,
            Suite::Factorization,
            Suite::Wedge,
            Suite::Classification,
        ]
        .into_iter()
        .flat_map(|s| run(s, order))
        .collect(),
    }
}

fn rat(n: num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn schroder(order: usize) -> Vec<Check> {
    const S: &str = "schroder";
    let series = schroder_series(order);
    let series_ok = (0..=order).all(|n| series.coeff(n) == rat(schroder_count(n)));
    let top = order.clamp(1, 10);
    let enum_ok = (1..=top)
        .all(|n| num_bigint::BigUint::from(enumerate_separable(n).count()) == schroder_count(n));
    let bad = schroder_series_minus_radicand(order.max(2)).coeff(2);
    vec![
        check(
            S,
            series_ok,
            format!("closed-form series equals s_n for n <= {order}"),
        ),
        check(
            S,
            enum_ok,
            format!("enumeration count equals s_n for 1 <= n <= {top}"),
        ),
        check(
            S,
            !bad.is_integer(),
            format!("radicand 1 - 6t - t^2 rejected: coefficient of t^2 is {bad}"),
        ),
    ]
}

fn bivariate(order: usize) -> Vec<Check> {
    const S: &str = "bivariate";
    let u = order.min(4);
    let (brute, system, closed) = match (
        bivariate_p_brute(u, order),
        bivariate_p_system(u, order),
        bivariate_p_closed(u, order),
    ) {
        (Ok(b), Ok(s), Ok(c)) => (b, s, c),
        (b, s, c) => {
            let e = b.err().or(s.err()).or(c.err()).unwrap();
            return vec![failed(S, "evaluation", e)];
        }
    };
    vec![
        check(
            S,
            brute == system,
            format!("census equals equation system, u^0..u^{u}, t^0..t^{order}"),
        ),
        check(
            S,
            system == closed,
            format!("equation system equals closed form, u^0..u^{u}, t^0..t^{order}"),
        ),
    ]
}

fn qgegenbauer() -> Vec<Check> {
    const S: &str = "qgegenbauer";
    let hyper = (1..=20).all(|n| q_via_hypergeometric(n).is_ok_and(|h| h == q_polynomial(n)));
    let reports: Result<Vec<_>, SeriesError> = (1..=30).map(q_gegenbauer_relation).collect();
    let mut out = vec![check(
        S,
        hyper,
        "hypergeometric form equals q_n for 1 <= n <= 20",
    )];
    match reports {
        Ok(reports) => {
            out.push(check(
                S,
                reports.iter().all(|r| r.corrected_holds()),
                "argument 1/(1-2x): identity holds for 1 <= n <= 30",
            ));
            let r2 = &reports[1];
            out.push(check(
                S,
                !r2.printed_holds(),
                format!(
                    "argument x/(1-2x) fails at n = 2: gives {} but q_2 = {}",
                    r2.printed, r2.q
                ),
            ));
        }
        Err(e) => out.push(failed(S, "relation", e)),
    }
    let alpha = BigRational::new(3.into(), 2.into());
    let gf = gegenbauer_generating_function(&alpha, &BigRational::from_integer(2.into()), 8);
    let gf_ok = (0..=8u64).all(|n| {
        let c = gegenbauer(n, &alpha);
        (0..=8).all(|i| gf.coeff(i as usize, n as usize) == c.coeff(i))
    });
    out.push(check(
        S,
        gf_ok,
        "(1 - 2xt + t^2)^(-3/2) matches the recurrence to t^8",
    ));
    out
}

fn factorization(order: usize) -> Vec<Check> {
    const S: &str = "factorization";
    let mut out = Vec::new();
    for pi in ["1", "21", "312", "321"] {
        let pi: Permutation = pi.parse().unwrap();
        for m in 0..=3 {
            let c = match factorization_check(m, &pi, order) {
                Ok(r) => {
                    let skew = match r.skew_identity {
                        None => String::new(),
                        Some(b) => format!(", skew part = (S^2-1)·sum part: {b}"),
                    };
                    check(
                        S,
                        r.pass(),
                        format!(
                            "m = {m}, pi = {}: P = F_m·P_pi: {}{skew}",
                            pi.to_short_string(),
                            r.product_holds()
                        ),
                    )
                }
                Err(e) => failed(S, &format!("m = {m}, pi = {}", pi.to_short_string()), e),
            };
            out.push(c);
        }
    }
    out
}

fn wedges(order: usize) -> Vec<Check> {
    const S: &str = "wedge";
    let mut out = Vec::new();
    for n in 1..=5.min(order) {
        let c = match (
            increasing_popularity_formula(n, order),
            popularity_series(&Permutation::identity(n), order),
        ) {
            (Ok(f), Ok(c)) => check(
                S,
                f == c,
                format!("formula for I({n}) equals census to t^{order}"),
            ),
            (Err(e), _) => failed(S, &format!("I({n})"), e),
            (_, Err(e)) => failed(S, &format!("I({n})"), e),
        };
        out.push(c);
    }
    for w in 1..=4 {
        if w + 1 > order {
            break;
        }
        for lambda in partitions_of(w) {
            let omega = wedge(&lambda).unwrap().1;
            let c = match (
                wedge_popularity(&lambda, order),
                popularity_series(&omega, order),
            ) {
                (Ok(f), Ok(c)) => check(
                    S,
                    f == c,
                    format!(
                        "product for ({lambda}) equals census of {} to t^{order}",
                        omega.to_short_string()
                    ),
                ),
                (Err(e), _) => failed(S, &format!("({lambda})"), e),
                (_, Err(e)) => failed(S, &format!("({lambda})"), e),
            };
            out.push(c);
        }
    }
    for w in 1..=5 {
        let horizon = w + 5;
        let ok = partitions_of(w).into_iter().all(|lambda| {
            wedge_popularity(&lambda, horizon)
                .and_then(|s| identify_partition(&s, w + 1, horizon))
                .is_ok_and(|found| found == lambda)
        });
        out.push(check(
            S,
            ok,
            format!("identify_partition inverts the product for weight {w} at t^{horizon}"),
        ));
    }
    out
}

fn classification(order: usize) -> Vec<Check> {
    const S: &str = "classification";
    (3..=5)
        .map(|k| {
            let horizon = order.max(k + 4);
            match verify_classification(k, horizon) {
                Ok(c) => check(
                    S,
                    c.pass(),
                    format!(
                        "k = {k}, N = {horizon}: {} classes (expected {}), match signatures: {}, wedge representatives: {}",
                        c.report.classes.len(),
                        c.expected_classes,
                        c.coincide,
                        c.wedge_representatives_ok
                    ),
                ),
                Err(e) => failed(S, &format!("k = {k}"), e),
            }
        })
        .collect()
}
