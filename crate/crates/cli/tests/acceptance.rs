//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact; the only
//! tolerances are the wall-clock limits below.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use twisted_ore::algebra::{check_associativity, truncated_poly_algebra};
use twisted_ore::family::{
    build_example_resolution, closed_delta_chain, closed_tau_chain, family_algebra, family_operators,
    family_twisted_algebra, solver_delta_chain, tau_closed_form, verify_closed_inverses, Example4Params,
};
use twisted_ore::field::{binomial, FieldSpec};
use twisted_ore::homology::{standard_resolution_over, verify_lift, Equivariance, FreeComplex};
use twisted_ore::matrix::Matrix;
use twisted_ore::operator::{verify_automorphism, verify_sigma_derivation, LinearOperator};
use twisted_ore::pipeline::resolve_ground_field;
use twisted_ore::shuffle::{shuffle_by_words, verify_truncation_conditions, words, ShuffleIndex, ShuffleTable};
use twisted_ore::twist::{build_tau, twisted_algebra, verify_twisting_axioms, TwistedAlgebra};
use twisted_ore_cli::complex_file::ComplexFile;

const GATE_LIMIT: Duration = Duration::from_secs(5);
const ASSOC_LIMIT: Duration = Duration::from_secs(10);
const RESOLUTION_LIMIT: Duration = Duration::from_secs(60);
const SHUFFLE_CASES: u32 = 200;
const SHUFFLE_MAX_TOTAL: usize = 6;

fn instances() -> Vec<Example4Params> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        for t in 2..p as usize {
            for alpha in 1..p as i64 {
                out.push(Example4Params::from_i64(p, t, alpha).unwrap());
            }
        }
    }
    out
}

fn twisted(params: &Example4Params) -> Result<Arc<TwistedAlgebra>> {
    let a = family_algebra(params)?;
    let (sigma, delta) = family_operators(params, &a)?;
    let tau = build_tau(a, &sigma, &delta, params.n())?;
    Ok(Arc::new(twisted_algebra(Arc::new(tau))?))
}

fn gate(instances: &[Example4Params]) -> Result<String> {
    let mut worst = Duration::ZERO;
    for params in instances {
        let start = Instant::now();
        let a = family_algebra(params)?;
        let (sigma, delta) = family_operators(params, &a)?;
        let r = verify_truncation_conditions(&sigma, &delta, params.n())?;
        ensure!(r.passed, "{params}: {r}");
        let tau = build_tau(a, &sigma, &delta, params.n())?;
        let r = verify_twisting_axioms(&tau);
        ensure!(r.passed, "{params}: {r}");
        let elapsed = start.elapsed();
        ensure!(elapsed < GATE_LIMIT, "{params}: {elapsed:.2?} exceeds {GATE_LIMIT:?}");
        worst = worst.max(elapsed);
    }
    Ok(format!("{} instances, slowest {worst:.2?} (limit {GATE_LIMIT:?})", instances.len()))
}

fn associativity(instances: &[Example4Params]) -> Result<String> {
    let mut worst = Duration::ZERO;
    let mut triples = 0;
    for params in instances {
        let tw = twisted(params)?;
        let start = Instant::now();
        let r = check_associativity(tw.algebra());
        let elapsed = start.elapsed();
        ensure!(r.passed, "{params}: {r}");
        ensure!(elapsed < ASSOC_LIMIT, "{params}: {elapsed:.2?} exceeds {ASSOC_LIMIT:?}");
        worst = worst.max(elapsed);
        triples += tw.algebra().dim().pow(3);
    }
    Ok(format!("{triples} basis triples, slowest instance {worst:.2?} (limit {ASSOC_LIMIT:?})"))
}

/// Normal form of `y^r x^s` under `y x -> x y + α x^t` and `x^p = 0`,
/// one rewrite step at a time over plain integers mod p.
fn rewrite(p: u64, t: usize, alpha: u64, r: usize, s: usize) -> HashMap<(usize, usize), u64> {
    let mut pending: HashMap<Vec<u8>, u64> = HashMap::new();
    pending.insert([vec![b'y'; r], vec![b'x'; s]].concat(), 1);
    let mut normal: HashMap<(usize, usize), u64> = HashMap::new();
    while let Some(word) = pending.keys().next().cloned() {
        let c = pending.remove(&word).unwrap();
        if c == 0 {
            continue;
        }
        match word.windows(2).position(|w| w == b"yx") {
            Some(k) => {
                let mut swapped = word.clone();
                swapped.swap(k, k + 1);
                let lowered = [&word[..k], &vec![b'x'; t][..], &word[k + 2..]].concat();
                for (w, coeff) in [(swapped, c), (lowered, c * alpha % p)] {
                    let e = pending.entry(w).or_insert(0);
                    *e = (*e + coeff) % p;
                }
            }
            None => {
                let a = word.iter().filter(|&&l| l == b'x').count();
                if a < p as usize {
                    let e = normal.entry((a, word.len() - a)).or_insert(0);
                    *e = (*e + c) % p;
                }
            }
        }
    }
    normal
}

fn closed_form_oracle(instances: &[Example4Params]) -> Result<String> {
    let mut pairs = 0;
    for params in instances {
        let (p, n, f) = (params.p(), params.n(), params.field());
        let alpha = params.alpha().to_string().parse::<u64>().context("alpha")?;
        for r in 0..n {
            for s in 0..n {
                let oracle = rewrite(p, params.t(), alpha, r, s);
                let closed = tau_closed_form(r, s, params);
                for a in 0..n {
                    for b in 0..n {
                        let expected = f.from_i64(oracle.get(&(a, b)).copied().unwrap_or(0) as i64);
                        ensure!(closed[a * n + b] == expected, "{params}: (r,s)=({r},{s}) at x^{a} y^{b}");
                    }
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs (r,s) equal to the rewriting oracle"))
}

fn inverses(instances: &[Example4Params]) -> Result<String> {
    for params in instances {
        let r = verify_closed_inverses(params);
        ensure!(r.passed, "{params}: {r}");
    }
    Ok(format!("{} instances, both parities, both sides", instances.len()))
}

fn compatibility_chain(instances: &[Example4Params]) -> Result<String> {
    const LENGTH: usize = 4;
    for params in instances {
        let tw = family_twisted_algebra(params)?;
        let pa = standard_resolution_over(tw.a().clone(), LENGTH)?;
        let (m, chain) = closed_tau_chain(params, &tw, &pa).with_context(|| params.to_string())?;
        ensure!(m.matrix().is_identity(), "{params}: module compatibility map is not the flip");
        ensure!(chain.certificate().passed, "{params}: {}", chain.certificate());
        ensure!(chain.top() == LENGTH, "{params}: chain stops at degree {}", chain.top());
    }
    Ok(format!("{} instances through degree {LENGTH}: both relations and every square", instances.len()))
}

fn delta_lifts(instances: &[Example4Params]) -> Result<String> {
    const LENGTH: usize = 6;
    for params in instances {
        let f = params.field();
        let a = family_algebra(params)?;
        let (sigma, delta) = family_operators(params, &a)?;
        let pa = standard_resolution_over(a, LENGTH)?;
        let eq = Equivariance::Skew {
            sigma: sigma.matrix().clone(),
            delta: delta.matrix().clone(),
        };
        let base = Matrix::zeros(f, 1, 1);
        let solved = solver_delta_chain(params, &pa)?;
        ensure!(solved.top() == LENGTH, "{params}: solver stops at degree {}", solved.top());
        let r = verify_lift(&pa, &pa, &base, &eq, solved.maps());
        ensure!(r.passed, "{params}: solver output fails: {r}");
        let closed = closed_delta_chain(params, &pa)?;
        let r = verify_lift(&pa, &pa, &base, &eq, closed.maps());
        ensure!(r.passed, "{params}: closed-form chain fails: {r}");
    }
    Ok(format!(
        "{} instances through degree {LENGTH}: solver and closed-form chains pass the same contracts",
        instances.len()
    ))
}

fn rank_identities(c: &FreeComplex, top: usize, block: usize) -> Result<()> {
    for n in 0..=top {
        ensure!(c.k_dim(n) == (n + 1) * block, "dim of degree {n} is {}", c.k_dim(n));
    }
    let ranks: Vec<usize> = (1..=top).map(|k| c.expanded(k).rank()).collect();
    ensure!(ranks[0] == block - 1, "rank d_1 = {}", ranks[0]);
    for n in 1..top {
        ensure!(ranks[n - 1] + ranks[n] == (n + 1) * block, "rank identity fails at degree {n}");
    }
    Ok(())
}

fn resolutions() -> Result<String> {
    let start = Instant::now();
    let mut done = Vec::new();
    for (p, top) in [(3u64, 6usize), (5, 4)] {
        for t in 2..p as usize {
            let params = Example4Params::from_i64(p, t, 1)?;
            let r = build_example_resolution(&params, top)?;
            ensure!(r.passed(), "{params}: {}", r.report);
            let cert = r.product.certificate();
            for check in ["d-squared", "generator-equivariance"] {
                let child = cert.children.iter().find(|c| c.check == check).context(check)?;
                ensure!(child.passed, "{params}: {child}");
            }
            rank_identities(r.complex(), top, (p * p) as usize).with_context(|| params.to_string())?;
            done.push(format!("p={p} t={t}"));
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < RESOLUTION_LIMIT, "total {elapsed:.2?} exceeds {RESOLUTION_LIMIT:?}");
    Ok(format!("{}; total {elapsed:.2?} (limit {RESOLUTION_LIMIT:?})", done.join(", ")))
}

/// `d_k` of the total complex of two copies of the periodic resolution of
/// k over `k[x]/(x^p)`, built directly from shift matrices.
fn ordinary_tensor_differential(f: FieldSpec, p: usize, k: usize) -> Matrix {
    let shift = |e: usize| {
        let mut m = Matrix::zeros(f, p, p);
        for c in 0..p.saturating_sub(e) {
            m.set(c + e, c, f.one());
        }
        m
    };
    let exponent = |i: usize| if i % 2 == 1 { 1 } else { p - 1 };
    let (block, id) = (p * p, Matrix::identity(f, p));
    let mut d = Matrix::zeros(f, k * block, (k + 1) * block);
    // summand (i, k - i) sits at position k - i
    for i in 0..=k {
        let j = k - i;
        if i >= 1 {
            d.set_block((k - i) * block, (k - i) * block, &shift(exponent(i)).kron(&id));
        }
        if j >= 1 {
            let v = id.kron(&shift(exponent(j)));
            let v = if i % 2 == 1 { v.neg() } else { v };
            d.set_block((k - 1 - i) * block, (k - i) * block, &v);
        }
    }
    d
}

fn untwisted() -> Result<String> {
    for (p, top) in [(3u64, 6usize), (5, 4)] {
        let f = FieldSpec::new(p)?;
        let n = p as usize;
        let a = Arc::new(truncated_poly_algebra(f, n)?);
        let id = verify_automorphism(&a, &LinearOperator::identity(f, n))?.value.context("sigma")?;
        let zero = verify_sigma_derivation(&a, &id, &LinearOperator::zero(f, n))?.value.context("delta")?;
        let tau = build_tau(a, &id, &zero, n)?;
        let tw = Arc::new(twisted_algebra(Arc::new(tau))?);
        for (k, i, l, s) in basis_quadruples(n) {
            let got = tw.algebra().product(tw.index(k, i), tw.index(l, s));
            let expected: Vec<_> = if k + l < n && i + s < n {
                vec![(tw.index(k + l, i + s), f.one())]
            } else {
                Vec::new()
            };
            ensure!(got == &expected, "p={p}: product of x^{k}y^{i} and x^{l}y^{s}");
        }
        let r = resolve_ground_field(&tw, top)?;
        ensure!(r.passed(), "p={p}: {}", r.report);
        for k in 1..=top {
            if let Some((row, col)) = r.product.tensor_differential(k).first_difference(&ordinary_tensor_differential(f, n, k)) {
                bail!("p={p}: d_{k} differs from the ordinary tensor product at ({row},{col})");
            }
        }
        rank_identities(r.complex(), top, n * n).with_context(|| format!("p={p}"))?;
    }
    Ok("p=3 through 6, p=5 through 4: algebra and differentials equal the ordinary tensor product".into())
}

fn basis_quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n.pow(4)).map(move |c| (c / n.pow(3), c / n.pow(2) % n, c / n % n, c % n))
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::new(2).unwrap()),
        Just(FieldSpec::new(3).unwrap()),
        Just(FieldSpec::new(5).unwrap()),
        Just(FieldSpec::new(7).unwrap()),
        Just(FieldSpec::rationals()),
    ]
}

fn random_matrix(field: FieldSpec, n: usize, entries: &[(i64, i64)]) -> Matrix {
    let rows = entries
        .chunks(n)
        .map(|row| {
            row.iter()
                .map(|&(num, den)| {
                    if field.is_rational() {
                        field.parse(&format!("{num}/{den}")).unwrap()
                    } else {
                        field.from_i64(num)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows).unwrap()
}

fn check_shuffles(f: &Matrix, g: &Matrix) -> std::result::Result<(), TestCaseError> {
    let (fo, go) = (LinearOperator::new(f.clone()), LinearOperator::new(g.clone()));
    let table = ShuffleTable::from_matrices(f, g, SHUFFLE_MAX_TOTAL);
    let by_words = |i: usize, j: usize| shuffle_by_words(i, j, &fo, &go).unwrap().into_matrix();
    let zero = Matrix::zeros(f.field(), f.rows(), f.cols());
    for total in 0..=SHUFFLE_MAX_TOTAL {
        for i in 0..=total {
            let j = total - i;
            let s = by_words(i, j);
            prop_assert_eq!(table.get(i, j), &s);
            if total >= 1 {
                let left = (if i > 0 { f.mul(&by_words(i - 1, j)) } else { zero.clone() })
                    .add(&if j > 0 { g.mul(&by_words(i, j - 1)) } else { zero.clone() });
                let right = (if i > 0 { by_words(i - 1, j).mul(f) } else { zero.clone() })
                    .add(&if j > 0 { by_words(i, j - 1).mul(g) } else { zero.clone() });
                prop_assert_eq!(&s, &left, "left recursion at ({}, {})", i, j);
                prop_assert_eq!(&s, &right, "right recursion at ({}, {})", i, j);
            }
            let count = binomial(total as u64, i as u64).to_u64().unwrap();
            prop_assert_eq!(words(i, j).len() as u64, count);
            prop_assert_eq!(ShuffleIndex { i, j }.term_count(), count);
            let same = shuffle_by_words(i, j, &fo, &fo).unwrap().into_matrix();
            prop_assert_eq!(same, f.pow(total).scale(&f.field().from_i64(count as i64)));
        }
    }
    Ok(())
}

fn shuffles() -> Result<String> {
    let strategy = (field_strategy(), 1usize..4).prop_flat_map(|(field, n)| {
        (
            Just(field),
            Just(n),
            prop::collection::vec((-4i64..5, 1i64..4), n * n),
            prop::collection::vec((-4i64..5, 1i64..4), n * n),
        )
    });
    let mut runner = TestRunner::new(Config {
        cases: SHUFFLE_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |(field, n, f, g)| {
            check_shuffles(&random_matrix(field, n, &f), &random_matrix(field, n, &g))
        })
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(format!("{SHUFFLE_CASES} random pairs over F_2, F_3, F_5, F_7 and Q, all i + j <= {SHUFFLE_MAX_TOTAL}"))
}

fn round_trip() -> Result<String> {
    let dir = tempfile::tempdir()?;
    let spec = dir.path().join("ore.json");
    std::fs::write(
        &spec,
        r#"{"field": {"char": 5}, "A": {"type": "truncated_poly", "n": 5}, "B": {"type": "truncated_poly", "n": 5},
            "sigma": {"type": "identity"}, "delta": {"type": "monomial", "alpha": "1", "t": 2}}"#,
    )?;
    let out = dir.path().join("resolution.json");
    let bin = env!("CARGO_BIN_EXE_twisted-ore");
    let status = Command::new(bin)
        .args(["resolve", spec.to_str().unwrap(), "--degree", "4", "--out", out.to_str().unwrap()])
        .output()?;
    ensure!(status.status.code() == Some(0), "resolve exited {:?}", status.status.code());
    let check = Command::new(bin).args(["check", out.to_str().unwrap(), "--json"]).output()?;
    ensure!(check.status.code() == Some(0), "check exited {:?}", check.status.code());
    let stdout = String::from_utf8(check.stdout)?;
    ensure!(stdout.contains("canonical encoding: true"), "check did not confirm the canonical encoding");
    let bytes = std::fs::read_to_string(&out)?;
    let reencoded = ComplexFile::parse(&bytes)?.to_canonical_string();
    ensure!(reencoded == bytes, "re-encoding differs from the written file");
    Ok(format!("p=5 t=2 through degree 4: {} bytes re-encoded identically, check exit 0", bytes.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Result<String> + 'a>);

fn main() -> ExitCode {
    let all = instances();
    let criteria: Vec<Criterion> = vec![
        ("twisting-map gate", Box::new(|| gate(&all))),
        ("associativity", Box::new(|| associativity(&all))),
        ("closed form vs rewriting oracle", Box::new(|| closed_form_oracle(&all))),
        ("closed-form inverses", Box::new(|| inverses(&all))),
        ("compatibility relations and squares", Box::new(|| compatibility_chain(&all))),
        ("delta lift contracts", Box::new(|| delta_lifts(&all))),
        ("resolution", Box::new(resolutions)),
        ("untwisted control", Box::new(untwisted)),
        ("shuffle recursion", Box::new(shuffles)),
        ("resolve/check round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err(anyhow::anyhow!("panicked")));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} [{elapsed:.2?}]", n + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {e:#} [{elapsed:.2?}]", n + 1);
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
