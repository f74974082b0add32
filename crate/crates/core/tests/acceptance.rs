mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use puiseux_lift::cli::run_command;
use puiseux_lift::lifting::{
    check_hypotheses, multivariate_lift, univariate_lift, verify_root, LiftOptions, LiftRequest, LiftStep,
    ResidualOrder,
};
use puiseux_lift::parse::parse_polynomial;
use puiseux_lift::tropical::{epsilon_gap, initial_form, newton_polygon_candidates, tropicalize};
use puiseux_lift::{ComplexApprox, Exponent, Field, FieldPoly, Monomial, Order, ToleranceConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn example() -> Poly {
    parse_polynomial(EXAMPLE, Some(&xy())).unwrap().poly
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = example();

    // min{2, 1+x, 2+y, 1+x+y, 3+x+4y, 4+4y, 0+5x}
    let expected: BTreeSet<(Monomial, Exponent)> = [
        (vec![0, 0], 2),
        (vec![1, 0], 1),
        (vec![0, 1], 2),
        (vec![1, 1], 1),
        (vec![1, 4], 3),
        (vec![0, 4], 4),
        (vec![5, 0], 0),
    ]
    .into_iter()
    .map(|(m, a)| (m, Exponent::integer(a)))
    .collect();
    let trop = tropicalize(&f).map_err(|e| e.to_string())?;
    let got: BTreeSet<(Monomial, Exponent)> = trop.terms().iter().cloned().collect();
    ensure(trop.terms().len() == 7 && got == expected, || format!("tropical terms {}", trop.render(&xy())))?;

    let b = vec![Exponent::integer(1), Exponent::integer(0)];
    ensure(trop.is_member(&b), || "(1,0) not a member".into())?;

    let fb = initial_form(&f, &b).map_err(|e| e.to_string())?;
    let want_fb = FieldPoly::from_terms(2, [(vec![0, 0], int(-3)), (vec![1, 0], int(3)), (vec![0, 1], int(-1)), (vec![1, 1], int(1))]);
    ensure(fb == want_fb, || format!("initial form {}", fb.render(&xy())))?;

    let req = LiftRequest::new(f.clone(), b, vec![int(1), int(-3)], Exponent::integer(20)).map_err(|e| e.to_string())?;
    let p = multivariate_lift(&req, &LiftOptions::default()).map_err(|e| e.to_string())?;
    let g_tilde = parse_polynomial::<Q>("3*t^3 + t^5 + 5*t^6 + 10*t^7 + 10*t^8 + 5*t^9 + t^10 + t^3*y", Some(&["y".to_string()]))
        .unwrap()
        .poly;
    match &p.trace[0] {
        LiftStep::Perturbation { variable: 0, multiplicity: 1, gap: Some(gap), reduced, .. } if gap == &Exponent::integer(2) => {
            ensure(reduced == &g_tilde, || format!("intermediate polynomial {}", reduced.render(&["y".to_string()])))?;
        }
        other => return Err(format!("first step {other:?}")),
    }
    let x = parse_polynomial::<Q>("t + t^2", Some(&[])).unwrap().poly;
    let y = parse_polynomial::<Q>("-3 - t^2 - 5*t^3 - 10*t^4 - 10*t^5 - 5*t^6 - t^7", Some(&[])).unwrap().poly;
    let want = [x.coefficient(&[]).unwrap().clone(), y.coefficient(&[]).unwrap().clone()];
    ensure(p.exact && p.coords == want, || format!("lifted point ({}, {})", p.coords[0], p.coords[1]))?;
    let residual = verify_root(&f, &p.coords).map_err(|e| e.to_string())?;
    ensure(residual == ResidualOrder::Infinity, || format!("residual {residual:?}"))?;

    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("case 2 with k=1, gap 2; point ({}, {})", p.coords[0], p.coords[1]))
}

fn order_and_pc(s: &Series) -> Option<(Exponent, Q)> {
    match s.order().ok()? {
        Order::Finite(e) => Some((e, s.principal_coefficient().ok()?.clone())),
        Order::Infinity => None,
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x7a11);
    let precision = Exponent::integer(5);
    let (mut exact, mut truncated) = (0, 0);
    for i in 0..200 {
        let n = 1 + i % 3;
        let inst = planted(&mut rng, n);
        let b: Vec<Exponent> = inst.root.iter().map(|s| order_and_pc(s).unwrap().0).collect();
        let gamma: Vec<Q> = inst.root.iter().map(|s| order_and_pc(s).unwrap().1).collect();
        let show = || format!("instance {i}: f = {}, s = {:?}", inst.f.render(&puiseux_lift::poly::default_names(n)), inst.root);

        check_hypotheses(&inst.f, &b, &gamma).map_err(|e| format!("{}: preconditions: {e}", show()))?;
        let req = LiftRequest::new(inst.f.clone(), b.clone(), gamma.clone(), precision.clone()).map_err(|e| e.to_string())?;
        let p = multivariate_lift(&req, &LiftOptions::default()).map_err(|e| format!("{}: lift: {e}", show()))?;
        for j in 0..n {
            let got = order_and_pc(&p.coords[j]);
            ensure(got == Some((b[j].clone(), gamma[j].clone())), || format!("{}: coordinate {j} is {}", show(), p.coords[j]))?;
        }
        let residual = verify_root(&inst.f, &p.coords).map_err(|e| e.to_string())?;
        ensure(residual.at_least(&precision), || format!("{}: residual {residual:?}", show()))?;
        if residual == ResidualOrder::Infinity {
            exact += 1;
        } else {
            truncated += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("200 instances ({exact} exact roots, {truncated} truncated)"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x3e27);
    let precision = Exponent::integer(6);
    let x = || Poly::variable(1, 0);
    let mut lifted = 0;
    for i in 0..200 {
        let roots: Vec<Series> = (0..rng.gen_range(1..=4)).map(|_| exact_series(&mut rng, 4, -1, 5, 9)).collect();
        let f = roots.iter().fold(Poly::constant(1, Series::one()), |acc, s| acc.mul(&x().sub(&Poly::constant(1, s.clone()))));
        let show = || format!("instance {i}: roots {roots:?}");

        let orders: BTreeSet<Exponent> = roots.iter().map(|s| order_and_pc(s).unwrap().0).collect();
        let cands = newton_polygon_candidates(&f).map_err(|e| e.to_string())?;
        ensure(cands == orders.iter().cloned().collect::<Vec<_>>(), || format!("{}: candidates {cands:?}", show()))?;

        let pairs: Vec<(Exponent, Q)> = roots.iter().map(|s| order_and_pc(s).unwrap()).collect();
        let distinct: BTreeSet<_> = pairs.iter().cloned().collect();
        if distinct.len() < pairs.len() {
            continue;
        }
        for (s, (r, g)) in roots.iter().zip(&pairs) {
            let p = univariate_lift(&f, r, g, &precision, &LiftOptions::default()).map_err(|e| format!("{}: {e}", show()))?;
            let want = if s.terms().iter().all(|(e, _)| e < &precision) { s.clone() } else { s.truncate(&precision) };
            ensure(p.coords[0] == want, || format!("{}: lifted {} for {s}", show(), p.coords[0]))?;
            lifted += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("200 products, {lifted} planted roots reproduced"))
}

/// Orders on a grid, with one coordinate moved onto the tie between two
/// random monomials half of the time.
fn sample_point(rng: &mut StdRng, f: &Poly) -> Vec<Exponent> {
    let n = f.nvars();
    let mut b: Vec<Exponent> = (0..n).map(|_| exponent_in(rng, -3, 4, 4)).collect();
    let terms: Vec<(Monomial, Exponent)> =
        f.terms().map(|(m, c)| (m.clone(), c.order().unwrap().finite().unwrap().clone())).collect();
    if terms.len() >= 2 && rng.gen_bool(0.5) {
        let a = rng.gen_range(0..terms.len());
        let c = (a + rng.gen_range(1..terms.len())) % terms.len();
        let (ma, ea) = &terms[a];
        let (mc, ec) = &terms[c];
        if let Some(k) = (0..n).find(|&k| ma[k] != mc[k]) {
            // solve ea + ma.b = ec + mc.b for b_k
            let mut rest = ec - ea;
            for j in (0..n).filter(|&j| j != k) {
                let d = Exponent::integer(mc[j] as i64 - ma[j] as i64);
                rest = rest + d * b[j].clone();
            }
            let denom = Exponent::integer(ma[k] as i64 - mc[k] as i64);
            b[k] = Exponent::from(rest.as_rational() / denom.as_rational());
        }
    }
    b
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4e4a);
    let mut members = 0;
    for i in 0..500 {
        let n = rng.gen_range(1..=3);
        let f = sparse_poly(&mut rng, n, 5, 3);
        let b = sample_point(&mut rng, &f);
        let member = tropicalize(&f).map_err(|e| e.to_string())?.is_member(&b);
        let support = initial_form(&f, &b).map_err(|e| e.to_string())?.support().len();
        ensure(member == (support >= 2), || format!("instance {i}: member {member}, support {support}"))?;
        members += member as usize;
    }
    Ok(format!("500 pairs, 0 discrepancies ({members} on the hypersurface)"))
}

/// Expansion of `f(x t^b)` grouped by power of `t`, built term by term.
fn brute_force_layers(f: &Poly, b: &[Exponent]) -> BTreeMap<Exponent, BTreeMap<Monomial, Q>> {
    let mut layers: BTreeMap<Exponent, BTreeMap<Monomial, Q>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut shift = Exponent::zero();
        for (&k, bk) in m.iter().zip(b) {
            shift = shift + Exponent::integer(k as i64) * bk.clone();
        }
        for (e, a) in c.terms() {
            let slot = layers.entry(e.clone() + shift.clone()).or_default().entry(m.clone()).or_insert_with(|| int(0));
            *slot += a;
        }
    }
    for layer in layers.values_mut() {
        layer.retain(|_, c| *c != int(0));
    }
    layers.retain(|_, layer| !layer.is_empty());
    layers
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5d1f);
    let mut with_gap = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=3);
        let f = sparse_poly(&mut rng, n, 5, 3);
        let b = sample_point(&mut rng, &f);
        let layers = brute_force_layers(&f, &b);
        let mut it = layers.iter();
        let (low, layer) = it.next().unwrap();
        let fb = initial_form(&f, &b).map_err(|e| e.to_string())?;
        let want = FieldPoly::from_terms(n, layer.iter().map(|(m, c)| (m.clone(), c.clone())));
        ensure(fb == want, || format!("instance {i}: initial form differs"))?;
        let value = tropicalize(&f).unwrap().eval(&b).value;
        ensure(&value == low, || format!("instance {i}: f(b) = {value}, lowest layer {low}"))?;
        let gap = epsilon_gap(&f, &b).map_err(|e| e.to_string())?;
        let expected = it.next().map(|(second, _)| second.clone() - low.clone());
        ensure(gap == expected, || format!("instance {i}: gap {gap:?}, expected {expected:?}"))?;
        with_gap += expected.is_some() as usize;
    }
    Ok(format!("200 pairs, {with_gap} with a nonempty tail"))
}

fn criterion_6a() -> Outcome {
    let f = example();
    let x_eq_t = parse_polynomial::<Q>("t", Some(&[])).unwrap().poly;
    let slice = f.substitute_coordinate(0, x_eq_t.coefficient(&[]).unwrap());
    let want = parse_polynomial::<Q>("t^5 + t^5*y^4", Some(&["y".to_string()])).unwrap().poly;
    ensure(slice == want, || format!("slice x = t is {}", slice.render(&["y".to_string()])))?;

    // principal coefficients of the slice, as a complex polynomial in y
    let mut dense = vec![ComplexApprox::zero(); slice.degree_in(0) as usize + 1];
    for (m, c) in slice.terms() {
        dense[m[0] as usize] = ComplexApprox::from_rational(c.principal_coefficient().unwrap());
    }
    let cfg = ToleranceConfig::default();
    let roots = ComplexApprox::roots(&dense, &cfg).map_err(|e| e.to_string())?;
    ensure(roots.len() == 4, || format!("{} roots", roots.len()))?;
    let mut worst = 0.0f64;
    for r in &roots {
        let y: Complex64 = r.0;
        worst = worst.max((y.powu(4) + 1.0).norm());
    }
    ensure(worst <= 1e-8, || format!("largest residual {worst:e}"))?;
    Ok(format!("4 roots of 1 + y^4, largest residual {worst:.1e}"))
}

fn criterion_6b() -> Outcome {
    let f = example();
    let b = vec![Exponent::integer(1), Exponent::integer(0)];
    let req = LiftRequest::new(f.clone(), b.clone(), vec![int(1), int(-3)], Exponent::integer(20)).map_err(|e| e.to_string())?;
    multivariate_lift(&req, &LiftOptions::default()).map_err(|e| format!("(1,-3) rejected: {e}"))?;

    let fb = |x: i64, y: i64| -3 + 3 * x - y + x * y;
    let fb_at_11 = fb(1, 1);
    let mut kinds = Vec::new();
    for cmd in ["member", "initial-form"] {
        let inv = run_command(["puiseux-lift", cmd, "-f", EXAMPLE, "-b", "1,0", "-g", "1,1"]);
        kinds.push(inv.document.error.map_or("none".to_string(), |e| e.kind));
    }
    ensure(kinds.iter().all(|k| k == "hypothesis_violated"), || {
        format!(
            "gamma = (1,1) expected hypothesis_violated, got member: {}, initial-form: {}; the initial form \
             -3 + 3x - y + xy evaluates to {fb_at_11} there, so the hypotheses hold",
            kinds[0], kinds[1]
        )
    })?;
    Ok("(1,1) rejected".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1  example golden run", criterion_1),
        ("2  planted roots lift", criterion_2),
        ("3  univariate Newton polygon oracle", criterion_3),
        ("4  membership vs initial support", criterion_4),
        ("5  initial layer and gap oracle", criterion_5),
        ("6a complex roots of 1 + y^4", criterion_6a),
        ("6b rejection of gamma = (1,1)", criterion_6b),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name} [{elapsed:.2?}] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?}] {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
