//! Lifting a tropical point and an initial-form root to a Puiseux-series
//! root.
//!
//! [`multivariate_lift`] removes one variable per step by substituting a
//! monomial (or a perturbed monomial) series for it, and hands the last
//! variable to the classical Newton–Puiseux iteration in
//! [`univariate_lift`]. Every step is recorded in [`LiftedPoint::trace`].
//!
//! Given `f`, orders `b` and coefficients `γ`, a root `x` with
//! `o(x_j) = b_j` and `pc(x_j) = γ_j` exists exactly when `b` lies on the
//! tropical hypersurface of `f` and the initial form `f_b` vanishes at `γ`.
//! Both conditions are checked up front and reported as
//! [`Error::HypothesisViolated`].

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{Field, ToleranceConfig};
use crate::poly::{FieldPoly, SeriesPoly};
use crate::series::{Order, PuiseuxSeries};
use crate::tropical::{epsilon_gap, initial_form, newton_polygon_candidates, tropicalize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    pub tolerance: ToleranceConfig,
    /// Cap on Newton–Puiseux iterations (summed over explored branches).
    pub max_steps: usize,
    /// Maximum number of branches returned by the enumerating entry points.
    pub branch_cap: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { tolerance: ToleranceConfig::default(), max_steps: 10_000, branch_cap: 16 }
    }
}

/// A lifting problem: find a root of `f` with orders `orders` and principal
/// coefficients `coefficients`, computed at least up to `precision`.
#[derive(Debug, Clone)]
pub struct LiftRequest<F: Field> {
    pub f: SeriesPoly<F>,
    pub orders: Vec<Exponent>,
    pub coefficients: Vec<F>,
    pub precision: Exponent,
}

impl<F: Field> LiftRequest<F> {
    pub fn new(f: SeriesPoly<F>, orders: Vec<Exponent>, coefficients: Vec<F>, precision: Exponent) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if orders.len() != f.nvars() || coefficients.len() != f.nvars() {
            return Err(Error::InvalidInput(format!(
                "polynomial has {} variables but {} orders and {} coefficients were given",
                f.nvars(),
                orders.len(),
                coefficients.len()
            )));
        }
        if let Some(j) = coefficients.iter().position(F::is_zero) {
            return Err(Error::HypothesisViolated(format!("coefficient {} is zero; roots must lie in the torus", j + 1)));
        }
        if let Some(max) = orders.iter().max() {
            if &precision <= max {
                return Err(Error::InvalidInput(format!("precision {precision} must exceed every order (max {max})")));
            }
        }
        Ok(LiftRequest { f, orders, coefficients, precision })
    }
}

/// One step of the multivariate recursion. Variable indices refer to the
/// original polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum LiftStep<F: Field> {
    /// Substituting `γ_j t^{b_j}` for every remaining variable already gives
    /// the exact zero series.
    TrivialRoot { variables: Vec<usize> },
    /// The remaining polynomial vanished identically after a substitution.
    ZeroPolynomial { variables: Vec<usize> },
    /// The variable does not occur in the initial form.
    AbsentVariable { variable: usize, value: PuiseuxSeries<F>, reduced: SeriesPoly<F> },
    /// The initial form does not vanish on the slice `x_j = γ_j`.
    SliceSubstitution { variable: usize, value: PuiseuxSeries<F>, reduced: SeriesPoly<F> },
    /// Every slice vanishes; the variable is perturbed to
    /// `(γ + t^{ε/2k}) t^b`.
    Perturbation {
        variable: usize,
        multiplicity: u32,
        gap: Option<Exponent>,
        shift: Exponent,
        value: PuiseuxSeries<F>,
        reduced: SeriesPoly<F>,
    },
    /// The last variable was solved by Newton–Puiseux iteration.
    Univariate { variable: usize, precision: Exponent, steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPoint<F: Field> {
    pub coords: Vec<PuiseuxSeries<F>>,
    /// True when `coords` is an exact root rather than a truncation.
    pub exact: bool,
    pub trace: Vec<LiftStep<F>>,
}

/// Order of `f` evaluated at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidualOrder {
    /// The residual is the exact zero series.
    Infinity,
    /// The residual has a known lowest term.
    Exactly(Exponent),
    /// The residual is only known as `O(t^T)`.
    AtLeast(Exponent),
}

impl ResidualOrder {
    /// Certified lower bound on the order; `None` for infinity.
    pub fn lower_bound(&self) -> Option<&Exponent> {
        match self {
            ResidualOrder::Infinity => None,
            ResidualOrder::Exactly(e) | ResidualOrder::AtLeast(e) => Some(e),
        }
    }

    /// True if the residual is zero or certified to have order `≥ bound`.
    pub fn at_least(&self, bound: &Exponent) -> bool {
        self.lower_bound().is_none_or(|e| e >= bound)
    }

    /// The order itself, failing when only a lower bound is known.
    pub fn determinate(&self) -> Result<Order> {
        match self {
            ResidualOrder::Infinity => Ok(Order::Infinity),
            ResidualOrder::Exactly(e) => Ok(Order::Finite(e.clone())),
            ResidualOrder::AtLeast(e) => {
                Err(Error::IndeterminatePrecision(format!("residual is only known to be O(t^({e}))")))
            }
        }
    }
}

/// Order of `f(point)`, tracking truncations of the coordinates.
pub fn verify_root<F: Field>(f: &SeriesPoly<F>, point: &[PuiseuxSeries<F>]) -> Result<ResidualOrder> {
    if point.len() != f.nvars() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, polynomial has {} variables", point.len(), f.nvars())));
    }
    let residual = f.evaluate(point);
    Ok(match (residual.terms().first(), residual.truncation()) {
        (None, None) => ResidualOrder::Infinity,
        (Some((e, _)), _) => ResidualOrder::Exactly(e.clone()),
        (None, Some(t)) => ResidualOrder::AtLeast(t.clone()),
    })
}

/// Checks that `b` is on the tropical hypersurface of `f` and that the
/// initial form vanishes at `γ`; returns the initial form.
pub fn check_hypotheses<F: Field>(f: &SeriesPoly<F>, b: &[Exponent], gamma: &[F]) -> Result<FieldPoly<F>> {
    if b.len() != f.nvars() || gamma.len() != f.nvars() {
        return Err(Error::InvalidInput("order and coefficient vectors must match the variable count".into()));
    }
    if let Some(j) = gamma.iter().position(F::is_zero) {
        return Err(Error::HypothesisViolated(format!("coefficient {} is zero; roots must lie in the torus", j + 1)));
    }
    let trop = tropicalize(f)?;
    let eval = trop.eval(b);
    if eval.argmin.len() < 2 {
        return Err(Error::HypothesisViolated(format!(
            "point is not on the tropical hypersurface: minimum {} is attained only by monomial {:?}",
            eval.value, eval.argmin[0]
        )));
    }
    let fb = initial_form(f, b)?;
    let value = fb.evaluate(gamma);
    if !value.is_zero() {
        return Err(Error::HypothesisViolated(format!("initial form does not vanish at the given coefficients (value {value})")));
    }
    Ok(fb)
}

struct Branch<F: Field> {
    residual: SeriesPoly<F>,
    prefix: Vec<(Exponent, F)>,
    last: Exponent,
}

enum Node<F: Field> {
    Open(Branch<F>),
    Truncated(Vec<(Exponent, F)>),
}

struct UnivariateOutcome<F: Field> {
    roots: Vec<(PuiseuxSeries<F>, bool)>,
    steps: usize,
}

/// Root of a univariate `f` with order `r` and principal coefficient `γ`,
/// exact when the iteration terminates, otherwise truncated at `precision`.
///
/// Later steps may offer several continuations; the first (smallest order,
/// then canonical root order) that leads to a root is followed.
pub fn univariate_lift<F: Field>(
    f: &SeriesPoly<F>,
    r: &Exponent,
    gamma: &F,
    precision: &Exponent,
    opts: &LiftOptions,
) -> Result<LiftedPoint<F>> {
    let outcome = univariate_search(f, r, gamma, precision, opts, 1)?;
    let (root, exact) = outcome.roots.into_iter().next().expect("search returns at least one root or an error");
    Ok(LiftedPoint {
        coords: vec![root],
        exact,
        trace: vec![LiftStep::Univariate { variable: 0, precision: precision.clone(), steps: outcome.steps }],
    })
}

/// All branches with order `r` and principal coefficient `γ`, up to
/// `opts.branch_cap`.
pub fn univariate_branches<F: Field>(
    f: &SeriesPoly<F>,
    r: &Exponent,
    gamma: &F,
    precision: &Exponent,
    opts: &LiftOptions,
) -> Result<Vec<LiftedPoint<F>>> {
    let outcome = univariate_search(f, r, gamma, precision, opts, opts.branch_cap.max(1))?;
    let steps = outcome.steps;
    Ok(outcome
        .roots
        .into_iter()
        .map(|(root, exact)| LiftedPoint {
            coords: vec![root],
            exact,
            trace: vec![LiftStep::Univariate { variable: 0, precision: precision.clone(), steps }],
        })
        .collect())
}

fn univariate_search<F: Field>(
    f: &SeriesPoly<F>,
    r: &Exponent,
    gamma: &F,
    precision: &Exponent,
    opts: &LiftOptions,
    limit: usize,
) -> Result<UnivariateOutcome<F>> {
    if f.nvars() != 1 {
        return Err(Error::InvalidInput(format!("expected a univariate polynomial, got {} variables", f.nvars())));
    }
    if precision <= r {
        return Err(Error::InvalidInput(format!("precision {precision} must exceed the order {r}")));
    }
    check_hypotheses(f, std::slice::from_ref(r), std::slice::from_ref(gamma))?;

    let first = PuiseuxSeries::monomial(gamma.clone(), r.clone());
    let mut stack = vec![Node::Open(Branch {
        residual: f.shift_univariate(&first),
        prefix: vec![(r.clone(), gamma.clone())],
        last: r.clone(),
    })];
    let mut roots = Vec::new();
    let mut steps = 0;
    let mut missing_roots = false;

    while let Some(node) = stack.pop() {
        let branch = match node {
            Node::Truncated(prefix) => {
                roots.push((PuiseuxSeries::with_truncation(prefix, Some(precision.clone())), false));
                if roots.len() >= limit {
                    break;
                }
                continue;
            }
            Node::Open(branch) => branch,
        };
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepLimit(opts.max_steps));
        }

        let constant = branch.residual.coefficient(&[0]);
        let Some(constant) = constant else {
            roots.push((PuiseuxSeries::from_terms(branch.prefix), true));
            if roots.len() >= limit {
                break;
            }
            continue;
        };
        if constant.terms().is_empty() {
            return Err(Error::IndeterminatePrecision(format!("residual constant term is {constant}")));
        }

        let candidates: Vec<Exponent> =
            newton_polygon_candidates(&branch.residual)?.into_iter().filter(|c| c > &branch.last).collect();
        let mut children = Vec::new();
        let mut truncated = false;
        for cand in candidates {
            if &cand >= precision {
                if !truncated {
                    children.push(Node::Truncated(branch.prefix.clone()));
                    truncated = true;
                }
                continue;
            }
            let init = initial_form(&branch.residual, std::slice::from_ref(&cand))?;
            let mut dense = vec![F::zero(); init.degree_in(0) as usize + 1];
            for (m, c) in init.terms() {
                dense[m[0] as usize] = c.clone();
            }
            let mut found: Vec<F> = Vec::new();
            for root in F::roots(&dense, &opts.tolerance)? {
                if !root.is_zero() && !found.iter().any(|x| x.approx_eq(&root)) {
                    found.push(root);
                }
            }
            if found.is_empty() {
                missing_roots = true;
            }
            for c in found {
                let term = PuiseuxSeries::monomial(c.clone(), cand.clone());
                let mut prefix = branch.prefix.clone();
                prefix.push((cand.clone(), c));
                children.push(Node::Open(Branch { residual: branch.residual.shift_univariate(&term), prefix, last: cand.clone() }));
            }
        }
        stack.extend(children.into_iter().rev());
    }

    if roots.is_empty() {
        let why = if missing_roots {
            "an initial polynomial of the Newton–Puiseux iteration has no nonzero root in this field"
        } else {
            "no continuation of the branch was found"
        };
        return Err(Error::NoRootInBackend(why.into()));
    }
    Ok(UnivariateOutcome { roots, steps })
}

struct Descent<F: Field> {
    poly: SeriesPoly<F>,
    /// Original indices of the variables still present in `poly`.
    vars: Vec<usize>,
    fixed: Vec<Option<PuiseuxSeries<F>>>,
    trace: Vec<LiftStep<F>>,
}

impl<F: Field> Descent<F> {
    fn fix(&mut self, pos: usize, value: PuiseuxSeries<F>) -> SeriesPoly<F> {
        self.poly = self.poly.substitute_coordinate(pos, &value);
        let var = self.vars.remove(pos);
        self.fixed[var] = Some(value);
        self.poly.clone()
    }

    fn fix_all_monomials(&mut self, b: &[Exponent], gamma: &[F]) -> Vec<usize> {
        let vars = std::mem::take(&mut self.vars);
        for &v in &vars {
            self.fixed[v] = Some(PuiseuxSeries::monomial(gamma[v].clone(), b[v].clone()));
        }
        vars
    }

    fn finish(self, exact: bool) -> LiftedPoint<F> {
        LiftedPoint {
            coords: self.fixed.into_iter().map(|c| c.expect("every coordinate fixed")).collect(),
            exact,
            trace: self.trace,
        }
    }
}

/// A root with the requested orders and principal coefficients.
///
/// Coordinates fixed by the multivariate steps are exact; the last one comes
/// from [`univariate_lift`] and is exact or truncated. The truncation is
/// chosen so that [`verify_root`] on the result is infinite or at least the
/// requested precision.
pub fn multivariate_lift<F: Field>(req: &LiftRequest<F>, opts: &LiftOptions) -> Result<LiftedPoint<F>> {
    let mut points = lift(req, opts, 1)?;
    Ok(points.remove(0))
}

/// Like [`multivariate_lift`] but returns every branch of the final
/// univariate step, up to `opts.branch_cap`.
pub fn multivariate_lift_all<F: Field>(req: &LiftRequest<F>, opts: &LiftOptions) -> Result<Vec<LiftedPoint<F>>> {
    lift(req, opts, opts.branch_cap.max(1))
}

fn lift<F: Field>(req: &LiftRequest<F>, opts: &LiftOptions, limit: usize) -> Result<Vec<LiftedPoint<F>>> {
    let (b, gamma) = (&req.orders, &req.coefficients);
    check_hypotheses(&req.f, b, gamma)?;
    let top_value = tropicalize(&req.f)?.eval(b).value;

    let n = req.f.nvars();
    let mut state = Descent { poly: req.f.clone(), vars: (0..n).collect(), fixed: vec![None; n], trace: Vec::new() };

    loop {
        if state.poly.is_zero() {
            let variables = state.fix_all_monomials(b, gamma);
            state.trace.push(LiftStep::ZeroPolynomial { variables });
            return Ok(vec![state.finish(true)]);
        }
        let b_cur: Vec<Exponent> = state.vars.iter().map(|&v| b[v].clone()).collect();
        let gamma_cur: Vec<F> = state.vars.iter().map(|&v| gamma[v].clone()).collect();

        let monomial_point: Vec<PuiseuxSeries<F>> =
            b_cur.iter().zip(&gamma_cur).map(|(e, c)| PuiseuxSeries::monomial(c.clone(), e.clone())).collect();
        if state.poly.evaluate(&monomial_point).is_exact_zero() {
            let variables = state.fix_all_monomials(b, gamma);
            state.trace.push(LiftStep::TrivialRoot { variables });
            return Ok(vec![state.finish(true)]);
        }
        if state.vars.is_empty() {
            return Err(Error::HypothesisViolated("nonzero constant left after all substitutions".into()));
        }

        let fb = check_hypotheses(&state.poly, &b_cur, &gamma_cur)?;

        if let Some(pos) = (0..state.vars.len()).find(|&k| !fb.uses_variable(k)) {
            let variable = state.vars[pos];
            let value = monomial_point[pos].clone();
            let reduced = state.fix(pos, value.clone());
            state.trace.push(LiftStep::AbsentVariable { variable, value, reduced });
            continue;
        }

        if state.vars.len() == 1 {
            let variable = state.vars[0];
            let slack = &b[variable] - &top_value;
            let precision = if slack.is_positive() { &req.precision + &slack } else { req.precision.clone() };
            let outcome = univariate_search(&state.poly, &b_cur[0], &gamma_cur[0], &precision, opts, limit)?;
            state.trace.push(LiftStep::Univariate { variable, precision, steps: outcome.steps });
            return Ok(outcome
                .roots
                .into_iter()
                .map(|(root, exact)| {
                    let mut fixed = state.fixed.clone();
                    fixed[variable] = Some(root);
                    LiftedPoint {
                        coords: fixed.into_iter().map(|c| c.expect("every coordinate fixed")).collect(),
                        exact,
                        trace: state.trace.clone(),
                    }
                })
                .collect());
        }

        if let Some(pos) = (0..state.vars.len()).find(|&k| !fb.partial_substitute(k, &gamma_cur[k]).is_zero()) {
            let variable = state.vars[pos];
            let value = monomial_point[pos].clone();
            let reduced = state.fix(pos, value.clone());
            state.trace.push(LiftStep::SliceSubstitution { variable, value, reduced });
            continue;
        }

        let (multiplicity, _) = fb.factor_multiplicity(0, &gamma_cur[0])?;
        debug_assert!(multiplicity >= 1, "a vanishing slice implies a linear factor");
        let gap = epsilon_gap(&state.poly, &b_cur)?;
        let epsilon = gap.clone().unwrap_or_else(|| Exponent::integer(1));
        let shift = epsilon.div_int(2 * multiplicity);
        let value = PuiseuxSeries::from_terms([
            (b_cur[0].clone(), gamma_cur[0].clone()),
            (&b_cur[0] + &shift, F::one()),
        ]);
        let variable = state.vars[0];
        let reduced = state.fix(0, value.clone());
        state.trace.push(LiftStep::Perturbation { variable, multiplicity, gap, shift, value, reduced });
    }
}
