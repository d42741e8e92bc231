//! End-to-end measurements: the dichotomy on flat circuits and the
//! three-regime table for triangles.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{verify_separation, Circuit, Node, Verdict};
use crate::constructions::{single_oracle, triangle_clo, trivial_dnf};
use crate::error::{Error, Result};
use crate::math::{format_rational, ratio, Rational};
use crate::rectangles::{locality_exact, rect_and, CompiledFamily, RectFamily, RectPair};
use crate::testsets::{EdgeSet, Member, TestSuite};

/// One term `⌈X⌉ ∧ y[U, V]` of a flat circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatClause {
    #[serde(rename = "X")]
    pub set: Vec<usize>,
    pub oracle: RectPair,
}

impl FlatClause {
    pub fn new(mut set: Vec<usize>, oracle: RectPair) -> Self {
        set.sort_unstable();
        set.dedup();
        FlatClause { set, oracle }
    }
}

fn or_terms(c: &Circuit, id: usize, out: &mut Vec<usize>) {
    match c.node(id) {
        Node::Or(args) => args.iter().for_each(|&a| or_terms(c, a, out)),
        _ => out.push(id),
    }
}

fn and_leaves(c: &Circuit, id: usize, out: &mut Vec<usize>) {
    match c.node(id) {
        Node::And(args) => args.iter().for_each(|&a| and_leaves(c, a, out)),
        _ => out.push(id),
    }
}

/// Reads a circuit of the form `∨_i (⌈X_i⌉ ∧ y_{j_i})` into clauses. Nested
/// ORs and ANDs are flattened; several oracle leaves in one term are merged
/// into the AND of their rectangles, and a term without one gets `(All, None)`.
pub fn flatten(circuit: &Circuit, family: &RectFamily) -> Result<Vec<FlatClause>> {
    let mut terms = Vec::new();
    or_terms(circuit, circuit.output(), &mut terms);
    let mut clauses = Vec::new();
    for t in terms {
        let mut leaves = Vec::new();
        and_leaves(circuit, t, &mut leaves);
        let mut edges = Vec::new();
        let mut pair: Option<RectPair> = None;
        let mut zero = false;
        for l in leaves {
            match circuit.node(l) {
                Node::X(i, j) => edges.push((*i, *j)),
                Node::Y(o) => {
                    let r = family.get(*o)?;
                    pair = Some(match pair {
                        Some(p) => rect_and(&p, r),
                        None => r.clone(),
                    });
                }
                Node::Const(true) => {}
                Node::Const(false) => zero = true,
                Node::Or(_) => return Err(Error::input(format!("node {l}: OR below an AND is not flat"))),
                Node::And(_) => unreachable!(),
            }
        }
        if zero {
            continue;
        }
        edges.sort_unstable();
        edges.dedup();
        let mut set: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        set.sort_unstable();
        set.dedup();
        if edges.len() != set.len() * set.len().saturating_sub(1) / 2 {
            return Err(Error::input(format!("term at node {t}: its edges do not form a clique on {set:?}")));
        }
        clauses.push(FlatClause::new(set, pair.unwrap_or_else(RectPair::always)));
    }
    Ok(clauses)
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    /// `D^V`-measure of accepted multipartite graphs.
    pub a: String,
    /// `D^U`-measure of rejected cliques.
    pub b: String,
    /// Locality of the clause rectangles.
    pub locality: String,
    pub clauses: usize,
    pub max_width: usize,
    pub width_limit: usize,
    /// `locality <= mu_threshold` (1/16 by default).
    pub hypothesis: bool,
    /// `max(a, b) >= 1/10`.
    pub dichotomy: bool,
    /// Hypothesis holds but the dichotomy does not; reported, never fatal.
    pub violation: bool,
    #[serde(skip)]
    pub a_exact: Rational,
    #[serde(skip)]
    pub b_exact: Rational,
    #[serde(skip)]
    pub locality_exact: Rational,
}

/// Evaluates `∨_i ⌈X_i⌉ ∧ f*_{(U_i, V_i)}` on the suite. Requires `k >= 5`
/// and `|X_i| <= ⌊√k⌋`.
pub fn dichotomy_measure(clauses: &[FlatClause], suite: &TestSuite) -> Result<DichotomyReport> {
    dichotomy_measure_with(clauses, suite, &ratio(1, 16))
}

/// [`dichotomy_measure`] with the hypothesis `locality <= mu_threshold`.
pub fn dichotomy_measure_with(
    clauses: &[FlatClause],
    suite: &TestSuite,
    mu_threshold: &Rational,
) -> Result<DichotomyReport> {
    let (n, k) = (suite.n(), suite.k());
    if k < 5 {
        return Err(Error::range(format!("dichotomy needs k >= 5, got {k}")));
    }
    let width_limit = (k as f64).sqrt().floor() as usize;
    let width_limit = if (width_limit + 1) * (width_limit + 1) <= k { width_limit + 1 } else { width_limit };
    let max_width = clauses.iter().map(|c| c.set.len()).max().unwrap_or(0);
    if max_width > width_limit {
        return Err(Error::range(format!("clause width {max_width} exceeds floor(sqrt(k)) = {width_limit}")));
    }
    if let Some(v) = clauses.iter().flat_map(|c| &c.set).find(|&&v| v >= n) {
        return Err(Error::input(format!("vertex {v} out of range for n={n}")));
    }
    let family = RectFamily::new(n, k, clauses.iter().map(|c| c.oracle.clone()).collect());
    let compiled = CompiledFamily::new(&family, suite)?;
    let accepts = |m: &Member<'_>| {
        clauses.iter().enumerate().any(|(i, c)| {
            compiled.f_star(i, m) && c.set.iter().enumerate().all(|(x, &a)| c.set[x + 1..].iter().all(|&b| m.has_edge(a, b)))
        })
    };
    let u_rejected = suite.u().par_iter().enumerate().filter(|(i, c)| !accepts(&Member::U(*i, c))).count();
    let v_accepted: Vec<usize> =
        suite.v().par_iter().enumerate().filter(|(i, p)| accepts(&Member::V(*i, p))).map(|(i, _)| i).collect();
    let a: Rational = v_accepted.iter().fold(Rational::zero(), |acc, &i| acc + suite.dv_mass(i));
    let b = Rational::new(BigInt::from(u_rejected), BigInt::from(suite.u().len()));
    let mu = crate::rectangles::locality_of_compiled(&compiled, suite);
    let hypothesis = mu <= *mu_threshold;
    let dichotomy = a.clone().max(b.clone()) >= ratio(1, 10);
    Ok(DichotomyReport {
        a: format_rational(&a),
        b: format_rational(&b),
        locality: format_rational(&mu),
        clauses: clauses.len(),
        max_width,
        width_limit,
        hypothesis,
        dichotomy,
        violation: hypothesis && !dichotomy,
        a_exact: a,
        b_exact: b,
        locality_exact: mu,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "mu=1")]
    Full,
    #[serde(rename = "middle")]
    Middle,
    #[serde(rename = "low")]
    Low,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Full => "mu=1",
            Regime::Middle => "middle",
            Regime::Low => "low",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseRow {
    pub construction: String,
    pub n: usize,
    pub k: usize,
    pub size: usize,
    pub locality: String,
    pub regime: Regime,
    pub verdict: Verdict,
    /// Locality fits the regime: `= 1`, `<= 1/2 + eps`, `<= 1/2 - eps`.
    pub consistent: bool,
    #[serde(skip)]
    pub locality_exact: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    pub n: usize,
    pub eps: String,
    pub rows: Vec<PhaseRow>,
    pub footer: String,
}

pub const PHASE_FOOTER: &str = "lower bounds (Omega(n^2), Omega(n^3)): not checked, out of scope";

/// Size, exact locality and separation of the three triangle circuits,
/// one per locality regime.
pub fn phase_report(n: usize, eps: &Rational) -> Result<PhaseReport> {
    if n < 4 {
        return Err(Error::range(format!("phase report needs n >= 4, got {n}")));
    }
    let half = ratio(1, 2);
    if *eps <= Rational::zero() || *eps >= half {
        return Err(Error::range(format!("need 0 < eps < 1/2, got {}", format_rational(eps))));
    }
    let suite = TestSuite::new(n, 3)?;
    let specs = [
        ("single_oracle", Regime::Full),
        ("triangle", Regime::Middle),
        ("trivial_dnf", Regime::Low),
    ];
    let rows = specs
        .par_iter()
        .map(|&(name, regime)| {
            let bundle = match regime {
                Regime::Full => single_oracle(n, 3)?,
                Regime::Middle => triangle_clo(n)?,
                Regime::Low => trivial_dnf(n, 3)?,
            };
            let mu = locality_exact(&bundle.family, &suite)?;
            let verdict = verify_separation(&bundle.circuit, &bundle.family, &suite)?.verdict;
            let consistent = match regime {
                Regime::Full => mu.is_one(),
                Regime::Middle => mu <= &half + eps,
                Regime::Low => mu <= &half - eps,
            };
            Ok(PhaseRow {
                construction: name.to_string(),
                n,
                k: 3,
                size: bundle.circuit.size(),
                locality: format_rational(&mu),
                regime,
                verdict,
                consistent,
                locality_exact: mu,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseReport { n, eps: format_rational(eps), rows, footer: PHASE_FOOTER.to_string() })
}

impl PhaseReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("construction,n,k,size,locality,regime,verdict,consistent\n");
        for r in &self.rows {
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.construction,
                r.n,
                r.k,
                r.size,
                r.locality,
                r.regime.label(),
                verdict,
                r.consistent
            ));
        }
        s.push_str(&format!("# {}\n", self.footer));
        s
    }

    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass && r.consistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lex_clo;
    use crate::math::parse_rational;
    use crate::rectangles::SetExpr;

    #[test]
    fn constant_circuits() {
        let suite = TestSuite::new(6, 5).unwrap();
        let r = dichotomy_measure(&[], &suite).unwrap();
        assert_eq!((r.a.as_str(), r.b.as_str()), ("0/1", "1/1"));
        let r = dichotomy_measure(&[FlatClause::new(vec![], RectPair::always())], &suite).unwrap();
        assert_eq!((r.a.as_str(), r.b.as_str()), ("1/1", "0/1"));
    }

    #[test]
    fn width_is_limited() {
        let suite = TestSuite::new(6, 5).unwrap();
        let c = FlatClause::new(vec![0, 1, 2], RectPair::new(SetExpr::All, SetExpr::All));
        assert!(dichotomy_measure(&[c], &suite).is_err());
        assert!(dichotomy_measure(&[], &TestSuite::new(6, 4).unwrap()).is_err());
    }

    #[test]
    fn lex_flattens() {
        let b = lex_clo(7, 5, 2).unwrap();
        let clauses = flatten(&b.circuit, &b.family).unwrap();
        assert_eq!(clauses.len(), 21);
        assert_eq!(clauses[0].set, vec![0, 1]);
        let suite = TestSuite::new(7, 5).unwrap();
        let r = dichotomy_measure(&clauses, &suite).unwrap();
        assert_eq!((r.a.as_str(), r.b.as_str()), ("0/1", "0/1"));
        assert!(!r.hypothesis && !r.violation);
    }

    #[test]
    fn phase_rows() {
        let r = phase_report(6, &parse_rational("0.1").unwrap()).unwrap();
        let sizes: Vec<_> = r.rows.iter().map(|r| r.size).collect();
        assert_eq!(sizes, vec![1, 46, 36]);
        let locs: Vec<_> = r.rows.iter().map(|r| r.locality.as_str()).collect();
        assert_eq!(locs, vec!["1/1", "16/31", "0/1"]);
        assert!(r.all_ok());
        let csv = r.to_csv();
        assert!(csv.starts_with("construction,n,k,size,locality,regime,verdict"));
        assert!(csv.contains("triangle,6,3,46,16/31,middle,pass,true"));
        assert!(phase_report(6, &ratio(1, 2)).is_err());
    }
}
