//! A small Mamdani inference engine.
//!
//! Operators are fixed to the classical set: AND = min, OR = max, NOT = 1 − μ,
//! min implication, max aggregation and centroid defuzzification over an
//! evenly sampled output universe.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample count used for the output universe when none is given.
pub const DEFAULT_RESOLUTION: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MembershipFunction {
    Gaussian { center: f64, sigma: f64 },
    Triangular { a: f64, b: f64, c: f64 },
}

impl MembershipFunction {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        let mf = MembershipFunction::Gaussian { center, sigma };
        mf.validate()?;
        Ok(mf)
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        let mf = MembershipFunction::Triangular { a, b, c };
        mf.validate()?;
        Ok(mf)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => {
                if !center.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
                    return Err(Error::Config(format!(
                        "gaussian needs a finite center and sigma > 0, got center={center} sigma={sigma}"
                    )));
                }
            }
            MembershipFunction::Triangular { a, b, c } => {
                if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c || a == c {
                    return Err(Error::Config(format!(
                        "triangle needs finite a <= b <= c with a < c, got ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership degree of `x`, always in [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => {
                let d = x - center;
                (-(d * d) / (2.0 * sigma * sigma)).exp()
            }
            MembershipFunction::Triangular { a, b, c } => {
                if x == b {
                    1.0
                } else if x < b {
                    if x <= a {
                        0.0
                    } else {
                        (x - a) / (b - a)
                    }
                } else if x >= c {
                    0.0
                } else {
                    (c - x) / (c - b)
                }
            }
        }
    }
}

/// Closed interval a linguistic variable lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Universe {
    lo: f64,
    hi: f64,
}

impl Universe {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Config(format!(
                "universe needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Universe { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

impl TryFrom<[f64; 2]> for Universe {
    type Error = Error;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self> {
        Universe::new(lo, hi)
    }
}

impl From<Universe> for [f64; 2] {
    fn from(u: Universe) -> Self {
        [u.lo, u.hi]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    #[serde(flatten)]
    pub mf: MembershipFunction,
}

/// A named linguistic variable with its universe and terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyVariable {
    name: String,
    universe: Universe,
    terms: Vec<Term>,
}

impl FuzzyVariable {
    pub fn new(name: impl Into<String>, universe: Universe) -> Self {
        FuzzyVariable {
            name: name.into(),
            universe,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, name: impl Into<String>, mf: MembershipFunction) -> Result<Self> {
        let name = name.into();
        mf.validate()?;
        if self.term_index(&name).is_some() {
            return Err(Error::Config(format!(
                "variable {} already has a term named {name}",
                self.name
            )));
        }
        self.terms.push(Term { name, mf });
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&MembershipFunction> {
        self.terms.iter().find(|t| t.name == name).map(|t| &t.mf)
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == name)
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Config("variable name is empty".into()));
        }
        if self.terms.is_empty() {
            return Err(Error::Config(format!("variable {} has no terms", self.name)));
        }
        for (i, term) in self.terms.iter().enumerate() {
            term.mf.validate()?;
            if self.terms[..i].iter().any(|t| t.name == term.name) {
                return Err(Error::Config(format!(
                    "variable {} has duplicate term {}",
                    self.name, term.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    And,
    Or,
}

/// One `variable is [not] term` clause of a rule antecedent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Clause {
    pub variable: String,
    pub term: String,
    #[serde(default)]
    pub negated: bool,
}

impl Clause {
    pub fn is(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Clause {
            variable: variable.into(),
            term: term.into(),
            negated: false,
        }
    }

    pub fn is_not(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Clause {
            negated: true,
            ..Clause::is(variable, term)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyRule {
    pub antecedent: Vec<Clause>,
    pub connective: Connective,
    /// Term of the output variable.
    pub consequent: String,
}

impl FuzzyRule {
    pub fn new(connective: Connective, antecedent: Vec<Clause>, consequent: impl Into<String>) -> Self {
        FuzzyRule {
            antecedent,
            connective,
            consequent: consequent.into(),
        }
    }
}

/// Crisp result of an inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisOutput {
    pub value: f64,
    /// No rule fired; `value` is the output universe midpoint.
    pub indeterminate: bool,
}

#[derive(Debug, Clone)]
struct CompiledClause {
    input: usize,
    term: usize,
    negated: bool,
}

#[derive(Debug, Clone)]
struct CompiledRule {
    clauses: Vec<CompiledClause>,
    connective: Connective,
    consequent: usize,
}

/// Mamdani inference system. Immutable once built, so it can be shared
/// freely between threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FisDef", into = "FisDef")]
pub struct MamdaniFis {
    inputs: Vec<FuzzyVariable>,
    output: FuzzyVariable,
    rules: Vec<FuzzyRule>,
    resolution: usize,
    compiled: Vec<CompiledRule>,
    samples: Vec<f64>,
    // consequent membership at every sample, one table per output term
    tables: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FisDef {
    resolution: usize,
    inputs: Vec<FuzzyVariable>,
    output: FuzzyVariable,
    rules: Vec<FuzzyRule>,
}

impl TryFrom<FisDef> for MamdaniFis {
    type Error = Error;

    fn try_from(def: FisDef) -> Result<Self> {
        MamdaniFis::new(def.inputs, def.output, def.rules, def.resolution)
    }
}

impl From<MamdaniFis> for FisDef {
    fn from(fis: MamdaniFis) -> Self {
        FisDef {
            resolution: fis.resolution,
            inputs: fis.inputs,
            output: fis.output,
            rules: fis.rules,
        }
    }
}

impl PartialEq for MamdaniFis {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs
            && self.output == other.output
            && self.rules == other.rules
            && self.resolution == other.resolution
    }
}

// Block size for the aggregation loop; keeps the aggregate on the stack.
const BLOCK: usize = 64;
const LANES: usize = 8;

impl MamdaniFis {
    pub fn new(
        inputs: Vec<FuzzyVariable>,
        output: FuzzyVariable,
        rules: Vec<FuzzyRule>,
        resolution: usize,
    ) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Config(format!("resolution must be >= 2, got {resolution}")));
        }
        if inputs.is_empty() {
            return Err(Error::Config("fis has no input variables".into()));
        }
        if rules.is_empty() {
            return Err(Error::Config("fis has no rules".into()));
        }
        for (i, var) in inputs.iter().enumerate() {
            var.validate()?;
            if inputs[..i].iter().any(|v| v.name == var.name) {
                return Err(Error::Config(format!("duplicate input variable {}", var.name)));
            }
        }
        output.validate()?;

        let compiled = rules
            .iter()
            .map(|rule| compile_rule(&inputs, &output, rule))
            .collect::<Result<Vec<_>>>()?;

        let samples = output.universe.linspace(resolution);
        let tables = output
            .terms
            .iter()
            .map(|t| samples.iter().map(|&y| t.mf.eval(y)).collect())
            .collect();

        Ok(MamdaniFis {
            inputs,
            output,
            rules,
            resolution,
            compiled,
            samples,
            tables,
        })
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn input(&self, name: &str) -> Option<&FuzzyVariable> {
        self.inputs.iter().find(|v| v.name == name)
    }

    /// Firing strength of `rule` for named crisp inputs. Inputs are clamped
    /// to their universes first.
    pub fn rule_activation(&self, rule: &FuzzyRule, inputs: &HashMap<String, f64>) -> Result<f64> {
        let compiled = compile_rule(&self.inputs, &self.output, rule)?;
        let crisp = self.ordered_inputs(inputs, Some(&compiled))?;
        Ok(self.activation(&compiled, &crisp))
    }

    /// Runs inference on named crisp inputs.
    pub fn evaluate_named(&self, inputs: &HashMap<String, f64>) -> Result<FisOutput> {
        let crisp = self.ordered_inputs(inputs, None)?;
        Ok(self.evaluate_unchecked(&crisp))
    }

    /// Runs inference on crisp inputs given in input-variable order.
    pub fn evaluate(&self, crisp: &[f64]) -> Result<FisOutput> {
        if crisp.len() != self.inputs.len() {
            return Err(Error::Config(format!(
                "expected {} inputs, got {}",
                self.inputs.len(),
                crisp.len()
            )));
        }
        Ok(self.evaluate_unchecked(crisp))
    }

    /// Activations of every rule, in rule order.
    pub fn activations(&self, crisp: &[f64]) -> Result<Vec<f64>> {
        if crisp.len() != self.inputs.len() {
            return Err(Error::Config(format!(
                "expected {} inputs, got {}",
                self.inputs.len(),
                crisp.len()
            )));
        }
        Ok(self.compiled.iter().map(|r| self.activation(r, crisp)).collect())
    }

    /// Aggregated output curve `(y, A(y))` for the given rule activations.
    pub fn aggregate(&self, activations: &[f64]) -> Vec<(f64, f64)> {
        assert_eq!(activations.len(), self.compiled.len(), "one activation per rule");
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let a = self
                    .compiled
                    .iter()
                    .zip(activations)
                    .map(|(r, &act)| act.min(self.tables[r.consequent][i]))
                    .fold(0.0, f64::max);
                (y, a)
            })
            .collect()
    }

    fn ordered_inputs(
        &self,
        inputs: &HashMap<String, f64>,
        only: Option<&CompiledRule>,
    ) -> Result<Vec<f64>> {
        self.inputs
            .iter()
            .enumerate()
            .map(|(i, var)| match inputs.get(&var.name) {
                Some(&x) if x.is_nan() => {
                    Err(Error::Config(format!("input {} is NaN", var.name)))
                }
                Some(&x) => Ok(x),
                None => {
                    let needed = match only {
                        Some(rule) => rule.clauses.iter().any(|c| c.input == i),
                        None => true,
                    };
                    if needed {
                        Err(Error::Config(format!("missing value for input {}", var.name)))
                    } else {
                        Ok(var.universe.midpoint())
                    }
                }
            })
            .collect()
    }

    fn activation(&self, rule: &CompiledRule, crisp: &[f64]) -> f64 {
        let degrees = rule.clauses.iter().map(|c| {
            let var = &self.inputs[c.input];
            let mu = var.terms[c.term].mf.eval(var.universe.clamp(crisp[c.input]));
            if c.negated {
                1.0 - mu
            } else {
                mu
            }
        });
        match rule.connective {
            Connective::And => degrees.fold(1.0, f64::min),
            Connective::Or => degrees.fold(0.0, f64::max),
        }
    }

    fn evaluate_unchecked(&self, crisp: &[f64]) -> FisOutput {
        let n = self.samples.len();
        let mut num = [0.0f64; LANES];
        let mut den = [0.0f64; LANES];
        let mut agg = [0.0f64; BLOCK];

        let mut fired: Vec<(usize, f64)> = Vec::with_capacity(self.compiled.len());
        for rule in &self.compiled {
            let act = self.activation(rule, crisp);
            if act > 0.0 {
                fired.push((rule.consequent, act));
            }
        }

        if !fired.is_empty() {
            let mut start = 0;
            while start < n {
                let len = BLOCK.min(n - start);
                let agg = &mut agg[..len];
                agg.fill(0.0);
                for &(term, act) in &fired {
                    let table = &self.tables[term][start..start + len];
                    for (a, &t) in agg.iter_mut().zip(table) {
                        let clipped = if act < t { act } else { t };
                        if clipped > *a {
                            *a = clipped;
                        }
                    }
                }
                let ys = &self.samples[start..start + len];
                for (j, (&a, &y)) in agg.iter().zip(ys).enumerate() {
                    num[j % LANES] += y * a;
                    den[j % LANES] += a;
                }
                start += len;
            }
        }

        let num: f64 = num.iter().sum();
        let den: f64 = den.iter().sum();
        if den > 0.0 {
            FisOutput {
                value: self.output.universe.clamp(num / den),
                indeterminate: false,
            }
        } else {
            FisOutput {
                value: self.output.universe.midpoint(),
                indeterminate: true,
            }
        }
    }
}

fn compile_rule(
    inputs: &[FuzzyVariable],
    output: &FuzzyVariable,
    rule: &FuzzyRule,
) -> Result<CompiledRule> {
    if rule.antecedent.is_empty() {
        return Err(Error::Config("rule has an empty antecedent".into()));
    }
    let clauses = rule
        .antecedent
        .iter()
        .map(|clause| {
            let input = inputs
                .iter()
                .position(|v| v.name == clause.variable)
                .ok_or_else(|| Error::Config(format!("unknown variable {}", clause.variable)))?;
            let term = inputs[input].term_index(&clause.term).ok_or_else(|| {
                Error::Config(format!("variable {} has no term {}", clause.variable, clause.term))
            })?;
            Ok(CompiledClause {
                input,
                term,
                negated: clause.negated,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let consequent = output.term_index(&rule.consequent).ok_or_else(|| {
        Error::Config(format!("output {} has no term {}", output.name, rule.consequent))
    })?;
    Ok(CompiledRule {
        clauses,
        connective: rule.connective,
        consequent,
    })
}

/// Centroid `Σ y·A(y) / Σ A(y)` of a sampled curve; `None` when the curve has
/// no mass.
pub fn defuzz_centroid(samples: &[(f64, f64)]) -> Option<f64> {
    let (num, den) = samples
        .iter()
        .fold((0.0, 0.0), |(num, den), &(y, a)| (num + y * a, den + a));
    (den > 0.0).then(|| num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> Universe {
        Universe::new(0.0, 1.0).unwrap()
    }

    fn edge_like(sigma: f64) -> MamdaniFis {
        let grad = Universe::new(-1.0, 1.0).unwrap();
        let ix = FuzzyVariable::new("Ix", grad)
            .with_term("zero", MembershipFunction::gaussian(0.0, sigma).unwrap())
            .unwrap();
        let iy = FuzzyVariable::new("Iy", grad)
            .with_term("zero", MembershipFunction::gaussian(0.0, sigma).unwrap())
            .unwrap();
        let out = FuzzyVariable::new("Iout", unit())
            .with_term("white", MembershipFunction::triangular(0.1, 1.0, 1.0).unwrap())
            .unwrap()
            .with_term("black", MembershipFunction::triangular(0.0, 0.0, 0.7).unwrap())
            .unwrap();
        let rules = vec![
            FuzzyRule::new(
                Connective::And,
                vec![Clause::is("Ix", "zero"), Clause::is("Iy", "zero")],
                "white",
            ),
            FuzzyRule::new(
                Connective::Or,
                vec![Clause::is_not("Ix", "zero"), Clause::is_not("Iy", "zero")],
                "black",
            ),
        ];
        MamdaniFis::new(vec![ix, iy], out, rules, DEFAULT_RESOLUTION).unwrap()
    }

    fn single_rule(consequent: MembershipFunction, resolution: usize) -> MamdaniFis {
        let x = FuzzyVariable::new("x", unit())
            .with_term("any", MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap())
            .unwrap();
        let y = FuzzyVariable::new("y", unit()).with_term("out", consequent).unwrap();
        let rule = FuzzyRule::new(Connective::And, vec![Clause::is("x", "any")], "out");
        MamdaniFis::new(vec![x], y, vec![rule], resolution).unwrap()
    }

    fn named(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn membership_examples() {
        let g = MembershipFunction::gaussian(0.0, 0.1).unwrap();
        assert_eq!(g.eval(0.0), 1.0);
        assert!((g.eval(0.1) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g.eval(0.1) - 0.60653).abs() < 1e-5);

        let t = MembershipFunction::triangular(0.0, 0.25, 0.5).unwrap();
        assert_eq!(t.eval(0.375), 0.5);
        assert_eq!(t.eval(0.0), 0.0);
        assert_eq!(t.eval(0.5), 0.0);

        let shoulder = MembershipFunction::triangular(0.1, 1.0, 1.0).unwrap();
        assert_eq!(shoulder.eval(1.0), 1.0);
        assert_eq!(shoulder.eval(0.1), 0.0);
        let left = MembershipFunction::triangular(0.0, 0.0, 0.7).unwrap();
        assert_eq!(left.eval(0.0), 1.0);
        assert_eq!(left.eval(-0.1), 0.0);
    }

    #[test]
    fn malformed_membership_rejected() {
        assert!(MembershipFunction::gaussian(0.0, 0.0).is_err());
        assert!(MembershipFunction::gaussian(0.0, -1.0).is_err());
        assert!(MembershipFunction::triangular(0.5, 0.2, 1.0).is_err());
        assert!(MembershipFunction::triangular(0.0, 1.0, 0.5).is_err());
        assert!(MembershipFunction::triangular(0.3, 0.3, 0.3).is_err());
        assert!(Universe::new(1.0, 1.0).is_err());
    }

    #[test]
    fn rule_activation_examples() {
        let fis = edge_like(0.1);
        let white = &fis.rules()[0];
        let black = &fis.rules()[1];
        let zero = named(&[("Ix", 0.0), ("Iy", 0.0)]);
        assert_eq!(fis.rule_activation(white, &zero).unwrap(), 1.0);
        assert_eq!(fis.rule_activation(black, &zero).unwrap(), 0.0);

        let act = fis
            .rule_activation(black, &named(&[("Ix", 0.1), ("Iy", 0.0)]))
            .unwrap();
        assert!((act - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
        assert!((act - 0.39347).abs() < 1e-5);
    }

    #[test]
    fn rule_activation_clamps_to_universe() {
        let fis = edge_like(0.1);
        let far = named(&[("Ix", 5.0), ("Iy", 0.0)]);
        let edge = named(&[("Ix", 1.0), ("Iy", 0.0)]);
        let r = &fis.rules()[1];
        assert_eq!(
            fis.rule_activation(r, &far).unwrap(),
            fis.rule_activation(r, &edge).unwrap()
        );
    }

    #[test]
    fn unknown_references_are_config_errors() {
        let fis = edge_like(0.1);
        let bad_var = FuzzyRule::new(Connective::And, vec![Clause::is("Iz", "zero")], "white");
        let bad_term = FuzzyRule::new(Connective::And, vec![Clause::is("Ix", "big")], "white");
        let bad_out = FuzzyRule::new(Connective::And, vec![Clause::is("Ix", "zero")], "grey");
        let inputs = named(&[("Ix", 0.0), ("Iy", 0.0)]);
        for rule in [bad_var, bad_term, bad_out] {
            assert!(matches!(fis.rule_activation(&rule, &inputs), Err(Error::Config(_))));
        }
        assert!(fis.evaluate_named(&named(&[("Ix", 0.0)])).is_err());
        assert!(fis.evaluate(&[0.0]).is_err());
    }

    #[test]
    fn construction_checks() {
        let x = FuzzyVariable::new("x", unit())
            .with_term("a", MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap())
            .unwrap();
        assert!(x
            .clone()
            .with_term("a", MembershipFunction::gaussian(0.0, 1.0).unwrap())
            .is_err());
        let rule = FuzzyRule::new(Connective::And, vec![Clause::is("x", "a")], "a");
        assert!(MamdaniFis::new(vec![x.clone()], x.clone(), vec![rule.clone()], 1).is_err());
        assert!(MamdaniFis::new(vec![x.clone()], x.clone(), vec![], 11).is_err());
        assert!(MamdaniFis::new(vec![x.clone(), x.clone()], x.clone(), vec![rule.clone()], 11).is_err());
        let empty = FuzzyRule::new(Connective::And, vec![], "a");
        assert!(MamdaniFis::new(vec![x.clone()], x, vec![empty], 11).is_err());
    }

    #[test]
    fn centroid_of_full_triangles() {
        let fis = single_rule(MembershipFunction::triangular(0.1, 1.0, 1.0).unwrap(), 1001);
        let out = fis.evaluate(&[0.5]).unwrap();
        assert!(!out.indeterminate);
        assert!((out.value - 0.7).abs() < 1e-3, "{}", out.value);

        let fis = single_rule(MembershipFunction::triangular(0.0, 0.0, 0.7).unwrap(), 1001);
        let out = fis.evaluate(&[0.5]).unwrap();
        assert!((out.value - 0.7 / 3.0).abs() < 1e-3, "{}", out.value);
    }

    #[test]
    fn symmetric_pair_defuzzifies_to_midpoint() {
        let x = FuzzyVariable::new("x", unit())
            .with_term("any", MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap())
            .unwrap();
        let y = FuzzyVariable::new("y", unit())
            .with_term("low", MembershipFunction::triangular(0.0, 0.2, 0.4).unwrap())
            .unwrap()
            .with_term("high", MembershipFunction::triangular(0.6, 0.8, 1.0).unwrap())
            .unwrap();
        let rules = vec![
            FuzzyRule::new(Connective::And, vec![Clause::is("x", "any")], "low"),
            FuzzyRule::new(Connective::And, vec![Clause::is("x", "any")], "high"),
        ];
        let fis = MamdaniFis::new(vec![x], y, rules, 1001).unwrap();
        let out = fis.evaluate(&[0.3]).unwrap();
        assert!((out.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn no_firing_is_indeterminate() {
        let fis = single_rule(MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap(), 101);
        // x = 0 sits at the foot of the only antecedent term
        let out = fis.evaluate(&[0.0]).unwrap();
        assert!(out.indeterminate);
        assert_eq!(out.value, 0.5);
    }

    #[test]
    fn defuzz_examples() {
        let uniform: Vec<_> = unit().linspace(11).into_iter().map(|y| (y, 1.0)).collect();
        assert!((defuzz_centroid(&uniform).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(defuzz_centroid(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]), Some(0.5));

        let tri = MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap();
        let clipped: Vec<_> = unit()
            .linspace(1001)
            .into_iter()
            .map(|y| (y, tri.eval(y).min(0.5)))
            .collect();
        assert!((defuzz_centroid(&clipped).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(defuzz_centroid(&[(0.0, 0.0), (1.0, 0.0)]), None);
    }

    #[test]
    fn fast_path_matches_aggregate_curve() {
        let fis = edge_like(0.3);
        for &(ix, iy) in &[(0.0, 0.0), (0.05, -0.2), (0.4, 0.1), (1.0, 1.0)] {
            let acts = fis.activations(&[ix, iy]).unwrap();
            let reference = defuzz_centroid(&fis.aggregate(&acts)).unwrap();
            let fast = fis.evaluate(&[ix, iy]).unwrap().value;
            assert!((reference - fast).abs() < 1e-12);
        }
    }

    #[test]
    fn serde_round_trip_rebuilds_tables() {
        let fis = edge_like(0.1);
        let text = toml::to_string(&fis).unwrap();
        let back: MamdaniFis = toml::from_str(&text).unwrap();
        assert_eq!(fis, back);
        assert_eq!(
            fis.evaluate(&[0.2, 0.0]).unwrap(),
            back.evaluate(&[0.2, 0.0]).unwrap()
        );
    }

    fn arb_mf() -> impl Strategy<Value = MembershipFunction> {
        prop_oneof![
            (-10.0..10.0f64, 0.01..5.0f64)
                .prop_map(|(c, s)| MembershipFunction::Gaussian { center: c, sigma: s }),
            (-10.0..10.0f64, 0.0..5.0f64, 0.0..5.0f64, prop::bool::ANY).prop_map(|(a, l, r, shoulder)| {
                let (l, r) = if l + r == 0.0 { (0.5, r) } else { (l, r) };
                let b = a + if shoulder { 0.0 } else { l };
                MembershipFunction::Triangular { a, b, c: b + r }
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn membership_in_unit_interval(mf in arb_mf(), x in -50.0..50.0f64) {
            let mu = mf.eval(x);
            prop_assert!((0.0..=1.0).contains(&mu));
        }

        #[test]
        fn gaussian_symmetric_and_decreasing(c in -5.0..5.0f64, s in 0.05..3.0f64, d in 0.0..3.0f64, e in 0.001..1.0f64) {
            let g = MembershipFunction::gaussian(c, s).unwrap();
            prop_assert_eq!(g.eval(c), 1.0);
            prop_assert!((g.eval(c + d) - g.eval(c - d)).abs() < 1e-12);
            let (near, far) = (g.eval(c + d), g.eval(c + d + e));
            prop_assert!(far <= near);
            if near > 1e-300 && d > 0.0 { prop_assert!(far < near); }
        }

        #[test]
        fn triangle_peak_is_one(mf in arb_mf()) {
            if let MembershipFunction::Triangular { b, .. } = mf {
                prop_assert_eq!(mf.eval(b), 1.0);
            }
        }

        #[test]
        fn operator_identities(d in 0.0..=1.0f64) {
            prop_assert_eq!(d.min(d), d);
            prop_assert_eq!(d.max(d), d);
            prop_assert!((1.0 - (1.0 - d) - d).abs() < 1e-15);
        }

        #[test]
        fn centroid_within_universe(ix in -2.0..2.0f64, iy in -2.0..2.0f64, sigma in 0.05..0.5f64) {
            let fis = edge_like(sigma);
            let out = fis.evaluate(&[ix, iy]).unwrap();
            prop_assert!((0.0..=1.0).contains(&out.value));
        }

        #[test]
        fn aggregation_is_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64, bump in 0.0..=1.0f64, which in 0usize..2) {
            let fis = edge_like(0.1);
            let base = [a, b];
            let mut raised = base;
            raised[which] = (raised[which] + bump).min(1.0);
            for (lo, hi) in fis.aggregate(&base).iter().zip(fis.aggregate(&raised)) {
                prop_assert!(hi.1 >= lo.1);
            }
        }

        #[test]
        fn evaluation_is_deterministic(ix in -1.0..1.0f64, iy in -1.0..1.0f64) {
            let fis = edge_like(0.3);
            let first = fis.evaluate(&[ix, iy]).unwrap();
            let second = fis.evaluate(&[ix, iy]).unwrap();
            prop_assert_eq!(first.value.to_bits(), second.value.to_bits());
        }

        #[test]
        fn resolution_convergence(a in 0.0..0.9f64, l in 0.05..0.5f64, r in 0.05..0.5f64) {
            let b = (a + l).min(1.0);
            let c = (b + r).min(1.0);
            prop_assume!(c > a);
            let mf = MembershipFunction::triangular(a, b, c).unwrap();
            let coarse = single_rule(mf, 1001).evaluate(&[0.5]).unwrap().value;
            let fine = single_rule(mf, 10001).evaluate(&[0.5]).unwrap().value;
            prop_assert!((coarse - fine).abs() < 1e-3);
        }
    }
}
