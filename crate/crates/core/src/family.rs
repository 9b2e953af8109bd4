//! Finite families of polynomial functions on `[0,1)`.
//!
//! Polynomials are generic over the coefficient type so the same Horner evaluation
//! runs over exact rationals and over `f64` for cross-checks.

use num_traits::Num;
use serde_json::{json, Value};

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};

/// Polynomial with coefficients listed constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![T::zero()] }
    }

    /// `f(x) = x`.
    pub fn identity() -> Self {
        Polynomial {
            coeffs: vec![T::zero(), T::one()],
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Polynomial<U> {
        Polynomial {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Ordered, nonempty list `f_1, ..., f_m`. Indices are 1-based because the index feeds
/// the triple placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionFamily<T> {
    functions: Vec<Polynomial<T>>,
}

impl<T: Num + Clone + PartialOrd + std::fmt::Display> FunctionFamily<T> {
    pub fn new(functions: Vec<Polynomial<T>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::parse("functions", "family must contain at least one function"));
        }
        Ok(FunctionFamily { functions })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[Polynomial<T>] {
        &self.functions
    }

    pub fn get(&self, i: usize) -> Result<&Polynomial<T>> {
        i.checked_sub(1)
            .and_then(|k| self.functions.get(k))
            .ok_or(Error::FamilyIndex {
                index: i,
                len: self.functions.len(),
            })
    }

    /// `f_i(x)` for `x` in `[0,1)`.
    pub fn eval(&self, i: usize, x: &T) -> Result<T> {
        let f = self.get(i)?;
        if *x < T::zero() || *x >= T::one() {
            return Err(Error::Domain { value: x.to_string() });
        }
        Ok(f.eval(x))
    }

    pub fn is_constant(&self) -> bool {
        self.functions.iter().all(Polynomial::is_constant)
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> FunctionFamily<U> {
        FunctionFamily {
            functions: self.functions.iter().map(|p| p.map(&f)).collect(),
        }
    }
}

impl FunctionFamily<Rational> {
    /// The family `{0}`.
    pub fn zero() -> Self {
        FunctionFamily {
            functions: vec![Polynomial::zero()],
        }
    }

    pub fn from_coeff_strs(functions: &[&[&str]]) -> Result<Self> {
        let functions = functions
            .iter()
            .map(|cs| cs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>())
            .map(|r| r.map(Polynomial::new))
            .collect::<Result<Vec<_>>>()?;
        FunctionFamily::new(functions)
    }

    /// Parses `{"functions": [{"coeffs": ["p/q", ...]}, ...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        let list = doc
            .get("functions")
            .ok_or_else(|| Error::parse("$", "missing key \"functions\""))?
            .as_array()
            .ok_or_else(|| Error::parse("$.functions", "expected an array"))?;
        if list.is_empty() {
            return Err(Error::parse("$.functions", "family must contain at least one function"));
        }
        let mut functions = Vec::with_capacity(list.len());
        for (k, entry) in list.iter().enumerate() {
            let at = format!("$.functions[{k}].coeffs");
            let coeffs = entry
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(&at, "expected an array of fraction strings"))?;
            if coeffs.is_empty() {
                return Err(Error::parse(&at, "coefficient list is empty"));
            }
            let parsed = coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let s = c
                        .as_str()
                        .ok_or_else(|| Error::parse(format!("{at}[{n}]"), "expected a string"))?;
                    parse_rational(s).map_err(|e| match e {
                        Error::Parse { message, .. } => Error::parse(format!("{at}[{n}]"), message),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            functions.push(Polynomial::new(parsed));
        }
        FunctionFamily::new(functions)
    }

    pub fn to_json(&self) -> String {
        let functions: Vec<Value> = self
            .functions
            .iter()
            .map(|p| json!({ "coeffs": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>() }))
            .collect();
        json!({ "functions": functions }).to_string()
    }

    pub fn to_f64(&self) -> FunctionFamily<f64> {
        self.map(crate::arith::rational_to_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        let fam = FunctionFamily::from_coeff_strs(&[&["0"], &["0", "1"], &["1/3", "0", "2"]]).unwrap();
        assert_eq!(fam.eval(1, &q("5/7")).unwrap(), q("0"));
        assert_eq!(fam.eval(2, &q("3/8")).unwrap(), q("3/8"));
        assert_eq!(fam.eval(3, &q("1/2")).unwrap(), q("5/6"));
    }

    #[test]
    fn eval_errors() {
        let fam = FunctionFamily::zero();
        assert_eq!(fam.eval(2, &q("0")), Err(Error::FamilyIndex { index: 2, len: 1 }));
        assert_eq!(fam.eval(0, &q("0")), Err(Error::FamilyIndex { index: 0, len: 1 }));
        assert!(matches!(fam.eval(1, &q("1")), Err(Error::Domain { .. })));
        assert!(matches!(fam.eval(1, &q("-1/2")), Err(Error::Domain { .. })));
    }

    #[test]
    fn degree_and_constancy() {
        let p = Polynomial::new(vec![q("1"), q("0"), q("2"), q("0")]);
        assert_eq!(p.degree(), Some(2));
        assert!(!p.is_constant());
        assert_eq!(Polynomial::<Rational>::zero().degree(), None);
        assert!(Polynomial::new(vec![q("5"), q("0")]).is_constant());
    }

    #[test]
    fn parse_examples() {
        let fam = FunctionFamily::parse(r#"{"functions":[{"coeffs":["0"]}]}"#).unwrap();
        assert_eq!(fam, FunctionFamily::zero());

        let text = r#"{"functions":[{"coeffs":["0","1"]},{"coeffs":["0","-1/2"]}]}"#;
        let fam = FunctionFamily::parse(text).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.eval(2, &q("1/2")).unwrap(), q("-1/4"));
        assert_eq!(FunctionFamily::parse(&fam.to_json()).unwrap(), fam);
    }

    #[test]
    fn parse_errors_carry_position() {
        let cases = [
            (r#"{"functions":[]}"#, "$.functions"),
            (r#"{"functions":[{"coeffs":"1"}]}"#, "$.functions[0].coeffs"),
            (r#"{"functions":[{"coeffs":["0"]},{"coeffs":["1/x"]}]}"#, "$.functions[1].coeffs[0]"),
            (r#"{"functions":[{"coeffs":[1]}]}"#, "$.functions[0].coeffs[0]"),
            (r#"{"funcs":[]}"#, "$"),
        ];
        for (text, want) in cases {
            match FunctionFamily::parse(text) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(FunctionFamily::parse("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn f64_family_tracks_exact_values() {
        let fam = FunctionFamily::from_coeff_strs(&[&["1/3", "0", "2"]]).unwrap();
        let approx = fam.to_f64();
        assert!((approx.eval(1, &0.5).unwrap() - 5.0 / 6.0).abs() < 1e-15);
    }
}
