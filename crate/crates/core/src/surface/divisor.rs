use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{CalcError, SurfaceConfig};

/// `Σ c_i C_i + k·K + l·L` over a named configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    config: String,
    coefficients: BTreeMap<String, BigRational>,
    k_multiple: i64,
    l_multiple: i64,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Divisor {
    pub fn zero(config: &SurfaceConfig) -> Self {
        Self {
            config: config.name().to_owned(),
            coefficients: BTreeMap::new(),
            k_multiple: 0,
            l_multiple: 0,
        }
    }

    pub fn curve(config: &SurfaceConfig, name: &str) -> Result<Self, CalcError> {
        config.require(name)?;
        Ok(Self::zero(config).plus(name, 1))
    }

    pub fn canonical(config: &SurfaceConfig) -> Self {
        Self::zero(config).with_k(1)
    }

    pub fn l_class(config: &SurfaceConfig) -> Self {
        Self::zero(config).with_l(1)
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k_multiple = k;
        self
    }

    pub fn with_l(mut self, l: i64) -> Self {
        self.l_multiple = l;
        self
    }

    /// Adds `coeff · name`.
    pub fn plus(self, name: &str, coeff: i64) -> Self {
        self.plus_rational(name, int(coeff))
    }

    pub fn plus_rational(mut self, name: &str, coeff: BigRational) -> Self {
        self.add_curve(name, coeff);
        self
    }

    pub fn add_curve(&mut self, name: &str, delta: BigRational) {
        let entry = self
            .coefficients
            .entry(name.to_owned())
            .or_insert_with(BigRational::zero);
        *entry += delta;
        if entry.is_zero() {
            self.coefficients.remove(name);
        }
    }

    pub fn config_name(&self) -> &str {
        &self.config
    }

    pub fn k_multiple(&self) -> i64 {
        self.k_multiple
    }

    pub fn l_multiple(&self) -> i64 {
        self.l_multiple
    }

    pub fn coefficient(&self, name: &str) -> BigRational {
        self.coefficients.get(name).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<String, BigRational> {
        &self.coefficients
    }

    pub fn try_add(&self, other: &Divisor) -> Result<Divisor, CalcError> {
        if self.config != other.config {
            return Err(CalcError::ConfigMismatch {
                expected: self.config.clone(),
                found: other.config.clone(),
            });
        }
        let mut out = self.clone();
        for (n, c) in &other.coefficients {
            out.add_curve(n, c.clone());
        }
        out.k_multiple += other.k_multiple;
        out.l_multiple += other.l_multiple;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Divisor) -> Result<Divisor, CalcError> {
        self.try_add(&other.scaled(&-BigRational::one()))
    }

    /// Scales curve coefficients; `K` and `L` multiples must stay integral.
    pub fn scaled(&self, factor: &BigRational) -> Divisor {
        assert!(
            (self.k_multiple == 0 && self.l_multiple == 0) || factor.is_integer(),
            "K and L multiples are integers"
        );
        let f = factor.to_integer();
        let to_i64 = |v: i64| {
            if v == 0 {
                0
            } else {
                i64::try_from(BigInt::from(v) * &f).expect("multiple fits in i64")
            }
        };
        Divisor {
            config: self.config.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|(n, c)| (n.clone(), c * factor))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            k_multiple: to_i64(self.k_multiple),
            l_multiple: to_i64(self.l_multiple),
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut push = |coeff: BigRational, sym: &str| {
            if coeff.is_zero() {
                return;
            }
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            let body = if mag.is_one() {
                sym.to_owned()
            } else if mag.is_integer() {
                format!("{mag}{sym}")
            } else {
                format!("({mag}){sym}")
            };
            terms.push((neg, body));
        };
        push(int(self.k_multiple), "K");
        push(int(self.l_multiple), "L");
        for (n, c) in &self.coefficients {
            push(c.clone(), n);
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (neg, body)) in terms.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Curve-coordinate expansion of a divisor with `L` unfolded; `K` stays as a
/// separate multiple since it is known only through its pairing.
struct Expanded {
    curves: Vec<BigRational>,
    k: BigRational,
}

fn expand(config: &SurfaceConfig, d: &Divisor) -> Result<Expanded, CalcError> {
    if d.config != config.name() {
        return Err(CalcError::ConfigMismatch {
            expected: config.name().to_owned(),
            found: d.config.clone(),
        });
    }
    let mut curves = vec![BigRational::zero(); config.curves().len()];
    for (name, c) in &d.coefficients {
        curves[config.require(name)?] += c;
    }
    if d.l_multiple != 0 {
        let l = config.l_class().ok_or(CalcError::MissingLClass)?;
        let scale = BigRational::new(BigInt::from(d.l_multiple), BigInt::from(l.denominator));
        for (name, v) in &l.numerators {
            curves[config.require(name)?] += int(*v) * &scale;
        }
    }
    Ok(Expanded {
        curves,
        k: int(d.k_multiple),
    })
}

fn pair_expanded(config: &SurfaceConfig, x: &Expanded, y: &Expanded) -> BigRational {
    let n = x.curves.len();
    let mut total = BigRational::zero();
    for i in 0..n {
        if x.curves[i].is_zero() {
            continue;
        }
        let row: BigRational = (0..n)
            .filter(|&j| !y.curves[j].is_zero())
            .map(|j| int(config.pairing_by_index(i, j)) * &y.curves[j])
            .sum();
        total += &x.curves[i] * row;
    }
    let k_dot = |v: &Expanded| -> BigRational {
        (0..n)
            .filter(|&i| !v.curves[i].is_zero())
            .map(|i| int(config.canonical_by_index(i)) * &v.curves[i])
            .sum()
    };
    total += &x.k * k_dot(y);
    total += &y.k * k_dot(x);
    total += &x.k * &y.k * int(SurfaceConfig::CANONICAL_SQUARE);
    total
}

/// Replaces the formal fiber class by the component sum of the reference fiber.
fn unfold_fiber(config: &SurfaceConfig, x: &Expanded) -> Option<Expanded> {
    let f_idx = config.index_of(&config.fiber_class().name)?;
    let fiber = config.reference_fiber()?;
    let mut curves = x.curves.clone();
    let f = std::mem::take(&mut curves[f_idx]);
    for comp in &fiber.components {
        curves[config.index_of(comp)?] += &f;
    }
    Some(Expanded { curves, k: x.k.clone() })
}

/// Exact intersection number `d1 · d2`.
///
/// `L` is expanded through the configuration's attached class. The fiber
/// class is evaluated both through its own table row and as the component
/// sum of the reference fiber; disagreement is reported as
/// [`CalcError::FiberMismatch`].
pub fn intersect(config: &SurfaceConfig, d1: &Divisor, d2: &Divisor) -> Result<BigRational, CalcError> {
    let x = expand(config, d1)?;
    let y = expand(config, d2)?;
    let formal = pair_expanded(config, &x, &y);
    let f_name = &config.fiber_class().name;
    let uses_fiber = |e: &Expanded| config.index_of(f_name).is_some_and(|i| !e.curves[i].is_zero());
    if !(uses_fiber(&x) || uses_fiber(&y)) {
        return Ok(formal);
    }
    let (Some(xu), Some(yu)) = (unfold_fiber(config, &x), unfold_fiber(config, &y)) else {
        return Err(CalcError::NoReferenceFiber);
    };
    let unfolded = pair_expanded(config, &xu, &yu);
    if unfolded != formal {
        return Err(CalcError::FiberMismatch {
            left: d1.to_string(),
            right: d2.to_string(),
            formal: formal.to_string(),
            components: unfolded.to_string(),
        });
    }
    Ok(unfolded)
}
