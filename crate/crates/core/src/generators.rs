//! Separable Bregman generators and their canonical embeddings.
//!
//! A generator is a strictly convex scalar function `φ` on an open interval
//! `J`. It induces the diagonal metric `φ''(x_i) δ_ij` on `J^K`, whose
//! geodesic distance is the Euclidean distance after the coordinatewise
//! embedding `h = ∫ √φ''`. Every built-in generator carries `h` and its
//! inverse `H` in closed form with the integration constant fixed to zero,
//! together with the pieces of its Legendre conjugate.
//!
//! | name        | φ(x)     | J        | h(x)          | h(J)     |
//! |-------------|----------|----------|---------------|----------|
//! | `euclidean` | x²/2     | ℝ        | x             | ℝ        |
//! | `exp`       | eˣ       | ℝ        | 2e^{x/2}      | (0, ∞)   |
//! | `negexp`    | e^{−x}   | ℝ        | −2e^{−x/2}    | (−∞, 0)  |
//! | `shannon`   | x ln x   | (0, ∞)   | 2√x           | (0, ∞)   |
//! | `burg`      | −ln x    | (0, ∞)   | ln x          | ℝ        |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, Space};

/// A scalar function shared between clones of a generator.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn scalar(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// An open interval `(lo, hi)`; either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    pub const NEGATIVE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::invalid(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    /// Open-interval membership. NaN is never contained.
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Membership in the closure `[lo, hi]`, restricted to finite values.
    #[inline]
    pub fn closure_contains(&self, x: f64) -> bool {
        x.is_finite() && self.lo <= x && x <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The five built-in generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Euclidean,
    Exp,
    NegExp,
    Shannon,
    Burg,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Euclidean,
        Builtin::Exp,
        Builtin::NegExp,
        Builtin::Shannon,
        Builtin::Burg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Euclidean => "euclidean",
            Builtin::Exp => "exp",
            Builtin::NegExp => "negexp",
            Builtin::Shannon => "shannon",
            Builtin::Burg => "burg",
        }
    }

    /// Short label for plots and tables, written as the embedding
    /// up to a positive factor (e.g. `sqrt(x)` for shannon).
    pub fn h_label(self) -> &'static str {
        match self {
            Builtin::Euclidean => "h(x) = x",
            Builtin::Exp => "h(x) = exp(0.5x)",
            Builtin::NegExp => "h(x) = exp(-0.5x)",
            Builtin::Shannon => "h(x) = sqrt(x)",
            Builtin::Burg => "h(x) = ln(x)",
        }
    }

    pub fn generator(self) -> Generator {
        match self {
            Builtin::Euclidean => euclidean(),
            Builtin::Exp => exp(),
            Builtin::NegExp => negexp(),
            Builtin::Shannon => shannon(),
            Builtin::Burg => burg(),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown generator `{s}` (expected one of: euclidean, exp, negexp, shannon, burg)"
                ))
            })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks up a built-in generator by name.
pub fn make_generator(name: &str) -> Result<Generator> {
    Ok(name.parse::<Builtin>()?.generator())
}

/// Closed-form pieces of the Legendre conjugate `φ*(y) = sup_x { yx − φ(x) }`.
///
/// The dual coordinate of `x` is `y = φ'(x)`, and `φ*' = (φ')⁻¹`.
#[derive(Clone)]
pub struct ConjugatePieces {
    pub phi_star: ScalarFn,
    pub phi_star_prime: ScalarFn,
    pub phi_star_double_prime: ScalarFn,
    /// Antiderivative of `√φ*''`, integration constant fixed so that
    /// `h*(φ'(x)) = h(x)` for the built-ins.
    pub h_star: ScalarFn,
    /// `φ'(J)`, the domain of `φ*`.
    pub dual_domain: Interval,
}

impl fmt::Debug for ConjugatePieces {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConjugatePieces")
            .field("dual_domain", &self.dual_domain)
            .finish_non_exhaustive()
    }
}

/// User-supplied closed forms for a custom generator.
pub struct GeneratorParts {
    pub name: String,
    pub domain: Interval,
    pub embedded_range: Interval,
    pub phi: ScalarFn,
    pub phi_prime: ScalarFn,
    pub phi_double_prime: ScalarFn,
    pub h: ScalarFn,
    pub h_inverse: ScalarFn,
    pub conjugate: Option<ConjugatePieces>,
}

/// A separable Bregman generator. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Generator {
    name: String,
    builtin: Option<Builtin>,
    domain: Interval,
    embedded_range: Interval,
    phi: ScalarFn,
    phi_prime: ScalarFn,
    phi_double_prime: ScalarFn,
    h: ScalarFn,
    h_inverse: ScalarFn,
    conjugate: Option<ConjugatePieces>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("embedded_range", &self.embedded_range)
            .finish_non_exhaustive()
    }
}

impl Generator {
    /// Builds a generator from closed-form callbacks. `h` must be strictly
    /// increasing on `domain` with `h(domain) = embedded_range`, and
    /// `h_inverse` its inverse; none of this is checked numerically.
    pub fn from_parts(parts: GeneratorParts) -> Result<Self> {
        if Builtin::from_str(&parts.name).is_ok() {
            return Err(Error::invalid(format!(
                "custom generator may not reuse the built-in name `{}`",
                parts.name
            )));
        }
        Ok(Generator {
            name: parts.name,
            builtin: None,
            domain: parts.domain,
            embedded_range: parts.embedded_range,
            phi: parts.phi,
            phi_prime: parts.phi_prime,
            phi_double_prime: parts.phi_double_prime,
            h: parts.h,
            h_inverse: parts.h_inverse,
            conjugate: parts.conjugate,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn builtin(&self) -> Option<Builtin> {
        self.builtin
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn embedded_range(&self) -> Interval {
        self.embedded_range
    }

    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        (self.phi)(x)
    }

    #[inline]
    pub fn phi_prime(&self, x: f64) -> f64 {
        (self.phi_prime)(x)
    }

    #[inline]
    pub fn phi_double_prime(&self, x: f64) -> f64 {
        (self.phi_double_prime)(x)
    }

    #[inline]
    pub fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    #[inline]
    pub fn h_inverse(&self, u: f64) -> f64 {
        (self.h_inverse)(u)
    }

    /// Legendre conjugate pieces; custom generators only have them if supplied.
    pub fn conjugate(&self) -> Result<&ConjugatePieces> {
        self.conjugate.as_ref().ok_or_else(|| {
            Error::invalid(format!(
                "generator `{}` has no closed-form conjugate",
                self.name
            ))
        })
    }

    /// Same metric geometry with `h` multiplied by `factor > 0` (so `φ`
    /// scales by `factor²`). Distances scale by `factor`; argmins do not move.
    pub fn scaled(&self, factor: f64) -> Result<Generator> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::invalid(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        let sq = factor * factor;
        let (phi, phi_prime, phi_double_prime, h, h_inverse) = (
            self.phi.clone(),
            self.phi_prime.clone(),
            self.phi_double_prime.clone(),
            self.h.clone(),
            self.h_inverse.clone(),
        );
        let range = self.embedded_range;
        Ok(Generator {
            name: format!("{}*{}", self.name, factor),
            builtin: None,
            domain: self.domain,
            embedded_range: Interval {
                lo: range.lo * factor,
                hi: range.hi * factor,
            },
            phi: scalar(move |x| sq * phi(x)),
            phi_prime: scalar(move |x| sq * phi_prime(x)),
            phi_double_prime: scalar(move |x| sq * phi_double_prime(x)),
            h: scalar(move |x| factor * h(x)),
            h_inverse: scalar(move |u| h_inverse(u / factor)),
            conjugate: None,
        })
    }

    pub(crate) fn domain_error(&self, coordinate: usize, value: f64, space: Space) -> Error {
        Error::Domain {
            generator: self.name.clone(),
            point: None,
            coordinate,
            value,
            space,
        }
    }

    /// Fails with a domain error naming the first coordinate outside `J`.
    pub fn check_domain(&self, x: &[f64]) -> Result<()> {
        match x.iter().position(|&v| !self.domain.contains(v)) {
            Some(j) => Err(self.domain_error(j, x[j], Space::Original)),
            None => Ok(()),
        }
    }

    /// Componentwise `h`.
    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_domain(x)?;
        Ok(x.iter().map(|&v| self.h(v)).collect())
    }

    /// Componentwise `H = h⁻¹`.
    pub fn unembed(&self, u: &[f64]) -> Result<Vec<f64>> {
        if let Some(j) = u.iter().position(|&v| !self.embedded_range.contains(v)) {
            return Err(self.domain_error(j, u[j], Space::Embedded));
        }
        Ok(u.iter().map(|&v| self.h_inverse(v)).collect())
    }

    /// Embeds every point, tagging domain errors with the row index.
    pub fn embed_all(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        points
            .iter()
            .enumerate()
            .map(|(row, p)| self.embed(p).map_err(|e| e.at_point(row)))
            .collect()
    }

    pub fn unembed_all(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        points
            .iter()
            .enumerate()
            .map(|(row, p)| self.unembed(p).map_err(|e| e.at_point(row)))
            .collect()
    }
}

impl PartialEq for Generator {
    /// Built-ins compare by kind; custom generators by name only.
    fn eq(&self, other: &Self) -> bool {
        self.builtin == other.builtin && self.name == other.name
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        make_generator(&name).map_err(serde::de::Error::custom)
    }
}

fn builtin(
    kind: Builtin,
    domain: Interval,
    embedded_range: Interval,
    fns: [ScalarFn; 5],
    conjugate: ConjugatePieces,
) -> Generator {
    let [phi, phi_prime, phi_double_prime, h, h_inverse] = fns;
    Generator {
        name: kind.name().to_string(),
        builtin: Some(kind),
        domain,
        embedded_range,
        phi,
        phi_prime,
        phi_double_prime,
        h,
        h_inverse,
        conjugate: Some(conjugate),
    }
}

fn euclidean() -> Generator {
    builtin(
        Builtin::Euclidean,
        Interval::REAL,
        Interval::REAL,
        [
            scalar(|x| 0.5 * x * x),
            scalar(|x| x),
            scalar(|_| 1.0),
            scalar(|x| x),
            scalar(|u| u),
        ],
        ConjugatePieces {
            phi_star: scalar(|y| 0.5 * y * y),
            phi_star_prime: scalar(|y| y),
            phi_star_double_prime: scalar(|_| 1.0),
            h_star: scalar(|y| y),
            dual_domain: Interval::REAL,
        },
    )
}

fn exp() -> Generator {
    builtin(
        Builtin::Exp,
        Interval::REAL,
        Interval::POSITIVE,
        [
            scalar(f64::exp),
            scalar(f64::exp),
            scalar(f64::exp),
            scalar(|x| 2.0 * (0.5 * x).exp()),
            scalar(|u| 2.0 * (0.5 * u).ln()),
        ],
        // φ' = eˣ maps ℝ onto (0, ∞); φ*(y) = y ln y − y.
        ConjugatePieces {
            phi_star: scalar(|y| y * y.ln() - y),
            phi_star_prime: scalar(f64::ln),
            phi_star_double_prime: scalar(|y| 1.0 / y),
            h_star: scalar(|y| 2.0 * y.sqrt()),
            dual_domain: Interval::POSITIVE,
        },
    )
}

fn negexp() -> Generator {
    builtin(
        Builtin::NegExp,
        Interval::REAL,
        Interval::NEGATIVE,
        [
            scalar(|x| (-x).exp()),
            scalar(|x| -(-x).exp()),
            scalar(|x| (-x).exp()),
            scalar(|x| -2.0 * (-0.5 * x).exp()),
            scalar(|u| -2.0 * (-0.5 * u).ln()),
        ],
        // φ' = −e^{−x} maps ℝ onto (−∞, 0); φ*(y) = y − y ln(−y).
        ConjugatePieces {
            phi_star: scalar(|y| y - y * (-y).ln()),
            phi_star_prime: scalar(|y| -(-y).ln()),
            phi_star_double_prime: scalar(|y| -1.0 / y),
            h_star: scalar(|y| -2.0 * (-y).sqrt()),
            dual_domain: Interval::NEGATIVE,
        },
    )
}

fn shannon() -> Generator {
    builtin(
        Builtin::Shannon,
        Interval::POSITIVE,
        Interval::POSITIVE,
        [
            scalar(|x| x * x.ln()),
            scalar(|x| x.ln() + 1.0),
            scalar(|x| 1.0 / x),
            scalar(|x| 2.0 * x.sqrt()),
            scalar(|u| {
                let half = 0.5 * u;
                half * half
            }),
        ],
        // φ' = ln x + 1 maps (0, ∞) onto ℝ; φ*(y) = e^{y−1}.
        ConjugatePieces {
            phi_star: scalar(|y| (y - 1.0).exp()),
            phi_star_prime: scalar(|y| (y - 1.0).exp()),
            phi_star_double_prime: scalar(|y| (y - 1.0).exp()),
            h_star: scalar(|y| 2.0 * (0.5 * (y - 1.0)).exp()),
            dual_domain: Interval::REAL,
        },
    )
}

fn burg() -> Generator {
    builtin(
        Builtin::Burg,
        Interval::POSITIVE,
        Interval::REAL,
        [
            scalar(|x| -x.ln()),
            scalar(|x| -1.0 / x),
            scalar(|x| 1.0 / (x * x)),
            scalar(f64::ln),
            scalar(f64::exp),
        ],
        // φ' = −1/x maps (0, ∞) onto (−∞, 0); φ*(y) = −1 − ln(−y).
        ConjugatePieces {
            phi_star: scalar(|y| -1.0 - (-y).ln()),
            phi_star_prime: scalar(|y| -1.0 / y),
            phi_star_double_prime: scalar(|y| 1.0 / (y * y)),
            h_star: scalar(|y| -(-y).ln()),
            dual_domain: Interval::NEGATIVE,
        },
    )
}
