use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple Euclidean Jordan algebra (the exceptional algebra is not represented).
///
/// `Classical(n)` is the associative algebra of real `n`-vectors, i.e. the
/// diagonal of `RealHermitian(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SimpleTypeRepr", into = "SimpleTypeRepr")]
pub enum SimpleType {
    RealHermitian(usize),
    ComplexHermitian(usize),
    QuaternionHermitian(usize),
    SpinFactor(usize),
    Classical(usize),
}

impl SimpleType {
    /// Real vector-space dimension.
    pub fn dim(self) -> usize {
        match self {
            SimpleType::RealHermitian(n) => n * (n + 1) / 2,
            SimpleType::ComplexHermitian(n) => n * n,
            SimpleType::QuaternionHermitian(n) => n * (2 * n - 1),
            SimpleType::SpinFactor(d) => d + 1,
            SimpleType::Classical(n) => n,
        }
    }

    /// Jordan rank (number of primitive idempotents in a frame).
    pub fn rank(self) -> usize {
        match self {
            SimpleType::RealHermitian(n)
            | SimpleType::ComplexHermitian(n)
            | SimpleType::QuaternionHermitian(n)
            | SimpleType::Classical(n) => n,
            SimpleType::SpinFactor(_) => 2,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            SimpleType::SpinFactor(d) if d < 2 => Err(Error::InvalidAlgebra(format!(
                "spin factor needs d >= 2, got {d}"
            ))),
            SimpleType::RealHermitian(0)
            | SimpleType::ComplexHermitian(0)
            | SimpleType::QuaternionHermitian(0)
            | SimpleType::Classical(0) => {
                Err(Error::InvalidAlgebra(format!("{self} has size 0")))
            }
            _ => Ok(()),
        }
    }

    /// Matrix size of the concrete representation, or `None` for spin factors.
    pub(crate) fn matrix_size(self) -> Option<usize> {
        match self {
            SimpleType::RealHermitian(n)
            | SimpleType::ComplexHermitian(n)
            | SimpleType::Classical(n) => Some(n),
            SimpleType::QuaternionHermitian(n) => Some(2 * n),
            SimpleType::SpinFactor(_) => None,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::RealHermitian(n) => write!(f, "R{n}"),
            SimpleType::ComplexHermitian(n) => write!(f, "C{n}"),
            SimpleType::QuaternionHermitian(n) => write!(f, "H{n}"),
            SimpleType::SpinFactor(d) => write!(f, "S{d}"),
            SimpleType::Classical(n) => write!(f, "P{n}"),
        }
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = chars
            .next()
            .ok_or_else(|| Error::InvalidAlgebra("empty algebra spec".into()))?;
        let n: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidAlgebra(format!("bad size in {s:?}")))?;
        let ty = match kind.to_ascii_uppercase() {
            'R' => SimpleType::RealHermitian(n),
            'C' => SimpleType::ComplexHermitian(n),
            'H' => SimpleType::QuaternionHermitian(n),
            'S' => SimpleType::SpinFactor(n),
            'P' => SimpleType::Classical(n),
            other => {
                return Err(Error::InvalidAlgebra(format!(
                    "unknown algebra kind {other:?} in {s:?}"
                )))
            }
        };
        ty.validate()?;
        Ok(ty)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum SimpleTypeRepr {
    Real { n: usize },
    Complex { n: usize },
    Quaternion { n: usize },
    Spin { d: usize },
    Classical { n: usize },
}

impl TryFrom<SimpleTypeRepr> for SimpleType {
    type Error = Error;

    fn try_from(r: SimpleTypeRepr) -> Result<Self> {
        let ty = match r {
            SimpleTypeRepr::Real { n } => SimpleType::RealHermitian(n),
            SimpleTypeRepr::Complex { n } => SimpleType::ComplexHermitian(n),
            SimpleTypeRepr::Quaternion { n } => SimpleType::QuaternionHermitian(n),
            SimpleTypeRepr::Spin { d } => SimpleType::SpinFactor(d),
            SimpleTypeRepr::Classical { n } => SimpleType::Classical(n),
        };
        ty.validate()?;
        Ok(ty)
    }
}

impl From<SimpleType> for SimpleTypeRepr {
    fn from(t: SimpleType) -> Self {
        match t {
            SimpleType::RealHermitian(n) => SimpleTypeRepr::Real { n },
            SimpleType::ComplexHermitian(n) => SimpleTypeRepr::Complex { n },
            SimpleType::QuaternionHermitian(n) => SimpleTypeRepr::Quaternion { n },
            SimpleType::SpinFactor(d) => SimpleTypeRepr::Spin { d },
            SimpleType::Classical(n) => SimpleTypeRepr::Classical { n },
        }
    }
}

/// A finite Euclidean Jordan algebra given as a direct sum of simple summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SimpleType>", into = "Vec<SimpleType>")]
pub struct Algebra {
    summands: Vec<SimpleType>,
}

impl Algebra {
    pub fn new(summands: Vec<SimpleType>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidAlgebra("no summands".into()));
        }
        for s in &summands {
            s.validate()?;
        }
        Ok(Algebra { summands })
    }

    pub fn simple(ty: SimpleType) -> Result<Self> {
        Algebra::new(vec![ty])
    }

    pub fn real(n: usize) -> Self {
        Self::simple(SimpleType::RealHermitian(n)).expect("n >= 1")
    }

    pub fn complex(n: usize) -> Self {
        Self::simple(SimpleType::ComplexHermitian(n)).expect("n >= 1")
    }

    pub fn quaternion(n: usize) -> Self {
        Self::simple(SimpleType::QuaternionHermitian(n)).expect("n >= 1")
    }

    pub fn spin(d: usize) -> Self {
        Self::simple(SimpleType::SpinFactor(d)).expect("d >= 2")
    }

    pub fn classical(n: usize) -> Self {
        Self::simple(SimpleType::Classical(n)).expect("n >= 1")
    }

    pub fn summands(&self) -> &[SimpleType] {
        &self.summands
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim()).sum()
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank()).sum()
    }

    /// The single summand, if the algebra is simple.
    pub fn as_simple(&self) -> Option<SimpleType> {
        match self.summands.as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    pub fn direct_sum(&self, other: &Algebra) -> Algebra {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        Algebra { summands }
    }

    /// `(summand, coefficient offset)` pairs.
    pub(crate) fn blocks(&self) -> impl Iterator<Item = (SimpleType, usize)> + '_ {
        self.summands.iter().scan(0usize, |off, s| {
            let start = *off;
            *off += s.dim();
            Some((*s, start))
        })
    }

    pub(crate) fn ensure_same(&self, other: &Algebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::mismatch(self, other))
        }
    }
}

impl TryFrom<Vec<SimpleType>> for Algebra {
    type Error = Error;

    fn try_from(v: Vec<SimpleType>) -> Result<Self> {
        Algebra::new(v)
    }
}

impl From<Algebra> for Vec<SimpleType> {
    fn from(a: Algebra) -> Self {
        a.summands
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses `C2`, `R4+P2`, ... (summands joined by `+`).
impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let summands = s
            .split('+')
            .map(SimpleType::from_str)
            .collect::<Result<Vec<_>>>()?;
        Algebra::new(summands)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_ranks() {
        assert_eq!(SimpleType::RealHermitian(3).dim(), 6);
        assert_eq!(SimpleType::ComplexHermitian(3).dim(), 9);
        assert_eq!(SimpleType::QuaternionHermitian(2).dim(), 6);
        assert_eq!(SimpleType::QuaternionHermitian(3).dim(), 15);
        assert_eq!(SimpleType::SpinFactor(3).dim(), 4);
        assert_eq!(SimpleType::Classical(5).dim(), 5);
        assert_eq!(SimpleType::SpinFactor(7).rank(), 2);

        let a: Algebra = "C2+S3+P2".parse().unwrap();
        assert_eq!(a.dim(), 4 + 4 + 2);
        assert_eq!(a.rank(), 2 + 2 + 2);
        assert_eq!(a.to_string(), "C2+S3+P2");
    }

    #[test]
    fn rejects_degenerate_descriptors() {
        assert!("S1".parse::<Algebra>().is_err());
        assert!("C0".parse::<Algebra>().is_err());
        assert!("X3".parse::<Algebra>().is_err());
        assert!(Algebra::new(vec![]).is_err());
    }

    #[test]
    fn json_descriptor_format() {
        let a: Algebra = "C2+S3".parse().unwrap();
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"[{"type":"complex","n":2},{"type":"spin","d":3}]"#);
        let back: Algebra = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Algebra>(r#"[{"type":"spin","d":1}]"#).is_err());
    }
}
