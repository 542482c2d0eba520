//! Composite systems laid out as Kronecker products.
//!
//! Factors are ordered; factor 0 is the most significant digit of the
//! composite matrix index. With factor sizes `(n₀, …, n_{k−1})` the composite
//! index of the digit tuple `(i₀, …, i_{k−1})` is
//!
//! | quantity        | value                                |
//! |-----------------|--------------------------------------|
//! | stride of `f`   | `n_{f+1} · … · n_{k−1}` (1 for last) |
//! | composite index | `Σ_f i_f · stride_f`                 |
//!
//! Marginals keep the remaining factors in their original relative order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Affinity, State};
use crate::error::{Error, Result};
use crate::jordan::{Algebra, CMat, JordanElement, SimpleType, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    ClassicalTensor,
    ComplexTensor,
    /// `R(2) ⊗ R(2)` embedded in `R(4)` by the Kronecker product.
    RealIntoLarger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeLayout {
    factors: Vec<Algebra>,
    embedding: Embedding,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        s[f] = s[f + 1] * dims[f + 1];
    }
    s
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for f in (0..dims.len()).rev() {
        out[f] = index % dims[f];
        index /= dims[f];
    }
}

/// Partial trace keeping the (sorted) factors `keep`.
pub(crate) fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let n: usize = dims.iter().product();
    let kept_dims: Vec<usize> = keep.iter().map(|&f| dims[f]).collect();
    let kept_strides = strides(&kept_dims);
    let out_n: usize = kept_dims.iter().product();
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
    let mut out = CMat::zeros(out_n, out_n);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let reduced = |d: &[usize]| -> usize {
        keep.iter()
            .zip(&kept_strides)
            .map(|(&f, &s)| d[f] * s)
            .sum()
    };
    for i in 0..n {
        digits(i, dims, &mut di);
        let ri = reduced(&di);
        for j in 0..n {
            digits(j, dims, &mut dj);
            if traced.iter().all(|&f| di[f] == dj[f]) {
                out[(ri, reduced(&dj))] += m[(i, j)];
            }
        }
    }
    out
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub(crate) fn permute_factors(m: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let n = m.nrows();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let old_strides = strides(dims);
    let mut d = vec![0; dims.len()];
    let map: Vec<usize> = (0..n)
        .map(|new_index| {
            digits(new_index, &new_dims, &mut d);
            perm.iter()
                .enumerate()
                .map(|(k, &p)| d[k] * old_strides[p])
                .sum()
        })
        .collect();
    CMat::from_fn(n, n, |r, c| m[(map[r], map[c])])
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

impl CompositeLayout {
    pub fn new(factors: Vec<Algebra>, embedding: Embedding) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Layout("no factors".into()));
        }
        for f in &factors {
            let ok = match (embedding, f.as_simple()) {
                (Embedding::ComplexTensor, Some(SimpleType::ComplexHermitian(_))) => true,
                (Embedding::ClassicalTensor, Some(SimpleType::Classical(_))) => true,
                (Embedding::RealIntoLarger, Some(SimpleType::RealHermitian(2))) => true,
                _ => false,
            };
            if !ok {
                return Err(Error::Layout(format!(
                    "factor {f} does not fit a {embedding:?} layout"
                )));
            }
        }
        if embedding == Embedding::RealIntoLarger && factors.len() != 2 {
            return Err(Error::Layout("the real embedding has exactly two R2 factors".into()));
        }
        Ok(CompositeLayout { factors, embedding })
    }

    pub fn complex(dims: &[usize]) -> Result<Self> {
        CompositeLayout::new(
            dims.iter().map(|&n| Algebra::simple(SimpleType::ComplexHermitian(n))).collect::<Result<_>>()?,
            Embedding::ComplexTensor,
        )
    }

    pub fn classical(dims: &[usize]) -> Result<Self> {
        CompositeLayout::new(
            dims.iter().map(|&n| Algebra::simple(SimpleType::Classical(n))).collect::<Result<_>>()?,
            Embedding::ClassicalTensor,
        )
    }

    pub fn real_into_larger() -> Self {
        CompositeLayout {
            factors: vec![Algebra::real(2), Algebra::real(2)],
            embedding: Embedding::RealIntoLarger,
        }
    }

    /// Splits every factor of composite size into prime-size factors, e.g.
    /// `C2x4` into `C2x2x2`. The composite algebra and its coordinates are
    /// unchanged since the index of a size-`ab` factor is `(i, j) ↦ i·b + j`.
    pub fn refine(&self) -> CompositeLayout {
        if self.embedding == Embedding::RealIntoLarger {
            return self.clone();
        }
        let mut dims = Vec::new();
        for mut n in self.dims() {
            let mut p = 2;
            while n > 1 {
                if n % p == 0 {
                    dims.push(p);
                    n /= p;
                } else {
                    p += 1;
                }
            }
        }
        match self.embedding {
            Embedding::ClassicalTensor => CompositeLayout::classical(&dims),
            _ => CompositeLayout::complex(&dims),
        }
        .expect("prime factors are valid sizes")
    }

    pub fn factors(&self) -> &[Algebra] {
        &self.factors
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Matrix size of every factor.
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.rank()).collect()
    }

    pub fn composite_algebra(&self) -> Algebra {
        let n: usize = self.dims().iter().product();
        match self.embedding {
            Embedding::ComplexTensor => Algebra::complex(n),
            Embedding::ClassicalTensor => Algebra::classical(n),
            Embedding::RealIntoLarger => Algebra::real(4),
        }
    }

    /// Layout of the factors `keep` (sorted, distinct).
    pub fn sub_layout(&self, keep: &[usize]) -> Result<CompositeLayout> {
        self.check_subset(keep)?;
        CompositeLayout::new(
            keep.iter().map(|&f| self.factors[f].clone()).collect(),
            self.embedding,
        )
    }

    fn check_subset(&self, keep: &[usize]) -> Result<()> {
        if keep.is_empty() {
            return Err(Error::Layout("empty factor subset".into()));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep[keep.len() - 1] >= self.len() {
            return Err(Error::Layout(format!(
                "factor subset {keep:?} must be strictly increasing and below {}",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn tensor_elements(&self, parts: &[&JordanElement]) -> Result<JordanElement> {
        if parts.len() != self.len() {
            return Err(Error::Layout(format!(
                "{} parts for {} factors",
                parts.len(),
                self.len()
            )));
        }
        let mut acc = CMat::from_element(1, 1, C64::new(1.0, 0.0));
        for (p, f) in parts.iter().zip(&self.factors) {
            f.ensure_same(p.algebra())
                .map_err(|e| Error::Layout(e.to_string()))?;
            acc = kron(&acc, &p.to_matrix()?);
        }
        JordanElement::from_matrix(&self.composite_algebra(), &acc)
    }

    pub fn tensor(&self, parts: &[&State]) -> Result<State> {
        let elems: Vec<&JordanElement> = parts.iter().map(|s| s.element()).collect();
        Ok(State::from_positive(self.tensor_elements(&elems)?))
    }

    fn check_state(&self, state: &State) -> Result<()> {
        self.composite_algebra()
            .ensure_same(state.algebra())
            .map_err(|e| Error::Layout(e.to_string()))
    }

    /// Partial-trace marginal on the (sorted) factors `keep`.
    pub fn marginal(&self, state: &State, keep: &[usize]) -> Result<State> {
        if self.embedding == Embedding::RealIntoLarger {
            return Err(Error::Unsupported(
                "marginals of the real 4x4 embedding are not determined by local tomography".into(),
            ));
        }
        self.check_state(state)?;
        self.check_subset(keep)?;
        let sub = self.sub_layout(keep)?;
        let m = partial_trace(&state.element().to_matrix()?, &self.dims(), keep);
        Ok(State::from_positive(JordanElement::from_matrix(
            &sub.composite_algebra(),
            &m,
        )?))
    }

    /// `σ_{G₁} ⊗ σ_{G₂} ⊗ …` for disjoint factor groups, laid out on the sorted
    /// union of the groups. Returns the layout of that union as well.
    pub fn product_of_marginals(
        &self,
        state: &State,
        groups: &[Vec<usize>],
    ) -> Result<(CompositeLayout, State)> {
        let mut union: Vec<usize> = groups.iter().flatten().copied().collect();
        union.sort_unstable();
        let before = union.len();
        union.dedup();
        if union.len() != before {
            return Err(Error::OverlappingSubsystems(format!("{groups:?}")));
        }
        let sub = self.sub_layout(&union)?;
        let mut acc = CMat::from_element(1, 1, C64::new(1.0, 0.0));
        let mut order = Vec::with_capacity(union.len());
        for g in groups {
            let mut g = g.clone();
            g.sort_unstable();
            acc = kron(&acc, &self.marginal(state, &g)?.element().to_matrix()?);
            order.extend(g);
        }
        // order[k] is the original factor now sitting at position k
        let dims_now: Vec<usize> = order.iter().map(|&f| self.dims()[f]).collect();
        let perm: Vec<usize> = union
            .iter()
            .map(|f| order.iter().position(|o| o == f).expect("member of union"))
            .collect();
        let m = permute_factors(&acc, &dims_now, &perm);
        let s = State::from_positive(JordanElement::from_matrix(&sub.composite_algebra(), &m)?);
        Ok((sub, s))
    }

    /// `id ⊗ … ⊗ Φ ⊗ … ⊗ id` with `Φ` acting on factor `factor`.
    pub fn local_affinity(&self, factor: usize, phi: &Affinity) -> Result<Affinity> {
        if factor >= self.len() {
            return Err(Error::Layout(format!("no factor {factor}")));
        }
        let fa = &self.factors[factor];
        if phi.source() != fa || phi.target() != fa {
            return Err(Error::Layout(format!(
                "local map must act {fa} -> {fa}, got {} -> {}",
                phi.source(),
                phi.target()
            )));
        }
        let dims = self.dims();
        let st = strides(&dims);
        let nk = dims[factor];
        let n: usize = dims.iter().product();
        let bases: Vec<usize> = (0..n).filter(|i| (i / st[factor]) % nk == 0).collect();
        let apply_block = |b: &CMat| -> Result<CMat> {
            let half = C64::new(0.5, 0.0);
            let h1 = (b + b.adjoint()) * half;
            let h2 = (b - b.adjoint()) * C64::new(0.0, -0.5);
            let img = |h: &CMat| -> Result<CMat> {
                phi.apply(&JordanElement::from_matrix(fa, h)?)?.to_matrix()
            };
            Ok(img(&h1)? + img(&h2)? * C64::new(0.0, 1.0))
        };
        let algebra = self.composite_algebra();
        Affinity::from_linear_map(&algebra, &algebra, |x| {
            let m = x.to_matrix()?;
            let mut out = CMat::zeros(n, n);
            for &a in &bases {
                for &b in &bases {
                    let block = CMat::from_fn(nk, nk, |s, t| m[(a + s * st[factor], b + t * st[factor])]);
                    if block.iter().all(|z| z.norm_sqr() == 0.0) {
                        continue;
                    }
                    let img = apply_block(&block)?;
                    for s in 0..nk {
                        for t in 0..nk {
                            out[(a + s * st[factor], b + t * st[factor])] = img[(s, t)];
                        }
                    }
                }
            }
            JordanElement::from_matrix(&algebra, &out)
        })
    }
}

impl fmt::Display for CompositeLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.embedding {
            Embedding::ComplexTensor => "C",
            Embedding::ClassicalTensor => "P",
            Embedding::RealIntoLarger => "R",
        };
        let dims: Vec<String> = self.dims().iter().map(|d| d.to_string()).collect();
        write!(f, "{prefix}{}", dims.join("x"))
    }
}

/// `C2x4`, `P2x2x3`, `R2x2` (the real embedding).
impl FromStr for CompositeLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_at(s.chars().next().map(|c| c.len_utf8()).unwrap_or(0));
        let dims = rest
            .split('x')
            .map(|d| d.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Layout(format!("bad composite spec {s:?}")))?;
        match kind.to_ascii_uppercase().as_str() {
            "C" => CompositeLayout::complex(&dims),
            "P" => CompositeLayout::classical(&dims),
            "R" if dims == [2, 2] => Ok(CompositeLayout::real_into_larger()),
            _ => Err(Error::Layout(format!("bad composite spec {s:?}"))),
        }
    }
}
