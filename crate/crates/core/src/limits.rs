//! Stationary inductive limits `lim(ℤ^r, T)` as concrete groups.
//!
//! Every element of the limit eventually lands in the saturated lattice
//! `L = ℤ^r ∩ ℚ·im T^r`, on which `T` restricts to an injective map `T′`.
//! The limit is therefore `lim(L, T′)`, and an element is a pair
//! `(stage k, v ∈ L)` standing for `T′^{-k} v`. Elements are kept with the
//! smallest possible stage, which makes equality structural.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::intlin::{
    column_hermite_form, restrict_endomorphism, saturation, smith_normal_form, solve_integral,
    IntMatrix, LinalgError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("endomorphism must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryLimitGroup {
    endomorphism: IntMatrix,
    eventual_basis: IntMatrix,
    reduced: IntMatrix,
}

/// Isomorphism type of a limit group, as far as it is recognised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// `T′` is an automorphism; rank 0 is the trivial group.
    FreeAbelian(usize),
    /// Rank one with `T′ = [±n]`, `n ≥ 2`.
    ZOneOver(BigInt),
    /// Anything else, described by its reduced presentation.
    Generic { rank: usize, reduced: IntMatrix },
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::FreeAbelian(0) => write!(f, "0"),
            Descriptor::FreeAbelian(1) => write!(f, "Z"),
            Descriptor::FreeAbelian(r) => write!(f, "Z^{r}"),
            Descriptor::ZOneOver(n) => write!(f, "Z[1/{n}]"),
            Descriptor::Generic { rank, reduced } => write!(f, "lim(Z^{rank}, {reduced})"),
        }
    }
}

pub fn make_limit(t: &IntMatrix) -> Result<StationaryLimitGroup, LimitError> {
    if !t.is_square() {
        return Err(LimitError::NotSquare(t.rows(), t.cols()));
    }
    let r = t.rows();
    let eventual_image = t.pow(r as u32);
    let eventual_basis = saturation(&eventual_image);
    let reduced = restrict_endomorphism(t, &eventual_basis)?;
    Ok(StationaryLimitGroup {
        endomorphism: t.clone(),
        eventual_basis,
        reduced,
    })
}

impl StationaryLimitGroup {
    pub fn ambient_rank(&self) -> usize {
        self.endomorphism.rows()
    }

    pub fn endomorphism(&self) -> &IntMatrix {
        &self.endomorphism
    }

    pub fn eventual_rank(&self) -> usize {
        self.eventual_basis.cols()
    }

    /// Columns span `L` inside `ℤ^r`, in column Hermite form.
    pub fn eventual_basis(&self) -> &IntMatrix {
        &self.eventual_basis
    }

    /// `T′`, the restriction of `T` to `L` in the basis above.
    pub fn reduced_endomorphism(&self) -> &IntMatrix {
        &self.reduced
    }

    pub fn classify(&self) -> Descriptor {
        let rank = self.eventual_rank();
        let det = self.reduced.det();
        if det.abs().is_one() {
            return Descriptor::FreeAbelian(rank);
        }
        if rank == 1 {
            return Descriptor::ZOneOver(self.reduced[(0, 0)].abs());
        }
        Descriptor::Generic {
            rank,
            reduced: self.reduced.clone(),
        }
    }

    pub fn zero(&self) -> LimitElement<'_> {
        LimitElement {
            group: self,
            stage: 0,
            vector: vec![BigInt::zero(); self.eventual_rank()],
        }
    }

    /// The element `(stage, v)` with `v` in coordinates of the eventual basis.
    pub fn element(&self, stage: u32, vector: Vec<BigInt>) -> Result<LimitElement<'_>, LimitError> {
        if vector.len() != self.eventual_rank() {
            return Err(LimitError::Length {
                expected: self.eventual_rank(),
                got: vector.len(),
            });
        }
        Ok(LimitElement {
            group: self,
            stage,
            vector,
        }
        .canonical())
    }

    /// The class of `x ∈ ℤ^r` placed at `stage` of the original system.
    pub fn element_from_ambient(&self, stage: u32, x: &[BigInt]) -> Result<LimitElement<'_>, LimitError> {
        let r = self.ambient_rank();
        if x.len() != r {
            return Err(LimitError::Length {
                expected: r,
                got: x.len(),
            });
        }
        let pushed = self.endomorphism.pow(r as u32).mul_vec(x);
        let coords = solve_integral(&self.eventual_basis, &IntMatrix::column_vector(&pushed))?
            .expect("T^r lands in the eventual lattice");
        self.element(stage + r as u32, coords.column(0))
    }

    fn apply_reduced(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.reduced.mul_vec(v)
    }

    /// Some `w` with `T′w = v`, if one exists.
    fn preimage(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_integral(&self.reduced, &IntMatrix::column_vector(v))
            .expect("reduced endomorphism is injective")
            .map(|w| w.column(0))
    }

    /// Positivity for `Z[1/n]` presented by `T′ = [n]`, `n > 0`; `None` for
    /// every other group.
    pub fn is_positive(&self, a: &LimitElement<'_>) -> Option<bool> {
        if self.eventual_rank() == 1 && self.reduced[(0, 0)].is_positive() {
            Some(a.vector[0].is_positive())
        } else {
            None
        }
    }

    /// Rank-one groups embed in ℚ via `(k, v) ↦ v / t^k`; returns a reduced
    /// fraction with positive denominator.
    pub fn as_fraction(&self, a: &LimitElement<'_>) -> Option<(BigInt, BigInt)> {
        if self.eventual_rank() != 1 {
            return None;
        }
        let t = &self.reduced[(0, 0)];
        let mut den = num_traits::pow(t.clone(), a.stage as usize);
        let mut num = a.vector[0].clone();
        if den.is_negative() {
            den = -den;
            num = -num;
        }
        let g = num.gcd(&den);
        Some((num / &g, den / &g))
    }
}

/// An element of a [`StationaryLimitGroup`], always in canonical form.
#[derive(Clone, Debug)]
pub struct LimitElement<'g> {
    group: &'g StationaryLimitGroup,
    stage: u32,
    vector: Vec<BigInt>,
}

impl<'g> LimitElement<'g> {
    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn group(&self) -> &'g StationaryLimitGroup {
        self.group
    }

    fn canonical(mut self) -> Self {
        while self.stage > 0 {
            match self.group.preimage(&self.vector) {
                Some(w) => {
                    self.vector = w;
                    self.stage -= 1;
                }
                None => break,
            }
        }
        if self.vector.iter().all(Zero::is_zero) {
            self.stage = 0;
        }
        self
    }

    /// The same element written at a later stage `m ≥ stage`.
    pub fn promote(&self, m: u32) -> Vec<BigInt> {
        assert!(m >= self.stage, "cannot promote to an earlier stage");
        let mut v = self.vector.clone();
        for _ in self.stage..m {
            v = self.group.apply_reduced(&v);
        }
        v
    }

    fn same_group(&self, other: &Self) {
        assert!(
            std::ptr::eq(self.group, other.group),
            "elements belong to different limit groups"
        );
    }

    /// Equality by promotion to a common stage.
    pub fn element_equal(&self, other: &Self) -> bool {
        self.same_group(other);
        let m = self.stage.max(other.stage);
        self.promote(m) == other.promote(m)
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }
}

impl PartialEq for LimitElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other);
        self.stage == other.stage && self.vector == other.vector
    }
}

impl Eq for LimitElement<'_> {}

impl<'g> Add for &LimitElement<'g> {
    type Output = LimitElement<'g>;
    fn add(self, rhs: Self) -> LimitElement<'g> {
        self.same_group(rhs);
        let m = self.stage.max(rhs.stage);
        let vector = self
            .promote(m)
            .into_iter()
            .zip(rhs.promote(m))
            .map(|(a, b)| a + b)
            .collect();
        LimitElement {
            group: self.group,
            stage: m,
            vector,
        }
        .canonical()
    }
}

impl<'g> Neg for &LimitElement<'g> {
    type Output = LimitElement<'g>;
    fn neg(self) -> LimitElement<'g> {
        LimitElement {
            group: self.group,
            stage: self.stage,
            vector: self.vector.iter().map(|x| -x).collect(),
        }
    }
}

impl<'g> Sub for &LimitElement<'g> {
    type Output = LimitElement<'g>;
    fn sub(self, rhs: Self) -> LimitElement<'g> {
        self + &(-rhs)
    }
}

impl fmt::Display for LimitElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vector.iter().map(ToString::to_string).collect();
        write!(f, "({}, [{}])", self.stage, v.join(", "))
    }
}

/// Invariant factors of `lim(G, φ)` for a finite group `G = ⊕ ℤ/dᵢ`.
///
/// The limit of a finite group is the eventual image `⋂ φ^k(G)`, on which
/// `φ` acts bijectively. `map` acts on coordinate vectors; entries are read
/// modulo the orders.
pub fn finite_limit(orders: &[BigInt], map: &IntMatrix) -> Vec<BigInt> {
    let t = orders.len();
    if t == 0 {
        return Vec::new();
    }
    assert_eq!((map.rows(), map.cols()), (t, t), "torsion map shape");
    let mut relations = IntMatrix::zeros(t, t);
    for (i, d) in orders.iter().enumerate() {
        relations[(i, i)] = d.clone();
    }
    // image of φ^k as the lattice spanned by [φ^k | D], modulo D
    let image_structure = |power: &IntMatrix| -> (BigInt, Vec<BigInt>) {
        let mut gens = power.columns();
        gens.extend(relations.columns());
        let lattice = column_hermite_form(&IntMatrix::from_columns(t, &gens));
        let coords = solve_integral(&lattice, &relations)
            .expect("full-rank lattice")
            .expect("relations lie in the lattice");
        let diag = smith_normal_form(&coords).diagonal();
        let order = diag.iter().fold(BigInt::one(), |acc, d| acc * d);
        (order, diag.into_iter().filter(|d| d > &BigInt::one()).collect())
    };
    let mut power = IntMatrix::identity(t);
    let (mut order, mut factors) = image_structure(&power);
    loop {
        power = map * &power;
        let (next_order, next_factors) = image_structure(&power);
        if next_order == order {
            return factors;
        }
        order = next_order;
        factors = next_factors;
    }
}
