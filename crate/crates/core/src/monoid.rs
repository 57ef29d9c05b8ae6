//! Admissible monoids `N ⊆ Q^n_{≥0}`, the finite group `X = N^gp / Z^n`, the
//! summation character `χ: X → Q/Z` and its preimages `X_m = χ⁻¹((1/m)Z/Z)`.
//!
//! Membership in `N` uses the saturation of the generated monoid: a vector lies
//! in `N` iff it lies in `N^gp` and is coordinatewise nonnegative. Under that
//! model every coordinate projection of `N` is `(1/rᵢ)Z_{≥0}`.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::groups::{FiniteAbelianGroup, FiniteGroup};
use crate::rational::{lcm_of_denominators, QmodZ, Rational};
use crate::snf::{cokernel, kernel_basis, lattice_quotient, mat_vec, smith, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid is not admissible: {0}")]
    NotAdmissible(String),
    #[error("vector is not in the monoid")]
    NotInMonoid,
    #[error("vector is not in the group generated by the monoid")]
    NotInGroup,
    #[error("class is not in X_{0}")]
    NotInXm(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("m must be a positive integer")]
    ZeroM,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleMonoid {
    n: usize,
    generators: Vec<Vec<Rational>>,
}

/// Projection data: `N → Q` onto coordinate `i` has image `(1/rᵢ)Z_{≥0}`,
/// summation has image `(1/m_sum)Z_{≥0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateData {
    pub r: Vec<u64>,
    pub m_sum: u64,
}

impl AdmissibleMonoid {
    /// The monoid generated by `generators` and the standard basis of `Z^n`.
    pub fn new(n: usize, generators: Vec<Vec<Rational>>) -> Result<Self, MonoidError> {
        for g in &generators {
            if g.len() != n {
                return Err(MonoidError::DimensionMismatch { expected: n, got: g.len() });
            }
            if g.iter().any(|x| x.is_negative()) {
                return Err(MonoidError::NotAdmissible("generators must be nonnegative".into()));
            }
        }
        Ok(AdmissibleMonoid { n, generators })
    }

    /// `Z^n_{≥0}`.
    pub fn free(n: usize) -> Self {
        AdmissibleMonoid { n, generators: Vec::new() }
    }

    /// `⊕ᵢ (1/rᵢ) Z_{≥0}`.
    pub fn split(orders: &[u64]) -> Self {
        let n = orders.len();
        let generators = orders
            .iter()
            .enumerate()
            .filter(|(_, r)| **r > 1)
            .map(|(i, &r)| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::new(1, r as i64);
                v
            })
            .collect();
        AdmissibleMonoid { n, generators }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    fn denominator(&self) -> i64 {
        lcm_of_denominators(self.generators.iter().flatten())
    }

    fn check_dim(&self, v: &[Rational]) -> Result<(), MonoidError> {
        if v.len() != self.n {
            return Err(MonoidError::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.n && v.iter().all(|x| !x.is_negative()) && self.x_group().class_of(v).is_ok()
    }

    pub fn coordinate_data(&self) -> CoordinateData {
        let r = (0..self.n).map(|i| lcm_of_denominators(self.generators.iter().map(|g| &g[i])) as u64).collect();
        let sums: Vec<Rational> = self.generators.iter().map(|g| g.iter().sum()).collect();
        CoordinateData { r, m_sum: lcm_of_denominators(sums.iter()) as u64 }
    }

    /// `⊕ᵢ (1/lcmⱼ rᵢ⁽ʲ⁾) Z_{≥0}`: the smallest split admissible monoid containing every input.
    pub fn join(monoids: &[AdmissibleMonoid]) -> Result<AdmissibleMonoid, MonoidError> {
        let Some(first) = monoids.first() else {
            return Err(MonoidError::NotAdmissible("join of an empty list".into()));
        };
        let n = first.n;
        let mut r = vec![1u64; n];
        for m in monoids {
            if m.n != n {
                return Err(MonoidError::DimensionMismatch { expected: n, got: m.n });
            }
            for (acc, ri) in r.iter_mut().zip(m.coordinate_data().r) {
                *acc = acc.lcm(&ri);
            }
        }
        Ok(AdmissibleMonoid::split(&r))
    }

    pub fn x_group(&self) -> XGroup {
        XGroup::new(self)
    }
}

/// `deg 𝓛_ℓ = −Σ ℓᵢ` for the line bundle attached to `ℓ ∈ N`.
pub fn degree_of_generator_bundle(monoid: &AdmissibleMonoid, ell: &[Rational]) -> Result<Rational, MonoidError> {
    monoid.check_dim(ell)?;
    if !monoid.contains(ell) {
        return Err(MonoidError::NotInMonoid);
    }
    Ok(-ell.iter().sum::<Rational>())
}

/// An element of `X`, stored as its lift with every coordinate in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionClass {
    lift: Vec<Rational>,
}

impl TorsionClass {
    /// The lift with coordinates in `[0, 1)`.
    pub fn minimal_lift(&self) -> &[Rational] {
        &self.lift
    }

    pub fn is_zero(&self) -> bool {
        self.lift.iter().all(|x| x.is_zero())
    }

    fn from_scaled(x: &[i64], denom: i64) -> Self {
        TorsionClass { lift: x.iter().map(|&v| Rational::new(v.mod_floor(&denom), denom)).collect() }
    }
}

/// `X = N^gp / Z^n` with an explicit decomposition into cyclic factors.
#[derive(Clone, Debug)]
pub struct XGroup {
    n: usize,
    denom: i64,
    left: IntMatrix,
    diag: Vec<i64>,
    /// (scaled lift of the generator, cyclic order), nontrivial factors only
    components: Vec<(Vec<i64>, i64)>,
    component_rows: Vec<usize>,
    invariants: FiniteAbelianGroup,
}

impl XGroup {
    fn new(monoid: &AdmissibleMonoid) -> Self {
        let n = monoid.n;
        let denom = monoid.denominator();
        // columns: D·vⱼ and D·eᵢ
        let mut cols: Vec<Vec<i64>> =
            monoid.generators.iter().map(|g| g.iter().map(|x| (x * denom).to_integer()).collect()).collect();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = denom;
            cols.push(e);
        }
        let mut a = vec![vec![0; cols.len()]; n];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                a[i][j] = c[i];
            }
        }
        let sf = smith(&a, cols.len());
        let diag: Vec<i64> = sf.diag[..n].to_vec();
        let mut components = Vec::new();
        let mut component_rows = Vec::new();
        for i in 0..n {
            let c = denom / diag[i];
            if c > 1 {
                let mut y = vec![0; n];
                y[i] = diag[i];
                components.push((mat_vec(&sf.left_inv, &y), c));
                component_rows.push(i);
            }
        }
        let orders: Vec<u64> = components.iter().map(|(_, c)| *c as u64).collect();
        let invariants = FiniteAbelianGroup::from_cyclic_orders(&orders);
        XGroup { n, denom, left: sf.left, diag, components, component_rows, invariants }
    }

    pub fn invariant_factors(&self) -> &FiniteAbelianGroup {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.order()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Orders of the cyclic factors in the internal decomposition (not normalized).
    pub fn component_orders(&self) -> Vec<i64> {
        self.components.iter().map(|(_, c)| *c).collect()
    }

    pub fn zero(&self) -> TorsionClass {
        TorsionClass { lift: vec![Rational::zero(); self.n] }
    }

    /// Class of any vector of `N^gp`.
    pub fn class_of(&self, v: &[Rational]) -> Result<TorsionClass, MonoidError> {
        if v.len() != self.n {
            return Err(MonoidError::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let mut x = Vec::with_capacity(self.n);
        for r in v {
            let s = r * self.denom;
            if !s.is_integer() {
                return Err(MonoidError::NotInGroup);
            }
            x.push(s.to_integer().mod_floor(&self.denom));
        }
        let y = mat_vec(&self.left, &x);
        if y.iter().zip(&self.diag).any(|(yi, e)| yi % e != 0) {
            return Err(MonoidError::NotInGroup);
        }
        Ok(TorsionClass::from_scaled(&x, self.denom))
    }

    pub fn contains(&self, c: &TorsionClass) -> bool {
        self.class_of(&c.lift).is_ok()
    }

    /// Coordinates in `⊕ Z/cᵢ` for the internal cyclic decomposition.
    pub fn coordinates(&self, c: &TorsionClass) -> Vec<i64> {
        let x: Vec<i64> = c.lift.iter().map(|r| (r * self.denom).to_integer()).collect();
        let y = mat_vec(&self.left, &x);
        self.components
            .iter()
            .zip(&self.component_rows)
            .map(|((_, ord), &row)| (y[row] / self.diag[row]).mod_floor(ord))
            .collect()
    }

    pub fn from_coordinates(&self, coords: &[i64]) -> TorsionClass {
        let mut x = vec![0i64; self.n];
        for ((g, ord), &k) in self.components.iter().zip(coords) {
            let k = k.mod_floor(ord);
            for i in 0..self.n {
                x[i] = (x[i] + k * g[i]).mod_floor(&self.denom);
            }
        }
        TorsionClass::from_scaled(&x, self.denom)
    }

    pub fn add(&self, a: &TorsionClass, b: &TorsionClass) -> TorsionClass {
        let lift = a
            .lift
            .iter()
            .zip(&b.lift)
            .map(|(x, y)| {
                let s = x + y;
                s - s.floor()
            })
            .collect();
        TorsionClass { lift }
    }

    /// All elements, enumerated through the cyclic decomposition.
    pub fn elements(&self) -> Vec<TorsionClass> {
        let orders = self.component_orders();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coords = vec![0i64; orders.len()];
        loop {
            out.push(self.from_coordinates(&coords));
            let mut i = 0;
            loop {
                if i == orders.len() {
                    return out;
                }
                coords[i] += 1;
                if coords[i] < orders[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }

    /// `χ(x)`: coordinate sum of any lift, modulo `Z`.
    pub fn chi(&self, c: &TorsionClass) -> QmodZ {
        QmodZ::from_rational(&c.lift.iter().sum::<Rational>())
    }

    /// `X_m = {x : m·χ(x) = 0}`.
    pub fn x_m(&self, m: u64) -> Result<XmSubgroup, MonoidError> {
        if m == 0 {
            return Err(MonoidError::ZeroM);
        }
        let orders = self.component_orders();
        let k = orders.len();
        if k == 0 {
            return Ok(XmSubgroup { m, invariants: FiniteAbelianGroup::trivial(), generators: Vec::new() });
        }
        let chis: Vec<QmodZ> =
            self.components.iter().map(|(g, _)| self.chi(&TorsionClass::from_scaled(g, self.denom))).collect();
        let q = chis.iter().fold(1i64, |acc, c| acc.lcm(&c.denom()));
        // Σ bᵢ xᵢ ≡ 0 (mod q) with bᵢ = m·χᵢ·q
        let mut row: Vec<i64> =
            chis.iter().map(|c| ((m as i64 % q) * c.numer() % q * (q / c.denom())).mod_floor(&q)).collect();
        row.push(q);
        let kernel = kernel_basis(&vec![row], k + 1);
        let mut big: Vec<Vec<i64>> = kernel.iter().map(|v| v[..k].to_vec()).collect();
        let small: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = orders[i];
                e
            })
            .collect();
        big.extend(small.iter().cloned());
        let factors = lattice_quotient(&big, &small, k).expect("X_m is a finite subgroup of X");
        let invariants = FiniteAbelianGroup::new(factors.into_iter().map(|x| x as u64).collect()).expect("normalized");
        let generators = kernel.iter().map(|v| self.from_coordinates(&v[..k])).filter(|c| !c.is_zero()).collect();
        Ok(XmSubgroup { m, invariants, generators })
    }

    /// The lift of `λ ∈ X_m` in `[0,1)^n` and the split `χ(n_λ) = s_λ + w_λ/m`.
    pub fn minimal_lift(&self, m: u64, lambda: &TorsionClass) -> Result<MinimalLift, MonoidError> {
        if m == 0 {
            return Err(MonoidError::ZeroM);
        }
        if !self.contains(lambda) {
            return Err(MonoidError::NotInGroup);
        }
        let total: Rational = lambda.lift.iter().sum();
        let scaled = total * Rational::from_integer(m as i64);
        if !scaled.is_integer() {
            return Err(MonoidError::NotInXm(m));
        }
        let t = scaled.to_integer();
        let (s, w) = t.div_mod_floor(&(m as i64));
        Ok(MinimalLift { n_lambda: lambda.lift.clone(), chi: total, s_lambda: s as u64, w_lambda: w as u64 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalLift {
    pub n_lambda: Vec<Rational>,
    /// `χ(n_λ)` as an honest rational (not reduced mod Z).
    pub chi: Rational,
    pub s_lambda: u64,
    pub w_lambda: u64,
}

/// `X_m ⊆ X` with its abstract structure and a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XmSubgroup {
    pub m: u64,
    invariants: FiniteAbelianGroup,
    generators: Vec<TorsionClass>,
}

impl XmSubgroup {
    pub fn invariant_factors(&self) -> &FiniteAbelianGroup {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.order()
    }

    /// Images of the generators under the inclusion into `X`.
    pub fn generators(&self) -> &[TorsionClass] {
        &self.generators
    }
}

/// Torsion Picard group of stacky P¹ with distinct stacky points of orders
/// `r₁..r_k` and one further point of order `m`: `X_m` for `N = ⊕(1/rᵢ)Z_{≥0}`.
pub fn torsion_pic(root_orders: &[u64], m: u64) -> Result<FiniteAbelianGroup, MonoidError> {
    if root_orders.contains(&0) {
        return Err(MonoidError::NotAdmissible("root orders must be positive".into()));
    }
    let x = AdmissibleMonoid::split(root_orders).x_group();
    Ok(x.x_m(m)?.invariants)
}

/// Abelianization of `⟨γ₁..γ_{k+1} | γᵢ^{rᵢ}, γ_{k+1}^m, γ₁⋯γ_{k+1}⟩`.
pub fn orbifold_abelianization(root_orders: &[u64], m: u64) -> Result<FiniteAbelianGroup, MonoidError> {
    if m == 0 || root_orders.contains(&0) {
        return Err(MonoidError::ZeroM);
    }
    let k = root_orders.len();
    // rows = generators, columns = relations
    let mut a = vec![vec![0i64; k + 2]; k + 1];
    for (i, &r) in root_orders.iter().enumerate() {
        a[i][i] = r as i64;
    }
    a[k][k] = m as i64;
    for row in a.iter_mut() {
        row[k + 1] = 1;
    }
    let ck = cokernel(&a, k + 2);
    debug_assert_eq!(ck.free_rank, 0);
    Ok(FiniteAbelianGroup::new(ck.torsion.into_iter().map(|x| x as u64).collect()).expect("normalized"))
}

/// Isomorphism classes of `G`-torsors with abelian contraction on the stacky P¹.
pub fn count_abelian_torsors(root_orders: &[u64], m: u64, g: &FiniteGroup) -> Result<usize, MonoidError> {
    Ok(g.hom_classes(&torsion_pic(root_orders, m)?).count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashSet, VecDeque};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn monoid(gens: &[&[(i64, i64)]]) -> AdmissibleMonoid {
        let n = gens[0].len();
        AdmissibleMonoid::new(n, gens.iter().map(|g| g.iter().map(|&(a, b)| q(a, b)).collect()).collect()).unwrap()
    }

    /// Independent count of |X_m|: closure in (Q/Z)^n from the generators.
    fn brute_xm(m: &AdmissibleMonoid, mm: i64) -> (usize, usize) {
        let mut seen: HashSet<Vec<Rational>> = HashSet::new();
        let zero = vec![Rational::zero(); m.dim()];
        seen.insert(zero.clone());
        let mut queue = VecDeque::from([zero]);
        while let Some(v) = queue.pop_front() {
            for g in m.generators() {
                let w: Vec<Rational> = v.iter().zip(g).map(|(a, b)| (a + b) - (a + b).floor()).collect();
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let xm = seen.iter().filter(|v| (v.iter().sum::<Rational>() * mm).is_integer()).count();
        (seen.len(), xm)
    }

    #[test]
    fn x_group_examples() {
        assert_eq!(monoid(&[&[(1, 2)]]).x_group().invariant_factors().invariant_factors(), &[2]);
        assert!(AdmissibleMonoid::free(3).x_group().invariant_factors().is_trivial());
        assert_eq!(monoid(&[&[(1, 2), (1, 2)]]).x_group().invariant_factors().invariant_factors(), &[2]);
        assert_eq!(monoid(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]]).x_group().order(), 6);
    }

    #[test]
    fn negative_generators_rejected() {
        assert!(matches!(AdmissibleMonoid::new(1, vec![vec![q(-1, 2)]]), Err(MonoidError::NotAdmissible(_))));
        assert!(matches!(AdmissibleMonoid::new(2, vec![vec![q(1, 2)]]), Err(MonoidError::DimensionMismatch { .. })));
    }

    #[test]
    fn chi_examples() {
        let x = AdmissibleMonoid::split(&[3, 2]).x_group();
        let int = x.class_of(&[q(2, 1), q(5, 1)]).unwrap();
        assert!(x.chi(&int).is_zero());
        assert_eq!(x.chi(&x.class_of(&[q(1, 3), q(1, 2)]).unwrap()).to_string(), "5/6");
        let y = monoid(&[&[(1, 2), (1, 2)]]).x_group();
        assert!(y.chi(&y.class_of(&[q(1, 2), q(1, 2)]).unwrap()).is_zero());
        assert_eq!(x.class_of(&[q(1, 5), q(0, 1)]), Err(MonoidError::NotInGroup));
    }

    #[test]
    fn x_m_examples() {
        let x = monoid(&[&[(1, 6)]]).x_group();
        assert_eq!(x.x_m(4).unwrap().invariant_factors().invariant_factors(), &[2]);
        assert_eq!(x.x_m(6).unwrap().order(), 6);
        let y = AdmissibleMonoid::split(&[2, 3]).x_group();
        assert!(y.x_m(5).unwrap().invariant_factors().is_trivial());
        for c in x.x_m(4).unwrap().generators() {
            assert!((x.chi(c).to_rational() * 4).is_integer());
        }
    }

    #[test]
    fn torsion_pic_examples() {
        assert_eq!(torsion_pic(&[2], 2).unwrap().invariant_factors(), &[2]);
        assert!(torsion_pic(&[], 1).unwrap().is_trivial());
        assert_eq!(torsion_pic(&[2, 2], 2).unwrap().invariant_factors(), &[2, 2]);
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(orbifold_abelianization(&[2], 2).unwrap().invariant_factors(), &[2]);
        assert!(orbifold_abelianization(&[2], 3).unwrap().is_trivial());
        assert!(orbifold_abelianization(&[], 1).unwrap().is_trivial());
    }

    #[test]
    fn degree_examples() {
        let n = AdmissibleMonoid::split(&[2]);
        assert_eq!(degree_of_generator_bundle(&n, &[q(1, 1)]).unwrap(), q(-1, 1));
        assert_eq!(degree_of_generator_bundle(&n, &[q(0, 1)]).unwrap(), q(0, 1));
        assert_eq!(degree_of_generator_bundle(&n, &[q(1, 2)]).unwrap(), q(-1, 2));
        let x = n.x_group();
        assert_eq!(x.chi(&x.class_of(&[q(1, 2)]).unwrap()).to_string(), "1/2");
        assert_eq!(degree_of_generator_bundle(&n, &[q(1, 3)]), Err(MonoidError::NotInMonoid));
        assert_eq!(degree_of_generator_bundle(&n, &[q(-1, 2)]), Err(MonoidError::NotInMonoid));
    }

    #[test]
    fn chi_matches_negative_degree() {
        let n = monoid(&[&[(1, 2), (1, 3)], &[(1, 4), (0, 1)]]);
        let x = n.x_group();
        for g in n.generators() {
            let deg = degree_of_generator_bundle(&n, g).unwrap();
            assert_eq!(x.chi(&x.class_of(g).unwrap()), QmodZ::from_rational(&-deg));
        }
    }

    #[test]
    fn minimal_lift_examples() {
        let x = AdmissibleMonoid::split(&[5]).x_group();
        for lam in x.x_m(5).unwrap().generators().iter().chain([&x.zero()]) {
            assert_eq!(x.minimal_lift(5, lam).unwrap().s_lambda, 0);
        }
        let z = x.minimal_lift(3, &x.zero()).unwrap();
        assert_eq!((z.s_lambda, z.w_lambda), (0, 0));
        assert!(z.n_lambda.iter().all(|v| v.is_zero()));
        let y = AdmissibleMonoid::split(&[2, 2]).x_group();
        let lam = y.class_of(&[q(1, 2), q(1, 2)]).unwrap();
        let ml = y.minimal_lift(1, &lam).unwrap();
        assert_eq!((ml.chi, ml.s_lambda, ml.w_lambda), (q(1, 1), 1, 0));
        let half = y.class_of(&[q(1, 2), q(0, 1)]).unwrap();
        assert_eq!(y.minimal_lift(1, &half), Err(MonoidError::NotInXm(1)));
    }

    #[test]
    fn coordinate_data_examples() {
        assert_eq!(monoid(&[&[(1, 2), (1, 2)]]).coordinate_data(), CoordinateData { r: vec![2, 2], m_sum: 1 });
        assert_eq!(AdmissibleMonoid::free(2).coordinate_data(), CoordinateData { r: vec![1, 1], m_sum: 1 });
        assert_eq!(AdmissibleMonoid::split(&[3, 2]).coordinate_data(), CoordinateData { r: vec![3, 2], m_sum: 6 });
    }

    #[test]
    fn join_examples() {
        let a = AdmissibleMonoid::split(&[2]);
        let b = AdmissibleMonoid::split(&[3]);
        assert_eq!(AdmissibleMonoid::join(&[a.clone(), b]).unwrap(), AdmissibleMonoid::split(&[6]));
        assert_eq!(AdmissibleMonoid::join(&[a.clone(), a.clone()]).unwrap(), a);
        let z = AdmissibleMonoid::free(1);
        assert_eq!(AdmissibleMonoid::join(&[z.clone(), z.clone()]).unwrap().x_group().order(), 1);
        let diag = monoid(&[&[(1, 2), (1, 2)]]);
        let j = AdmissibleMonoid::join(&[diag.clone(), AdmissibleMonoid::split(&[1, 3])]).unwrap();
        assert_eq!(j, AdmissibleMonoid::split(&[2, 6]));
        for g in diag.generators() {
            assert!(j.contains(g));
        }
    }

    #[test]
    fn coordinates_roundtrip_and_counts() {
        let n = monoid(&[&[(1, 2), (1, 3), (0, 1)], &[(1, 4), (0, 1), (5, 6)], &[(1, 6), (1, 6), (1, 6)]]);
        let x = n.x_group();
        let els = x.elements();
        assert_eq!(els.len() as u64, x.order());
        let distinct: HashSet<_> = els.iter().cloned().collect();
        assert_eq!(distinct.len(), els.len());
        for e in &els {
            assert_eq!(&x.from_coordinates(&x.coordinates(e)), e);
        }
        for mm in 1..=12 {
            let (total, want) = brute_xm(&n, mm);
            assert_eq!(total as u64, x.order());
            assert_eq!(x.x_m(mm as u64).unwrap().order(), want as u64, "m = {mm}");
        }
    }

    #[test]
    fn x_m_is_monotone_in_divisibility() {
        let n = monoid(&[&[(1, 4), (1, 6)], &[(1, 3), (0, 1)]]);
        let x = n.x_group();
        let kernel: Vec<_> = x.elements().into_iter().filter(|e| x.chi(e).is_zero()).collect();
        assert_eq!(x.x_m(1).unwrap().order(), kernel.len() as u64);
        for m in 1..=12u64 {
            for mult in 1..=3u64 {
                let small = x.x_m(m).unwrap();
                let big = x.x_m(m * mult).unwrap();
                assert_eq!(big.order() % small.order(), 0);
                for g in small.generators() {
                    assert!((x.chi(g).to_rational() * (m * mult) as i64).is_integer());
                }
            }
        }
    }
}
