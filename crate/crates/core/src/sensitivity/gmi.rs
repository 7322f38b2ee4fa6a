use super::arrangement::{SurfaceKind, SurfaceStore};
use super::poly::Poly;
use crate::arith::{RVector, Rational};
use crate::cuts::EqualityForm;
use crate::error::{Error, Result};

pub const GMI_HYPERPLANE_BUDGET: usize = 100_000;

/// Hyperplanes in multiplier space across which a floor `⌊u·a_i⌋`, `⌊u·b⌋`
/// or a comparison `f_i <= f_0` can change.
#[derive(Clone, Debug)]
pub struct GmiArrangement {
    pub store: SurfaceStore,
    /// Hyperplanes generated before deduplication.
    pub raw_count: usize,
    /// `n · U^2 · ‖A‖_1 · ‖b‖_1` with `‖A‖_1` the largest column 1-norm.
    pub count_scale: Rational,
}

impl GmiArrangement {
    pub fn sign_vector(&self, u: &[Rational]) -> Vec<i8> {
        self.store.sign_vector(u)
    }
}

fn levels(norm: &Rational, box_size: &Rational) -> std::ops::RangeInclusive<i64> {
    let r = (norm * box_size).floor().to_i64().unwrap_or(i64::MAX);
    -r..=r
}

/// The floor arrangement over `u ∈ [-U, U]^m` for the equality system of `eq`.
pub fn gmi_arrangement(eq: &EqualityForm, box_size: &Rational) -> Result<GmiArrangement> {
    if box_size.is_negative() {
        return Err(Error::InvalidArgument("negative box size".into()));
    }
    let m = eq.m();
    let cols: Vec<RVector> = (0..eq.ip.n()).map(|i| eq.column(i)).collect();
    let b = eq.rhs();
    let b_levels = levels(&b.norm_l1(), box_size);
    let b_span = (b_levels.end() - b_levels.start() + 1) as usize;
    let raw: usize = cols
        .iter()
        .map(|a| {
            let l = levels(&a.norm_l1(), box_size);
            let span = (l.end() - l.start() + 1) as usize;
            span + span * b_span
        })
        .sum::<usize>()
        + b_span;
    if raw > GMI_HYPERPLANE_BUDGET {
        return Err(Error::BudgetExceeded(format!("{raw} hyperplanes exceed the budget of {GMI_HYPERPLANE_BUDGET}")));
    }
    let names = (1..=m).map(|i| format!("u{i}")).collect();
    let mut store = SurfaceStore::new(names);
    let b_poly = Poly::linear(&b, Rational::zero());
    for k0 in b_levels.clone() {
        store.insert(&b_poly - &Poly::constant(m, Rational::from(k0)), SurfaceKind::Extra(format!("u.b={k0}")));
    }
    for (i, a) in cols.iter().enumerate() {
        let a_poly = Poly::linear(a, Rational::zero());
        let diff = &a_poly - &b_poly;
        for ki in levels(&a.norm_l1(), box_size) {
            store.insert(&a_poly - &Poly::constant(m, Rational::from(ki)), SurfaceKind::Extra(format!("u.a{}={ki}", i + 1)));
            for k0 in b_levels.clone() {
                store.insert(&diff - &Poly::constant(m, Rational::from(ki - k0)), SurfaceKind::Extra(format!("f{}=f0", i + 1)));
            }
        }
    }
    let a_norm = cols.iter().map(RVector::norm_l1).max().unwrap_or_else(Rational::zero);
    let count_scale = Rational::from(cols.len()) * box_size * box_size * a_norm * b.norm_l1();
    Ok(GmiArrangement { store, raw_count: raw, count_scale })
}

/// `(⌊u·a_i⌋ for each column, ⌊u·b⌋, [f_i <= f_0] for each column)`.
pub fn gmi_floor_signature(eq: &EqualityForm, u: &[Rational]) -> (Vec<Rational>, Rational, Vec<bool>) {
    let b = eq.rhs().dot(u);
    let f0 = b.fract();
    let mut floors = Vec::with_capacity(eq.ip.n());
    let mut below = Vec::with_capacity(eq.ip.n());
    for i in 0..eq.ip.n() {
        let v = eq.column(i).dot(u);
        below.push(v.fract() <= f0);
        floors.push(v.floor());
    }
    (floors, b.floor(), below)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cuts::to_equality_form;
    use crate::ip::gen_jeroslow;

    #[test]
    fn jeroslow_levels() {
        let eq = to_equality_form(&gen_jeroslow(3, Rational::zero()).unwrap());
        let arr = gmi_arrangement(&eq, &Rational::one()).unwrap();
        // u·a_i = k for k in [-2, 2]; u·b = k0 for k0 in [-3, 3]; u·(a_i - b) = k - k0.
        let points: Vec<Rational> = arr
            .store
            .surfaces
            .iter()
            .map(|s| {
                let c = s.poly.coefficient(&[1]);
                -s.poly.coefficient(&[0]) / c
            })
            .collect();
        let mut points = points;
        points.sort();
        points.dedup();
        for k in -2..=2 {
            assert!(points.contains(&rat(k, 2)));
        }
        for k in -3..=3 {
            assert!(points.contains(&rat(k, 3)));
        }
        assert!(!points.contains(&rat(3, 2)));
    }

    #[test]
    fn same_cell_same_floors() {
        let eq = to_equality_form(&gen_jeroslow(3, Rational::zero()).unwrap());
        let arr = gmi_arrangement(&eq, &Rational::one()).unwrap();
        let u = [rat(1, 10)];
        let v = [rat(3, 20)];
        assert_eq!(arr.sign_vector(&u), arr.sign_vector(&v));
        assert_eq!(gmi_floor_signature(&eq, &u), gmi_floor_signature(&eq, &v));
    }

    #[test]
    fn zero_box() {
        let eq = to_equality_form(&gen_jeroslow(3, Rational::zero()).unwrap());
        let arr = gmi_arrangement(&eq, &Rational::zero()).unwrap();
        let (floors, fb, _) = gmi_floor_signature(&eq, &[Rational::zero()]);
        assert!(floors.iter().all(Rational::is_zero) && fb.is_zero());
        assert!(arr.store.len() <= 1);
    }

    #[test]
    fn budget() {
        let eq = to_equality_form(&gen_jeroslow(3, Rational::zero()).unwrap());
        assert!(matches!(gmi_arrangement(&eq, &Rational::from(1000)), Err(Error::BudgetExceeded(_))));
    }
}
