use itertools::Itertools;

use super::edges::{constraint_set, MRow};
use crate::arith::{RMatrix, RVector, Rational};
use crate::cuts::CutPlane;
use crate::error::{Error, Result};
use crate::lp::LinearProgram;

/// A face named by `n - k` tight constraint indices (into [`constraint_set`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub Vec<usize>);

pub const MAX_MULTI_CUTS: usize = 2;

fn solve_face(m: &[MRow], n: usize, f: &FaceId, cuts: &[&CutPlane]) -> Result<RVector> {
    if cuts.len() > MAX_MULTI_CUTS || cuts.is_empty() {
        return Err(Error::InvalidArgument(format!("closed form takes 1 or 2 cuts, got {}", cuts.len())));
    }
    if f.0.len() + cuts.len() != n {
        return Err(Error::DimensionMismatch(format!("|F| = {} with {} cuts in dimension {n}", f.0.len(), cuts.len())));
    }
    let mut rows: Vec<Vec<Rational>> = f.0.iter().map(|&i| m[i].coeffs.to_vec()).collect();
    let mut rhs: Vec<Rational> = f.0.iter().map(|&i| m[i].rhs.clone()).collect();
    for c in cuts {
        if c.n() != n {
            return Err(Error::DimensionMismatch(format!("cut of length {} in dimension {n}", c.n())));
        }
        rows.push(c.alpha.to_vec());
        rhs.push(c.beta.clone());
    }
    RMatrix::from_rows(&rows)?.cramer_solve(&rhs).map_err(|_| Error::SingularAugmentedSystem)
}

/// Cramer solution of `A_F x = b_F` stacked with `alpha_j · x = beta_j`.
pub fn multi_closed_form(lp: &LinearProgram, f: &FaceId, cuts: &[CutPlane]) -> Result<RVector> {
    let refs: Vec<&CutPlane> = cuts.iter().collect();
    solve_face(&constraint_set(lp), lp.n(), f, &refs)
}

/// Every `(cut subset, face)` whose closed-form point equals `target`, found by
/// exhaustive search over subsets of the cuts and faces of matching size.
pub fn faces_through(lp: &LinearProgram, cuts: &[CutPlane], target: &[Rational]) -> Vec<(Vec<usize>, FaceId)> {
    let n = lp.n();
    let m = constraint_set(lp);
    let eq: Vec<usize> = (0..m.len()).filter(|&i| m[i].equality).collect();
    let free: Vec<usize> = (0..m.len()).filter(|&i| !m[i].equality).collect();
    let mut out = Vec::new();
    for k in 1..=cuts.len().min(MAX_MULTI_CUTS).min(n) {
        for subset in (0..cuts.len()).combinations(k) {
            let chosen: Vec<&CutPlane> = subset.iter().map(|&i| &cuts[i]).collect();
            if eq.len() > n - k {
                continue;
            }
            for pick in free.iter().copied().combinations(n - k - eq.len()) {
                let mut f: Vec<usize> = eq.iter().copied().chain(pick).collect();
                f.sort_unstable();
                let face = FaceId(f);
                if let Ok(x) = solve_face(&m, n, &face, &chosen) {
                    if &x[..] == target {
                        out.push((subset.clone(), face));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::ip::rng::{derive_seed, stream};
    use crate::lp::Constraint;
    use crate::sensitivity::edges::{closed_form, tests::triangle, EdgeId};
    use crate::sensitivity::verify::random_lp;
    use rand::Rng;

    #[test]
    fn single_cut_matches_edge_form() {
        let lp = triangle();
        let cut = CutPlane::new(RVector::new(vec![rat(1, 2), rat(1, 1)]), Rational::one());
        let single = multi_closed_form(&lp, &FaceId(vec![0]), &[cut.clone()]).unwrap();
        assert_eq!(single, closed_form(&lp, &EdgeId(vec![0]), &cut.alpha, &cut.beta).unwrap());
    }

    #[test]
    fn two_cuts_meet_in_the_plane() {
        let lp = triangle();
        let c1 = CutPlane::new(RVector::from_ints(&[1, 0]), rat(1, 2));
        let c2 = CutPlane::new(RVector::from_ints(&[1, 1]), rat(3, 4));
        let x = multi_closed_form(&lp, &FaceId(vec![]), &[c1, c2]).unwrap();
        assert_eq!(x, RVector::new(vec![rat(1, 2), rat(1, 4)]));
        let c3 = CutPlane::new(RVector::from_ints(&[2, 0]), Rational::one());
        let c4 = CutPlane::new(RVector::from_ints(&[1, 0]), Rational::one());
        assert_eq!(multi_closed_form(&lp, &FaceId(vec![]), &[c3, c4]), Err(Error::SingularAugmentedSystem));
    }

    #[test]
    fn random_three_dimensional_pairs_match_simplex() {
        let mut checked = 0;
        for s in 0..30u64 {
            let lp = random_lp(3, 3, 500 + s);
            let x_star = lp.solve().optimum().unwrap().vertex.clone();
            let mut rng = stream(derive_seed(s, 99));
            let cuts: Vec<CutPlane> = (0..2)
                .map(|_| {
                    let alpha: RVector = (0..3).map(|_| Rational::new(rng.gen_range(1..=8), 4)).collect();
                    let beta = &alpha.dot(&x_star) * &Rational::new(rng.gen_range(3..=7), 8);
                    CutPlane::new(alpha, beta)
                })
                .collect();
            if cuts.iter().all(|c| c.is_satisfied_by(&x_star)) {
                continue;
            }
            let cut_lp = lp.add_constraints(cuts.iter().map(|c| Constraint::le(c.alpha.clone(), c.beta.clone()))).unwrap();
            let Some(opt) = cut_lp.solve().optimum().cloned() else { continue };
            let found = faces_through(&lp, &cuts, &opt.vertex);
            assert!(!found.is_empty(), "seed {s}: no face reproduces {}", opt.vertex);
            checked += 1;
        }
        assert!(checked >= 20);
    }
}
