//! Necessity degrees of order relations between fuzzy quantities.

use crate::fuzzy::LRFuzzyNumber;

/// `N(a >= f)`: the necessity that the fuzzy quantity `a` is at least `f`,
/// i.e. `1 - sup { mu_a(y) | y < f }`.
///
/// For an LR number this is 1 up to the left support edge, falls along the
/// left shoulder, and is 0 beyond the left peak. Consequently
/// `N(a >= f) >= eta` iff `f <= a0 - beta * L*(1 - eta)`.
pub fn necessity_geq_scalar(a: &LRFuzzyNumber, f: f64) -> f64 {
    if f > a.a0() {
        return 0.0;
    }
    if a.beta() == 0.0 || f <= a.a0() - a.beta() {
        return 1.0;
    }
    1.0 - a.left_ref().evaluate((a.a0() - f) / a.beta())
}

/// `N(a >= b)` for two fuzzy quantities, evaluated by grid search as
/// `inf_y max(1 - mu_a(y), Pos(b <= y))`.
///
/// Reduces to [`necessity_geq_scalar`] when `b` is crisp. `grid` is the
/// number of sample points across the union of both supports (at least 100);
/// the result is accurate to one grid step of membership variation.
pub fn necessity_geq_fuzzy(a: &LRFuzzyNumber, b: &LRFuzzyNumber, grid: usize) -> f64 {
    let grid = grid.max(100);
    let (sa, sb) = (a.support(), b.support());
    let lo = sa.lo.min(sb.lo);
    let hi = sa.hi.max(sb.hi);

    // Outside the union of supports 1 - mu_a(y) = 1, so only points inside
    // need to be visited. Peaks are added explicitly so degenerate shapes are
    // evaluated exactly.
    let step = (hi - lo) / (grid - 1) as f64;
    let samples = (0..grid)
        .map(|i| if i + 1 == grid { hi } else { lo + i as f64 * step })
        .chain([a.a0(), a.a1(), b.a0(), b.a1()]);

    samples
        .map(|y| (1.0 - a.membership(y)).max(possibility_leq(b, y)))
        .fold(1.0, f64::min)
}

/// `Pos(b <= y) = sup { mu_b(z) | z <= y }`.
fn possibility_leq(b: &LRFuzzyNumber, y: f64) -> f64 {
    if y >= b.a0() {
        1.0
    } else {
        b.membership(y)
    }
}
