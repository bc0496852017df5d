const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of `g` on `[a, b]`.
///
/// Stops once the bracket is shorter than `tol` (absolute) or stops shrinking
/// in floating point. Returns the best abscissa seen, endpoints included.
pub fn golden_section_max(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut best = (lo, g(lo));
    let ghi = g(hi);
    if ghi > best.1 {
        best = (hi, ghi);
    }
    if hi - lo <= tol {
        return best;
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            if !(x1 > lo && x1 < x2) {
                break;
            }
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            if !(x2 > x1 && x2 < hi) {
                break;
            }
            f2 = g(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}
