//! Lower convex envelope of achievable `(I(Y;U), H(X|U))` points.
//!
//! Any chord between two achievable points is itself achievable: let a fair
//! coin, independent of everything, pick which channel is used and reveal it
//! as part of `U`. Both quantities then mix linearly.

#[derive(Clone, Debug)]
pub(crate) struct Point {
    pub rate: f64,
    pub value: f64,
    pub w: Vec<f64>,
    pub k: usize,
    pub converged: bool,
}

/// Andrew's monotone chain, lower half, on `(rate, value)`.
pub(crate) fn lower_hull(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].rate.total_cmp(&points[b].rate).then(points[a].value.total_cmp(&points[b].value)));
    let cross = |o: &Point, a: &Point, b: &Point| {
        (a.rate - o.rate) * (b.value - o.value) - (a.value - o.value) * (b.rate - o.rate)
    };
    let mut hull: Vec<usize> = Vec::new();
    for i in idx {
        if let Some(&last) = hull.last() {
            if points[last].rate == points[i].rate {
                continue;
            }
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(&points[a], &points[b], &points[i]) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Channel that uses `a` with probability `theta` and `b` otherwise, with the
/// choice written into disjoint label ranges.
pub(crate) fn mix(a: &Point, b: &Point, theta: f64, l: usize) -> (Vec<f64>, usize) {
    let k = a.k + b.k;
    let mut w = vec![0.0; l * k];
    for y in 0..l {
        for u in 0..a.k {
            w[y * k + u] = theta * a.w[y * a.k + u];
        }
        for u in 0..b.k {
            w[y * k + a.k + u] = (1.0 - theta) * b.w[y * b.k + u];
        }
    }
    (w, k)
}

/// Best envelope value at `budget`: either a single feasible point or a chord
/// across the budget. Returns `(a, Some((b, θ)))` for a chord.
pub(crate) fn best_at(points: &[Point], budget: f64, feas_tol: f64) -> (usize, Option<(usize, f64)>) {
    let single = (0..points.len())
        .filter(|&i| points[i].rate <= budget + feas_tol)
        .min_by(|&a, &b| points[a].value.total_cmp(&points[b].value).then(points[a].rate.total_cmp(&points[b].rate)))
        .expect("the constant channel is always feasible");
    let hull = lower_hull(points);
    let mut best = (single, None, points[single].value);
    for pair in hull.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (pa, pb) = (&points[a], &points[b]);
        if pa.rate <= budget && pb.rate > budget + feas_tol {
            let theta = (pb.rate - budget) / (pb.rate - pa.rate);
            let v = theta * pa.value + (1.0 - theta) * pb.value;
            if v < best.2 {
                best = (a, Some((b, theta)), v);
            }
        }
    }
    (best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(rate: f64, value: f64) -> Point {
        Point { rate, value, w: vec![], k: 0, converged: true }
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = vec![pt(0.0, 1.0), pt(0.5, 0.9), pt(1.0, 0.0), pt(0.2, 0.95)];
        // (0.5, 0.9) lies above the chord from (0,1) to (1,0)
        assert_eq!(lower_hull(&pts), vec![0, 2]);
    }

    #[test]
    fn chord_beats_points() {
        let pts = vec![pt(0.0, 1.0), pt(0.5, 0.9), pt(1.0, 0.0)];
        let (a, chord) = best_at(&pts, 0.5, 1e-12);
        let (b, theta) = chord.unwrap();
        assert_eq!((a, b), (0, 2));
        assert!((theta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn feasible_point_at_budget() {
        let pts = vec![pt(0.0, 1.0), pt(0.5, 0.2), pt(1.0, 0.0)];
        let (a, chord) = best_at(&pts, 0.5, 1e-12);
        assert_eq!(a, 1);
        assert!(chord.is_none());
    }
}
