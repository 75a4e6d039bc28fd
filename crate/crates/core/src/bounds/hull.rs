//! Lower convex hull of planar point sets and interpolation on it.

/// Vertices of the lower convex hull, sorted by abscissa. Points sharing an abscissa
/// keep only the lowest ordinate.
pub(crate) fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Linear interpolation on sorted hull vertices; `None` outside their range.
pub(crate) fn interpolate(hull: &[(f64, f64)], x: f64) -> Option<f64> {
    let first = hull.first()?;
    let last = hull.last()?;
    if x < first.0 || x > last.0 {
        return None;
    }
    let i = hull.partition_point(|p| p.0 < x);
    if i == 0 {
        return Some(first.1);
    }
    let (a, b) = (hull[i - 1], hull[i]);
    if b.0 == a.0 {
        return Some(a.1.min(b.1));
    }
    let t = (x - a.0) / (b.0 - a.0);
    Some(a.1 + t * (b.1 - a.1))
}
